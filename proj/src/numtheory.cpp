#include "ddfx/numtheory.hpp"

#include <charconv>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace ddfx {

Rational Rational::make(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n < 0) throw std::invalid_argument("rational must be nonnegative");
  const std::int64_t g = std::gcd(n, d);
  return Rational{n / (g ? g : 1), d / (g ? g : 1)};
}

Rational Rational::parse(const std::string& s) {
  auto num_of = [&](std::string_view t) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size()) {
      throw std::invalid_argument("malformed rational '" + s + "'");
    }
    return v;
  };
  std::string_view sv(s);
  auto slash = sv.find('/');
  if (slash == std::string_view::npos) return make(num_of(sv), 1);
  return make(num_of(sv.substr(0, slash)), num_of(sv.substr(slash + 1)));
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::uint64_t ceil_pow(std::uint64_t n, const Rational& beta) {
  if (n == 0) return beta.num == 0 ? 1 : 0;
  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), n, static_cast<unsigned long>(beta.num));
  auto ge = [&](std::uint64_t k) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), k, static_cast<unsigned long>(beta.den));
    return v >= target;
  };
  double guess = std::ceil(std::exp(beta.to_double() * std::log(static_cast<double>(n))));
  std::uint64_t k = guess < 1 ? 1 : static_cast<std::uint64_t>(guess);
  while (k > 0 && ge(k - 1)) --k;
  while (!ge(k)) ++k;
  return k;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

FactorSieve::FactorSieve(std::uint64_t limit) : limit_(limit), spf_(limit + 1, 0) {
  if (limit > (std::uint64_t{1} << 31)) throw std::invalid_argument("sieve limit too large");
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::shared_ptr<const FactorSieve> FactorSieve::shared(std::uint64_t limit) {
  static std::mutex mu;
  static std::shared_ptr<const FactorSieve> table;
  std::lock_guard<std::mutex> lock(mu);
  if (!table || table->limit() < limit) {
    std::uint64_t grown = std::max<std::uint64_t>(limit, table ? 2 * table->limit() : 1 << 16);
    table = std::make_shared<const FactorSieve>(grown);
  }
  return table;
}

std::vector<std::uint64_t> FactorSieve::factor(std::uint64_t n) const {
  if (n == 0 || n > limit_) throw std::out_of_range("value outside sieve range");
  std::vector<std::uint64_t> out;
  while (n > 1) {
    std::uint64_t p = spf_[n];
    out.push_back(p);
    n /= p;
  }
  return out;
}

std::vector<std::uint64_t> factor_u64(std::uint64_t n) {
  if (n == 0) throw std::domain_error("cannot factor zero");
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  // Wheel over residues coprime to 30.
  static constexpr std::uint64_t kGaps[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  std::uint64_t d = 7;
  for (int i = 0; d <= n / d; d += kGaps[i], i = (i + 1) & 7) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<mpz_class> factor_mpz(const mpz_class& n) {
  mpz_class m = abs(n);
  if (m == 0) throw std::domain_error("cannot factor zero");
  std::vector<mpz_class> out;
  if (auto small = to_u64(m)) {
    for (auto p : factor_u64(*small)) out.push_back(from_u64(p));
    return out;
  }
  mpz_class d = 2;
  while (d * d <= m) {
    while (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t())) {
      out.push_back(d);
      m /= d;
    }
    d += (d == 2) ? 1 : 2;
  }
  if (m > 1) out.push_back(m);
  return out;
}

std::vector<std::uint64_t> smooth_factors(const mpz_class& n, std::uint64_t bound) {
  mpz_class m = abs(n);
  if (m == 0) throw std::domain_error("cannot factor zero");
  std::vector<std::uint64_t> out;
  if (auto small = to_u64(m)) {
    std::uint64_t v = *small;
    if (v <= (std::uint64_t{1} << 22)) {
      for (auto p : FactorSieve::shared(v)->factor(v)) {
        if (p <= bound) out.push_back(p);
      }
      return out;
    }
    for (std::uint64_t d = 2; d <= bound && d <= v / d; d += (d == 2 ? 1 : 2)) {
      while (v % d == 0) {
        out.push_back(d);
        v /= d;
      }
    }
    if (v > 1 && v <= bound) out.push_back(v);
    return out;
  }
  std::uint64_t d = 2;
  for (; d <= bound && !m.fits_ulong_p(); d += (d == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), d)) {
      out.push_back(d);
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), d);
    }
  }
  if (d > bound) return out;
  // The cofactor fits a word now; its factors are all >= d.
  for (auto p : smooth_factors(m, bound)) out.push_back(p);
  return out;
}

std::optional<std::uint64_t> to_u64(const mpz_class& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) return std::nullopt;
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

mpz_class from_u64(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return z;
}

std::uint64_t isqrt(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

bool is_prime(const mpz_class& n) {
  if (auto v = to_u64(n)) return is_prime_u64(*v);
  if (n < 2) return false;
  // Beyond 64 bits fall back to exhaustive trial division.
  mpz_class d = 2;
  while (d * d <= n) {
    if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) return false;
    d += (d == 2) ? 1 : 2;
  }
  return true;
}

}  // namespace ddfx
