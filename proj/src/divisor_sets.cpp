#include "ddfx/divisor_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddfx {

namespace {

constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 24;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw PairError("progression cardinality overflows 64 bits");
  }
  return a * b;
}

// (prime, exponent) pairs of |d| restricted to primes <= bound.
class SmallPrimeFactorer {
 public:
  SmallPrimeFactorer(std::uint64_t bound, const mpz_class& max_value) : bound_(bound) {
    auto mv = to_u64(max_value);
    if (mv && *mv <= kSieveLimit) sieve_ = FactorSieve::shared(std::max<std::uint64_t>(*mv, 2));
  }

  std::vector<std::pair<std::uint64_t, int>> operator()(const mpz_class& d) {
    std::vector<std::pair<std::uint64_t, int>> out;
    auto push = [&](std::uint64_t p) {
      if (!out.empty() && out.back().first == p) {
        ++out.back().second;
      } else {
        out.emplace_back(p, 1);
      }
    };
    auto small = to_u64(d);
    if (sieve_ && small && *small <= sieve_->limit()) {
      for (auto p : sieve_->factor(*small)) {
        if (p <= bound_) push(p);
      }
      return out;
    }
    if (primes_.empty()) primes_ = primes_up_to(bound_);
    if (small) {
      std::uint64_t v = *small;
      for (auto p : primes_) {
        if (p > v / p) break;
        while (v % p == 0) {
          push(p);
          v /= p;
        }
      }
      if (v > 1 && v <= bound_) push(v);
      return out;
    }
    mpz_class m = d;
    for (auto p : primes_) {
      while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        push(p);
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      }
      if (mpz_cmp_ui(m.get_mpz_t(), p) < 0 || m / p < p) break;
    }
    if (m > 1 && m.fits_ulong_p() && m.get_ui() <= bound_) push(m.get_ui());
    return out;
  }

 private:
  std::uint64_t bound_;
  std::shared_ptr<const FactorSieve> sieve_;
  std::vector<std::uint64_t> primes_;
};

template <class Visit>
void for_each_divisor(const std::vector<std::pair<std::uint64_t, int>>& pf, std::size_t k,
                      std::uint64_t acc, std::uint64_t bound, Visit& visit) {
  if (k == pf.size()) {
    visit(acc);
    return;
  }
  std::uint64_t v = acc;
  for (int e = 0; e <= pf[k].second; ++e) {
    for_each_divisor(pf, k + 1, v, bound, visit);
    if (e == pf[k].second || v > bound / pf[k].first) break;
    v *= pf[k].first;
  }
}

// ln lcm(1, ..., n).
double log_lcm(std::uint64_t n) {
  double acc = 0;
  for (auto p : primes_up_to(n)) {
    std::uint64_t pk = p;
    while (pk <= n / p) pk *= p;
    acc += std::log(static_cast<double>(pk));
  }
  return acc;
}

double log_mpz(const mpz_class& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

std::uint64_t magnitude_bits(std::uint64_t n, const Rational& alpha) {
  double bits = std::ceil(std::exp(alpha.to_double() * std::log(static_cast<double>(n))) *
                          1.4426950408889634) + 1;
  if (bits > 1e18) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(bits);
}

}  // namespace

std::vector<mpz_class> ArithProgression::elements() const {
  std::vector<mpz_class> out;
  out.reserve(length);
  mpz_class v = base;
  for (std::uint64_t i = 0; i < length; ++i, v += step) out.push_back(v);
  return out;
}

void ArithProgression::validate() const {
  if (base < 0) throw PairError("progression base must be nonnegative");
  if (step <= 0) throw PairError("progression step must be positive");
  if (length == 0) throw PairError("progression length must be positive");
}

std::uint64_t GenArithProgression::size() const {
  std::uint64_t n = 1;
  for (const auto& t : terms) n = checked_mul(n, t.length);
  return n;
}

mpz_class GenArithProgression::max_element() const {
  mpz_class m = 0;
  for (const auto& t : terms) m += t.last();
  return m;
}

std::vector<mpz_class> GenArithProgression::elements() const {
  std::vector<mpz_class> out{mpz_class(0)};
  for (const auto& t : terms) {
    std::vector<mpz_class> next;
    next.reserve(out.size() * t.length);
    // Earlier terms vary fastest.
    const auto vals = t.elements();
    for (const auto& v : vals) {
      for (const auto& o : out) next.push_back(o + v);
    }
    out.swap(next);
  }
  return out;
}

void GenArithProgression::validate() const {
  if (terms.empty()) throw PairError("a progression needs at least one term");
  for (const auto& t : terms) t.validate();
  (void)size();
}

VerificationReport verify_divisor_property(const std::vector<mpz_class>& s_enum,
                                           const std::vector<mpz_class>& t_enum,
                                           std::uint64_t n) {
  VerificationReport rep;
  rep.witness.assign(n + 1, VerificationReport::kNoWitness);
  mpz_class max_diff = 0;
  for (const auto& s : s_enum) {
    for (const auto& t : {*std::min_element(t_enum.begin(), t_enum.end()),
                          *std::max_element(t_enum.begin(), t_enum.end())}) {
      max_diff = std::max<mpz_class>(max_diff, abs(s - t));
    }
  }
  SmallPrimeFactorer factorer(n, max_diff);
  std::uint64_t remaining = n;
  const std::uint64_t ns = s_enum.size();
  auto mark = [&](std::uint64_t idx) {
    return [&rep, &remaining, idx](std::uint64_t v) {
      if (rep.witness[v] == VerificationReport::kNoWitness) {
        rep.witness[v] = idx;
        --remaining;
      }
    };
  };
  for (std::uint64_t l = 0; l < t_enum.size() && remaining > 0; ++l) {
    for (std::uint64_t j = 0; j < ns && remaining > 0; ++j) {
      mpz_class d = abs(s_enum[j] - t_enum[l]);
      if (d == 0) continue;
      auto visit = mark(j + l * ns);
      for_each_divisor(factorer(d), 0, 1, n, visit);
    }
  }
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (rep.witness[i] == VerificationReport::kNoWitness) rep.uncovered.push_back(i);
  }
  rep.verified = rep.uncovered.empty();
  return rep;
}

VerificationReport verify_divisor_property(const DivisorSetPair& pair) {
  return verify_divisor_property(pair.s_enum(), pair.t_enum(), pair.n());
}

DivisorSetPair::DivisorSetPair(GenArithProgression S, GenArithProgression T, std::uint64_t n,
                               Rational alpha, Rational beta, FactorSource source,
                               std::shared_ptr<const FactorTable> table)
    : S_(std::move(S)),
      T_(std::move(T)),
      n_(n),
      alpha_(alpha),
      beta_(beta),
      source_(source),
      table_(std::move(table)) {
  validate_shape();
  if (table_) {
    for (std::uint64_t i = 0; i < pair_count(); ++i) {
      const mpz_class d = difference(i);
      if (d == 0) continue;
      auto it = table_->find(i);
      if (it == table_->end()) {
        throw PairError("factorization table has no entry for index " + std::to_string(i));
      }
      mpz_class prod = 1;
      for (const auto& p : it->second) {
        if (!is_prime(p)) throw PairError("table entry " + p.get_str() + " is not prime");
        prod *= p;
      }
      if (prod != d) {
        throw PairError("table entry for index " + std::to_string(i) + " does not multiply to " +
                        d.get_str());
      }
    }
  }
  const VerificationReport& rep = report();
  verified_ = rep.verified;
  if (verified_ && n_ >= 64) {
    // lcm(1..n) divides the product of the nonzero differences.
    mpz_class max_diff = 0;
    std::uint64_t nonzero = 0;
    for (std::uint64_t i = 0; i < pair_count(); ++i) {
      mpz_class d = difference(i);
      if (d == 0) continue;
      ++nonzero;
      if (d > max_diff) max_diff = d;
    }
    if (log_lcm(n_) > static_cast<double>(nonzero) * log_mpz(max_diff) * (1 + 1e-9)) {
      throw std::logic_error("verified pair violates the magnitude necessity bound");
    }
  }
}

DivisorSetPair::DivisorSetPair(GenArithProgression S, GenArithProgression T, std::uint64_t n,
                               Rational alpha, Rational beta, FactorSource source,
                               CoveringByConstruction)
    : S_(std::move(S)),
      T_(std::move(T)),
      n_(n),
      alpha_(alpha),
      beta_(beta),
      source_(source),
      verified_(true) {
  if (source_ == FactorSource::Table) throw PairError("a Table source needs a table");
  validate_shape();
}

void DivisorSetPair::validate_shape() {
  if (n_ == 0) throw PairError("n must be positive");
  S_.validate();
  T_.validate();
  const std::uint64_t card = ceil_pow(n_, beta_) + 1;
  if (S_.size() > card || T_.size() > card) {
    throw PairError("|S| = " + std::to_string(S_.size()) + ", |T| = " +
                    std::to_string(T_.size()) + " exceed the bound " + std::to_string(card));
  }
  const std::uint64_t bits = magnitude_bits(n_, alpha_);
  for (const auto* g : {&S_, &T_}) {
    if (mpz_sizeinbase(g->max_element().get_mpz_t(), 2) > bits) {
      throw PairError("element magnitude exceeds " + std::to_string(bits) + " bits");
    }
  }
  if ((source_ == FactorSource::Table) != static_cast<bool>(table_)) {
    throw PairError("a factorization table must come with the Table source");
  }
  s_ = S_.elements();
  t_ = T_.elements();
}

const VerificationReport& DivisorSetPair::report() const {
  std::call_once(report_->once,
                 [this] { report_->report = verify_divisor_property(s_, t_, n_); });
  return report_->report;
}

std::pair<mpz_class, mpz_class> DivisorSetPair::at(std::uint64_t i) const {
  if (i >= pair_count()) {
    throw RangeError("pair index " + std::to_string(i) + " out of range");
  }
  return {s_[i % s_.size()], t_[i / s_.size()]};
}

mpz_class DivisorSetPair::difference(std::uint64_t i) const {
  auto [s, t] = at(i);
  return abs(s - t);
}

std::pair<ArithProgression, ArithProgression> split_progression(const ArithProgression& A,
                                                                std::uint64_t n,
                                                                const Rational& beta) {
  A.validate();
  const std::uint64_t m = ceil_pow(n, beta);
  if (m <= 1) return {A, ArithProgression{0, 1, 1}};
  const std::uint64_t L = A.length;
  if (L - 1 > m * m) {
    throw PairError("progression of length " + std::to_string(L) + " is too long to split with m = " +
                    std::to_string(m));
  }
  ArithProgression S{A.base, A.step * from_u64(m), (L - 1 + m - 1) / m + 1};
  ArithProgression T{0, A.step, std::min(m, L - 1) + 1};
  return {S, T};
}

DivisorSetPair trivial_pair(std::uint64_t n) {
  const Rational half = Rational::make(1, 2);
  auto [S, T] = split_progression(ArithProgression{1, 1, n}, n, half);
  return DivisorSetPair(GenArithProgression(S), GenArithProgression(T), n, half, half,
                        FactorSource::Computed, DivisorSetPair::CoveringByConstruction{});
}

std::pair<mpz_class, mpz_class> enumerate_index(const DivisorSetPair& pair, std::uint64_t i) {
  return pair.at(i);
}

std::vector<mpz_class> pair_factorization(const DivisorSetPair& pair, std::uint64_t i) {
  const mpz_class d = pair.difference(i);
  if (d == 0) throw std::domain_error("s = t at pair index " + std::to_string(i));
  if (pair.table()) return pair.table()->at(i);
  std::vector<mpz_class> out;
  if (auto v = to_u64(d); v && *v <= kSieveLimit) {
    for (auto p : FactorSieve::shared(*v)->factor(*v)) out.push_back(from_u64(p));
    return out;
  }
  return factor_mpz(d);
}

std::vector<std::uint64_t> pair_smooth_factors(const DivisorSetPair& pair, std::uint64_t i,
                                               std::uint64_t bound) {
  const mpz_class d = pair.difference(i);
  if (d == 0) throw std::domain_error("s = t at pair index " + std::to_string(i));
  std::vector<std::uint64_t> out;
  if (pair.table()) {
    for (const auto& p : pair.table()->at(i)) {
      if (p <= bound) out.push_back(p.get_ui());
    }
    return out;
  }
  return smooth_factors(d, bound);
}

GenArithProgression combine_progressions(const ArithProgression& A1,
                                         const ArithProgression& A2) {
  A1.validate();
  A2.validate();
  const mpz_class& c1 = A1.step;
  const mpz_class& c2 = A2.step;
  // With A_k = {b_k + i*c_k : 1 <= i <= l_k}, i.e. b_k = base_k - c_k:
  // c2*(b1 + i*c1) = c1*b2 + i*c1*c2 + D and c1*(b2 + i*c2) = c1*b2 + i*c1*c2.
  const mpz_class b1 = A1.base - c1;
  const mpz_class b2 = A2.base - c2;
  const mpz_class D = c2 * b1 - c1 * b2;
  const std::uint64_t len = std::max(A1.length, A2.length);
  ArithProgression first{c1 * A2.base, c1 * c2, len};
  ArithProgression second{0, 1, 1};
  if (D > 0) {
    second = ArithProgression{0, D, 2};
  } else if (D < 0) {
    first.base = c2 * A1.base;
    second = ArithProgression{0, -D, 2};
  }
  return GenArithProgression(std::vector<ArithProgression>{first, second});
}

mpz_class primorial(std::uint64_t n) {
  mpz_class u;
  mpz_primorial_ui(u.get_mpz_t(), n);
  return u;
}

bool prime_case_check(const PrimeCaseCertificate& cert) {
  const mpz_class U = primorial(cert.n);
  mpz_class prod = 1;
  for (std::size_t i = 0; i < cert.parts.size(); ++i) {
    if (cert.parts[i] <= 0) throw PairError("certificate parts must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (gcd(cert.parts[i], cert.parts[j]) != 1) {
        throw PairError("certificate parts are not pairwise coprime");
      }
    }
    prod *= cert.parts[i];
  }
  if (prod != U) {
    throw PairError("certificate parts multiply to " + prod.get_str() + ", expected " +
                    U.get_str());
  }
  mpz_class sum = 0;
  for (std::size_t i = 0; i < cert.parts.size(); ++i) {
    const mpz_class& Ui = cert.parts[i];
    if (Ui == 1) continue;
    const mpz_class co = U / Ui;
    mpz_class Ti;
    mpz_invert(Ti.get_mpz_t(), mpz_class(co % Ui).get_mpz_t(), Ui.get_mpz_t());
    sum += from_u64(i + 1) * co * Ti;
  }
  mpz_class r = cert.c * sum + cert.b;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), U.get_mpz_t());
  const bool ok = r == 0;
  if (ok) {
    for (std::size_t i = 0; i < cert.parts.size(); ++i) {
      const mpz_class term = cert.b + from_u64(i + 1) * cert.c;
      if (gcd(term, cert.parts[i]) != cert.parts[i]) {
        throw std::logic_error("congruence holds but part " + cert.parts[i].get_str() +
                               " does not divide " + term.get_str());
      }
    }
  }
  return ok;
}

ArithProgression ApSearchHit::progression() const {
  return ArithProgression{from_u64(b + c), from_u64(c), len};
}

std::vector<ApSearchHit> search_ap(const ApSearchBounds& bd) {
  if (bd.n == 0 || bd.max_c == 0 || bd.max_len == 0) {
    throw std::invalid_argument("search bounds must be positive");
  }
  const long double grid = static_cast<long double>(bd.max_b + 1) * bd.max_c * bd.max_len;
  if (grid > kSearchBudget) {
    throw BudgetExceeded("search grid of " + std::to_string(static_cast<double>(grid)) +
                         " steps exceeds the budget of " + std::to_string(kSearchBudget));
  }
  const std::uint64_t max_elem = bd.max_b + bd.max_c * bd.max_len;
  SmallPrimeFactorer factorer(bd.n, from_u64(max_elem));
  std::uint64_t targets = 0;
  std::vector<bool> is_target(bd.n + 1, !bd.primes_only);
  if (bd.primes_only) {
    for (auto p : primes_up_to(bd.n)) is_target[p] = true;
  }
  is_target[0] = false;
  targets = static_cast<std::uint64_t>(std::count(is_target.begin(), is_target.end(), true));

  std::vector<std::uint32_t> stamp(bd.n + 1, 0);
  std::uint32_t round = 0;
  std::vector<ApSearchHit> hits;
  for (std::uint64_t b = 0; b <= bd.max_b; ++b) {
    for (std::uint64_t c = 1; c <= bd.max_c; ++c) {
      ++round;
      std::uint64_t covered = 0;
      auto visit = [&](std::uint64_t v) {
        if (is_target[v] && stamp[v] != round) {
          stamp[v] = round;
          ++covered;
        }
      };
      for (std::uint64_t len = 1; len <= bd.max_len; ++len) {
        if (covered < targets) {
          const std::uint64_t e = b + len * c;
          auto pf = factorer(from_u64(e));
          if (bd.primes_only) {
            for (auto [p, k] : pf) visit(p);
          } else {
            for_each_divisor(pf, 0, 1, bd.n, visit);
          }
        }
        if (covered == targets) hits.push_back({b, c, len});
      }
    }
  }
  return hits;
}

}  // namespace ddfx
