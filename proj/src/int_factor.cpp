#include "ddfx/int_factor.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ddfx/subproduct_tree.hpp"

namespace ddfx {

namespace {

constexpr std::size_t kKroneckerCutoff = 24;

int bit_length(unsigned __int128 v) {
  int b = 0;
  while (v) {
    ++b;
    v >>= 1;
  }
  return b;
}

// S and T as machine words when every element fits, so that signs of
// differences can be decided without big-integer compares.
struct PairWords {
  bool fits = true;
  bool t_sorted = true;
  std::vector<std::uint64_t> s, t;

  explicit PairWords(const DivisorSetPair& pair) {
    for (const auto* src : {&pair.s_enum(), &pair.t_enum()}) {
      auto& dst = src == &pair.s_enum() ? s : t;
      for (const auto& v : *src) {
        auto w = to_u64(v);
        if (!w) {
          fits = false;
          s.clear();
          t.clear();
          return;
        }
        dst.push_back(*w);
      }
    }
    t_sorted = std::is_sorted(t.begin(), t.end());
  }
};

int compare(const DivisorSetPair& pair, const PairWords& words, std::uint64_t j, std::uint64_t l) {
  if (words.fits) return (words.s[j] > words.t[l]) - (words.s[j] < words.t[l]);
  return cmp(pair.s_enum()[j], pair.t_enum()[l]);
}

class IntInterval {
 public:
  IntInterval(std::uint64_t d, const DivisorSetPair& pair, const PairWords& words,
              const Residues& res)
      : ring_(d), pair_(pair), words_(words) {
    if (d == 0 || res.modulus % d != 0) {
      throw std::invalid_argument("residues are not taken modulo a multiple of d");
    }
    for (auto v : res.s) s_.push_back(v % d);
    for (auto v : res.t) t_.push_back(v % d);
  }

  std::uint64_t direct(std::uint64_t lo, std::uint64_t hi) const {
    const std::uint64_t ns = s_.size();
    std::uint64_t acc = ring_.one();
    for (std::uint64_t i = lo; i <= hi && acc != 0; ++i) {
      const std::uint64_t j = i % ns, l = i / ns;
      const int c = compare(pair_, words_, j, l);
      if (c == 0) continue;
      acc = ring_.mul(acc, c > 0 ? ring_.sub(s_[j], t_[l]) : ring_.sub(t_[l], s_[j]));
    }
    return acc;
  }

  std::uint64_t bsgs(std::uint64_t lo, std::uint64_t hi) const {
    const std::uint64_t ns = s_.size();
    const std::uint64_t a1 = lo / ns, b1 = hi / ns;
    if (a1 == b1) return direct(lo, hi);
    std::uint64_t acc = direct(lo, (a1 + 1) * ns - 1);
    if (b1 > a1 + 1 && acc != 0) acc = ring_.mul(acc, middle(a1 + 1, b1 - 1));
    if (acc != 0) acc = ring_.mul(acc, direct(b1 * ns, hi));
    return acc;
  }

 private:
  std::uint64_t middle(std::uint64_t l0, std::uint64_t l1) const {
    using Poly = ring_poly::Poly<ZmodRing>;
    std::span<const std::uint64_t> roots(t_.data() + l0, l1 - l0 + 1);
    Poly p = ring_poly::from_roots(ring_, roots);
    std::vector<std::uint64_t> vals = ring_poly::multipoint_eval(ring_, p, s_);
    bool negative = false;
    for (std::size_t j = 0; j < s_.size(); ++j) {
      std::uint64_t above = 0;
      std::vector<std::uint64_t> equal;
      if (words_.fits && words_.t_sorted) {
        auto first = words_.t.begin() + static_cast<std::ptrdiff_t>(l0);
        auto last = words_.t.begin() + static_cast<std::ptrdiff_t>(l1) + 1;
        auto [eb, ee] = std::equal_range(first, last, words_.s[j]);
        above = static_cast<std::uint64_t>(last - ee);
        for (auto it = eb; it != ee; ++it) equal.push_back(static_cast<std::uint64_t>(it - words_.t.begin()));
      } else {
        for (std::uint64_t l = l0; l <= l1; ++l) {
          const int c = compare(pair_, words_, j, l);
          if (c < 0) ++above;
          if (c == 0) equal.push_back(l);
        }
      }
      if (above & 1) negative = !negative;
      if (equal.empty()) continue;
      Poly quo = p;
      for (auto l : equal) quo = synthetic_div(quo, t_[l]);
      vals[j] = ring_poly::horner(ring_, quo, s_[j]);
    }
    std::uint64_t acc = ring_.one();
    for (auto v : vals) acc = ring_.mul(acc, v);
    return negative ? ring_.neg(acc) : acc;
  }

  ring_poly::Poly<ZmodRing> synthetic_div(const ring_poly::Poly<ZmodRing>& p, std::uint64_t r) const {
    ring_poly::Poly<ZmodRing> q(p.size() - 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
      carry = ring_.add(p[i + 1], ring_.mul(carry, r));
      q[i] = carry;
    }
    return q;
  }

  ZmodRing ring_;
  const DivisorSetPair& pair_;
  const PairWords& words_;
  std::vector<std::uint64_t> s_, t_;
};

// Products of whole columns l (all j, fixed t_l) taken once modulo N, with a
// product tree over columns so that any interval product mod N costs two
// partial columns plus O(log |T|) multiplications.
class ColumnProducts {
 public:
  ColumnProducts(std::uint64_t N, const DivisorSetPair& pair, const PairWords& words,
                 const Residues& res)
      : ring_(N), pair_(pair), words_(words), s_(res.s), t_(res.t) {
    using Poly = ring_poly::Poly<ZmodRing>;
    const Poly F = ring_poly::from_roots(ring_, std::span<const std::uint64_t>(s_));
    std::vector<std::uint64_t> cols = ring_poly::multipoint_eval(ring_, F, t_);
    const bool s_sorted = words_.fits && std::is_sorted(words_.s.begin(), words_.s.end());
    for (std::size_t l = 0; l < t_.size(); ++l) {
      // F(t_l) = prod (t_l - s_j); flip once per s_j above t_l.
      std::uint64_t below = 0, equal = 0;
      if (s_sorted) {
        auto [eb, ee] = std::equal_range(words_.s.begin(), words_.s.end(), words_.t[l]);
        below = static_cast<std::uint64_t>(eb - words_.s.begin());
        equal = static_cast<std::uint64_t>(ee - eb);
      } else {
        for (std::size_t j = 0; j < s_.size(); ++j) {
          const int c = compare(pair_, words_, j, l);
          if (c < 0) ++below;
          if (c == 0) ++equal;
        }
      }
      const std::uint64_t above = s_.size() - below - equal;
      if (equal > 0) {
        Poly quo = F;
        for (std::uint64_t k = 0; k < equal; ++k) quo = synthetic_div(quo, t_[l]);
        cols[l] = ring_poly::horner(ring_, quo, t_[l]);
      }
      if (above & 1) cols[l] = ring_.neg(cols[l]);
    }
    width_ = 1;
    while (width_ < cols.size()) width_ *= 2;
    tree_.assign(2 * width_, ring_.one());
    std::copy(cols.begin(), cols.end(), tree_.begin() + static_cast<std::ptrdiff_t>(width_));
    for (std::size_t k = width_; k-- > 1;) tree_[k] = ring_.mul(tree_[2 * k], tree_[2 * k + 1]);
  }

  std::uint64_t product(std::uint64_t lo, std::uint64_t hi) const {
    const std::uint64_t ns = s_.size();
    const std::uint64_t a1 = lo / ns, b1 = hi / ns;
    if (a1 == b1) return direct(lo, hi);
    std::uint64_t acc = direct(lo, (a1 + 1) * ns - 1);
    if (b1 > a1 + 1) acc = ring_.mul(acc, columns(a1 + 1, b1 - 1));
    return ring_.mul(acc, direct(b1 * ns, hi));
  }

 private:
  std::uint64_t direct(std::uint64_t lo, std::uint64_t hi) const {
    const std::uint64_t ns = s_.size();
    std::uint64_t acc = ring_.one();
    for (std::uint64_t i = lo; i <= hi; ++i) {
      const std::uint64_t j = i % ns, l = i / ns;
      const int c = compare(pair_, words_, j, l);
      if (c == 0) continue;
      acc = ring_.mul(acc, c > 0 ? ring_.sub(s_[j], t_[l]) : ring_.sub(t_[l], s_[j]));
    }
    return acc;
  }

  std::uint64_t columns(std::uint64_t l0, std::uint64_t l1) const {
    std::uint64_t acc = ring_.one();
    for (std::size_t a = l0 + width_, b = l1 + width_ + 1; a < b; a /= 2, b /= 2) {
      if (a & 1) acc = ring_.mul(acc, tree_[a++]);
      if (b & 1) acc = ring_.mul(acc, tree_[--b]);
    }
    return acc;
  }

  ring_poly::Poly<ZmodRing> synthetic_div(const ring_poly::Poly<ZmodRing>& p, std::uint64_t r) const {
    ring_poly::Poly<ZmodRing> q(p.size() - 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
      carry = ring_.add(p[i + 1], ring_.mul(carry, r));
      q[i] = carry;
    }
    return q;
  }

  ZmodRing ring_;
  const DivisorSetPair& pair_;
  const PairWords& words_;
  const std::vector<std::uint64_t>& s_;
  const std::vector<std::uint64_t>& t_;
  std::size_t width_ = 1;
  std::vector<std::uint64_t> tree_;
};

void check_modulus(std::uint64_t d) {
  if (d == 0 || d > kMaxFactorInput) {
    throw RangeError("modulus " + std::to_string(d) + " outside 1.." + std::to_string(kMaxFactorInput));
  }
}

void check_interval(const DivisorSetPair& pair, std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi || hi >= pair.pair_count()) {
    throw RangeError("interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "] outside 0.." + std::to_string(pair.pair_count() - 1));
  }
}

std::vector<std::uint64_t> gap_residues(const GenArithProgression& g, std::uint64_t d) {
  std::vector<std::uint64_t> acc{0};
  for (const auto& term : g.terms) {
    const std::uint64_t base = mpz_class(term.base % from_u64(d)).get_ui();
    const std::uint64_t step = mpz_class(term.step % from_u64(d)).get_ui();
    std::vector<std::uint64_t> vals{base};
    for (std::uint64_t k = 1; k < term.length; ++k) {
      std::uint64_t v = vals.back() + step;
      vals.push_back(v >= d ? v - d : v);
    }
    std::vector<std::uint64_t> next;
    next.reserve(acc.size() * vals.size());
    for (auto v : vals) {
      for (auto o : acc) {
        std::uint64_t x = o + v;
        next.push_back(x >= d ? x - d : x);
      }
    }
    acc.swap(next);
  }
  return acc;
}

std::uint64_t fourth_root_ceil(std::uint64_t N) {
  auto p4 = [](unsigned __int128 m) { return m * m * m * m; };
  std::uint64_t m = 1;
  while (p4(m) < N) ++m;
  return m;
}

std::shared_ptr<const DivisorSetPair> cached_trivial_pair(std::uint64_t n) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const DivisorSetPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (cache.size() > 4096) cache.clear();
  auto pair = std::make_shared<const DivisorSetPair>(trivial_pair(n));
  cache.emplace(n, pair);
  return pair;
}

}  // namespace

ZmodRing::ZmodRing(std::uint64_t d) : d_(d) {
  if (d == 0) throw std::invalid_argument("modulus must be positive");
}

std::vector<std::uint64_t> ZmodRing::poly_mul(std::span<const Elem> a,
                                              std::span<const Elem> b) const {
  if (a.empty() || b.empty()) return {};
  if (std::min(a.size(), b.size()) <= kKroneckerCutoff) {
    return ring_poly::schoolbook_mul(*this, a, b);
  }
  // Kronecker substitution into one GMP product; each slot holds a full
  // coefficient of the integer product without carries into its neighbour.
  const int bits = 2 * bit_length(d_ - 1) + bit_length(std::min(a.size(), b.size()));
  const std::size_t words = static_cast<std::size_t>(bits / 64 + 1);
  auto pack = [&](std::span<const Elem> src) {
    std::vector<std::uint64_t> buf(src.size() * words, 0);
    for (std::size_t i = 0; i < src.size(); ++i) buf[i * words] = src[i];
    mpz_class z;
    mpz_import(z.get_mpz_t(), buf.size(), -1, sizeof(std::uint64_t), 0, 0, buf.data());
    return z;
  };
  const mpz_class prod = pack(a) * pack(b);
  const std::size_t out_len = a.size() + b.size() - 1;
  std::vector<std::uint64_t> buf(out_len * words + 1, 0);
  std::size_t count = 0;
  mpz_export(buf.data(), &count, -1, sizeof(std::uint64_t), 0, 0, prod.get_mpz_t());
  std::vector<Elem> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    unsigned __int128 r = 0;
    for (std::size_t w = words; w-- > 0;) {
      r = ((r << 64) | buf[i * words + w]) % d_;
    }
    out[i] = static_cast<Elem>(r);
  }
  return out;
}

Residues int_preprocess_residues(std::uint64_t d, const DivisorSetPair& pair) {
  check_modulus(d);
  return Residues{d, gap_residues(pair.S(), d), gap_residues(pair.T(), d)};
}

std::uint64_t int_interval_product(std::uint64_t d, const DivisorSetPair& pair,
                                   const Residues& residues, std::uint64_t lo, std::uint64_t hi) {
  check_modulus(d);
  check_interval(pair, lo, hi);
  PairWords words(pair);
  return IntInterval(d, pair, words, residues).bsgs(lo, hi);
}

std::uint64_t int_interval_product_naive(std::uint64_t d, const DivisorSetPair& pair,
                                         const Residues& residues, std::uint64_t lo,
                                         std::uint64_t hi) {
  check_modulus(d);
  check_interval(pair, lo, hi);
  PairWords words(pair);
  return IntInterval(d, pair, words, residues).direct(lo, hi);
}

PairDivisorList int_recursive_split(std::uint64_t N, const DivisorSetPair& pair) {
  check_modulus(N);
  if (!pair.prefactored()) {
    throw ContractError("pair has no prefactored differences");
  }
  if (!pair.verified()) throw NotCovering("pair does not have the n-divisor property");
  PairDivisorList out;
  if (N == 1) return out;
  const PairWords words(pair);
  const Residues res = int_preprocess_residues(N, pair);
  const std::uint64_t last = pair.pair_count() - 1;
  // Everything is reduced mod N once; a divisor d of N reads its products
  // off gcd(P mod N, d) = gcd(P, d).
  const ColumnProducts cols(N, pair, words, res);
  out.n0 = std::gcd(cols.product(0, last), N);

  auto split = [&](auto&& self, std::uint64_t d, std::uint64_t lo, std::uint64_t hi) -> void {
    if (d == 1) return;
    if (lo == hi) {
      out.entries.push_back({lo, d});
      return;
    }
    const std::uint64_t c = lo + (hi - lo) / 2;
    const std::uint64_t lower = std::gcd(cols.product(lo, c), d);
    if (lower == 1) {
      self(self, d, c + 1, hi);
    } else if (lower == d) {
      self(self, d, lo, c);
    } else {
      self(self, lower, lo, c);
      self(self, d / lower, c + 1, hi);
    }
  };
  split(split, out.n0, 0, last);

  unsigned __int128 prod = 1;
  for (const auto& e : out.entries) {
    prod *= e.divisor;
    if (prod > N) throw ContractError("divisors multiply past N");
    if (!mpz_divisible_ui_p(pair.difference(e.index).get_mpz_t(), e.divisor)) {
      throw ContractError("divisor does not divide its difference");
    }
  }
  if (prod != out.n0) throw ContractError("divisors do not multiply to N0");
  return out;
}

IntegerFactorization factor_integer(std::uint64_t N, std::shared_ptr<const DivisorSetPair> pair) {
  check_modulus(N);
  IntegerFactorization out;
  if (N == 1) return out;
  const std::uint64_t n = std::max<std::uint64_t>(isqrt(N), 1);
  if (!pair) pair = cached_trivial_pair(n);
  if (pair->n() < isqrt(N)) {
    throw NotCovering("pair covers up to " + std::to_string(pair->n()) + ", need " +
                      std::to_string(isqrt(N)));
  }
  const PairDivisorList list = int_recursive_split(N, *pair);
  std::vector<std::uint64_t> primes;
  for (const auto& e : list.entries) {
    for (const auto& p : pair_factorization(*pair, e.index)) {
      if (p.fits_ulong_p() && e.divisor % p.get_ui() == 0) primes.push_back(p.get_ui());
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::uint64_t m = N;
  for (auto p : primes) {
    while (m % p == 0) {
      ++out[p];
      m /= p;
    }
  }
  if (m > 1) {
    if (!is_prime_u64(m)) {
      throw ContractError("cofactor " + std::to_string(m) + " is not prime");
    }
    ++out[m];
  }
  unsigned __int128 check = 1;
  for (const auto& [p, k] : out) {
    for (unsigned i = 0; i < k; ++i) check *= p;
  }
  if (check != N) throw ContractError("factorization does not multiply back to N");
  return out;
}

IntegerFactorization pollard_strassen_oracle(std::uint64_t N) {
  check_modulus(N);
  IntegerFactorization out;
  while (N > 1) {
    const std::uint64_t m = fourth_root_ceil(N);
    const ZmodRing ring(N);
    // f(x) = (x + 1)(x + 2)...(x + m); f(km) covers km+1 .. km+m.
    std::vector<std::uint64_t> roots(m);
    for (std::uint64_t i = 0; i < m; ++i) roots[i] = ring.neg((i + 1) % N);
    auto f = ring_poly::from_roots(ring, std::span<const std::uint64_t>(roots));
    std::vector<std::uint64_t> points(m);
    for (std::uint64_t k = 0; k < m; ++k) {
      points[k] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(k) * m % N);
    }
    const auto vals = ring_poly::multipoint_eval(ring, f, points);
    std::uint64_t p = 0;
    for (std::uint64_t k = 0; k < m && p == 0; ++k) {
      if (std::gcd(vals[k], N) == 1) continue;
      // Bisect km+1 .. km+m for the smallest x with gcd(x, N) > 1.
      std::uint64_t lo = k * m + 1, hi = k * m + m;
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        std::uint64_t prod = 1 % N;
        for (std::uint64_t x = lo; x <= mid; ++x) prod = ring.mul(prod, x % N);
        if (std::gcd(prod, N) > 1) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      p = lo;
    }
    if (p == 0 || p >= N) {
      if (!is_prime_u64(N)) throw ContractError("no factor found below N^(1/2) for composite N");
      ++out[N];
      break;
    }
    while (N % p == 0) {
      ++out[p];
      N /= p;
    }
  }
  return out;
}

IntegerFactorization trial_division_factor(std::uint64_t N) {
  if (N == 0) throw std::domain_error("cannot factor zero");
  IntegerFactorization out;
  for (auto p : factor_u64(N)) ++out[p];
  return out;
}

std::string format_factorization(const IntegerFactorization& f) {
  if (f.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, k] : f) {
    if (!first) os << ' ';
    first = false;
    os << p << '^' << k;
  }
  return os.str();
}

}  // namespace ddfx
