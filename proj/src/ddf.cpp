#include "ddfx/ddf.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "ddfx/quotient_poly.hpp"
#include "ddfx/subproduct_tree.hpp"

namespace ddfx {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

using Multiset = std::vector<std::uint64_t>;

void merge_into(DistinctDegreeFactorization& out, long d, const FieldPoly& p) {
  if (p.degree() <= 0) return;
  auto it = out.find(d);
  if (it == out.end()) {
    out.emplace(d, p);
  } else {
    it->second = it->second * p;
  }
}

void merge_into(DistinctDegreeFactorization& out, const DistinctDegreeFactorization& part) {
  for (const auto& [d, p] : part) merge_into(out, d, p);
}

// Product of R (minus one copy of `drop`), with each prime's multiplicity
// cut to the largest k with r^k <= bound. Degrees up to `bound` divide the
// result exactly when they divide the uncut product.
mpz_class capped_product(const Multiset& R, long bound, std::uint64_t drop = 0) {
  mpz_class acc = 1;
  bool dropped = false;
  for (std::size_t i = 0; i < R.size();) {
    const std::uint64_t r = R[i];
    std::size_t j = i;
    while (j < R.size() && R[j] == r) ++j;
    std::size_t count = j - i;
    if (r == drop && !dropped) {
      --count;
      dropped = true;
    }
    std::uint64_t pk = 1;
    for (std::size_t k = 0; k < count && pk <= static_cast<std::uint64_t>(bound) / r; ++k) {
      pk *= r;
    }
    acc *= from_u64(pk);
    i = j;
  }
  return acc;
}

// Drops the copies of each prime beyond what any degree <= bound can use.
Multiset prune(const Multiset& R, long bound) {
  Multiset out;
  for (std::size_t i = 0; i < R.size();) {
    const std::uint64_t r = R[i];
    std::size_t j = i;
    while (j < R.size() && R[j] == r) ++j;
    std::uint64_t pk = 1;
    for (std::size_t k = i; k < j && pk <= static_cast<std::uint64_t>(bound) / r; ++k) {
      pk *= r;
      out.push_back(r);
    }
    i = j;
  }
  return out;
}

mpz_class full_product(const Multiset& R) {
  mpz_class acc = 1;
  for (auto r : R) acc *= from_u64(r);
  return acc;
}

// Measured crossover between direct and evaluated middle blocks.
constexpr std::uint64_t kMinEvalPairs = 8192;

// Precomputed X^{q^s} and X^{q^t} modulo one h, for interval products.
class IntervalContext {
 public:
  IntervalContext(const FieldPoly& h, const DivisorSetPair& pair, const FrobeniusTable& table)
      : ctx_(std::make_shared<const ModulusContext>(h)), ring_(ctx_), pair_(pair) {
    const bool same = table.modulus() == h;
    if (!same && !divides(h, table.modulus())) {
      throw std::invalid_argument("Frobenius table modulus is not a multiple of h");
    }
    auto load = [&](const std::vector<mpz_class>& us, std::vector<FieldPoly>& dst) {
      dst.reserve(us.size());
      for (const auto& u : us) {
        const FieldPoly& v = table.at(u);
        dst.push_back(same ? v : ctx_->reduce(v));
      }
    };
    load(pair.s_enum(), xs_);
    load(pair.t_enum(), xt_);
  }

  const ModulusContext& ctx() const { return *ctx_; }

  FieldPoly direct(std::uint64_t lo, std::uint64_t hi) const {
    const std::uint64_t ns = xs_.size();
    FieldPoly acc = ctx_->reduce(FieldPoly::constant(ctx_->field(), 1));
    for (std::uint64_t i = lo; i <= hi; ++i) {
      const std::uint64_t j = i % ns, l = i / ns;
      if (pair_.s_enum()[j] == pair_.t_enum()[l]) continue;
      acc = ctx_->mul(acc, xs_[j] - xt_[l]);
    }
    return acc;
  }

  // Middle blocks with fewer than min_eval_pairs pairs are multiplied out
  // directly, where evaluation would cost more than it saves.
  FieldPoly bsgs(std::uint64_t lo, std::uint64_t hi, std::uint64_t min_eval_pairs = 0) const {
    ++ddf_stats().interval_products;
    const std::uint64_t ns = xs_.size();
    const std::uint64_t a1 = lo / ns, b1 = hi / ns;
    if (a1 == b1) return direct(lo, hi);
    if ((b1 - a1 + 1) * ns < min_eval_pairs) return direct(lo, hi);
    FieldPoly acc = direct(lo, (a1 + 1) * ns - 1);
    if (b1 > a1 + 1) acc = ctx_->mul(acc, middle(a1 + 1, b1 - 1));
    return ctx_->mul(acc, direct(b1 * ns, hi));
  }

 private:
  // prod over s in S and l0 <= l <= l1 of (X^{q^s} - X^{q^{t_l}}), skipping s = t.
  FieldPoly middle(std::uint64_t l0, std::uint64_t l1) const {
    using ring_poly::Poly;
    std::vector<FieldPoly> roots(xt_.begin() + static_cast<std::ptrdiff_t>(l0),
                                 xt_.begin() + static_cast<std::ptrdiff_t>(l1) + 1);
    Poly<QuotientRing> p = ring_poly::from_roots(ring_, std::span<const FieldPoly>(roots));
    std::vector<FieldPoly> vals = multipoint_eval_quotient(ring_, p, xs_);
    const auto& s = pair_.s_enum();
    const auto& t = pair_.t_enum();
    for (std::size_t j = 0; j < xs_.size(); ++j) {
      std::vector<std::uint64_t> hits;
      for (std::uint64_t l = l0; l <= l1; ++l) {
        if (s[j] == t[l]) hits.push_back(l);
      }
      if (hits.empty()) continue;
      Poly<QuotientRing> quo = p;
      for (auto l : hits) quo = synthetic_div(quo, xt_[l]);
      vals[j] = ring_poly::horner(ring_, quo, xs_[j]);
    }
    FieldPoly acc = ctx_->reduce(FieldPoly::constant(ctx_->field(), 1));
    for (const auto& v : vals) {
      acc = ctx_->mul(acc, v);
      if (acc.is_zero()) break;
    }
    return acc;
  }

  // p(Z) / (Z - r) for a root r of p.
  ring_poly::Poly<QuotientRing> synthetic_div(const ring_poly::Poly<QuotientRing>& p,
                                              const FieldPoly& r) const {
    ring_poly::Poly<QuotientRing> q(p.size() - 1, ring_.zero());
    FieldPoly carry = ring_.zero();
    for (std::size_t i = p.size() - 1; i-- > 0;) {
      carry = ring_.add(p[i + 1], ring_.mul(carry, r));
      q[i] = carry;
    }
    return q;
  }

  std::shared_ptr<const ModulusContext> ctx_;
  QuotientRing ring_;
  const DivisorSetPair& pair_;
  std::vector<FieldPoly> xs_, xt_;
};

void check_interval(const DivisorSetPair& pair, std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi || hi >= pair.pair_count()) {
    throw RangeError("interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "] outside 0.." + std::to_string(pair.pair_count() - 1));
  }
}

FieldPoly frob_gcd(FrobeniusLadder& ladder, const mpz_class& e, const FieldPoly& w) {
  FieldPoly x = FieldPoly::x(w.field());
  return poly_gcd_monic(ladder.power(e) - x, w);
}

void small_r(const FieldPoly& w, Multiset R, DistinctDegreeFactorization& out,
             const FrobeniusLadder* parent = nullptr) {
  const long deg = w.degree();
  if (deg <= 0) return;
  if (deg == 1) {
    merge_into(out, 1, w);
    return;
  }
  R = prune(R, deg);
  auto ctx = std::make_shared<const ModulusContext>(w);
  FrobeniusLadder ladder = parent ? parent->restrict_to(ctx) : FrobeniusLadder(ctx);
  if (R.empty()) {
    if (frob_gcd(ladder, 1, w) != w) {
      throw ContractError("factor degrees do not divide the empty product");
    }
    merge_into(out, 1, w);
    return;
  }
  if (R.size() == 1) {
    const std::uint64_t p = R[0];
    FieldPoly w1 = frob_gcd(ladder, 1, w);
    merge_into(out, 1, w1);
    FieldPoly rest = poly_exact_div(w, w1);
    if (rest.degree() > 0) {
      FieldPoly x = FieldPoly::x(w.field());
      if (poly_gcd_monic(ladder.power(from_u64(p)) - x, rest) != rest) {
        throw ContractError("factor degrees do not divide " + std::to_string(p));
      }
      merge_into(out, static_cast<long>(p), rest);
    }
    return;
  }
  ++ddf_stats().small_r_iterations;
  Multiset distinct = R;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  FieldPoly w1 = w;
  std::vector<FieldPoly> wr;
  for (auto r : distinct) {
    wr.push_back(frob_gcd(ladder, capped_product(R, deg, r), w));
    FieldPoly g = poly_gcd_monic(w1, wr.back());
    if (g.degree() > 0) w1 = poly_exact_div(w1, g);
  }
  std::size_t pick = wr.size();  // wr.size() stands for w1
  long best = w1.degree();
  for (std::size_t i = 0; i < wr.size(); ++i) {
    if (wr[i].degree() > best) {
      best = wr[i].degree();
      pick = i;
    }
  }
  if (best * static_cast<long>(R.size() + 1) < deg) {
    ++ddf_stats().pigeonhole_violations;
    throw std::logic_error("pigeonhole bound violated in small-R step");
  }
  if (pick == wr.size()) {
    const mpz_class P = full_product(R);
    if (P > deg || w1.degree() % P.get_si() != 0) {
      throw ContractError("factor degrees do not divide " + P.get_str());
    }
    merge_into(out, P.get_si(), w1);
    small_r(poly_exact_div(w, w1), std::move(R), out, &ladder);
    return;
  }
  Multiset reduced = R;
  reduced.erase(std::find(reduced.begin(), reduced.end(), distinct[pick]));
  small_r(wr[pick], std::move(reduced), out, &ladder);
  small_r(poly_exact_div(w, wr[pick]), std::move(R), out, &ladder);
}

SplitTrial split_trial(FrobeniusLadder& ladder, const FieldPoly& w, const Multiset& R,
                       RngStream& rng, long n) {
  const long top = n > 0 ? n : w.degree();
  const double p = std::pow(0.5, 1.0 / log_param(top));
  const std::size_t k = R.size();
  std::size_t m = static_cast<std::size_t>(std::ceil(p * static_cast<double>(k) - 1e-9));
  m = std::min(m, k);
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(idx[i], idx[i + rng.below(k - i)]);
  }
  SplitTrial out{FieldPoly(w.field()), {}, false};
  for (std::size_t i = 0; i < m; ++i) out.R_prime.push_back(R[idx[i]]);
  std::sort(out.R_prime.begin(), out.R_prime.end());
  out.w_prime = frob_gcd(ladder, capped_product(out.R_prime, w.degree()), w);
  out.accepted = 8 * out.w_prime.degree() >= w.degree();
  ++ddf_stats().split_trials;
  if (out.accepted) ++ddf_stats().split_accepted;
  return out;
}

}  // namespace

std::uint64_t RngStream::next() { return mix64(key_ + kGolden * ++counter_); }

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

RngStream RngStream::fork(std::uint64_t tag) const { return RngStream(mix64(key_ ^ mix64(tag))); }

DdfStats& ddf_stats() {
  thread_local DdfStats stats;
  return stats;
}

int log_param(long n) {
  int k = 0;
  while (k < 63 && (std::int64_t{1} << k) < n) ++k;
  return std::max(2, k);
}

FrobeniusTable preprocess_powers(const FieldPoly& h, const DivisorSetPair& pair) {
  if (!pair.verified()) throw NotCovering("pair does not have the n-divisor property");
  auto ctx = std::make_shared<const ModulusContext>(h);
  FrobeniusLadder ladder(ctx);
  FrobeniusTable table(h);
  for (const GenArithProgression* g : {&pair.S(), &pair.T()}) {
    std::vector<std::pair<mpz_class, FieldPoly>> acc{{mpz_class(0), ctx->reduce(FieldPoly::x(h.field()))}};
    for (const auto& term : g->terms) {
      std::vector<std::pair<mpz_class, FieldPoly>> vals;
      vals.reserve(term.length);
      vals.emplace_back(term.base, ladder.power(term.base));
      const FieldPoly step = ladder.power(term.step);
      for (std::uint64_t k = 1; k < term.length; ++k) {
        vals.emplace_back(vals.back().first + term.step, modcomp(vals.back().second, step, *ctx));
      }
      std::vector<std::pair<mpz_class, FieldPoly>> next;
      next.reserve(acc.size() * vals.size());
      for (const auto& [ev, pv] : vals) {
        for (const auto& [eo, po] : acc) {
          if (eo == 0) {
            next.emplace_back(ev, pv);
          } else if (ev == 0) {
            next.emplace_back(eo, po);
          } else {
            next.emplace_back(eo + ev, modcomp(po, pv, *ctx));
          }
        }
      }
      acc.swap(next);
    }
    for (auto& [e, p] : acc) {
      if (!table.contains(e)) table.insert(e, std::move(p));
    }
  }
  return table;
}

FieldPoly interval_polynomial(const FieldPoly& h, const DivisorSetPair& pair,
                              const FrobeniusTable& table, std::uint64_t lo, std::uint64_t hi) {
  check_interval(pair, lo, hi);
  return IntervalContext(h, pair, table).bsgs(lo, hi);
}

FieldPoly interval_polynomial_naive(const FieldPoly& h, const DivisorSetPair& pair,
                                    const FrobeniusTable& table, std::uint64_t lo,
                                    std::uint64_t hi) {
  check_interval(pair, lo, hi);
  return IntervalContext(h, pair, table).direct(lo, hi);
}

namespace {

class Splitter {
 public:
  Splitter(const DivisorSetPair& pair, const FrobeniusTable& table, long top)
      : pair_(pair), table_(table), top_(top) {}

  void run(const FieldPoly& w, std::uint64_t lo, std::uint64_t hi, RngStream& rng,
           DistinctDegreeFactorization& out) {
    if (w.degree() <= 0) return;
    if (lo == hi) {
      ++ddf_stats().base_cases;
      if (pair_.difference(lo) == 0) {
        throw std::logic_error("nontrivial factor assigned to an s = t index");
      }
      Multiset R = pair_smooth_factors(pair_, lo, static_cast<std::uint64_t>(w.degree()));
      merge_into(out, ddf_randomized(w, R, rng, top_));
      return;
    }
    const std::uint64_t c = lo + (hi - lo) / 2;
    FieldPoly lower = poly_gcd_monic(w, IntervalContext(w, pair_, table_).bsgs(lo, c, kMinEvalPairs));
    if (lower.degree() == 0) {
      run(w, c + 1, hi, rng, out);
    } else if (lower == w) {
      run(w, lo, c, rng, out);
    } else {
      RngStream left = rng.fork(1), right = rng.fork(2);
      run(lower, lo, c, left, out);
      run(poly_exact_div(w, lower), c + 1, hi, right, out);
    }
  }

 private:
  const DivisorSetPair& pair_;
  const FrobeniusTable& table_;
  long top_;
};

}  // namespace

DistinctDegreeFactorization recursive_split(const FieldPoly& f, const DivisorSetPair& pair,
                                            RngStream& rng) {
  if (!f.is_monic()) throw NotMonic("input polynomial must be monic");
  DistinctDegreeFactorization out;
  if (f.degree() == 0) return out;
  if (!poly_gcd_monic(f, f.derivative()).is_one()) {
    throw NotSquarefree("input polynomial is not squarefree");
  }
  if (!pair.verified()) throw NotCovering("pair does not have the n-divisor property");
  if (static_cast<std::uint64_t>(f.degree()) > pair.n()) {
    throw NotCovering("pair covers degrees up to " + std::to_string(pair.n()) +
                      ", input has degree " + std::to_string(f.degree()));
  }
  if (f.degree() == 1) {
    out.emplace(1, f);
    return out;
  }
  const FrobeniusTable table = preprocess_powers(f, pair);
  const std::uint64_t last = pair.pair_count() - 1;
  const FieldPoly covered = poly_gcd_monic(f, IntervalContext(f, pair, table).bsgs(0, last, kMinEvalPairs));
  if (covered != f) {
    throw NotCovering("a factor of degree dividing no difference survives every interval");
  }
  Splitter(pair, table, f.degree()).run(f, 0, last, rng, out);
  return out;
}

DistinctDegreeFactorization ddf_small_R(const FieldPoly& w, std::vector<std::uint64_t> R) {
  if (!w.is_monic()) throw NotMonic("input polynomial must be monic");
  std::sort(R.begin(), R.end());
  DistinctDegreeFactorization out;
  small_r(w, std::move(R), out);
  return out;
}

SplitTrial subset_split_trial(const FieldPoly& w, const std::vector<std::uint64_t>& R,
                              RngStream& rng, long n) {
  FrobeniusLadder ladder(std::make_shared<const ModulusContext>(w));
  Multiset sorted = R;
  std::sort(sorted.begin(), sorted.end());
  return split_trial(ladder, w, sorted, rng, n);
}

std::optional<std::pair<FieldPoly, std::vector<std::uint64_t>>> random_subset_split(
    const FieldPoly& w, const std::vector<std::uint64_t>& R, RngStream& rng, long n) {
  FrobeniusLadder ladder(std::make_shared<const ModulusContext>(w));
  Multiset sorted = R;
  std::sort(sorted.begin(), sorted.end());
  const double d = static_cast<double>(std::max<long>(w.degree(), 1));
  const int retries = static_cast<int>(std::ceil(8 * std::log(64 * d)));
  for (int i = 0; i < retries; ++i) {
    SplitTrial t = split_trial(ladder, w, sorted, rng, n);
    if (t.accepted) return std::make_pair(std::move(t.w_prime), std::move(t.R_prime));
  }
  return std::nullopt;
}

DistinctDegreeFactorization ddf_randomized(const FieldPoly& w, const std::vector<std::uint64_t>& R,
                                           RngStream& rng, long n) {
  if (!w.is_monic()) throw NotMonic("input polynomial must be monic");
  DistinctDegreeFactorization out;
  if (w.degree() <= 0) return out;
  if (w.degree() == 1) {
    out.emplace(1, w);
    return out;
  }
  const long top = n > 0 ? n : w.degree();
  const std::size_t L = static_cast<std::size_t>(log_param(top));
  if (R.size() <= 4 * L * L) return ddf_small_R(w, R);
  auto split = random_subset_split(w, R, rng, top);
  if (!split) {
    ++ddf_stats().split_exhausted;
    return ddf_small_R(w, R);
  }
  auto& [wp, Rp] = *split;
  RngStream left = rng.fork(1), right = rng.fork(2);
  out = ddf_randomized(wp, Rp, left, top);
  if (wp != w) merge_into(out, ddf_randomized(poly_exact_div(w, wp), R, right, top));
  return out;
}

DistinctDegreeFactorization ddf_naive_oracle(const FieldPoly& f) {
  if (!f.is_monic()) throw NotMonic("input polynomial must be monic");
  DistinctDegreeFactorization out;
  FieldPoly rest = f;
  const FieldPoly x = FieldPoly::x(f.field());
  FieldPoly h = x;  // X^{q^i} mod rest
  for (long i = 1; 2 * i <= rest.degree(); ++i) {
    ModulusContext ctx(rest);
    h = ctx.pow(ctx.reduce(h), f.field().modulus());
    FieldPoly g = poly_gcd_monic(h - x, rest);
    if (g.degree() > 0) {
      out.emplace(i, g);
      rest = poly_exact_div(rest, g);
    }
  }
  if (rest.degree() > 0) out.emplace(rest.degree(), rest);
  return out;
}

FieldPoly ddf_product(const DistinctDegreeFactorization& ddf, const PrimeField& field) {
  FieldPoly acc = FieldPoly::constant(field, 1);
  for (const auto& [d, p] : ddf) acc = acc * p;
  return acc;
}

}  // namespace ddfx
