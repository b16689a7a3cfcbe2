#ifndef DDFX_DDF_HPP
#define DDFX_DDF_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ddfx/divisor_sets.hpp"
#include "ddfx/frobenius.hpp"
#include "ddfx/poly.hpp"

namespace ddfx {

/// Counter-based generator (SplitMix64 over seed and counter). Children are
/// forked from the parent key and a tag, so the stream a recursion branch
/// sees does not depend on how its siblings were scheduled.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : key_(seed) {}

  std::uint64_t next();
  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  RngStream fork(std::uint64_t tag) const;
  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Degree -> product of all monic irreducible factors of that degree.
using DistinctDegreeFactorization = std::map<long, FieldPoly>;

/// Telemetry for the current thread; reset with ddf_stats() = {}.
struct DdfStats {
  std::uint64_t small_r_iterations = 0;
  std::uint64_t pigeonhole_violations = 0;
  std::uint64_t split_trials = 0;
  std::uint64_t split_accepted = 0;
  std::uint64_t split_exhausted = 0;
  std::uint64_t interval_products = 0;
  std::uint64_t base_cases = 0;
};
DdfStats& ddf_stats();

/// X^{q^u} mod h for every u in S and T, built from one Frobenius power per
/// progression base and step followed by compositions. Throws NotCovering
/// when the pair is not verified.
FrobeniusTable preprocess_powers(const FieldPoly& h, const DivisorSetPair& pair);

/// prod_{i=lo}^{hi} (X^{q^{s_j}} - X^{q^{t_l}}) mod h in pair-index order,
/// where s = t contributes 1. The indices are cut into a partial leading
/// block, whole middle blocks and a partial trailing block; each middle
/// block product over all s is obtained by evaluating
/// p(Z) = prod_l (Z - X^{q^{t_l}}) at every X^{q^s} with a subproduct tree.
/// The table may be taken modulo any multiple of h.
FieldPoly interval_polynomial(const FieldPoly& h, const DivisorSetPair& pair,
                              const FrobeniusTable& table, std::uint64_t lo, std::uint64_t hi);
// One modular multiplication per index; the benchmark baseline.
FieldPoly interval_polynomial_naive(const FieldPoly& h, const DivisorSetPair& pair,
                                    const FrobeniusTable& table, std::uint64_t lo,
                                    std::uint64_t hi);

/// Distinct-degree factorization by bisecting the pair-index interval.
/// f must be monic and squarefree with deg f <= pair.n(). Throws NotMonic,
/// NotSquarefree, or NotCovering when the pair is unverified, too small, or
/// leaves part of f outside every interval.
DistinctDegreeFactorization recursive_split(const FieldPoly& f, const DivisorSetPair& pair,
                                            RngStream& rng);

/// Deterministic DDF of w when every factor degree divides prod(R).
/// Throws ContractError when that promise is found to be false.
DistinctDegreeFactorization ddf_small_R(const FieldPoly& w, std::vector<std::uint64_t> R);

/// max(2, ceil(log2 n)).
int log_param(long n);

struct SplitTrial {
  FieldPoly w_prime;
  std::vector<std::uint64_t> R_prime;
  bool accepted = false;
};

/// One draw: a uniform ceil(p|R|)-subset R' of the positions of R with
/// p = 2^{-1/log_param(n)}, and w' = gcd(X^{q^{prod R'}} - X, w). Accepted
/// when 8 deg w' >= deg w. n = 0 means deg w.
SplitTrial subset_split_trial(const FieldPoly& w, const std::vector<std::uint64_t>& R,
                              RngStream& rng, long n = 0);
/// Repeats the trial up to ceil(8 ln(64 deg w)) times; empty when none is
/// accepted.
std::optional<std::pair<FieldPoly, std::vector<std::uint64_t>>> random_subset_split(
    const FieldPoly& w, const std::vector<std::uint64_t>& R, RngStream& rng, long n = 0);

/// Las Vegas DDF of w when every factor degree divides prod(R). Small R goes
/// straight to ddf_small_R, as does a split whose retries run out.
DistinctDegreeFactorization ddf_randomized(const FieldPoly& w, const std::vector<std::uint64_t>& R,
                                           RngStream& rng, long n = 0);

/// Classic sequential DDF: strip gcd(X^{q^i} - X, f) for i = 1, 2, ...
DistinctDegreeFactorization ddf_naive_oracle(const FieldPoly& f);

/// Product of all buckets (1 for an empty factorization).
FieldPoly ddf_product(const DistinctDegreeFactorization& ddf, const PrimeField& field);

struct FactorWithMultiplicity {
  FieldPoly factor;
  int multiplicity;
  friend bool operator==(const FactorWithMultiplicity&, const FactorWithMultiplicity&) = default;
};

/// Full irreducible factorization of monic(f): squarefree decomposition,
/// recursive_split on each part, then equal-degree splitting. Sorted by
/// degree, then coefficients.
std::vector<FactorWithMultiplicity> factor_full(const FieldPoly& f, RngStream& rng);

/// Squarefree decomposition of monic(f): pairs (g_i, i) with g_i squarefree,
/// pairwise coprime, and prod g_i^i = monic(f). Sorted by i.
std::vector<FactorWithMultiplicity> squarefree_decomposition(const FieldPoly& f);

/// Splits g, a product of distinct irreducibles of degree d, into them.
std::vector<FieldPoly> equal_degree_split(const FieldPoly& g, long d, RngStream& rng);

}  // namespace ddfx

#endif  // DDFX_DDF_HPP
