#ifndef DDFX_INT_FACTOR_HPP
#define DDFX_INT_FACTOR_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "ddfx/divisor_sets.hpp"

namespace ddfx {

/// Z/dZ as a Ring for the ring_poly algorithms; d may be composite.
class ZmodRing {
 public:
  using Elem = std::uint64_t;

  explicit ZmodRing(std::uint64_t d);

  std::uint64_t modulus() const noexcept { return d_; }
  Elem zero() const { return 0; }
  Elem one() const { return 1 % d_; }
  Elem add(Elem a, Elem b) const {
    const Elem s = a + b;
    return s >= d_ ? s - d_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + d_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : d_ - a; }
  Elem mul(Elem a, Elem b) const { return mulmod(a, b, d_); }
  std::vector<Elem> poly_mul(std::span<const Elem> a, std::span<const Elem> b) const;

 private:
  std::uint64_t d_;
};

/// Moduli and factored integers are limited to 62 bits.
inline constexpr std::uint64_t kMaxFactorInput = (std::uint64_t{1} << 62) - 1;

/// u mod d for every u in S and T, in enumeration order.
struct Residues {
  std::uint64_t modulus = 1;
  std::vector<std::uint64_t> s, t;
};

/// Residues from reducing each progression's base and step once, adding the
/// step repeatedly, and summing across terms. Throws RangeError for d = 0
/// or d above kMaxFactorInput.
Residues int_preprocess_residues(std::uint64_t d, const DivisorSetPair& pair);

/// prod_{i=lo}^{hi} |s_j - t_l| mod d in pair-index order, s = t counting
/// as 1, with the same block decomposition as the polynomial side.
std::uint64_t int_interval_product(std::uint64_t d, const DivisorSetPair& pair,
                                   const Residues& residues, std::uint64_t lo, std::uint64_t hi);
std::uint64_t int_interval_product_naive(std::uint64_t d, const DivisorSetPair& pair,
                                         const Residues& residues, std::uint64_t lo,
                                         std::uint64_t hi);

struct PairDivisor {
  std::uint64_t index;
  std::uint64_t divisor;
  friend bool operator==(const PairDivisor&, const PairDivisor&) = default;
};

struct PairDivisorList {
  std::uint64_t n0 = 1;  // gcd of N with the full interval product
  std::vector<PairDivisor> entries;
};

/// Splits N0 across pair indices by bisection. Throws ContractError when
/// the pair has no factorization source, NotCovering when it is not
/// verified, RangeError when N is out of range.
PairDivisorList int_recursive_split(std::uint64_t N, const DivisorSetPair& pair);

/// Prime -> multiplicity.
using IntegerFactorization = std::map<std::uint64_t, unsigned>;

/// Factors N with the given pair, or with trivial_pair(isqrt(N)) when pair
/// is null. The pair must cover n >= isqrt(N).
IntegerFactorization factor_integer(std::uint64_t N,
                                    std::shared_ptr<const DivisorSetPair> pair = nullptr);

/// Classic baseline: blocks of m = ceil(N^{1/4}) consecutive integers,
/// each block product evaluated by multipoint evaluation, gcd per block.
IntegerFactorization pollard_strassen_oracle(std::uint64_t N);

IntegerFactorization trial_division_factor(std::uint64_t N);

/// "p^k" terms separated by spaces, increasing p; "1" for N = 1.
std::string format_factorization(const IntegerFactorization& f);

}  // namespace ddfx

#endif  // DDFX_INT_FACTOR_HPP
