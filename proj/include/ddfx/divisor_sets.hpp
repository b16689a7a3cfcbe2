#ifndef DDFX_DIVISOR_SETS_HPP
#define DDFX_DIVISOR_SETS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ddfx/errors.hpp"
#include "ddfx/numtheory.hpp"

namespace ddfx {

/// {base + i*step : 0 <= i < length}.
struct ArithProgression {
  mpz_class base;
  mpz_class step = 1;
  std::uint64_t length = 1;

  mpz_class at(std::uint64_t i) const { return base + step * from_u64(i); }
  mpz_class last() const { return at(length - 1); }
  std::vector<mpz_class> elements() const;
  // Throws PairError unless base >= 0, step > 0 and length >= 1.
  void validate() const;
  friend bool operator==(const ArithProgression&, const ArithProgression&) = default;
};

/// The sumset S_1 + ... + S_c of its terms. Elements are enumerated with
/// multiplicity, the first term varying fastest.
struct GenArithProgression {
  std::vector<ArithProgression> terms;

  GenArithProgression() = default;
  GenArithProgression(std::vector<ArithProgression> t) : terms(std::move(t)) {}
  GenArithProgression(ArithProgression a) : terms{std::move(a)} {}

  std::uint64_t size() const;
  mpz_class max_element() const;
  std::vector<mpz_class> elements() const;
  void validate() const;
};

/// Where the prime factorizations of the differences come from.
enum class FactorSource {
  None,      // nothing supplied; callers may still factor by trial division
  Table,     // explicit table, validated at construction
  Computed,  // built-in construction, factored on demand
};

struct VerificationReport {
  static constexpr std::uint64_t kNoWitness = ~std::uint64_t{0};

  bool verified = false;
  std::vector<std::uint64_t> uncovered;
  // witness[i] is the smallest pair index whose difference i divides, for
  // 1 <= i <= n; witness[0] is unused.
  std::vector<std::uint64_t> witness;
};

using FactorTable = std::map<std::uint64_t, std::vector<mpz_class>>;

/// A validated (S, T) pair for the n-divisor property.
///
/// Pair index i addresses (s_j, t_l) with j = i mod |S| and l = i / |S|.
/// Pairs with s = t carry no difference and are skipped by verification.
class DivisorSetPair {
 public:
  // Throws PairError when a progression is malformed, a cardinality exceeds
  // ceil(n^beta) + 1, an element is longer than ceil(n^alpha * log2 e) + 1
  // bits, or a table entry does not multiply out to its difference.
  DivisorSetPair(GenArithProgression S, GenArithProgression T, std::uint64_t n,
                 Rational alpha, Rational beta,
                 FactorSource source = FactorSource::None,
                 std::shared_ptr<const FactorTable> table = nullptr);

  // Marks the pair verified without running the check; the report is then
  // computed on first access. Only for constructions that cover [1, n].
  struct CoveringByConstruction {};
  DivisorSetPair(GenArithProgression S, GenArithProgression T, std::uint64_t n,
                 Rational alpha, Rational beta, FactorSource source, CoveringByConstruction);

  const GenArithProgression& S() const noexcept { return S_; }
  const GenArithProgression& T() const noexcept { return T_; }
  std::uint64_t n() const noexcept { return n_; }
  const Rational& alpha() const noexcept { return alpha_; }
  const Rational& beta() const noexcept { return beta_; }
  const std::vector<mpz_class>& s_enum() const noexcept { return s_; }
  const std::vector<mpz_class>& t_enum() const noexcept { return t_; }
  std::uint64_t pair_count() const noexcept { return s_.size() * t_.size(); }

  FactorSource source() const noexcept { return source_; }
  bool prefactored() const noexcept { return source_ != FactorSource::None; }
  const FactorTable* table() const noexcept { return table_.get(); }

  bool verified() const noexcept { return verified_; }
  const VerificationReport& report() const;

  // (s_j, t_l) for pair index i; throws RangeError when out of range.
  std::pair<mpz_class, mpz_class> at(std::uint64_t i) const;
  mpz_class difference(std::uint64_t i) const;

 private:
  GenArithProgression S_, T_;
  std::uint64_t n_;
  Rational alpha_, beta_;
  std::vector<mpz_class> s_, t_;
  FactorSource source_;
  std::shared_ptr<const FactorTable> table_;
  bool verified_ = false;

  struct LazyReport {
    std::once_flag once;
    VerificationReport report;
  };
  std::shared_ptr<LazyReport> report_ = std::make_shared<LazyReport>();

  void validate_shape();
};

/// Checks that every i in [1, n] divides some nonzero |s - t|.
VerificationReport verify_divisor_property(const DivisorSetPair& pair);
VerificationReport verify_divisor_property(const std::vector<mpz_class>& s_enum,
                                           const std::vector<mpz_class>& t_enum,
                                           std::uint64_t n);

/// Splits A so that every element of A is s - t with s in S, t in T:
/// with m = ceil(n^beta), S = {b + i*m*c} and T = {i*c : 0 <= i <= m}.
/// Throws PairError when A has more than m^2 + 1 elements, since S would
/// then exceed the cardinality bound.
std::pair<ArithProgression, ArithProgression> split_progression(const ArithProgression& A,
                                                                std::uint64_t n,
                                                                const Rational& beta);

/// The beta = 1/2 pair obtained by splitting {1, ..., n}.
DivisorSetPair trivial_pair(std::uint64_t n);

std::pair<mpz_class, mpz_class> enumerate_index(const DivisorSetPair& pair, std::uint64_t i);

/// Prime factors of |s - t| at pair index i, with multiplicity, ascending.
/// Throws std::domain_error when s = t.
std::vector<mpz_class> pair_factorization(const DivisorSetPair& pair, std::uint64_t i);
/// Only the prime factors not exceeding bound.
std::vector<std::uint64_t> pair_smooth_factors(const DivisorSetPair& pair, std::uint64_t i,
                                               std::uint64_t bound);

/// Two progressions folded into a two-term GAP whose elements contain a
/// multiple of x whenever A1 or A2 does.
GenArithProgression combine_progressions(const ArithProgression& A1,
                                         const ArithProgression& A2);

/// Prime-case certificate for the progression {b + i*c : 1 <= i <= l},
/// l = parts.size().
struct PrimeCaseCertificate {
  std::uint64_t n = 1;
  std::vector<mpz_class> parts;
  mpz_class b;
  mpz_class c = 1;
};

mpz_class primorial(std::uint64_t n);

/// Evaluates the congruence c * sum(i * V_i) + b = 0 (mod U). Throws
/// PairError unless the parts are pairwise coprime with product U, the
/// product of the primes <= n.
bool prime_case_check(const PrimeCaseCertificate& cert);

/// An exhaustive-search hit {b + i*c : 1 <= i <= len}.
struct ApSearchHit {
  std::uint64_t b = 0, c = 1, len = 1;

  ArithProgression progression() const;
  friend bool operator==(const ApSearchHit&, const ApSearchHit&) = default;
};

struct ApSearchBounds {
  std::uint64_t n = 1;
  std::uint64_t max_b = 0;
  std::uint64_t max_c = 1;
  std::uint64_t max_len = 1;
  bool primes_only = false;
};

inline constexpr std::uint64_t kSearchBudget = 100'000'000;

/// Every (b, c, len) with 0 <= b <= max_b, 1 <= c <= max_c,
/// 1 <= len <= max_len whose elements cover [1, n] (or the primes in it),
/// in lexicographic order. Throws BudgetExceeded when the grid is larger
/// than kSearchBudget.
std::vector<ApSearchHit> search_ap(const ApSearchBounds& bounds);

/// JSON form of a pair. Parsing throws ParseError on malformed documents
/// and PairError on invalid content.
DivisorSetPair parse_pair_json(const std::string& text);
std::string pair_to_json(const DivisorSetPair& pair, bool with_factorizations = true);

}  // namespace ddfx

#endif  // DDFX_DIVISOR_SETS_HPP
