#ifndef DDFX_NUMTHEORY_HPP
#define DDFX_NUMTHEORY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddfx/prime_field.hpp"

namespace ddfx {

/// Exact nonnegative rational, kept in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d);
  // Accepts "a/b" or "a".
  static Rational parse(const std::string& s);
  std::string str() const;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Smallest k >= 0 with k^den >= n^num, i.e. ceil(n^beta), decided with
/// exact integer powers.
std::uint64_t ceil_pow(std::uint64_t n, const Rational& beta);

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

/// Smallest-prime-factor table. `shared` hands out one process-wide table,
/// growing it when a larger limit is requested.
class FactorSieve {
 public:
  explicit FactorSieve(std::uint64_t limit);
  static std::shared_ptr<const FactorSieve> shared(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  // Prime factors with multiplicity, ascending. Requires 1 <= n <= limit.
  std::vector<std::uint64_t> factor(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

// Prime factors with multiplicity, ascending; empty for 1. Throws on 0.
std::vector<std::uint64_t> factor_u64(std::uint64_t n);
std::vector<mpz_class> factor_mpz(const mpz_class& n);
// Prime factors of |n| not exceeding bound, with multiplicity, ascending.
std::vector<std::uint64_t> smooth_factors(const mpz_class& n, std::uint64_t bound);

std::optional<std::uint64_t> to_u64(const mpz_class& z);
mpz_class from_u64(std::uint64_t v);

std::uint64_t isqrt(std::uint64_t n);
std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

bool is_prime(const mpz_class& n);

}  // namespace ddfx

#endif  // DDFX_NUMTHEORY_HPP
