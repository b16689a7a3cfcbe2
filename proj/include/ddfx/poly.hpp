#ifndef DDFX_POLY_HPP
#define DDFX_POLY_HPP

#include <gmpxx.h>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddfx/prime_field.hpp"

namespace ddfx {

/// Dense univariate polynomial over a prime field, lowest degree first.
///
/// Always stored in canonical form: no trailing zero coefficients, and the
/// zero polynomial is the empty sequence.
class FieldPoly {
 public:
  explicit FieldPoly(PrimeField field) : field_(field) {}
  // Coefficients are reduced mod q and trailing zeros are dropped.
  FieldPoly(PrimeField field, std::vector<u64> coeffs);

  static FieldPoly constant(PrimeField field, u64 c);
  static FieldPoly x(PrimeField field);
  static FieldPoly monomial(PrimeField field, std::size_t degree, u64 c = 1);

  const PrimeField& field() const noexcept { return field_; }
  const std::vector<u64>& coeffs() const noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }
  // -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
  u64 leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  u64 operator[](std::size_t i) const noexcept {
    return i < c_.size() ? c_[i] : 0;
  }

  FieldPoly monic() const;
  FieldPoly derivative() const;
  FieldPoly scaled(u64 s) const;
  u64 eval(u64 point) const;

  FieldPoly& operator+=(const FieldPoly& o);
  FieldPoly& operator-=(const FieldPoly& o);
  FieldPoly& operator*=(const FieldPoly& o);
  friend FieldPoly operator+(FieldPoly a, const FieldPoly& b) { return a += b; }
  friend FieldPoly operator-(FieldPoly a, const FieldPoly& b) { return a -= b; }
  friend FieldPoly operator*(const FieldPoly& a, const FieldPoly& b);
  FieldPoly operator-() const;

  friend bool operator==(const FieldPoly&, const FieldPoly&) = default;

  std::vector<u64> release() && { return std::move(c_); }

 private:
  void normalize();

  PrimeField field_;
  std::vector<u64> c_;
};

FieldPoly poly_mul(const FieldPoly& a, const FieldPoly& b);
// Throws std::domain_error when b is zero.
std::pair<FieldPoly, FieldPoly> poly_divrem(const FieldPoly& a,
                                            const FieldPoly& b);
FieldPoly poly_rem(const FieldPoly& a, const FieldPoly& b);
// Exact quotient; throws std::domain_error if b does not divide a.
FieldPoly poly_exact_div(const FieldPoly& a, const FieldPoly& b);
// Monic gcd; throws std::domain_error when both inputs are zero.
FieldPoly poly_gcd_monic(const FieldPoly& a, const FieldPoly& b);
bool divides(const FieldPoly& d, const FieldPoly& a);

/// Arithmetic in F_q[X]/(h) for a fixed monic h of degree >= 1.
///
/// Products are reduced with a precomputed reversed inverse of h (Barrett
/// style) once h is large enough; small moduli use long division.
class ModulusContext {
 public:
  // Throws std::invalid_argument if h is not monic or is constant.
  explicit ModulusContext(FieldPoly h);

  const FieldPoly& modulus() const noexcept { return h_; }
  const PrimeField& field() const noexcept { return h_.field(); }
  long degree() const noexcept { return h_.degree(); }

  FieldPoly reduce(const FieldPoly& a) const;
  FieldPoly reduce(std::vector<u64>&& coeffs) const;
  FieldPoly mul(const FieldPoly& a, const FieldPoly& b) const;
  FieldPoly sqr(const FieldPoly& a) const { return mul(a, a); }
  FieldPoly pow(const FieldPoly& base, const mpz_class& e) const;
  FieldPoly pow(const FieldPoly& base, u64 e) const;

 private:
  std::vector<u64> barrett_reduce(std::vector<u64>&& a) const;

  FieldPoly h_;
  std::vector<u64> rev_inv_;  // rev(h)^{-1} mod X^{deg h - 1}
  bool use_barrett_ = false;
};

/// f(g(X)) mod h by baby-steps-giant-steps blocking: the powers g^0..g^m are
/// formed once, each block of m coefficients of f becomes a linear
/// combination of them, and the blocks are joined by a Horner pass in g^m.
FieldPoly modcomp(const FieldPoly& f, const FieldPoly& g, const FieldPoly& h);
FieldPoly modcomp(const FieldPoly& f, const FieldPoly& g,
                  const ModulusContext& ctx);
// g^0..g^m mod h with m = ceil(sqrt(deg h)), reusable across compositions
// with the same inner polynomial.
std::vector<FieldPoly> modcomp_baby_steps(const FieldPoly& g, const ModulusContext& ctx);
// f(g) mod h from precomputed g^0..g^m; any m >= 1 is valid.
FieldPoly modcomp(const FieldPoly& f, const std::vector<FieldPoly>& baby,
                  const ModulusContext& ctx);
// deg f full modular multiplications; used as oracle and benchmark baseline.
FieldPoly modcomp_horner(const FieldPoly& f, const FieldPoly& g,
                         const FieldPoly& h);

namespace kernels {
// Full product of coefficient vectors; schoolbook, Karatsuba or NTT by size.
std::vector<u64> mul(const PrimeField& f, std::span<const u64> a,
                     std::span<const u64> b);
std::vector<u64> mul_schoolbook(const PrimeField& f, std::span<const u64> a,
                                std::span<const u64> b);
std::vector<u64> mul_karatsuba(const PrimeField& f, std::span<const u64> a,
                               std::span<const u64> b);
// Empty optional when the transform cannot represent the exact product.
std::optional<std::vector<u64>> mul_ntt(const PrimeField& f,
                                        std::span<const u64> a,
                                        std::span<const u64> b);
// First n coefficients of the inverse of a power series with a[0] != 0.
std::vector<u64> series_inverse(const PrimeField& f, std::span<const u64> a,
                                std::size_t n);
}  // namespace kernels

/// Polynomial text format: `q=<prime>; c0,c1,...,cd`, lowest degree first.
std::string format_poly(const FieldPoly& p);
std::string format_coeffs(const FieldPoly& p);
// Throws std::invalid_argument on malformed text, out-of-range coefficients
// or a trailing zero coefficient.
FieldPoly parse_poly(const std::string& text);

}  // namespace ddfx

#endif  // DDFX_POLY_HPP
