#ifndef DDFX_QUOTIENT_POLY_HPP
#define DDFX_QUOTIENT_POLY_HPP

#include <memory>
#include <span>
#include <vector>

#include "ddfx/poly.hpp"

namespace ddfx {

/// The coefficient ring F_q[X]/(h) seen as a Ring for ring_poly algorithms.
/// Products of Z-polynomials go through Kronecker substitution so that one
/// large F_q[X] multiplication replaces a quadratic number of small ones.
class QuotientRing {
 public:
  using Elem = FieldPoly;

  explicit QuotientRing(FieldPoly modulus)
      : ctx_(std::make_shared<const ModulusContext>(std::move(modulus))) {}
  explicit QuotientRing(std::shared_ptr<const ModulusContext> ctx)
      : ctx_(std::move(ctx)) {}

  const ModulusContext& context() const noexcept { return *ctx_; }
  const FieldPoly& modulus() const noexcept { return ctx_->modulus(); }
  const PrimeField& field() const noexcept { return ctx_->field(); }

  Elem zero() const { return FieldPoly(field()); }
  Elem one() const { return FieldPoly::constant(field(), 1); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const {
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    return ctx_->mul(a, b);
  }
  std::vector<Elem> poly_mul(std::span<const Elem> a, std::span<const Elem> b) const;
  std::vector<Elem> poly_mul_slice(std::span<const Elem> a, std::span<const Elem> b,
                                   std::size_t lo, std::size_t n) const;

  // For large h every coefficient product costs a full reduction, so the
  // tree descends to single points and always divides by Newton iteration.
  std::size_t leaf_points() const { return ctx_->degree() < kSmallModulus ? 8 : 1; }
  std::size_t division_cutoff() const { return ctx_->degree() < kSmallModulus ? 16 : 1; }
  static constexpr long kSmallModulus = 64;

 private:
  std::shared_ptr<const ModulusContext> ctx_;
};

/// A polynomial in Z with coefficients in F_q[X]/(h).
struct QuotientRingPoly {
  std::vector<FieldPoly> coeffs;  // each of degree < deg modulus
  FieldPoly modulus;              // monic, degree >= 1

  // Throws std::invalid_argument if the invariants do not hold.
  void validate() const;
};

/// Evaluates p at every point through a subproduct tree over the quotient
/// ring. Throws std::invalid_argument when a point is not reduced mod the
/// modulus or when fields disagree.
std::vector<FieldPoly> multipoint_eval_quotient(const QuotientRingPoly& p,
                                                const std::vector<FieldPoly>& points);

// Same with a ready-made ring, skipping validation.
std::vector<FieldPoly> multipoint_eval_quotient(const QuotientRing& ring,
                                                std::vector<FieldPoly> p,
                                                std::vector<FieldPoly> points);

}  // namespace ddfx

#endif  // DDFX_QUOTIENT_POLY_HPP
