#ifndef DDFX_FROBENIUS_HPP
#define DDFX_FROBENIUS_HPP

#include <gmpxx.h>

#include <map>
#include <memory>
#include <vector>

#include "ddfx/poly.hpp"

namespace ddfx {

/// X^{q^a} mod h.
///
/// X^q comes from repeated squaring; self-composition then yields
/// X^{q^{2^i}} for every bit of a, and the powers selected by the binary
/// expansion of a are composed together. Throws std::invalid_argument if h
/// is not monic of degree >= 1.
FieldPoly frobenius_power(const FieldPoly& h, const mpz_class& a);
FieldPoly frobenius_power(const ModulusContext& ctx, const mpz_class& a);

/// Cached X^{q^{2^i}} mod h for one modulus, so that many exponents can be
/// served with popcount(a) compositions each.
class FrobeniusLadder {
 public:
  explicit FrobeniusLadder(std::shared_ptr<const ModulusContext> ctx);

  const ModulusContext& context() const noexcept { return *ctx_; }
  FieldPoly power(const mpz_class& a);

  // The same ladder for a modulus dividing this one: every cached power is
  // reduced instead of recomputed. Divisibility is the caller's contract.
  FrobeniusLadder restrict_to(std::shared_ptr<const ModulusContext> ctx) const;

 private:
  std::size_t rung(std::size_t i);

  std::shared_ptr<const ModulusContext> ctx_;
  std::vector<FieldPoly> rungs_;  // rungs_[i] = X^{q^{2^i}} mod h
  std::vector<std::vector<FieldPoly>> baby_;  // modcomp baby steps of each rung
  std::map<mpz_class, FieldPoly> powers_;
};

/// X^{q^{s+t}} mod h from X^{q^s} mod h and X^{q^t} mod h.
FieldPoly compose_powers(const FieldPoly& fa, const FieldPoly& fb, const FieldPoly& h);

/// gcd(X^{q^s} - X^{q^t}, h) for monic squarefree h: the product of the
/// irreducible factors of h whose degree divides |s - t|. Equal exponents
/// return h itself. Squarefreeness is the caller's contract.
FieldPoly difference_gcd(const FieldPoly& h, const mpz_class& s, const mpz_class& t);

/// X^{q^u} mod modulus for a set of exponents u; write-once, then read-only.
class FrobeniusTable {
 public:
  explicit FrobeniusTable(FieldPoly modulus) : modulus_(std::move(modulus)) {}

  const FieldPoly& modulus() const noexcept { return modulus_; }
  void insert(const mpz_class& u, FieldPoly value);
  bool contains(const mpz_class& u) const { return entries_.count(u) != 0; }
  // Throws std::out_of_range for a missing exponent.
  const FieldPoly& at(const mpz_class& u) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<mpz_class, FieldPoly>& entries() const noexcept { return entries_; }

 private:
  FieldPoly modulus_;
  std::map<mpz_class, FieldPoly> entries_;
};

}  // namespace ddfx

#endif  // DDFX_FROBENIUS_HPP
