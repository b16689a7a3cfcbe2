#include "ddfx/frobenius.hpp"

#include <stdexcept>

#include "ddfx/errors.hpp"

namespace ddfx {

namespace {

FieldPoly x_to_the_q(const ModulusContext& ctx) {
  return ctx.pow(FieldPoly::x(ctx.field()), ctx.field().modulus());
}

}  // namespace

FrobeniusLadder::FrobeniusLadder(std::shared_ptr<const ModulusContext> ctx)
    : ctx_(std::move(ctx)) {}

std::size_t FrobeniusLadder::rung(std::size_t i) {
  if (rungs_.empty()) {
    rungs_.push_back(x_to_the_q(*ctx_));
    baby_.push_back(modcomp_baby_steps(rungs_.back(), *ctx_));
  }
  while (rungs_.size() <= i) {
    FieldPoly next = modcomp(rungs_.back(), baby_.back(), *ctx_);
    baby_.push_back(modcomp_baby_steps(next, *ctx_));
    rungs_.push_back(std::move(next));
  }
  return i;
}

FieldPoly FrobeniusLadder::power(const mpz_class& a) {
  if (a < 0) throw std::domain_error("negative Frobenius exponent");
  FieldPoly acc = ctx_->reduce(FieldPoly::x(ctx_->field()));
  if (a == 0) return acc;
  if (auto it = powers_.find(a); it != powers_.end()) return it->second;
  const std::size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
  bool first = true;
  for (std::size_t i = 0; i < bits; ++i) {
    if (!mpz_tstbit(a.get_mpz_t(), i)) continue;
    const std::size_t r = rung(i);
    // Frobenius powers commute under composition, so the rung can always be
    // the inner polynomial and its baby steps are reused.
    acc = first ? rungs_[r] : modcomp(acc, baby_[r], *ctx_);
    first = false;
  }
  powers_.emplace(a, acc);
  return acc;
}

FrobeniusLadder FrobeniusLadder::restrict_to(std::shared_ptr<const ModulusContext> ctx) const {
  FrobeniusLadder out(std::move(ctx));
  for (const auto& r : rungs_) out.rungs_.push_back(out.ctx_->reduce(r));
  for (const auto& steps : baby_) {
    auto& dst = out.baby_.emplace_back();
    for (const auto& p : steps) dst.push_back(out.ctx_->reduce(p));
  }
  for (const auto& [a, v] : powers_) out.powers_.emplace(a, out.ctx_->reduce(v));
  return out;
}

FieldPoly frobenius_power(const ModulusContext& ctx, const mpz_class& a) {
  if (a < 0) throw std::domain_error("negative Frobenius exponent");
  FieldPoly acc = ctx.reduce(FieldPoly::x(ctx.field()));
  if (a == 0) return acc;
  FieldPoly rung = x_to_the_q(ctx);
  const std::size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
  bool first = true;
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(a.get_mpz_t(), i)) {
      acc = first ? rung : modcomp(acc, rung, ctx);
      first = false;
    }
    if (i + 1 < bits) rung = modcomp(rung, rung, ctx);
  }
  return acc;
}

FieldPoly frobenius_power(const FieldPoly& h, const mpz_class& a) {
  return frobenius_power(ModulusContext(h), a);
}

FieldPoly compose_powers(const FieldPoly& fa, const FieldPoly& fb, const FieldPoly& h) {
  require_same_field(fa.field(), h.field());
  require_same_field(fb.field(), h.field());
  if (fa.degree() >= h.degree() || fb.degree() >= h.degree()) {
    throw std::invalid_argument("Frobenius powers must be reduced mod the same modulus");
  }
  return modcomp(fa, fb, h);
}

FieldPoly difference_gcd(const FieldPoly& h, const mpz_class& s, const mpz_class& t) {
  if (h.degree() < 1 || !h.is_monic()) {
    throw NotMonic("modulus must be monic of degree >= 1");
  }
  const mpz_class diff = abs(s - t);
  if (diff == 0) return h;
  FieldPoly g = frobenius_power(h, diff) - FieldPoly::x(h.field());
  return poly_gcd_monic(g, h);
}

void FrobeniusTable::insert(const mpz_class& u, FieldPoly value) {
  require_same_field(value.field(), modulus_.field());
  entries_.emplace(u, std::move(value));
}

const FieldPoly& FrobeniusTable::at(const mpz_class& u) const {
  auto it = entries_.find(u);
  if (it == entries_.end()) {
    throw std::out_of_range("no Frobenius table entry for exponent " + u.get_str());
  }
  return it->second;
}

}  // namespace ddfx
