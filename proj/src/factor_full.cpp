#include <algorithm>

#include "ddfx/ddf.hpp"

namespace ddfx {

namespace {

// g(X) with g(X)^p = f(X), for f whose exponents are all multiples of p.
FieldPoly pth_root(const FieldPoly& f) {
  const u64 p = f.field().modulus();
  std::vector<u64> c;
  for (std::size_t i = 0; i < f.size(); i += p) c.push_back(f[i]);
  return FieldPoly(f.field(), std::move(c));
}

void squarefree_rec(const FieldPoly& f, int mult, std::vector<FactorWithMultiplicity>& out) {
  if (f.degree() <= 0) return;
  FieldPoly df = f.derivative();
  if (df.is_zero()) {
    squarefree_rec(pth_root(f), mult * static_cast<int>(f.field().modulus()), out);
    return;
  }
  FieldPoly c = poly_gcd_monic(f, df);
  FieldPoly w = poly_exact_div(f, c);
  for (int i = 1; w.degree() > 0; ++i) {
    FieldPoly y = poly_gcd_monic(w, c);
    FieldPoly z = poly_exact_div(w, y);
    if (z.degree() > 0) out.push_back({z, i * mult});
    w = y;
    c = poly_exact_div(c, y);
  }
  if (c.degree() > 0) {
    squarefree_rec(pth_root(c), mult * static_cast<int>(f.field().modulus()), out);
  }
}

FieldPoly random_below(const FieldPoly& g, RngStream& rng) {
  std::vector<u64> c(static_cast<std::size_t>(g.degree()));
  for (auto& v : c) v = rng.below(g.field().modulus());
  return FieldPoly(g.field(), std::move(c));
}

// A proper factor of g or g itself when the draw was unlucky.
FieldPoly edf_attempt(const FieldPoly& g, long d, RngStream& rng) {
  const PrimeField& F = g.field();
  ModulusContext ctx(g);
  FieldPoly a = random_below(g, rng);
  if (a.degree() <= 0) return g;
  const FieldPoly xq = ctx.pow(FieldPoly::x(F), F.modulus());
  if (F.modulus() == 2) {
    // Absolute trace a + a^2 + ... + a^{2^{d-1}}.
    FieldPoly acc = a, cur = a;
    for (long i = 1; i < d; ++i) {
      cur = ctx.sqr(cur);
      acc += cur;
    }
    return poly_gcd_monic(acc.is_zero() ? g : acc, g);
  }
  // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}.
  FieldPoly norm = a, cur = a;
  for (long i = 1; i < d; ++i) {
    cur = modcomp(cur, xq, ctx);
    norm = ctx.mul(norm, cur);
  }
  FieldPoly b = ctx.pow(norm, (F.modulus() - 1) / 2) - FieldPoly::constant(F, 1);
  return poly_gcd_monic(b.is_zero() ? g : b, g);
}

void edf_rec(const FieldPoly& g, long d, RngStream& rng, std::vector<FieldPoly>& out) {
  if (g.degree() <= d) {
    if (g.degree() > 0) out.push_back(g);
    return;
  }
  for (;;) {
    FieldPoly h = edf_attempt(g, d, rng);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      RngStream left = rng.fork(1), right = rng.fork(2);
      edf_rec(h, d, left, out);
      edf_rec(poly_exact_div(g, h), d, right, out);
      return;
    }
  }
}

bool factor_less(const FactorWithMultiplicity& a, const FactorWithMultiplicity& b) {
  if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
  if (a.factor.coeffs() != b.factor.coeffs()) return a.factor.coeffs() < b.factor.coeffs();
  return a.multiplicity < b.multiplicity;
}

}  // namespace

std::vector<FactorWithMultiplicity> squarefree_decomposition(const FieldPoly& f) {
  if (f.is_zero()) throw std::domain_error("cannot factor the zero polynomial");
  std::vector<FactorWithMultiplicity> out;
  squarefree_rec(f.monic(), 1, out);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.multiplicity < b.multiplicity; });
  return out;
}

std::vector<FieldPoly> equal_degree_split(const FieldPoly& g, long d, RngStream& rng) {
  if (!g.is_monic()) throw NotMonic("input polynomial must be monic");
  if (d <= 0 || g.degree() % d != 0) {
    throw std::invalid_argument("degree " + std::to_string(g.degree()) +
                                " is not a multiple of " + std::to_string(d));
  }
  std::vector<FieldPoly> out;
  edf_rec(g, d, rng, out);
  return out;
}

std::vector<FactorWithMultiplicity> factor_full(const FieldPoly& f, RngStream& rng) {
  std::vector<FactorWithMultiplicity> out;
  std::uint64_t tag = 0;
  for (const auto& [part, mult] : squarefree_decomposition(f)) {
    RngStream branch = rng.fork(++tag);
    const DivisorSetPair pair = trivial_pair(static_cast<std::uint64_t>(part.degree()));
    for (const auto& [d, g] : recursive_split(part, pair, branch)) {
      for (auto& irr : equal_degree_split(g, d, branch)) out.push_back({std::move(irr), mult});
    }
  }
  std::sort(out.begin(), out.end(), factor_less);
  return out;
}

}  // namespace ddfx
