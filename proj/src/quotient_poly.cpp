#include "ddfx/quotient_poly.hpp"

#include <stdexcept>

#include "ddfx/subproduct_tree.hpp"

namespace ddfx {

std::vector<FieldPoly> QuotientRing::poly_mul(std::span<const Elem> a,
                                              std::span<const Elem> b) const {
  if (a.empty() || b.empty()) return {};
  return poly_mul_slice(a, b, 0, a.size() + b.size() - 1);
}

std::vector<FieldPoly> QuotientRing::poly_mul_slice(std::span<const Elem> a,
                                                    std::span<const Elem> b,
                                                    std::size_t lo, std::size_t n) const {
  if (a.empty() || b.empty()) return std::vector<Elem>(n, zero());
  a = a.first(std::min(a.size(), lo + n));
  b = b.first(std::min(b.size(), lo + n));
  if (std::min(a.size(), b.size()) == 1) {
    const bool a_short = a.size() == 1;
    const Elem& c = a_short ? a[0] : b[0];
    std::span<const Elem> v = a_short ? b : a;
    std::vector<Elem> out;
    out.reserve(n);
    for (std::size_t i = lo; i < lo + n; ++i) out.push_back(i < v.size() ? mul(c, v[i]) : zero());
    return out;
  }
  const PrimeField& f = field();
  const std::size_t d = static_cast<std::size_t>(ctx_->degree());
  const std::size_t stride = 2 * d - 1;
  auto pack = [&](std::span<const Elem> src) {
    std::vector<u64> packed(src.size() * stride, 0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto& c = src[i].coeffs();
      std::copy(c.begin(), c.end(), packed.begin() + i * stride);
    }
    return packed;
  };
  const std::vector<u64> pa = pack(a), pb = pack(b);
  std::vector<u64> prod = kernels::mul(f, pa, pb);
  const std::size_t out_len = std::min(lo + n, a.size() + b.size() - 1);
  std::vector<Elem> out;
  out.reserve(n);
  for (std::size_t k = lo; k < out_len; ++k) {
    const std::size_t begin = k * stride;
    if (begin >= prod.size()) {
      out.push_back(zero());
      continue;
    }
    const std::size_t end = std::min(prod.size(), begin + stride);
    out.push_back(ctx_->reduce(std::vector<u64>(prod.begin() + begin, prod.begin() + end)));
  }
  out.resize(n, zero());
  return out;
}

void QuotientRingPoly::validate() const {
  if (modulus.degree() < 1 || !modulus.is_monic()) {
    throw std::invalid_argument("quotient modulus must be monic of degree >= 1");
  }
  for (const auto& c : coeffs) {
    require_same_field(c.field(), modulus.field());
    if (c.degree() >= modulus.degree()) {
      throw std::invalid_argument("quotient-ring coefficient not reduced");
    }
  }
}

std::vector<FieldPoly> multipoint_eval_quotient(const QuotientRingPoly& p,
                                                const std::vector<FieldPoly>& points) {
  p.validate();
  for (const auto& pt : points) {
    require_same_field(pt.field(), p.modulus.field());
    if (pt.degree() >= p.modulus.degree()) {
      throw std::invalid_argument("evaluation point not reduced mod modulus");
    }
  }
  return multipoint_eval_quotient(QuotientRing(p.modulus), p.coeffs, points);
}

std::vector<FieldPoly> multipoint_eval_quotient(const QuotientRing& ring,
                                                std::vector<FieldPoly> p,
                                                std::vector<FieldPoly> points) {
  if (points.empty()) return {};
  return ring_poly::multipoint_eval(ring, std::move(p), std::move(points));
}

}  // namespace ddfx
