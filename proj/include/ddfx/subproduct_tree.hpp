#ifndef DDFX_SUBPRODUCT_TREE_HPP
#define DDFX_SUBPRODUCT_TREE_HPP

// Ring-generic polynomial helpers in one variable Z over a commutative ring:
// product trees, division by monic polynomials through Newton inversion of
// the reversed divisor, and fast multipoint evaluation.
//
// A Ring supplies:
//   using Elem;
//   Elem zero() const; Elem one() const;
//   Elem add(const Elem&, const Elem&) const;  // likewise sub, mul
//   Elem neg(const Elem&) const;
//   std::vector<Elem> poly_mul(std::span<const Elem>, std::span<const Elem>) const;
// Polynomials are std::vector<Elem>, lowest degree first. Monic divisors
// never need inverses in the ring, so Z/dZ with composite d is fine.
//
// Optional tuning hooks, used when present:
//   std::size_t leaf_points() const;       // points per tree leaf
//   std::size_t division_cutoff() const;   // schoolbook division below this
//   std::vector<Elem> poly_mul_slice(a, b, lo, n) const;  // coefficients lo..lo+n-1

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace ddfx::ring_poly {

inline constexpr std::size_t kLeafPoints = 8;
inline constexpr std::size_t kSchoolbookDivision = 16;

template <class Ring>
using Poly = std::vector<typename Ring::Elem>;

template <class Ring>
std::size_t leaf_points(const Ring& R) {
  if constexpr (requires { R.leaf_points(); }) {
    return R.leaf_points();
  } else {
    return kLeafPoints;
  }
}

template <class Ring>
std::size_t division_cutoff(const Ring& R) {
  if constexpr (requires { R.division_cutoff(); }) {
    return R.division_cutoff();
  } else {
    return kSchoolbookDivision;
  }
}

template <class Ring>
Poly<Ring> schoolbook_mul(const Ring& R, std::span<const typename Ring::Elem> a,
                          std::span<const typename Ring::Elem> b) {
  if (a.empty() || b.empty()) return {};
  Poly<Ring> out(a.size() + b.size() - 1, R.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = R.add(out[i + j], R.mul(a[i], b[j]));
    }
  }
  return out;
}

// Coefficients lo..lo+n-1 of a*b, zero-padded.
template <class Ring>
Poly<Ring> mul_slice(const Ring& R, std::span<const typename Ring::Elem> a,
                     std::span<const typename Ring::Elem> b, std::size_t lo, std::size_t n) {
  if constexpr (requires { R.poly_mul_slice(a, b, lo, n); }) {
    return R.poly_mul_slice(a, b, lo, n);
  } else {
    a = a.first(std::min(a.size(), lo + n));
    b = b.first(std::min(b.size(), lo + n));
    Poly<Ring> full = R.poly_mul(a, b);
    Poly<Ring> out(n, R.zero());
    for (std::size_t i = 0; i < n && lo + i < full.size(); ++i) out[i] = std::move(full[lo + i]);
    return out;
  }
}

template <class Ring>
Poly<Ring> mul_trunc(const Ring& R, std::span<const typename Ring::Elem> a,
                     std::span<const typename Ring::Elem> b, std::size_t n) {
  return mul_slice(R, a, b, 0, n);
}

/// Product of (Z - r) over all roots, by a balanced product tree.
template <class Ring>
Poly<Ring> from_roots(const Ring& R, std::span<const typename Ring::Elem> roots) {
  if (roots.empty()) return {R.one()};
  if (roots.size() == 1) return {R.neg(roots[0]), R.one()};
  const std::size_t mid = roots.size() / 2;
  Poly<Ring> l = from_roots(R, roots.first(mid));
  Poly<Ring> r = from_roots(R, roots.subspan(mid));
  return R.poly_mul(l, r);
}

/// First n terms of 1/a for a power series with a[0] = 1.
template <class Ring>
Poly<Ring> unit_series_inverse(const Ring& R,
                               std::span<const typename Ring::Elem> a,
                               std::size_t n) {
  using E = typename Ring::Elem;
  Poly<Ring> g{R.one()};
  std::size_t have = 1;
  while (have < n) {
    const std::size_t next = std::min(2 * have, n);
    auto a_low = a.first(std::min(a.size(), next));
    // a*g = 1 + e*Z^have + ...; only e is needed, and g gains -g*e.
    Poly<Ring> e = mul_slice(R, a_low, std::span<const E>(g), have, next - have);
    Poly<Ring> corr = mul_trunc(R, std::span<const E>(g), std::span<const E>(e), next - have);
    g.reserve(next);
    for (auto& c : corr) g.push_back(R.neg(c));
    have = next;
  }
  return g;
}

/// Division by a monic polynomial with a cached reversed inverse.
template <class Ring>
class MonicDivisor {
 public:
  MonicDivisor() = default;
  explicit MonicDivisor(Poly<Ring> b) : b_(std::move(b)) {}

  const Poly<Ring>& poly() const noexcept { return b_; }
  std::size_t degree() const noexcept { return b_.size() - 1; }

  // Remainder of a modulo b, padded to exactly deg b coefficients.
  Poly<Ring> rem(const Ring& R, Poly<Ring> a) const {
    const std::size_t db = degree();
    if (a.size() <= db) {
      a.resize(db, R.zero());
      return a;
    }
    const std::size_t k = a.size() - db;  // quotient length
    const std::size_t cutoff = division_cutoff(R);
    if (db <= cutoff || k <= cutoff) {
      for (std::size_t i = a.size(); i-- > db;) {
        const auto c = a[i];
        const std::size_t base = i - db;
        for (std::size_t j = 0; j < db; ++j) {
          a[base + j] = R.sub(a[base + j], R.mul(c, b_[j]));
        }
      }
      a.erase(a.begin() + static_cast<std::ptrdiff_t>(db), a.end());
      return a;
    }
    const Poly<Ring>& inv = inverse(R, k);
    Poly<Ring> ra(a.rbegin(), a.rbegin() + static_cast<std::ptrdiff_t>(k));
    Poly<Ring> qrev = mul_trunc(R, std::span<const typename Ring::Elem>(ra),
                                std::span<const typename Ring::Elem>(inv).first(k), k);
    std::reverse(qrev.begin(), qrev.end());
    std::span<const typename Ring::Elem> blow(b_.data(), db);
    Poly<Ring> qb = mul_trunc(R, std::span<const typename Ring::Elem>(qrev), blow, db);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(db), a.end());
    for (std::size_t i = 0; i < db && i < qb.size(); ++i) a[i] = R.sub(a[i], qb[i]);
    return a;
  }

 private:
  const Poly<Ring>& inverse(const Ring& R, std::size_t k) const {
    if (inv_.size() < k) {
      Poly<Ring> rev(b_.rbegin(), b_.rend());
      inv_ = unit_series_inverse(R, std::span<const typename Ring::Elem>(rev), k);
    }
    return inv_;
  }

  Poly<Ring> b_;
  mutable Poly<Ring> inv_;
};

template <class Ring>
typename Ring::Elem horner(const Ring& R, const Poly<Ring>& p,
                           const typename Ring::Elem& x) {
  if (p.empty()) return R.zero();
  auto acc = p.back();
  for (std::size_t i = p.size() - 1; i-- > 0;) acc = R.add(R.mul(acc, x), p[i]);
  return acc;
}

/// Subproduct tree over a point set; leaves hold up to kLeafPoints points.
template <class Ring>
class SubproductTree {
 public:
  SubproductTree(const Ring& R, std::vector<typename Ring::Elem> points)
      : points_(std::move(points)) {
    if (!points_.empty()) root_ = build(R, 0, points_.size());
  }

  std::size_t size() const noexcept { return points_.size(); }
  const Poly<Ring>& root_poly() const { return nodes_[root_].div.poly(); }

  // Scaled remainder tree: one series inverse at the root, then each child
  // takes a middle product of its parent's scaled remainder with its sibling.
  std::vector<typename Ring::Elem> evaluate(const Ring& R, Poly<Ring> p) const {
    using E = typename Ring::Elem;
    std::vector<E> out(points_.size(), R.zero());
    if (points_.empty()) return out;
    const MonicDivisor<Ring>& root = nodes_[root_].div;
    const std::size_t m = root.degree();
    p = root.rem(R, std::move(p));  // exactly m coefficients
    // v holds the first m coefficients of (p / P) in 1/Z, starting at 1/Z.
    Poly<Ring> rev_p(p.rbegin(), p.rend());
    const Poly<Ring>& P = root.poly();
    Poly<Ring> rev_P(P.rbegin(), P.rend());
    Poly<Ring> inv = unit_series_inverse(R, std::span<const E>(rev_P), m);
    Poly<Ring> v = mul_trunc(R, std::span<const E>(rev_p), std::span<const E>(inv), m);
    descend(R, root_, std::move(v), out);
    return out;
  }

 private:
  struct Node {
    std::size_t lo = 0, hi = 0;
    std::size_t left = kNone, right = kNone;
    MonicDivisor<Ring> div{};
  };
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t build(const Ring& R, std::size_t lo, std::size_t hi) {
    Node node{lo, hi};
    if (hi - lo <= leaf_points(R)) {
      Poly<Ring> prod{R.one()};
      for (std::size_t i = lo; i < hi; ++i) {
        Poly<Ring> lin{R.neg(points_[i]), R.one()};
        prod = schoolbook_mul(R, std::span<const typename Ring::Elem>(prod),
                              std::span<const typename Ring::Elem>(lin));
      }
      node.div = MonicDivisor<Ring>(std::move(prod));
    } else {
      const std::size_t mid = lo + (hi - lo) / 2;
      node.left = build(R, lo, mid);
      node.right = build(R, mid, hi);
      node.div = MonicDivisor<Ring>(
          R.poly_mul(std::span<const typename Ring::Elem>(nodes_[node.left].div.poly()),
                     std::span<const typename Ring::Elem>(nodes_[node.right].div.poly())));
    }
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
  }

  void descend(const Ring& R, std::size_t idx, Poly<Ring> v,
               std::vector<typename Ring::Elem>& out) const {
    using E = typename Ring::Elem;
    const Node& node = nodes_[idx];
    if (node.left == kNone) {
      // Recover p mod Q from its scaled form, then evaluate directly.
      const Poly<Ring>& Q = node.div.poly();
      const std::size_t D = node.div.degree();
      Poly<Ring> r(D, R.zero());
      for (std::size_t j = 0; j < D; ++j) {
        for (std::size_t i = j + 1; i <= D; ++i) r[j] = R.add(r[j], R.mul(Q[i], v[i - j - 1]));
      }
      for (std::size_t i = node.lo; i < node.hi; ++i) out[i] = horner(R, r, points_[i]);
      return;
    }
    const Poly<Ring>& A = nodes_[node.left].div.poly();
    const Poly<Ring>& B = nodes_[node.right].div.poly();
    const std::size_t da = A.size() - 1, db = B.size() - 1;
    // The scaled remainder for one child is the middle product of v with the
    // other child's polynomial reversed.
    Poly<Ring> rb(B.rbegin(), B.rend()), ra(A.rbegin(), A.rend());
    Poly<Ring> vl = mul_slice(R, std::span<const E>(v), std::span<const E>(rb), db, da);
    Poly<Ring> vr = mul_slice(R, std::span<const E>(v), std::span<const E>(ra), da, db);
    v.clear();
    descend(R, node.left, std::move(vl), out);
    descend(R, node.right, std::move(vr), out);
  }

  std::vector<typename Ring::Elem> points_;
  std::vector<Node> nodes_;
  std::size_t root_ = kNone;
};

template <class Ring>
std::vector<typename Ring::Elem> multipoint_eval(
    const Ring& R, Poly<Ring> p, std::vector<typename Ring::Elem> points) {
  SubproductTree<Ring> tree(R, std::move(points));
  return tree.evaluate(R, std::move(p));
}

/// Generic Karatsuba over a Ring, for rings without a faster kernel.
template <class Ring>
Poly<Ring> karatsuba_mul(const Ring& R, std::span<const typename Ring::Elem> a,
                         std::span<const typename Ring::Elem> b,
                         std::size_t cutoff = 24) {
  using E = typename Ring::Elem;
  if (a.empty() || b.empty()) return {};
  if (std::min(a.size(), b.size()) <= cutoff) return schoolbook_mul(R, a, b);
  if (a.size() < b.size()) std::swap(a, b);
  Poly<Ring> out(a.size() + b.size() - 1, R.zero());
  if (a.size() != b.size()) {
    for (std::size_t off = 0; off < a.size(); off += b.size()) {
      const std::size_t len = std::min(b.size(), a.size() - off);
      Poly<Ring> part = karatsuba_mul(R, a.subspan(off, len), b, cutoff);
      for (std::size_t i = 0; i < part.size(); ++i) out[off + i] = R.add(out[off + i], part[i]);
    }
    return out;
  }
  const std::size_t n = a.size(), h = n / 2;
  auto a0 = a.first(h), a1 = a.subspan(h), b0 = b.first(h), b1 = b.subspan(h);
  Poly<Ring> z0 = karatsuba_mul(R, a0, b0, cutoff);
  Poly<Ring> z2 = karatsuba_mul(R, a1, b1, cutoff);
  Poly<Ring> sa(a1.begin(), a1.end()), sb(b1.begin(), b1.end());
  for (std::size_t i = 0; i < h; ++i) {
    sa[i] = R.add(sa[i], a0[i]);
    sb[i] = R.add(sb[i], b0[i]);
  }
  Poly<Ring> z1 = karatsuba_mul(R, std::span<const E>(sa), std::span<const E>(sb), cutoff);
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = R.sub(z1[i], z0[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = R.sub(z1[i], z2[i]);
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] = R.add(out[i], z0[i]);
  for (std::size_t i = 0; i < z1.size(); ++i) out[h + i] = R.add(out[h + i], z1[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) out[2 * h + i] = R.add(out[2 * h + i], z2[i]);
  return out;
}

}  // namespace ddfx::ring_poly

#endif  // DDFX_SUBPRODUCT_TREE_HPP
