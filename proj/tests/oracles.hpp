// Test-side reference implementations. Nothing here calls into the library's
// arithmetic; results are compared against library output.
#ifndef DDFX_TESTS_ORACLES_HPP
#define DDFX_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "ddfx/ddf.hpp"
#include "ddfx/poly.hpp"

namespace oracle {

using u64 = std::uint64_t;
using Coeffs = std::vector<u64>;

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline u64 pw(u64 a, u64 e, u64 q) {
  unsigned __int128 r = 1, b = a % q;
  for (; e; e >>= 1, b = b * b % q) {
    if (e & 1) r = r * b % q;
  }
  return static_cast<u64>(r);
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b, u64 q) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<u64>((r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % q);
    }
  }
  trim(r);
  return r;
}

inline Coeffs sub(Coeffs a, const Coeffs& b, u64 q) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + q - b[i]) % q;
  trim(a);
  return a;
}

inline Coeffs rem(Coeffs a, const Coeffs& b, u64 q) {
  const u64 inv = pw(b.back(), q - 2, q);
  trim(a);
  while (a.size() >= b.size()) {
    const u64 c = static_cast<u64>(static_cast<unsigned __int128>(a.back()) * inv % q);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = static_cast<u64>(
          (a[shift + i] + q - static_cast<unsigned __int128>(c) * b[i] % q) % q);
    }
    trim(a);
  }
  return a;
}

inline Coeffs monic(Coeffs a, u64 q) {
  trim(a);
  if (a.empty()) return a;
  const u64 inv = pw(a.back(), q - 2, q);
  for (auto& c : a) c = static_cast<u64>(static_cast<unsigned __int128>(c) * inv % q);
  return a;
}

inline Coeffs gcd(Coeffs a, Coeffs b, u64 q) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = rem(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, q);
}

inline Coeffs to_coeffs(const ddfx::FieldPoly& p) { return p.coeffs(); }

// All monic irreducibles of degree exactly d over F_q by sieving out
// products of lower-degree monic polynomials. Small q^d only.
inline std::vector<Coeffs> irreducibles(u64 q, int d) {
  u64 total = 1;
  for (int i = 0; i < d; ++i) total *= q;
  std::vector<bool> reducible(total, false);
  auto index = [&](const Coeffs& c) {
    u64 v = 0;
    for (int i = d - 1; i >= 0; --i) v = v * q + (i < static_cast<int>(c.size()) ? c[i] : 0);
    return v;
  };
  auto decode = [&](u64 v, int deg) {
    Coeffs c(deg + 1, 0);
    for (int i = 0; i < deg; ++i) {
      c[i] = v % q;
      v /= q;
    }
    c[deg] = 1;
    return c;
  };
  for (int a = 1; a <= d / 2; ++a) {
    u64 na = 1, nb = 1;
    for (int i = 0; i < a; ++i) na *= q;
    for (int i = 0; i < d - a; ++i) nb *= q;
    for (u64 x = 0; x < na; ++x) {
      const Coeffs fa = decode(x, a);
      for (u64 y = 0; y < nb; ++y) reducible[index(mul(fa, decode(y, d - a), q))] = true;
    }
  }
  std::vector<Coeffs> out;
  for (u64 v = 0; v < total; ++v) {
    if (!reducible[v]) out.push_back(decode(v, d));
  }
  return out;
}

// base^e mod f.
inline Coeffs powmod(Coeffs base, u64 e, const Coeffs& f, u64 q) {
  Coeffs r = rem({1}, f, q);
  base = rem(base, f, q);
  for (; e; e >>= 1) {
    if (e & 1) r = rem(mul(r, base, q), f, q);
    base = rem(mul(base, base, q), f, q);
  }
  return r;
}

// X^{q^u} mod f for u = 0..count-1, by repeated q-th powering.
inline std::vector<Coeffs> frobenius_chain(const Coeffs& f, u64 q, std::size_t count) {
  std::vector<Coeffs> out{rem({0, 1}, f, q)};
  while (out.size() < count) out.push_back(powmod(out.back(), q, f, q));
  return out;
}

// Rabin's test: X^{q^d} = X mod f and gcd(X^{q^{d/r}} - X, f) = 1 for every
// prime r dividing d.
inline bool is_irreducible(const Coeffs& f, u64 q) {
  const long d = static_cast<long>(f.size()) - 1;
  if (d <= 0) return false;
  if (d == 1) return true;
  const auto chain = frobenius_chain(f, q, d + 1);
  const Coeffs x = rem({0, 1}, f, q);
  if (sub(chain[d], x, q).size() != 0) return false;
  long m = d;
  for (long r = 2; r <= m; ++r) {
    if (m % r) continue;
    while (m % r == 0) m /= r;
    if (gcd(f, sub(chain[d / r], x, q), q).size() != 1) return false;
  }
  return true;
}

template <class Rng>
Coeffs random_irreducible(u64 q, long d, Rng& rng) {
  for (;;) {
    Coeffs c(d + 1);
    for (auto& v : c) v = rng() % q;
    c.back() = 1;
    if (is_irreducible(c, q)) return c;
  }
}

// Polynomials over F_2 as bitmasks, bit i holding the coefficient of X^i.
namespace f2 {

inline int deg(std::uint32_t a) { return a == 0 ? -1 : 31 - __builtin_clz(a); }

inline std::uint32_t mul(std::uint32_t a, std::uint32_t b) {
  std::uint32_t r = 0;
  for (; b; b >>= 1, a <<= 1) {
    if (b & 1) r ^= a;
  }
  return r;
}

inline std::uint32_t mod(std::uint32_t a, std::uint32_t b) {
  const int db = deg(b);
  for (int da = deg(a); da >= db; da = deg(a)) a ^= b << (da - db);
  return a;
}

// irreducible[m] for every bitmask m of degree <= max_deg.
inline std::vector<bool> irreducible_table(int max_deg) {
  const std::uint32_t limit = 1u << (max_deg + 1);
  std::vector<bool> irr(limit, true);
  irr[0] = irr[1] = false;
  for (std::uint32_t a = 2; a < limit; ++a) {
    for (std::uint32_t b = 2; b <= a; ++b) {
      if (deg(a) + deg(b) > max_deg) break;
      irr[mul(a, b)] = false;
    }
  }
  return irr;
}

inline ddfx::FieldPoly to_poly(std::uint32_t m) {
  std::vector<u64> c;
  for (int i = 0; i <= deg(m); ++i) c.push_back((m >> i) & 1);
  return ddfx::FieldPoly(ddfx::PrimeField(2), c);
}

}  // namespace f2

// Prime -> multiplicity by plain trial division.
inline std::map<u64, unsigned> trial_factor(u64 n) {
  std::map<u64, unsigned> out;
  for (u64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

inline ddfx::FieldPoly make(u64 q, Coeffs c) { return ddfx::FieldPoly(ddfx::PrimeField(q), c); }

// Degree -> product of the given irreducible factors, grouped by degree.
inline std::map<long, Coeffs> bucket(const std::vector<Coeffs>& factors, u64 q) {
  std::map<long, Coeffs> out;
  for (const auto& f : factors) {
    const long d = static_cast<long>(f.size()) - 1;
    auto it = out.find(d);
    if (it == out.end()) {
      out.emplace(d, f);
    } else {
      it->second = mul(it->second, f, q);
    }
  }
  return out;
}

inline std::map<long, Coeffs> flatten(const ddfx::DistinctDegreeFactorization& ddf) {
  std::map<long, Coeffs> out;
  for (const auto& [d, p] : ddf) out.emplace(d, p.coeffs());
  return out;
}

// Uniform random monic squarefree polynomial of the given degree; gcd with
// the derivative is taken with the oracle arithmetic above.
template <class Rng>
Coeffs random_squarefree(u64 q, long degree, Rng& rng) {
  for (;;) {
    Coeffs c(degree + 1);
    for (auto& v : c) v = rng() % q;
    c.back() = 1;
    Coeffs d;
    for (std::size_t i = 1; i < c.size(); ++i) {
      d.push_back(static_cast<u64>(static_cast<unsigned __int128>(c[i]) * (i % q) % q));
    }
    trim(d);
    if (degree == 1) return c;
    if (d.empty()) continue;
    if (gcd(c, d, q).size() == 1) return c;
  }
}

}  // namespace oracle

#endif  // DDFX_TESTS_ORACLES_HPP
