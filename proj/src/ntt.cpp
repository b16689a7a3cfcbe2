// NTT multiplication over one, two or three word-sized primes, with CRT
// reconstruction into F_q. The number of primes is the fewest whose
// product exceeds every exact coefficient of the integer product.
#include <array>
#include <bit>
#include <vector>

#include "ddfx/poly.hpp"

namespace ddfx::kernels {

namespace {

using u32 = std::uint32_t;

constexpr u32 kP0 = 998244353u;
constexpr u32 kP1 = 167772161u;
constexpr u32 kP2 = 469762049u;
constexpr int kMaxLog = 23;  // the smallest 2-adic order among the three

constexpr u32 pow_mod(u64 a, u64 e, u32 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

// Montgomery arithmetic modulo P with R = 2^32.
template <u32 P>
struct Mont {
  static constexpr u32 neg_inv = [] {
    u32 inv = P;
    for (int i = 0; i < 5; ++i) inv *= 2 - P * inv;
    return static_cast<u32>(0u - inv);
  }();
  static constexpr u32 r2 = static_cast<u32>((static_cast<u128>(1) << 64) % P);

  static u32 reduce(u64 t) {
    const u32 m = static_cast<u32>(t) * neg_inv;
    const u32 u = static_cast<u32>((t + static_cast<u64>(m) * P) >> 32);
    return u >= P ? u - P : u;
  }
  static u32 mul(u32 a, u32 b) { return reduce(static_cast<u64>(a) * b); }
  static u32 to(u32 a) { return mul(a, r2); }
  static u32 add(u32 a, u32 b) {
    const u32 s = a + b;
    return s >= P ? s - P : s;
  }
  static u32 sub(u32 a, u32 b) { return a >= b ? a - b : a + P - b; }
};

// Twiddles in Montgomery form for every stage, concatenated: the stage with
// half-length h starts at offset h - 1 and holds w^0..w^{h-1}, w of order 2h.
template <u32 P>
const std::vector<u32>& twiddles(std::size_t n, bool invert) {
  using M = Mont<P>;
  thread_local std::array<std::vector<u32>, 2> cache;
  auto& tw = cache[invert ? 1 : 0];
  if (tw.size() + 1 < n) {
    tw.assign(n - 1, 0);
    for (std::size_t half = 1; half < n; half <<= 1) {
      u32 w = pow_mod(3, (P - 1) / (2 * half), P);
      if (invert) w = pow_mod(w, P - 2, P);
      const u32 wm = M::to(w);
      u32* dst = tw.data() + half - 1;
      dst[0] = M::to(1);
      for (std::size_t k = 1; k < half; ++k) dst[k] = M::mul(dst[k - 1], wm);
    }
  }
  return tw;
}

// Natural order in, bit-reversed order out.
template <u32 P>
void forward(std::vector<u32>& a) {
  using M = Mont<P>;
  const std::size_t n = a.size();
  const std::vector<u32>& tw = twiddles<P>(n, false);
  for (std::size_t half = n / 2; half >= 1; half >>= 1) {
    const u32* w = tw.data() + half - 1;
    for (std::size_t i = 0; i < n; i += 2 * half) {
      u32* lo = a.data() + i;
      u32* hi = lo + half;
      for (std::size_t k = 0; k < half; ++k) {
        const u32 u = lo[k], v = hi[k];
        lo[k] = M::add(u, v);
        hi[k] = M::mul(M::sub(u, v), w[k]);
      }
    }
  }
}

// Bit-reversed order in, natural order out, scaled by 1/n.
template <u32 P>
void inverse(std::vector<u32>& a) {
  using M = Mont<P>;
  const std::size_t n = a.size();
  const std::vector<u32>& tw = twiddles<P>(n, true);
  for (std::size_t half = 1; half < n; half <<= 1) {
    const u32* w = tw.data() + half - 1;
    for (std::size_t i = 0; i < n; i += 2 * half) {
      u32* lo = a.data() + i;
      u32* hi = lo + half;
      for (std::size_t k = 0; k < half; ++k) {
        const u32 u = lo[k], v = M::mul(hi[k], w[k]);
        lo[k] = M::add(u, v);
        hi[k] = M::sub(u, v);
      }
    }
  }
  const u32 inv_n = M::to(pow_mod(n, P - 2, P));
  for (auto& x : a) x = M::mul(x, inv_n);
}

// Plain residues of the cyclic convolution of a and b.
template <u32 P>
std::vector<u32> convolve(std::span<const u64> a, std::span<const u64> b, std::size_t n) {
  using M = Mont<P>;
  std::vector<u32> fa(n, 0), fb(n, 0);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = M::to(static_cast<u32>(a[i] % P));
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = M::to(static_cast<u32>(b[i] % P));
  forward<P>(fa);
  forward<P>(fb);
  for (std::size_t i = 0; i < n; ++i) fa[i] = M::mul(fa[i], fb[i]);
  inverse<P>(fa);
  for (auto& x : fa) x = M::reduce(x);
  return fa;
}

}  // namespace

std::optional<std::vector<u64>> mul_ntt(const PrimeField& f,
                                        std::span<const u64> a,
                                        std::span<const u64> b) {
  if (a.empty() || b.empty()) return std::vector<u64>{};
  if (!f.is_small()) return std::nullopt;
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = std::bit_ceil(out_len);
  if (n > (std::size_t{1} << kMaxLog)) return std::nullopt;
  const u128 q1 = f.modulus() - 1;
  const u128 bound = static_cast<u128>(std::min(a.size(), b.size())) * q1 * q1;
  const u128 p01 = static_cast<u128>(kP0) * kP1;
  if (bound >= p01 * kP2) return std::nullopt;
  const u64 q = f.modulus();
  std::vector<u64> out(out_len);

  const auto r0 = convolve<kP0>(a, b, n);
  if (bound < kP0) {
    for (std::size_t i = 0; i < out_len; ++i) out[i] = r0[i] % q;
    return out;
  }
  const auto r1 = convolve<kP1>(a, b, n);
  constexpr u64 inv_p0_mod_p1 = pow_mod(kP0, kP1 - 2, kP1);
  if (bound < p01) {
    for (std::size_t i = 0; i < out_len; ++i) {
      const u64 v0 = r0[i];
      const u64 v1 = (r1[i] + kP1 - v0 % kP1) % kP1 * inv_p0_mod_p1 % kP1;
      out[i] = static_cast<u64>((v0 + static_cast<u128>(v1) * kP0) % q);
    }
    return out;
  }
  const auto r2 = convolve<kP2>(a, b, n);
  constexpr u64 inv_p0p1_mod_p2 =
      pow_mod(static_cast<u64>(kP0 % kP2) * (kP1 % kP2) % kP2, kP2 - 2, kP2);
  const u64 p0_mod_q = kP0 % q;
  const u64 p0p1_mod_q = static_cast<u64>(p01 % q);
  for (std::size_t i = 0; i < out_len; ++i) {
    const u64 v0 = r0[i];
    const u64 v1 = (r1[i] + kP1 - v0 % kP1) % kP1 * inv_p0_mod_p1 % kP1;
    // x = v0 + v1*p0 + v2*p0*p1
    const u64 partial_mod_p2 = (v0 % kP2 + (v1 % kP2) * (kP0 % kP2)) % kP2;
    const u64 v2 = (r2[i] + kP2 - partial_mod_p2) % kP2 * inv_p0p1_mod_p2 % kP2;
    const u128 x = static_cast<u128>(v0 % q) + static_cast<u128>(v1 % q) * p0_mod_q +
                   static_cast<u128>(v2 % q) * p0p1_mod_q;
    out[i] = static_cast<u64>(x % q);
  }
  return out;
}

}  // namespace ddfx::kernels
