#ifndef DDFX_PRIME_FIELD_HPP
#define DDFX_PRIME_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ddfx {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Raised when two operands live over different prime fields.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// a*b mod m for a, b < m < 2^63. The quotient estimate from long double is
// off by at most a few units; the wrapped remainder is corrected by m.
inline u64 mulmod(u64 a, u64 b, u64 m) noexcept {
  if (m <= (u64{1} << 32)) return a * b % m;
  const u64 q = static_cast<u64>(static_cast<long double>(a) * b / m);
  auto r = static_cast<std::int64_t>(a * b - q * m);
  const auto sm = static_cast<std::int64_t>(m);
  while (r < 0) r += sm;
  while (r >= sm) r -= sm;
  return static_cast<u64>(r);
}

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(u64 n);

/// The prime field F_q with q < 2^63.
///
/// Elements are plain u64 values kept in [0, q). The field is a small value
/// type; polynomials carry it by value and compare moduli on every binary op.
class PrimeField {
 public:
  explicit PrimeField(u64 q);

  u64 modulus() const noexcept { return q_; }
  bool is_small() const noexcept { return q_ < (u64{1} << 32); }

  u64 reduce(u64 a) const noexcept { return a % q_; }
  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : q_ - a; }
  u64 mul(u64 a, u64 b) const noexcept { return mulmod(a, b, q_); }
  u64 pow(u64 a, u64 e) const noexcept;
  // Throws std::domain_error on zero.
  u64 inv(u64 a) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  u64 q_;
};

inline void require_same_field(const PrimeField& a, const PrimeField& b) {
  if (a != b) {
    throw FieldMismatch("operands over F_" + std::to_string(a.modulus()) +
                        " and F_" + std::to_string(b.modulus()));
  }
}

}  // namespace ddfx

#endif  // DDFX_PRIME_FIELD_HPP
