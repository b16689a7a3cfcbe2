#include "ddfx/prime_field.hpp"

#include <array>

#include "ddfx/errors.hpp"

namespace ddfx {

namespace {

u64 mulmod_wide(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_wide(r, a, m);
    a = mulmod_wide(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is exact below 3.3 * 10^24.
  static constexpr std::array<u64, 12> kWitnesses = {2,  3,  5,  7,  11, 13,
                                                     17, 19, 23, 29, 31, 37};
  for (u64 a : kWitnesses) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_wide(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(u64 q) : q_(q) {
  if (q >= (u64{1} << 63)) {
    throw InvalidField("field modulus must be below 2^63");
  }
  if (!is_prime_u64(q)) {
    throw InvalidField("field modulus " + std::to_string(q) +
                                " is not prime");
  }
}

u64 PrimeField::pow(u64 a, u64 e) const noexcept { return powmod(a, e, q_); }

u64 PrimeField::inv(u64 a) const {
  if (a % q_ == 0) throw std::domain_error("inverse of zero in F_q");
  return powmod(a, q_ - 2, q_);
}

}  // namespace ddfx
