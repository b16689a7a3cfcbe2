#include <doctest.h>

#include <random>

#include "ddfx/errors.hpp"
#include "ddfx/frobenius.hpp"
#include "ddfx/poly.hpp"
#include "ddfx/quotient_poly.hpp"
#include "oracles.hpp"

using namespace ddfx;
using oracle::make;

TEST_CASE("prime field arithmetic") {
  PrimeField f(101);
  CHECK(f.mul(50, 3) == 49);
  CHECK(f.mul(f.inv(7), 7) == 1);
  CHECK(f.pow(2, 100) == 1);
  CHECK_THROWS_AS(f.inv(0), std::domain_error);
  CHECK_THROWS(PrimeField(100));
  CHECK_THROWS(PrimeField(1));

  const u64 big = (u64{1} << 61) - 1;
  PrimeField g(big);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const u64 a = rng() % big, b = rng() % big;
    CHECK(g.mul(a, b) == static_cast<u64>(static_cast<u128>(a) * b % big));
  }
}

TEST_CASE("worked polynomial identities") {
  const auto x1 = make(2, {1, 1});
  CHECK(x1 * x1 == make(2, {1, 0, 1}));
  CHECK(x1 * make(2, {1}) == x1);
  CHECK((x1 * FieldPoly(PrimeField(2))).is_zero());

  auto [qt, r] = poly_divrem(make(2, {0, 1, 0, 0, 1}), make(2, {0, 1, 1}));
  CHECK(qt == make(2, {1, 1, 1}));
  CHECK(r.is_zero());
  auto [q2, r2] = poly_divrem(make(5, {1, 2}), make(5, {0, 0, 1}));
  CHECK(q2.is_zero());
  CHECK(r2 == make(5, {1, 2}));

  CHECK(poly_gcd_monic(make(2, {0, 1, 1}), make(2, {1, 0, 1})) == make(2, {1, 1}));
  CHECK(poly_gcd_monic(make(5, {2, 4}), FieldPoly(PrimeField(5))) == make(5, {3, 1}));
  CHECK(poly_gcd_monic(make(5, {2, 4}), make(5, {1})).is_one());
  CHECK_THROWS_AS(make(3, {1}) + make(5, {1}), FieldMismatch);
}

TEST_CASE("multiplication matches schoolbook oracle across kernels") {
  std::mt19937_64 rng(7);
  for (u64 q : {u64{2}, u64{101}, u64{998244353}, (u64{1} << 61) - 1}) {
    const PrimeField f(q);
    for (std::size_t n : {1u, 5u, 40u, 170u, 700u}) {
      for (std::size_t m : {1u, 33u, 300u}) {
        oracle::Coeffs a(n), b(m);
        for (auto& v : a) v = rng() % q;
        for (auto& v : b) v = rng() % q;
        a.back() = 1;
        b.back() = 1;
        const auto want = oracle::mul(a, b, q);
        CHECK(poly_mul(FieldPoly(f, a), FieldPoly(f, b)).coeffs() == want);
        auto kar = kernels::mul_karatsuba(f, a, b);
        oracle::trim(kar);
        CHECK(kar == want);
        if (auto ntt = kernels::mul_ntt(f, a, b)) {
          oracle::trim(*ntt);
          CHECK(*ntt == want);
        }
      }
    }
  }
}

TEST_CASE("modular reduction and composition") {
  std::mt19937_64 rng(11);
  for (u64 q : {u64{2}, u64{5}, u64{101}}) {
    for (long d : {1L, 3L, 17L, 90L}) {
      oracle::Coeffs h(d + 1), a(2 * d), b(d), g(d), fc(d + 5);
      for (auto* v : {&h, &a, &b, &g, &fc}) {
        for (auto& c : *v) c = rng() % q;
      }
      h.back() = 1;
      const FieldPoly H = make(q, h);
      ModulusContext ctx(H);
      CHECK(ctx.reduce(make(q, a)).coeffs() == oracle::rem(a, h, q));
      const FieldPoly A = ctx.reduce(make(q, a)), B = make(q, b);
      CHECK(ctx.mul(A, B).coeffs() == oracle::rem(oracle::mul(A.coeffs(), b, q), h, q));

      // Horner with oracle arithmetic gives f(g) mod h.
      const auto G = oracle::rem(g, h, q);
      oracle::Coeffs acc;
      for (std::size_t i = fc.size(); i-- > 0;) {
        acc = oracle::rem(oracle::mul(acc, G, q), h, q);
        acc = oracle::sub(acc, {(q - fc[i]) % q}, q);
      }
      const FieldPoly F = make(q, fc);
      CHECK(modcomp(F, make(q, g), H).coeffs() == acc);
      CHECK(modcomp(F, modcomp_baby_steps(make(q, g), ctx), ctx).coeffs() == acc);
      CHECK(modcomp_horner(F, make(q, g), H).coeffs() == acc);
    }
  }
  const auto h = make(5, {0, 0, 0, 1});
  CHECK(modcomp(make(5, {0, 0, 1}), make(5, {1, 1}), h) == make(5, {1, 2, 1}));
  const auto f = make(5, {1, 2, 3, 4, 1});
  CHECK(modcomp(f, make(5, {0, 1}), h) == poly_rem(f, h));
  CHECK(modcomp(make(5, {0, 1}), f, h) == poly_rem(f, h));
}

TEST_CASE("series inverse") {
  std::mt19937_64 rng(3);
  const u64 q = 101;
  oracle::Coeffs a(60);
  for (auto& v : a) v = rng() % q;
  a[0] = 5;
  const auto inv = kernels::series_inverse(PrimeField(q), a, 50);
  auto prod = oracle::mul(a, inv, q);
  prod.resize(50, 0);
  oracle::Coeffs one(50, 0);
  one[0] = 1;
  CHECK(prod == one);
}

TEST_CASE("text format round trip and rejection") {
  const auto p = parse_poly("q=7; 1,0,3,1");
  CHECK(p == make(7, {1, 0, 3, 1}));
  CHECK(format_poly(p) == "q=7; 1,0,3,1");
  CHECK(parse_poly(format_poly(p)) == p);
  CHECK_THROWS(parse_poly("q=8; 1,1"));
  CHECK_THROWS(parse_poly("q=7; 1,9"));
  CHECK_THROWS(parse_poly("q=7; 1,0"));
  CHECK_THROWS(parse_poly("7; 1,1"));
  CHECK_THROWS(parse_poly("q=7; 1,,1"));
}

TEST_CASE("frobenius powers") {
  CHECK(frobenius_power(make(3, {1, 0, 1}), 2) == make(3, {0, 1}));
  CHECK(frobenius_power(make(2, {1, 1, 1}), 1) == make(2, {1, 1}));
  CHECK(frobenius_power(make(7, {3, 1, 4, 1}), 0) == make(7, {0, 1}));

  // Oracle: repeated q-th powering with oracle arithmetic.
  const u64 q = 5;
  const oracle::Coeffs h = {2, 1, 0, 3, 1, 1, 0, 1};
  oracle::Coeffs cur = {0, 1};
  for (int a = 1; a <= 9; ++a) {
    oracle::Coeffs r = {1};
    for (u64 e = 0; e < q; ++e) r = oracle::rem(oracle::mul(r, cur, q), h, q);
    cur = r;
    CHECK(frobenius_power(make(q, h), a).coeffs() == cur);
  }

  const auto H = make(q, h);
  CHECK(compose_powers(frobenius_power(H, 3), frobenius_power(H, 4), H) == frobenius_power(H, 7));
  CHECK(compose_powers(frobenius_power(H, 4), frobenius_power(H, 3), H) == frobenius_power(H, 7));
  CHECK(compose_powers(frobenius_power(H, 5), make(q, {0, 1}), H) == frobenius_power(H, 5));
  // A ladder restricted to a divisor of its modulus serves the same powers.
  const oracle::Coeffs g = {1, 3, 1}, hg = oracle::mul(h, g, q);
  FrobeniusLadder big(std::make_shared<const ModulusContext>(make(q, hg)));
  for (int a : {6, 11, 9}) {
    CHECK(big.power(a).coeffs() == oracle::rem(oracle::frobenius_chain(hg, q, a + 1)[a], hg, q));
  }
  FrobeniusLadder small = big.restrict_to(std::make_shared<const ModulusContext>(H));
  for (int a : {6, 11, 13}) CHECK(small.power(a) == frobenius_power(H, a));

  const auto h3 = make(3, {1, 0, 1});
  const auto xq = frobenius_power(h3, 1);
  CHECK(compose_powers(xq, xq, h3) == make(3, {0, 1}));
}

TEST_CASE("difference gcd") {
  const auto h = make(2, {0, 1, 0, 0, 1});
  CHECK(difference_gcd(h, 3, 1) == h);
  CHECK(difference_gcd(h, 2, 1) == make(2, {0, 1, 1}));
  CHECK(difference_gcd(h, 4, 4) == h);
}

TEST_CASE("multipoint evaluation over the quotient ring") {
  const u64 q = 2;
  const auto h = make(q, {0, 1, 0, 0, 1});
  QuotientRingPoly lin{{make(q, {1, 1}), make(q, {1})}, h};
  const auto pts = std::vector<FieldPoly>{make(q, {0, 0, 1}), make(q, {1, 1, 1})};
  const auto vals = multipoint_eval_quotient(lin, pts);
  REQUIRE(vals.size() == 2);
  CHECK(vals[0] == make(q, {1, 1, 1}));
  CHECK(vals[1] == make(q, {0, 0, 1}));
  CHECK(multipoint_eval_quotient(lin, {}).empty());

  std::mt19937_64 rng(5);
  const u64 p = 101;
  oracle::Coeffs hc(41);
  for (auto& v : hc) v = rng() % p;
  hc.back() = 1;
  const auto H = make(p, hc);
  std::vector<FieldPoly> coeffs, points;
  for (int i = 0; i < 37; ++i) {
    oracle::Coeffs c(40);
    for (auto& v : c) v = rng() % p;
    coeffs.push_back(make(p, c));
  }
  for (int i = 0; i < 53; ++i) {
    oracle::Coeffs c(40);
    for (auto& v : c) v = rng() % p;
    points.push_back(make(p, c));
  }
  const auto got = multipoint_eval_quotient(QuotientRingPoly{coeffs, H}, points);
  for (std::size_t k = 0; k < points.size(); ++k) {
    oracle::Coeffs acc;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      acc = oracle::rem(oracle::mul(acc, points[k].coeffs(), p), hc, p);
      acc = oracle::sub(acc, oracle::sub({}, coeffs[i].coeffs(), p), p);
    }
    CHECK(got[k].coeffs() == acc);
  }
  CHECK_THROWS(multipoint_eval_quotient(QuotientRingPoly{coeffs, H}, {make(p, oracle::Coeffs(45, 1))}));
}
