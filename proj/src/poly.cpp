#include "ddfx/poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "ddfx/errors.hpp"

namespace ddfx {

namespace {

constexpr std::size_t kSchoolbookCutoff = 32;
// When every coefficient sum fits 32 bits the schoolbook loop vectorizes and
// stays ahead of Karatsuba for longer.
constexpr std::size_t kSchoolbook32Cutoff = 96;

bool fits_u32(const PrimeField& f, std::size_t shorter) {
  const u128 q1 = f.modulus() - 1;
  return static_cast<u128>(shorter) * q1 * q1 < (u128{1} << 32);
}

std::size_t schoolbook_cutoff(const PrimeField& f, std::size_t shorter) {
  return fits_u32(f, std::min(shorter, kSchoolbook32Cutoff)) ? kSchoolbook32Cutoff
                                                             : kSchoolbookCutoff;
}
constexpr std::size_t kNttCutoff = 160;
constexpr long kBarrettCutoff = 48;

void add_into(const PrimeField& f, std::vector<u64>& dst, std::size_t offset,
              std::span<const u64> src) {
  if (dst.size() < offset + src.size()) dst.resize(offset + src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[offset + i] = f.add(dst[offset + i], src[i]);
  }
}

void trim(std::vector<u64>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

std::vector<u64> karatsuba_rec(const PrimeField& f, std::span<const u64> a,
                               std::span<const u64> b) {
  if (a.empty() || b.empty()) return {};
  if (std::min(a.size(), b.size()) <= schoolbook_cutoff(f, std::min(a.size(), b.size()))) {
    return kernels::mul_schoolbook(f, a, b);
  }
  if (a.size() != b.size()) {
    if (a.size() < b.size()) std::swap(a, b);
    // a is longer: slice it into chunks the size of b.
    std::vector<u64> out(a.size() + b.size() - 1, 0);
    for (std::size_t off = 0; off < a.size(); off += b.size()) {
      std::size_t len = std::min(b.size(), a.size() - off);
      add_into(f, out, off, karatsuba_rec(f, a.subspan(off, len), b));
    }
    return out;
  }
  const std::size_t n = a.size();
  const std::size_t h = n / 2;
  const std::size_t n1 = n - h;
  auto a0 = a.first(h), a1 = a.subspan(h);
  auto b0 = b.first(h), b1 = b.subspan(h);
  std::vector<u64> z0 = karatsuba_rec(f, a0, b0);
  std::vector<u64> z2 = karatsuba_rec(f, a1, b1);
  std::vector<u64> sa(a1.begin(), a1.end()), sb(b1.begin(), b1.end());
  for (std::size_t i = 0; i < h; ++i) {
    sa[i] = f.add(sa[i], a0[i]);
    sb[i] = f.add(sb[i], b0[i]);
  }
  std::vector<u64> z1 = karatsuba_rec(f, sa, sb);
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = f.sub(z1[i], z0[i]);
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = f.sub(z1[i], z2[i]);
  (void)n1;
  std::vector<u64> out(2 * n - 1, 0);
  std::copy(z0.begin(), z0.end(), out.begin());
  add_into(f, out, h, z1);
  add_into(f, out, 2 * h, z2);
  return out;
}

// Monic long division in place: leaves the remainder in a[0..deg b).
void long_divide_monic(const PrimeField& f, std::vector<u64>& a,
                       std::span<const u64> b, std::vector<u64>* quotient) {
  const std::size_t lb = b.size();
  if (a.size() < lb) {
    if (quotient) quotient->clear();
    return;
  }
  const std::size_t lq = a.size() - lb + 1;
  if (quotient) quotient->assign(lq, 0);
  for (std::size_t i = lq; i-- > 0;) {
    u64 c = a[i + lb - 1];
    if (quotient) (*quotient)[i] = c;
    if (c == 0) continue;
    u64 nc = f.neg(c);
    for (std::size_t j = 0; j + 1 < lb; ++j) {
      a[i + j] = f.add(a[i + j], f.mul(nc, b[j]));
    }
    a[i + lb - 1] = 0;
  }
  a.resize(lb - 1);
}

}  // namespace

namespace kernels {

std::vector<u64> mul_schoolbook(const PrimeField& f, std::span<const u64> a,
                                std::span<const u64> b) {
  if (a.empty() || b.empty()) return {};
  const u64 q = f.modulus();
  const u128 q1 = q - 1;
  if (fits_u32(f, std::min(a.size(), b.size()))) {
    if (a.size() > b.size()) std::swap(a, b);
    std::vector<std::uint32_t> a32(a.begin(), a.end()), b32(b.begin(), b.end());
    std::vector<std::uint32_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a32.size(); ++i) {
      const std::uint32_t ai = a32[i];
      if (ai == 0) continue;
      std::uint32_t* row = acc.data() + i;
      const std::uint32_t* bp = b32.data();
      for (std::size_t j = 0; j < b32.size(); ++j) row[j] += ai * bp[j];
    }
    std::vector<u64> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i] % q;
    return out;
  }
  if (static_cast<u128>(std::min(a.size(), b.size())) * q1 * q1 < (u128{1} << 64)) {
    if (a.size() > b.size()) std::swap(a, b);
    std::vector<u64> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const u64 ai = a[i];
      if (ai == 0) continue;
      u64* row = out.data() + i;
      for (std::size_t j = 0; j < b.size(); ++j) row[j] += ai * b[j];
    }
    for (auto& v : out) v %= q;
    return out;
  }
  std::vector<u128> acc(a.size() + b.size() - 1, 0);
  if (f.is_small()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const u64 ai = a[i];
      if (ai == 0) continue;
      u128* row = acc.data() + i;
      for (std::size_t j = 0; j < b.size(); ++j) row[j] += ai * b[j];
    }
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += f.mul(a[i], b[j]);
    }
  }
  std::vector<u64> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    out[i] = static_cast<u64>(acc[i] % q);
  }
  return out;
}

std::vector<u64> mul_karatsuba(const PrimeField& f, std::span<const u64> a,
                               std::span<const u64> b) {
  return karatsuba_rec(f, a, b);
}

std::vector<u64> mul(const PrimeField& f, std::span<const u64> a,
                     std::span<const u64> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t shorter = std::min(a.size(), b.size());
  if (shorter <= schoolbook_cutoff(f, shorter)) return mul_schoolbook(f, a, b);
#ifdef DDFX_NTT
  if (shorter >= kNttCutoff) {
    if (auto r = mul_ntt(f, a, b)) return std::move(*r);
  }
#endif
  return mul_karatsuba(f, a, b);
}

std::vector<u64> series_inverse(const PrimeField& f, std::span<const u64> a,
                                std::size_t n) {
  if (n == 0) return {};
  if (a.empty() || a[0] == 0) {
    throw std::domain_error("series inverse needs a unit constant term");
  }
  std::vector<u64> g{f.inv(a[0])};
  std::size_t have = 1;
  while (have < n) {
    std::size_t next = std::min(2 * have, n);
    std::span<const u64> a_low = a.first(std::min(a.size(), next));
    std::vector<u64> ag = mul(f, a_low, g);
    ag.resize(next, 0);
    // 2 - a*g
    for (auto& v : ag) v = f.neg(v);
    ag[0] = f.add(ag[0], 2 % f.modulus());
    std::vector<u64> ng = mul(f, g, ag);
    ng.resize(next, 0);
    g = std::move(ng);
    have = next;
  }
  return g;
}

}  // namespace kernels

FieldPoly::FieldPoly(PrimeField field, std::vector<u64> coeffs)
    : field_(field), c_(std::move(coeffs)) {
  for (auto& v : c_) v = field_.reduce(v);
  normalize();
}

FieldPoly FieldPoly::constant(PrimeField field, u64 c) {
  return FieldPoly(field, std::vector<u64>{c});
}

FieldPoly FieldPoly::x(PrimeField field) {
  return FieldPoly(field, std::vector<u64>{0, 1});
}

FieldPoly FieldPoly::monomial(PrimeField field, std::size_t degree, u64 c) {
  std::vector<u64> v(degree + 1, 0);
  v[degree] = c;
  return FieldPoly(field, std::move(v));
}

void FieldPoly::normalize() { trim(c_); }

FieldPoly FieldPoly::monic() const {
  if (is_zero() || is_monic()) return *this;
  return scaled(field_.inv(leading()));
}

FieldPoly FieldPoly::derivative() const {
  if (c_.size() <= 1) return FieldPoly(field_);
  std::vector<u64> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    d[i - 1] = field_.mul(c_[i], field_.reduce(i));
  }
  return FieldPoly(field_, std::move(d));
}

FieldPoly FieldPoly::scaled(u64 s) const {
  s = field_.reduce(s);
  std::vector<u64> v(c_);
  for (auto& x : v) x = field_.mul(x, s);
  return FieldPoly(field_, std::move(v));
}

u64 FieldPoly::eval(u64 point) const {
  point = field_.reduce(point);
  u64 acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    acc = field_.add(field_.mul(acc, point), c_[i]);
  }
  return acc;
}

FieldPoly& FieldPoly::operator+=(const FieldPoly& o) {
  require_same_field(field_, o.field_);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.add(c_[i], o.c_[i]);
  normalize();
  return *this;
}

FieldPoly& FieldPoly::operator-=(const FieldPoly& o) {
  require_same_field(field_, o.field_);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.sub(c_[i], o.c_[i]);
  normalize();
  return *this;
}

FieldPoly& FieldPoly::operator*=(const FieldPoly& o) {
  *this = poly_mul(*this, o);
  return *this;
}

FieldPoly operator*(const FieldPoly& a, const FieldPoly& b) {
  return poly_mul(a, b);
}

FieldPoly FieldPoly::operator-() const {
  std::vector<u64> v(c_);
  for (auto& x : v) x = field_.neg(x);
  return FieldPoly(field_, std::move(v));
}

FieldPoly poly_mul(const FieldPoly& a, const FieldPoly& b) {
  require_same_field(a.field(), b.field());
  return FieldPoly(a.field(), kernels::mul(a.field(), a.coeffs(), b.coeffs()));
}

std::pair<FieldPoly, FieldPoly> poly_divrem(const FieldPoly& a,
                                            const FieldPoly& b) {
  require_same_field(a.field(), b.field());
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  const PrimeField& f = a.field();
  if (a.degree() < b.degree()) return {FieldPoly(f), a};
  FieldPoly bm = b.monic();
  const u64 lc_inv = f.inv(b.leading());
  std::vector<u64> rem(a.coeffs());
  std::vector<u64> quot;
  long_divide_monic(f, rem, bm.coeffs(), &quot);
  // a = q' * monic(b) + r, so q = q' / lc(b).
  for (auto& v : quot) v = f.mul(v, lc_inv);
  return {FieldPoly(f, std::move(quot)), FieldPoly(f, std::move(rem))};
}

FieldPoly poly_rem(const FieldPoly& a, const FieldPoly& b) {
  require_same_field(a.field(), b.field());
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (a.degree() < b.degree()) return a;
  const PrimeField& f = a.field();
  std::vector<u64> rem(a.coeffs());
  if (b.is_monic()) {
    long_divide_monic(f, rem, b.coeffs(), nullptr);
  } else {
    FieldPoly bm = b.monic();
    long_divide_monic(f, rem, bm.coeffs(), nullptr);
  }
  return FieldPoly(f, std::move(rem));
}

FieldPoly poly_exact_div(const FieldPoly& a, const FieldPoly& b) {
  auto [q, r] = poly_divrem(a, b);
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return q;
}

FieldPoly poly_gcd_monic(const FieldPoly& a, const FieldPoly& b) {
  require_same_field(a.field(), b.field());
  if (a.is_zero() && b.is_zero()) {
    throw std::domain_error("gcd of two zero polynomials");
  }
  FieldPoly x = a, y = b;
  while (!y.is_zero()) {
    FieldPoly r = poly_rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

bool divides(const FieldPoly& d, const FieldPoly& a) {
  if (d.is_zero()) return a.is_zero();
  return poly_rem(a, d).is_zero();
}

ModulusContext::ModulusContext(FieldPoly h) : h_(std::move(h)) {
  if (h_.degree() < 1 || !h_.is_monic()) {
    throw NotMonic("modulus must be monic of degree >= 1");
  }
  const long d = h_.degree();
  if (d >= kBarrettCutoff) {
    std::vector<u64> rev(h_.coeffs().rbegin(), h_.coeffs().rend());
    rev_inv_ = kernels::series_inverse(h_.field(), rev,
                                       static_cast<std::size_t>(d - 1));
    use_barrett_ = true;
  }
}

std::vector<u64> ModulusContext::barrett_reduce(std::vector<u64>&& a) const {
  const PrimeField& f = h_.field();
  const std::size_t d = static_cast<std::size_t>(h_.degree());
  trim(a);
  if (a.size() <= d) return std::move(a);
  if (!use_barrett_ || a.size() > 2 * d - 1) {
    long_divide_monic(f, a, h_.coeffs(), nullptr);
    return std::move(a);
  }
  const std::size_t m = a.size() - 1;
  const std::size_t k = m - d + 1;  // quotient length
  std::vector<u64> ra(k);
  for (std::size_t i = 0; i < k; ++i) ra[i] = a[m - i];
  std::vector<u64> qrev =
      kernels::mul(f, ra, std::span<const u64>(rev_inv_).first(k));
  qrev.resize(k, 0);
  std::reverse(qrev.begin(), qrev.end());
  // Only the low d coefficients of q*h are needed.
  std::span<const u64> hlow = std::span<const u64>(h_.coeffs()).first(d);
  std::vector<u64> qh = kernels::mul(f, qrev, hlow);
  a.resize(d);
  for (std::size_t i = 0; i < d && i < qh.size(); ++i) a[i] = f.sub(a[i], qh[i]);
  return std::move(a);
}

FieldPoly ModulusContext::reduce(const FieldPoly& a) const {
  require_same_field(a.field(), h_.field());
  if (a.degree() < h_.degree()) return a;
  return FieldPoly(h_.field(), barrett_reduce(std::vector<u64>(a.coeffs())));
}

FieldPoly ModulusContext::reduce(std::vector<u64>&& coeffs) const {
  return FieldPoly(h_.field(), barrett_reduce(std::move(coeffs)));
}

FieldPoly ModulusContext::mul(const FieldPoly& a, const FieldPoly& b) const {
  require_same_field(a.field(), h_.field());
  require_same_field(b.field(), h_.field());
  return FieldPoly(h_.field(),
                   barrett_reduce(kernels::mul(h_.field(), a.coeffs(), b.coeffs())));
}

FieldPoly ModulusContext::pow(const FieldPoly& base, const mpz_class& e) const {
  if (e < 0) throw std::domain_error("negative exponent");
  FieldPoly b = reduce(base);
  FieldPoly r = reduce(FieldPoly::constant(h_.field(), 1));
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return r;
  for (std::size_t i = bits; i-- > 0;) {
    r = sqr(r);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, b);
  }
  return r;
}

FieldPoly ModulusContext::pow(const FieldPoly& base, u64 e) const {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &e);
  return pow(base, z);
}

FieldPoly modcomp(const FieldPoly& f, const FieldPoly& g, const FieldPoly& h) {
  return modcomp(f, g, ModulusContext(h));
}

std::vector<FieldPoly> modcomp_baby_steps(const FieldPoly& g, const ModulusContext& ctx) {
  const PrimeField& field = ctx.field();
  require_same_field(g.field(), field);
  const FieldPoly gr = ctx.reduce(g);
  const std::size_t m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(ctx.degree())))));
  std::vector<FieldPoly> pw;
  pw.reserve(m + 1);
  pw.push_back(ctx.reduce(FieldPoly::constant(field, 1)));
  for (std::size_t j = 1; j <= m; ++j) pw.push_back(ctx.mul(pw.back(), gr));
  return pw;
}

FieldPoly modcomp(const FieldPoly& f, const FieldPoly& g,
                  const ModulusContext& ctx) {
  const PrimeField& field = ctx.field();
  require_same_field(f.field(), field);
  require_same_field(g.field(), field);
  if (f.is_zero()) return FieldPoly(field);
  if (f.size() == 1) return ctx.reduce(f);
  const FieldPoly gr = ctx.reduce(g);
  const std::size_t m =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(f.size()))));
  std::vector<FieldPoly> pw;
  pw.reserve(m + 1);
  pw.push_back(FieldPoly::constant(field, 1));
  for (std::size_t j = 1; j <= m; ++j) pw.push_back(ctx.mul(pw.back(), gr));
  return modcomp(f, pw, ctx);
}

FieldPoly modcomp(const FieldPoly& f, const std::vector<FieldPoly>& pw,
                  const ModulusContext& ctx) {
  const PrimeField& field = ctx.field();
  require_same_field(f.field(), field);
  if (pw.size() < 2) throw std::invalid_argument("modcomp needs g^0..g^m with m >= 1");
  if (f.is_zero()) return FieldPoly(field);
  const std::size_t n = f.size();
  if (n == 1) return ctx.reduce(f);
  const std::size_t m = pw.size() - 1;
  const std::size_t d = static_cast<std::size_t>(ctx.degree());

  const u64 q = field.modulus();
  const bool small = field.is_small();
  std::vector<u128> acc(d);
  auto block = [&](std::size_t b) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t idx = b * m + j;
      if (idx >= n) break;
      const u64 c = f.coeffs()[idx];
      if (c == 0) continue;
      const auto& pc = pw[j].coeffs();
      if (small) {
        for (std::size_t t = 0; t < pc.size(); ++t) acc[t] += c * pc[t];
      } else {
        for (std::size_t t = 0; t < pc.size(); ++t) acc[t] += field.mul(c, pc[t]);
      }
    }
    std::vector<u64> out(d);
    for (std::size_t t = 0; t < d; ++t) out[t] = static_cast<u64>(acc[t] % q);
    return FieldPoly(field, std::move(out));
  };

  const std::size_t blocks = (n + m - 1) / m;
  FieldPoly res = block(blocks - 1);
  for (std::size_t b = blocks - 1; b-- > 0;) {
    res = ctx.mul(res, pw[m]);
    res += block(b);
  }
  return res;
}

FieldPoly modcomp_horner(const FieldPoly& f, const FieldPoly& g,
                         const FieldPoly& h) {
  ModulusContext ctx(h);
  const PrimeField& field = ctx.field();
  require_same_field(f.field(), field);
  const FieldPoly gr = ctx.reduce(g);
  FieldPoly res(field);
  for (std::size_t i = f.size(); i-- > 0;) {
    res = ctx.mul(res, gr);
    res += FieldPoly::constant(field, f.coeffs()[i]);
  }
  return res;
}

std::string format_coeffs(const FieldPoly& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p.coeffs()[i]);
  }
  return s;
}

std::string format_poly(const FieldPoly& p) {
  return "q=" + std::to_string(p.field().modulus()) + "; " + format_coeffs(p);
}

namespace {

std::string_view strip(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

u64 parse_u64(std::string_view s, const char* what) {
  s = strip(s);
  u64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(std::string("malformed ") + what + ": '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

FieldPoly parse_poly(const std::string& text) {
  std::string_view s = strip(text);
  if (s.substr(0, 2) != "q=") {
    throw ParseError("polynomial text must start with 'q='");
  }
  auto semi = s.find(';');
  if (semi == std::string_view::npos) {
    throw ParseError("polynomial text is missing ';'");
  }
  const u64 q = parse_u64(s.substr(2, semi - 2), "modulus");
  PrimeField field(q);
  std::string_view rest = strip(s.substr(semi + 1));
  std::vector<u64> coeffs;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view tok = rest.substr(0, comma);
    u64 c = parse_u64(tok, "coefficient");
    if (c >= q) {
      throw ParseError("coefficient " + std::to_string(c) +
                                  " out of range for q=" + std::to_string(q));
    }
    coeffs.push_back(c);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
    if (strip(rest).empty()) throw ParseError("dangling ','");
  }
  if (!coeffs.empty() && coeffs.back() == 0) {
    throw ParseError("trailing zero coefficient");
  }
  return FieldPoly(field, std::move(coeffs));
}

}  // namespace ddfx
