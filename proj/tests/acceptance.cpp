// One line per acceptance criterion. Exit status 0 only when all pass.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ddfx/cli.hpp"
#include "ddfx/ddf.hpp"
#include "ddfx/divisor_sets.hpp"
#include "ddfx/int_factor.hpp"
#include "oracles.hpp"

using namespace ddfx;
using oracle::Coeffs;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 1) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << v;
  return s.str();
}

// Criterion 1: split DDF equals the sequential DDF on random inputs.
Outcome ddf_oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(1);
  std::uint64_t mismatches = 0, total = 0;
  for (std::uint64_t q : {2u, 3u, 5u, 101u}) {
    for (int k = 0; k < 500; ++k) {
      const long d = 1 + static_cast<long>(gen() % 200);
      const FieldPoly f = oracle::make(q, oracle::random_squarefree(q, d, gen));
      RngStream rng(k);
      const auto split = recursive_split(f, trivial_pair(d), rng);
      const auto naive = ddf_naive_oracle(f);
      if (split != naive || ddf_product(split, f.field()) != f) ++mismatches;
      ++total;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 300,
          std::to_string(total) + " polynomials, " + std::to_string(mismatches) +
              " mismatches, " + fmt(secs) + " s (limit 300 s)"};
}

// Criterion 2: every monic squarefree polynomial over F_2 of degree <= 12.
Outcome brute_force_f2() {
  const int max_deg = 12;
  const auto irr = oracle::f2::irreducible_table(max_deg);
  std::vector<std::uint32_t> irreducibles;
  for (std::uint32_t m = 2; m < irr.size(); ++m) {
    if (irr[m]) irreducibles.push_back(m);
  }
  std::uint64_t mismatches = 0, checked = 0;
  for (std::uint32_t f = 2; f < (1u << (max_deg + 1)); ++f) {
    std::map<int, std::uint32_t> buckets;
    std::uint32_t rest = f;
    bool squarefree = true;
    for (auto g : irreducibles) {
      if (oracle::f2::deg(g) > oracle::f2::deg(rest)) break;
      if (oracle::f2::mod(rest, g) != 0) continue;
      std::uint32_t quo = 0;
      // rest / g by long division over F_2.
      for (std::uint32_t r = rest; r != 0 && oracle::f2::deg(r) >= oracle::f2::deg(g);) {
        const int shift = oracle::f2::deg(r) - oracle::f2::deg(g);
        quo |= 1u << shift;
        r ^= g << shift;
      }
      rest = quo;
      if (oracle::f2::mod(rest, g) == 0) squarefree = false;
      auto& b = buckets[oracle::f2::deg(g)];
      b = b == 0 ? g : oracle::f2::mul(b, g);
    }
    if (!squarefree) continue;
    ++checked;
    const FieldPoly F = oracle::f2::to_poly(f);
    RngStream rng(f);
    const long d = F.degree();
    const auto split = recursive_split(F, trivial_pair(static_cast<std::uint64_t>(d)), rng);
    const auto naive = ddf_naive_oracle(F);
    std::map<long, FieldPoly> want;
    for (auto [k, b] : buckets) want.emplace(k, oracle::f2::to_poly(b));
    if (split != want || naive != want) ++mismatches;
  }
  return {mismatches == 0, std::to_string(checked) + " squarefree polynomials, " +
                               std::to_string(mismatches) + " mismatches"};
}

std::vector<std::uint64_t> prime_factors(std::uint64_t d) {
  std::vector<std::uint64_t> out;
  for (auto [p, e] : oracle::trial_factor(d)) out.insert(out.end(), e, p);
  return out;
}

// Criterion 3: randomized DDF on instances whose factor degrees divide a
// product of primes <= 13, with |R| above the small-R threshold.
Outcome randomized_smooth() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(3);
  const std::vector<long> smooth = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16,
                                    18, 20, 21, 22, 24, 26, 28, 30};
  const std::vector<std::uint64_t> primes = {2, 3, 5, 7, 11, 13};
  std::uint64_t mismatches = 0, runs = 0, trials = 0, accepted = 0;
  ddf_stats() = {};
  for (int inst = 0; inst < 200; ++inst) {
    const std::uint64_t q = std::vector<std::uint64_t>{2, 3, 5}[inst % 3];
    std::vector<Coeffs> factors;
    std::set<Coeffs> seen;
    std::map<std::uint64_t, unsigned> lcm;
    long total = 0;
    const long target = 16 + static_cast<long>(gen() % 113);
    while (total < target) {
      const long d = smooth[gen() % smooth.size()];
      if (total + d > 128) break;
      Coeffs g = oracle::random_irreducible(q, d, gen);
      if (!seen.insert(g).second) continue;
      factors.push_back(g);
      total += d;
      for (auto [p, e] : oracle::trial_factor(static_cast<std::uint64_t>(d))) {
        lcm[p] = std::max(lcm[p], e);
      }
    }
    if (factors.empty()) factors.push_back({0, 1}), total = 1;
    Coeffs w = {1};
    for (const auto& g : factors) w = oracle::mul(w, g, q);
    const FieldPoly W = oracle::make(q, w);
    const long L = log_param(total);
    std::vector<std::uint64_t> R;
    for (auto [p, e] : lcm) R.insert(R.end(), e, p);
    const std::size_t want_size = static_cast<std::size_t>(4 * L * L) + 1 + gen() % 16;
    while (R.size() < want_size) R.push_back(primes[gen() % primes.size()]);
    std::shuffle(R.begin(), R.end(), gen);

    const auto expect = oracle::bucket(factors, q);
    const auto naive = ddf_naive_oracle(W);
    if (oracle::flatten(naive) != expect) ++mismatches;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RngStream rng(seed);
      if (ddf_randomized(W, R, rng) != naive) ++mismatches;
      ++runs;
    }
    // Direct trials of the subset split.
    RngStream trng(1000 + inst);
    for (int k = 0; k < 5; ++k) {
      auto t = subset_split_trial(W, R, trng);
      ++trials;
      if (t.accepted) ++accepted;
    }
  }
  const auto& st = ddf_stats();
  const double rate = static_cast<double>(accepted) / static_cast<double>(trials);
  const double inner = st.split_trials ? static_cast<double>(st.split_accepted - accepted) /
                                             static_cast<double>(st.split_trials - trials)
                                       : 1.0;
  return {mismatches == 0 && trials >= 1000 && rate >= 0.075 && inner >= 0.075,
          std::to_string(runs) + " runs, " + std::to_string(mismatches) +
              " mismatches; acceptance " + fmt(rate, 3) + " over " + std::to_string(trials) +
              " direct trials, " + fmt(inner, 3) + " inside the recursion (floor 0.075); " +
              fmt(seconds_since(t0)) + " s"};
}

// Criterion 5: interval products on small trivial pairs against nested loops
// over independently computed Frobenius powers.
Outcome interval_consistency() {
  std::mt19937_64 gen(5);
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n <= 400; ++n) {
    if (trivial_pair(n).pair_count() <= 256) ns.push_back(n);
  }
  std::uint64_t mismatches = 0, split_merge = 0;
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t q = std::vector<std::uint64_t>{2, 3, 5, 101}[k % 4];
    const std::uint64_t n = ns[gen() % ns.size()];
    const auto pair = trivial_pair(n);
    Coeffs h(2 + gen() % 24);
    for (auto& v : h) v = gen() % q;
    h.back() = 1;
    const FieldPoly H = oracle::make(q, h);
    const auto table = preprocess_powers(H, pair);
    const std::uint64_t last = pair.pair_count() - 1;
    std::uint64_t lo = gen() % (last + 1), hi = gen() % (last + 1);
    if (lo > hi) std::swap(lo, hi);

    std::uint64_t top = 0;
    for (const auto* v : {&pair.s_enum(), &pair.t_enum()}) {
      for (const auto& u : *v) top = std::max<std::uint64_t>(top, u.get_ui());
    }
    const auto chain = oracle::frobenius_chain(h, q, top + 1);
    Coeffs want = oracle::rem({1}, h, q);
    for (std::uint64_t i = lo; i <= hi; ++i) {
      const auto [s, t] = pair.at(i);
      if (s == t) continue;
      want = oracle::rem(oracle::mul(want, oracle::sub(chain[s.get_ui()], chain[t.get_ui()], q), q),
                         h, q);
    }
    const FieldPoly got = interval_polynomial(H, pair, table, lo, hi);
    if (got.coeffs() != want) ++mismatches;
    if (lo < hi) {
      const std::uint64_t m = lo + gen() % (hi - lo);
      const FieldPoly left = interval_polynomial(H, pair, table, lo, m);
      const FieldPoly right = interval_polynomial(H, pair, table, m + 1, hi);
      if (poly_rem(left * right, H) != got) ++split_merge;
    }
  }
  return {mismatches == 0 && split_merge == 0,
          "100 random (h, lo, hi), " + std::to_string(mismatches) + " oracle mismatches, " +
              std::to_string(split_merge) + " split-merge failures"};
}

// Criterion 6.
Outcome divisor_verification() {
  const auto t0 = Clock::now();
  std::uint64_t failures = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    if (!trivial_pair(n).report().verified) ++failures;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 60, "n = 1..10000, " + std::to_string(failures) +
                                          " failures, " + fmt(secs) + " s (limit 60 s)"};
}

// Ordered tuples of pairwise coprime parts > 1 multiplying to the product
// of the given primes: every surjection of primes onto k positions.
void coprime_factorizations(const std::vector<std::uint64_t>& primes,
                            std::vector<std::vector<mpz_class>>& out) {
  const std::size_t np = primes.size();
  for (std::size_t k = 1; k <= np; ++k) {
    std::vector<std::size_t> slot(np, 0);
    for (;;) {
      std::vector<mpz_class> parts(k, 1);
      for (std::size_t i = 0; i < np; ++i) parts[slot[i]] *= primes[i];
      bool onto = true;
      for (const auto& p : parts) onto &= p > 1;
      if (onto) out.push_back(parts);
      std::size_t i = 0;
      while (i < np && ++slot[i] == k) slot[i++] = 0;
      if (i == np) break;
    }
  }
}

// Criterion 7: the congruence test against direct divisibility.
Outcome prime_case() {
  std::uint64_t disagreements = 0, checked = 0;
  for (std::uint64_t n : {3u, 5u, 7u}) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p <= n; ++p) {
      if (oracle::trial_factor(p).size() == 1 && oracle::trial_factor(p).begin()->second == 1) {
        primes.push_back(p);
      }
    }
    std::uint64_t U = 1;
    for (auto p : primes) U *= p;
    std::vector<std::vector<mpz_class>> facs;
    coprime_factorizations(primes, facs);
    for (const auto& parts : facs) {
      for (std::uint64_t b = 0; b <= U; ++b) {
        for (std::uint64_t c = 1; c <= U; ++c) {
          bool direct = true;
          for (std::size_t i = 0; i < parts.size(); ++i) {
            direct &= (b + (i + 1) * c) % parts[i].get_ui() == 0;
          }
          if (prime_case_check({n, parts, b, c}) != direct) ++disagreements;
          ++checked;
        }
      }
    }
  }
  const bool instance = prime_case_check({5, {2, 3, 5}, 7, 1});
  const auto elems = ApSearchHit{7, 1, 3}.progression().elements();
  const bool elements_ok = elems == std::vector<mpz_class>{8, 9, 10};
  return {disagreements == 0 && instance && elements_ok,
          std::to_string(checked) + " certificates, " + std::to_string(disagreements) +
              " disagreements; (U=30, c=1, b=7) gives {8,9,10}: " +
              (instance && elements_ok ? "yes" : "no")};
}

// Criterion 8: factoring against trial division by a test-side prime list.
Outcome integer_factoring() {
  const auto t0 = Clock::now();
  const std::uint64_t limit = 1000000;
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      primes.push_back(i);
      for (std::uint64_t j = i; j <= limit; j += i) {
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
      }
    }
  }
  auto trial = [&](std::uint64_t n) {
    IntegerFactorization out;
    for (auto p : primes) {
      if (p * p > n) break;
      while (n % p == 0) {
        ++out[p];
        n /= p;
      }
    }
    if (n > 1) ++out[n];
    return out;
  };
  std::uint64_t bad_split = 0, bad_ps = 0;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    IntegerFactorization want;
    for (std::uint64_t m = n; m > 1; m /= spf[m]) ++want[spf[m]];
    if (factor_integer(n) != want) ++bad_split;
    if (pollard_strassen_oracle(n) != want) ++bad_ps;
  }
  std::mt19937_64 gen(8);
  for (int k = 0; k < 10000; ++k) {
    const std::uint64_t n = 1 + gen() % 1000000000000ULL;
    const auto want = trial(n);
    if (factor_integer(n) != want) ++bad_split;
    if (pollard_strassen_oracle(n) != want) ++bad_ps;
  }
  const double secs = seconds_since(t0);
  return {bad_split == 0 && bad_ps == 0 && secs < 600,
          "N <= 10^6 and 10^4 random N <= 10^12: " + std::to_string(bad_split) +
              " split mismatches, " + std::to_string(bad_ps) + " Pollard-Strassen mismatches, " +
              fmt(secs) + " s (limit 600 s)"};
}

template <class F>
double timed(F&& fn) {
  const auto t0 = Clock::now();
  fn();
  return seconds_since(t0);
}

// Ben-Or: no factor of degree <= deg/2.
bool irreducible(const FieldPoly& h) {
  ModulusContext ctx(h);
  const FieldPoly x = ctx.reduce(FieldPoly::x(h.field()));
  FieldPoly p = x;
  for (long i = 1; 2 * i <= h.degree(); ++i) {
    p = ctx.pow(p, h.field().modulus());
    if (!poly_gcd_monic(p - x, h).is_one()) return false;
  }
  return true;
}

// Criterion 9. An irreducible h keeps every partial product nonzero, so
// the term-by-term baseline cannot stop multiplying early.
Outcome performance() {
  const PrimeField F(101);
  std::mt19937_64 gen(9);
  auto random_poly = [&](long d) {
    std::vector<u64> c(d + 1);
    for (auto& v : c) v = gen() % 101;
    c.back() = 1;
    return FieldPoly(F, c);
  };
  FieldPoly h = random_poly(512);
  while (!irreducible(h)) h = random_poly(512);
  const auto pair = trivial_pair(65536);
  const auto table = preprocess_powers(h, pair);
  // Whole blocks 2..256 avoid the columns where 512 divides s - t.
  const std::uint64_t ns = pair.s_enum().size();
  const std::uint64_t lo = 2 * ns, hi = 257 * ns - 1;
  FieldPoly a(F), b(F);
  const double t_bsgs = timed([&] { a = interval_polynomial(h, pair, table, lo, hi); });
  const double t_naive = timed([&] { b = interval_polynomial_naive(h, pair, table, lo, hi); });
  const double r1 = t_naive / t_bsgs;

  const FieldPoly f = random_poly(1023), g = random_poly(1023), m = random_poly(1024);
  FieldPoly c(F), d(F);
  const double t_mc = timed([&] { c = modcomp(f, g, m); });
  const double t_h = timed([&] { d = modcomp_horner(f, g, m); });
  const double r2 = t_h / t_mc;
  const bool pass = a == b && !a.is_zero() && c == d && r1 >= 2 && r2 >= 2;
  return {pass, "interval of " + std::to_string(hi - lo + 1) + ": BSGS " + fmt(t_bsgs, 2) +
                    " s vs naive " + fmt(t_naive, 2) + " s (" + fmt(r1, 2) +
                    "x); modcomp " + fmt(t_mc, 3) + " s vs Horner " + fmt(t_h, 3) + " s (" +
                    fmt(r2, 2) + "x); floor 2x"};
}

struct CliRun {
  int code;
  std::string out, err, file;
};

CliRun cli(std::vector<std::string> args, const std::string& file = "") {
  args.insert(args.begin(), "ddfx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  std::string body;
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    body = s.str();
  }
  return {code, out.str(), err.str(), body};
}

// Replaces the wall_ns column of benchmark CSV with a placeholder.
std::string mask_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!header) {
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() == 5) cells[3] = "*";
      line.clear();
      for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
    }
    header = false;
    out << line << '\n';
  }
  return out.str();
}

// Criterion 10: each command twice with identical arguments.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ddfx_acceptance";
  fs::create_directories(dir);
  const std::string data = DDFX_TEST_DATA;
  const std::string pair = (dir / "pair40.json").string();
  cli({"make-trivial-pair", "--n", "40", "--out", pair});
  const std::string csv = (dir / "bench.csv").string();

  struct Case {
    std::vector<std::string> args;
    std::string file;
    bool bench;
  };
  const std::vector<Case> cases = {
      {{"ddf", data + "/x4x.poly"}, "", false},
      {{"ddf", data + "/f2_sextic.poly", "--naive"}, "", false},
      {{"ddf", data + "/f2_irreducible.poly", "--pair", pair, "--seed", "7"}, "", false},
      {{"factor", data + "/f2_sextic.poly", "--seed", "3"}, "", false},
      {{"factor", data + "/f5_cubic.poly", "--seed", "0"}, "", false},
      {{"factor-int", "3628800"}, "", false},
      {{"factor-int", "999962000357", "--baseline", "pollard-strassen"}, "", false},
      {{"factor-int", "1599", "--pair", pair}, "", false},
      {{"factor-int", "1599", "--baseline", "trial"}, "", false},
      {{"verify-divisor-set", pair}, "", false},
      {{"make-trivial-pair", "--n", "25", "--out", (dir / "p25.json").string()},
       (dir / "p25.json").string(), false},
      {{"search-ap", "--n", "5", "--max-b", "30", "--max-c", "4", "--max-len", "4",
        "--primes-only"},
       "",
       false},
      {{"ddf", data + "/missing.poly"}, "", false},
      {{"bench-ddf", "--q", "5", "--degrees", "8,24,40", "--seed", "11"}, "", true},
      {{"bench-ddf", "--q", "2", "--degrees", "30", "--pair", pair, "--csv", csv}, csv, true},
      {{"bench-int", "--bits", "16,24,32", "--seed", "2"}, "", true},
  };
  std::uint64_t diffs = 0;
  std::set<std::string> commands;
  for (const auto& c : cases) {
    commands.insert(c.args[0]);
    auto a = cli(c.args, c.file);
    auto b = cli(c.args, c.file);
    if (c.bench) {
      a.out = mask_wall(a.out);
      b.out = mask_wall(b.out);
      a.file = mask_wall(a.file);
      b.file = mask_wall(b.file);
    }
    if (a.code != b.code || a.out != b.out || a.err != b.err || a.file != b.file) ++diffs;
  }
  fs::remove_all(dir);
  return {diffs == 0 && commands.size() == 8,
          std::to_string(cases.size()) + " invocations covering " +
              std::to_string(commands.size()) + " commands, " + std::to_string(diffs) +
              " diffs (benchmark wall_ns masked)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::uint64_t violations = 0, iterations = 0;
  const std::vector<Criterion> criteria = {
      {1, "DDF oracle equivalence", ddf_oracle_equivalence},
      {2, "brute-force ground truth over F_2", brute_force_f2},
      {3, "randomized smooth DDF", randomized_smooth},
      {4, "small-R pigeonhole invariant",
       [&] {
         return Outcome{violations == 0 && iterations > 0,
                        std::to_string(iterations) + " iterations in criteria 1-3, " +
                            std::to_string(violations) + " violations"};
       }},
      {5, "interval polynomial consistency", interval_consistency},
      {6, "divisor-property verification", divisor_verification},
      {7, "prime-case characterization", prime_case},
      {8, "integer factoring", integer_factoring},
      {9, "performance sanity", performance},
      {10, "CLI determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    // Stats are per thread and reset by criterion 3, so collect them as we go.
    if (c.id <= 3) {
      violations += ddf_stats().pigeonhole_violations;
      iterations += ddf_stats().small_r_iterations;
      ddf_stats() = {};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " - "
              << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
