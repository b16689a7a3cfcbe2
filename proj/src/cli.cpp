#include "ddfx/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <sstream>

#include "ddfx/ddf.hpp"
#include "ddfx/int_factor.hpp"

namespace ddfx {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text)) throw IoError("cannot write '" + path + "'");
}

FieldPoly read_poly(const std::string& path) {
  std::string text = read_file(path);
  // First nonblank line.
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return parse_poly(line);
  }
  throw ParseError("'" + path + "' holds no polynomial");
}

std::uint64_t parse_u64_arg(const std::string& s, const char* what) {
  mpz_class z;
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || z.set_str(s, 10) != 0) {
    throw ParseError(std::string(what) + " must be a nonnegative decimal integer");
  }
  auto v = to_u64(z);
  if (!v || *v > kMaxFactorInput) {
    throw RangeError(std::string(what) + " " + s + " exceeds " + std::to_string(kMaxFactorInput));
  }
  return *v;
}

FieldPoly random_squarefree(const PrimeField& F, long degree, RngStream& rng) {
  for (;;) {
    std::vector<u64> c(static_cast<std::size_t>(degree) + 1);
    for (auto& v : c) v = rng.below(F.modulus());
    c.back() = 1;
    FieldPoly f(F, std::move(c));
    if (poly_gcd_monic(f, f.derivative()).is_one()) return f;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

struct CsvSink {
  std::ostringstream rows;
  CsvSink() { rows << "name,param,seed,wall_ns,ops\n"; }
  void add(const std::string& name, std::uint64_t param, std::uint64_t seed,
           std::chrono::nanoseconds wall, std::uint64_t ops) {
    rows << name << ',' << param << ',' << seed << ',' << wall.count() << ',' << ops << '\n';
  }
};

template <class F>
std::chrono::nanoseconds timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
}

struct Options {
  std::string poly_file, pair_file, out_file, csv_file, int_arg, baseline = "pollard-strassen";
  std::string degrees, bits;
  std::uint64_t seed = 0, n = 0, max_b = 0, max_c = 1, max_len = 1, q = 2;
  bool naive = false, primes_only = false;
};

std::shared_ptr<const DivisorSetPair> load_pair(const std::string& path) {
  return std::make_shared<const DivisorSetPair>(parse_pair_json(read_file(path)));
}

void cmd_ddf(const Options& o, std::ostream& out) {
  const FieldPoly f = read_poly(o.poly_file);
  if (!f.is_monic()) throw NotMonic("input polynomial must be monic");
  DistinctDegreeFactorization ddf;
  if (o.naive) {
    if (f.degree() > 0 && !poly_gcd_monic(f, f.derivative()).is_one()) {
      throw NotSquarefree("input polynomial is not squarefree");
    }
    ddf = ddf_naive_oracle(f);
  } else {
    RngStream rng(o.seed);
    auto pair = o.pair_file.empty()
                    ? std::make_shared<const DivisorSetPair>(
                          trivial_pair(static_cast<std::uint64_t>(std::max<long>(f.degree(), 1))))
                    : load_pair(o.pair_file);
    ddf = recursive_split(f, *pair, rng);
  }
  for (const auto& [d, p] : ddf) out << d << ": " << format_coeffs(p) << '\n';
}

void cmd_factor(const Options& o, std::ostream& out) {
  const FieldPoly f = read_poly(o.poly_file);
  if (f.is_zero()) throw std::domain_error("cannot factor the zero polynomial");
  RngStream rng(o.seed);
  for (const auto& [g, k] : factor_full(f, rng)) out << '(' << format_coeffs(g) << ")^" << k << '\n';
}

void cmd_factor_int(const Options& o, std::ostream& out) {
  const std::uint64_t N = parse_u64_arg(o.int_arg, "N");
  if (N == 0) throw RangeError("N must be positive");
  IntegerFactorization f;
  if (!o.pair_file.empty()) {
    f = factor_integer(N, load_pair(o.pair_file));
  } else if (o.baseline == "pollard-strassen") {
    f = pollard_strassen_oracle(N);
  } else if (o.baseline == "trial") {
    f = trial_division_factor(N);
  } else {
    f = factor_integer(N);
  }
  out << format_factorization(f) << '\n';
}

void cmd_verify(const Options& o, std::ostream& out) {
  const DivisorSetPair pair = parse_pair_json(read_file(o.pair_file));
  const auto& rep = pair.report();
  out << "n: " << pair.n() << '\n'
      << "pairs: " << pair.pair_count() << '\n'
      << "verified: " << (rep.verified ? "true" : "false") << '\n';
  if (!rep.verified) {
    out << "uncovered:";
    for (std::size_t i = 0; i < rep.uncovered.size() && i < 32; ++i) out << ' ' << rep.uncovered[i];
    if (rep.uncovered.size() > 32) out << " ...";
    out << '\n';
    throw NotCovering(std::to_string(rep.uncovered.size()) + " values in [1, n] are not covered");
  }
}

void cmd_search(const Options& o, std::ostream& out) {
  const auto hits = search_ap({o.n, o.max_b, o.max_c, o.max_len, o.primes_only});
  for (const auto& h : hits) {
    out << "b=" << h.b << " c=" << h.c << " len=" << h.len << " elements=";
    for (std::uint64_t i = 1; i <= h.len; ++i) out << (i > 1 ? "," : "") << h.b + i * h.c;
    out << '\n';
  }
  out << "total: " << hits.size() << '\n';
}

void cmd_make_pair(const Options& o, std::ostream& out) {
  if (o.n == 0) throw RangeError("n must be positive");
  const DivisorSetPair pair = trivial_pair(o.n);
  write_file(o.out_file, pair_to_json(pair));
  out << "wrote pair for n=" << o.n << " with " << pair.pair_count() << " differences\n";
}

void emit_csv(const Options& o, const CsvSink& csv, std::ostream& out) {
  if (o.csv_file.empty()) {
    out << csv.rows.str();
  } else {
    write_file(o.csv_file, csv.rows.str());
  }
}

void cmd_bench_ddf(const Options& o, std::ostream& out) {
  const PrimeField F(o.q);
  std::shared_ptr<const DivisorSetPair> fixed;
  if (!o.pair_file.empty()) fixed = load_pair(o.pair_file);
  CsvSink csv;
  for (const auto& tok : split_list(o.degrees)) {
    const std::uint64_t d = parse_u64_arg(tok, "degree");
    if (d == 0) throw RangeError("degrees must be positive");
    RngStream rng(o.seed);
    const FieldPoly f = random_squarefree(F, static_cast<long>(d), rng);
    auto pair = fixed ? fixed : std::make_shared<const DivisorSetPair>(trivial_pair(d));
    ddf_stats() = {};
    DistinctDegreeFactorization a, b;
    auto t_split = timed([&] { a = recursive_split(f, *pair, rng); });
    csv.add("ddf_split", d, o.seed, t_split, ddf_stats().interval_products);
    auto t_naive = timed([&] { b = ddf_naive_oracle(f); });
    csv.add("ddf_naive", d, o.seed, t_naive, d);
    if (a != b) throw ContractError("split and naive DDF disagree at degree " + tok);
  }
  emit_csv(o, csv, out);
}

void cmd_bench_int(const Options& o, std::ostream& out) {
  CsvSink csv;
  for (const auto& tok : split_list(o.bits)) {
    const std::uint64_t b = parse_u64_arg(tok, "bits");
    if (b < 2 || b > 62) throw RangeError("bit sizes must lie in 2..62");
    RngStream rng(o.seed);
    const std::uint64_t N = (std::uint64_t{1} << (b - 1)) | rng.below(std::uint64_t{1} << (b - 1));
    IntegerFactorization x, y;
    auto t_split = timed([&] { x = factor_integer(N); });
    csv.add("int_split", b, o.seed, t_split, x.size());
    auto t_ps = timed([&] { y = pollard_strassen_oracle(N); });
    csv.add("pollard_strassen", b, o.seed, t_ps, y.size());
    if (x != y) throw ContractError("factorizations disagree for N = " + std::to_string(N));
  }
  emit_csv(o, csv, out);
}

int fail(std::ostream& err, const char* code, const std::exception& e) {
  err << "error: " << code << ": " << e.what() << '\n';
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distinct-degree factorization with divisor-set interval products"};
  app.name("ddfx");
  app.require_subcommand(1);
  Options o;

  auto* ddf = app.add_subcommand("ddf", "Distinct-degree factorization of a monic squarefree polynomial");
  ddf->add_option("polyfile", o.poly_file, "Polynomial file")->required();
  ddf->add_option("--pair", o.pair_file, "Divisor-set JSON file (default: trivial pair)");
  ddf->add_option("--seed", o.seed, "Random seed");
  ddf->add_flag("--naive", o.naive, "Use the sequential oracle");

  auto* factor = app.add_subcommand("factor", "Full irreducible factorization");
  factor->add_option("polyfile", o.poly_file, "Polynomial file")->required();
  factor->add_option("--seed", o.seed, "Random seed");

  auto* fint = app.add_subcommand("factor-int", "Deterministic integer factorization");
  fint->add_option("N", o.int_arg, "Integer to factor")->required();
  fint->add_option("--pair", o.pair_file, "Prefactored divisor-set JSON file");
  auto* baseline = fint->add_option("--baseline", o.baseline, "pollard-strassen or trial")
                       ->check(CLI::IsMember({"pollard-strassen", "trial"}));

  auto* verify = app.add_subcommand("verify-divisor-set", "Check the n-divisor property of a pair");
  verify->add_option("file", o.pair_file, "Divisor-set JSON file")->required();

  auto* search = app.add_subcommand("search-ap", "Exhaustive arithmetic-progression search");
  search->add_option("--n", o.n, "Divisor bound")->required();
  search->add_option("--max-b", o.max_b, "Largest offset b")->required();
  search->add_option("--max-c", o.max_c, "Largest step c")->required();
  search->add_option("--max-len", o.max_len, "Largest length")->required();
  search->add_flag("--primes-only", o.primes_only, "Only require the primes up to n");

  auto* make = app.add_subcommand("make-trivial-pair", "Write the beta = 1/2 pair for {1..n}");
  make->add_option("--n", o.n, "Divisor bound")->required();
  make->add_option("--out", o.out_file, "Output JSON file")->required();

  auto* bddf = app.add_subcommand("bench-ddf", "Time interval-split DDF against the sequential oracle");
  bddf->add_option("--q", o.q, "Field size")->required();
  bddf->add_option("--degrees", o.degrees, "Comma-separated degrees")->required();
  bddf->add_option("--pair", o.pair_file, "Divisor-set JSON file (default: trivial pair per degree)");
  bddf->add_option("--csv", o.csv_file, "CSV output file (default: stdout)");
  bddf->add_option("--seed", o.seed, "Random seed");

  auto* bint = app.add_subcommand("bench-int", "Time integer factoring against Pollard-Strassen");
  bint->add_option("--bits", o.bits, "Comma-separated bit sizes")->required();
  bint->add_option("--csv", o.csv_file, "CSV output file (default: stdout)");
  bint->add_option("--seed", o.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*ddf) cmd_ddf(o, out);
    if (*factor) cmd_factor(o, out);
    if (*fint) {
      if (baseline->count() == 0) o.baseline.clear();
      cmd_factor_int(o, out);
    }
    if (*verify) cmd_verify(o, out);
    if (*search) cmd_search(o, out);
    if (*make) cmd_make_pair(o, out);
    if (*bddf) cmd_bench_ddf(o, out);
    if (*bint) cmd_bench_int(o, out);
  } catch (const IoError& e) {
    return fail(err, "E_IO", e);
  } catch (const InvalidField& e) {
    return fail(err, "E_FIELD", e);
  } catch (const FieldMismatch& e) {
    return fail(err, "E_FIELD", e);
  } catch (const ParseError& e) {
    return fail(err, "E_PARSE", e);
  } catch (const NotMonic& e) {
    return fail(err, "E_NOT_MONIC", e);
  } catch (const NotSquarefree& e) {
    return fail(err, "E_NOT_SQUAREFREE", e);
  } catch (const PairError& e) {
    return fail(err, "E_PAIR", e);
  } catch (const NotCovering& e) {
    return fail(err, "E_NOT_COVERING", e);
  } catch (const RangeError& e) {
    return fail(err, "E_RANGE", e);
  } catch (const ContractError& e) {
    return fail(err, "E_CONTRACT", e);
  } catch (const BudgetExceeded& e) {
    return fail(err, "E_BUDGET", e);
  } catch (const std::exception& e) {
    return fail(err, "E_INTERNAL", e);
  }
  return 0;
}

}  // namespace ddfx
