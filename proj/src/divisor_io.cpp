#include <json.hpp>

#include "ddfx/divisor_sets.hpp"

namespace ddfx {

using nlohmann::json;

namespace {

mpz_class big_of(const json& j, const char* what) {
  mpz_class z;
  if (j.is_number_unsigned()) return from_u64(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    z = static_cast<long>(j.get<std::int64_t>());
    return z;
  }
  if (!j.is_string() || z.set_str(j.get<std::string>(), 10) != 0) {
    throw ParseError(std::string("field '") + what + "' must be an integer");
  }
  return z;
}

std::uint64_t u64_of(const json& j, const char* what) {
  auto v = to_u64(big_of(j, what));
  if (!v) throw ParseError(std::string("field '") + what + "' out of range");
  return *v;
}

Rational rational_of(const json& j, const char* what) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    return Rational::make(static_cast<std::int64_t>(u64_of(j, what)), 1);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("field '") + what + "': " + e.what());
  }
}

GenArithProgression gap_of(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("field '") + what + "' must be a list");
  GenArithProgression g;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("base") || !t.contains("step") || !t.contains("length")) {
      throw ParseError(std::string("terms of '") + what + "' need base, step and length");
    }
    g.terms.push_back({big_of(t["base"], "base"), big_of(t["step"], "step"),
                       u64_of(t["length"], "length")});
  }
  return g;
}

json gap_to_json(const GenArithProgression& g) {
  json out = json::array();
  for (const auto& t : g.terms) {
    out.push_back({{"base", t.base.get_str()}, {"step", t.step.get_str()}, {"length", t.length}});
  }
  return out;
}

}  // namespace

DivisorSetPair parse_pair_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("divisor-set file must hold a JSON object");
  for (const char* key : {"n", "alpha", "beta", "S", "T"}) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  }
  std::shared_ptr<FactorTable> table;
  if (doc.contains("factorizations")) {
    const json& f = doc["factorizations"];
    if (!f.is_object()) throw ParseError("'factorizations' must map indices to prime lists");
    table = std::make_shared<FactorTable>();
    for (const auto& [key, primes] : f.items()) {
      std::uint64_t idx = u64_of(json(key), "factorizations index");
      if (!primes.is_array()) throw ParseError("factorization entries must be lists");
      auto& entry = (*table)[idx];
      for (const auto& p : primes) entry.push_back(big_of(p, "factorizations prime"));
    }
  }
  return DivisorSetPair(gap_of(doc["S"], "S"), gap_of(doc["T"], "T"), u64_of(doc["n"], "n"),
                        rational_of(doc["alpha"], "alpha"), rational_of(doc["beta"], "beta"),
                        table ? FactorSource::Table : FactorSource::None, table);
}

std::string pair_to_json(const DivisorSetPair& pair, bool with_factorizations) {
  json doc;
  doc["n"] = pair.n();
  doc["alpha"] = pair.alpha().str();
  doc["beta"] = pair.beta().str();
  doc["S"] = gap_to_json(pair.S());
  doc["T"] = gap_to_json(pair.T());
  if (with_factorizations && pair.prefactored()) {
    json f = json::object();
    for (std::uint64_t i = 0; i < pair.pair_count(); ++i) {
      if (pair.difference(i) == 0) continue;
      json primes = json::array();
      for (const auto& p : pair_factorization(pair, i)) primes.push_back(p.get_str());
      f[std::to_string(i)] = std::move(primes);
    }
    doc["factorizations"] = std::move(f);
  }
  return doc.dump(2) + "\n";
}

}  // namespace ddfx
