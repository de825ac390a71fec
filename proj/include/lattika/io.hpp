#pragma once

// JSON readers and writers for the command-line tool. Requires nlohmann/json.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lattika/arakelov.hpp"
#include "lattika/bounded_real.hpp"
#include "lattika/error.hpp"
#include "lattika/lattice.hpp"
#include "lattika/quadform.hpp"
#include "lattika/rational.hpp"

namespace lattika::io {

using nlohmann::json;

inline json read_json_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (json::parse_error const& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

/// {"num": "3", "den": "4"}; a bare JSON integer or "a/b" string is also accepted.
inline Rational rational_from_json(json const& j) {
  if (j.is_object()) {
    if (!j.contains("num") || !j.contains("den")) throw Error(ErrorKind::ParseError, "rational needs num and den");
    auto text = [](json const& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    return parse_reduced(text(j.at("num")), text(j.at("den")));
  }
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorKind::ParseError, "not a rational: " + j.dump());
}

inline json to_json(Rational const& q) {
  return json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

inline json to_json(BoundedReal const& x) { return json{{"value", x.estimate}, {"bound", x.bound}}; }

inline GramMatrix gram_from_json(json const& rows) {
  if (!rows.is_array()) throw Error(ErrorKind::ParseError, "gram must be an array of rows");
  std::size_t const n = rows.size();
  GramMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "gram row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rational_from_json(rows[i][j]);
  }
  return g;
}

inline json gram_to_json(GramMatrix const& g) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(to_json(g(i, j)));
    rows.push_back(row);
  }
  return rows;
}

/// {"label": string?, "rank": n, "gram": [[rational, ...], ...]}
inline Lattice lattice_from_json(json const& j) {
  if (!j.is_object() || !j.contains("gram")) throw Error(ErrorKind::ParseError, "lattice needs a gram field");
  GramMatrix g = gram_from_json(j.at("gram"));
  if (j.contains("rank") && j.at("rank").get<std::size_t>() != g.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "rank field disagrees with the gram matrix");
  }
  std::optional<std::string> label;
  if (j.contains("label") && j.at("label").is_string()) label = j.at("label").get<std::string>();
  return make_lattice(std::move(g), label);
}

inline Lattice read_lattice(std::string const& path) { return lattice_from_json(read_json_file(path)); }

inline json lattice_to_json(Lattice const& lattice) {
  json j;
  if (lattice.label()) j["label"] = *lattice.label();
  j["rank"] = lattice.rank();
  j["gram"] = gram_to_json(lattice.gram());
  return j;
}

/// A JSON array whose items are lattice objects or bare gram matrices.
inline std::vector<GramMatrix> read_forms(std::string const& path) {
  json const j = read_json_file(path);
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "forms file must hold a JSON array");
  std::vector<GramMatrix> forms;
  for (auto const& item : j) forms.push_back(item.is_object() ? gram_from_json(item.at("gram")) : gram_from_json(item));
  return forms;
}

/// {"finite": {"<prime>": n, ...}, "lambda": real} or, for an exact metric,
/// "lambda": {"log": rational} meaning lambda = log of that rational.
inline ArakelovDivisor divisor_from_json(json const& j) {
  std::map<Integer, long> finite;
  if (j.contains("finite")) {
    for (auto const& [key, value] : j.at("finite").items()) {
      Integer p;
      if (p.set_str(key, 10) != 0) throw Error(ErrorKind::ParseError, "bad prime key " + key);
      finite[p] = value.get<long>();
    }
  }
  if (!j.contains("lambda")) return ArakelovDivisor(std::move(finite), 0.0);
  json const& lambda = j.at("lambda");
  if (lambda.is_object()) {
    if (!lambda.contains("log")) throw Error(ErrorKind::ParseError, "lambda object needs a log field");
    return ArakelovDivisor::with_exact_lambda(std::move(finite), rational_from_json(lambda.at("log")));
  }
  return ArakelovDivisor(std::move(finite), lambda.get<double>());
}

inline json to_json(ArakelovDivisor const& d) {
  json finite = json::object();
  for (auto const& [p, e] : d.finite()) finite[p.get_str()] = e;
  return json{{"finite", finite}, {"lambda", d.lambda()}};
}

inline json to_json(IntegerMatrix const& m) {
  json rows = json::array();
  for (auto const& row : m) rows.push_back(row);
  return rows;
}

inline json to_json(OddLocalSymbol const& s) {
  json comps = json::array();
  for (auto const& c : s.components) {
    comps.push_back(json{{"valuation", c.valuation}, {"dimension", c.dimension}, {"unit_class", c.unit_class}});
  }
  return json{{"p", s.p.get_str()}, {"components", comps}};
}

inline std::string dump(json const& j) { return j.dump(2) + "\n"; }

}  // namespace lattika::io
