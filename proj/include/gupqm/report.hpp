#pragma once

// JSON and CSV serialization of results. Objects keep insertion order and
// numbers use the shortest representation that round-trips, so a fixed input
// always produces the same bytes.

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gupqm/core.hpp"
#include "gupqm/kernels.hpp"
#include "gupqm/spectral.hpp"
#include "gupqm/suite.hpp"
#include "gupqm/verify.hpp"
#include "json.hpp"

namespace gupqm {

using Json = nlohmann::ordered_json;

inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json to_json(Complex z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

inline Complex complex_from_json(const Json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

inline Json to_json(const VecD& v) { return Json(v.components()); }

inline Json to_json(const ModelParams& p) {
  return Json{{"m", p.m}, {"hbar", p.hbar}, {"omega", p.omega}, {"alpha", p.alpha}, {"dim", p.dim}};
}

inline ModelParams params_from_json(const Json& j) {
  ModelParams p;
  p.m = j.at("m").get<double>();
  p.hbar = j.at("hbar").get<double>();
  p.omega = j.at("omega").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.dim = j.at("dim").get<int>();
  return p;
}

inline Json to_json(const Endpoints& e) {
  return Json{{"q0", to_json(e.q0)},
              {"qf", to_json(e.qf)},
              {"time", e.time.magnitude()},
              {"euclidean", e.time.is_euclidean()}};
}

inline Endpoints endpoints_from_json(const Json& j) {
  const double t = j.at("time").get<double>();
  return {VecD(j.at("q0").get<std::vector<double>>()), VecD(j.at("qf").get<std::vector<double>>()),
          j.at("euclidean").get<bool>() ? TimeArg::euclidean(t) : TimeArg::real(t)};
}

inline Json to_json(const KernelValue& k) {
  Json j{{"amplitude", to_json(k.amplitude)},
         {"leading_prefactor", to_json(k.leading_prefactor)},
         {"f", to_json(k.f_alpha)},
         {"S0", to_json(k.S0)},
         {"S1", to_json(k.S1)},
         {"params", to_json(k.params)},
         {"endpoints", to_json(k.endpoints)}};
  if (!k.notes.empty()) j["notes"] = k.notes;
  return j;
}

inline KernelValue kernel_from_json(const Json& j) {
  KernelValue k{};
  k.amplitude = complex_from_json(j.at("amplitude"));
  k.leading_prefactor = complex_from_json(j.at("leading_prefactor"));
  k.f_alpha = complex_from_json(j.at("f"));
  k.S0 = complex_from_json(j.at("S0"));
  k.S1 = complex_from_json(j.at("S1"));
  k.params = params_from_json(j.at("params"));
  k.endpoints = endpoints_from_json(j.at("endpoints"));
  if (j.contains("notes")) k.notes = j.at("notes").get<std::vector<std::string>>();
  return k;
}

inline Json to_json(const std::vector<std::pair<std::string, double>>& kv) {
  Json j = Json::object();
  for (const auto& [k, v] : kv) j[k] = number(v);
  return j;
}

inline Json to_json(const ResidualReport& r) {
  Json j{{"residual_norm", number(r.residual_norm)},
         {"reference_norm", number(r.reference_norm)},
         {"alpha_used", r.alpha_used},
         {"scaling_ratio", r.scaling_ratio ? number(*r.scaling_ratio) : Json(nullptr)}};
  if (!r.diagnostics.empty()) j["diagnostics"] = to_json(r.diagnostics);
  return j;
}

inline Json to_json(const CheckRecord& c) {
  Json j{{"name", c.name},
         {"trial", c.trial},
         {"value", number(c.value)},
         {"lower", c.lower ? Json(*c.lower) : Json(nullptr)},
         {"upper", c.upper ? Json(*c.upper) : Json(nullptr)},
         {"passed", c.passed}};
  if (!c.details.empty()) j["details"] = to_json(c.details);
  return j;
}

inline Json to_json(const SuiteReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"suite", r.name},
              {"seed", r.config.seed},
              {"trials", r.config.trials},
              {"dim", r.config.dim},
              {"alpha", r.config.alpha},
              {"euclidean", r.config.euclidean},
              {"passed", r.passed()},
              {"failures", r.failures()},
              {"checks", std::move(checks)}};
}

inline Json to_json(const EnergyLevel& e) {
  Json j{{"n1", e.n1}};
  if (e.n2 >= 0) j["n2"] = e.n2;
  j["value"] = number(e.value);
  return j;
}

inline std::string format_csv_number(double x) {
  if (!std::isfinite(x)) return "nan";
  return Json(x).dump();  // same shortest round-trip formatting as the JSON output
}

/// A CSV table with a fixed header. Cells are preformatted strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values) {
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_csv_number(v));
    rows.push_back(std::move(row));
  }
};

inline void write_csv(std::ostream& os, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

}  // namespace gupqm
