#pragma once

// Command-line front end. run() is the whole program minus main(), so it can
// be driven from tests with string streams.
//
//   gupqm kernel   --system free|sho --q0 0,0 --qf 1,0 --time 1 [--euclidean]
//   gupqm action   --system free|sho ...
//   gupqm spectrum --dim 2 --levels 6 --alpha 1e-5 --basis 32
//   gupqm green    --epsilon 1 --separation 1 --alpha 1e-3 [--compare-numeric]
//   gupqm bound    --alpha 1 --dp-min 0.2 --dp-max 2 --samples 50
//   gupqm verify   all --trials 20 --seed 7 --dim 2 --alpha 1e-3
//
// Every subcommand accepts --config FILE (flat key = value lines named after
// the long flags; flags on the command line win) and --sweep
// param:start:stop:count[:log] where a sweep makes sense.

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gupqm/classical.hpp"
#include "gupqm/core.hpp"
#include "gupqm/green.hpp"
#include "gupqm/gup_algebra.hpp"
#include "gupqm/kernels.hpp"
#include "gupqm/parallel.hpp"
#include "gupqm/report.hpp"
#include "gupqm/spectral.hpp"
#include "gupqm/suite.hpp"

namespace gupqm::cli {

/// Malformed command-line input detected after parsing.
class UsageError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct Sweep {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool log = false;

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
      v.push_back(log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                      : start + f * (stop - start));
    }
    return v;
  }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + what + ": '" + s + "'");
  }
}

/// "1,2.5,-3" -> {1, 2.5, -3}
inline VecD parse_vector(const std::string& s, const std::string& what) {
  std::vector<double> xs;
  for (const auto& part : split(s, ',')) xs.push_back(parse_double(part, what));
  if (xs.empty()) throw UsageError("empty vector for " + what);
  return VecD(std::move(xs));
}

/// "param:start:stop:count[:log]"
inline Sweep parse_sweep(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 4 && parts.size() != 5) throw UsageError("sweep must be param:start:stop:count[:log]");
  Sweep sw;
  sw.param = parts[0];
  sw.start = parse_double(parts[1], "sweep start");
  sw.stop = parse_double(parts[2], "sweep stop");
  const double count = parse_double(parts[3], "sweep count");
  if (count < 1 || count != std::floor(count)) throw UsageError("sweep count must be a positive integer");
  sw.count = static_cast<int>(count);
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "linear") throw UsageError("sweep scale must be 'log' or 'linear'");
    sw.log = parts[4] == "log";
  }
  if (sw.log && !(sw.start > 0.0 && sw.stop > 0.0)) throw UsageError("log sweep needs positive bounds");
  return sw;
}

/// Options shared by kernel and action.
struct ModelOptions {
  std::string system = "free";
  double mass = 1.0;
  double hbar = 1.0;
  double omega = 0.0;
  double alpha = 0.0;
  std::optional<int> dim;
  std::string q0;
  std::string qf;
  double time = 1.0;
  bool euclidean = false;
  std::string sweep;
};

inline void add_model_options(CLI::App* sub, ModelOptions& o) {
  sub->add_option("--system", o.system, "free or sho")->check(CLI::IsMember({"free", "sho"}));
  sub->add_option("--mass", o.mass, "particle mass");
  sub->add_option("--hbar", o.hbar, "action quantum");
  sub->add_option("--omega", o.omega, "oscillator angular frequency");
  sub->add_option("--alpha", o.alpha, "GUP parameter");
  sub->add_option("--dim", o.dim, "spatial dimension (inferred from --q0 when omitted)");
  sub->add_option("--q0", o.q0, "initial point, comma separated");
  sub->add_option("--qf", o.qf, "final point, comma separated");
  sub->add_option("--time", o.time, "real time T, or tau with --euclidean");
  sub->add_flag("--euclidean", o.euclidean, "interpret --time as Euclidean tau (T = -i tau)");
  sub->add_option("--sweep", o.sweep, "param:start:stop:count[:log] over mass|hbar|omega|alpha|time");
}

struct ModelInput {
  ModelParams params;
  Endpoints endpoints;
  bool sho = false;
};

inline ModelInput resolve(const ModelOptions& o) {
  std::optional<VecD> q0, qf;
  if (!o.q0.empty()) q0 = parse_vector(o.q0, "--q0");
  if (!o.qf.empty()) qf = parse_vector(o.qf, "--qf");
  int dim = o.dim.value_or(q0 ? static_cast<int>(q0->size()) : qf ? static_cast<int>(qf->size()) : 1);
  if (dim < 1) throw UsageError("--dim must be >= 1");
  if (q0 && static_cast<int>(q0->size()) != dim)
    throw UsageError("--q0 has " + std::to_string(q0->size()) + " components but --dim is " + std::to_string(dim));
  if (qf && static_cast<int>(qf->size()) != dim)
    throw UsageError("--qf has " + std::to_string(qf->size()) + " components but --dim is " + std::to_string(dim));

  ModelInput in;
  in.sho = o.system == "sho";
  in.params = {o.mass, o.hbar, in.sho ? o.omega : 0.0, o.alpha, dim};
  if (in.sho && !(o.omega > 0.0)) throw UsageError("--system sho needs --omega > 0");
  in.params.validate();
  in.endpoints = {q0.value_or(VecD(static_cast<std::size_t>(dim))), qf.value_or(VecD(static_cast<std::size_t>(dim))),
                  o.euclidean ? TimeArg::euclidean(o.time) : TimeArg::real(o.time)};
  return in;
}

inline void apply_sweep_value(ModelOptions& o, const std::string& param, double v) {
  if (param == "mass") o.mass = v;
  else if (param == "hbar") o.hbar = v;
  else if (param == "omega") o.omega = v;
  else if (param == "alpha") o.alpha = v;
  else if (param == "time") o.time = v;
  else throw UsageError("cannot sweep '" + param + "' (use mass, hbar, omega, alpha or time)");
}

/// What a subcommand produced: a JSON document or a CSV table, and its status.
struct Output {
  Json json;
  std::optional<CsvTable> csv;
  int status = 0;
};

/// Runs `point` for every sweep value (or once), in parallel, keeping input order.
template <class Opts, class Point>
std::vector<Json> sweep_points(const Opts& base, const std::optional<Sweep>& sw, unsigned jobs,
                               void (*apply)(Opts&, const std::string&, double), Point point) {
  if (!sw) return {point(base)};
  const auto values = sw->values();
  return parallel_map(values.size(), jobs, [&](std::size_t i) {
    Opts o = base;
    apply(o, sw->param, values[i]);
    Json j = point(o);
    Json row{{sw->param, values[i]}};
    for (auto it = j.begin(); it != j.end(); ++it) row[it.key()] = it.value();
    return row;
  });
}

/// Flattens {"x": {"re": .., "im": ..}} into x_re, x_im columns.
inline CsvTable flatten_rows(const std::vector<Json>& rows, const std::vector<std::string>& keys) {
  CsvTable t;
  for (const auto& k : keys) {
    const Json& sample = rows.front().at(k);
    if (sample.is_object()) {
      t.header.push_back(k + "_re");
      t.header.push_back(k + "_im");
    } else {
      t.header.push_back(k);
    }
  }
  for (const auto& r : rows) {
    std::vector<std::string> row;
    for (const auto& k : keys) {
      const Json& v = r.at(k);
      auto cell = [](const Json& x) { return x.is_null() ? std::string("nan") : x.dump(); };
      if (v.is_object()) {
        row.push_back(cell(v.at("re")));
        row.push_back(cell(v.at("im")));
      } else {
        row.push_back(cell(v));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Json sweep_document(const std::optional<Sweep>& sw, std::vector<Json> rows) {
  if (!sw) return std::move(rows.front());
  return Json{{"sweep",
               {{"param", sw->param}, {"start", sw->start}, {"stop", sw->stop}, {"count", sw->count},
                {"scale", sw->log ? "log" : "linear"}}},
              {"points", std::move(rows)}};
}

inline Output run_kernel(const ModelOptions& o, unsigned jobs, bool csv) {
  const auto sw = o.sweep.empty() ? std::nullopt : std::optional<Sweep>(parse_sweep(o.sweep));
  auto rows = sweep_points<ModelOptions>(o, sw, jobs, apply_sweep_value, [](const ModelOptions& opts) {
    const auto in = resolve(opts);
    const KernelValue k = in.sho ? sho_kernel(in.params, in.endpoints) : free_kernel(in.params, in.endpoints);
    Json j{{"system", in.sho ? "sho" : "free"}};
    const Json body = to_json(k);
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    return j;
  });
  Output out;
  if (csv) {
    std::vector<std::string> keys = {"amplitude", "leading_prefactor", "f", "S0", "S1"};
    if (sw) keys.insert(keys.begin(), sw->param);
    out.csv = flatten_rows(rows, keys);
  }
  out.json = sweep_document(sw, std::move(rows));
  return out;
}

inline Output run_action(const ModelOptions& o, unsigned jobs, bool csv) {
  const auto sw = o.sweep.empty() ? std::nullopt : std::optional<Sweep>(parse_sweep(o.sweep));
  auto rows = sweep_points<ModelOptions>(o, sw, jobs, apply_sweep_value, [](const ModelOptions& opts) {
    const auto in = resolve(opts);
    if (in.endpoints.time.is_euclidean()) throw UsageError("action: real time only");
    const ActionPair a = in.sho ? sho_action(in.params, in.endpoints) : free_action(in.params, in.endpoints);
    return Json{{"system", in.sho ? "sho" : "free"},
                {"S0", number(a.S0)},
                {"S1", number(a.S1)},
                {"total", number(a.total(in.params.alpha))},
                {"params", to_json(in.params)},
                {"endpoints", to_json(in.endpoints)}};
  });
  Output out;
  if (csv) {
    std::vector<std::string> keys = {"S0", "S1", "total"};
    if (sw) keys.insert(keys.begin(), sw->param);
    out.csv = flatten_rows(rows, keys);
  }
  out.json = sweep_document(sw, std::move(rows));
  return out;
}

struct SpectrumOptions {
  int dim = 2;
  int levels = 6;
  double alpha = 1e-5;
  int basis = 32;
  double mass = 1.0;
  double hbar = 1.0;
  double omega = 1.0;
};

inline Output run_spectrum(const SpectrumOptions& o, bool csv) {
  const ModelParams p{o.mass, o.hbar, o.omega, o.alpha, o.dim};
  p.validate();
  if (o.dim != 1 && o.dim != 2) throw UsageError("spectrum: --dim must be 1 or 2");
  if (o.levels < 1) throw UsageError("spectrum: --levels must be >= 1");
  const int wanted = o.dim == 2 ? std::max(o.levels, 6) : o.levels;
  const auto oracle = oscillator_matrix_oracle(p, o.basis, wanted);
  const auto formula = sho_formula_levels(p, wanted);

  Json levels = Json::array();
  CsvTable table{{"index", "n1", "n2", "formula", "oracle", "delta"}, {}};
  for (int k = 0; k < o.levels; ++k) {
    const auto& f = formula[static_cast<std::size_t>(k)];
    const double v = oracle.levels[static_cast<std::size_t>(k)];
    levels.push_back(Json{{"index", k}, {"formula", to_json(f)}, {"oracle", number(v)}, {"delta", number(v - f.value)}});
    table.add_row({static_cast<double>(k), static_cast<double>(f.n1), static_cast<double>(f.n2), f.value, v,
                   v - f.value});
  }
  Output out;
  out.json = Json{{"params", to_json(p)},
                  {"basis", o.basis},
                  {"convergence_delta", number(oracle.convergence_delta)},
                  {"levels", std::move(levels)}};
  if (o.dim == 2 && o.alpha > 0.0) {
    // Shell n1 + n2 = 2: first-order shifts in units of alpha m hbar^2 w^2.
    const auto shifts = [&](const ModelParams& q) {
      const auto lv = oscillator_matrix_oracle(q, o.basis, 6).levels;
      const double u = q.alpha * q.m * q.hbar * q.hbar * q.omega * q.omega;
      std::array<double, 3> s{};
      for (int k = 0; k < 3; ++k) s[static_cast<std::size_t>(k)] = (lv[static_cast<std::size_t>(k + 3)] - 3.0 * q.hbar * q.omega) / u;
      return s;
    };
    ModelParams half = p;
    half.alpha = 0.5 * p.alpha;
    const auto full = shifts(p), halved = shifts(half);
    Json f = Json::array(), g = Json::array(), r = Json::array();
    for (int n1 = 2; n1 >= 0; --n1) f.push_back(sho_shift_2d(n1, 2 - n1));
    for (std::size_t k = 0; k < 3; ++k) {
      g.push_back(number(full[k]));
      // Richardson step removes the O(alpha) tail of the shift.
      r.push_back(number(2.0 * halved[k] - full[k]));
    }
    out.json["shell2"] = Json{{"formula_diagonal_shifts", std::move(f)},
                              {"oracle_shifts", std::move(g)},
                              {"oracle_first_order", std::move(r)},
                              {"note", "the perturbation mixes (2,0) and (0,2); the oracle gives block eigenvalues"}};
  }
  if (csv) out.csv = std::move(table);
  return out;
}

struct GreenOptions {
  double epsilon = 1.0;
  double separation = 1.0;
  double alpha = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
  bool compare = false;
  std::string sweep;
};

inline void apply_green_sweep(GreenOptions& o, const std::string& param, double v) {
  if (param == "epsilon") o.epsilon = v;
  else if (param == "separation") o.separation = v;
  else if (param == "alpha") o.alpha = v;
  else if (param == "mass") o.mass = v;
  else if (param == "hbar") o.hbar = v;
  else throw UsageError("cannot sweep '" + param + "' (use epsilon, separation, alpha, mass or hbar)");
}

inline Output run_green(const GreenOptions& o, unsigned jobs, bool csv) {
  const auto sw = o.sweep.empty() ? std::nullopt : std::optional<Sweep>(parse_sweep(o.sweep));
  auto rows = sweep_points<GreenOptions>(o, sw, jobs, apply_green_sweep, [](const GreenOptions& opts) {
    if (!(opts.separation > 0.0)) throw UsageError("green: --separation must be positive");
    const GreenQuery g{opts.epsilon, VecD{0.0, 0.0}, VecD{opts.separation, 0.0},
                       ModelParams{opts.mass, opts.hbar, 0.0, opts.alpha, 2}};
    const double closed = green_free_2d_closed(g);
    Json j{{"z", number(g.z())}, {"closed", number(closed)}, {"numeric", nullptr}, {"delta", nullptr}};
    if (opts.compare) {
      const double numeric = laplace_numeric(g).value;
      j["numeric"] = number(numeric);
      j["delta"] = number(std::abs(numeric - closed) / std::abs(closed));
    }
    return j;
  });
  Output out;
  if (csv) {
    std::vector<std::string> keys = {"z", "closed", "numeric", "delta"};
    if (sw) keys.insert(keys.begin(), sw->param);
    out.csv = flatten_rows(rows, keys);
  }
  out.json = sweep_document(sw, std::move(rows));
  return out;
}

struct BoundOptions {
  double alpha = 1.0;
  double hbar = 1.0;
  double dp_min = 0.2;
  double dp_max = 2.0;
  int samples = 50;
  bool log_grid = false;
};

inline Output run_bound(const BoundOptions& o, bool csv) {
  if (!(o.dp_min > 0.0) || !(o.dp_max > o.dp_min)) throw UsageError("bound: need 0 < --dp-min < --dp-max");
  if (o.samples < 2) throw UsageError("bound: --samples must be >= 2");
  const Sweep grid{"dP", o.dp_min, o.dp_max, o.samples, o.log_grid};
  const auto curve = bound_curve(o.alpha, o.hbar, grid.values());
  const auto ml = minimal_length(o.alpha, o.hbar);

  CsvTable table{{"dP", "dQ_bound"}, {}};
  Json pts = Json::array();
  double lowest = curve.front().second;
  for (const auto& [dp, dq] : curve) {
    table.add_row({dp, dq});
    pts.push_back(Json::array({dp, dq}));
    lowest = std::min(lowest, dq);
  }
  Output out;
  out.json = Json{{"alpha", o.alpha},
                  {"hbar", o.hbar},
                  {"minimal_length", ml.dq_min},
                  {"dp_star", ml.dp_star ? Json(*ml.dp_star) : Json(nullptr)},
                  {"grid_minimum", lowest},
                  {"curve", std::move(pts)}};
  if (csv) out.csv = std::move(table);
  return out;
}

struct VerifyOptions {
  std::string suite = "all";
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  int dim = 2;
  double alpha = 1e-3;
  bool euclidean = false;
};

inline Output run_verify(const VerifyOptions& o, unsigned jobs, bool csv) {
  SuiteConfig cfg{o.trials, o.seed, o.dim, o.alpha, o.euclidean, jobs};
  if (o.dim < 1) throw UsageError("verify: --dim must be >= 1");
  if (o.trials < 1) throw UsageError("verify: --trials must be >= 1");
  std::vector<std::string> names;
  if (o.suite == "all")
    names = suite_names();
  else
    names = {o.suite};

  std::vector<SuiteReport> reports;
  for (const auto& n : names) reports.push_back(run_suite(n, cfg));
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();

  Output out;
  out.status = ok ? 0 : 1;
  if (reports.size() == 1) {
    out.json = to_json(reports.front());
  } else {
    Json suites = Json::array();
    for (const auto& r : reports) suites.push_back(to_json(r));
    out.json = Json{{"seed", o.seed}, {"passed", ok}, {"suites", std::move(suites)}};
  }
  if (csv) {
    CsvTable t{{"suite", "check", "trial", "value", "lower", "upper", "passed"}, {}};
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        t.rows.push_back({r.name, c.name, std::to_string(c.trial), format_csv_number(c.value),
                          c.lower ? format_csv_number(*c.lower) : "", c.upper ? format_csv_number(*c.upper) : "",
                          c.passed ? "true" : "false"});
    out.csv = std::move(t);
  }
  return out;
}

/// Reads "key = value" lines; blank lines and lines starting with # or ; are skipped.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty() || key == "config") throw UsageError(path + ":" + std::to_string(lineno) + ": bad key");
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

inline std::vector<std::string> subcommand_names(const CLI::App& app) {
  std::vector<std::string> names;
  for (const CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) names.push_back(sub->get_name());
  return names;
}

/// Replaces "--config FILE" with the file's entries as --key=value tokens,
/// placed right after the subcommand name so later flags take precedence.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args,
                                              const std::vector<std::string>& subcommands) {
  std::vector<std::string> rest;
  std::vector<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      path.push_back(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path.push_back(args[i].substr(9));
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  if (path.size() > 1) throw UsageError("--config given more than once");

  auto sub = std::find_if(rest.begin(), rest.end(), [&](const std::string& a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  if (sub == rest.end()) throw UsageError("--config must follow a subcommand");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : read_config(path.front())) tokens.push_back("--" + key + "=" + value);
  rest.insert(sub + 1, tokens.begin(), tokens.end());
  return rest;
}

inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("GUPQM_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw UsageError(std::string("GUPQM_SEED is not an unsigned integer: ") + s);
    }
  }
  return 1;
}

/// Parses `args` (without the program name), runs the subcommand and writes
/// the report. Returns 0 on success, 1 when a verification assertion or a
/// numerical method fails, 2 on usage and domain errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-order GUP propagators, spectra and Green's functions", "gupqm"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::string out_path;
  std::string format;
  unsigned jobs = 1;
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "json or csv (bound defaults to csv, everything else to json)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", jobs, "worker threads for sweeps and suites")->check(CLI::Range(1u, 256u));

  auto add_sub = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("--config", "flat key = value file of default flags");
    return sub;
  };

  ModelOptions kernel_opts, action_opts;
  CLI::App* kernel_cmd = add_sub("kernel", "first-order propagator K(qf, q0; T)");
  add_model_options(kernel_cmd, kernel_opts);
  CLI::App* action_cmd = add_sub("action", "classical action S0 + alpha S1");
  add_model_options(action_cmd, action_opts);

  SpectrumOptions spec_opts;
  CLI::App* spectrum_cmd = add_sub("spectrum", "oscillator levels: first-order formula vs diagonalization");
  spectrum_cmd->add_option("--dim", spec_opts.dim, "1 or 2");
  spectrum_cmd->add_option("--levels", spec_opts.levels, "number of levels");
  spectrum_cmd->add_option("--alpha", spec_opts.alpha, "GUP parameter");
  spectrum_cmd->add_option("--basis", spec_opts.basis, "number states per axis (>= 16)");
  spectrum_cmd->add_option("--mass", spec_opts.mass, "particle mass");
  spectrum_cmd->add_option("--hbar", spec_opts.hbar, "action quantum");
  spectrum_cmd->add_option("--omega", spec_opts.omega, "angular frequency");

  GreenOptions green_opts;
  CLI::App* green_cmd = add_sub("green", "2D free-particle energy Green's function");
  green_cmd->add_option("--epsilon", green_opts.epsilon, "energy parameter > 0");
  green_cmd->add_option("--separation", green_opts.separation, "|qf - q0| > 0");
  green_cmd->add_option("--alpha", green_opts.alpha, "GUP parameter");
  green_cmd->add_option("--mass", green_opts.mass, "particle mass");
  green_cmd->add_option("--hbar", green_opts.hbar, "action quantum");
  green_cmd->add_flag("--compare-numeric", green_opts.compare, "also Laplace-transform the Euclidean kernel");
  green_cmd->add_option("--sweep", green_opts.sweep, "param:start:stop:count[:log]");

  BoundOptions bound_opts;
  CLI::App* bound_cmd = add_sub("bound", "lower edge of the allowed (dP, dQ) region");
  bound_cmd->add_option("--alpha", bound_opts.alpha, "GUP parameter");
  bound_cmd->add_option("--hbar", bound_opts.hbar, "action quantum");
  bound_cmd->add_option("--dp-min", bound_opts.dp_min, "smallest dP");
  bound_cmd->add_option("--dp-max", bound_opts.dp_max, "largest dP");
  bound_cmd->add_option("--samples", bound_opts.samples, "grid size");
  bound_cmd->add_flag("--log-grid", bound_opts.log_grid, "logarithmic grid");

  VerifyOptions verify_opts;
  CLI::App* verify_cmd = add_sub("verify", "seeded consistency suites");
  std::vector<std::string> suites = suite_names();
  suites.emplace_back("all");
  verify_cmd->add_option("suite", verify_opts.suite, "composition|schrodinger|delta-limit|moments|eom|all")
      ->check(CLI::IsMember(suites));
  verify_cmd->add_option("--trials", verify_opts.trials, "trials per suite");
  verify_cmd->add_option("--seed", verify_opts.seed, "base seed (default: $GUPQM_SEED or 1)");
  verify_cmd->add_option("--dim", verify_opts.dim, "dimension (eom always runs at 2)");
  verify_cmd->add_option("--alpha", verify_opts.alpha, "GUP parameter");
  verify_cmd->add_flag("--euclidean", verify_opts.euclidean, "Euclidean time for composition and Schrodinger");

  try {
    verify_opts.seed = default_seed();
    const auto expanded = expand_config(args, subcommand_names(app));
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const bool csv = format.empty() ? bound_cmd->parsed() : format == "csv";
    Output result;
    if (kernel_cmd->parsed()) result = run_kernel(kernel_opts, jobs, csv);
    else if (action_cmd->parsed()) result = run_action(action_opts, jobs, csv);
    else if (spectrum_cmd->parsed()) result = run_spectrum(spec_opts, csv);
    else if (green_cmd->parsed()) result = run_green(green_opts, jobs, csv);
    else if (bound_cmd->parsed()) result = run_bound(bound_opts, csv);
    else result = run_verify(verify_opts, jobs, csv);

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary);
      if (!file) throw UsageError("cannot write " + out_path);
    }
    std::ostream& sink = out_path.empty() ? out : file;
    if (csv && result.csv)
      write_csv(sink, *result.csv);
    else
      sink << result.json.dump(2) << '\n';
    if (!sink) throw UsageError("write failed" + (out_path.empty() ? std::string() : ": " + out_path));
    return result.status;
  } catch (const CausticError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gupqm::cli
