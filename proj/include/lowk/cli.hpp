#pragma once

// Command-line front end. run() parses arguments, dispatches to a subcommand
// and writes CSV or JSON; tools/lowk.cpp is a thin wrapper around it.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lowk/assembler.hpp"
#include "lowk/coeffgen.hpp"
#include "lowk/oracle.hpp"

namespace lowk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct RunSpec {
  std::string subcommand;
  std::string potential;
  std::optional<double> alpha;
  std::optional<double> a;
  std::optional<double> x;
  std::optional<double> y;
  int order = 0;
  std::optional<double> k_start;
  std::optional<double> k_stop;
  std::optional<int> k_count;
  std::string spacing = "linear";
  std::string output;
  std::string format;
  bool generic = false;
  bool show_terms = false;
  bool log_form = false;
  bool pole = false;
  bool no_reflection = false;
  int threads = 1;
  // quadrature and solver overrides
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<double> ode_tol;
  std::optional<double> epsilon;
  // brackets
  std::string plain_signs;
  std::string angle_left_signs;
  std::string angle_right_signs;
  std::string lower = "-inf";
  std::string upper = "inf";
};

/// Fixed 17-significant-digit rendering for bit-stable CSV.
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string validity_text(int v) { return v == kUnboundedOrder ? "unbounded" : std::to_string(v); }

namespace detail {

/// A usage error raised by the front end itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double parse_limit(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw UsageError("bad limit '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("bad limit '" + s + "'");
  }
}

/// Evaluation points used when --x / --y are omitted: the points of the
/// reference plots for parabolic and logstep, (0.5, -0.5) elsewhere.
inline std::pair<double, double> default_points(const std::string& model) {
  if (model == "parabolic") return {1.2, 1.0};
  if (model == "logstep") return {1.5, 0.8};
  return {0.5, -0.5};
}

inline std::map<std::string, double> params_of(const RunSpec& s) {
  std::map<std::string, double> p;
  if (s.alpha) p["alpha"] = *s.alpha;
  if (s.a) p["a"] = *s.a;
  return p;
}

inline std::vector<double> k_grid(const RunSpec& s, double start, double stop, int count) {
  const double k0 = s.k_start.value_or(start);
  const double k1 = s.k_stop.value_or(stop);
  const int n = s.k_count.value_or(count);
  if (!(k0 > 0.0) || !(k1 > 0.0)) throw UsageError("k grid must be positive");
  if (n < 1) throw UsageError("k count must be at least 1");
  std::vector<double> k;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    k.push_back(s.spacing == "log" ? k0 * std::pow(k1 / k0, t) : k0 + (k1 - k0) * t);
  }
  return k;
}

inline ExpansionConfig expansion_config(const RunSpec& s) {
  ExpansionConfig cfg;
  if (s.rel_tol) cfg.quad.rel_tol = *s.rel_tol;
  if (s.abs_tol) cfg.quad.abs_tol = *s.abs_tol;
  if (const char* env = std::getenv("LOWK_GREEN_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw UsageError("LOWK_GREEN_TOL is not a positive number");
    cfg.solver.ode_rel_tol = v;
  }
  if (s.ode_tol) cfg.solver.ode_rel_tol = *s.ode_tol;
  if (s.epsilon) cfg.solver.epsilon_imag = *s.epsilon;
  cfg.use_reflection = !s.no_reflection;
  return cfg;
}

/// Evaluates f at every index on `threads` workers; results stay in index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(n, threads <= 0 ? hw : static_cast<unsigned>(threads));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  // report the first failure in grid order
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& v : slots) out.push_back(std::move(*v));
  return out;
}

struct Output {
  std::string comment;  // without the leading "# "
  std::vector<std::string> extra_comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json json;
};

inline void write_csv(std::ostream& os, const Output& o) {
  os << "# " << o.comment << "\n";
  for (const auto& c : o.extra_comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < o.header.size(); ++i) os << (i ? "," : "") << o.header[i];
  os << "\n";
  for (const auto& r : o.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

inline std::string case_comment(const std::string& tag, int validity, const RunSpec& s) {
  std::string c = "case=" + tag + " validity=" + validity_text(validity) + " model=" + s.potential;
  for (const auto& [k, v] : params_of(s)) c += " " + k + "=" + num(v);
  return c;
}

inline bool use_generic(const RunSpec& s, const PotentialModel& m) { return s.generic || m.vs_only; }

inline ExpansionResult expand(const RunSpec& s, const PotentialModel& m, int N, const ExpansionConfig& cfg) {
  return use_generic(s, m) ? generic_expansion(m, *s.x, *s.y, N, cfg) : green_series(m, *s.x, *s.y, N, cfg);
}

inline std::string context(const RunSpec& s) {
  std::ostringstream os;
  os << s.subcommand << " " << s.potential;
  if (s.x && s.y && s.subcommand != "brackets") os << " at x=" << num(*s.x) << ", y=" << num(*s.y) << ", N=" << s.order;
  return os.str();
}

// ---------------------------------------------------------------------------
// subcommands

inline nlohmann::json term_tables(const PotentialModel& model, int N, bool use_reflection) {
  const PotentialModel m = use_reflection && classify(model).reflected ? reflect(model) : model;
  const int K = std::min(kMaxTableOrder - 2, std::max(1, N + 2));
  nlohmann::json out = nlohmann::json::array();
  for (const auto& src : {lowk::detail::SeriesSource{lowk::detail::source_kind(m.left.kind), Side::Right, &m},
                          lowk::detail::SeriesSource{lowk::detail::source_kind(m.right.kind), Side::Left, &m}}) {
    for (const auto& t : lowk::detail::source_tables(src, K)) out.push_back(to_json(t));
  }
  return out;
}

inline Output cmd_expand(const RunSpec& s) {
  const PotentialModel m = catalog(s.potential, params_of(s));
  const ExpansionConfig cfg = expansion_config(s);
  const ExpansionResult r = expand(s, m, s.order, cfg);
  const std::string tag = r.generic ? "iii(generic)" : to_string(r.case_tag);
  Output o;
  o.comment = case_comment(tag, r.validity, s) + " x=" + num(*s.x) + " y=" + num(*s.y) + " N=" + std::to_string(r.N);
  o.header = {"n", "g_n", "closed_form", "residual"};
  nlohmann::json checks = nlohmann::json::array();
  for (int n = r.g.min_order(); n <= r.N; ++n) {
    std::string cf_text, res_text;
    if (!r.generic) {
      for (const auto& [t, which] : closed_form_pairs()) {
        if (t != r.case_tag || which != n) continue;
        const double cf = closed_form_g(m, *s.x, *s.y, t, which, cfg.quad);
        cf_text = num(cf);
        res_text = num(r.coeff(n) - cf);
        checks.push_back({{"n", n}, {"closed_form", cf}, {"residual", r.coeff(n) - cf}});
      }
    }
    o.rows.push_back({std::to_string(n), num(r.coeff(n)), cf_text, res_text});
  }
  o.json = to_json(r);
  o.json["closed_form_checks"] = checks;
  if (s.show_terms) {
    if (r.generic) throw UsageError("--show-terms needs a model with V(x); the zero-energy route builds V numerically");
    o.json["terms"] = term_tables(m, s.order, !s.no_reflection);
    for (const auto& t : o.json["terms"]) {
      for (const auto& term : t["terms"]) {
        o.extra_comments.push_back("term " + t["family"].get<std::string>() + t["side"].get<std::string>() + "_" +
                                   std::to_string(t["n"].get<int>()) + " coeff=" + term["coeff"].get<std::string>() +
                                   " limit_exponent=" + std::to_string(term["limit_exponent"].get<int>()) +
                                   " bracket=" + term["bracket"].get<std::string>());
      }
    }
  }
  return o;
}

inline Output cmd_compare(const RunSpec& s) {
  const PotentialModel m = catalog(s.potential, params_of(s));
  const ExpansionConfig cfg = expansion_config(s);
  const ExpansionResult r = expand(s, m, s.order, cfg);
  const auto ks = k_grid(s, 0.05, 1.2, 24);
  const int lo = r.g.min_order();
  const bool pole = s.pole;
  if (pole && (lo != -2 || r.N < 2)) throw UsageError("--pole needs a series starting at order -2 with N >= 2");
  Output o;
  o.comment = case_comment(r.generic ? "iii(generic)" : to_string(r.case_tag), r.validity, s) + " x=" + num(*s.x) +
              " y=" + num(*s.y) + " N=" + std::to_string(r.N);
  o.header = {"k", "re_exact", "im_exact"};
  auto tag = [](int n) { return n < 0 ? "m" + std::to_string(-n) : std::to_string(n); };
  for (int n = lo; n <= r.N; ++n) {
    o.header.push_back("re_trunc_" + tag(n));
    o.header.push_back("im_trunc_" + tag(n));
  }
  if (s.log_form) o.header.insert(o.header.end(), {"re_logform", "im_logform"});
  if (pole) o.header.insert(o.header.end(), {"re_pole", "im_pole"});
  o.header.push_back("resid_trunc");
  if (s.log_form) o.header.push_back("resid_logform");
  if (pole) o.header.push_back("resid_pole");

  const int P = r.N - lo;
  const std::function<std::vector<std::string>(std::size_t)> row = [&](std::size_t i) {
    const cplx k{ks[i], 0.0};
    const cplx exact = green_exact(m, *s.x, *s.y, k, cfg.solver).value;
    std::vector<std::string> out = {num(ks[i]), num(exact.real()), num(exact.imag())};
    cplx last{};
    for (int n = lo; n <= r.N; ++n) {
      last = truncated_sum(r.g, n, k);
      out.push_back(num(last.real()));
      out.push_back(num(last.imag()));
    }
    cplx lf{}, pr{};
    if (s.log_form) {
      lf = log_form_value(r, P, k);
      out.push_back(num(lf.real()));
      out.push_back(num(lf.imag()));
    }
    if (pole) {
      pr = pole_resummed(r.coeff(-2), r.coeff(0), r.coeff(2), k);
      out.push_back(num(pr.real()));
      out.push_back(num(pr.imag()));
    }
    out.push_back(num(std::abs(exact - last)));
    if (s.log_form) out.push_back(num(std::abs(exact - lf)));
    if (pole) out.push_back(num(std::abs(exact - pr)));
    return out;
  };
  o.rows = parallel_map<std::vector<std::string>>(ks.size(), s.threads, row);
  o.json = {{"expansion", to_json(r)}, {"columns", o.header}, {"rows", o.rows}};
  return o;
}

inline Output cmd_brackets(const RunSpec& s) {
  const PotentialModel m = catalog(s.potential, params_of(s));
  const int given = !s.plain_signs.empty() + !s.angle_left_signs.empty() + !s.angle_right_signs.empty();
  if (given != 1) throw UsageError("give exactly one of --plain, --angle-left, --angle-right");
  BracketSpec spec;
  if (!s.plain_signs.empty()) spec = {BracketKind::Plain, parse_signs(s.plain_signs), 0.0, 0.0};
  if (!s.angle_left_signs.empty()) spec = {BracketKind::AngleLeft, parse_signs(s.angle_left_signs), 0.0, 0.0};
  if (!s.angle_right_signs.empty()) spec = {BracketKind::AngleRight, parse_signs(s.angle_right_signs), 0.0, 0.0};
  spec.lower = parse_limit(s.lower);
  spec.upper = parse_limit(s.upper);
  const BracketValue v = eval_bracket_with_error(spec, m, expansion_config(s).quad);
  const Classification cls = classify(m);
  const int validity = m.vs_only ? max_valid_order_generic(m) : max_valid_order(m);
  Output o;
  o.comment = case_comment(to_string(cls.tag), validity, s);
  o.header = {"bracket", "lower", "upper", "value", "error"};
  o.rows.push_back({spec.notation(), num(spec.lower), num(spec.upper), num(v.value), num(v.error)});
  o.json = {{"model", s.potential},   {"case", to_string(cls.tag)}, {"bracket", spec.notation()},
            {"lower", s.lower},       {"upper", s.upper},           {"value", v.value},
            {"error", v.error}};
  return o;
}

inline Output cmd_scaling(const RunSpec& s) {
  const PotentialModel m = catalog(s.potential, params_of(s));
  const ExpansionConfig cfg = expansion_config(s);
  const ExpansionResult r = expand(s, m, s.order, cfg);
  // default windows: the logstep tail needs very small k; elsewhere the
  // oracle accuracy limits how small k can go
  const bool logstep = s.potential == "logstep";
  RunSpec grid_spec = s;
  if (!s.k_count) grid_spec.k_count = 9;
  if (s.spacing == "linear" && !s.k_start && !s.k_stop) grid_spec.spacing = "log";
  std::vector<double> ks = k_grid(grid_spec, logstep ? 0.1 : 0.4, logstep ? 1e-3 : 0.05, 9);
  std::sort(ks.begin(), ks.end(), std::greater<>());
  const ScalingFit fit = remainder_scaling_fit(m, *s.x, *s.y, r.g, s.order, ks, cfg.solver);
  std::optional<double> expected;
  if (logstep) {
    const double alpha = m.params.at("alpha");
    if (s.order + 1 < alpha && alpha < s.order + 2) expected = alpha - 1.0;
  }
  const bool pass = expected && std::abs(fit.slope - *expected) <= 0.1;
  Output o;
  o.comment = case_comment(r.generic ? "iii(generic)" : to_string(r.case_tag), r.validity, s) + " x=" + num(*s.x) +
              " y=" + num(*s.y) + " N=" + std::to_string(r.N);
  o.extra_comments.push_back("slope=" + num(fit.slope) + " intercept=" + num(fit.intercept) +
                             " expected=" + (expected ? num(*expected) : std::string("none")) +
                             " verdict=" + (expected ? (pass ? "PASS" : "FAIL") : "n/a"));
  o.header = {"k", "remainder", "residual"};
  for (std::size_t i = 0; i < fit.k.size(); ++i) {
    o.rows.push_back({num(fit.k[i]), num(fit.remainder[i]), num(fit.residual[i])});
  }
  o.json = {{"slope", fit.slope},     {"intercept", fit.intercept}, {"k", fit.k},
            {"remainder", fit.remainder}, {"residual", fit.residual}, {"case", o.comment}};
  o.json["expected"] = expected ? nlohmann::json(*expected) : nlohmann::json(nullptr);
  o.json["verdict"] = expected ? (pass ? "PASS" : "FAIL") : "n/a";
  return o;
}

inline Output cmd_oracle(const RunSpec& s) {
  const PotentialModel m = catalog(s.potential, params_of(s));
  const ExpansionConfig cfg = expansion_config(s);
  const auto ks = k_grid(s, 0.05, 1.2, 24);
  const int validity = m.vs_only ? max_valid_order_generic(m) : max_valid_order(m);
  Output o;
  o.comment = case_comment(to_string(classify(m).tag), validity, s) + " x=" + num(*s.x) + " y=" + num(*s.y);
  o.header = {"k", "re_G", "im_G", "cutoff_left", "cutoff_right", "epsilon_delta"};
  const std::function<std::vector<std::string>(std::size_t)> row = [&](std::size_t i) {
    const GreenSample g = green_exact(m, *s.x, *s.y, {ks[i], 0.0}, cfg.solver);
    return std::vector<std::string>{num(ks[i]), num(g.value.real()), num(g.value.imag()), num(g.cutoff_left),
                                    num(g.cutoff_right), g.epsilon_delta ? num(*g.epsilon_delta) : ""};
  };
  o.rows = parallel_map<std::vector<std::string>>(ks.size(), s.threads, row);
  o.json = {{"columns", o.header}, {"rows", o.rows}, {"case", o.comment}};
  return o;
}

// ---------------------------------------------------------------------------
// config file

inline std::string json_scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return num(v.get<double>());
  throw UsageError("config values must be scalars or arrays of scalars");
}

/// Fills options not given on the command line from a JSON object. Keys are
/// long option names without dashes; an object under the subcommand name
/// takes precedence over top-level keys.
inline void apply_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  nlohmann::json merged = nlohmann::json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_object()) merged[it.key()] = it.value();
  }
  if (j.contains(sub.get_name()) && j[sub.get_name()].is_object()) {
    for (auto it = j[sub.get_name()].begin(); it != j[sub.get_name()].end(); ++it) merged[it.key()] = it.value();
  }
  for (auto it = merged.begin(); it != merged.end(); ++it) {
    CLI::Option* opt = sub.get_option_no_throw("--" + it.key());
    if (!opt) opt = sub.get_option_no_throw(it.key());
    if (!opt) throw UsageError("unknown config key '" + it.key() + "' for " + sub.get_name());
    if (opt->count() > 0) continue;  // the command line wins
    if (it.value().is_array()) {
      for (const auto& v : it.value()) opt->add_result(json_scalar_text(v));
    } else {
      opt->add_result(json_scalar_text(it.value()));
    }
    opt->run_callback();
  }
}

inline void add_common(CLI::App& sub, RunSpec& s, bool with_points, bool with_grid) {
  sub.add_option("potential", s.potential, "catalog model: " + [] {
    std::string names;
    for (const auto& n : catalog_names()) names += (names.empty() ? "" : ", ") + n;
    return names;
  }());
  sub.add_option("--alpha", s.alpha, "logstep exponent");
  sub.add_option("--a", s.a, "barrier height parameter");
  if (with_points) {
    sub.add_option("--x", s.x, "first point, x >= y (default 1.2 parabolic, 1.5 logstep, 0.5 otherwise)");
    sub.add_option("--y", s.y, "second point (default 1 parabolic, 0.8 logstep, -0.5 otherwise)");
    sub.add_option("--order,-N", s.order, "expansion order N (>= -2)")->capture_default_str();
    sub.add_flag("--generic", s.generic, "zero-energy route for V_S vanishing at both ends");
    sub.add_flag("--no-reflection", s.no_reflection, "run mirror cases directly");
  }
  if (with_grid) {
    sub.add_option("--k-start", s.k_start, "first k");
    sub.add_option("--k-stop", s.k_stop, "last k");
    sub.add_option("--k-count", s.k_count, "number of k values");
    sub.add_option("--spacing", s.spacing, "k spacing")->check(CLI::IsMember({"linear", "log"}));
    sub.add_option("--threads", s.threads, "worker threads for the k grid (0: all cores)")->capture_default_str();
  }
  sub.add_option("--output,-o", s.output, "output file (default stdout)");
  sub.add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--rel-tol", s.rel_tol, "quadrature relative tolerance");
  sub.add_option("--abs-tol", s.abs_tol, "quadrature absolute tolerance");
  sub.add_option("--ode-tol", s.ode_tol, "ODE relative tolerance (also LOWK_GREEN_TOL)");
  sub.add_option("--epsilon", s.epsilon, "imaginary shift of real k in the oracle");
}

}  // namespace detail

/// Entry point. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  RunSpec s;
  std::string config_path;
  CLI::App app{"Low-energy expansion of one-dimensional Schroedinger Green functions", "lowk"};
  app.require_subcommand(1);
  auto* expand = app.add_subcommand("expand", "expansion coefficients g_n with closed-form cross-checks");
  auto* compare = app.add_subcommand("compare", "exact Green function against truncated sums over a k grid");
  auto* brackets = app.add_subcommand("brackets", "evaluate one nested bracket integral");
  auto* scaling = app.add_subcommand("scaling", "log-log slope of the truncation remainder");
  auto* oracle = app.add_subcommand("oracle", "raw exact Green function samples");
  add_common(*expand, s, true, false);
  expand->add_flag("--show-terms", s.show_terms, "include the coefficient term tables");
  add_common(*compare, s, true, true);
  compare->add_flag("--log-form", s.log_form, "add the exponentiated log-form columns");
  compare->add_flag("--pole", s.pole, "add the one-pole resummation columns");
  add_common(*brackets, s, false, false);
  brackets->add_option("--plain", s.plain_signs, "sign string of a plain bracket, e.g. \"-++\"");
  brackets->add_option("--angle-left", s.angle_left_signs, "sign string of a left angle bracket");
  brackets->add_option("--angle-right", s.angle_right_signs, "sign string of a right angle bracket");
  brackets->add_option("--lower", s.lower, "lower limit (number or -inf)")->capture_default_str();
  brackets->add_option("--upper", s.upper, "upper limit (number or inf)")->capture_default_str();
  add_common(*scaling, s, true, true);
  add_common(*oracle, s, true, true);
  for (auto* sub : {expand, compare, brackets, scaling, oracle}) {
    sub->add_option("--config", config_path, "JSON file supplying any option; flags override it");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name(), CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << "\n";
      return kExitOk;
    }
    err << "lowk: " << e.what() << "\n";
    return kExitUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  s.subcommand = sub->get_name();
  try {
    if (!config_path.empty()) apply_config(*sub, config_path);
    if (s.potential.empty()) throw UsageError("a catalog potential name is required");
    const auto [dx, dy] = default_points(s.potential);
    if (!s.x) s.x = dx;
    if (!s.y) s.y = dy;
    if (*s.x < *s.y) throw UsageError("x must not be smaller than y");
    if (s.order < -2) throw UsageError("order N must be at least -2");
    if (s.threads < 0) throw UsageError("threads must be non-negative");
    Output o;
    std::string fmt = s.format;
    if (s.subcommand == "expand") {
      o = cmd_expand(s);
      if (fmt.empty()) fmt = "json";
    } else if (s.subcommand == "compare") {
      o = cmd_compare(s);
    } else if (s.subcommand == "brackets") {
      o = cmd_brackets(s);
    } else if (s.subcommand == "scaling") {
      o = cmd_scaling(s);
    } else {
      o = cmd_oracle(s);
    }
    if (fmt.empty()) fmt = "csv";
    std::ofstream file;
    std::ostream* os = &out;
    if (!s.output.empty()) {
      file.open(s.output);
      if (!file) throw UsageError("cannot write '" + s.output + "'");
      os = &file;
    }
    if (fmt == "csv") write_csv(*os, o);
    else *os << o.json.dump(2) << "\n";
    return kExitOk;
  } catch (const UsageError& e) {
    err << "lowk " << s.subcommand << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "lowk " << context(s) << ": " << e.what() << "\n";
    return is_validation_error(e.kind()) ? kExitUsage : kExitNumerical;
  } catch (const std::exception& e) {
    err << "lowk " << context(s) << ": " << e.what() << "\n";
    return kExitNumerical;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace lowk::cli
