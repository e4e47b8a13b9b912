#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "shiftcurv/audit.hpp"
#include "shiftcurv/errors.hpp"
#include "shiftcurv/exact_sweep.hpp"
#include "shiftcurv/hypersurface.hpp"
#include "shiftcurv/identities.hpp"
#include "shiftcurv/integrate.hpp"
#include "shiftcurv/rational.hpp"
#include "shiftcurv/report.hpp"
#include "shiftcurv/rigidity.hpp"
#include "shiftcurv/surface_spec.hpp"
#include "shiftcurv/symfun.hpp"

namespace shiftcurv::cli {
namespace {

namespace fs = std::filesystem;

/// Unwritable output location.
class IoError : public Error {
 public:
  using Error::Error;
};

const std::vector<std::string> commands = {"symfun-check", "surface-info", "verify", "theorem",
                                           "audit",        "solve",        "ensemble", "sweep"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why = "") {
  throw ArgumentError("invalid value for --" + key + ": '" + value + "'" + (why.empty() ? "" : " (" + why + ")"));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) bad_value(key, v);
    return x;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) bad_value(key, v);
    return x;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

int to_small_int(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < -1000000 || x > 1000000) bad_value(key, v, "out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

/// Config-file value as the text a flag would carry.
std::string json_value_text(const std::string& key, const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (item.is_array() || item.is_object()) bad_value(key, v.dump(), "nested value");
      if (!out.empty()) out += ",";
      out += json_value_text(key, item);
    }
    return out;
  }
  bad_value(key, v.dump());
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "command") cfg.command = v;
  else if (key == "surface") cfg.surface = v;
  else if (key == "n") cfg.n = to_small_int(key, v);
  else if (key == "k") cfg.k = to_small_int(key, v);
  else if (key == "l") cfg.l = to_small_int(key, v);
  else if (key == "grid") cfg.grid = to_small_int(key, v);
  else if (key == "tol") cfg.tol = to_double(key, v);
  else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) bad_value(key, v, "must be >= 0");
    cfg.seed = static_cast<unsigned long long>(s);
  } else if (key == "out") cfg.out = v;
  else if (key == "format") cfg.format = v;
  else if (key == "exact") cfg.exact = to_bool(key, v);
  else if (key == "chi") cfg.chi = v;
  else if (key == "a") cfg.a = to_doubles(key, v);
  else if (key == "b") cfg.b = to_doubles(key, v);
  else if (key == "a-fn") cfg.a_fn = split_list(v);
  else if (key == "b-fn") cfg.b_fn = split_list(v);
  else if (key == "eta") cfg.eta = v;
  else if (key == "aij") cfg.aij = split_list(v);
  else if (key == "epsilon") cfg.epsilon = to_double(key, v);
  else if (key == "expr") cfg.expr = v;
  else if (key == "target") cfg.target = to_double(key, v);
  else if (key == "name") cfg.name = v;
  else if (key == "check") cfg.check = split_list(v);
  else if (key == "weights") cfg.weights = split_list(v);
  else if (key == "field") cfg.field = split_list(v);
  else if (key == "correction-factor") cfg.correction_factor = to_double(key, v);
  else if (key == "lambda") cfg.lambda = split_list(v);
  else if (key == "cases") cfg.cases = to_small_int(key, v);
  else if (key == "members") cfg.members = to_small_int(key, v);
  else if (key == "amplitude") cfg.amplitude = to_double(key, v);
  else if (key == "offset-fraction") cfg.offset_fraction = to_double(key, v);
  else if (key == "max-offset") cfg.max_offset = to_double(key, v);
  else if (key == "modes") {
    cfg.modes.clear();
    for (const auto& item : split_list(v)) cfg.modes.push_back(to_small_int(key, item));
  } else if (key == "rho") cfg.rho = to_double(key, v);
  else if (key == "max-steps") cfg.max_steps = to_small_int(key, v);
  else if (key == "continuation") cfg.continuation = to_small_int(key, v);
  else if (key == "targets") cfg.targets = to_doubles(key, v);
  else if (key == "expr-to") cfg.expr_to = v;
  else if (key == "steps") cfg.steps = to_small_int(key, v);
  else throw ArgumentError("unknown config key '" + key + "'");
}

void validate(const RunConfig& cfg) {
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
    throw ArgumentError("unknown command '" + cfg.command + "'");
  if (cfg.n < 2 || cfg.n > 16) bad_value("n", std::to_string(cfg.n), "expected 2..16");
  if (cfg.k && (*cfg.k < 1 || *cfg.k > cfg.n))
    bad_value("k", std::to_string(*cfg.k), "index out of range 1..n=" + std::to_string(cfg.n));
  if (cfg.l && (*cfg.l < 0 || *cfg.l > cfg.n))
    bad_value("l", std::to_string(*cfg.l), "index out of range 0..n=" + std::to_string(cfg.n));
  if (cfg.grid < 8 || cfg.grid > 4096) bad_value("grid", std::to_string(cfg.grid), "expected 8..4096");
  if (cfg.tol && !(*cfg.tol > 0.0)) bad_value("tol", format_double(*cfg.tol), "must be > 0");
  static const std::set<std::string> formats = {"text", "csv", "json", "svg"};
  if (!formats.count(cfg.format)) bad_value("format", cfg.format, "expected text, csv, json or svg");
  static const std::set<std::string> checks = {"all", "minkowski", "weighted", "generalized", "hk", "volume"};
  for (const auto& c : cfg.check)
    if (!checks.count(c)) bad_value("check", c, "expected all, minkowski, weighted, generalized, hk or volume");
  if (cfg.cases < 1) bad_value("cases", std::to_string(cfg.cases), "must be >= 1");
  if (cfg.members < 1) bad_value("members", std::to_string(cfg.members), "must be >= 1");
  if (cfg.amplitude < 0.0) bad_value("amplitude", format_double(cfg.amplitude), "must be >= 0");
  if (cfg.offset_fraction < 0.0 || cfg.offset_fraction > 1.0)
    bad_value("offset-fraction", format_double(cfg.offset_fraction), "expected 0..1");
  if (cfg.max_offset < 0.0) bad_value("max-offset", format_double(cfg.max_offset), "must be >= 0");
  if (cfg.modes.empty()) bad_value("modes", "", "at least one mode");
  for (int m : cfg.modes)
    if (m < 1) bad_value("modes", std::to_string(m), "modes must be >= 1");
  if (!(cfg.rho > 0.0)) bad_value("rho", format_double(cfg.rho), "must be > 0");
  if (cfg.max_steps < 1) bad_value("max-steps", std::to_string(cfg.max_steps), "must be >= 1");
  if (cfg.continuation < 1) bad_value("continuation", std::to_string(cfg.continuation), "must be >= 1");
  if (cfg.steps < 1) bad_value("steps", std::to_string(cfg.steps), "must be >= 1");
}

struct Cli {
  CLI::App app{"Shifted-curvature integral identities, proof audits and rigidity probes", "shiftcurv"};
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  std::string config_path;
  bool exact = false;
  CLI::Option* exact_opt = nullptr;

  Cli() {
    app.add_option("command", raw["command"], "symfun-check | surface-info | verify | theorem | audit | solve | "
                                              "ensemble | sweep");
    app.add_option("--config", config_path, "JSON file of settings; flags override its values");
    const std::vector<std::pair<std::string, std::string>> described = {
        {"surface", "surface spec, e.g. sphere:rho=1:d=0.3 or perturbed:rho=1:eps=0.1:mode=2"},
        {"n", "dimension of the hypersurface (2..16)"},
        {"k", "curvature index (1..n)"},
        {"l", "second curvature index"},
        {"grid", "colatitude nodes"},
        {"tol", "pass tolerance"},
        {"seed", "random seed"},
        {"out", "directory for report files (stdout when absent)"},
        {"format", "text | csv | json | svg"},
        {"chi", "weight family, e.g. pow:1, exp:0.5@V, const:1"},
        {"a", "constant coefficients a_i, comma separated"},
        {"b", "constant coefficients b_j, comma separated"},
        {"a-fn", "radial coefficient functions a_j"},
        {"b-fn", "radial coefficient functions b_j"},
        {"eta", "radial function eta (thm1.6)"},
        {"aij", "i:j:weight triples (thm1.7)"},
        {"epsilon", "uniform h-convexity margin (thm3.2, thm4.2)"},
        {"expr", "curvature expression, e.g. Hs2, {pow:1@V}*Hs1, Hs2/Hs1"},
        {"target", "constant right-hand side"},
        {"name", "theorem id (thm1.1i ... coro1.9) or all"},
        {"check", "verify selection: all, minkowski, weighted, generalized, hk, volume"},
        {"weights", "weights chi for the weighted formula"},
        {"field", "test fields phi for the generalized formula (harmonic:<m> or a coefficient)"},
        {"correction-factor", "factor on the weighted correction term (1 is correct; test hook)"},
        {"lambda", "eigenvalues for symfun-check, e.g. --lambda=1/2,-1,3"},
        {"cases", "random cases per identity family"},
        {"members", "ensemble size"},
        {"amplitude", "largest perturbation amplitude"},
        {"offset-fraction", "share of ensemble members started from offset spheres"},
        {"max-offset", "largest center offset of such members"},
        {"modes", "perturbation modes"},
        {"rho", "reference sphere radius"},
        {"max-steps", "Newton steps per solve"},
        {"continuation", "continuation stages per solve"},
        {"targets", "sweep over these targets"},
        {"expr-to", "sweep blending --expr into this expression"},
        {"steps", "sweep stages for --expr-to"},
    };
    for (const auto& [key, help] : described) opts[key] = app.add_option("--" + key, raw[key], help);
    exact_opt = app.add_flag("--exact", exact, "rational arithmetic where available");
  }
};

RunConfig parse_with(Cli& cli, int argc, const char* const* argv) {
  cli.app.parse(argc, argv);
  RunConfig cfg;
  if (!cli.config_path.empty()) {
    std::ifstream in(cli.config_path);
    if (!in) throw ArgumentError("cannot read config file '" + cli.config_path + "'");
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ArgumentError("config file '" + cli.config_path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ArgumentError("config file must hold a JSON object");
    const auto& keys = config_keys();
    for (const auto& [k, v] : doc.items()) {
      const std::string key = normalize_key(k);
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw ArgumentError("unknown config key '" + k + "'");
      apply(cfg, key, json_value_text(key, v));
    }
  }
  if (!cli.raw["command"].empty()) cfg.command = cli.raw["command"];
  for (const auto& [key, opt] : cli.opts)
    if (opt->count() > 0) apply(cfg, key, cli.raw[key]);
  if (cli.exact_opt->count() > 0) cfg.exact = cli.exact;
  if (cfg.command.empty()) throw ArgumentError("missing command; expected one of symfun-check, surface-info, verify, "
                                               "theorem, audit, solve, ensemble, sweep");
  validate(cfg);
  return cfg;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["surface"] = c.surface;
  j["n"] = c.n;
  j["k"] = c.k ? Json(*c.k) : Json(nullptr);
  j["l"] = c.l ? Json(*c.l) : Json(nullptr);
  j["grid"] = c.grid;
  j["tol"] = c.tol ? Json(*c.tol) : Json(nullptr);
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["exact"] = c.exact;
  auto opt_str = [](const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); };
  auto opt_num = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
  if (c.command == "theorem" || c.command == "audit" || c.command == "solve" || c.command == "ensemble" ||
      c.command == "sweep") {
    j["name"] = c.name;
    j["chi"] = opt_str(c.chi);
    j["a"] = c.a;
    j["b"] = c.b;
    j["a_fn"] = c.a_fn;
    j["b_fn"] = c.b_fn;
    j["eta"] = opt_str(c.eta);
    j["aij"] = c.aij;
    j["epsilon"] = opt_num(c.epsilon);
  }
  if (c.command == "verify") {
    j["check"] = c.check;
    j["weights"] = c.weights;
    j["field"] = c.field;
    j["correction_factor"] = c.correction_factor;
  }
  if (c.command == "symfun-check") {
    j["lambda"] = c.lambda;
    j["cases"] = c.cases;
  }
  if (c.command == "solve" || c.command == "ensemble" || c.command == "sweep") {
    j["expr"] = opt_str(c.expr);
    j["target"] = opt_num(c.target);
    j["rho"] = c.rho;
    j["max_steps"] = c.max_steps;
    j["continuation"] = c.continuation;
  }
  if (c.command == "ensemble") {
    j["members"] = c.members;
    j["amplitude"] = c.amplitude;
    j["offset_fraction"] = c.offset_fraction;
    j["max_offset"] = c.max_offset;
    j["modes"] = c.modes;
  }
  if (c.command == "sweep") {
    j["targets"] = c.targets;
    j["expr_to"] = opt_str(c.expr_to);
    j["steps"] = c.steps;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Output

struct Output {
  std::vector<IdentityReport> checks;
  Json extra = Json::object();
  std::string text;                 ///< body of the text format
  std::optional<std::string> csv;   ///< replaces the checks CSV when set
  std::vector<std::pair<std::string, std::string>> svgs;  ///< (file suffix, document)
};

/// Pass/fail report that is not a numeric comparison.
IdentityReport verdict(std::string name, CheckKind kind, double lhs, double rhs, double tol, bool pass,
                       std::string note = "") {
  IdentityReport r;
  r.name = std::move(name);
  r.kind = kind;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_err = scale > 0.0 ? r.abs_err / scale : 0.0;
  r.slack = scale > 0.0 ? (lhs - rhs) / scale : 0.0;
  r.tol = tol;
  r.pass = pass;
  r.note = std::move(note);
  return r;
}

std::string checks_text(const std::vector<IdentityReport>& checks) {
  std::ostringstream os;
  std::size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  os << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(10) << "kind" << "  "
     << std::setw(24) << "lhs" << "  " << std::setw(24) << "rhs" << "  " << std::setw(12) << "rel_err" << "  "
     << "result\n";
  for (const auto& c : checks) {
    std::string result = !c.applicable ? "n/a" : (c.pass ? "pass" : "FAIL");
    if (c.kind == CheckKind::hypothesis && c.applicable) result += " (informational)";
    std::ostringstream rel;
    rel << std::setprecision(3) << std::scientific << c.rel_err;
    os << std::setw(static_cast<int>(width)) << c.name << "  " << std::setw(10) << to_string(c.kind) << "  "
       << std::setw(24) << format_double(c.lhs) << "  " << std::setw(24) << format_double(c.rhs) << "  "
       << std::setw(12) << rel.str() << "  " << result;
    if (!c.note.empty()) os << "  [" << c.note << "]";
    os << "\n";
  }
  return os.str();
}

int exit_code_of(const std::vector<IdentityReport>& checks) {
  for (const auto& c : checks)
    if (c.applicable && !c.pass && c.kind != CheckKind::hypothesis) return check_failed;
  return ok;
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

void emit(const RunConfig& cfg, const Output& o, std::ostream& out) {
  std::string body;
  std::string ext = cfg.format;
  if (cfg.format == "csv") {
    body = o.csv ? *o.csv : checks_csv(o.checks);
  } else if (cfg.format == "json") {
    body = report_document(cfg.command, config_json(cfg), o.checks, o.extra).dump(2) + "\n";
  } else if (cfg.format == "svg") {
    if (o.svgs.empty()) throw ArgumentError("--format svg: command '" + cfg.command + "' has no plot");
    if (!cfg.out.empty()) {
      for (const auto& [suffix, doc] : o.svgs) write_file(fs::path(cfg.out) / (cfg.command + suffix + ".svg"), doc);
      return;
    }
    body = o.svgs.front().second;
  } else {
    ext = "txt";
    body = o.text + (o.checks.empty() ? "" : "\n" + checks_text(o.checks));
    int passed = 0, failed = 0, informational = 0;
    for (const auto& c : o.checks) {
      if (c.kind == CheckKind::hypothesis) ++informational;
      else if (c.pass || !c.applicable) ++passed;
      else ++failed;
    }
    std::ostringstream s;
    s << "\nsummary: " << passed << " passed, " << failed << " failed, " << informational << " informational\n";
    body += s.str();
  }
  if (cfg.out.empty()) {
    out << body;
  } else {
    write_file(fs::path(cfg.out) / (cfg.command + "." + ext), body);
  }
}

// ---------------------------------------------------------------------------
// Shared builders

std::string fmt(double x) { return format_double(x); }

TheoremConfig theorem_config(const RunConfig& c, TheoremId id) {
  TheoremConfig t;
  t.id = id;
  t.k = c.k.value_or(-1);
  t.l = c.l.value_or(-1);
  const CoefficientSource chi_source =
      (id == TheoremId::thm3_2 || id == TheoremId::thm4_2) ? CoefficientSource::V_minus_u : CoefficientSource::V;
  if (c.chi) t.chi = parse_coefficient(*c.chi, chi_source);
  else t.chi = Coefficient::power(1.0, chi_source);
  t.a = c.a;
  t.b = c.b;
  for (const auto& s : c.a_fn) t.a_fn.push_back(parse_coefficient(s, CoefficientSource::r));
  for (const auto& s : c.b_fn) t.b_fn.push_back(parse_coefficient(s, CoefficientSource::r));
  if (c.eta) t.eta = parse_coefficient(*c.eta, CoefficientSource::r);
  for (const auto& s : c.aij) {
    std::stringstream ss(s);
    std::string i, j, w;
    if (!std::getline(ss, i, ':') || !std::getline(ss, j, ':') || !std::getline(ss, w) )
      bad_value("aij", s, "expected i:j:weight");
    t.a_ij.emplace_back(to_small_int("aij", i), to_small_int("aij", j), to_double("aij", w));
  }
  if (c.epsilon) t.epsilon = *c.epsilon;
  t.tol = c.tol.value_or(default_tolerance);
  return resolve_theorem_config(t, c.n);
}

bool concludes_centered(const TheoremConfig& t) {
  switch (t.id) {
    case TheoremId::thm1_1i:
    case TheoremId::thm1_1ii:
    case TheoremId::thm3_2:
    case TheoremId::thm4_2:
      return t.chi.strictly_increasing();
    default:
      return false;
  }
}

/// Area-weighted mean of expr on the centered sphere of radius rho.
double sphere_target(const CurvatureExpr& expr, int n, int grid, double rho) {
  const GeometryField g = geometry_from_profile(sphere_profile({rho, 0.0}, n, grid));
  return residual_report("target", evaluate(expr, g.curvature), g).mean;
}

SolveConfig solve_config(const RunConfig& c) {
  SolveConfig s;
  if (!c.name.empty()) {
    s = equation_for_theorem(theorem_config(c, parse_theorem_id(c.name)), c.n, c.grid, c.rho);
    if (c.expr) throw ArgumentError("--expr and --name are mutually exclusive");
    if (c.target) s.target = *c.target;
  } else {
    if (!c.expr) throw ArgumentError("solve needs --expr (with optional --target) or --name");
    s.expr = parse_curvature_expr(*c.expr);
    s.n = c.n;
    s.grid = c.grid;
    s.target = c.target ? *c.target : sphere_target(s.expr, c.n, c.grid, c.rho);
  }
  s.init = parse_surface_spec(c.surface);
  if (s.init.needs_full_grid()) throw ArgumentError("the solver needs an axisymmetric initial surface");
  s.max_steps = c.max_steps;
  s.tol = c.tol.value_or(1e-10);
  s.continuation_steps = c.continuation;
  return s;
}

std::string curvature_table(const GeometryField& g) {
  std::ostringstream os;
  const auto& c = g.curvature;
  os << "k   H_k(kappa) [min, max]                          H_k(kappa - 1) [min, max]\n";
  for (int k = 0; k <= g.n; ++k) {
    os << std::left << std::setw(4) << k << std::setw(48)
       << ("[" + fmt(c.H.col(k).minCoeff()) + ", " + fmt(c.H.col(k).maxCoeff()) + "]")
       << "[" << fmt(c.H_shifted.col(k).minCoeff()) << ", " << fmt(c.H_shifted.col(k).maxCoeff()) << "]\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// symfun-check

Rational parse_rational(const std::string& s) {
  try {
    if (s.find('/') != std::string::npos) {
      Rational q(s);
      return q;
    }
    std::string t = s;
    bool negative = false;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
      negative = t[0] == '-';
      t = t.substr(1);
    }
    const auto dot = t.find('.');
    std::string digits = t;
    std::size_t decimals = 0;
    if (dot != std::string::npos) {
      digits = t.substr(0, dot) + t.substr(dot + 1);
      decimals = t.size() - dot - 1;
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      bad_value("lambda", s);
    Rational q(digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1)));
    Rational scale(1);
    for (std::size_t i = 0; i < decimals; ++i) scale *= 10;
    q /= scale;
    return negative ? Rational(-q) : q;
  } catch (const ArgumentError&) {
    throw;
  } catch (const std::exception&) {
    bad_value("lambda", s);
  }
}

double parse_real(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return to_double("lambda", s);
  const double den = to_double("lambda", s.substr(slash + 1));
  if (den == 0.0) bad_value("lambda", s, "zero denominator");
  return to_double("lambda", s.substr(0, slash)) / den;
}

template <class Scalar>
double as_double(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) return x.template convert_to<double>();
  else return x;
}

template <class Scalar>
std::string as_text(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) return x.str();
  else return format_double(x);
}

template <class Scalar>
IdentityReport compare(std::string name, const Scalar& lhs, const Scalar& rhs, double tol) {
  if constexpr (is_exact_v<Scalar>) {
    return verdict(std::move(name), CheckKind::identity, as_double(lhs), as_double(rhs), 0.0, lhs == rhs, "exact");
  } else {
    return make_report(std::move(name), CheckKind::identity, lhs, rhs, tol);
  }
}

template <class Scalar>
void symfun_lambda(const std::vector<Scalar>& values, double tol, Output& o) {
  const int n = static_cast<int>(values.size());
  Vec<Scalar> lam(n);
  for (int i = 0; i < n; ++i) lam(i) = values[static_cast<std::size_t>(i)];
  Vec<Scalar> shifted = lam;
  for (int i = 0; i < n; ++i) shifted(i) -= Scalar(1);
  const SymTable<Scalar> t = sym_table(lam);
  const SymTable<Scalar> ts = sym_table(shifted);
  Mat<Scalar> a = Mat<Scalar>::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = lam(i);

  Json table = Json::array();
  std::ostringstream os;
  os << "n = " << n << "\nk   sigma_k   H_k   H_k(lambda - 1)\n";
  for (int k = 0; k <= n; ++k) {
    table.push_back({{"k", k},
                     {"sigma", as_text(t.sigma(k))},
                     {"H", as_text(t.H(k))},
                     {"H_shifted", as_text(ts.H(k))}});
    os << k << "   " << as_text(t.sigma(k)) << "   " << as_text(t.H(k)) << "   " << as_text(ts.H(k)) << "\n";
  }
  const ConeReport cone = cone_report(lam);
  const ConeReport cone_shifted = cone_report(shifted);
  os << "lambda in open cone Gamma_k up to k = " << cone.max_k << ", closed up to k = " << cone.max_closed_k << "\n";
  os << "lambda - 1 in open cone up to k = " << cone_shifted.max_k << ", closed up to k = " << cone_shifted.max_closed_k
     << "\n";
  o.text = os.str();
  o.extra["symmetric_functions"] = table;
  o.extra["cone"] = {{"open", cone.max_k}, {"closed", cone.max_closed_k}};
  o.extra["cone_shifted"] = {{"open", cone_shifted.max_k}, {"closed", cone_shifted.max_closed_k}};

  Vec<Scalar> h(n + 1), hs(n + 1);
  for (int k = 0; k <= n; ++k) {
    h(k) = t.H(k);
    hs(k) = ts.H(k);
  }
  for (int k = 1; k <= n; ++k) {
    o.checks.push_back(compare("shift_forward_k" + std::to_string(k), ts.H(k),
                               shift_transform(h, k, ShiftDirection::to_shifted), tol));
    o.checks.push_back(compare("shift_inverse_k" + std::to_string(k), t.H(k),
                               shift_transform(hs, k, ShiftDirection::from_shifted), tol));
    const Mat<Scalar> tk = newton_tensor(a, k - 1);
    o.checks.push_back(compare("trace_newton_k" + std::to_string(k), Scalar(tk.trace()),
                               Scalar(Scalar(n - k + 1) * t.sigma(k - 1)), tol));
    o.checks.push_back(compare("trace_newton_a_k" + std::to_string(k), Scalar((tk * a).trace()),
                               Scalar(Scalar(k) * t.sigma(k)), tol));
  }
  Vec<double> lam_d(n);
  for (int i = 0; i < n; ++i) lam_d(i) = as_double(lam(i));
  const int closed = cone_report(lam_d).max_closed_k;
  for (int k = 2; k <= closed; ++k) {
    for (int l = 1; l < k; ++l) {
      const NewtonMaclaurinGap g = newton_maclaurin_gap(lam_d, k, l);
      const std::string tag = "_k" + std::to_string(k) + "_l" + std::to_string(l);
      o.checks.push_back(make_report("newton_maclaurin_product" + tag, CheckKind::inequality, g.product_gap, 0.0, 1e-12));
      o.checks.push_back(make_report("newton_maclaurin_power" + tag, CheckKind::inequality, g.power_gap, 0.0, 1e-12));
    }
  }
}

Output cmd_symfun(const RunConfig& c) {
  Output o;
  if (!c.lambda.empty()) {
    if (c.exact) {
      std::vector<Rational> v;
      for (const auto& s : c.lambda) v.push_back(parse_rational(s));
      symfun_lambda(v, 0.0, o);
    } else {
      std::vector<double> v;
      for (const auto& s : c.lambda) v.push_back(parse_real(s));
      symfun_lambda(v, c.tol.value_or(1e-12), o);
    }
    return o;
  }
  ExactSweepOptions opts;
  opts.seed = c.seed;
  opts.cases = c.cases;
  opts.exact = c.exact;
  if (c.tol) opts.float_tol = *c.tol;
  o.checks = exact_identity_sweep(opts);
  o.text = std::string("randomized identity sweep, ") + (c.exact ? "rational" : "double") + " arithmetic, " +
           std::to_string(c.cases) + " cases per family, seed " + std::to_string(c.seed) + "\n";
  return o;
}

// ---------------------------------------------------------------------------
// surface-info

Output cmd_surface_info(const RunConfig& c) {
  const SurfaceSpec spec = parse_surface_spec(c.surface);
  const GeometryField g = build_geometry(spec, c.n, c.grid);
  const auto& cv = g.curvature;
  Output o;
  const double area = surface_integral(Eigen::VectorXd::Ones(g.size()), g);
  const double volume = enclosed_weighted_volume(g);
  const EllipticPoint ep = elliptic_point(g);
  const double hess = hessV_residual(g);
  Json info;
  info["nodes"] = g.size();
  info["axisymmetric"] = g.axisymmetric();
  info["r_min"] = cv.r.minCoeff();
  info["r_max"] = cv.r.maxCoeff();
  info["V_min"] = cv.V.minCoeff();
  info["V_max"] = cv.V.maxCoeff();
  info["u_min"] = cv.u.minCoeff();
  info["kappa_min"] = cv.kappa.minCoeff();
  info["kappa_max"] = cv.kappa.maxCoeff();
  info["min_shifted_curvature"] = min_shifted_curvature(g);
  info["closed_cone_order"] = closed_cone_order(g);
  info["mean_convexity_margin"] = mean_convexity_margin(g);
  info["umbilicity"] = umbilicity(g);
  info["centered_metric"] = centered_metric(g);
  info["hessV_residual"] = hess;
  info["elliptic_point"] = {{"node", ep.node}, {"r_max", ep.r_max}, {"margin", ep.margin}};
  info["area"] = area;
  info["weighted_volume"] = volume;
  o.extra["surface"] = info;

  std::ostringstream os;
  os << "surface " << c.surface << ", n = " << c.n << ", " << g.size() << " nodes\n";
  os << "r in [" << fmt(cv.r.minCoeff()) << ", " << fmt(cv.r.maxCoeff()) << "], V in [" << fmt(cv.V.minCoeff())
     << ", " << fmt(cv.V.maxCoeff()) << "], min u " << fmt(cv.u.minCoeff()) << "\n";
  os << "principal curvatures in [" << fmt(cv.kappa.minCoeff()) << ", " << fmt(cv.kappa.maxCoeff()) << "]\n";
  os << "min(kappa_i - 1) " << fmt(min_shifted_curvature(g)) << ", kappa - 1 in closed cone up to k = "
     << closed_cone_order(g) << "\n";
  os << "min(H - n) " << fmt(mean_convexity_margin(g)) << ", umbilicity " << fmt(umbilicity(g))
     << ", osc V " << fmt(centered_metric(g)) << "\n";
  os << "elliptic point: r_max " << fmt(ep.r_max) << ", margin " << fmt(ep.margin) << "\n";
  os << "area " << fmt(area) << ", int_Omega V " << fmt(volume) << "\n";
  os << curvature_table(g);
  o.text = os.str();
  o.checks.push_back(make_report("hessV_identity", CheckKind::identity, hess, 0.0, c.tol.value_or(1e-6), &g));
  if (g.axisymmetric()) {
    const auto& p = std::get<RadialProfile>(g.source);
    o.svgs.emplace_back("", profile_svg({{c.surface, p}}));
  }
  return o;
}

// ---------------------------------------------------------------------------
// verify

Output cmd_verify(const RunConfig& c) {
  const GeometryField g = build_geometry(parse_surface_spec(c.surface), c.n, c.grid);
  const bool all = std::find(c.check.begin(), c.check.end(), "all") != c.check.end();
  auto wants = [&](const std::string& s) { return all || std::find(c.check.begin(), c.check.end(), s) != c.check.end(); };
  const bool hk_explicit = std::find(c.check.begin(), c.check.end(), "hk") != c.check.end();
  const double tol = c.tol.value_or(default_tolerance);
  const double tight = c.tol.value_or(1e-8);
  std::vector<int> ks;
  if (c.k) ks.push_back(*c.k);
  else
    for (int k = 1; k <= c.n; ++k) ks.push_back(k);

  std::vector<Coefficient> weights;
  if (c.chi) weights.push_back(parse_coefficient(*c.chi));
  else
    for (const auto& w : c.weights) weights.push_back(parse_coefficient(w));
  std::vector<ScalarField> fields;
  for (const auto& f : c.field) fields.push_back(parse_scalar_field(f));

  using Job = std::function<std::vector<IdentityReport>()>;
  std::vector<Job> jobs;
  if (wants("minkowski"))
    for (int k : ks) jobs.push_back([&, k] { return std::vector{minkowski_check(g, k, tol)}; });
  if (wants("weighted"))
    for (int k : ks)
      for (const auto& w : weights)
        jobs.push_back([&, k, w] {
          WeightedMinkowskiOptions opts;
          opts.correction_factor = c.correction_factor;
          opts.tol = tol;
          const auto r = weighted_minkowski_check(g, k, w, opts);
          return std::vector{r.equality, r.inequality};
        });
  if (wants("generalized"))
    for (int k : ks)
      for (const auto& f : fields)
        jobs.push_back([&, k, f] { return std::vector{generalized_minkowski_check(g, k, f, tol)}; });
  if (wants("hk"))
    jobs.push_back([&] {
      if (hk_explicit) return std::vector{heintze_karcher_check(g, tight)};
      try {
        return std::vector{heintze_karcher_check(g, tight)};
      } catch (const PreconditionError& e) {
        return std::vector{not_applicable("heintze_karcher", e.what(), &g)};
      }
    });
  if (wants("volume")) jobs.push_back([&] { return std::vector{volume_identity_check(g, tight)}; });

  std::vector<std::future<std::vector<IdentityReport>>> futures;
  futures.reserve(jobs.size());
  for (auto& job : jobs) futures.push_back(std::async(std::launch::async, job));
  Output o;
  for (auto& f : futures)
    for (auto& r : f.get()) o.checks.push_back(std::move(r));
  std::ostringstream os;
  os << "surface " << c.surface << ", n = " << c.n << ", " << g.size() << " nodes";
  if (c.correction_factor != 1.0) os << ", weighted correction factor " << fmt(c.correction_factor);
  os << "\n";
  o.text = os.str();
  return o;
}

// ---------------------------------------------------------------------------
// theorem

Output cmd_theorem(const RunConfig& c) {
  if (c.name.empty()) throw ArgumentError("theorem needs --name (thm1.1i ... coro1.9)");
  const TheoremConfig t = theorem_config(c, parse_theorem_id(c.name));
  const GeometryField g = build_geometry(parse_surface_spec(c.surface), c.n, c.grid);
  const CurvatureExpr expr = hypothesis_expression(t);
  const ResidualReport rr = constancy_residual(g, expr);
  const double tol = t.tol;
  const bool hypothesis = rr.relative_oscillation <= tol;
  const double umb = umbilicity(g);
  const double osc_v = centered_metric(g);
  const bool sphere = umb <= tol;
  const bool centered_needed = concludes_centered(t);
  const bool conclusion = sphere && (!centered_needed || osc_v <= tol);

  Output o;
  o.checks.push_back(verdict("hypothesis_constancy", CheckKind::hypothesis, rr.relative_oscillation, 0.0, tol,
                             hypothesis, expr.to_string() + " constant"));
  o.checks.push_back(verdict("geodesic_sphere", CheckKind::hypothesis, umb, 0.0, tol, sphere, "umbilicity"));
  if (centered_needed)
    o.checks.push_back(verdict("centered_sphere", CheckKind::hypothesis, osc_v, 0.0, tol, osc_v <= tol, "osc V"));
  o.checks.push_back(verdict("rigidity_consistency", CheckKind::identity, hypothesis ? 1.0 : 0.0,
                             conclusion ? 1.0 : 0.0, 0.0, !hypothesis || conclusion,
                             "hypothesis implies conclusion"));
  for (auto& r : o.checks) {
    r.grid = static_cast<int>(g.size());
    r.n = c.n;
  }
  o.extra["theorem"] = {{"id", to_string(t.id)},
                        {"statement", theorem_summary(t.id)},
                        {"expression", expr.to_string()},
                        {"k", t.k},
                        {"l", t.l},
                        {"chi", t.chi.to_string()},
                        {"conclusion", centered_needed ? "centered geodesic sphere" : "geodesic sphere"}};
  o.extra["hypothesis"] = to_json(rr);
  std::ostringstream os;
  os << to_string(t.id) << ": " << theorem_summary(t.id) << "\n";
  os << "surface " << c.surface << ", n = " << c.n << ", " << g.size() << " nodes\n";
  os << "hypothesis field " << expr.to_string() << ": mean " << fmt(rr.mean) << ", relative oscillation "
     << fmt(rr.relative_oscillation) << (hypothesis ? " (holds)" : " (fails)") << "\n";
  os << "umbilicity " << fmt(umb) << ", osc V " << fmt(osc_v) << "\n";
  o.text = os.str();
  return o;
}

// ---------------------------------------------------------------------------
// audit

Output cmd_audit(const RunConfig& c) {
  const GeometryField g = build_geometry(parse_surface_spec(c.surface), c.n, c.grid);
  const bool all = c.name.empty() || c.name == "all";
  std::vector<TheoremId> ids = all ? all_theorems() : std::vector<TheoremId>{parse_theorem_id(c.name)};
  Output o;
  Json audits = Json::array();
  std::ostringstream os;
  os << "surface " << c.surface << ", n = " << c.n << ", " << g.size() << " nodes\n";
  for (TheoremId id : ids) {
    AuditResult a;
    if (all) {
      try {
        RunConfig defaults;
        defaults.n = c.n;
        defaults.tol = c.tol;
        a = proof_chain_audit(g, theorem_config(defaults, id));
      } catch (const ArgumentError& e) {
        a.id = id;
        a.skipped = true;
        a.reason = e.what();
      }
    } else {
      a = proof_chain_audit(g, theorem_config(c, id));
      if (a.skipped) throw PreconditionError(to_string(id) + " audit skipped: " + a.reason);
    }
    const std::string prefix = to_string(id) + "/";
    if (a.skipped) {
      o.checks.push_back(not_applicable(prefix + "skipped", a.reason, &g));
      os << to_string(id) << ": skipped (" << a.reason << ")\n";
    } else {
      for (auto r : a.links) {
        r.name = prefix + r.name;
        o.checks.push_back(std::move(r));
      }
      os << to_string(id) << ": " << a.links.size() << " links, max inequality slack "
         << fmt(a.max_inequality_slack()) << ", max |slack| " << fmt(a.max_abs_slack()) << "\n";
      if (!a.limitation.empty()) os << "  limitation: " << a.limitation << "\n";
    }
    audits.push_back(to_json(a));
  }
  o.extra["audits"] = audits;
  o.text = os.str();
  return o;
}

// ---------------------------------------------------------------------------
// solve, ensemble, sweep

void solve_checks(const std::string& prefix, const SolveResult& r, double tol, Output& o) {
  const auto& cl = r.classification;
  o.checks.push_back(verdict(prefix + "converged", CheckKind::identity, r.final_residual(), 0.0, tol, r.converged,
                             to_string(r.status)));
  o.checks.push_back(verdict(prefix + "umbilic", CheckKind::hypothesis, cl.umbilicity, 0.0, 1e-8,
                             r.converged && cl.umbilicity <= 1e-8));
  o.checks.push_back(verdict(prefix + "centered", CheckKind::hypothesis, cl.centered_metric, 0.0, 1e-8,
                             r.converged && cl.centered_metric <= 1e-8));
}

std::string solve_line(const SolveResult& r) {
  const auto& cl = r.classification;
  std::ostringstream os;
  os << to_string(r.status) << " after " << r.steps << " steps, residual " << fmt(r.final_residual())
     << ", umbilicity " << fmt(cl.umbilicity) << ", osc V " << fmt(cl.centered_metric) << ", fit rho "
     << fmt(cl.fit.sphere.rho) << " d " << fmt(cl.fit.sphere.d);
  return os.str();
}

Output cmd_solve(const RunConfig& c) {
  const SolveConfig s = solve_config(c);
  const SolveResult r = solve_constant_equation(s);
  if (r.status == SolveStatus::invalid_init) throw PreconditionError("invalid initial surface: " + r.message);
  Output o;
  solve_checks("", r, s.tol, o);
  o.extra["equation"] = {{"expr", s.expr.to_string()}, {"target", s.target}};
  o.extra["solve"] = to_json(r);
  o.text = "solve " + s.expr.to_string() + " = " + fmt(s.target) + " from " + c.surface + "\n" + solve_line(r) +
           (r.message.empty() ? "" : "\n" + r.message) + "\n";
  o.svgs.emplace_back("_profile", profile_svg({{"solution", r.profile}}));
  o.svgs.emplace_back("_history", history_svg({{"residual", r.residual_history}}));
  return o;
}

Output cmd_ensemble(const RunConfig& c) {
  const SolveConfig s = solve_config(c);
  EnsembleSpec spec;
  spec.members = c.members;
  spec.max_amplitude = c.amplitude;
  spec.modes = c.modes;
  spec.offset_fraction = c.offset_fraction;
  spec.max_offset = c.max_offset;
  spec.rho = c.rho;
  spec.seed = c.seed;
  const auto members = perturbation_ensemble(s, spec);
  const EnsembleSummary sum = summarize(members);
  Output o;
  o.checks.push_back(verdict("all_converged", CheckKind::identity, sum.converged, sum.members, 0.0,
                             sum.converged == sum.members));
  o.checks.push_back(verdict("converged_umbilic", CheckKind::identity, sum.umbilic, sum.converged, 0.0,
                             sum.umbilic == sum.converged, "umbilicity <= 1e-8"));
  o.checks.push_back(verdict("converged_centered", CheckKind::hypothesis, sum.centered, sum.converged, 0.0,
                             sum.centered == sum.converged, "osc V <= 1e-8"));
  o.extra["equation"] = {{"expr", s.expr.to_string()}, {"target", s.target}};
  o.extra["summary_ensemble"] = to_json(sum);
  o.extra["members"] = to_json(members);
  o.extra["label"] = "basins of attraction are properties of the solver, not of the equation";
  o.csv = ensemble_csv(members);
  std::ostringstream os;
  os << "ensemble of " << sum.members << " for " << s.expr.to_string() << " = " << fmt(s.target) << "\n";
  for (const auto& m : members) os << std::setw(3) << m.index << "  " << m.init << "  " << solve_line(m.result) << "\n";
  os << sum.converged << "/" << sum.members << " converged, " << sum.umbilic << " umbilic, " << sum.centered
     << " centered\n";
  o.text = os.str();
  std::vector<std::pair<std::string, std::vector<double>>> hist;
  for (const auto& m : members) hist.emplace_back("member " + std::to_string(m.index), m.result.residual_history);
  o.svgs.emplace_back("_history", history_svg(hist));
  return o;
}

CurvatureExpr blend(const CurvatureExpr& from, const CurvatureExpr& to, double s) {
  if (from.denominator.size() != to.denominator.size() ||
      (!from.denominator.empty() && CurvatureExpr{{}, from.denominator}.to_string() !=
                                        CurvatureExpr{{}, to.denominator}.to_string()))
    throw ArgumentError("--expr and --expr-to must share the denominator");
  CurvatureExpr e;
  e.denominator = from.denominator;
  for (auto t : from.numerator) {
    t.scale *= 1.0 - s;
    if (t.scale != 0.0) e.numerator.push_back(t);
  }
  for (auto t : to.numerator) {
    t.scale *= s;
    if (t.scale != 0.0) e.numerator.push_back(t);
  }
  return e;
}

Output cmd_sweep(const RunConfig& c) {
  const SolveConfig base = solve_config(c);
  std::vector<SweepPoint> path;
  if (!c.targets.empty()) {
    if (c.expr_to) throw ArgumentError("--targets and --expr-to are mutually exclusive");
    for (double t : c.targets) path.push_back({base.expr, t, "target=" + fmt(t)});
  } else if (c.expr_to) {
    if (!c.expr) throw ArgumentError("--expr-to needs --expr");
    const CurvatureExpr to = parse_curvature_expr(*c.expr_to);
    for (int i = 0; i <= c.steps; ++i) {
      const double s = static_cast<double>(i) / c.steps;
      const CurvatureExpr e = blend(base.expr, to, s);
      const double target = c.target ? *c.target : sphere_target(e, c.n, c.grid, c.rho);
      path.push_back({e, target, "s=" + fmt(s)});
    }
  } else {
    throw ArgumentError("sweep needs --targets or --expr-to");
  }
  const auto results = continuation_sweep(base, path);
  Output o;
  std::ostringstream csv, os;
  csv << "point,label,target,status,converged,steps,final_residual,umbilicity,centered_metric,rho_fit,d_fit\n";
  Json points = Json::array();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::string prefix = path[i].label + "/";
    if (i >= results.size()) {
      o.checks.push_back(not_applicable(prefix + "converged", "not reached"));
      continue;
    }
    const SolveResult& r = results[i];
    const auto& cl = r.classification;
    solve_checks(prefix, r, base.tol, o);
    csv << i << "," << path[i].label << "," << fmt(path[i].target) << "," << to_string(r.status) << ","
        << (r.converged ? "true" : "false") << "," << r.steps << "," << fmt(r.final_residual()) << ","
        << fmt(cl.umbilicity) << "," << fmt(cl.centered_metric) << "," << fmt(cl.fit.sphere.rho) << ","
        << fmt(cl.fit.sphere.d) << "\n";
    os << path[i].label << ": " << path[i].expr.to_string() << " = " << fmt(path[i].target) << "\n  " << solve_line(r)
       << "\n";
    Json p = to_json(r, false);
    p["label"] = path[i].label;
    p["expr"] = path[i].expr.to_string();
    p["target"] = path[i].target;
    points.push_back(p);
  }
  if (!results.empty() && !results.back().message.empty()) os << results.back().message << "\n";
  o.csv = csv.str();
  o.text = os.str();
  o.extra["points"] = points;
  std::vector<std::pair<std::string, RadialProfile>> profiles;
  for (std::size_t i = 0; i < results.size(); ++i) profiles.emplace_back(path[i].label, results[i].profile);
  o.svgs.emplace_back("_profiles", profile_svg(profiles));
  return o;
}

Output dispatch(const RunConfig& c) {
  if (c.command == "symfun-check") return cmd_symfun(c);
  if (c.command == "surface-info") return cmd_surface_info(c);
  if (c.command == "verify") return cmd_verify(c);
  if (c.command == "theorem") return cmd_theorem(c);
  if (c.command == "audit") return cmd_audit(c);
  if (c.command == "solve") return cmd_solve(c);
  if (c.command == "ensemble") return cmd_ensemble(c);
  return cmd_sweep(c);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command", "surface", "n", "k", "l", "grid", "tol", "seed", "out", "format", "exact", "chi", "a", "b",
      "a-fn", "b-fn", "eta", "aij", "epsilon", "expr", "target", "name", "check", "weights", "field",
      "correction-factor", "lambda", "cases", "members", "amplitude", "offset-fraction", "max-offset", "modes",
      "rho", "max-steps", "continuation", "targets", "expr-to", "steps"};
  return keys;
}

RunConfig parse_config(int argc, const char* const* argv) {
  Cli cli;
  return parse_with(cli, argc, argv);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Cli cli;
  try {
    const RunConfig cfg = parse_with(cli, argc, argv);
    const Output o = dispatch(cfg);
    emit(cfg, o, out);
    return exit_code_of(o.checks);
  } catch (const CLI::CallForHelp&) {
    out << cli.app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return usage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return usage;
  } catch (const CapabilityError& e) {
    err << "unsupported: " << e.what() << "\n";
    return usage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return numerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return numerical;
  }
}

}  // namespace shiftcurv::cli
