#include "shiftcurv/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace shiftcurv {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// JSON has no NaN or infinity; those become strings.
Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json extras_json(const std::vector<std::pair<std::string, double>>& extras) {
  Json e = Json::object();
  for (const auto& [k, v] : extras) e[k] = number(v);
  return e;
}

}  // namespace

std::string checks_csv(const std::vector<IdentityReport>& reports) {
  std::string out = "check,lhs,rhs,abs_err,rel_err,tol,pass\n";
  for (const IdentityReport& r : reports) {
    out += csv_field(r.name) + ',' + format_double(r.lhs) + ',' + format_double(r.rhs) + ',' +
           format_double(r.abs_err) + ',' + format_double(r.rel_err) + ',' + format_double(r.tol) + ',' +
           (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

Json to_json(const IdentityReport& r) {
  return Json{{"check", r.name},
              {"kind", to_string(r.kind)},
              {"lhs", number(r.lhs)},
              {"rhs", number(r.rhs)},
              {"abs_err", number(r.abs_err)},
              {"rel_err", number(r.rel_err)},
              {"slack", number(r.slack)},
              {"tol", number(r.tol)},
              {"pass", r.pass},
              {"applicable", r.applicable},
              {"note", r.note},
              {"grid", r.grid},
              {"n", r.n},
              {"extras", extras_json(r.extras)}};
}

Json to_json(const ResidualReport& r) {
  return Json{{"name", r.name},
              {"sup", number(r.sup)},
              {"inf", number(r.inf)},
              {"mean", number(r.mean)},
              {"oscillation", number(r.oscillation)},
              {"relative_oscillation", number(r.relative_oscillation)},
              {"argmin", r.argmin},
              {"argmax", r.argmax}};
}

Json to_json(const AuditResult& r) {
  Json links = Json::array();
  for (const IdentityReport& l : r.links) links.push_back(to_json(l));
  Json cfg{{"k", r.config.k}, {"l", r.config.l}, {"chi", r.config.chi.to_string()}, {"epsilon", r.config.epsilon}};
  cfg["a"] = r.config.a;
  cfg["b"] = r.config.b;
  Json afn = Json::array(), bfn = Json::array(), aij = Json::array();
  for (const Coefficient& c : r.config.a_fn) afn.push_back(c.to_string());
  for (const Coefficient& c : r.config.b_fn) bfn.push_back(c.to_string());
  for (const auto& [i, j, w] : r.config.a_ij) aij.push_back(Json::array({i, j, w}));
  cfg["a_fn"] = afn;
  cfg["b_fn"] = bfn;
  cfg["eta"] = r.config.eta.to_string();
  cfg["a_ij"] = aij;
  return Json{{"theorem", to_string(r.id)},
              {"statement", theorem_summary(r.id)},
              {"config", cfg},
              {"skipped", r.skipped},
              {"reason", r.reason},
              {"fitted_scale", number(r.fitted_scale)},
              {"max_inequality_slack", number(r.max_inequality_slack())},
              {"max_abs_slack", number(r.max_abs_slack())},
              {"hypothesis", to_json(r.hypothesis)},
              {"diagnostics", extras_json(r.diagnostics)},
              {"limitation", r.limitation},
              {"links", links}};
}

Json to_json(const SolveResult& r, bool include_profile) {
  Json hist = Json::array(), steps = Json::array();
  for (double h : r.residual_history) hist.push_back(number(h));
  for (double a : r.step_lengths) steps.push_back(number(a));
  const Classification& c = r.classification;
  Json j{{"status", to_string(r.status)},
         {"converged", r.converged},
         {"steps", r.steps},
         {"final_residual", number(r.final_residual())},
         {"residual_history", hist},
         {"step_lengths", steps},
         {"stage_starts", r.stage_starts},
         {"cone_rejections", r.cone_rejections},
         {"cone_exit_nodes", r.cone_exit_nodes},
         {"message", r.message},
         {"umbilicity", number(c.umbilicity)},
         {"centered_metric", number(c.centered_metric)},
         {"fit",
          {{"rho", number(c.fit.sphere.rho)},
           {"d", number(c.fit.sphere.d)},
           {"residual", number(c.fit.residual)},
           {"converged", c.fit.converged},
           {"spherical", c.fit.spherical}}},
         {"note", "convergence basins are properties of this solver, not of the rigidity statements"}};
  if (include_profile && r.profile.grid) {
    Json theta = Json::array(), rr = Json::array();
    for (Eigen::Index i = 0; i < r.profile.r.size(); ++i) {
      theta.push_back(number(r.profile.grid->theta(i)));
      rr.push_back(number(r.profile.r(i)));
    }
    j["profile"] = {{"n", r.profile.n()}, {"theta", theta}, {"r", rr}};
  }
  return j;
}

Json to_json(const std::vector<EnsembleMember>& members) {
  Json arr = Json::array();
  for (const EnsembleMember& m : members) {
    Json j = to_json(m.result, false);
    j["member"] = m.index;
    j["init"] = m.init;
    arr.push_back(j);
  }
  return arr;
}

Json to_json(const EnsembleSummary& s) {
  return Json{{"members", s.members},
              {"converged", s.converged},
              {"umbilic", s.umbilic},
              {"centered", s.centered},
              {"threshold", s.threshold}};
}

Json report_document(const std::string& command, const Json& config, const std::vector<IdentityReport>& checks,
                     const Json& extra) {
  Json arr = Json::array();
  int passed = 0;
  for (const IdentityReport& r : checks) {
    arr.push_back(to_json(r));
    passed += r.pass ? 1 : 0;
  }
  Json doc{{"schema", report_schema_id},
           {"command", command},
           {"config", config},
           {"checks", arr},
           {"summary",
            {{"checks", static_cast<int>(checks.size())},
             {"passed", passed},
             {"failed", static_cast<int>(checks.size()) - passed}}}};
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

std::vector<std::string> validate_report(const Json& doc) {
  std::vector<std::string> problems;
  auto need = [&](const Json& obj, const char* key, auto pred, const char* type, const std::string& where) {
    if (!obj.contains(key)) {
      problems.push_back(where + ": missing '" + key + "'");
      return false;
    }
    if (!pred(obj.at(key))) {
      problems.push_back(where + ": '" + key + "' must be " + type);
      return false;
    }
    return true;
  };
  const auto is_string = [](const Json& j) { return j.is_string(); };
  const auto is_object = [](const Json& j) { return j.is_object(); };
  const auto is_array = [](const Json& j) { return j.is_array(); };
  const auto is_bool = [](const Json& j) { return j.is_boolean(); };
  const auto is_int = [](const Json& j) { return j.is_number_integer(); };
  const auto is_num = [](const Json& j) {
    return j.is_number() || (j.is_string() && (j == "nan" || j == "inf" || j == "-inf"));
  };

  if (!doc.is_object()) return {"document must be an object"};
  if (need(doc, "schema", is_string, "a string", "document") && doc["schema"] != report_schema_id)
    problems.push_back("document: unknown schema '" + doc["schema"].get<std::string>() + "'");
  need(doc, "command", is_string, "a string", "document");
  need(doc, "config", is_object, "an object", "document");
  int passed = 0, total = 0;
  if (need(doc, "checks", is_array, "an array", "document")) {
    for (const Json& c : doc["checks"]) {
      const std::string where = "checks[" + std::to_string(total) + "]";
      ++total;
      if (!c.is_object()) {
        problems.push_back(where + ": must be an object");
        continue;
      }
      need(c, "check", is_string, "a string", where);
      if (need(c, "kind", is_string, "a string", where)) {
        const std::string k = c["kind"];
        if (k != "identity" && k != "inequality" && k != "hypothesis")
          problems.push_back(where + ": unknown kind '" + k + "'");
      }
      for (const char* key : {"lhs", "rhs", "abs_err", "rel_err", "slack", "tol"})
        need(c, key, is_num, "a number", where);
      if (need(c, "pass", is_bool, "a boolean", where) && c["pass"].get<bool>()) ++passed;
      need(c, "applicable", is_bool, "a boolean", where);
      need(c, "note", is_string, "a string", where);
      need(c, "grid", is_int, "an integer", where);
      need(c, "n", is_int, "an integer", where);
      need(c, "extras", is_object, "an object", where);
    }
  }
  if (need(doc, "summary", is_object, "an object", "document")) {
    const Json& s = doc["summary"];
    if (need(s, "checks", is_int, "an integer", "summary") && s["checks"] != total)
      problems.push_back("summary: 'checks' does not match the checks array");
    if (need(s, "passed", is_int, "an integer", "summary") && s["passed"] != passed)
      problems.push_back("summary: 'passed' does not match the checks array");
    if (need(s, "failed", is_int, "an integer", "summary") && s["failed"] != total - passed)
      problems.push_back("summary: 'failed' does not match the checks array");
  }
  return problems;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::vector<Series>& series, const std::string& x_label,
                           const std::string& y_label, bool log_y) {
  const double W = 640, H = 400, left = 70, right = 20, top = 40, bottom = 50;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  // a constant series still gets a visible band around it
  if (y1 - y0 < 1e-12 * (1.0 + std::abs(y0))) {
    const double pad = std::max(0.5, 0.1 * std::abs(y0));
    y0 -= pad;
    y1 += pad;
  }
  if (x1 == x0) x1 = x0 + 1;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << escape_xml(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
     << H - top - bottom << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << H - bottom + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(xv) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(yv) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << (log_y ? "1e" + tick(yv) : tick(yv)) << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(x_label)
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(y_label)
     << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& ser = series[s];
    const char* color = colors[s % 6];
    os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (log_y && !(ser.y[i] > 0.0)) continue;
      os << (first ? "" : " ") << fmt(px(ser.x[i])) << ',' << fmt(py(ty(ser.y[i])));
      first = false;
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - right - 6 << "\" y=\"" << top + 16 + 14 * s
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
       << escape_xml(ser.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string profile_svg(const std::vector<std::pair<std::string, RadialProfile>>& profiles) {
  std::vector<Series> series;
  for (const auto& [label, p] : profiles) {
    Series s{label, {}, {}};
    // nodes are stored by decreasing x, i.e. increasing theta
    for (Eigen::Index i = 0; i < p.r.size(); ++i) {
      s.x.push_back(p.grid->theta(i));
      s.y.push_back(p.r(i));
    }
    series.push_back(std::move(s));
  }
  return svg_line_chart("radial profile", series, "theta", "r(theta)");
}

std::string history_svg(const std::vector<std::pair<std::string, std::vector<double>>>& histories) {
  std::vector<Series> series;
  for (const auto& [label, h] : histories) {
    Series s{label, {}, {}};
    for (std::size_t i = 0; i < h.size(); ++i) {
      s.x.push_back(static_cast<double>(i));
      s.y.push_back(h[i]);
    }
    series.push_back(std::move(s));
  }
  return svg_line_chart("residual history", series, "iterate", "max |F|", true);
}

}  // namespace shiftcurv
