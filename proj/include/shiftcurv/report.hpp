#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "shiftcurv/audit.hpp"
#include "shiftcurv/identities.hpp"
#include "shiftcurv/rigidity.hpp"

namespace shiftcurv {

using Json = nlohmann::ordered_json;

inline constexpr const char* report_schema_id = "shiftcurv-report/1";

/// check,lhs,rhs,abs_err,rel_err,tol,pass with one row per report; numbers in
/// shortest round-trip form, so equal inputs give byte-identical text.
std::string checks_csv(const std::vector<IdentityReport>& reports);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

Json to_json(const IdentityReport& r);
Json to_json(const ResidualReport& r);
Json to_json(const AuditResult& r);
Json to_json(const SolveResult& r, bool include_profile = true);
Json to_json(const std::vector<EnsembleMember>& members);
Json to_json(const EnsembleSummary& s);

/// Top-level document: {schema, command, config, checks, summary, ...extra}.
Json report_document(const std::string& command, const Json& config, const std::vector<IdentityReport>& checks,
                     const Json& extra = Json::object());

/// Problems found in a report document (empty when it conforms):
/// required keys, their types, per-check fields and the summary counts.
std::vector<std::string> validate_report(const Json& doc);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Minimal standalone SVG line chart. log_y plots log10 of positive values.
std::string svg_line_chart(const std::string& title, const std::vector<Series>& series, const std::string& x_label,
                           const std::string& y_label, bool log_y = false);

/// r(theta) of each profile on one chart.
std::string profile_svg(const std::vector<std::pair<std::string, RadialProfile>>& profiles);

/// Residual history on a log scale.
std::string history_svg(const std::vector<std::pair<std::string, std::vector<double>>>& histories);

}  // namespace shiftcurv
