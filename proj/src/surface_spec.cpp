#include "shiftcurv/surface_spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "shiftcurv/errors.hpp"

namespace shiftcurv {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ArgumentError("surface spec: value of '" + key + "' is not a number: " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ArgumentError("surface spec: value of '" + key + "' is not an integer: " + v);
  }
}

void load_table(SurfaceSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw ArgumentError("surface spec: cannot open table " + spec.path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, ',');
    if (cols.size() < 2) throw ArgumentError("surface table: expected theta,r in line: " + line);
    try {
      spec.table_theta.push_back(std::stod(cols[0]));
      spec.table_r.push_back(std::stod(cols[1]));
    } catch (const std::exception&) {
      if (spec.table_theta.empty()) continue;  // header
      throw ArgumentError("surface table: malformed line: " + line);
    }
  }
  if (spec.table_theta.size() < 2) throw ArgumentError("surface table: need at least two rows");
  for (std::size_t i = 1; i < spec.table_theta.size(); ++i)
    if (!(spec.table_theta[i] > spec.table_theta[i - 1]))
      throw ArgumentError("surface table: theta must be strictly increasing");
}

}  // namespace

SurfaceSpec parse_surface_spec(const std::string& text) {
  SurfaceSpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "table") {
    if (colon == std::string::npos || colon + 1 >= text.size()) throw ArgumentError("surface spec: table needs a path");
    spec.kind = SurfaceSpec::Kind::table;
    spec.path = text.substr(colon + 1);
    load_table(spec);
    return spec;
  }
  static const std::map<std::string, SurfaceSpec::Kind> kinds = {
      {"sphere", SurfaceSpec::Kind::sphere},
      {"perturbed", SurfaceSpec::Kind::perturbed},
      {"bump", SurfaceSpec::Kind::bump},
      {"ylm", SurfaceSpec::Kind::ylm},
  };
  const auto it = kinds.find(head);
  if (it == kinds.end()) throw ArgumentError("surface spec: unknown kind '" + head + "'");
  spec.kind = it->second;
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    for (const auto& part : split(text.substr(colon + 1), ':')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw ArgumentError("surface spec: expected key=value, got '" + part + "'");
      kv[part.substr(0, eq)] = part.substr(eq + 1);
    }
  }
  auto take = [&](const std::string& key, bool required) -> const std::string* {
    const auto f = kv.find(key);
    if (f == kv.end()) {
      if (required) throw ArgumentError("surface spec: '" + head + "' needs " + key + "=");
      return nullptr;
    }
    return &f->second;
  };
  spec.rho = to_double("rho", *take("rho", true));
  std::vector<std::string> allowed = {"rho"};
  switch (spec.kind) {
    case SurfaceSpec::Kind::sphere:
      if (auto v = take("d", false)) spec.d = to_double("d", *v);
      if (auto v = take("tilt", false)) spec.tilt = to_double("tilt", *v);
      allowed.insert(allowed.end(), {"d", "tilt"});
      break;
    case SurfaceSpec::Kind::perturbed:
      spec.eps = to_double("eps", *take("eps", true));
      spec.mode = to_int("mode", *take("mode", true));
      if (spec.mode < 0) throw ArgumentError("surface spec: mode must be >= 0");
      allowed.insert(allowed.end(), {"eps", "mode"});
      break;
    case SurfaceSpec::Kind::bump:
      spec.eps = to_double("eps", *take("eps", true));
      if (auto v = take("center", false)) spec.center = to_double("center", *v);
      if (auto v = take("width", false)) spec.width = to_double("width", *v);
      if (!(spec.width > 0)) throw ArgumentError("surface spec: width must be positive");
      allowed.insert(allowed.end(), {"eps", "center", "width"});
      break;
    case SurfaceSpec::Kind::ylm:
      spec.eps = to_double("eps", *take("eps", true));
      spec.l = to_int("l", *take("l", true));
      spec.m = to_int("m", *take("m", true));
      if (spec.l < 0 || spec.m < 0 || spec.m > spec.l) throw ArgumentError("surface spec: need 0 <= m <= l");
      allowed.insert(allowed.end(), {"eps", "l", "m"});
      break;
    case SurfaceSpec::Kind::table: break;
  }
  for (const auto& [key, value] : kv)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ArgumentError("surface spec: unknown key '" + key + "' for " + head);
  if (!(spec.rho > 0)) throw DomainError("surface spec: rho must be positive");
  return spec;
}

double axisymmetric_radius(const SurfaceSpec& spec, double theta) {
  const double x = std::cos(theta);
  switch (spec.kind) {
    case SurfaceSpec::Kind::sphere: return sphere_radius_at(x, SphereSpec{spec.rho, spec.d});
    case SurfaceSpec::Kind::perturbed: return spec.rho + spec.eps * std::legendre(static_cast<unsigned>(spec.mode), x);
    case SurfaceSpec::Kind::bump: {
      const double z = (x - spec.center) / spec.width;
      return spec.rho + spec.eps / (1.0 + z * z);
    }
    case SurfaceSpec::Kind::table: {
      const auto& t = spec.table_theta;
      const auto& r = spec.table_r;
      if (theta <= t.front()) return r.front();
      if (theta >= t.back()) return r.back();
      const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), theta) - t.begin());
      const std::size_t lo = hi - 1;
      const double a = (theta - t[lo]) / (t[hi] - t[lo]);
      return (1.0 - a) * r[lo] + a * r[hi];
    }
    case SurfaceSpec::Kind::ylm: break;
  }
  throw ArgumentError("surface spec: kind needs the full S^2 grid");
}

RadialProfile build_profile(const SurfaceSpec& spec, int n, int grid) {
  if (spec.needs_full_grid()) throw ArgumentError("surface spec: not axisymmetric; use build_geometry with n = 2");
  if (spec.kind == SurfaceSpec::Kind::sphere) return sphere_profile(SphereSpec{spec.rho, spec.d}, n, grid);
  return profile_from_function(n, grid, [&](double theta) { return axisymmetric_radius(spec, theta); });
}

GeometryField build_geometry(const SurfaceSpec& spec, int n, int grid) {
  if (!spec.needs_full_grid()) return geometry_from_profile(build_profile(spec, n, grid));
  if (n != 2) throw ArgumentError("surface spec: non-axisymmetric surfaces are supported for n = 2 only");
  SurfaceGrid2 surf;
  if (spec.kind == SurfaceSpec::Kind::ylm) {
    surf = grid2_from_function(grid, 2 * grid, [&](double theta, double phi) {
      return spec.rho + spec.eps * std::assoc_legendre(static_cast<unsigned>(spec.l), static_cast<unsigned>(spec.m),
                                                       std::cos(theta)) *
                            std::cos(spec.m * phi);
    });
  } else {
    // center direction tilted by `tilt` from the pole toward phi = 0
    const double ct = std::cos(spec.tilt), st = std::sin(spec.tilt);
    surf = grid2_from_function(grid, 2 * grid, [&](double theta, double phi) {
      const double cos_gamma = std::cos(theta) * ct + std::sin(theta) * std::cos(phi) * st;
      return sphere_radius_at(cos_gamma, SphereSpec{spec.rho, spec.d});
    });
  }
  return geometry_from_profile(surf);
}

}  // namespace shiftcurv
