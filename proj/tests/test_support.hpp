#pragma once

#include <cmath>
#include <random>
#include <string>

#include "shiftcurv/hypersurface.hpp"
#include "shiftcurv/surface_spec.hpp"

namespace shiftcurv::test {

inline GeometryField geometry(const std::string& spec, int n = 2, int grid = 128) {
  return build_geometry(parse_surface_spec(spec), n, grid);
}

inline double coth(double x) { return std::cosh(x) / std::sinh(x); }

/// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::string perturbed(double rho, double eps, int mode) {
  return "perturbed:rho=" + std::to_string(rho) + ":eps=" + std::to_string(eps) + ":mode=" + std::to_string(mode);
}

inline std::string offset_sphere(double rho, double d) {
  return "sphere:rho=" + std::to_string(rho) + ":d=" + std::to_string(d);
}

}  // namespace shiftcurv::test
