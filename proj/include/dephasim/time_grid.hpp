#pragma once

#include <cmath>
#include <cstdint>

#include "dephasim/errors.hpp"

namespace dephasim {

/// Uniform grid on [0, t_end] with n_steps steps of width h = t_end/n_steps.
/// Grid points are t_k = k*h, k = 0..n_steps.
struct TimeGrid {
  TimeGrid(double t_end, std::int64_t n_steps) : t_end(t_end), n_steps(n_steps) {
    if (!(t_end > 0) || !std::isfinite(t_end))
      throw ConfigError("TimeGrid: t_end must be positive and finite");
    if (n_steps < 1) throw ConfigError("TimeGrid: n_steps must be >= 1");
  }

  double t_end;
  std::int64_t n_steps;

  double step() const { return t_end / static_cast<double>(n_steps); }
  double time_at(std::int64_t k) const { return step() * static_cast<double>(k); }
};

}  // namespace dephasim
