#pragma once

#include <cstddef>
#include <span>

namespace tradedfa {

// Ordinary least-squares straight line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // 0 when n == 2
  double r_squared = 0.0;
  double sse = 0.0;
  std::size_t n = 0;
};

// Requires at least two points with distinct x; throws RangeError otherwise.
// Sums run in index order so results are reproducible bit for bit.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace tradedfa
