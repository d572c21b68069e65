#include "tradedfa/dfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tradedfa/error.hpp"
#include "tradedfa/polyfit.hpp"
#include "tradedfa/regression.hpp"

namespace tradedfa {

namespace {

std::size_t max_box(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction));
}

std::size_t smallest_box(const DfaOptions& o) {
  return std::max<std::size_t>(o.min_box, static_cast<std::size_t>(o.detrend_order) + 2);
}

// f_k for every box given a prebuilt basis; `scratch` holds box_size doubles.
void fluctuations_into(const Profile& p, const BoxPartition& part, const OrthoBasis& basis,
                       std::vector<double>& scratch, std::vector<double>& out) {
  const std::size_t s = part.box_size;
  out.resize(part.box_count());
  const std::span<const double> y(p.values);
  for (std::size_t k = 0; k < part.box_count(); ++k) {
    const double ss = basis.residual_sum_squares(y.subspan(part.starts[k], s), scratch);
    out[k] = std::sqrt(ss / static_cast<double>(s));
  }
}

}  // namespace

Profile profile(const DurationSeries& series) {
  if (series.empty()) throw DataError("profile of an empty duration series");
  for (const auto& e : series.entries) {
    if (!(e.tau > 0.0)) throw DataError("durations must be positive");
  }
  Profile p = profile(series.taus());
  p.dimensionless = series.dimensionless;
  return p;
}

Profile profile(std::span<const double> series) {
  if (series.empty()) throw DataError("profile of an empty series");
  Profile p;
  p.values.resize(series.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series[i])) throw DataError("series contains a non-finite value");
    acc += series[i];
    p.values[i] = acc;
  }
  return p;
}

double increment_rms(const Profile& p) {
  double prev = 0.0, ss = 0.0;
  for (double v : p.values) {
    const double d = v - prev;
    ss += d * d;
    prev = v;
  }
  return p.values.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(p.values.size()));
}

BoxPartition partition(std::size_t n, std::size_t box_size, const DfaOptions& options) {
  const std::size_t lo = smallest_box(options);
  const std::size_t hi = max_box(n, options.max_box_fraction);
  if (box_size < lo || box_size > hi) {
    throw RangeError("box size " + std::to_string(box_size) + " outside [" + std::to_string(lo) +
                     ", " + std::to_string(hi) + "] for series length " + std::to_string(n));
  }
  BoxPartition part;
  part.series_length = n;
  part.box_size = box_size;
  const std::size_t count = n / box_size;
  const std::size_t remainder = n % box_size;
  part.coverage = remainder == 0 ? Coverage::Exact : Coverage::BothEnds;
  part.starts.reserve(remainder == 0 ? count : 2 * count);
  for (std::size_t k = 0; k < count; ++k) part.starts.push_back(k * box_size);
  if (remainder != 0) {
    for (std::size_t k = 0; k < count; ++k) part.starts.push_back(remainder + k * box_size);
  }
  return part;
}

double local_fluctuation(std::span<const double> segment, int detrend_order) {
  if (detrend_order < 0) throw RangeError("detrend order must be non-negative");
  if (segment.size() < static_cast<std::size_t>(detrend_order) + 2) {
    throw RangeError("segment of length " + std::to_string(segment.size()) +
                     " too short for detrend order " + std::to_string(detrend_order));
  }
  const auto basis = OrthoBasis::on_index(segment.size(), detrend_order);
  std::vector<double> scratch(segment.size());
  return std::sqrt(basis.residual_sum_squares(segment, scratch) /
                   static_cast<double>(segment.size()));
}

std::vector<double> box_fluctuations(const Profile& p, std::size_t box_size,
                                     const DfaOptions& options) {
  const auto part = partition(p.size(), box_size, options);
  const auto basis = OrthoBasis::on_index(box_size, options.detrend_order);
  std::vector<double> scratch(box_size), out;
  fluctuations_into(p, part, basis, scratch, out);
  return out;
}

std::vector<std::size_t> log_grid(std::size_t n, const DfaOptions& options, double per_decade) {
  if (!(per_decade > 0.0)) throw ConfigError("grid density must be positive");
  const std::size_t lo = smallest_box(options);
  const std::size_t hi = max_box(n, options.max_box_fraction);
  if (hi < lo) {
    throw ConfigError("series too short: N = " + std::to_string(n) + " gives a largest box of " +
                      std::to_string(hi) + " < smallest box " + std::to_string(lo));
  }
  std::vector<std::size_t> grid;
  for (int k = 0;; ++k) {
    const double v = static_cast<double>(lo) * std::pow(10.0, k / per_decade);
    const auto s = static_cast<std::size_t>(std::llround(v));
    if (s > hi) break;
    if (grid.empty() || s > grid.back()) grid.push_back(s);
  }
  return grid;
}

double power_mean(std::span<const double> f, double q, double zero_floor, std::size_t& used) {
  used = 0;
  if (q > 0.0) {
    used = f.size();
    if (f.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (q == 2.0) {
      double ss = 0.0;
      for (double v : f) ss += v * v;
      return std::sqrt(ss / static_cast<double>(f.size()));
    }
    const double top = *std::max_element(f.begin(), f.end());
    if (!(top > 0.0)) return 0.0;
    double acc = 0.0;
    for (double v : f) acc += std::pow(v / top, q);
    return top * std::pow(acc / static_cast<double>(f.size()), 1.0 / q);
  }

  const auto usable = [zero_floor](double v) { return v > 0.0 && v >= zero_floor; };
  double bottom = std::numeric_limits<double>::infinity();
  for (double v : f) {
    if (usable(v)) {
      ++used;
      bottom = std::min(bottom, v);
    }
  }
  if (used == 0) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  if (q == 0.0) {
    for (double v : f) {
      if (usable(v)) acc += std::log(v);
    }
    return std::exp(acc / static_cast<double>(used));
  }
  for (double v : f) {
    if (usable(v)) acc += std::pow(v / bottom, q);
  }
  return bottom * std::pow(acc / static_cast<double>(used), 1.0 / q);
}

std::size_t FluctuationCurve::q_index(double qv) const {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == qv) return i;
  }
  throw RangeError("q = " + std::to_string(qv) + " not present in the curve");
}

FluctuationCurve fluctuation_f2(const Profile& p, std::span<const std::size_t> grid,
                                const DfaOptions& options) {
  FluctuationCurve curve;
  curve.q = {2.0};
  curve.s.assign(grid.begin(), grid.end());
  curve.F.assign(1, std::vector<double>(grid.size()));
  curve.valid_boxes.assign(1, std::vector<std::size_t>(grid.size()));
  std::vector<double> scratch, f;
  for (std::size_t si = 0; si < grid.size(); ++si) {
    if (si > 0 && grid[si] <= grid[si - 1]) throw RangeError("box-size grid must be increasing");
    const auto part = partition(p.size(), grid[si], options);
    const auto basis = OrthoBasis::on_index(grid[si], options.detrend_order);
    scratch.resize(grid[si]);
    fluctuations_into(p, part, basis, scratch, f);
    curve.F[0][si] = power_mean(f, 2.0, 0.0, curve.valid_boxes[0][si]);
  }
  return curve;
}

ScalingFit fit_scaling(std::span<const std::size_t> s, std::span<const double> F,
                       std::size_t s_lo, std::size_t s_hi) {
  if (s.size() != F.size()) throw RangeError("fit_scaling: s and F differ in length");
  if (!(s_lo < s_hi)) throw RangeError("fit range must satisfy s_lo < s_hi");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < s_lo || s[i] > s_hi) continue;
    if (!(std::isfinite(F[i]) && F[i] > 0.0)) continue;
    x.push_back(std::log(static_cast<double>(s[i])));
    y.push_back(std::log(F[i]));
  }
  if (x.size() < kMinFitPoints) {
    throw RangeError("only " + std::to_string(x.size()) + " valid points in [" +
                     std::to_string(s_lo) + ", " + std::to_string(s_hi) + "], need " +
                     std::to_string(kMinFitPoints));
  }
  const LineFit line = fit_line(x, y);
  ScalingFit fit;
  fit.exponent = line.slope;
  fit.exponent_stderr = line.slope_stderr;
  fit.intercept = line.intercept;
  fit.s_lo = s_lo;
  fit.s_hi = s_hi;
  fit.points = line.n;
  fit.r_squared = line.r_squared;
  fit.sse = line.sse;
  return fit;
}

ScalingFit fit_hurst(const FluctuationCurve& curve, std::size_t s_lo, std::size_t s_hi) {
  return fit_scaling(curve.s, curve.F[curve.q_index(2.0)], s_lo, s_hi);
}

}  // namespace tradedfa
