#include "tradedfa/crossover.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "tradedfa/error.hpp"
#include "tradedfa/regression.hpp"

namespace tradedfa {

namespace {

// The two-segment model adds a second slope, a second intercept and the
// breakpoint to the single line.
constexpr double kExtraParameters = 3.0;
constexpr double kTwoSegmentParameters = 5.0;
// Improvements of the SSE below this fraction of the total sum of squares are
// rounding noise (exact power-law input).
constexpr double kNegligibleImprovement = 1e-12;

double total_sum_squares(std::span<const double> y) {
  double m = 0.0;
  for (double v : y) m += v;
  m /= static_cast<double>(y.size());
  double t = 0.0;
  for (double v : y) t += (v - m) * (v - m);
  return t;
}

ScalingFit to_scaling(const LineFit& line, std::size_t s_lo, std::size_t s_hi) {
  ScalingFit f;
  f.exponent = line.slope;
  f.exponent_stderr = line.slope_stderr;
  f.intercept = line.intercept;
  f.s_lo = s_lo;
  f.s_hi = s_hi;
  f.points = line.n;
  f.r_squared = line.r_squared;
  f.sse = line.sse;
  return f;
}

}  // namespace

CrossoverFit detect_crossover(std::span<const std::size_t> s, std::span<const double> F,
                              const CrossoverConfig& config) {
  if (s.size() != F.size()) throw RangeError("detect_crossover: s and F differ in length");
  if (!(config.significance > 0.0 && config.significance < 1.0)) {
    throw ConfigError("crossover significance must lie in (0, 1)");
  }
  std::vector<std::size_t> sv;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(std::isfinite(F[i]) && F[i] > 0.0)) continue;
    sv.push_back(s[i]);
    x.push_back(std::log(static_cast<double>(s[i])));
    y.push_back(std::log(F[i]));
  }
  const std::size_t n = sv.size();
  const std::size_t min_pts = std::max<std::size_t>(config.min_segment_points, 2);
  const std::size_t needed = std::max(kMinCrossoverGridPoints, 2 * min_pts - 1);
  if (n < needed) {
    throw RangeError("crossover search needs at least " + std::to_string(needed) +
                     " valid grid points, got " + std::to_string(n));
  }

  CrossoverFit out;
  out.s_lo = sv.front();
  out.s_hi = sv.back();
  out.single = to_scaling(fit_line(x, y), out.s_lo, out.s_hi);

  const std::span<const double> xs(x), ys(y);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_b = 0;
  LineFit best_left, best_right;
  // Breakpoint index b belongs to both [0, b] and [b, n - 1].
  for (std::size_t b = min_pts - 1; b + min_pts <= n; ++b) {
    const LineFit left = fit_line(xs.first(b + 1), ys.first(b + 1));
    const LineFit right = fit_line(xs.subspan(b), ys.subspan(b));
    const double sse = left.sse + right.sse;
    if (sse < best) {
      best = sse;
      best_b = b;
      best_left = left;
      best_right = right;
    }
  }
  out.s_cross = sv[best_b];
  out.sse_two_segment = best;
  out.small = to_scaling(best_left, out.s_lo, out.s_cross);
  out.large = to_scaling(best_right, out.s_cross, out.s_hi);

  const double improvement = out.single.sse - best;
  const double tss = total_sum_squares(y);
  const double df2 = static_cast<double>(n) - kTwoSegmentParameters;
  if (!(improvement > kNegligibleImprovement * tss)) {
    out.f_statistic = 0.0;
    out.p_value = 1.0;
  } else if (!(best > 0.0)) {
    out.f_statistic = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
  } else {
    out.f_statistic = (improvement / kExtraParameters) / (best / df2);
    const boost::math::fisher_f_distribution<double> dist(kExtraParameters, df2);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.f_statistic));
  }
  if (!(out.p_value < config.significance)) {
    out.no_crossover = true;
    out.small = out.single;
    out.large = out.single;
  }
  return out;
}

CrossoverFit detect_crossover(const FluctuationCurve& curve, double q,
                              const CrossoverConfig& config) {
  return detect_crossover(curve.s, curve.F[curve.q_index(q)], config);
}

RegimeResult regime_mfdfa(const FluctuationCurve& curve, std::size_t s_cross,
                          const RegimeOptions& options) {
  if (curve.s.empty()) throw RangeError("regime_mfdfa: empty curve");
  const std::size_t s_min = curve.s.front();
  const std::size_t s_max = curve.s.back();
  if (!(s_min < s_cross && s_cross < s_max)) {
    throw RangeError("crossover " + std::to_string(s_cross) + " outside (" +
                     std::to_string(s_min) + ", " + std::to_string(s_max) + ")");
  }
  RegimeResult r;
  r.s_cross = s_cross;
  r.breakpoints.assign(curve.q.size(), s_cross);

  if (!options.per_q_breakpoint) {
    r.small = analyze_multifractal(curve, s_min, s_cross);
    r.large = analyze_multifractal(curve, s_cross, s_max);
    return r;
  }

  GeneralizedHurst small, large;
  small.s_lo = s_min;
  small.s_hi = s_cross;
  large.s_lo = s_cross;
  large.s_hi = s_max;
  for (std::size_t qi = 0; qi < curve.q.size(); ++qi) {
    const double q = curve.q[qi];
    const std::string label = "q = " + std::to_string(q) + " omitted: ";
    try {
      const auto fit = detect_crossover(curve.s, curve.F[qi], options.crossover);
      r.breakpoints[qi] = fit.s_cross;
      const ScalingFit& a = fit.no_crossover ? fit.single : fit.small;
      const ScalingFit& b = fit.no_crossover ? fit.single : fit.large;
      small.points.push_back(HurstPoint{q, a.exponent, a.exponent_stderr, a.points});
      large.points.push_back(HurstPoint{q, b.exponent, b.exponent_stderr, b.points});
    } catch (const RangeError& e) {
      small.warnings.push_back(label + e.what());
      large.warnings.push_back(label + e.what());
    }
  }
  const auto finish = [](GeneralizedHurst h) {
    MultifractalResult m;
    m.hurst = std::move(h);
    m.mass = mass_exponents(m.hurst);
    if (m.mass.q.size() >= 3) {
      m.spectrum = legendre_spectrum(m.mass);
    } else {
      m.spectrum.warnings.push_back("fewer than three q values fitted; no spectrum");
    }
    return m;
  };
  r.small = finish(std::move(small));
  r.large = finish(std::move(large));
  return r;
}

}  // namespace tradedfa
