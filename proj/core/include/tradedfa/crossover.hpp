#pragma once

// Two-regime scaling: locate the box size where the log-log fluctuation curve
// changes slope and fit each regime separately.

#include <cstddef>
#include <span>
#include <vector>

#include "tradedfa/dfa.hpp"
#include "tradedfa/mfdfa.hpp"

namespace tradedfa {

inline constexpr std::size_t kMinCrossoverGridPoints = 12;

struct CrossoverConfig {
  // Level of the F-test of the two-segment model against one straight line.
  double significance = 0.01;
  std::size_t min_segment_points = kMinFitPoints;
};

struct CrossoverFit {
  // SSE-optimal breakpoint. It is part of both segments. Still reported when
  // no_crossover is set, for inspection.
  std::size_t s_cross = 0;
  ScalingFit small;   // [s_lo, s_cross]; equals `single` when no_crossover
  ScalingFit large;   // [s_cross, s_hi]; equals `single` when no_crossover
  ScalingFit single;  // one line over [s_lo, s_hi]
  double sse_two_segment = 0.0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  bool no_crossover = false;
  std::size_t s_lo = 0;
  std::size_t s_hi = 0;

  double h1() const noexcept { return small.exponent; }
  double h2() const noexcept { return large.exponent; }
};

// Exhaustive search over grid points leaving min_segment_points on each side;
// ties go to the smaller s. Only valid (finite, positive) F values are used.
// Throws RangeError with fewer than kMinCrossoverGridPoints valid points.
CrossoverFit detect_crossover(std::span<const std::size_t> s, std::span<const double> F,
                              const CrossoverConfig& config = {});
CrossoverFit detect_crossover(const FluctuationCurve& curve, double q = 2.0,
                              const CrossoverConfig& config = {});

struct RegimeOptions {
  // Re-locate the breakpoint on every q row instead of reusing one s_cross.
  bool per_q_breakpoint = false;
  CrossoverConfig crossover;
};

struct RegimeResult {
  std::size_t s_cross = 0;
  // Breakpoint used for each q of the curve (all equal to s_cross unless
  // per_q_breakpoint is set).
  std::vector<std::size_t> breakpoints;
  MultifractalResult small;  // [s_min, s_cross]
  MultifractalResult large;  // [s_cross, s_max]
};

// Multifractal fits on both sides of s_cross over the full q range.
RegimeResult regime_mfdfa(const FluctuationCurve& curve, std::size_t s_cross,
                          const RegimeOptions& options = {});

}  // namespace tradedfa
