#pragma once

// Detrended fluctuation analysis: profile, box partition, polynomial
// detrending, the order-2 fluctuation function and Hurst-index fitting.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tradedfa/ingest.hpp"

namespace tradedfa {

inline constexpr std::size_t kDefaultMinBox = 20;
inline constexpr int kDefaultDetrendOrder = 3;
inline constexpr double kDefaultGridPerDecade = 30.0;
inline constexpr double kDefaultMaxBoxFraction = 0.25;
inline constexpr std::size_t kMinFitPoints = 5;

// Cumulative sums y_i = tau_1 + ... + tau_i.
struct Profile {
  std::vector<double> values;
  bool dimensionless = false;

  std::size_t size() const noexcept { return values.size(); }
  double total() const { return values.back(); }
};

// Requires a non-empty series of positive durations (DataError otherwise).
Profile profile(const DurationSeries& series);
// Any non-empty series of finite values. Adding a constant c to every value
// adds the linear ramp c*i to the profile, which detrending of order >= 1
// removes, so zero-mean test signals can be analysed directly.
Profile profile(std::span<const double> series);

// Root-mean-square of the series increments recovered from the profile.
double increment_rms(const Profile& p);

enum class Coverage { Exact, BothEnds };

struct BoxPartition {
  std::size_t series_length = 0;
  std::size_t box_size = 0;
  Coverage coverage = Coverage::Exact;
  // 0-based start of each box; every box spans box_size indices. In BothEnds
  // mode the floor(N/s) left-anchored boxes come first, then the
  // right-anchored ones, each group in ascending order.
  std::vector<std::size_t> starts;

  std::size_t box_count() const noexcept { return starts.size(); }
};

struct DfaOptions {
  std::size_t min_box = kDefaultMinBox;
  int detrend_order = kDefaultDetrendOrder;
  double max_box_fraction = kDefaultMaxBoxFraction;
};

// Throws RangeError unless max(min_box, order + 2) <= s <= floor(N * max_fraction).
BoxPartition partition(std::size_t n, std::size_t box_size, const DfaOptions& options = {});

// RMS of the residuals of a least-squares polynomial of the given order fitted
// to the segment on abscissa 1..s. Throws RangeError when s < order + 2.
double local_fluctuation(std::span<const double> segment, int detrend_order = kDefaultDetrendOrder);

// Detrended fluctuation f_k(s) of every box of partition(N, s).
std::vector<double> box_fluctuations(const Profile& p, std::size_t box_size,
                                     const DfaOptions& options = {});

// Log-spaced integer box sizes from min_box up to floor(N * max_fraction),
// `per_decade` per factor of ten before rounding, duplicates removed.
// Throws ConfigError("series too short") when the range is empty.
std::vector<std::size_t> log_grid(std::size_t n, const DfaOptions& options = {},
                                  double per_decade = kDefaultGridPerDecade);

// q-th order power mean of the box fluctuations. For q <= 0 boxes with
// f < zero_floor are skipped; `used` receives the number of boxes averaged.
// Returns NaN when no box is usable.
double power_mean(std::span<const double> f, double q, double zero_floor, std::size_t& used);

// F[q][s] over a box-size grid. A cell is valid when F is finite and positive.
struct FluctuationCurve {
  std::vector<double> q;
  std::vector<std::size_t> s;
  std::vector<std::vector<double>> F;                 // [q index][s index]
  std::vector<std::vector<std::size_t>> valid_boxes;  // [q index][s index]

  bool valid(std::size_t qi, std::size_t si) const {
    const double v = F[qi][si];
    return std::isfinite(v) && v > 0.0;
  }
  // Index of the exact q value; throws RangeError when absent.
  std::size_t q_index(double qv) const;
};

// F_2(s) = sqrt(mean_k f_k(s)^2) over all boxes of each partition.
FluctuationCurve fluctuation_f2(const Profile& p, std::span<const std::size_t> grid,
                                const DfaOptions& options = {});

struct ScalingFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double intercept = 0.0;
  std::size_t s_lo = 0;
  std::size_t s_hi = 0;
  std::size_t points = 0;
  double r_squared = 0.0;
  double sse = 0.0;

  // Power-spectrum and autocorrelation exponents implied by the Hurst index.
  double eta() const noexcept { return 2.0 * exponent - 1.0; }
  double gamma() const noexcept { return 2.0 - 2.0 * exponent; }
};

// OLS of ln F on ln s over valid points with s_lo <= s <= s_hi. Throws
// RangeError when fewer than kMinFitPoints points qualify.
ScalingFit fit_scaling(std::span<const std::size_t> s, std::span<const double> F,
                       std::size_t s_lo, std::size_t s_hi);

// Hurst index from the q = 2 row of the curve.
ScalingFit fit_hurst(const FluctuationCurve& curve, std::size_t s_lo, std::size_t s_hi);

}  // namespace tradedfa
