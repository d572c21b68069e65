#pragma once

// Intraday duration pattern over the 240 one-minute bins of a trading day,
// and its removal from a duration series.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tradedfa/ingest.hpp"
#include "tradedfa/polyfit.hpp"

namespace tradedfa {

struct BinCell {
  std::size_t count = 0;
  double mean = 0.0;
};

// Per (day, bin) mean durations. Cells without durations are absent.
struct BinnedDurations {
  std::map<std::pair<int, int>, BinCell> cells;
  std::vector<int> days;  // distinct day indexes, ascending

  std::optional<BinCell> cell(int day, int bin) const;
};

struct IntradayPattern {
  std::array<std::optional<double>, kBinsPerDay> means{};
  std::array<int, kBinsPerDay> contributing_days{};
  int day_count = 0;
  std::vector<std::string> warnings;

  bool defined(int bin) const { return means.at(static_cast<std::size_t>(bin)).has_value(); }
  std::size_t defined_count() const;
};

struct PatternPolyFit {
  PolyFit poly;
  int domain_lo = 0;
  int domain_hi = kBinsPerDay - 1;

  int degree() const noexcept { return poly.degree; }
  const std::vector<double>& coefficients() const noexcept { return poly.coefficients; }
  double residual_rms() const noexcept { return poly.residual_rms; }
  double operator()(double bin) const noexcept { return poly.evaluate(bin); }
};

inline constexpr int kDefaultPatternDegree = 4;

// Throws DataError on an empty series.
BinnedDurations bin_mean_durations(const DurationSeries& series);

// Average over days of the per-day bin means. A day without durations in bin
// j does not take part in bin j's average, so the divisor is the number of
// contributing days rather than the total day count. Bins empty on every day
// stay undefined and produce a warning.
IntradayPattern intraday_pattern(const BinnedDurations& binned);

// tau / <tau>_bin for every entry. Throws DataError naming the first bin that
// is touched by the series but undefined in the pattern.
DurationSeries adjust(const DurationSeries& series, const IntradayPattern& pattern);

// Least-squares polynomial through the defined bins. Reporting only.
// Throws RangeError unless 1 <= degree <= 10 and degree + 1 bins are defined.
PatternPolyFit pattern_polyfit(const IntradayPattern& pattern, int degree = kDefaultPatternDegree);

}  // namespace tradedfa
