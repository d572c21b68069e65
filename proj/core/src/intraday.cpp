#include "tradedfa/intraday.hpp"

#include <set>

#include "tradedfa/error.hpp"

namespace tradedfa {

std::optional<BinCell> BinnedDurations::cell(int day, int bin) const {
  const auto it = cells.find({day, bin});
  if (it == cells.end()) return std::nullopt;
  return it->second;
}

std::size_t IntradayPattern::defined_count() const {
  std::size_t n = 0;
  for (const auto& m : means) n += m.has_value() ? 1 : 0;
  return n;
}

BinnedDurations bin_mean_durations(const DurationSeries& series) {
  if (series.empty()) throw DataError("cannot bin an empty duration series");
  struct Acc {
    std::size_t count = 0;
    double sum = 0.0;
  };
  std::map<std::pair<int, int>, Acc> acc;
  std::set<int> days;
  for (const auto& e : series.entries) {
    if (e.bin < 0 || e.bin >= kBinsPerDay) {
      throw DataError("bin index " + std::to_string(e.bin) + " outside [0, 239]");
    }
    auto& a = acc[{e.day, e.bin}];
    ++a.count;
    a.sum += e.tau;
    days.insert(e.day);
  }
  BinnedDurations out;
  out.days.assign(days.begin(), days.end());
  for (const auto& [key, a] : acc) {
    out.cells.emplace(key, BinCell{a.count, a.sum / static_cast<double>(a.count)});
  }
  return out;
}

IntradayPattern intraday_pattern(const BinnedDurations& binned) {
  if (binned.days.empty()) throw DataError("intraday pattern needs at least one day");
  IntradayPattern p;
  p.day_count = static_cast<int>(binned.days.size());
  std::array<double, kBinsPerDay> sums{};
  // Map iteration is ordered by (day, bin), so each bin accumulates in day order.
  for (const auto& [key, cell] : binned.cells) {
    const auto j = static_cast<std::size_t>(key.second);
    sums[j] += cell.mean;
    ++p.contributing_days[j];
  }
  std::vector<int> empty_bins;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    if (p.contributing_days[j] > 0) {
      p.means[j] = sums[j] / p.contributing_days[j];
    } else {
      empty_bins.push_back(static_cast<int>(j));
    }
  }
  if (!empty_bins.empty()) {
    std::string list;
    for (std::size_t i = 0; i < empty_bins.size(); ++i) {
      if (i == 8) {
        list += ", ...";
        break;
      }
      if (i) list += ", ";
      list += std::to_string(empty_bins[i]);
    }
    p.warnings.push_back(std::to_string(empty_bins.size()) +
                         " bin(s) empty on every day, pattern undefined there: " + list);
  }
  return p;
}

DurationSeries adjust(const DurationSeries& series, const IntradayPattern& pattern) {
  DurationSeries out = series;
  out.dimensionless = true;
  for (auto& e : out.entries) {
    const auto& m = pattern.means.at(static_cast<std::size_t>(e.bin));
    if (!m || !(*m > 0.0)) {
      throw DataError("intraday pattern undefined in bin " + std::to_string(e.bin) +
                      " touched by the series");
    }
    e.tau /= *m;
  }
  return out;
}

PatternPolyFit pattern_polyfit(const IntradayPattern& pattern, int degree) {
  if (degree < 1 || degree > 10) throw RangeError("pattern polyfit degree must be in [1, 10]");
  std::vector<double> x, y;
  for (int j = 0; j < kBinsPerDay; ++j) {
    if (const auto& m = pattern.means[static_cast<std::size_t>(j)]) {
      x.push_back(j);
      y.push_back(*m);
    }
  }
  if (x.size() < static_cast<std::size_t>(degree) + 1) {
    throw RangeError("pattern polyfit underdetermined: " + std::to_string(x.size()) +
                     " defined bins for degree " + std::to_string(degree));
  }
  return PatternPolyFit{polyfit(x, y, degree)};
}

}  // namespace tradedfa
