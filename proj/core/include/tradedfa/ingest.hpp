#pragma once

// Tick-file parsing and intertrade-duration construction.
//
// A trading day has two continuous-auction sessions, 09:30-11:30 and
// 13:00-15:00. Trades outside them are discarded. Times are kept as integer
// hundredths of a second since the session open, so equality tests used when
// collapsing simultaneous trades are exact.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tradedfa {

enum class Session : std::uint8_t { Morning = 0, Afternoon = 1 };

inline constexpr std::int32_t kCentisPerSecond = 100;
inline constexpr std::int32_t kCentisPerMinute = 60 * kCentisPerSecond;
inline constexpr std::int32_t kSessionLengthCentis = 120 * kCentisPerMinute;
inline constexpr int kMinutesPerSession = 120;
inline constexpr int kBinsPerDay = 2 * kMinutesPerSession;

const char* to_string(Session s) noexcept;

struct Tick {
  int day = 0;
  Session session = Session::Morning;
  std::int32_t time_centis = 0;  // since session open, in [0, kSessionLengthCentis]

  double seconds() const noexcept { return time_centis / 100.0; }
  friend bool operator==(const Tick&, const Tick&) = default;
};

struct TickSeries {
  std::string symbol;
  // Date strings in order of first appearance; `Tick::day` indexes this.
  std::vector<std::string> dates;
  std::vector<Tick> ticks;
  std::size_t discarded_rows = 0;
  // Retained trades stamped exactly at the 15:00:00.00 close.
  std::size_t close_prints = 0;
};

struct DurationEntry {
  double tau = 0.0;  // seconds, or dimensionless after intraday adjustment
  int day = 0;
  int bin = 0;  // minute of the 240-minute trading day of the terminating trade
  Session session = Session::Morning;
};

struct DurationSeries {
  std::string symbol;
  std::vector<DurationEntry> entries;
  bool dimensionless = false;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::vector<double> taus() const;
  // Number of distinct day indexes present.
  int day_count() const;
  // Number of distinct (day, session) groups present.
  std::size_t session_count() const;
};

struct TickFormat {
  char delimiter = ',';
  bool header = true;
};

// Minute bin (0..239) of a trade. Morning minutes come first. A trade stamped
// exactly at a session close belongs to that session's last minute.
int bin_index(Session session, std::int32_t time_centis) noexcept;

// Parses `date,time` rows with time as HH:MM:SS.cc. Throws ParseError on a
// malformed row and OrderingError when times decrease within a session or a
// date reappears after a later one.
TickSeries parse_ticks(std::string_view content, const TickFormat& format = {},
                       std::string symbol = {});

// Writes retained ticks back in the input format.
std::string serialize_ticks(const TickSeries& series, const TickFormat& format = {});

// Merges consecutive ticks with identical (day, session, time).
TickSeries collapse_simultaneous(const TickSeries& series);

// n trades in a session yield n-1 durations; no duration spans the noon break
// or an overnight gap. Requires strictly increasing times within each session.
DurationSeries compute_durations(const TickSeries& series);

// Pre-computed durations with header `day,bin,tau`.
DurationSeries parse_durations(std::string_view content, std::string symbol = {});
std::string serialize_durations(const DurationSeries& series);

}  // namespace tradedfa
