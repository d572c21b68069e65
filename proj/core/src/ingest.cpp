#include "tradedfa/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_map>
#include <utility>

#include "tradedfa/error.hpp"
#include "text.hpp"

namespace tradedfa {

namespace {

constexpr std::int32_t kMorningOpen = (9 * 3600 + 30 * 60) * kCentisPerSecond;
constexpr std::int32_t kAfternoonOpen = 13 * 3600 * kCentisPerSecond;

bool parse_fixed_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  out = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    out = out * 10 + (s[i] - '0');
  }
  return true;
}

// HH:MM:SS.cc -> centiseconds since midnight, or -1.
std::int32_t parse_clock(std::string_view s) {
  if (s.size() != 11 || s[2] != ':' || s[5] != ':' || s[8] != '.') return -1;
  int hh = 0, mm = 0, ss = 0, cc = 0;
  if (!parse_fixed_digits(s, 0, 2, hh) || !parse_fixed_digits(s, 3, 2, mm) ||
      !parse_fixed_digits(s, 6, 2, ss) || !parse_fixed_digits(s, 9, 2, cc)) {
    return -1;
  }
  if (hh > 23 || mm > 59 || ss > 59) return -1;
  return ((hh * 60 + mm) * 60 + ss) * kCentisPerSecond + cc;
}

void append_clock(std::string& out, std::int32_t centis) {
  const int cc = centis % 100;
  const int total_s = centis / 100;
  const int hh = total_s / 3600, mm = (total_s / 60) % 60, ss = total_s % 60;
  const auto two = [&out](int v) {
    out.push_back(static_cast<char>('0' + v / 10));
    out.push_back(static_cast<char>('0' + v % 10));
  };
  two(hh);
  out.push_back(':');
  two(mm);
  out.push_back(':');
  two(ss);
  out.push_back('.');
  two(cc);
}

}  // namespace

const char* to_string(Session s) noexcept {
  return s == Session::Morning ? "MORNING" : "AFTERNOON";
}

std::vector<double> DurationSeries::taus() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.tau);
  return out;
}

int DurationSeries::day_count() const {
  std::set<int> days;
  for (const auto& e : entries) days.insert(e.day);
  return static_cast<int>(days.size());
}

std::size_t DurationSeries::session_count() const {
  std::set<std::pair<int, Session>> groups;
  for (const auto& e : entries) groups.emplace(e.day, e.session);
  return groups.size();
}

int bin_index(Session session, std::int32_t time_centis) noexcept {
  int minute = static_cast<int>(time_centis / kCentisPerMinute);
  minute = std::clamp(minute, 0, kMinutesPerSession - 1);
  return session == Session::Morning ? minute : kMinutesPerSession + minute;
}

TickSeries parse_ticks(std::string_view content, const TickFormat& format, std::string symbol) {
  TickSeries out;
  out.symbol = std::move(symbol);
  std::unordered_map<std::string, int> day_of_date;

  detail::LineReader reader(content);
  std::string_view line;
  bool header_pending = format.header;
  int current_day = -1;
  // Last retained time per session of the current day; -1 when none yet.
  std::int32_t last_time[2] = {-1, -1};

  while (reader.next(line)) {
    const std::size_t line_no = reader.line_number();
    if (line.empty()) continue;
    if (header_pending) {
      const auto fields = detail::split(line, format.delimiter);
      if (fields.size() != 2 || fields[0] != "date" || fields[1] != "time") {
        throw ParseError(line_no, "expected header 'date" + std::string(1, format.delimiter) + "time'");
      }
      header_pending = false;
      continue;
    }
    const auto fields = detail::split(line, format.delimiter);
    if (fields.size() != 2) throw ParseError(line_no, "expected 2 fields");
    if (fields[0].empty()) throw ParseError(line_no, "empty date");
    const std::int32_t clock = parse_clock(fields[1]);
    if (clock < 0) throw ParseError(line_no, "time must be HH:MM:SS.cc");

    const std::string date(fields[0]);
    auto it = day_of_date.find(date);
    if (it == day_of_date.end()) {
      const int day = static_cast<int>(out.dates.size());
      it = day_of_date.emplace(date, day).first;
      out.dates.push_back(date);
    }
    if (it->second < current_day) {
      throw OrderingError(line_no, "date '" + date + "' reappears after a later date");
    }
    if (it->second != current_day) {
      current_day = it->second;
      last_time[0] = last_time[1] = -1;
    }

    Session session;
    std::int32_t offset;
    if (clock >= kMorningOpen && clock <= kMorningOpen + kSessionLengthCentis) {
      session = Session::Morning;
      offset = clock - kMorningOpen;
    } else if (clock >= kAfternoonOpen && clock <= kAfternoonOpen + kSessionLengthCentis) {
      session = Session::Afternoon;
      offset = clock - kAfternoonOpen;
    } else {
      ++out.discarded_rows;
      continue;
    }
    auto& last = last_time[static_cast<int>(session)];
    if (offset < last) throw OrderingError(line_no, "time decreases within session");
    if (session == Session::Morning && last_time[1] >= 0) {
      throw OrderingError(line_no, "morning trade after afternoon trade");
    }
    last = offset;
    if (session == Session::Afternoon && offset == kSessionLengthCentis) ++out.close_prints;
    out.ticks.push_back(Tick{current_day, session, offset});
  }
  if (header_pending) throw ParseError(1, "missing header");
  return out;
}

std::string serialize_ticks(const TickSeries& series, const TickFormat& format) {
  std::string out;
  out.reserve(32 * (series.ticks.size() + 1));
  if (format.header) {
    out += "date";
    out.push_back(format.delimiter);
    out += "time\n";
  }
  for (const auto& t : series.ticks) {
    out += series.dates.at(static_cast<std::size_t>(t.day));
    out.push_back(format.delimiter);
    const std::int32_t open = t.session == Session::Morning ? kMorningOpen : kAfternoonOpen;
    append_clock(out, open + t.time_centis);
    out.push_back('\n');
  }
  return out;
}

TickSeries collapse_simultaneous(const TickSeries& series) {
  TickSeries out;
  out.symbol = series.symbol;
  out.dates = series.dates;
  out.discarded_rows = series.discarded_rows;
  out.ticks.reserve(series.ticks.size());
  for (const auto& t : series.ticks) {
    if (!out.ticks.empty() && out.ticks.back() == t) continue;
    out.ticks.push_back(t);
  }
  out.close_prints = static_cast<std::size_t>(std::count_if(
      out.ticks.begin(), out.ticks.end(), [](const Tick& t) {
        return t.session == Session::Afternoon && t.time_centis == kSessionLengthCentis;
      }));
  return out;
}

DurationSeries compute_durations(const TickSeries& series) {
  DurationSeries out;
  out.symbol = series.symbol;
  const auto& ticks = series.ticks;
  if (ticks.size() > 1) out.entries.reserve(ticks.size() - 1);
  for (std::size_t i = 1; i < ticks.size(); ++i) {
    const Tick& prev = ticks[i - 1];
    const Tick& cur = ticks[i];
    if (prev.day != cur.day || prev.session != cur.session) continue;
    const std::int32_t diff = cur.time_centis - prev.time_centis;
    if (diff <= 0) {
      throw DataError("non-increasing tick times on day " + std::to_string(cur.day) +
                      "; collapse simultaneous trades first");
    }
    out.entries.push_back(DurationEntry{static_cast<double>(diff) / kCentisPerSecond, cur.day,
                                        bin_index(cur.session, cur.time_centis), cur.session});
  }
  return out;
}

DurationSeries parse_durations(std::string_view content, std::string symbol) {
  DurationSeries out;
  out.symbol = std::move(symbol);
  detail::LineReader reader(content);
  std::string_view line;
  bool header_pending = true;
  while (reader.next(line)) {
    const std::size_t line_no = reader.line_number();
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (header_pending) {
      if (fields.size() != 3 || fields[0] != "day" || fields[1] != "bin" || fields[2] != "tau") {
        throw ParseError(line_no, "expected header 'day,bin,tau'");
      }
      header_pending = false;
      continue;
    }
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields");
    DurationEntry e;
    if (!detail::parse_number(fields[0], e.day) || e.day < 0) {
      throw ParseError(line_no, "bad day index");
    }
    if (!detail::parse_number(fields[1], e.bin) || e.bin < 0 || e.bin >= kBinsPerDay) {
      throw ParseError(line_no, "bin must be in [0, 239]");
    }
    if (!detail::parse_number(fields[2], e.tau) || !(e.tau > 0.0)) {
      throw ParseError(line_no, "tau must be a positive number");
    }
    if (!out.entries.empty() && e.day < out.entries.back().day) {
      throw OrderingError(line_no, "day index decreases");
    }
    e.session = e.bin < kMinutesPerSession ? Session::Morning : Session::Afternoon;
    out.entries.push_back(e);
  }
  if (header_pending) throw ParseError(1, "missing header");
  return out;
}

std::string serialize_durations(const DurationSeries& series) {
  std::string out = "day,bin,tau\n";
  out.reserve(24 * (series.entries.size() + 1));
  for (const auto& e : series.entries) {
    out += std::to_string(e.day);
    out.push_back(',');
    out += std::to_string(e.bin);
    out.push_back(',');
    detail::append_double(out, e.tau);
    out.push_back('\n');
  }
  return out;
}

}  // namespace tradedfa
