#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "tradedfa/crossover.hpp"
#include "tradedfa/error.hpp"
#include "tradedfa/export.hpp"
#include "tradedfa/ingest.hpp"
#include "tradedfa/intraday.hpp"

namespace tradedfa::app {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open input '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DfaOptions dfa_options(const AnalysisConfig& c) {
  DfaOptions o;
  o.min_box = c.s_min;
  o.detrend_order = c.detrend_order;
  o.max_box_fraction = c.s_max_fraction;
  return o;
}

Json fit_json(const ScalingFit& f) {
  return Json{{"H", f.exponent},         {"stderr", f.exponent_stderr},
              {"eta", f.eta()},          {"gamma", f.gamma()},
              {"r_squared", f.r_squared}, {"s_lo", f.s_lo},
              {"s_hi", f.s_hi},          {"points", f.points},
              {"sse", f.sse}};
}

Json regime_json(const std::string& name, const MultifractalResult& r,
                 std::map<std::string, std::string>& files, const std::string& prefix) {
  Json h = Json::array();
  for (const auto& p : r.hurst.points) {
    h.push_back(Json{{"q", p.q}, {"h", p.h}, {"h_stderr", p.h_stderr}, {"points", p.points}});
  }
  Json tau = Json::array();
  for (std::size_t i = 0; i < r.mass.q.size(); ++i) {
    tau.push_back(Json{{"q", r.mass.q[i]}, {"tau", r.mass.tau[i]},
                       {"tau_stderr", r.mass.tau_stderr[i]}});
  }
  Json pts = Json::array();
  for (const auto& p : r.spectrum.points) {
    pts.push_back(Json{{"q", p.q}, {"alpha", p.alpha}, {"f_alpha", p.f}});
  }
  const std::string base = prefix + "." + name;
  files[base + ".h.csv"] = hurst_csv(r.hurst);
  files[base + ".tau.csv"] = mass_csv(r.mass);
  files[base + ".spectrum.csv"] = spectrum_csv(r.spectrum);

  Json warnings = Json::array();
  for (const auto& w : r.hurst.warnings) warnings.push_back(w);
  for (const auto& w : r.spectrum.warnings) warnings.push_back(w);

  const bool has_spectrum = !r.spectrum.points.empty();
  return Json{
      {"name", name},
      {"s_lo", r.hurst.s_lo},
      {"s_hi", r.hurst.s_hi},
      {"h", std::move(h)},
      {"tau", std::move(tau)},
      {"spectrum",
       Json{{"points", std::move(pts)},
            {"delta_alpha", has_spectrum ? r.spectrum.width : kNaN},
            {"delta_alpha_stderr", has_spectrum ? r.spectrum.width_stderr : kNaN},
            {"alpha_min", has_spectrum ? r.spectrum.alpha_min : kNaN},
            {"alpha_max", has_spectrum ? r.spectrum.alpha_max : kNaN},
            {"q_lo", has_spectrum ? r.spectrum.q_lo : kNaN},
            {"q_hi", has_spectrum ? r.spectrum.q_hi : kNaN},
            {"concave", r.spectrum.concave}}},
      {"files", Json{{"h", base + ".h.csv"},
                     {"tau", base + ".tau.csv"},
                     {"spectrum", base + ".spectrum.csv"}}},
      {"warnings", std::move(warnings)}};
}

struct DatasetResult {
  Json json;
  double h1 = kNaN, h2 = kNaN, dalpha = kNaN;
};

DatasetResult analyze_dataset(const DurationSeries& series, const AnalysisConfig& c,
                              const std::string& name,
                              std::map<std::string, std::string>& files) {
  const auto options = dfa_options(c);
  const Profile prof = profile(series);
  const auto grid = log_grid(prof.size(), options, c.grid_per_decade);
  if (grid.size() < kMinFitPoints) {
    throw ConfigError("series too short: N = " + std::to_string(prof.size()) + " gives only " +
                      std::to_string(grid.size()) + " box sizes");
  }
  MfdfaOptions mopts;
  mopts.dfa = options;
  const auto qgrid = QGrid::uniform(c.q_min, c.q_max, c.q_step);
  const FluctuationCurve curve = fluctuation_q(prof, grid, qgrid, mopts);
  const ScalingFit single = fit_hurst(curve, grid.front(), grid.back());

  const std::string prefix = series.symbol + "." + name;
  files[prefix + ".curve.csv"] = curve_csv(curve);

  DatasetResult out;
  Json warnings = Json::array();
  Json crossover = nullptr;
  Json regimes = Json::array();
  Json delta = Json::object();

  bool crossed = false;
  if (grid.size() >= kMinCrossoverGridPoints) {
    CrossoverConfig cc;
    cc.significance = c.significance;
    const CrossoverFit fit = detect_crossover(curve, 2.0, cc);
    crossover = Json{{"no_crossover", fit.no_crossover},
                     {"s_cross", fit.s_cross},
                     {"H1", fit_json(fit.small)},
                     {"H2", fit_json(fit.large)},
                     {"sse_single", fit.single.sse},
                     {"sse_two_segment", fit.sse_two_segment},
                     {"f_statistic", fit.f_statistic},
                     {"p_value", fit.p_value},
                     {"significance", c.significance}};
    out.h1 = fit.h1();
    out.h2 = fit.h2();
    if (!fit.no_crossover) {
      crossed = true;
      RegimeOptions ro;
      ro.per_q_breakpoint = c.per_q_breakpoint;
      ro.crossover = cc;
      const RegimeResult rr = regime_mfdfa(curve, fit.s_cross, ro);
      regimes.push_back(regime_json("small", rr.small, files, prefix));
      regimes.push_back(regime_json("large", rr.large, files, prefix));
      delta["small"] = rr.small.spectrum.points.empty() ? kNaN : rr.small.spectrum.width;
      delta["large"] = rr.large.spectrum.points.empty() ? kNaN : rr.large.spectrum.width;
      out.dalpha = delta["large"].get<double>();
      if (c.per_q_breakpoint) {
        Json bp = Json::array();
        for (std::size_t i = 0; i < curve.q.size(); ++i) {
          bp.push_back(Json{{"q", curve.q[i]}, {"s_cross", rr.breakpoints[i]}});
        }
        crossover["per_q_breakpoints"] = std::move(bp);
      }
    }
  } else {
    warnings.push_back("only " + std::to_string(grid.size()) +
                       " box sizes; crossover search skipped");
    out.h1 = out.h2 = single.exponent;
  }
  if (!crossed) {
    const auto full = analyze_multifractal(curve, grid.front(), grid.back());
    regimes.push_back(regime_json("full", full, files, prefix));
    delta["full"] = full.spectrum.points.empty() ? kNaN : full.spectrum.width;
    out.dalpha = delta["full"].get<double>();
  }

  double sum = 0.0;
  for (const auto& e : series.entries) sum += e.tau;
  out.json = Json{{"length", series.size()},
                  {"units", series.dimensionless ? "dimensionless" : "seconds"},
                  {"mean_duration", sum / static_cast<double>(series.size())},
                  {"grid", Json{{"s_min", grid.front()},
                                {"s_max", grid.back()},
                                {"points", grid.size()}}},
                  {"curve_file", prefix + ".curve.csv"},
                  {"hurst", fit_json(single)},
                  {"crossover", std::move(crossover)},
                  {"regimes", std::move(regimes)},
                  {"delta_alpha", std::move(delta)},
                  {"warnings", std::move(warnings)}};
  return out;
}

struct Loaded {
  DurationSeries series;
  Json ingest;
  double trades_per_day = 0.0;
};

Loaded load(const AnalysisConfig& c, const std::string& content, const std::string& symbol) {
  Loaded l;
  if (c.format == InputFormat::Ticks) {
    const TickSeries raw = parse_ticks(content, {}, symbol);
    const TickSeries ticks = collapse_simultaneous(raw);
    l.series = compute_durations(ticks);
    std::set<int> days;
    for (const auto& t : ticks.ticks) days.insert(t.day);
    l.trades_per_day = days.empty() ? 0.0
                                    : static_cast<double>(ticks.ticks.size()) /
                                          static_cast<double>(days.size());
    l.ingest = Json{{"format", "ticks"},
                    {"rows_retained", raw.ticks.size()},
                    {"rows_discarded", raw.discarded_rows},
                    {"simultaneous_merged", raw.ticks.size() - ticks.ticks.size()},
                    {"trades", ticks.ticks.size()},
                    {"trading_days", days.size()},
                    {"close_prints_retained", ticks.close_prints}};
  } else {
    l.series = parse_durations(content, symbol);
    const int days = l.series.day_count();
    l.trades_per_day =
        days == 0 ? 0.0
                  : static_cast<double>(l.series.size() + l.series.session_count()) / days;
    l.ingest = Json{{"format", "durations"}, {"trading_days", days}};
  }
  if (l.series.empty()) throw DataError("input yields no intertrade durations");
  l.ingest["durations"] = l.series.size();
  return l;
}

std::string symbol_for(const AnalysisConfig& c) {
  if (!c.symbol.empty()) return c.symbol;
  const auto stem = std::filesystem::path(c.input).stem().string();
  return stem.empty() ? "instrument" : stem;
}

}  // namespace

const char* to_string(AdjustMode m) noexcept {
  switch (m) {
    case AdjustMode::Off:
      return "off";
    case AdjustMode::On:
      return "on";
    case AdjustMode::Both:
      return "both";
  }
  return "both";
}

AdjustMode parse_adjust_mode(const std::string& s) {
  if (s == "off") return AdjustMode::Off;
  if (s == "on") return AdjustMode::On;
  if (s == "both") return AdjustMode::Both;
  throw ConfigError("adjust must be one of on, off, both");
}

const char* to_string(InputFormat f) noexcept {
  return f == InputFormat::Ticks ? "ticks" : "durations";
}

InputFormat parse_input_format(const std::string& s) {
  if (s == "ticks") return InputFormat::Ticks;
  if (s == "durations") return InputFormat::Durations;
  throw ConfigError("input format must be ticks or durations");
}

void validate(const AnalysisConfig& c) {
  if (c.detrend_order < 1 || c.detrend_order > 10) {
    throw ConfigError("detrend order must lie in [1, 10]");
  }
  if (c.s_min < static_cast<std::size_t>(c.detrend_order) + 2) {
    throw ConfigError("smin must be at least detrend order + 2");
  }
  if (!(c.s_max_fraction > 0.0 && c.s_max_fraction <= 0.25)) {
    throw ConfigError("smax fraction must lie in (0, 0.25]");
  }
  if (!(c.grid_per_decade > 0.0)) throw ConfigError("grid density must be positive");
  if (!(c.significance > 0.0 && c.significance < 1.0)) {
    throw ConfigError("crossover significance must lie in (0, 1)");
  }
  if (c.pattern_degree < 1 || c.pattern_degree > 10) {
    throw ConfigError("pattern degree must lie in [1, 10]");
  }
  QGrid::uniform(c.q_min, c.q_max, c.q_step);
}

Json to_json(const AnalysisConfig& c) {
  return Json{{"input", c.input},
              {"format", to_string(c.format)},
              {"symbol", c.symbol},
              {"adjust", to_string(c.adjust)},
              {"smin", c.s_min},
              {"smax_fraction", c.s_max_fraction},
              {"grid_per_decade", c.grid_per_decade},
              {"q_min", c.q_min},
              {"q_max", c.q_max},
              {"q_step", c.q_step},
              {"detrend_order", c.detrend_order},
              {"significance", c.significance},
              {"per_q_breakpoint", c.per_q_breakpoint},
              {"pattern_degree", c.pattern_degree},
              {"seed", c.seed},
              {"out", c.out_dir}};
}

AnalysisConfig config_from_json(const Json& j) {
  AnalysisConfig c;
  const auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("input", c.input);
  if (j.contains("format")) c.format = parse_input_format(j.at("format").get<std::string>());
  get("symbol", c.symbol);
  if (j.contains("adjust")) c.adjust = parse_adjust_mode(j.at("adjust").get<std::string>());
  get("smin", c.s_min);
  get("smax_fraction", c.s_max_fraction);
  get("grid_per_decade", c.grid_per_decade);
  get("q_min", c.q_min);
  get("q_max", c.q_max);
  get("q_step", c.q_step);
  get("detrend_order", c.detrend_order);
  get("significance", c.significance);
  get("per_q_breakpoint", c.per_q_breakpoint);
  get("pattern_degree", c.pattern_degree);
  get("seed", c.seed);
  get("out", c.out_dir);
  return c;
}

InstrumentOutput analyze_instrument(const AnalysisConfig& config, const std::string& generated_at) {
  validate(config);
  return analyze_content(config, read_file(config.input), generated_at);
}

InstrumentOutput analyze_content(const AnalysisConfig& config, const std::string& content,
                                 const std::string& generated_at) {
  validate(config);
  InstrumentOutput out;
  out.symbol = symbol_for(config);
  const Loaded loaded = load(config, content, out.symbol);
  const DurationSeries& series = loaded.series;
  out.trades_per_day = loaded.trades_per_day;

  Json warnings = Json::array();
  const IntradayPattern pattern = intraday_pattern(bin_mean_durations(series));
  for (const auto& w : pattern.warnings) warnings.push_back(w);

  Json pattern_json{{"day_count", pattern.day_count},
                    {"defined_bins", pattern.defined_count()}};
  {
    int lo = -1, hi = -1;
    for (int j = 0; j < kBinsPerDay; ++j) {
      const auto& m = pattern.means[static_cast<std::size_t>(j)];
      if (!m) continue;
      if (lo < 0 || *m < *pattern.means[static_cast<std::size_t>(lo)]) lo = j;
      if (hi < 0 || *m > *pattern.means[static_cast<std::size_t>(hi)]) hi = j;
    }
    pattern_json["min_bin"] = lo;
    pattern_json["min_mean"] = *pattern.means[static_cast<std::size_t>(lo)];
    pattern_json["max_bin"] = hi;
    pattern_json["max_mean"] = *pattern.means[static_cast<std::size_t>(hi)];
  }
  out.files[out.symbol + ".pattern.csv"] = pattern_csv(pattern);
  try {
    const auto fit = pattern_polyfit(pattern, config.pattern_degree);
    out.files[out.symbol + ".pattern_fit.csv"] = pattern_fit_csv(pattern, fit);
    pattern_json["polyfit"] = Json{{"degree", fit.degree()},
                                   {"coefficients", fit.coefficients()},
                                   {"residual_rms", fit.residual_rms()}};
  } catch (const RangeError& e) {
    warnings.push_back(std::string("pattern polyfit skipped: ") + e.what());
    pattern_json["polyfit"] = nullptr;
  }
  pattern_json["files"] = Json{{"pattern", out.symbol + ".pattern.csv"},
                               {"polyfit", out.symbol + ".pattern_fit.csv"}};

  Json datasets = Json::object();
  out.h1_original = out.h2_original = out.dalpha_original = kNaN;
  out.h1_adjusted = out.h2_adjusted = out.dalpha_adjusted = kNaN;
  if (config.adjust != AdjustMode::On) {
    auto r = analyze_dataset(series, config, "original", out.files);
    out.h1_original = r.h1;
    out.h2_original = r.h2;
    out.dalpha_original = r.dalpha;
    datasets["original"] = std::move(r.json);
  }
  if (config.adjust != AdjustMode::Off) {
    const DurationSeries adjusted = adjust(series, pattern);
    auto r = analyze_dataset(adjusted, config, "adjusted", out.files);
    out.h1_adjusted = r.h1;
    out.h2_adjusted = r.h2;
    out.dalpha_adjusted = r.dalpha;
    datasets["adjusted"] = std::move(r.json);
  }

  double sum = 0.0;
  for (const auto& e : series.entries) sum += e.tau;

  Json doc;
  doc["schema"] = "tradedfa.result";
  doc["schema_version"] = kSchemaVersion;
  if (!generated_at.empty()) doc["generated_at"] = generated_at;
  doc["config"] = to_json(config);
  doc["instrument"] = Json{{"symbol", out.symbol},
                           {"ingest", loaded.ingest},
                           {"mean_trades_per_day", out.trades_per_day},
                           {"mean_duration", sum / static_cast<double>(series.size())},
                           {"pattern", std::move(pattern_json)},
                           {"datasets", std::move(datasets)},
                           {"warnings", std::move(warnings)}};
  out.document = std::move(doc);
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write '" + tmp.string() + "'");
    os << content;
    if (!os) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

void write_outputs(const InstrumentOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : out.files) write_atomic(dir / name, content);
  write_atomic(dir / (out.symbol + ".result.json"), out.document.dump(2) + "\n");
}

std::string canonical_document(const Json& document) {
  Json copy = document;
  copy.erase("generated_at");
  return copy.dump(2);
}

PatternOutput pattern_content(const AnalysisConfig& config, const std::string& content) {
  validate(config);
  const std::string symbol = symbol_for(config);
  const Loaded loaded = load(config, content, symbol);
  const IntradayPattern pattern = intraday_pattern(bin_mean_durations(loaded.series));
  const auto fit = pattern_polyfit(pattern, config.pattern_degree);
  PatternOutput out;
  out.pattern_csv = pattern_csv(pattern);
  out.fit_csv = pattern_fit_csv(pattern, fit);
  out.summary = Json{{"symbol", symbol},
                     {"day_count", pattern.day_count},
                     {"defined_bins", pattern.defined_count()},
                     {"polyfit_degree", fit.degree()},
                     {"polyfit_residual_rms", fit.residual_rms()},
                     {"warnings", pattern.warnings}};
  return out;
}

std::string summary_csv(const std::vector<InstrumentOutput>& rows) {
  std::ostringstream os;
  os.precision(6);
  os << "code,N_T,H1_original,H2_original,dAlpha_original,H1_adjusted,H2_adjusted,"
        "dAlpha_adjusted\n";
  const auto cell = [&os](double v) {
    if (std::isfinite(v)) os << v;
  };
  for (const auto& r : rows) {
    os << r.symbol << ',';
    if (r.error.empty()) {
      cell(r.trades_per_day);
      for (double v : {r.h1_original, r.h2_original, r.dalpha_original, r.h1_adjusted,
                       r.h2_adjusted, r.dalpha_adjusted}) {
        os << ',';
        cell(v);
      }
    } else {
      os << ",,,,,,";
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::filesystem::path> instrument_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("'" + dir.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<InstrumentOutput> analyze_batch(const AnalysisConfig& base,
                                            const std::vector<std::filesystem::path>& files,
                                            unsigned jobs, const std::string& generated_at) {
  validate(base);
  std::vector<InstrumentOutput> results(files.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      AnalysisConfig c = base;
      c.input = files[i].string();
      c.symbol.clear();
      try {
        results[i] = analyze_instrument(c, generated_at);
      } catch (const std::exception& e) {
        results[i].symbol = files[i].stem().string();
        results[i].error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(files.size())));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  return results;
}

SynthKind parse_synth_kind(const std::string& s) {
  if (s == "fgn") return SynthKind::Fgn;
  if (s == "cascade") return SynthKind::Cascade;
  if (s == "curve") return SynthKind::Curve;
  if (s == "iid-exp") return SynthKind::IidExp;
  if (s == "ticks") return SynthKind::Ticks;
  throw ConfigError("kind must be one of fgn, cascade, curve, iid-exp, ticks");
}

std::string synth_content(const SynthConfig& config) {
  GeneratorSpec spec = config.spec;
  switch (config.kind) {
    case SynthKind::Fgn:
      spec.kind = GeneratorKind::Fgn;
      return serialize_durations(generate_durations(spec));
    case SynthKind::Cascade:
      spec.kind = GeneratorKind::BinomialCascade;
      return serialize_durations(generate_durations(spec));
    case SynthKind::IidExp:
      spec.kind = GeneratorKind::IidExp;
      return serialize_durations(generate_durations(spec));
    case SynthKind::Curve: {
      spec.kind = GeneratorKind::PiecewiseCurve;
      validate(spec);
      auto grid = log_grid(spec.length);
      if (std::find(grid.begin(), grid.end(), spec.s_cross) == grid.end()) {
        grid.insert(std::upper_bound(grid.begin(), grid.end(), spec.s_cross), spec.s_cross);
      }
      return curve_csv(
          gen_piecewise_curve(spec.h1, spec.h2, spec.s_cross, grid, spec.noise_sigma, spec.seed));
    }
    case SynthKind::Ticks: {
      if (config.days < 1) throw ConfigError("days must be positive");
      const auto profile =
          inverse_u_profile(config.edge_mean, config.middle_mean, config.afternoon_open_factor);
      return serialize_ticks(gen_synthetic_ticks(profile, config.days, spec.seed));
    }
  }
  throw ConfigError("unknown synth kind");
}

std::string current_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace tradedfa::app
