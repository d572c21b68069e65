#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "app.hpp"
#include "tradedfa/error.hpp"

namespace {

using namespace tradedfa;
using namespace tradedfa::app;

// Applies explicitly given flags (command line or environment) on top of a
// config loaded from --config.
struct Overrides {
  std::vector<std::pair<CLI::Option*, std::function<void(AnalysisConfig&)>>> fields;

  template <typename T>
  void add(CLI::Option* opt, const AnalysisConfig& cli, T AnalysisConfig::*member) {
    fields.emplace_back(opt, [&cli, member](AnalysisConfig& c) { c.*member = cli.*member; });
  }

  void apply(AnalysisConfig& c) const {
    for (const auto& [opt, set] : fields) {
      if (opt->count() > 0) set(c);
    }
  }
};

struct AnalysisFlags {
  AnalysisConfig cli;
  std::string ticks, durations, config_file, adjust = "both";
  Overrides overrides;
  CLI::Option* adjust_opt = nullptr;
};

void add_input_flags(CLI::App* cmd, AnalysisFlags& f) {
  auto* t = cmd->add_option("--ticks", f.ticks, "Tick CSV with header date,time (HH:MM:SS.cc)")
                ->check(CLI::ExistingFile);
  auto* d = cmd->add_option("--durations", f.durations, "Duration CSV with header day,bin,tau")
                ->check(CLI::ExistingFile);
  t->excludes(d);
  cmd->add_option("--symbol", f.cli.symbol, "Instrument code (default: input file stem)");
}

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  auto& c = f.cli;
  auto& o = f.overrides;
  cmd->add_option("--config", f.config_file,
                  "JSON config (a result document's \"config\" object also works); "
                  "flags and TRADEDFA_* variables override it")
      ->check(CLI::ExistingFile);
  o.add(cmd->add_option("--smin", c.s_min, "Smallest box size")
            ->envname("TRADEDFA_SMIN")
            ->capture_default_str(),
        c, &AnalysisConfig::s_min);
  o.add(cmd->add_option("--smax-fraction", c.s_max_fraction, "Largest box size as a fraction of N")
            ->envname("TRADEDFA_SMAX_FRACTION")
            ->capture_default_str(),
        c, &AnalysisConfig::s_max_fraction);
  o.add(cmd->add_option("--grid-density", c.grid_per_decade, "Box sizes per decade")
            ->envname("TRADEDFA_GRID_DENSITY")
            ->capture_default_str(),
        c, &AnalysisConfig::grid_per_decade);
  o.add(cmd->add_option("--q-min", c.q_min, "Smallest moment order q")
            ->envname("TRADEDFA_Q_MIN")
            ->capture_default_str(),
        c, &AnalysisConfig::q_min);
  o.add(cmd->add_option("--q-max", c.q_max, "Largest moment order q")
            ->envname("TRADEDFA_Q_MAX")
            ->capture_default_str(),
        c, &AnalysisConfig::q_max);
  o.add(cmd->add_option("--q-step", c.q_step, "Spacing of the q grid")
            ->envname("TRADEDFA_Q_STEP")
            ->capture_default_str(),
        c, &AnalysisConfig::q_step);
  o.add(cmd->add_option("--detrend-order", c.detrend_order, "Polynomial detrending order")
            ->envname("TRADEDFA_DETREND_ORDER")
            ->capture_default_str(),
        c, &AnalysisConfig::detrend_order);
  f.adjust_opt = cmd->add_option("--adjust", f.adjust,
                                 "Intraday adjustment: off (raw), on (adjusted) or both")
                     ->envname("TRADEDFA_ADJUST")
                     ->check(CLI::IsMember({"on", "off", "both"}))
                     ->capture_default_str();
  o.add(cmd->add_option("--significance", c.significance,
                        "F-test level for accepting a two-regime fit")
            ->envname("TRADEDFA_SIGNIFICANCE")
            ->capture_default_str(),
        c, &AnalysisConfig::significance);
  o.add(cmd->add_flag("--per-q-breakpoint", c.per_q_breakpoint,
                      "Search a separate crossover for every q (default: share the q = 2 one)")
            ->envname("TRADEDFA_PER_Q_BREAKPOINT"),
        c, &AnalysisConfig::per_q_breakpoint);
  o.add(cmd->add_option("--pattern-degree", c.pattern_degree,
                        "Degree of the intraday-pattern polynomial fit")
            ->envname("TRADEDFA_PATTERN_DEGREE")
            ->capture_default_str(),
        c, &AnalysisConfig::pattern_degree);
  o.add(cmd->add_option("--seed", c.seed, "Seed recorded in the config echo")
            ->envname("TRADEDFA_SEED")
            ->capture_default_str(),
        c, &AnalysisConfig::seed);
  o.add(cmd->add_option("--out", c.out_dir, "Output directory")
            ->envname("TRADEDFA_OUT")
            ->capture_default_str(),
        c, &AnalysisConfig::out_dir);
  o.add(cmd->get_option("--symbol"), c, &AnalysisConfig::symbol);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AnalysisConfig resolve(const AnalysisFlags& f, bool need_input) {
  AnalysisConfig c;
  if (!f.config_file.empty()) {
    Json j;
    try {
      j = Json::parse(read_text(f.config_file));
    } catch (const Json::parse_error& e) {
      throw ConfigError("config '" + f.config_file + "': " + e.what());
    }
    if (j.contains("config") && j.at("config").is_object()) j = j.at("config");
    try {
      c = config_from_json(j);
    } catch (const Json::exception& e) {
      throw ConfigError("config '" + f.config_file + "': " + e.what());
    }
  } else {
    c = f.cli;
  }
  f.overrides.apply(c);
  if (f.config_file.empty() || f.adjust_opt->count() > 0) c.adjust = parse_adjust_mode(f.adjust);
  if (!f.ticks.empty()) {
    c.input = f.ticks;
    c.format = InputFormat::Ticks;
  } else if (!f.durations.empty()) {
    c.input = f.durations;
    c.format = InputFormat::Durations;
  }
  if (need_input && c.input.empty()) throw ConfigError("one of --ticks or --durations is required");
  validate(c);
  return c;
}

int report(const char* kind, int code, const std::exception& e) {
  const Json err{{"error", Json{{"kind", kind}, {"message", e.what()}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Long-memory and multifractal analysis of intertrade durations"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", "tradedfa 0.1.0");

  AnalysisFlags analyze_flags;
  auto* analyze = cli.add_subcommand("analyze", "Run the full pipeline on one instrument");
  add_input_flags(analyze, analyze_flags);
  add_analysis_flags(analyze, analyze_flags);

  AnalysisFlags pattern_flags;
  auto* pattern = cli.add_subcommand("pattern", "Estimate the intraday duration pattern");
  add_input_flags(pattern, pattern_flags);
  add_analysis_flags(pattern, pattern_flags);

  AnalysisFlags summary_flags;
  std::string batch_dir, batch_format = "ticks";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* summary = cli.add_subcommand(
      "summary", "Analyze every *.csv in a directory and write summary.csv");
  summary->add_option("--dir", batch_dir, "Directory of instrument files")
      ->required()
      ->check(CLI::ExistingDirectory);
  summary->add_option("--format", batch_format, "Format of the instrument files")
      ->check(CLI::IsMember({"ticks", "durations"}))
      ->capture_default_str();
  summary->add_option("--jobs", jobs, "Instruments analyzed concurrently")
      ->envname("TRADEDFA_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  summary->add_option("--symbol", summary_flags.cli.symbol)->group("");
  add_analysis_flags(summary, summary_flags);

  SynthConfig synth_cfg;
  std::string synth_kind = "fgn", synth_output;
  auto& spec = synth_cfg.spec;
  auto* synth = cli.add_subcommand("synth", "Generate a synthetic series");
  synth->add_option("--kind", synth_kind,
                    "fgn, cascade, iid-exp (duration CSV), curve (fluctuation curve CSV) "
                    "or ticks (tick CSV)")
      ->check(CLI::IsMember({"fgn", "cascade", "curve", "iid-exp", "ticks"}))
      ->capture_default_str();
  synth->add_option("--hurst", spec.hurst, "fGn Hurst index")->capture_default_str();
  synth->add_option("--exp-sigma", spec.exp_sigma,
                    "fGn to durations via exp(sigma x); 0 shifts to positive instead")
      ->capture_default_str();
  synth->add_option("--p", spec.p, "Cascade weight")->capture_default_str();
  synth->add_option("--levels", spec.levels, "Cascade levels (length 2^levels)")
      ->capture_default_str();
  synth->add_option("--h1", spec.h1, "Curve small-scale exponent")->capture_default_str();
  synth->add_option("--h2", spec.h2, "Curve large-scale exponent")->capture_default_str();
  synth->add_option("--s-cross", spec.s_cross, "Curve crossover box size")->capture_default_str();
  synth->add_option("--noise", spec.noise_sigma, "Curve log-normal noise sigma")
      ->capture_default_str();
  synth->add_option("--rate", spec.rate, "iid-exp rate")->capture_default_str();
  synth->add_option("--length", spec.length, "Series length (fgn, iid-exp, curve grid)")
      ->capture_default_str();
  synth->add_option("--days", synth_cfg.days, "Trading days (ticks)")->capture_default_str();
  synth->add_option("--edge-mean", synth_cfg.edge_mean,
                    "Mean duration in seconds at session edges (ticks)")
      ->capture_default_str();
  synth->add_option("--middle-mean", synth_cfg.middle_mean,
                    "Mean duration in seconds mid-session (ticks)")
      ->capture_default_str();
  synth->add_option("--afternoon-open-factor", synth_cfg.afternoon_open_factor,
                    "Scales the edge excess at the afternoon open (ticks)")
      ->capture_default_str();
  synth->add_option("--seed", spec.seed, "Random seed")
      ->envname("TRADEDFA_SEED")
      ->capture_default_str();
  synth->add_option("-o,--output", synth_output, "Output file (default: stdout)");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (analyze->parsed()) {
      const AnalysisConfig c = resolve(analyze_flags, true);
      const InstrumentOutput out = analyze_instrument(c, current_timestamp());
      write_outputs(out, c.out_dir);
      std::cout << (std::filesystem::path(c.out_dir) / (out.symbol + ".result.json")).string()
                << '\n';
    } else if (pattern->parsed()) {
      const AnalysisConfig c = resolve(pattern_flags, true);
      const PatternOutput out = pattern_content(c, read_text(c.input));
      const std::string symbol = out.summary.at("symbol").get<std::string>();
      std::filesystem::create_directories(c.out_dir);
      write_atomic(std::filesystem::path(c.out_dir) / (symbol + ".pattern.csv"), out.pattern_csv);
      write_atomic(std::filesystem::path(c.out_dir) / (symbol + ".pattern_fit.csv"), out.fit_csv);
      std::cout << out.summary.dump(2) << '\n';
    } else if (summary->parsed()) {
      AnalysisConfig c = resolve(summary_flags, false);
      c.format = parse_input_format(batch_format);
      const auto files = instrument_files(batch_dir);
      if (files.empty()) throw ConfigError("no *.csv files in '" + batch_dir + "'");
      const auto results = analyze_batch(c, files, jobs, current_timestamp());
      std::filesystem::create_directories(c.out_dir);
      int failures = 0;
      for (const auto& r : results) {
        if (!r.error.empty()) {
          ++failures;
          std::cerr << Json{{"error", Json{{"symbol", r.symbol}, {"message", r.error}}}}.dump()
                    << '\n';
          continue;
        }
        write_outputs(r, c.out_dir);
      }
      write_atomic(std::filesystem::path(c.out_dir) / "summary.csv", summary_csv(results));
      std::cout << (std::filesystem::path(c.out_dir) / "summary.csv").string() << '\n';
      if (failures > 0) return 4;
    } else if (synth->parsed()) {
      synth_cfg.kind = parse_synth_kind(synth_kind);
      const std::string content = synth_content(synth_cfg);
      if (synth_output.empty()) {
        std::cout << content;
      } else {
        write_atomic(synth_output, content);
      }
    }
  } catch (const ConfigError& e) {
    return report("config", 2, e);
  } catch (const ParseError& e) {
    return report("parse", 3, e);
  } catch (const OrderingError& e) {
    return report("ordering", 3, e);
  } catch (const DataError& e) {
    return report("data", 4, e);
  } catch (const RangeError& e) {
    return report("range", 5, e);
  } catch (const NumericalError& e) {
    return report("numerical", 5, e);
  } catch (const std::exception& e) {
    return report("internal", 1, e);
  }
  return 0;
}
