#pragma once

// Pipeline orchestration behind the tradedfa command-line tool:
// ingest -> optional intraday adjustment -> DFA -> crossover -> per-regime
// MFDFA, producing a schema-versioned JSON document and CSV tables.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tradedfa/dfa.hpp"
#include "tradedfa/mfdfa.hpp"
#include "tradedfa/synth.hpp"

namespace tradedfa::app {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class InputFormat { Ticks, Durations };
enum class AdjustMode { Off, On, Both };

struct AnalysisConfig {
  std::string input;
  InputFormat format = InputFormat::Ticks;
  std::string symbol;  // defaults to the input file stem
  AdjustMode adjust = AdjustMode::Both;
  std::size_t s_min = kDefaultMinBox;
  double s_max_fraction = kDefaultMaxBoxFraction;
  double grid_per_decade = kDefaultGridPerDecade;
  double q_min = kDefaultQMin;
  double q_max = kDefaultQMax;
  double q_step = kDefaultQStep;
  int detrend_order = kDefaultDetrendOrder;
  double significance = 0.01;
  bool per_q_breakpoint = false;
  int pattern_degree = 4;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

// Throws ConfigError on the first invalid field.
void validate(const AnalysisConfig& config);

Json to_json(const AnalysisConfig& config);
// Inverse of to_json; missing keys keep their defaults.
AnalysisConfig config_from_json(const Json& j);

const char* to_string(AdjustMode m) noexcept;
AdjustMode parse_adjust_mode(const std::string& s);
const char* to_string(InputFormat f) noexcept;
InputFormat parse_input_format(const std::string& s);

// Everything one instrument run produces. File names are relative to the
// output directory.
struct InstrumentOutput {
  std::string symbol;
  std::string error;  // set instead of a document when a batch entry fails
  Json document;
  std::map<std::string, std::string> files;
  // Summary-row values; NaN where not computed.
  double trades_per_day = 0.0;
  double h1_original = 0.0, h2_original = 0.0, dalpha_original = 0.0;
  double h1_adjusted = 0.0, h2_adjusted = 0.0, dalpha_adjusted = 0.0;
};

// Runs the full pipeline in memory. `generated_at` is stamped into the
// document verbatim (pass "" to omit it).
InstrumentOutput analyze_instrument(const AnalysisConfig& config,
                                    const std::string& generated_at = "");

// Same, for already-loaded input content.
InstrumentOutput analyze_content(const AnalysisConfig& config, const std::string& content,
                                 const std::string& generated_at = "");

// Writes content to dir/name via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Writes the document (as <symbol>.result.json) and every table.
void write_outputs(const InstrumentOutput& out, const std::filesystem::path& dir);

// Document text with the generated_at field removed, for determinism checks.
std::string canonical_document(const Json& document);

struct PatternOutput {
  std::string pattern_csv;
  std::string fit_csv;
  Json summary;
};
PatternOutput pattern_content(const AnalysisConfig& config, const std::string& content);

// Summary CSV: code,N_T,H1,H2,dAlpha for original and adjusted data.
std::string summary_csv(const std::vector<InstrumentOutput>& rows);

// Instrument files (*.csv) of a directory, sorted by name.
std::vector<std::filesystem::path> instrument_files(const std::filesystem::path& dir);

// Runs every instrument of `files` with up to `jobs` concurrent workers.
// Each output keeps the position of its input file.
std::vector<InstrumentOutput> analyze_batch(const AnalysisConfig& base,
                                            const std::vector<std::filesystem::path>& files,
                                            unsigned jobs, const std::string& generated_at);

// Synthetic series in the duration CSV format (ticks CSV for the tick kind,
// curve CSV for the piecewise curve).
enum class SynthKind { Fgn, Cascade, Curve, IidExp, Ticks };
struct SynthConfig {
  SynthKind kind = SynthKind::Fgn;
  GeneratorSpec spec;
  int days = 250;
  double edge_mean = 5.0;
  double middle_mean = 10.0;
  double afternoon_open_factor = 0.5;
};
SynthKind parse_synth_kind(const std::string& s);
std::string synth_content(const SynthConfig& config);

std::string current_timestamp();

}  // namespace tradedfa::app
