#pragma once

// Multifractal DFA: q-order fluctuation functions, generalized Hurst
// exponents h(q), mass exponents tau(q) = q h(q) - D_f and the Legendre
// singularity spectrum f(alpha).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tradedfa/dfa.hpp"

namespace tradedfa {

inline constexpr double kDefaultQMin = -4.0;
inline constexpr double kDefaultQMax = 6.0;
inline constexpr double kDefaultQStep = 0.25;
inline constexpr double kDefaultZeroFloorFactor = 1e-12;

// Strictly increasing q values containing 0 and 2 exactly.
class QGrid {
 public:
  // q_min + i * step for i = 0, 1, ... while <= q_max (with 1e-9 * step slack).
  // Values within 1e-9 * step of an integer multiple of step are snapped onto
  // it, so 0 and 2 are hit exactly whenever they lie on the lattice. Throws
  // ConfigError when the result does not contain both 0 and 2.
  static QGrid uniform(double q_min = kDefaultQMin, double q_max = kDefaultQMax,
                       double step = kDefaultQStep);
  // Throws ConfigError unless values are strictly increasing and contain 0 and 2.
  explicit QGrid(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct MfdfaOptions {
  DfaOptions dfa;
  // Boxes with f_k below this floor are skipped for q <= 0. When unset the
  // floor is zero_floor_factor times the RMS of the series increments.
  std::optional<double> zero_floor;
  double zero_floor_factor = kDefaultZeroFloorFactor;
};

// F_q(s) for every q of the grid. The q = 2 row is computed by the same code
// path as fluctuation_f2 and matches it exactly.
FluctuationCurve fluctuation_q(const Profile& p, std::span<const std::size_t> grid,
                               const QGrid& qgrid, const MfdfaOptions& options = {});

struct HurstPoint {
  double q = 0.0;
  double h = 0.0;
  double h_stderr = 0.0;
  std::size_t points = 0;
};

struct GeneralizedHurst {
  std::vector<HurstPoint> points;  // ascending q; q values lacking data are omitted
  std::size_t s_lo = 0;
  std::size_t s_hi = 0;
  std::vector<std::string> warnings;

  std::optional<HurstPoint> at(double q) const;
};

// Per-q OLS of ln F_q on ln s over [s_lo, s_hi]. A q with fewer than
// kMinFitPoints valid points is dropped with a warning.
GeneralizedHurst generalized_hurst(const FluctuationCurve& curve, std::size_t s_lo,
                                   std::size_t s_hi);

struct MassExponents {
  std::vector<double> q;
  std::vector<double> tau;
  std::vector<double> tau_stderr;  // |q| * stderr(h)
  double support_dimension = 1.0;
};

MassExponents mass_exponents(const GeneralizedHurst& h, double support_dimension = 1.0);

struct SpectrumPoint {
  double q = 0.0;
  double alpha = 0.0;
  double f = 0.0;
  double alpha_stderr = 0.0;
};

struct SingularitySpectrum {
  std::vector<SpectrumPoint> points;  // ascending q
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double width = 0.0;         // alpha_max - alpha_min
  double width_stderr = 0.0;  // propagated from the h(q) regression errors
  double q_lo = 0.0;          // q range actually present
  double q_hi = 0.0;
  bool concave = true;  // alpha non-increasing in q
  std::vector<std::string> warnings;
};

// alpha = d tau / d q by central differences on the q grid (one-sided at the
// ends), f = q alpha - tau. Needs at least three q values (RangeError).
// Non-concave input still yields a spectrum, flagged via `concave`.
SingularitySpectrum legendre_spectrum(const MassExponents& tau);

struct MultifractalResult {
  GeneralizedHurst hurst;
  MassExponents mass;
  SingularitySpectrum spectrum;
};

// generalized_hurst -> mass_exponents -> legendre_spectrum on one range.
MultifractalResult analyze_multifractal(const FluctuationCurve& curve, std::size_t s_lo,
                                        std::size_t s_hi, double support_dimension = 1.0);

}  // namespace tradedfa
