#pragma once

// Seeded synthetic series with known scaling properties. Every generator is
// a pure function of its parameters and seed.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tradedfa/dfa.hpp"
#include "tradedfa/ingest.hpp"

namespace tradedfa {

// Autocorrelation of unit-variance fractional Gaussian noise at lag k:
// (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2.
double fgn_autocorrelation(double hurst, std::size_t lag);

// Exact fractional Gaussian noise by circulant embedding of the
// autocovariance (Davies-Harte). Unit variance. n must be a power of two and
// hurst must lie in (0, 1) (RangeError otherwise).
std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed);

// exp(sigma * x): a positive, duration-like transform of a Gaussian series.
// The transform is nonlinear and perturbs the correlation structure.
std::vector<double> exp_transform(std::span<const double> x, double sigma);

// x - min(x) + offset, so the smallest value equals `offset` (> 0). A constant
// shift leaves every DFA fluctuation unchanged.
std::vector<double> shift_positive(std::span<const double> x, double offset = 1.0);

// Multiplicative binomial cascade over 2^levels cells. Each split gives
// fractions p and 1 - p to the two halves, the side receiving p chosen per
// node from the seed. Cells are rescaled to unit mean.
std::vector<double> gen_binomial_cascade(double p, int levels, std::uint64_t seed);

// Closed forms for the binomial measure with weight p:
//   tau(q) = -log2(p^q + (1-p)^q),  h(q) = (1 + tau(q)) / q  (h(0) is the limit),
//   alpha(q) = tau'(q),  width = |log2((1-p)/p)|.
double binomial_tau(double p, double q);
double binomial_h(double p, double q);
double binomial_alpha(double p, double q);
double binomial_width(double p);

// F(s) = s^h1 up to s_cross, continued as s_cross^(h1-h2) s^h2 beyond, times
// exp(noise_sigma * Z). Returns a single-row (q = 2) curve whose valid_boxes
// entries are 0, since no boxes were involved.
FluctuationCurve gen_piecewise_curve(double h1, double h2, std::size_t s_cross,
                                     std::span<const std::size_t> grid, double noise_sigma,
                                     std::uint64_t seed);

using BinProfile = std::array<double, kBinsPerDay>;

// Inverse-U intraday shape: `edge` seconds at the open and close of the day,
// `middle` around the lunch break, quadratic in between within each session.
// The first afternoon minute is multiplied by `afternoon_open_factor`.
BinProfile inverse_u_profile(double edge, double middle, double afternoon_open_factor = 1.0);
BinProfile flat_profile(double mean);

// Trades whose interarrival times are exponential with the target mean of the
// minute bin holding the previous trade (the session open for the first).
// Times are rounded to 0.01 s; equal stamps are possible, as in real data.
// Dates are consecutive weekdays starting 2003-01-02.
TickSeries gen_synthetic_ticks(const BinProfile& bin_means, int days, std::uint64_t seed,
                               std::string symbol = "SYNTH");

// Lays a plain series onto a nominal calendar: entry i gets day i / 240 and
// bin i % 240, one duration per minute bin.
DurationSeries on_nominal_calendar(std::span<const double> taus, std::string symbol = "SYNTH");

enum class GeneratorKind { Fgn, BinomialCascade, PiecewiseCurve, IidExp };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Fgn;
  double hurst = 0.7;
  // Positive durations from fGn: exp(sigma x) when exp_sigma > 0, otherwise
  // shift_positive(x).
  double exp_sigma = 0.0;
  double p = 0.3;
  int levels = 16;
  double h1 = 0.65;
  double h2 = 0.97;
  std::size_t s_cross = 300;
  double noise_sigma = 0.0;
  double rate = 1.0;
  std::size_t length = 1u << 16;
  std::uint64_t seed = 1;
};

// Throws ConfigError on an invalid spec.
void validate(const GeneratorSpec& spec);

// Positive duration series for Fgn, BinomialCascade and IidExp, placed on the
// nominal calendar. Throws ConfigError for PiecewiseCurve.
DurationSeries generate_durations(const GeneratorSpec& spec);

}  // namespace tradedfa
