#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tradedfa/error.hpp"
#include "tradedfa/synth.hpp"

using namespace tradedfa;

namespace {

// Sample autocovariance with the known zero mean, unbiased for each lag.
double lag_product_mean(const std::vector<double>& x, std::size_t k) {
  double s = 0.0;
  for (std::size_t t = 0; t + k < x.size(); ++t) s += x[t] * x[t + k];
  return s / static_cast<double>(x.size() - k);
}

double sample_autocorrelation(const std::vector<double>& x, std::size_t k) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - mean) * (x[t] - mean);
    if (t + k < x.size()) num += (x[t] - mean) * (x[t + k] - mean);
  }
  return num / den;
}

}  // namespace

TEST(FgnAutocorrelation, ClosedForm) {
  EXPECT_DOUBLE_EQ(fgn_autocorrelation(0.7, 0), 1.0);
  EXPECT_NEAR(fgn_autocorrelation(0.7, 1), std::pow(2.0, 0.4) - 1.0, 1e-15);
  EXPECT_NEAR(fgn_autocorrelation(0.5, 3), 0.0, 1e-15);
}

TEST(GenFgn, WhiteNoiseLagOne) {
  const std::size_t n = 1u << 16;
  const auto x = gen_fgn(0.5, n, 4);
  EXPECT_LT(std::abs(sample_autocorrelation(x, 1)), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(GenFgn, LagOneAtH07) {
  const auto x = gen_fgn(0.7, 1u << 16, 4);
  EXPECT_NEAR(sample_autocorrelation(x, 1), std::pow(2.0, 0.4) - 1.0, 0.02);
  EXPECT_NEAR(std::pow(2.0, 0.4) - 1.0, 0.320, 5e-4);
}

TEST(GenFgn, UnitVariance) {
  const auto x = gen_fgn(0.3, 1u << 16, 2);
  EXPECT_NEAR(lag_product_mean(x, 0), 1.0, 0.02);
}

TEST(GenFgn, CovarianceCheck) {
  // Mean over 20 seeds of the lag-k covariance estimate, compared with the
  // closed form in units of its Monte-Carlo standard error.
  const int seeds = 20;
  for (double h : {0.3, 0.5, 0.7, 0.9}) {
    std::vector<std::vector<double>> est(9);
    for (int seed = 1; seed <= seeds; ++seed) {
      const auto x = gen_fgn(h, 1u << 14, static_cast<std::uint64_t>(seed) + 100);
      for (std::size_t k = 0; k <= 8; ++k) est[k].push_back(lag_product_mean(x, k));
    }
    for (std::size_t k = 0; k <= 8; ++k) {
      const double mean = std::accumulate(est[k].begin(), est[k].end(), 0.0) / seeds;
      double var = 0.0;
      for (double v : est[k]) var += (v - mean) * (v - mean);
      const double se = std::sqrt(var / (seeds - 1) / seeds);
      const double rho = 0.5 * (std::pow(k + 1.0, 2 * h) - 2 * std::pow(static_cast<double>(k), 2 * h) +
                                std::pow(std::abs(static_cast<double>(k) - 1.0), 2 * h));
      EXPECT_LT(std::abs(mean - rho), 4.0 * se) << "H=" << h << " k=" << k;
    }
  }
}

TEST(GenFgn, Deterministic) {
  EXPECT_EQ(gen_fgn(0.7, 1024, 9), gen_fgn(0.7, 1024, 9));
  EXPECT_NE(gen_fgn(0.7, 1024, 9), gen_fgn(0.7, 1024, 10));
}

TEST(GenFgn, Errors) {
  EXPECT_THROW(gen_fgn(1.0, 1024, 1), RangeError);
  EXPECT_THROW(gen_fgn(0.0, 1024, 1), RangeError);
  EXPECT_THROW(gen_fgn(0.7, 1000, 1), RangeError);
}

TEST(Transforms, PositiveOutputs) {
  const auto x = gen_fgn(0.7, 4096, 1);
  for (double v : exp_transform(x, 0.5)) EXPECT_GT(v, 0.0);
  const auto s = shift_positive(x, 0.25);
  EXPECT_DOUBLE_EQ(*std::min_element(s.begin(), s.end()), 0.25);
  EXPECT_NEAR(s[10] - s[11], x[10] - x[11], 1e-14);
}

TEST(BinomialCascade, UniformWhenHalf) {
  for (double v : gen_binomial_cascade(0.5, 10, 3)) EXPECT_EQ(v, 1.0);
}

TEST(BinomialCascade, UnitMean) {
  const auto x = gen_binomial_cascade(0.3, 16, 1);
  ASSERT_EQ(x.size(), 1u << 16);
  EXPECT_NEAR(std::accumulate(x.begin(), x.end(), 0.0), 65536.0, 65536.0 * 1e-12);
  for (double v : x) EXPECT_GT(v, 0.0);
}

TEST(BinomialCascade, MultisetIsPlacementInvariant) {
  // Each cell mass is p^k (1-p)^(L-k) times 2^L; placement only permutes.
  auto a = gen_binomial_cascade(0.3, 12, 1);
  auto b = gen_binomial_cascade(0.3, 12, 2);
  EXPECT_NE(a, b);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * b[i]);
}

TEST(BinomialCascade, Oracle) {
  EXPECT_NEAR(binomial_tau(0.3, 2.0), -std::log2(0.58), 1e-15);
  EXPECT_NEAR(binomial_tau(0.3, 2.0), 0.786, 1e-3);
  EXPECT_EQ(binomial_tau(0.3, 0.0), -std::log2(2.0));
  EXPECT_NEAR(binomial_tau(0.3, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(binomial_width(0.3), std::log2(7.0 / 3.0), 1e-15);
  EXPECT_NEAR(binomial_width(0.3), 1.222, 1e-3);
  for (double q : {-4.0, -1.5, 0.5, 2.0, 6.0}) {
    EXPECT_NEAR(binomial_h(0.3, q),
                (1.0 - std::log2(std::pow(0.3, q) + std::pow(0.7, q))) / q, 1e-14);
    const double d = 1e-5;
    EXPECT_NEAR(binomial_alpha(0.3, q),
                (binomial_tau(0.3, q + d) - binomial_tau(0.3, q - d)) / (2 * d), 1e-8);
  }
  // h(0) is the limit of (1 + tau(q)) / q.
  EXPECT_NEAR(binomial_h(0.3, 0.0), binomial_h(0.3, 1e-6), 1e-5);
  // Concave tau.
  for (double q = -4.0; q < 6.0; q += 0.25) {
    EXPECT_LT(binomial_tau(0.3, q + 0.25) - binomial_tau(0.3, q),
              binomial_tau(0.3, q) - binomial_tau(0.3, q - 0.25));
  }
}

TEST(PiecewiseCurve, Shapes) {
  const std::vector<std::size_t> g{20, 50, 100, 300, 1000, 3000};
  const auto c = gen_piecewise_curve(0.65, 0.97, 300, g, 0.0, 1);
  ASSERT_EQ(c.q, std::vector<double>{2.0});
  EXPECT_NEAR(c.F[0][3], std::pow(300.0, 0.65), 1e-9);
  EXPECT_NEAR(c.F[0][5] / c.F[0][4], std::pow(3.0, 0.97), 1e-12);
  EXPECT_NEAR(c.F[0][2] / c.F[0][1], std::pow(2.0, 0.65), 1e-12);
  // Continuation through s_cross: both branches agree there.
  const double left = std::pow(300.0, 0.65);
  const double right = std::pow(300.0, 0.65 - 0.97) * std::pow(300.0, 0.97);
  EXPECT_NEAR(left / right - 1.0, 0.0, 1e-15);
  const auto flat = gen_piecewise_curve(0.8, 0.8, 300, g, 0.0, 1);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(flat.F[0][k], std::pow(static_cast<double>(g[k]), 0.8), 1e-9 * flat.F[0][k]);
  }
  EXPECT_THROW(gen_piecewise_curve(0.65, 0.97, 10, g, 0.0, 1), RangeError);
  EXPECT_THROW(gen_piecewise_curve(1.6, 0.97, 300, g, 0.0, 1), RangeError);
  EXPECT_EQ(gen_piecewise_curve(0.6, 0.9, 300, g, 0.1, 5).F,
            gen_piecewise_curve(0.6, 0.9, 300, g, 0.1, 5).F);
}

TEST(SyntheticTicks, HonorSessionWindows) {
  const auto t = gen_synthetic_ticks(inverse_u_profile(2.0, 6.0, 0.5), 5, 1);
  ASSERT_FALSE(t.ticks.empty());
  EXPECT_EQ(t.dates.size(), 5u);
  EXPECT_EQ(t.dates[0], "2003-01-02");
  EXPECT_EQ(t.dates[2], "2003-01-06");  // weekend skipped
  for (const auto& tick : t.ticks) {
    EXPECT_GE(tick.time_centis, 0);
    EXPECT_LE(tick.time_centis, kSessionLengthCentis);
  }
  const auto text = serialize_ticks(t);
  EXPECT_EQ(text.find(",12:"), std::string::npos);
  EXPECT_EQ(serialize_ticks(parse_ticks(text)), text);
  EXPECT_EQ(parse_ticks(text).discarded_rows, 0u);
}

TEST(SyntheticTicks, Deterministic) {
  const auto p = flat_profile(3.0);
  EXPECT_EQ(gen_synthetic_ticks(p, 3, 8).ticks, gen_synthetic_ticks(p, 3, 8).ticks);
}

TEST(InverseUProfile, Shape) {
  const auto p = inverse_u_profile(5.0, 10.0, 0.5);
  EXPECT_LT(p[0], p[60]);
  EXPECT_LT(p[60], p[119]);
  EXPECT_LT(p[120], p[121]);
  EXPECT_GT(p[130], p[200]);
  EXPECT_LT(p[239], p[200]);
  EXPECT_NEAR(p[0], p[239], 1e-12);
  EXPECT_THROW(inverse_u_profile(-1.0, 1.0), RangeError);
}

TEST(NominalCalendar, Layout) {
  const std::vector<double> taus(500, 2.0);
  const auto d = on_nominal_calendar(taus);
  EXPECT_EQ(d.entries[239].day, 0);
  EXPECT_EQ(d.entries[239].bin, 239);
  EXPECT_EQ(d.entries[240].day, 1);
  EXPECT_EQ(d.entries[240].bin, 0);
  EXPECT_EQ(d.entries[130].session, Session::Afternoon);
}

TEST(GenerateDurations, KindsAndValidation) {
  GeneratorSpec spec;
  spec.length = 4096;
  for (auto kind : {GeneratorKind::Fgn, GeneratorKind::BinomialCascade, GeneratorKind::IidExp}) {
    spec.kind = kind;
    spec.levels = 12;
    const auto d = generate_durations(spec);
    EXPECT_EQ(d.size(), 4096u);
    for (const auto& e : d.entries) ASSERT_GT(e.tau, 0.0);
    EXPECT_EQ(serialize_durations(parse_durations(serialize_durations(d))),
              serialize_durations(d));
  }
  spec.kind = GeneratorKind::PiecewiseCurve;
  EXPECT_THROW(generate_durations(spec), ConfigError);
  spec.kind = GeneratorKind::Fgn;
  spec.length = 1000;
  EXPECT_THROW(generate_durations(spec), ConfigError);
  spec.length = 1024;
  spec.hurst = 1.2;
  EXPECT_THROW(generate_durations(spec), ConfigError);
}
