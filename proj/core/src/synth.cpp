#include "tradedfa/synth.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <random>

#include "tradedfa/error.hpp"

namespace tradedfa {

namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {
    if (plan_ == nullptr) throw NumericalError("FFTW planning failed");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::chrono::year_month_day nth_weekday_from(std::chrono::sys_days start, int n) {
  using namespace std::chrono;
  sys_days d = start;
  int count = 0;
  while (true) {
    const weekday wd{d};
    if (wd != Saturday && wd != Sunday) {
      if (count == n) return year_month_day{d};
      ++count;
    }
    d += days{1};
  }
}

std::string iso_date(const std::chrono::year_month_day& ymd) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace

double fgn_autocorrelation(double hurst, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw RangeError("fGn Hurst index must lie in (0, 1)");
  if (!is_power_of_two(n)) throw RangeError("fGn length must be a power of two");

  const std::size_t m = 2 * n;
  const std::size_t half = n + 1;  // r2c output length for size m
  auto row = fftw_buffer<double>(m);
  auto spec = fftw_buffer<fftw_complex>(half);

  for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocorrelation(hurst, k);
  for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];

  std::unique_ptr<Plan> forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(static_cast<int>(m), row.get(), spec.get(), FFTW_ESTIMATE));
  }
  forward->execute();

  std::vector<double> lambda(half);
  double lambda_max = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    lambda[k] = spec[k][0];
    lambda_max = std::max(lambda_max, lambda[k]);
  }
  for (auto& l : lambda) {
    if (l < -1e-9 * lambda_max) {
      throw NumericalError("circulant embedding is not non-negative definite");
    }
    l = std::max(l, 0.0);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  spec[0][0] = std::sqrt(lambda[0]) * normal(rng);
  spec[0][1] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double scale = std::sqrt(lambda[k] / 2.0);
    spec[k][0] = scale * normal(rng);
    spec[k][1] = scale * normal(rng);
  }
  spec[n][0] = std::sqrt(lambda[n]) * normal(rng);
  spec[n][1] = 0.0;

  {
    std::lock_guard lock(planner_mutex());
    backward = std::make_unique<Plan>(
        fftw_plan_dft_c2r_1d(static_cast<int>(m), spec.get(), row.get(), FFTW_ESTIMATE));
  }
  backward->execute();

  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = row[i] * norm;
  return out;
}

std::vector<double> exp_transform(std::span<const double> x, double sigma) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [sigma](double v) { return std::exp(sigma * v); });
  return out;
}

std::vector<double> shift_positive(std::span<const double> x, double offset) {
  if (!(offset > 0.0)) throw RangeError("shift offset must be positive");
  if (x.empty()) return {};
  const double lo = *std::min_element(x.begin(), x.end());
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return v - lo + offset; });
  return out;
}

std::vector<double> gen_binomial_cascade(double p, int levels, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw RangeError("cascade weight p must lie in (0, 1)");
  if (levels < 1 || levels > 30) throw RangeError("cascade levels must lie in [1, 30]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> mass{1.0};
  for (int level = 0; level < levels; ++level) {
    std::vector<double> next(2 * mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) {
      const bool left_gets_p = coin(rng);
      const double a = left_gets_p ? p : 1.0 - p;
      next[2 * i] = mass[i] * a;
      next[2 * i + 1] = mass[i] * (1.0 - a);
    }
    mass = std::move(next);
  }
  const double scale = static_cast<double>(mass.size());
  for (auto& v : mass) v *= scale;
  return mass;
}

double binomial_tau(double p, double q) {
  return -std::log2(std::pow(p, q) + std::pow(1.0 - p, q));
}

double binomial_h(double p, double q) {
  if (q == 0.0) {
    // Limit of (1 + tau(q)) / q at q = 0, where tau(0) = -1.
    return binomial_alpha(p, 0.0);
  }
  return (1.0 + binomial_tau(p, q)) / q;
}

double binomial_alpha(double p, double q) {
  const double a = std::pow(p, q), b = std::pow(1.0 - p, q);
  return -(a * std::log(p) + b * std::log(1.0 - p)) / ((a + b) * std::log(2.0));
}

double binomial_width(double p) { return std::abs(std::log2((1.0 - p) / p)); }

FluctuationCurve gen_piecewise_curve(double h1, double h2, std::size_t s_cross,
                                     std::span<const std::size_t> grid, double noise_sigma,
                                     std::uint64_t seed) {
  if (!(h1 > 0.0 && h1 < 1.5 && h2 > 0.0 && h2 < 1.5)) {
    throw RangeError("piecewise curve exponents must lie in (0, 1.5)");
  }
  if (grid.empty() || s_cross < grid.front() || s_cross > grid.back()) {
    throw RangeError("crossover must lie inside the grid");
  }
  if (noise_sigma < 0.0) throw RangeError("noise sigma must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double log_sx = std::log(static_cast<double>(s_cross));

  FluctuationCurve c;
  c.q = {2.0};
  c.s.assign(grid.begin(), grid.end());
  c.F.assign(1, std::vector<double>(grid.size()));
  c.valid_boxes.assign(1, std::vector<std::size_t>(grid.size(), 0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ls = std::log(static_cast<double>(grid[i]));
    const double lf = grid[i] <= s_cross ? h1 * ls : h1 * log_sx + h2 * (ls - log_sx);
    const double noise = noise_sigma > 0.0 ? noise_sigma * normal(rng) : 0.0;
    c.F[0][i] = std::exp(lf + noise);
  }
  return c;
}

BinProfile inverse_u_profile(double edge, double middle, double afternoon_open_factor) {
  if (!(edge > 0.0 && middle > 0.0 && afternoon_open_factor > 0.0)) {
    throw RangeError("intraday profile values must be positive");
  }
  BinProfile out{};
  // Within the 240-minute day u runs from -1 at the open to +1 at the close,
  // with the noon break at u = 0.
  for (int j = 0; j < kBinsPerDay; ++j) {
    const double u = (j + 0.5 - kMinutesPerSession) / kMinutesPerSession;
    out[static_cast<std::size_t>(j)] = middle + (edge - middle) * u * u;
  }
  out[kMinutesPerSession] *= afternoon_open_factor;
  return out;
}

BinProfile flat_profile(double mean) {
  if (!(mean > 0.0)) throw RangeError("intraday profile values must be positive");
  BinProfile out{};
  out.fill(mean);
  return out;
}

TickSeries gen_synthetic_ticks(const BinProfile& bin_means, int days, std::uint64_t seed,
                               std::string symbol) {
  if (days < 1) throw RangeError("need at least one day");
  for (double m : bin_means) {
    if (!(m > 0.0)) throw RangeError("target bin means must be positive");
  }
  using namespace std::chrono;
  const sys_days start = sys_days{year{2003} / January / 2};
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);

  TickSeries out;
  out.symbol = std::move(symbol);
  const double session_seconds = kSessionLengthCentis / static_cast<double>(kCentisPerSecond);
  for (int d = 0; d < days; ++d) {
    out.dates.push_back(iso_date(nth_weekday_from(start, d)));
    for (Session session : {Session::Morning, Session::Afternoon}) {
      double t = 0.0;
      while (true) {
        const auto centis_now = static_cast<std::int32_t>(t * kCentisPerSecond);
        const int bin = bin_index(session, centis_now);
        t += bin_means[static_cast<std::size_t>(bin)] * expo(rng);
        if (t > session_seconds) break;
        const auto centis = static_cast<std::int32_t>(std::llround(t * kCentisPerSecond));
        out.ticks.push_back(Tick{d, session, std::min(centis, kSessionLengthCentis)});
      }
    }
  }
  out.close_prints = static_cast<std::size_t>(
      std::count_if(out.ticks.begin(), out.ticks.end(), [](const Tick& t) {
        return t.session == Session::Afternoon && t.time_centis == kSessionLengthCentis;
      }));
  return out;
}

DurationSeries on_nominal_calendar(std::span<const double> taus, std::string symbol) {
  DurationSeries out;
  out.symbol = std::move(symbol);
  out.entries.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const int bin = static_cast<int>(i % kBinsPerDay);
    out.entries.push_back(DurationEntry{
        taus[i], static_cast<int>(i / kBinsPerDay), bin,
        bin < kMinutesPerSession ? Session::Morning : Session::Afternoon});
  }
  return out;
}

void validate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::Fgn:
      if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) throw ConfigError("fgn: H must lie in (0, 1)");
      if (!is_power_of_two(spec.length)) throw ConfigError("fgn: length must be a power of two");
      if (spec.exp_sigma < 0.0) throw ConfigError("fgn: exp sigma must be non-negative");
      break;
    case GeneratorKind::BinomialCascade:
      if (!(spec.p > 0.0 && spec.p < 1.0)) throw ConfigError("cascade: p must lie in (0, 1)");
      if (spec.levels < 1 || spec.levels > 30) throw ConfigError("cascade: levels in [1, 30]");
      break;
    case GeneratorKind::PiecewiseCurve:
      if (!(spec.h1 > 0.0 && spec.h1 < 1.5 && spec.h2 > 0.0 && spec.h2 < 1.5)) {
        throw ConfigError("curve: exponents must lie in (0, 1.5)");
      }
      if (spec.noise_sigma < 0.0) throw ConfigError("curve: noise must be non-negative");
      break;
    case GeneratorKind::IidExp:
      if (!(spec.rate > 0.0)) throw ConfigError("iid-exp: rate must be positive");
      if (spec.length == 0) throw ConfigError("iid-exp: length must be positive");
      break;
  }
}

DurationSeries generate_durations(const GeneratorSpec& spec) {
  validate(spec);
  std::vector<double> taus;
  switch (spec.kind) {
    case GeneratorKind::Fgn: {
      const auto x = gen_fgn(spec.hurst, spec.length, spec.seed);
      taus = spec.exp_sigma > 0.0 ? exp_transform(x, spec.exp_sigma) : shift_positive(x);
      break;
    }
    case GeneratorKind::BinomialCascade:
      taus = gen_binomial_cascade(spec.p, spec.levels, spec.seed);
      break;
    case GeneratorKind::IidExp: {
      std::mt19937_64 rng(spec.seed);
      std::exponential_distribution<double> expo(spec.rate);
      taus.resize(spec.length);
      for (auto& t : taus) t = expo(rng);
      break;
    }
    case GeneratorKind::PiecewiseCurve:
      throw ConfigError("piecewise-curve generator produces a fluctuation curve, not durations");
  }
  return on_nominal_calendar(taus);
}

}  // namespace tradedfa
