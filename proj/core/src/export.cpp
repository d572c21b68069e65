#include "tradedfa/export.hpp"

#include <cmath>

#include "text.hpp"

namespace tradedfa {

namespace {

void num(std::string& out, double v) {
  if (std::isfinite(v)) detail::append_double(out, v);
}

template <typename... Ts>
void row(std::string& out, Ts... values) {
  bool first = true;
  (
      [&] {
        if (!first) out.push_back(',');
        first = false;
        if constexpr (std::is_floating_point_v<Ts>) {
          num(out, values);
        } else {
          out += std::to_string(values);
        }
      }(),
      ...);
  out.push_back('\n');
}

}  // namespace

std::string curve_csv(const FluctuationCurve& curve) {
  std::string out = "q,s,F,valid_boxes\n";
  for (std::size_t qi = 0; qi < curve.q.size(); ++qi) {
    for (std::size_t si = 0; si < curve.s.size(); ++si) {
      const double f = curve.valid(qi, si) ? curve.F[qi][si] : NAN;
      row(out, curve.q[qi], curve.s[si], f, curve.valid_boxes[qi][si]);
    }
  }
  return out;
}

std::string pattern_csv(const IntradayPattern& pattern) {
  std::string out = "bin,mean_tau,contributing_days\n";
  for (int j = 0; j < kBinsPerDay; ++j) {
    const auto& m = pattern.means[static_cast<std::size_t>(j)];
    row(out, j, m.value_or(NAN), pattern.contributing_days[static_cast<std::size_t>(j)]);
  }
  return out;
}

std::string pattern_fit_csv(const IntradayPattern& pattern, const PatternPolyFit& fit) {
  std::string out = "bin,mean_tau,polyfit_value\n";
  for (int j = 0; j < kBinsPerDay; ++j) {
    const auto& m = pattern.means[static_cast<std::size_t>(j)];
    row(out, j, m.value_or(NAN), fit(j));
  }
  return out;
}

std::string hurst_csv(const GeneralizedHurst& h) {
  std::string out = "q,h,h_stderr\n";
  for (const auto& p : h.points) row(out, p.q, p.h, p.h_stderr);
  return out;
}

std::string mass_csv(const MassExponents& m) {
  std::string out = "q,tau\n";
  for (std::size_t i = 0; i < m.q.size(); ++i) row(out, m.q[i], m.tau[i]);
  return out;
}

std::string spectrum_csv(const SingularitySpectrum& sp) {
  std::string out = "q,alpha,f_alpha\n";
  for (const auto& p : sp.points) row(out, p.q, p.alpha, p.f);
  return out;
}

}  // namespace tradedfa
