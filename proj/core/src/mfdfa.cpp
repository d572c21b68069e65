#include "tradedfa/mfdfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tradedfa/error.hpp"

namespace tradedfa {

namespace {

std::string format_q(double q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

QGrid QGrid::uniform(double q_min, double q_max, double step) {
  if (!(step > 0.0)) throw ConfigError("q step must be positive");
  if (!(q_min < q_max)) throw ConfigError("q range must satisfy q_min < q_max");
  std::vector<double> values;
  const double slack = 1e-9 * step;
  for (long i = 0;; ++i) {
    double q = q_min + static_cast<double>(i) * step;
    if (q > q_max + slack) break;
    const double lattice = std::round(q / step) * step;
    if (std::abs(q - lattice) <= slack) q = lattice;
    values.push_back(q);
  }
  return QGrid(std::move(values));
}

QGrid::QGrid(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i] > values_[i - 1])) throw ConfigError("q grid must be strictly increasing");
  }
  const auto has = [this](double v) {
    return std::find(values_.begin(), values_.end(), v) != values_.end();
  };
  if (!has(0.0) || !has(2.0)) throw ConfigError("q grid must contain 0 and 2 exactly");
}

FluctuationCurve fluctuation_q(const Profile& p, std::span<const std::size_t> grid,
                               const QGrid& qgrid, const MfdfaOptions& options) {
  const double floor = options.zero_floor.value_or(options.zero_floor_factor * increment_rms(p));
  const auto& qs = qgrid.values();
  FluctuationCurve curve;
  curve.q = qs;
  curve.s.assign(grid.begin(), grid.end());
  curve.F.assign(qs.size(), std::vector<double>(grid.size()));
  curve.valid_boxes.assign(qs.size(), std::vector<std::size_t>(grid.size()));
  for (std::size_t si = 0; si < grid.size(); ++si) {
    if (si > 0 && grid[si] <= grid[si - 1]) throw RangeError("box-size grid must be increasing");
    const auto f = box_fluctuations(p, grid[si], options.dfa);
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      curve.F[qi][si] = power_mean(f, qs[qi], floor, curve.valid_boxes[qi][si]);
    }
  }
  return curve;
}

std::optional<HurstPoint> GeneralizedHurst::at(double q) const {
  for (const auto& pt : points) {
    if (pt.q == q) return pt;
  }
  return std::nullopt;
}

GeneralizedHurst generalized_hurst(const FluctuationCurve& curve, std::size_t s_lo,
                                   std::size_t s_hi) {
  if (!(s_lo < s_hi)) throw RangeError("fit range must satisfy s_lo < s_hi");
  GeneralizedHurst out;
  out.s_lo = s_lo;
  out.s_hi = s_hi;
  for (std::size_t qi = 0; qi < curve.q.size(); ++qi) {
    try {
      const auto fit = fit_scaling(curve.s, curve.F[qi], s_lo, s_hi);
      out.points.push_back(HurstPoint{curve.q[qi], fit.exponent, fit.exponent_stderr, fit.points});
    } catch (const RangeError& e) {
      out.warnings.push_back("q = " + format_q(curve.q[qi]) + " omitted: " + e.what());
    }
  }
  return out;
}

MassExponents mass_exponents(const GeneralizedHurst& h, double support_dimension) {
  MassExponents m;
  m.support_dimension = support_dimension;
  for (const auto& pt : h.points) {
    m.q.push_back(pt.q);
    m.tau.push_back(pt.q * pt.h - support_dimension);
    m.tau_stderr.push_back(std::abs(pt.q) * pt.h_stderr);
  }
  return m;
}

SingularitySpectrum legendre_spectrum(const MassExponents& m) {
  const std::size_t n = m.q.size();
  if (n < 3) throw RangeError("Legendre spectrum needs at least three q values");
  SingularitySpectrum sp;
  sp.points.resize(n);
  const auto se = [&m](std::size_t i) {
    return i < m.tau_stderr.size() ? m.tau_stderr[i] : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    const double dq = m.q[hi] - m.q[lo];
    auto& pt = sp.points[i];
    pt.q = m.q[i];
    pt.alpha = (m.tau[hi] - m.tau[lo]) / dq;
    pt.f = m.q[i] * pt.alpha - m.tau[i];
    pt.alpha_stderr = std::hypot(se(hi), se(lo)) / dq;
  }
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (sp.points[i].alpha < sp.points[imin].alpha) imin = i;
    if (sp.points[i].alpha > sp.points[imax].alpha) imax = i;
    if (sp.points[i].alpha > sp.points[i - 1].alpha + 1e-12) sp.concave = false;
  }
  sp.alpha_min = sp.points[imin].alpha;
  sp.alpha_max = sp.points[imax].alpha;
  sp.width = sp.alpha_max - sp.alpha_min;
  sp.width_stderr = std::hypot(sp.points[imin].alpha_stderr, sp.points[imax].alpha_stderr);
  sp.q_lo = m.q.front();
  sp.q_hi = m.q.back();
  if (!sp.concave) sp.warnings.push_back("alpha(q) is not monotone: tau(q) estimate is not concave");
  double fmax = -std::numeric_limits<double>::infinity();
  for (const auto& pt : sp.points) fmax = std::max(fmax, pt.f);
  if (fmax > m.support_dimension + 0.05) {
    sp.warnings.push_back("max f(alpha) = " + format_q(fmax) + " exceeds the support dimension");
  }
  return sp;
}

MultifractalResult analyze_multifractal(const FluctuationCurve& curve, std::size_t s_lo,
                                        std::size_t s_hi, double support_dimension) {
  MultifractalResult r;
  r.hurst = generalized_hurst(curve, s_lo, s_hi);
  r.mass = mass_exponents(r.hurst, support_dimension);
  if (r.mass.q.size() >= 3) {
    r.spectrum = legendre_spectrum(r.mass);
  } else {
    r.spectrum.warnings.push_back("fewer than three q values fitted; no spectrum");
  }
  return r;
}

}  // namespace tradedfa
