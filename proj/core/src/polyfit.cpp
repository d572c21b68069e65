#include "tradedfa/polyfit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tradedfa/error.hpp"

namespace tradedfa {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

OrthoBasis::OrthoBasis(std::span<const double> x, int degree)
    : degree_(degree), size_(x.size()) {
  if (degree < 0) throw RangeError("polynomial degree must be non-negative");
  if (x.size() < static_cast<std::size_t>(degree) + 1) {
    throw NumericalError("need at least " + std::to_string(degree + 1) +
                         " points for a degree-" + std::to_string(degree) + " basis");
  }
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  center_ = 0.5 * (*lo + *hi);
  half_width_ = 0.5 * (*hi - *lo);
  if (degree > 0 && !(half_width_ > 0.0)) {
    throw NumericalError("constant abscissa cannot support a non-constant fit");
  }
  if (!(half_width_ > 0.0)) half_width_ = 1.0;

  const std::size_t n = size_;
  const std::size_t m = static_cast<std::size_t>(degree) + 1;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (x[i] - center_) / half_width_;

  columns_.assign(m * n, 0.0);
  polys_.assign(m * m, 0.0);
  auto col = [&](std::size_t k) { return std::span<double>(columns_.data() + k * n, n); };
  auto poly = [&](std::size_t k) { return std::span<double>(polys_.data() + k * m, m); };

  for (std::size_t k = 0; k < m; ++k) {
    auto v = col(k);
    auto p = poly(k);
    if (k == 0) {
      std::fill(v.begin(), v.end(), 1.0);
      p[0] = 1.0;
    } else {
      const auto prev = col(k - 1);
      const auto prev_p = poly(k - 1);
      for (std::size_t i = 0; i < n; ++i) v[i] = u[i] * prev[i];
      for (std::size_t j = 0; j + 1 < m; ++j) p[j + 1] = prev_p[j];
    }
    const double before = std::sqrt(dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        const auto qj = col(j);
        const auto pj = poly(j);
        const double r = dot(qj, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= r * qj[i];
        for (std::size_t t = 0; t < m; ++t) p[t] -= r * pj[t];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > 1e-10 * before)) {
      throw NumericalError("numerically singular polynomial basis at degree " +
                           std::to_string(k));
    }
    for (auto& vi : v) vi /= norm;
    for (auto& pi : p) pi /= norm;
  }
}

OrthoBasis OrthoBasis::on_index(std::size_t size, int degree) {
  std::vector<double> x(size);
  std::iota(x.begin(), x.end(), 1.0);
  return OrthoBasis(x, degree);
}

std::vector<double> OrthoBasis::project(std::span<const double> y) const {
  std::vector<double> c(static_cast<std::size_t>(degree_) + 1);
  for (int k = 0; k <= degree_; ++k) c[static_cast<std::size_t>(k)] = dot(column(k), y);
  return c;
}

double OrthoBasis::residual_sum_squares(std::span<const double> y,
                                        std::span<double> scratch) const {
  const std::size_t n = size_;
  // Removing the mean first keeps the projection free of a large offset.
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += y[i];
  mean /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = y[i] - mean;

  for (int k = 0; k <= degree_; ++k) {
    const auto q = column(k);
    const double c = dot(q, scratch);
    for (std::size_t i = 0; i < n; ++i) scratch[i] -= c * q[i];
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += scratch[i] * scratch[i];
  return ss;
}

double PolyFit::evaluate(double x) const noexcept {
  const double u = (x - center) / half_width;
  double acc = 0.0;
  for (auto it = scaled_coefficients.rbegin(); it != scaled_coefficients.rend(); ++it) {
    acc = acc * u + *it;
  }
  return acc;
}

PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size()) throw RangeError("polyfit: x and y differ in length");
  if (degree < 0) throw RangeError("polyfit: negative degree");
  if (x.size() < static_cast<std::size_t>(degree) + 1) {
    throw RangeError("polyfit: underdetermined, need at least " + std::to_string(degree + 1) +
                     " points");
  }
  const OrthoBasis basis(x, degree);
  const auto c = basis.project(y);
  const std::size_t m = static_cast<std::size_t>(degree) + 1;

  PolyFit fit;
  fit.degree = degree;
  fit.center = basis.center();
  fit.half_width = basis.half_width();
  fit.scaled_coefficients.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const auto p = basis.column_poly(static_cast<int>(k));
    for (std::size_t t = 0; t < m; ++t) fit.scaled_coefficients[t] += c[k] * p[t];
  }

  // Expand sum_t a_t ((x - c)/h)^t into powers of x.
  fit.coefficients.assign(m, 0.0);
  std::vector<double> term(m, 0.0);  // coefficients of ((x - c)/h)^t
  term[0] = 1.0;
  for (std::size_t t = 0; t < m; ++t) {
    if (t > 0) {
      for (std::size_t j = t; j-- > 0;) {
        term[j + 1] += term[j] / fit.half_width;
        term[j] *= -fit.center / fit.half_width;
      }
    }
    for (std::size_t j = 0; j <= t; ++j) fit.coefficients[j] += fit.scaled_coefficients[t] * term[j];
  }

  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.evaluate(x[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(x.size()));
  return fit;
}

}  // namespace tradedfa
