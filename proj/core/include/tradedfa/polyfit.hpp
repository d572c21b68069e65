#pragma once

// Least-squares polynomial fitting through a discrete orthonormal basis.
//
// The abscissa is mapped onto [-1, 1] and the basis is built by a
// three-term-style recurrence (multiply the previous vector by u) followed by
// two passes of modified Gram-Schmidt. Raw-power normal equations are never
// formed, so fits stay accurate for windows of many thousand points.

#include <cstddef>
#include <span>
#include <vector>

namespace tradedfa {

class OrthoBasis {
 public:
  // Throws NumericalError when the abscissa cannot support `degree`
  // (fewer than degree + 1 distinct points).
  OrthoBasis(std::span<const double> x, int degree);

  // Basis on the integer abscissa 1..size.
  static OrthoBasis on_index(std::size_t size, int degree);

  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const double> column(int k) const noexcept {
    return {columns_.data() + static_cast<std::size_t>(k) * size_, size_};
  }

  // Coefficients <q_k, y> for k = 0..degree.
  std::vector<double> project(std::span<const double> y) const;

  // Sum of squared residuals of the least-squares fit to y. `scratch` must
  // hold size() doubles; it is overwritten with the residuals.
  double residual_sum_squares(std::span<const double> y, std::span<double> scratch) const;

  // Monomial coefficients (ascending, in the scaled variable u) of q_k.
  std::span<const double> column_poly(int k) const noexcept {
    return {polys_.data() + static_cast<std::size_t>(k) * (degree_ + 1),
            static_cast<std::size_t>(degree_ + 1)};
  }

  double center() const noexcept { return center_; }
  double half_width() const noexcept { return half_width_; }

 private:
  int degree_;
  std::size_t size_;
  double center_;
  double half_width_;
  std::vector<double> columns_;  // column-major, (degree+1) x size
  std::vector<double> polys_;    // (degree+1) x (degree+1)
};

struct PolyFit {
  int degree = 0;
  // Ascending monomial coefficients in the original abscissa x.
  std::vector<double> coefficients;
  // Ascending monomial coefficients in u = (x - center) / half_width. Used by
  // evaluate(), which is better conditioned than the x-form at high degree.
  std::vector<double> scaled_coefficients;
  double center = 0.0;
  double half_width = 1.0;
  double residual_rms = 0.0;

  double evaluate(double x) const noexcept;
};

// Throws RangeError when x and y differ in length or fewer than degree + 1
// points are given.
PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree);

}  // namespace tradedfa
