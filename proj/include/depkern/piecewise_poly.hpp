#pragma once

#include <cstddef>
#include <vector>

namespace depkern {

// Piecewise polynomial on a strictly increasing breakpoint grid, with constant
// extensions to the left and right of the grid.
//
// Each piece k lives on [b_k, b_{k+1}] and stores its coefficients in the
// normalized local coordinate z = (2u - b_k - b_{k+1}) / (b_{k+1} - b_k), so
// z runs over [-1, 1] on the piece. Keeping coefficients local instead of in
// powers of u is what makes affine reparameterizations exact: composing with
// u -> (u - shift)/scale only moves the breakpoints, it never touches a
// coefficient, so narrow-bandwidth kernels (scale ~ 1e-4) lose nothing to
// cancellation.
class PiecewisePoly {
 public:
  // pieces[k] holds ascending-degree coefficients in the local coordinate of
  // [breakpoints[k], breakpoints[k+1]].
  PiecewisePoly(std::vector<double> breakpoints, std::vector<std::vector<double>> pieces,
                double left_value, double right_value);

  // Convenience constructor: pieces given in the power basis of the global
  // variable u; rebased internally. Intended for hand-written catalogs where
  // the global coefficients are exact small rationals.
  static PiecewisePoly from_power_basis(const std::vector<double>& breakpoints,
                                        const std::vector<std::vector<double>>& global_pieces,
                                        double left_value, double right_value);

  double operator()(double u) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::vector<double>>& pieces() const { return pieces_; }
  double left_value() const { return left_value_; }
  double right_value() const { return right_value_; }
  int max_degree() const;

  // q(u) = p((u - shift)/scale), scale != 0. Negative scale reverses the
  // breakpoint order (pieces are flipped via z -> -z).
  PiecewisePoly affine_compose(double shift, double scale) const;

  // Antiderivative anchored so that F(breakpoints.front()) = 0 and continuous
  // across pieces. Requires left extension == 0 (otherwise unbounded).
  PiecewisePoly antiderivative() const;

  double integrate(double lo, double hi) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> pieces_;
  double left_value_;
  double right_value_;
};

PiecewisePoly poly_affine_compose(const PiecewisePoly& p, double shift, double scale);

// Exact integral of p(u) * q(u) over [lo, hi], splitting at the union of both
// breakpoint grids; each cell is integrated in closed form. Product degree is
// capped at 8.
double integrate_product(const PiecewisePoly& p, const PiecewisePoly& q, double lo, double hi);

}  // namespace depkern
