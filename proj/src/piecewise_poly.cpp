#include "depkern/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "depkern/error.hpp"

namespace depkern {

namespace {

constexpr int kProductDegreeCap = 8;

// p(alpha + beta * z) in ascending-degree coefficients. |alpha| <= 1 and
// 0 < |beta| <= 1 whenever the target interval sits inside the source piece,
// so the Horner-style expansion is well conditioned.
std::vector<double> compose_affine(const std::vector<double>& p, double alpha, double beta) {
  std::vector<double> out{0.0};
  for (std::size_t k = p.size(); k-- > 0;) {
    // out = out * (alpha + beta z) + p[k]
    std::vector<double> next(out.size() + 1, 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
      next[j] += out[j] * alpha;
      next[j + 1] += out[j] * beta;
    }
    next[0] += p[k];
    out = std::move(next);
  }
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return out;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

double eval_poly(const std::vector<double>& c, double z) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints, std::vector<std::vector<double>> pieces,
                             double left_value, double right_value)
    : breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)),
      left_value_(left_value),
      right_value_(right_value) {
  require(breakpoints_.size() >= 2, ErrorKind::invalid_argument,
          "piecewise polynomial needs at least two breakpoints");
  require(pieces_.size() + 1 == breakpoints_.size(), ErrorKind::invalid_argument,
          "piece count must be breakpoints - 1");
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k)
    require(breakpoints_[k] < breakpoints_[k + 1], ErrorKind::invalid_argument,
            "breakpoints must be strictly increasing");
  for (auto& c : pieces_) {
    require(!c.empty(), ErrorKind::invalid_argument, "empty coefficient list");
    require(std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); }),
            ErrorKind::invalid_argument, "non-finite coefficient");
  }
  require(std::isfinite(left_value_) && std::isfinite(right_value_), ErrorKind::invalid_argument,
          "non-finite extension value");
}

PiecewisePoly PiecewisePoly::from_power_basis(const std::vector<double>& breakpoints,
                                              const std::vector<std::vector<double>>& global_pieces,
                                              double left_value, double right_value) {
  require(breakpoints.size() == global_pieces.size() + 1, ErrorKind::invalid_argument,
          "piece count must be breakpoints - 1");
  std::vector<std::vector<double>> local(global_pieces.size());
  for (std::size_t k = 0; k < global_pieces.size(); ++k) {
    const double a = breakpoints[k], b = breakpoints[k + 1];
    // u = mid + hw * z
    local[k] = compose_affine(global_pieces[k], (a + b) / 2.0, (b - a) / 2.0);
  }
  return PiecewisePoly(breakpoints, std::move(local), left_value, right_value);
}

double PiecewisePoly::operator()(double u) const {
  if (u < breakpoints_.front()) return left_value_;
  if (u > breakpoints_.back()) return right_value_;
  // half-open pieces [b_k, b_{k+1}); the last piece is closed at the top
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u) - breakpoints_.begin());
  if (k == 0) k = 1;
  if (k >= breakpoints_.size()) k = breakpoints_.size() - 1;
  const double a = breakpoints_[k - 1], b = breakpoints_[k];
  const double z = (2.0 * u - a - b) / (b - a);
  return eval_poly(pieces_[k - 1], z);
}

int PiecewisePoly::max_degree() const {
  std::size_t deg = 0;
  for (const auto& c : pieces_) deg = std::max(deg, c.size() - 1);
  return static_cast<int>(deg);
}

PiecewisePoly PiecewisePoly::affine_compose(double shift, double scale) const {
  require(scale != 0.0 && std::isfinite(scale) && std::isfinite(shift), ErrorKind::invalid_argument,
          "affine compose needs finite shift and nonzero scale");
  const std::size_t m = pieces_.size();
  std::vector<double> bp(breakpoints_.size());
  std::vector<std::vector<double>> pc(m);
  if (scale > 0.0) {
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) bp[k] = shift + scale * breakpoints_[k];
    pc = pieces_;
    return PiecewisePoly(std::move(bp), std::move(pc), left_value_, right_value_);
  }
  for (std::size_t k = 0; k < breakpoints_.size(); ++k)
    bp[k] = shift + scale * breakpoints_[breakpoints_.size() - 1 - k];
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> c = pieces_[m - 1 - k];
    for (std::size_t j = 1; j < c.size(); j += 2) c[j] = -c[j];  // z -> -z
    pc[k] = std::move(c);
  }
  return PiecewisePoly(std::move(bp), std::move(pc), right_value_, left_value_);
}

PiecewisePoly poly_affine_compose(const PiecewisePoly& p, double shift, double scale) {
  return p.affine_compose(shift, scale);
}

PiecewisePoly PiecewisePoly::antiderivative() const {
  require(left_value_ == 0.0, ErrorKind::invalid_argument,
          "antiderivative requires zero left extension");
  std::vector<std::vector<double>> pc(pieces_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const double hw = (breakpoints_[k + 1] - breakpoints_[k]) / 2.0;
    const std::vector<double>& c = pieces_[k];
    // F(z) = acc + hw * (P(z) - P(-1)), P the antiderivative in z
    std::vector<double> P(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) P[j + 1] = c[j] / static_cast<double>(j + 1);
    const double pm1 = eval_poly(P, -1.0);
    for (double& v : P) v *= hw;
    P[0] += acc - hw * pm1;
    acc = eval_poly(P, 1.0);
    pc[k] = std::move(P);
  }
  return PiecewisePoly(breakpoints_, std::move(pc), 0.0, acc);
}

namespace {

// Coefficients of p restricted to [c, d] in the normalized coordinate of
// [c, d]; requires that (c, d) does not straddle a breakpoint of p.
std::vector<double> local_poly(const PiecewisePoly& p, double c, double d) {
  const auto& bp = p.breakpoints();
  if (d <= bp.front()) return {p.left_value()};
  if (c >= bp.back()) return {p.right_value()};
  const double mid = 0.5 * (c + d);
  std::size_t k = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), mid) - bp.begin());
  if (k == 0) k = 1;
  if (k >= bp.size()) k = bp.size() - 1;
  const double a = bp[k - 1], b = bp[k];
  const double alpha = ((c + d) - (a + b)) / (b - a);
  const double beta = (d - c) / (b - a);
  return compose_affine(p.pieces()[k - 1], alpha, beta);
}

double integrate_cell(const std::vector<double>& prod, double c, double d) {
  // int_{-1}^{1} z^j dz = 2/(j+1) for even j, else 0; du = (d-c)/2 dz
  double s = 0.0;
  for (std::size_t j = 0; j < prod.size(); j += 2) s += prod[j] / static_cast<double>(j + 1);
  return (d - c) * s;
}

template <typename LocalFn>
double integrate_split(const PiecewisePoly& p, const PiecewisePoly* q, double lo, double hi,
                       LocalFn&& cell) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, ErrorKind::invalid_argument,
          "integration range must be finite with lo <= hi");
  std::vector<double> cuts;
  cuts.push_back(lo);
  for (double b : p.breakpoints())
    if (b > lo && b < hi) cuts.push_back(b);
  if (q != nullptr)
    for (double b : q->breakpoints())
      if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0, comp = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double c = cuts[k], d = cuts[k + 1];
    if (!(d > c)) continue;
    const double term = cell(c, d);
    const double y = term - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  return total;
}

}  // namespace

double PiecewisePoly::integrate(double lo, double hi) const {
  return integrate_split(*this, nullptr, lo, hi, [this](double c, double d) {
    return integrate_cell(local_poly(*this, c, d), c, d);
  });
}

double integrate_product(const PiecewisePoly& p, const PiecewisePoly& q, double lo, double hi) {
  require(p.max_degree() + q.max_degree() <= kProductDegreeCap, ErrorKind::invalid_argument,
          "product degree above cap");
  return integrate_split(p, &q, lo, hi, [&p, &q](double c, double d) {
    return integrate_cell(poly_mul(local_poly(p, c, d), local_poly(q, c, d)), c, d);
  });
}

}  // namespace depkern
