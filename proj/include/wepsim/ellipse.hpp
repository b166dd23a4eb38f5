#ifndef WEPSIM_ELLIPSE_HPP
#define WEPSIM_ELLIPSE_HPP

#include <array>
#include <span>
#include <vector>

namespace wepsim {

struct PointXY {
  double x = 0.0;
  double y = 0.0;
};

struct EllipseFit {
  // a*x^2 + b*x*y + c*y^2 + d*x + e*y + f = 0, normalized to
  // 4ac - b^2 = 1 with a > 0.
  std::array<double, 6> conic{};
  double differential_phase = 0.0;  // arccos(-b / (2*sqrt(a*c))), in (0, pi)
  double contrast_x = 0.0;          // peak-to-peak amplitude along x
  double contrast_y = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double rms_residual = 0.0;        // RMS Sampson distance
  int n_points = 0;
  // The best unconstrained conic through the data was hyperbolic or
  // parabolic; the constrained ellipse is still returned.
  bool non_ellipse_warning = false;
};

// Direct least-squares conic fit constrained to ellipses (4ac - b^2 = 1
// imposed at solve time through the reduced generalized eigenproblem).
// Throws DegenerateInput for fewer than five points or collinear input.
EllipseFit fit_ellipse(std::span<const PointXY> points);

inline EllipseFit fit_ellipse(const std::vector<PointXY>& points) {
  return fit_ellipse(std::span<const PointXY>(points));
}

}  // namespace wepsim

#endif  // WEPSIM_ELLIPSE_HPP
