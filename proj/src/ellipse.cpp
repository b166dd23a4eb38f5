#include "wepsim/ellipse.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "wepsim/errors.hpp"

namespace wepsim {

namespace {

struct Normalization {
  double mx = 0.0;
  double my = 0.0;
  double scale = 1.0;
};

// Map the conic fitted in the shifted/scaled frame back to data
// coordinates: substitute u = (x - mx)/s, v = (y - my)/s.
std::array<double, 6> denormalize(const Eigen::Matrix<double, 6, 1>& k,
                                  const Normalization& n) {
  const double A = k(0), B = k(1), C = k(2), D = k(3), E = k(4), F = k(5);
  const double s = n.scale, s2 = s * s;
  std::array<double, 6> out{};
  out[0] = A / s2;
  out[1] = B / s2;
  out[2] = C / s2;
  out[3] = -(2.0 * A * n.mx + B * n.my) / s2 + D / s;
  out[4] = -(B * n.mx + 2.0 * C * n.my) / s2 + E / s;
  out[5] = (A * n.mx * n.mx + B * n.mx * n.my + C * n.my * n.my) / s2 -
           (D * n.mx + E * n.my) / s + F;
  return out;
}

double sampson_rms(std::span<const PointXY> pts, const std::array<double, 6>& c) {
  double sum = 0.0;
  for (const auto& p : pts) {
    const double value = c[0] * p.x * p.x + c[1] * p.x * p.y +
                         c[2] * p.y * p.y + c[3] * p.x + c[4] * p.y + c[5];
    const double gx = 2.0 * c[0] * p.x + c[1] * p.y + c[3];
    const double gy = c[1] * p.x + 2.0 * c[2] * p.y + c[4];
    const double grad2 = gx * gx + gy * gy;
    if (grad2 > 0.0) sum += value * value / grad2;
  }
  return std::sqrt(sum / static_cast<double>(pts.size()));
}

}  // namespace

EllipseFit fit_ellipse(std::span<const PointXY> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 5)
    throw DegenerateInput("fit_ellipse: need at least 5 points, got " +
                          std::to_string(points.size()));

  Normalization norm;
  for (const auto& p : points) {
    norm.mx += p.x;
    norm.my += p.y;
  }
  norm.mx /= static_cast<double>(n);
  norm.my /= static_cast<double>(n);

  double spread = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - norm.mx, dy = p.y - norm.my;
    spread += dx * dx + dy * dy;
  }
  spread /= static_cast<double>(n);
  if (!(spread > 0.0))
    throw DegenerateInput("fit_ellipse: all points coincide");
  norm.scale = std::sqrt(spread);

  Eigen::MatrixXd quad(n, 3);   // u^2, uv, v^2
  Eigen::MatrixXd lin(n, 3);    // u, v, 1
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (points[i].x - norm.mx) / norm.scale;
    const double v = (points[i].y - norm.my) / norm.scale;
    quad(i, 0) = u * u;
    quad(i, 1) = u * v;
    quad(i, 2) = v * v;
    lin(i, 0) = u;
    lin(i, 1) = v;
    lin(i, 2) = 1.0;
    cov(0, 0) += u * u;
    cov(0, 1) += u * v;
    cov(1, 1) += v * v;
  }
  cov(1, 0) = cov(0, 1);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    if (es.eigenvalues()(0) < 1e-12 * es.eigenvalues()(1))
      throw DegenerateInput("fit_ellipse: points are collinear");
  }

  const Eigen::Matrix3d s1 = quad.transpose() * quad;
  const Eigen::Matrix3d s2 = quad.transpose() * lin;
  const Eigen::Matrix3d s3 = lin.transpose() * lin;

  Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
  if (!lu.isInvertible())
    throw DegenerateInput("fit_ellipse: degenerate point configuration");
  const Eigen::Matrix3d t = -lu.solve(s2.transpose());
  const Eigen::Matrix3d reduced = s1 + s2 * t;

  // Premultiply by C1^-1 for the constraint matrix of 4ac - b^2.
  Eigen::Matrix3d m;
  m.row(0) = reduced.row(2) / 2.0;
  m.row(1) = -reduced.row(1);
  m.row(2) = reduced.row(0) / 2.0;

  Eigen::EigenSolver<Eigen::Matrix3d> es(m);
  int best = -1;
  double best_cond = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(es.eigenvalues()(i).imag()) >
        1e-9 * (1.0 + std::abs(es.eigenvalues()(i).real())))
      continue;
    const Eigen::Vector3d v = es.eigenvectors().col(i).real();
    const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (cond > best_cond) {
      best_cond = cond;
      best = i;
    }
  }
  if (best < 0)
    throw DegenerateInput("fit_ellipse: no elliptic solution found");

  const Eigen::Vector3d a1 = es.eigenvectors().col(best).real();
  const Eigen::Vector3d a2 = t * a1;
  Eigen::Matrix<double, 6, 1> coeff;
  coeff << a1, a2;

  EllipseFit fit;
  fit.n_points = static_cast<int>(n);
  fit.conic = denormalize(coeff, norm);

  // Rescale so 4ac - b^2 = 1 exactly, with the positive-definite sign.
  {
    const double disc = 4.0 * fit.conic[0] * fit.conic[2] -
                        fit.conic[1] * fit.conic[1];
    if (!(disc > 0.0))
      throw NumericalError("fit_ellipse: constrained solution lost ellipticity");
    double scale = 1.0 / std::sqrt(disc);
    if (fit.conic[0] < 0.0) scale = -scale;
    for (double& v : fit.conic) v *= scale;
  }

  const double a = fit.conic[0], b = fit.conic[1], c = fit.conic[2];
  const double d = fit.conic[3], e = fit.conic[4], f = fit.conic[5];

  // Center solves [2a b; b 2c] (x0,y0) = -(d,e); determinant is 4ac-b^2=1.
  fit.center_x = (-2.0 * c * d + b * e);
  fit.center_y = (b * d - 2.0 * a * e);

  const double f_centered =
      f + 0.5 * (d * fit.center_x + e * fit.center_y);
  const double rhs = -f_centered;
  if (!(rhs > 0.0))
    throw NumericalError("fit_ellipse: empty (imaginary) ellipse");

  fit.contrast_x = 4.0 * std::sqrt(c * rhs);
  fit.contrast_y = 4.0 * std::sqrt(a * rhs);

  const double cos_phi = std::clamp(-b / (2.0 * std::sqrt(a * c)), -1.0, 1.0);
  fit.differential_phase = std::acos(cos_phi);
  fit.rms_residual = sampson_rms(points, fit.conic);

  // Unconstrained check: smallest eigenvector of the full 6x6 scatter.
  {
    Eigen::Matrix<double, 6, 6> scatter;
    scatter.topLeftCorner<3, 3>() = s1;
    scatter.topRightCorner<3, 3>() = s2;
    scatter.bottomLeftCorner<3, 3>() = s2.transpose();
    scatter.bottomRightCorner<3, 3>() = s3;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> ses(scatter);
    const auto v = ses.eigenvectors().col(0);
    fit.non_ellipse_warning = (v(1) * v(1) - 4.0 * v(0) * v(2)) >= 0.0;
  }

  return fit;
}

}  // namespace wepsim
