#include "eulerpeps/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "eulerpeps/error.hpp"

namespace eulerpeps {

namespace {

struct Frame {
  Eigen::Vector3d u, d1, d2;  // n̂ and its partials
};

Frame analytic_frame(KPoint k) {
  const Eigen::Vector3d n = n_vector(k);
  const double s12 = std::sin(0.5 * (k.k1 + k.k2));
  const Eigen::Vector3d dn1(-0.5 * std::sin(0.5 * k.k1), 0.0, -0.5 * s12);
  const Eigen::Vector3d dn2(0.0, -0.5 * std::sin(0.5 * k.k2), -0.5 * s12);
  const double r = n.norm();
  Frame f;
  f.u = n / r;
  f.d1 = (dn1 - f.u * f.u.dot(dn1)) / r;
  f.d2 = (dn2 - f.u * f.u.dot(dn2)) / r;
  return f;
}

Frame fd_frame(KPoint k, double h) {
  if (!(h >= 1e-6 && h <= 1e-3)) fail(ErrorCode::InvalidArgument, "finite-difference step must lie in [1e-6, 1e-3]");
  Frame f;
  f.u = n_hat(k);
  f.d1 = (n_hat({k.k1 + h, k.k2}) - n_hat({k.k1 - h, k.k2})) / (2.0 * h);
  f.d2 = (n_hat({k.k1, k.k2 + h}) - n_hat({k.k1, k.k2 - h})) / (2.0 * h);
  return f;
}

double orient(double value_k2xk1, Orientation o) { return o == Orientation::K2xK1 ? value_k2xk1 : -value_k2xk1; }

struct Trig {
  double c1, c2, c12, D;
};

Trig trig(KPoint k) {
  Trig t;
  t.c1 = std::cos(k.k1);
  t.c2 = std::cos(k.k2);
  t.c12 = std::cos(k.k1 + k.k2);
  t.D = 3.0 + t.c1 + t.c2 + t.c12;
  return t;
}

Metric closed_form_metric(KPoint k) {
  const Trig t = trig(k);
  const double k1 = k.k1, k2 = k.k2;
  const double D2 = t.D * t.D;
  const double cm = std::cos(k1 - k2);
  Metric g;
  g.g11 = (8.0 - 3.0 * t.c1 - 3.0 * t.c12 - cm - std::cos(k1 + 2.0 * k2)) / (8.0 * D2);
  g.g22 = (8.0 - 3.0 * t.c2 - 3.0 * t.c12 - cm - std::cos(2.0 * k1 + k2)) / (8.0 * D2);
  g.g12 = (2.0 - 2.0 * t.c1 * t.c2 + std::sin(k1) * std::sin(k2)) / (4.0 * D2);
  return g;
}

Metric frame_metric(const Frame& f) { return {f.d1.dot(f.d1), f.d1.dot(f.d2), f.d2.dot(f.d2)}; }

}  // namespace

double euler_curvature_closed_form(KPoint k) {
  const Trig t = trig(k);
  return (-3.0 + t.c1 + t.c2 + t.c12) / (4.0 * std::sqrt(2.0) * std::pow(t.D, 1.5));
}

double euler_curvature(KPoint k, GeoMethod method, double h, Orientation o) {
  switch (method) {
    case GeoMethod::ClosedForm:
      return orient(-euler_curvature_closed_form(k), o);
    case GeoMethod::AnalyticN: {
      const Frame f = analytic_frame(k);
      return orient(f.u.dot(f.d2.cross(f.d1)), o);
    }
    case GeoMethod::FiniteDifference: {
      const Frame f = fd_frame(k, h);
      return orient(f.u.dot(f.d2.cross(f.d1)), o);
    }
  }
  return 0.0;
}

Metric quantum_metric(KPoint k, GeoMethod method, double h) {
  switch (method) {
    case GeoMethod::ClosedForm: return closed_form_metric(k);
    case GeoMethod::AnalyticN: return frame_metric(analytic_frame(k));
    case GeoMethod::FiniteDifference: return frame_metric(fd_frame(k, h));
  }
  return {};
}

Metric metric_from_projector(KPoint k, bool flat_pair, double h) {
  auto proj = [flat_pair](KPoint q) {
    const BandSolution b = band_solution(q, 0.0);
    if (!flat_pair) return Eigen::Matrix3d(b.vectors.col(2) * b.vectors.col(2).transpose());
    return Eigen::Matrix3d(b.vectors.leftCols(2) * b.vectors.leftCols(2).transpose());
  };
  const Eigen::Matrix3d P = proj(k);
  const Eigen::Matrix3d d1 = (proj({k.k1 + h, k.k2}) - proj({k.k1 - h, k.k2})) / (2.0 * h);
  const Eigen::Matrix3d d2 = (proj({k.k1, k.k2 + h}) - proj({k.k1, k.k2 - h})) / (2.0 * h);
  return {(P * d1 * d1).trace(), 0.5 * ((P * d1 * d2).trace() + (P * d2 * d1).trace()), (P * d2 * d2).trace()};
}

GeometryPoint geometry_point(KPoint k, GeoMethod method, Orientation o, double h) {
  GeometryPoint p;
  p.k = k;
  p.eu = euler_curvature(k, method, h, o);
  p.g = quantum_metric(k, method, h);
  p.det_g = std::max(0.0, p.g.det());
  p.tr_g = p.g.trace();
  return p;
}

double euler_class(int grid, Orientation o, GeoMethod method) {
  if (grid < 3) fail(ErrorCode::InvalidArgument, "euler_class needs grid >= 3");
  const auto ks = bz_midpoints(grid);
  double sum = 0.0;
  for (double k1 : ks) {
    double row = 0.0;
    for (double k2 : ks) row += euler_curvature({k1, k2}, method, kDefaultFdStep, o);
    sum += row;
  }
  const double dk = 2.0 * std::numbers::pi / grid;
  return sum * dk * dk / (2.0 * std::numbers::pi);
}

GeometrySummary bounds_report(int grid, GeoMethod method, Orientation o) {
  if (grid < 3) fail(ErrorCode::InvalidArgument, "bounds_report needs grid >= 3");
  const auto ks = bz_midpoints(grid);
  GeometrySummary s;
  s.grid = grid;
  s.min_trace_margin = std::numeric_limits<double>::infinity();
  double chi = 0.0, vol = 0.0;
  for (double k1 : ks) {
    double rc = 0.0, rv = 0.0;
    for (double k2 : ks) {
      const GeometryPoint p = geometry_point({k1, k2}, method, o);
      const double sq = std::sqrt(p.det_g);
      rc += p.eu;
      rv += sq;
      s.min_trace_margin = std::min(s.min_trace_margin, p.tr_g - 2.0 * std::abs(p.eu));
      s.max_ideal_violation = std::max(s.max_ideal_violation, std::abs(sq - std::abs(p.eu)));
    }
    chi += rc;
    vol += rv;
  }
  const double dA = std::pow(2.0 * std::numbers::pi / grid, 2);
  s.chi = chi * dA / (2.0 * std::numbers::pi);
  s.quantum_volume = vol * dA;
  return s;
}

Eigen::Matrix2d qfi_matrix(KPoint k) { return 4.0 * quantum_metric(k).matrix(); }

double qcr_bound(KPoint k, int M) {
  if (M < 1) fail(ErrorCode::InvalidArgument, "qcr_bound needs M >= 1");
  const double eu = std::abs(euler_curvature(k));
  if (eu < 1e-14)
    fail(ErrorCode::SingularBound, "Euler curvature vanishes at k=(" + std::to_string(k.k1) + "," +
                                       std::to_string(k.k2) + "); bound is singular");
  return 1.0 / (M * eu);
}

}  // namespace eulerpeps
