#pragma once

#include <Eigen/Core>

#include "eulerpeps/bloch.hpp"

namespace eulerpeps {

enum class GeoMethod { AnalyticN, FiniteDifference, ClosedForm };

// K2xK1: Eu = n̂·(∂k2 n̂ × ∂k1 n̂). K1xK2 is the opposite orientation and is
// the one the printed closed form corresponds to.
enum class Orientation { K2xK1, K1xK2 };

struct Metric {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;
  double det() const { return g11 * g22 - g12 * g12; }
  double trace() const { return g11 + g22; }
  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << g11, g12, g12, g22;
    return m;
  }
};

struct GeometryPoint {
  KPoint k;
  double eu = 0.0;
  Metric g;
  double det_g = 0.0;
  double tr_g = 0.0;
};

struct GeometrySummary {
  double chi = 0.0;
  double quantum_volume = 0.0;
  double min_trace_margin = 0.0;     // min over grid of tr g − 2|Eu|
  double max_ideal_violation = 0.0;  // max over grid of |√det g − |Eu||
  int grid = 0;
};

constexpr double kDefaultFdStep = 1e-4;

double euler_curvature(KPoint k, GeoMethod method = GeoMethod::AnalyticN, double h = kDefaultFdStep,
                       Orientation o = Orientation::K2xK1);
// The printed closed-form expression, without any orientation sign.
double euler_curvature_closed_form(KPoint k);

Metric quantum_metric(KPoint k, GeoMethod method = GeoMethod::AnalyticN, double h = kDefaultFdStep);

// Metric of the dispersive band from Tr[Q ∂Q ∂Q] or of the flat pair from
// Tr[P ∂P ∂P], with projectors taken from band_solution and differentiated
// numerically.
Metric metric_from_projector(KPoint k, bool flat_pair, double h = 1e-5);

GeometryPoint geometry_point(KPoint k, GeoMethod method = GeoMethod::AnalyticN,
                             Orientation o = Orientation::K2xK1, double h = kDefaultFdStep);

double euler_class(int grid, Orientation o = Orientation::K2xK1, GeoMethod method = GeoMethod::AnalyticN);
GeometrySummary bounds_report(int grid, GeoMethod method = GeoMethod::ClosedForm,
                              Orientation o = Orientation::K2xK1);

Eigen::Matrix2d qfi_matrix(KPoint k);
double qcr_bound(KPoint k, int M);

}  // namespace eulerpeps
