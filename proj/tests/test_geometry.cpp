#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "eulerpeps/error.hpp"
#include "eulerpeps/geometry.hpp"

using namespace eulerpeps;
constexpr double kPi = std::numbers::pi;

TEST(Geometry, CurvatureVanishesAtGamma) {
  for (auto m : {GeoMethod::AnalyticN, GeoMethod::FiniteDifference, GeoMethod::ClosedForm})
    EXPECT_NEAR(euler_curvature({0, 0}, m), 0.0, 1e-8);
}

TEST(Geometry, CurvatureAtCorner) {
  // Printed closed form: (−3 − 1 − 1 + 1)/(4√2·2^{3/2}) = −1/4, which is the
  // (∂k1 × ∂k2) orientation; the default (∂k2 × ∂k1) gives +1/4.
  EXPECT_NEAR(euler_curvature_closed_form({kPi, kPi}), -0.25, 1e-15);
  for (auto m : {GeoMethod::AnalyticN, GeoMethod::FiniteDifference, GeoMethod::ClosedForm}) {
    EXPECT_NEAR(euler_curvature({kPi, kPi}, m, 1e-4, Orientation::K1xK2), -0.25, 1e-8);
    EXPECT_NEAR(euler_curvature({kPi, kPi}, m, 1e-4, Orientation::K2xK1), 0.25, 1e-8);
  }
}

TEST(Geometry, CurvatureIsPeriodic) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int t = 0; t < 100; ++t) {
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(euler_curvature({a + 2 * kPi, b}), euler_curvature({a, b}), 1e-12);
    EXPECT_NEAR(euler_curvature({a, b + 2 * kPi}), euler_curvature({a, b}), 1e-12);
  }
}

TEST(Geometry, MethodsAgree) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int t = 0; t < 500; ++t) {
    const KPoint k{u(rng), u(rng)};
    const double a = euler_curvature(k, GeoMethod::AnalyticN);
    EXPECT_NEAR(euler_curvature(k, GeoMethod::ClosedForm), a, 1e-12);
    EXPECT_NEAR(euler_curvature(k, GeoMethod::FiniteDifference, 1e-4), a, 1e-7);
    const Metric ga = quantum_metric(k, GeoMethod::AnalyticN), gc = quantum_metric(k, GeoMethod::ClosedForm);
    EXPECT_NEAR(ga.g11, gc.g11, 1e-12);
    EXPECT_NEAR(ga.g12, gc.g12, 1e-12);
    EXPECT_NEAR(ga.g22, gc.g22, 1e-12);
  }
}

TEST(Geometry, FiniteDifferenceStepRange) {
  EXPECT_THROW(euler_curvature({0.1, 0.2}, GeoMethod::FiniteDifference, 1e-8), Error);
  EXPECT_THROW(euler_curvature({0.1, 0.2}, GeoMethod::FiniteDifference, 1e-2), Error);
}

TEST(Geometry, IntegrandSignIsUniform) {
  for (double k1 : bz_midpoints(201))
    for (double k2 : bz_midpoints(201)) EXPECT_LE(euler_curvature_closed_form({k1, k2}), 0.0);
}

TEST(Geometry, EulerClassAndOrientation) {
  const double chi = euler_class(401);
  EXPECT_NEAR(std::abs(chi), 1.0, 1e-4);
  EXPECT_NEAR(chi, 1.0, 1e-4);
  EXPECT_NEAR(euler_class(401, Orientation::K1xK2), -chi, 1e-12);
}

TEST(Geometry, EulerClassConvergence) {
  const double c101 = euler_class(101), c201 = euler_class(201), c401 = euler_class(401);
  const double d1 = std::abs(c101 - c201), d2 = std::abs(c201 - c401);
  // Periodic smooth integrand: spectral convergence puts both at roundoff.
  EXPECT_TRUE(d2 * 3.0 <= d1 || (d1 <= 1e-12 && d2 <= 1e-12)) << d1 << " " << d2;
}

TEST(Geometry, MetricClosedFormValues) {
  const Metric a = quantum_metric({kPi, kPi}, GeoMethod::ClosedForm);
  EXPECT_NEAR(a.g11, 0.25, 1e-15);
  const Metric b = quantum_metric({0, 0}, GeoMethod::ClosedForm);
  EXPECT_NEAR(b.g12, 0.0, 1e-15);
}

TEST(Geometry, IdealConditionAtRandomPoints) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int t = 0; t < 10000; ++t) {
    const KPoint k{u(rng), u(rng)};
    const Metric g = quantum_metric(k, GeoMethod::ClosedForm);
    const double eu = euler_curvature(k, GeoMethod::ClosedForm);
    ASSERT_NEAR(g.det(), eu * eu, 1e-10);
    ASSERT_GE(g.trace() - 2.0 * std::sqrt(std::max(0.0, g.det())), -1e-12);
  }
}

TEST(Geometry, FlatPairAndDispersiveProjectorsShareMetric) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int t = 0; t < 50; ++t) {
    const KPoint k{u(rng), u(rng)};
    const Metric q = metric_from_projector(k, false), p = metric_from_projector(k, true);
    EXPECT_NEAR(q.g11, p.g11, 1e-8);
    EXPECT_NEAR(q.g12, p.g12, 1e-8);
    EXPECT_NEAR(q.g22, p.g22, 1e-8);
    const Metric a = quantum_metric(k);
    EXPECT_NEAR(q.g11, a.g11, 1e-7);
    EXPECT_NEAR(q.g22, a.g22, 1e-7);
  }
}

TEST(Geometry, BoundsReport) {
  const GeometrySummary s = bounds_report(401);
  EXPECT_NEAR(s.quantum_volume, 2.0 * kPi, 1e-3);
  EXPECT_GE(s.min_trace_margin, -1e-12);
  EXPECT_LE(s.max_ideal_violation, 1e-10);
  EXPECT_NEAR(std::abs(s.chi), 1.0, 1e-4);
}

TEST(Geometry, QuantumFisherInformation) {
  EXPECT_NEAR(qfi_matrix({kPi, kPi})(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(qfi_matrix({0, 0})(0, 1), 0.0, 1e-12);
  // Oracle: fidelity susceptibility 1 − |⟨n̂(k)|n̂(k+δ)⟩|² ≈ ¼ δᵀFδ.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const double d = 1e-4;
  for (int t = 0; t < 50; ++t) {
    const KPoint k{u(rng), u(rng)};
    const Eigen::Matrix2d F = qfi_matrix(k);
    // Averaging ±δ removes the odd-order terms of the expansion.
    auto chi = [&](double a, double b) {
      const double op = n_hat(k).dot(n_hat({k.k1 + a, k.k2 + b}));
      const double om = n_hat(k).dot(n_hat({k.k1 - a, k.k2 - b}));
      return 2.0 * (2.0 - op * op - om * om) / (d * d);
    };
    const double f11 = chi(d, 0), f22 = chi(0, d), fpp = chi(d, d);
    EXPECT_NEAR(F(0, 0), f11, 1e-6 * std::max(1.0, f11) + 1e-6);
    EXPECT_NEAR(F(1, 1), f22, 1e-6 * std::max(1.0, f22) + 1e-6);
    EXPECT_NEAR(F(0, 1), 0.5 * (fpp - f11 - f22), 1e-6 * std::max(1.0, fpp) + 1e-6);
  }
}

TEST(Geometry, CramerRaoBound) {
  EXPECT_NEAR(qcr_bound({kPi, kPi}, 1), 4.0, 1e-12);
  EXPECT_NEAR(qcr_bound({kPi, kPi}, 4), 1.0, 1e-12);
  try {
    qcr_bound({0, 0}, 3);
    FAIL() << "expected singular bound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularBound);
  }
}
