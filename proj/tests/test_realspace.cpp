#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "eulerpeps/bloch.hpp"
#include "eulerpeps/error.hpp"
#include "eulerpeps/geometry.hpp"
#include "eulerpeps/realspace.hpp"

using namespace eulerpeps;
constexpr double kPi = std::numbers::pi;

namespace {

Eigen::VectorXd spectrum(const Lattice& lat, HamiltonianOptions o = {}) {
  return single_particle_spectrum(build_hamiltonian(lat, o)).energies;
}

}  // namespace

TEST(RealSpace, FlatMultiplicityOnSmallTorus) {
  const Eigen::VectorXd e = spectrum(Lattice(2, 2, Boundary::Torus));
  int flat = 0;
  for (int i = 0; i < e.size(); ++i) flat += std::abs(e(i) + 2.0) < 1e-9;
  EXPECT_EQ(flat, 8);
}

TEST(RealSpace, ProjectorFormAtMuMinusTwo) {
  for (auto [L1, L2] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 3}, std::pair{4, 5}}) {
    const Lattice lat(L1, L2, Boundary::Torus);
    HamiltonianOptions o;
    o.mu = -2.0;
    const Eigen::MatrixXcd H = build_hamiltonian(lat, o).H;
    EXPECT_LT((H - hexagon_projector_sum(lat, default_beta())).cwiseAbs().maxCoeff(), 1e-12) << L1 << "x" << L2;
  }
}

TEST(RealSpace, SpectrumOnThreeByTwo) {
  const Eigen::VectorXd e = spectrum(Lattice(3, 2, Boundary::Torus));
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(e(i), -2.0, 1e-9);
  for (int i = 12; i < e.size(); ++i) EXPECT_GE(e(i), 1.0 - 1e-9);
  HamiltonianOptions o;
  o.mu = -2.0;
  const auto h = build_hamiltonian(Lattice(3, 2, Boundary::Torus), o);
  const Eigen::VectorXd f = single_particle_spectrum(h).energies;
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(f(i), 0.0, 1e-9);
  for (int i = 12; i < f.size(); ++i) EXPECT_GE(f(i), 3.0 - 1e-9);
  EXPECT_NEAR(f.sum(), h.H.trace().real(), 1e-9);
}

TEST(RealSpace, TwistPeriodicity) {
  const Lattice lat(3, 3, Boundary::Torus);
  for (TwistGauge g : {TwistGauge::Boundary, TwistGauge::Distributed}) {
    HamiltonianOptions a, b;
    a.gauge = b.gauge = g;
    b.theta1 = 2 * kPi;
    EXPECT_LT((spectrum(lat, a) - spectrum(lat, b)).cwiseAbs().maxCoeff(), 1e-9);
    // Continuity: small twist, small change.
    HamiltonianOptions c = a;
    c.theta1 = 1e-3;
    EXPECT_LT((spectrum(lat, a) - spectrum(lat, c)).cwiseAbs().maxCoeff(), 1e-2);
  }
}

TEST(RealSpace, GaugesShareSpectrum) {
  const Lattice lat(3, 4, Boundary::Torus);
  HamiltonianOptions a, b;
  a.theta1 = b.theta1 = 0.7;
  a.theta2 = b.theta2 = -1.3;
  b.gauge = TwistGauge::Distributed;
  EXPECT_LT((spectrum(lat, a) - spectrum(lat, b)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(RealSpace, FlatBandsIgnoreTwist) {
  const Lattice lat(4, 4, Boundary::Torus);
  for (double t : {0.3, 1.1, 2.9}) {
    HamiltonianOptions o;
    o.theta1 = t;
    o.theta2 = -0.5 * t;
    const Eigen::VectorXd e = spectrum(lat, o);
    for (int i = 0; i < 32; ++i) EXPECT_NEAR(e(i), -2.0, 1e-9);
  }
}

TEST(RealSpace, BetaNormalisationEnforced) {
  Beta b = default_beta();
  b[0] *= 2.0;
  HamiltonianOptions o;
  o.beta = b;
  try {
    build_hamiltonian(Lattice(2, 2, Boundary::Torus), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Normalization);
  }
}

TEST(RealSpace, NonC2TBetaWarns) {
  Beta b = default_beta();
  b[0] = std::polar(std::abs(b[0]), 0.4);
  HamiltonianOptions o;
  o.beta = b;
  const auto h = build_hamiltonian(Lattice(2, 2, Boundary::Torus), o);
  EXPECT_FALSE(h.warnings.empty());
  EXPECT_GT(c2t_residual(b), 1e-3);
  EXPECT_LT(c2t_residual(default_beta()), 1e-14);
}

TEST(RealSpace, BetaInterpolationStaysGapped) {
  std::mt19937_64 rng(17);
  const Lattice lat(3, 3, Boundary::Torus);
  for (int draw = 0; draw < 3; ++draw) {
    const Beta target = random_c2t_beta(rng);
    EXPECT_LT(c2t_residual(target), 1e-12);
    for (int s = 0; s <= 9; ++s) {
      const double t = s / 9.0;
      Beta b;
      double n = 0.0;
      for (int p = 0; p < 6; ++p) {
        b[p] = (1 - t) * default_beta()[p] + t * target[p];
        n += std::norm(b[p]);
      }
      for (auto& x : b) x /= std::sqrt(n);
      EXPECT_GT(beta_gap(lat, b), 1e-6) << "draw " << draw << " step " << s;
    }
  }
}

TEST(RealSpace, CylinderTorusLimitMatchesBloch) {
  const Lattice lat(4, 3, Boundary::Torus);
  const CylinderSpectrum cs = cylinder_spectrum(lat, 0.0);
  std::vector<double> all;
  for (const auto& v : cs.levels) all.insert(all.end(), v.data(), v.data() + v.size());
  std::sort(all.begin(), all.end());
  const Eigen::VectorXd e = spectrum(lat);
  ASSERT_EQ(all.size(), static_cast<size_t>(e.size()));
  for (size_t i = 0; i < all.size(); ++i) EXPECT_NEAR(all[i], e(i), 1e-9);
}

TEST(RealSpace, CylinderUnionEqualsFullOpenSpectrum) {
  const Lattice lat(5, 4, Boundary::CylinderOpenA1);
  const CylinderSpectrum cs = cylinder_spectrum(lat, -1.0);
  std::vector<double> all;
  for (const auto& v : cs.levels) all.insert(all.end(), v.data(), v.data() + v.size());
  std::sort(all.begin(), all.end());
  HamiltonianOptions o;
  o.mu = -1.0;
  const Eigen::VectorXd e = spectrum(lat, o);
  ASSERT_EQ(all.size(), static_cast<size_t>(e.size()));
  for (size_t i = 0; i < all.size(); ++i) EXPECT_NEAR(all[i], e(i), 1e-9);
}

TEST(RealSpace, CylinderEdgeSpectrum) {
  const Lattice lat(40, 12, Boundary::CylinderOpenA1);
  const SpectralFlowReport r = spectral_flow_report(cylinder_spectrum(lat, -1.0));
  EXPECT_NEAR(r.flat_energy, -1.0, 1e-15);
  EXPECT_EQ(r.min_flat_count, 2 * 40 - 1);
  EXPECT_LE(r.max_flat_deviation, 1e-9);
  EXPECT_TRUE(r.free_line_found);
  EXPECT_GT(r.free_line_clearance, 1e-6);
  EXPECT_GT(r.free_line, r.window_lo);
  EXPECT_LT(r.free_line, r.window_hi);
}

TEST(RealSpace, ManyBodyMetric) {
  const Lattice lat(6, 6, Boundary::Torus);
  const ManyBodyMetricResult m = many_body_metric(lat, 0.0, 1e-3);
  // Independent Bloch-side average of tr g on the 6×6 momentum grid.
  double avg = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) avg += quantum_metric({2 * kPi * a / 6, 2 * kPi * b / 6}).trace();
  avg /= 36.0;
  EXPECT_NEAR(m.rhs, avg, 1e-12);
  EXPECT_NEAR(m.trace, avg, 1e-4);
  EXPECT_NEAR(m.bound, 4 * kPi * (std::sqrt(3.0) / 2) / 36.0, 1e-12);
  EXPECT_GT(m.trace, m.bound);
  EXPECT_TRUE(m.trace_identity_ok);
  EXPECT_TRUE(m.bound_strict);
  EXPECT_GT(m.min_gap, 0.5);
}
