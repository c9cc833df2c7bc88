#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "eulerpeps/error.hpp"
#include "eulerpeps/fock.hpp"
#include "eulerpeps/peps.hpp"

using namespace eulerpeps;
constexpr double kPi = std::numbers::pi;

TEST(Peps, RingMatchesSimplexState) {
  const auto ref = simplex_state_amplitudes();
  const double s6 = 1.0 / std::sqrt(6.0);
  for (int b = 0; b < 64; ++b) {
    if (__builtin_popcount(b) == 5) {
      const int hole = __builtin_ctz(~b & 63);
      EXPECT_NEAR(ref[b], (hole % 2 ? -s6 : s6), 1e-15) << b;
    } else {
      EXPECT_EQ(ref[b], 0.0);
    }
  }
  for (auto v : {WVariant::D2, WVariant::D6}) {
    const auto amp = contract_w_ring(v);
    for (int b = 0; b < 64; ++b) EXPECT_NEAR(amp[b], ref[b], 1e-15) << b;
  }
}

TEST(Peps, RingTensorsCompose) {
  // Summing the ring over all 64 patterns expands tr((A⁰ + A¹)⁶ Q).
  const WTensor w = w_tensor(WVariant::D2);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(2, 2);
  for (int i = 0; i < 6; ++i) acc = acc * (w.A[0] + w.A[1]);
  const auto amp = contract_w_ring(WVariant::D2);
  double sum = 0.0;
  for (double a : amp) sum += a;
  EXPECT_NEAR((acc * w.Q).trace(), sum, 1e-14);
}

TEST(Peps, SiteTensor) {
  const Tensor5 T = assemble_site_tensor(WVariant::D2);
  EXPECT_EQ(T.D, 2);
  EXPECT_TRUE(site_tensor_parity_even(T));
  EXPECT_EQ(default_map_tensor().nonzeros(), 3);
  // Hand evaluation: M111 A¹_lr A¹_ud with A¹ = diag(1, −1).
  EXPECT_EQ(T(1, 0, 0, 0, 0), cplx(1.0));
  EXPECT_EQ(T(1, 1, 1, 1, 1), cplx(1.0));
  EXPECT_EQ(T(1, 1, 0, 1, 0), cplx(-1.0));
  EXPECT_THROW(site_tensor_parity_even(assemble_site_tensor(WVariant::D6)), Error);
}

TEST(Peps, RPairFactorisesGate) {
  for (double a : {0.0, 0.3, kPi / 2, kPi, 5.0})
    for (int br : {1, -1}) EXPECT_LT(r_pair_residual(build_r_pair(a, br)), 1e-15);
  RTensorPair bad = build_r_pair(0.7, 1);
  bad.branch = -1;
  EXPECT_GT(r_pair_residual(bad), 0.1);
}

TEST(Peps, InteractingTensor) {
  const Tensor5 T = assemble_site_tensor(WVariant::D2);
  for (auto s : {Sublattice::A, Sublattice::B, Sublattice::C}) {
    const Tensor5 Tp = assemble_interacting_tensor(T, 0.3, s);
    EXPECT_EQ(Tp.D, 4);
    const auto br = leg_branches(s);
    // Empty site: only q = 0 on every leg contributes.
    for (int u = 0; u < 4; ++u)
      for (int r = 0; r < 4; ++r)
        if (u >= 2 || r >= 2) EXPECT_EQ(Tp(0, u, 0, 0, r), cplx(0.0));
    // Occupied site, all q = 1: product of the four √(e^{±iα} − 1) factors.
    cplx expect = T(1, 0, 0, 0, 0);
    for (int k = 0; k < 4; ++k) expect *= std::sqrt(-1.0 + std::polar(1.0, br[k] * 0.3));
    EXPECT_LT(std::abs(Tp(1, 2, 2, 2, 2) - expect), 1e-15);
    const Tensor5 T0 = assemble_interacting_tensor(T, 0.0, s);
    EXPECT_EQ(T0.nonzeros(1e-15), T.nonzeros());
  }
}

TEST(Peps, MatchesHexagonConstruction) {
  for (auto [L1, L2] : {std::pair{2, 2}, std::pair{3, 2}}) {
    const Lattice lat(L1, L2, Boundary::Torus);
    const SparseState peps = evaluate_peps_state(lat);
    const SparseState ref = build_ground_state(lat);
    EXPECT_EQ(peps.particle_number(), 2 * lat.num_hexagons());
    EXPECT_GE(fidelity(peps, ref), 1.0 - 1e-12);
  }
}

TEST(Peps, OrderIndependence) {
  const Lattice lat(2, 2, Boundary::Torus);
  const SparseState a = evaluate_peps_state(lat, {}, default_map_tensor(), {0, 1, 2, 3});
  const SparseState b = evaluate_peps_state(lat, {}, default_map_tensor(), {2, 0, 3, 1});
  EXPECT_GE(fidelity(a, b), 1.0 - 1e-12);
}

TEST(Peps, GeneralBeta) {
  const Lattice lat(2, 2, Boundary::Torus);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 3; ++t) {
    const Beta beta = random_c2t_beta(rng);
    EXPECT_GE(fidelity(evaluate_peps_state(lat, beta), build_ground_state(lat, beta)), 1.0 - 1e-12);
  }
  // Linear in each hexagon's coefficients.
  Beta b1 = default_beta(), b2 = default_beta();
  b2[2] *= -1.0;
  std::vector<Beta> p1(4, default_beta()), p2(4, default_beta()), ps(4, default_beta());
  p1[0] = b1;
  p2[0] = b2;
  for (int i = 0; i < 6; ++i) ps[0][i] = b1[i] + 2.0 * b2[i];
  const SparseState lhs = evaluate_peps_state(lat, ps);
  const SparseState rhs = evaluate_peps_state(lat, p1).plus(evaluate_peps_state(lat, p2), 2.0);
  EXPECT_LT(lhs.plus(rhs, -1.0).norm(), 1e-12);
}

TEST(Peps, MapTensorSignMatters) {
  const Lattice lat(2, 2, Boundary::Torus);
  MapTensor M = default_map_tensor();
  M.m[0][0][1] = -M.m[0][0][1];
  EXPECT_LT(fidelity(evaluate_peps_state(lat, {}, M), build_ground_state(lat)), 0.999);
}

TEST(Peps, Preconditions) {
  EXPECT_THROW(evaluate_peps_state(Lattice(2, 2, Boundary::CylinderOpenA1)), Error);
  EXPECT_THROW(evaluate_peps_state(Lattice(4, 4, Boundary::Torus)), Error);
}

TEST(Peps, TensorJson) {
  const auto j = tensor_to_json(assemble_site_tensor(WVariant::D2));
  EXPECT_EQ(j.at("shape"), nlohmann::json({2, 2, 2, 2, 2}));
  EXPECT_EQ(j.at("real")[1][0][0][0][0].get<double>(), 1.0);
}
