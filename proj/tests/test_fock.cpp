#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "eulerpeps/circuit.hpp"
#include "eulerpeps/error.hpp"
#include "eulerpeps/fock.hpp"

using namespace eulerpeps;
constexpr double kPi = std::numbers::pi;

TEST(Fock, LadderSigns) {
  const SparseState s = SparseState::basis(4, 0b0011);  // modes 0 and 1 occupied
  const SparseState a0 = apply_ladder(s, 0, Ladder::Annihilate);
  ASSERT_EQ(a0.size(), 1u);
  EXPECT_EQ(a0.terms()[0].first, Bits(0b0010));
  EXPECT_EQ(a0.terms()[0].second, cplx(1.0));
  const SparseState a1 = apply_ladder(s, 1, Ladder::Annihilate);
  EXPECT_EQ(a1.terms()[0].first, Bits(0b0001));
  EXPECT_EQ(a1.terms()[0].second, cplx(-1.0));
  EXPECT_TRUE(apply_ladder(apply_ladder(SparseState::basis(4, 0b0100), 0, Ladder::Create), 0, Ladder::Create).empty());
}

TEST(Fock, CanonicalAnticommutationRelations) {
  // Operator identities on the full 2^n space, n = 6.
  const int n = 6;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<SparseState::Term> terms;
    for (Bits b = 0; b < (Bits(1) << n); ++b) terms.push_back({b, cplx(g(rng), g(rng))});
    const SparseState psi = SparseState::from_terms(n, terms);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const SparseState x = apply_ladder(apply_ladder(psi, j, Ladder::Create), i, Ladder::Annihilate)
                                  .plus(apply_ladder(apply_ladder(psi, i, Ladder::Annihilate), j, Ladder::Create));
        const SparseState expect = i == j ? psi : SparseState(n);
        EXPECT_LT(x.plus(expect, -1.0).norm(), 1e-12) << i << "," << j;
        const SparseState y = apply_ladder(apply_ladder(psi, j, Ladder::Annihilate), i, Ladder::Annihilate)
                                  .plus(apply_ladder(apply_ladder(psi, i, Ladder::Annihilate), j, Ladder::Annihilate));
        EXPECT_LT(y.norm(), 1e-12);
      }
  }
}

TEST(Fock, HexagonAnnihilatorOnFilledState) {
  const Lattice lat(2, 2, Boundary::Torus);
  const Bits full = (Bits(1) << 12) - 1;
  const HexOperator op = hex_operator(lat, 0);
  const SparseState r = hex_annihilate(SparseState::basis(12, full), op);
  ASSERT_EQ(r.size(), 6u);
  for (const auto& [b, a] : r.terms()) {
    EXPECT_NEAR(std::abs(a), 1.0 / std::sqrt(6.0), 1e-15);
    // Sign from the position of the hole in canonical order.
    const int hole = __builtin_ctzll(~b & full);
    EXPECT_NEAR(a.real(), (hole % 2 ? -1.0 : 1.0) / std::sqrt(6.0), 1e-15);
  }
  EXPECT_NEAR(r.norm(), 1.0, 1e-14);
  EXPECT_TRUE(hex_annihilate(r, op).empty());
}

TEST(Fock, Anticommutators) {
  const Lattice lat(3, 3, Boundary::Torus);
  int corner = 0, disjoint = 0;
  for (int a = 0; a < lat.num_hexagons(); ++a)
    for (int b = 0; b < lat.num_hexagons(); ++b) {
      const HexOperator A = hex_operator(lat, a), B = hex_operator(lat, b);
      int shared = 0;
      for (int s : A.sites) shared += std::count(B.sites.begin(), B.sites.end(), s);
      const cplx v = anticommutator(A, B);
      if (a == b) {
        EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-14);
      } else if (shared == 1) {
        // Corner sharing: one product of ±1/√6 coefficients.
        EXPECT_NEAR(std::abs(v), 1.0 / 6.0, 1e-14);
        ++corner;
      } else {
        EXPECT_EQ(shared, 0);
        EXPECT_NEAR(std::abs(v), 0.0, 1e-14);
        ++disjoint;
      }
    }
  EXPECT_EQ(corner, 9 * 6);  // six corner-sharing neighbours per hexagon
  EXPECT_GT(disjoint, 0);
}

TEST(Fock, AnticommutatorMatchesOperatorAction) {
  // {A, B†} evaluated on a random state equals the scalar from anticommutator().
  const Lattice lat(2, 2, Boundary::Torus);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<SparseState::Term> terms;
  for (int t = 0; t < 40; ++t) terms.push_back({rng() & 0xFFF, cplx(g(rng), g(rng))});
  const SparseState psi = SparseState::from_terms(12, terms);
  const HexOperator A = hex_operator(lat, 0), B = hex_operator(lat, 1);
  auto create = [&](const SparseState& s, const HexOperator& op) {
    SparseState out(12);
    for (int p = 0; p < 6; ++p) out = out.plus(apply_ladder(s, op.sites[p], Ladder::Create), std::conj(op.coef[p]));
    return out;
  };
  const SparseState lhs = hex_annihilate(create(psi, B), A).plus(create(hex_annihilate(psi, A), B));
  EXPECT_LT(lhs.plus(psi, -anticommutator(A, B)).norm(), 1e-13);
}

TEST(Fock, GroundStateProperties) {
  const Lattice lat(2, 2, Boundary::Torus);
  const SparseState psi = build_ground_state(lat);
  EXPECT_EQ(psi.particle_number(), 8);
  for (int h = 0; h < lat.num_hexagons(); ++h)
    EXPECT_LE(hex_annihilate(psi, hex_operator(lat, h)).norm() / psi.norm(), 1e-12);
  const SparseState other = build_ground_state(lat, std::nullopt, {3, 1, 0, 2});
  EXPECT_NEAR(fidelity(psi, other), 1.0, 1e-12);
  // Only a global sign may change.
  const cplx ov = psi.inner(other) / (psi.norm() * other.norm());
  EXPECT_NEAR(std::abs(ov.imag()), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ov.real()), 1.0, 1e-12);
}

TEST(Fock, RandomC2TBetaGroundStates) {
  const Lattice lat(3, 2, Boundary::Torus);
  std::mt19937_64 rng(99);
  for (int draw = 0; draw < 5; ++draw) {
    const Beta beta = random_c2t_beta(rng);
    const SparseState psi = build_ground_state(lat, beta);
    EXPECT_EQ(psi.particle_number(), 12);
    for (int h = 0; h < lat.num_hexagons(); ++h)
      EXPECT_LE(hex_annihilate(psi, hex_operator(lat, h, beta)).norm() / psi.norm(), 1e-12);
  }
}

TEST(Fock, SerialisationRoundTrip) {
  const SparseState psi = apply_circuit(build_ground_state(Lattice(2, 2, Boundary::Torus)),
                                        Lattice(2, 2, Boundary::Torus), 0.37);
  const SparseState back = parse_state(serialize_state(psi));
  ASSERT_EQ(back.size(), psi.size());
  for (size_t i = 0; i < psi.size(); ++i) {
    EXPECT_EQ(back.terms()[i].first, psi.terms()[i].first);
    EXPECT_EQ(back.terms()[i].second, psi.terms()[i].second);
  }
  EXPECT_THROW(parse_state("# modes 3\n9 1 0\n"), Error);
}

TEST(Fock, SectorBasis) {
  const auto b = sector_basis(6, 3);
  EXPECT_EQ(b.size(), 20u);
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
  for (Bits x : b) EXPECT_EQ(__builtin_popcountll(x), 3);
}

TEST(Fock, GroundEnergyAndUniqueness) {
  const Lattice lat(2, 2, Boundary::Torus);
  const UniqueGroundReport r = verify_unique_ground_state(lat, 0.0, 0.0);
  EXPECT_NEAR(r.ground_energy, -16.0, 1e-9);
  EXPECT_EQ(r.particles, 8);
  EXPECT_EQ(r.degeneracy, 1);
  EXPECT_GE(r.fidelity, 1.0 - 1e-10);
  EXPECT_NEAR(r.expected_energy, -16.0, 1e-12);
}

TEST(Fock, FiniteSizeGapOnTwoByTwo) {
  // The 2×2 momenta are {0, π}², where min ‖n‖² = 1, so the lowest dispersive
  // level is 2 and the gap is min(μ+2, 2−μ) rather than the bulk min(μ+2, 1−μ).
  const Lattice lat(2, 2, Boundary::Torus);
  for (double mu : {-1.0, 0.0, 0.5, 0.99}) {
    const UniqueGroundReport r = verify_unique_ground_state(lat, mu, 0.0);
    EXPECT_EQ(r.degeneracy, 1);
    EXPECT_NEAR(r.gap, std::min(mu + 2.0, 2.0 - mu), 1e-8) << mu;
  }
}

TEST(Fock, BulkGapOnThreeByThree) {
  // 3×3 contains k = ∓2π/3, where the bulk gap formula holds.
  const Lattice lat(3, 3, Boundary::Torus);
  HamiltonianOptions o;
  const Eigen::VectorXd e = single_particle_spectrum(build_hamiltonian(lat, o)).energies;
  EXPECT_NEAR(e(18), 1.0, 1e-9);
}

TEST(Fock, GroundSpaceDimension) {
  const Lattice lat(2, 2, Boundary::Torus);
  const GroundSpaceReport g = ground_space_dimension(lat, -2.0);
  EXPECT_EQ(g.dimension, 256);
  EXPECT_EQ(g.zero_modes, 8);
  EXPECT_EQ(g.ed_dimension, 256);
  std::vector<int> expect{0, 1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_EQ(g.fillings, expect);
  const GroundSpaceReport u = ground_space_dimension(lat, -1.0);
  EXPECT_EQ(u.dimension, 1);
  EXPECT_EQ(u.ed_dimension, 1);
}

TEST(Fock, NumberConservation) {
  const Lattice lat(2, 2, Boundary::Torus);
  for (double alpha : {0.0, 0.8}) {
    const ManyBodyModel m(lat, 0.3, alpha);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
      const Bits b = rng() & 0xFFF;
      m.apply(b, [&](Bits out, cplx) { EXPECT_EQ(__builtin_popcountll(out), __builtin_popcountll(b)); });
    }
  }
}

TEST(Fock, HamiltonianIsHermitian) {
  const Lattice lat(2, 2, Boundary::Torus);
  for (double alpha : {0.0, 1.1}) {
    const ManyBodyOperator op = many_body_hamiltonian(lat, 0.2, alpha, Representation::Full);
    const Eigen::MatrixXcd H(op.matrix);
    EXPECT_LT((H - H.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_EQ(op.matrix.rows(), 4096);
  }
}

TEST(Fock, EnergyVarianceOfConstructedState) {
  const Lattice lat(3, 2, Boundary::Torus);
  const SparseState psi = build_ground_state(lat);
  EXPECT_LE(energy_variance(lat, 0.0, 0.0, psi), 1e-10 * lat.num_sites());
  const SparseState dressed = apply_circuit(psi, lat, 0.9);
  EXPECT_LE(energy_variance(lat, 0.0, 0.9, dressed), 1e-10 * lat.num_sites());
  // A perturbed state is not an eigenstate.
  const SparseState bad = psi.plus(SparseState::basis(18, (Bits(1) << 12) - 1), 0.3);
  EXPECT_GT(energy_variance(lat, 0.0, 0.0, bad), 1e-3);
}

TEST(Fock, LanczosMatchesDenseSolve) {
  const Lattice lat(3, 2, Boundary::Torus);
  const ManyBodyOperator op = many_body_hamiltonian(lat, 0.0, 0.4, Representation::FixedNumber, 3);
  ASSERT_EQ(op.matrix.rows(), 816);
  const EigenResult lz = lowest_eigenpairs(op.matrix, 3, true, 100);
  const EigenResult dn = lowest_eigenpairs(op.matrix, 3, true, 1 << 30);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(lz.values(i), dn.values(i), 1e-8);
  const Eigen::VectorXcd v = lz.vectors.col(0);
  EXPECT_LT((op.matrix * v - lz.values(0) * v).norm(), 1e-6);
}

TEST(Fock, SizeLimits) {
  EXPECT_THROW(full_many_body_spectrum(Lattice(3, 2, Boundary::Torus), 0.0, 0.0), Error);
}
