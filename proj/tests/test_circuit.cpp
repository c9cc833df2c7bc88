#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "eulerpeps/circuit.hpp"
#include "eulerpeps/entanglement.hpp"
#include "eulerpeps/error.hpp"
#include "eulerpeps/fock.hpp"

using namespace eulerpeps;
constexpr double kPi = std::numbers::pi;

namespace {

double max_abs(const SpMat& m) {
  double w = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) w = std::max(w, std::abs(it.value()));
  return w;
}

SparseState random_state(int n, int terms, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<SparseState::Term> t;
  for (int i = 0; i < terms; ++i) t.push_back({rng() & ((Bits(1) << n) - 1), cplx(g(rng), g(rng))});
  return SparseState::from_terms(n, t);
}

}  // namespace

TEST(Circuit, LayoutSigns) {
  const Lattice lat(2, 2, Boundary::Torus);
  const GateLayout g = gate_layout(lat);
  EXPECT_EQ(g.bonds.size(), 24u);
  for (const auto& b : g.bonds) EXPECT_EQ(b.sigma, b.pos < 3 ? 1 : -1);
}

TEST(Circuit, LayoutCheck) {
  for (auto [L1, L2] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{4, 3}}) {
    const Lattice lat(L1, L2, Boundary::Torus);
    const LayoutReport r = c2t_layout_check(lat, gate_layout(lat));
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.uncovered_bonds, 0);
    EXPECT_EQ(r.multiply_covered_bonds, 0);
  }
  const Lattice lat(3, 2, Boundary::Torus);
  GateLayout g = gate_layout(lat);
  g.bonds[4].sigma = -g.bonds[4].sigma;
  const LayoutReport bad = c2t_layout_check(lat, g);
  EXPECT_FALSE(bad.pass());
  EXPECT_EQ(bad.conjugation_violations, 1);
  GateLayout dup = gate_layout(lat);
  dup.bonds.push_back(dup.bonds.front());
  EXPECT_FALSE(c2t_layout_check(lat, dup).unique_ok);
}

TEST(Circuit, SingleBondPhase) {
  const Lattice lat(2, 2, Boundary::Torus);
  const GateLayout g = gate_layout(lat);
  const GateBond& b = g.bonds.front();
  ASSERT_EQ(b.sigma, 1);
  // Occupy only the two ends of this bond; no other bond is fully occupied.
  const Bits pattern = (Bits(1) << b.i) | (Bits(1) << b.j);
  int covered = 0;
  for (const auto& o : g.bonds) covered += ((pattern >> o.i) & 1) && ((pattern >> o.j) & 1);
  ASSERT_EQ(covered, 1);
  const SparseState out = apply_circuit(SparseState::basis(12, pattern), g, 0.7);
  EXPECT_LT(std::abs(out.amplitude(pattern) - std::polar(1.0, 0.7)), 1e-15);
}

TEST(Circuit, IdentityNormAndInverse) {
  const Lattice lat(3, 2, Boundary::Torus);
  std::mt19937_64 rng(8);
  const SparseState psi = random_state(18, 300, rng);
  const SparseState same = apply_circuit(psi, lat, 0.0);
  EXPECT_LT(same.plus(psi, -1.0).norm(), 1e-15);
  for (double a : {0.3, 2.0, 5.5}) {
    const SparseState u = apply_circuit(psi, lat, a);
    EXPECT_NEAR(u.norm(), psi.norm(), 1e-15 * psi.norm() * 10);
    const SparseState back = apply_circuit(u, lat, -a);
    for (size_t i = 0; i < psi.size(); ++i) EXPECT_LT(std::abs(back.terms()[i].second - psi.terms()[i].second), 1e-15 * 10);
    // Diagonal: supports and particle numbers are untouched.
    for (size_t i = 0; i < psi.size(); ++i) EXPECT_EQ(u.terms()[i].first, psi.terms()[i].first);
  }
}

TEST(Circuit, DressedCreationMatchesConjugation) {
  const Lattice lat(2, 2, Boundary::Torus);
  EXPECT_LE(max_abs(dressed_creation(lat, 0, 0.4) - conjugated_creation(lat, 0, 0.4)), 1e-12);
  for (int i = 0; i < 12; ++i) {
    const SpMat d = dressed_creation(lat, i, 1.3);
    EXPECT_LE(max_abs(d - conjugated_creation(lat, i, 1.3)), 1e-12);
    EXPECT_LE(max_abs(SpMat(d * d)), 1e-15);
    EXPECT_LE(max_abs(dressed_creation(lat, i, 0.0) - creation_matrix(12, i)), 0.0);
  }
}

TEST(Circuit, TransformedHamiltonianAtZeroAngle) {
  const Lattice lat(2, 2, Boundary::Torus);
  const ManyBodyOperator a = transformed_hamiltonian(lat, 0.0, 0.0, Representation::Full);
  const ManyBodyOperator b = many_body_hamiltonian(lat, 0.0, 0.0, Representation::Full);
  EXPECT_LE(max_abs(a.matrix - b.matrix), 0.0);
}

TEST(Circuit, TransformedHamiltonianIsConjugation) {
  // H′ = U H U† entrywise, with U assembled from the diagonal circuit phases.
  const Lattice lat(2, 2, Boundary::Torus);
  const GateLayout g = gate_layout(lat);
  const double a = 0.9;
  const ManyBodyOperator H = many_body_hamiltonian(lat, 0.1, 0.0, Representation::Full);
  const ManyBodyOperator Hp = transformed_hamiltonian(lat, 0.1, a, Representation::Full);
  SpMat conj = H.matrix;
  for (int k = 0; k < conj.outerSize(); ++k)
    for (SpMat::InnerIterator it(conj, k); it; ++it)
      it.valueRef() *= std::polar(1.0, a * (circuit_charge(g, it.row()) - circuit_charge(g, it.col())));
  EXPECT_LE(max_abs(conj - Hp.matrix), 1e-13);
}

TEST(Circuit, IsospectralityOverAngles) {
  const Lattice lat(2, 2, Boundary::Torus);
  const Eigen::VectorXd e0 = full_many_body_spectrum(lat, 0.0, 0.0);
  for (double a : {0.3, kPi / 2, kPi, 4.0, 5.9})
    EXPECT_LE((full_many_body_spectrum(lat, 0.0, a) - e0).cwiseAbs().maxCoeff(), 1e-9) << a;
}

TEST(Circuit, DressedGroundState) {
  const Lattice lat(2, 2, Boundary::Torus);
  const UniqueGroundReport r = verify_unique_ground_state(lat, 0.0, kPi / 2);
  EXPECT_EQ(r.degeneracy, 1);
  EXPECT_GE(r.fidelity, 1.0 - 1e-10);
}

TEST(Circuit, Locality) {
  // Every term of H′ acting on a basis state changes at most two modes, both
  // in one hexagon, and its dressing only reads NN neighbours of those modes.
  const Lattice lat(3, 2, Boundary::Torus);
  const ManyBodyModel m(lat, 0.0, 0.6);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const Bits b = rng() & ((Bits(1) << 18) - 1);
    m.apply(b, [&](Bits out, cplx) {
      const Bits diff = out ^ b;
      if (!diff) return;
      ASSERT_EQ(__builtin_popcountll(diff), 2);
      const int i = __builtin_ctzll(diff), j = 63 - __builtin_clzll(diff);
      bool same_hex = false;
      for (const auto& mi : lat.memberships(i))
        for (const auto& mj : lat.memberships(j)) same_hex = same_hex || mi.hex == mj.hex;
      EXPECT_TRUE(same_hex);
    });
  }
}

TEST(Circuit, CutInternalGatesPreserveSchmidtSpectrum) {
  const Lattice lat(2, 4, Boundary::Torus);
  const SparseState psi = build_ground_state(lat);
  const GateLayout inside = remove_cut_crossing(gate_layout(lat), lat, 1);
  EXPECT_LT(inside.bonds.size(), gate_layout(lat).bonds.size());
  const SchmidtSpectrum s0 = schmidt_es(psi, lat, 1, false);
  const SchmidtSpectrum s1 = schmidt_es(apply_circuit(psi, inside, 0.7), lat, 1, false);
  ASSERT_EQ(s0.levels.size(), s1.levels.size());
  std::vector<double> a, b;
  for (const auto& l : s0.levels) a.push_back(l.lambda);
  for (const auto& l : s1.levels) b.push_back(l.lambda);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  // Cut-crossing gates do change the spectrum.
  const SchmidtSpectrum s2 = schmidt_es(apply_circuit(psi, lat, 0.7), lat, 1, false);
  double diff = s2.levels.size() == s0.levels.size() ? 0.0 : 1.0;
  if (diff == 0.0) {
    std::vector<double> c;
    for (const auto& l : s2.levels) c.push_back(l.lambda);
    std::sort(c.begin(), c.end());
    for (size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - c[i]));
  }
  EXPECT_GT(diff, 1e-6);
}

TEST(Circuit, DenseSizeLimit) { EXPECT_THROW(dressed_creation(Lattice(3, 2, Boundary::Torus), 0, 0.1), Error); }
