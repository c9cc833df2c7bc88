#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "eulerpeps/fock.hpp"
#include "eulerpeps/lattice.hpp"

namespace eulerpeps {

enum class WVariant { D2, D6 };

// A[s](left, right) with s the virtual occupation; Q closes the ring.
struct WTensor {
  WVariant variant = WVariant::D2;
  int D = 2;
  std::array<Eigen::MatrixXd, 2> A;
  Eigen::MatrixXd Q;
};

WTensor w_tensor(WVariant v);

// Amplitudes of the six-mode ring state indexed by pattern (bit i = mode i+1).
std::array<double, 64> contract_w_ring(WVariant v);
// (1/√6) Σ_i c_i |111111⟩ built with fermionic ladder operators.
std::array<double, 64> simplex_state_amplitudes();

// M[i][a][b]: i physical, a the c′ (left) virtual occupation, b the c (right) one.
struct MapTensor {
  double m[2][2][2] = {};
  int nonzeros() const;
};

MapTensor default_map_tensor();

// Dense rank-5 tensor, index order [physical, up, left, down, right].
struct Tensor5 {
  int dp = 2;
  int D = 2;
  std::vector<cplx> data;

  Tensor5() = default;
  Tensor5(int dp_, int D_) : dp(dp_), D(D_), data(static_cast<size_t>(dp_) * D_ * D_ * D_ * D_) {}
  size_t offset(int i, int u, int l, int d, int r) const {
    return (((static_cast<size_t>(i) * D + u) * D + l) * D + d) * D + r;
  }
  cplx& operator()(int i, int u, int l, int d, int r) { return data[offset(i, u, l, d, r)]; }
  cplx operator()(int i, int u, int l, int d, int r) const { return data[offset(i, u, l, d, r)]; }
  int nonzeros(double tol = 0.0) const;
};

// T^i_{uldr} = Σ_ab M^i_ab A^a_lr A^b_ud
Tensor5 assemble_site_tensor(WVariant v, const MapTensor& M = default_map_tensor());
// Grading: physical index counted as a hole (1 − i), bond index 2 odd. D2 only.
bool site_tensor_parity_even(const Tensor5& T);

struct RTensorPair {
  double alpha = 0.0;
  int branch = 1;  // +1 for e^{+iα}, −1 for e^{−iα}
  cplx R[2][2][2] = {};  // R[q][a][b]
};

RTensorPair build_r_pair(double alpha, int branch);
// max_{abcd} |Σ_q R_q^{ab} R_q^{cd} − u^{ab,cd}| against the diagonal gate.
double r_pair_residual(const RTensorPair& r);

// σ of the hexagon edges met by the up, left, down, right legs of a site.
std::array<int, 4> leg_branches(Sublattice s);

// Bond dimension 2D; combined leg index is q·D + v.
Tensor5 assemble_interacting_tensor(const Tensor5& T, double alpha, Sublattice s);

// Operator-formalism evaluation: enumerate one hole per hexagon, map pairs of
// virtual fermions through M̂_j = a_j† c_j′ c_j + c_j′ − c_j and project onto
// the virtual vacuum. Virtual modes (hexagon, position) sit below all
// physical modes in the global order.
SparseState evaluate_peps_state(const Lattice& lat, const std::vector<Beta>& per_hex = {},
                                const MapTensor& M = default_map_tensor(), const std::vector<int>& order = {});
SparseState evaluate_peps_state(const Lattice& lat, const Beta& beta);

nlohmann::json tensor_to_json(const Tensor5& T);

}  // namespace eulerpeps
