#pragma once

#include <vector>

#include <Eigen/Core>

#include "eulerpeps/circuit.hpp"
#include "eulerpeps/fock.hpp"
#include "eulerpeps/lattice.hpp"

namespace eulerpeps {

struct CorrelationModes {
  int L1 = 0;
  int L2 = 0;
  int cut = 0;
  std::vector<int> k2_index;            // m2, with k2 = 2π m2 / L2
  std::vector<Eigen::VectorXd> lambda;  // ascending, one vector per sector
};

// Reduced one-body correlation spectrum of the filled flat bands on the
// first `cut` cell columns, resolved by transverse momentum.
CorrelationModes correlation_spectrum(int L1, int L2, int cut);

struct ESLevel {
  int K = 0;         // many-body momentum index m, K = 2πm/L2 mapped to (−π, π]
  double Kval = 0.0;
  int channel = 0;   // subsystem particle number relative to the reference
  double eps = 0.0;
};

struct FreeESOptions {
  double eps_max = 12.0;
  double clamp = 1e-12;
  size_t max_levels = 1000000;
};

std::vector<ESLevel> free_many_body_es(const CorrelationModes& modes, const FreeESOptions& opts = {});
double correlation_entropy(const CorrelationModes& modes);

struct SchmidtLevel {
  int K = 0;  // translation eigenvalue index, or 0 without momentum resolution
  double Kval = 0.0;
  int channel = 0;  // N_A − 2 n_A / 3
  double lambda = 0.0;
  double eps = 0.0;  // −ln λ shifted so the minimum is 0
};

struct SchmidtSpectrum {
  bool momentum = false;
  int L2 = 0;
  std::vector<SchmidtLevel> levels;  // sorted by (K, eps)
  double total() const;
  double entropy() const;
};

// Schmidt spectrum across the cut after the first `cut` cell columns. With
// use_momentum the reduced density matrix is block-diagonalised under the a2
// translation of subsystem A (including fermionic reordering signs).
SchmidtSpectrum schmidt_es(const SparseState& state, const Lattice& lat, int cut, bool use_momentum,
                           double lambda_floor = 1e-14);

struct CuspReport {
  bool present = false;
  double k0_min = 0.0;
  double neighbour_min = 0.0;
  int neighbour_K = 0;
  double margin = 0.0;  // neighbour_min − k0_min
};

// levels: (K index, ε). Compares K = 0 with the nearest nonzero |K| present.
CuspReport cusp_report(const std::vector<std::pair<int, double>>& levels, int L2, double tol = 1e-9);
CuspReport cusp_report(const std::vector<ESLevel>& levels, int L2, double tol = 1e-9);
CuspReport cusp_report(const SchmidtSpectrum& s, double tol = 1e-9);

// Copy of the layout without the gates that straddle the cut.
GateLayout remove_cut_crossing(const GateLayout& layout, const Lattice& lat, int cut);

}  // namespace eulerpeps
