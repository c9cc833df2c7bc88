#pragma once

#include <vector>

#include <Eigen/Core>

namespace eulerpeps {

struct KPoint {
  double k1 = 0.0;
  double k2 = 0.0;
};

struct BandSolution {
  Eigen::Vector3d energies;  // ascending
  Eigen::Matrix3d vectors;   // columns, real orthonormal; column 2 is +n̂
};

Eigen::Matrix3d bloch_hamiltonian(KPoint k, double mu);
Eigen::Matrix3d bloch_hamiltonian_rank1(KPoint k, double mu);  // (−μ−2)·I + 4 n nᵀ
Eigen::Vector3d n_vector(KPoint k);
Eigen::Vector3d n_hat(KPoint k);
BandSolution band_solution(KPoint k, double mu);

// Projector on the two flat bands, I − n̂ n̂ᵀ.
Eigen::Matrix3d flat_projector(KPoint k);

// Lattice momenta 2πm/grid mapped to (−π, π].
std::vector<double> bz_lattice_points(int grid);
// Midpoints −π + 2π(m + 1/2)/grid of the half-open partition.
std::vector<double> bz_midpoints(int grid);

// Minimum of E3 − E1 = 4‖n‖² over the lattice points.
double spectral_gap(int grid);

}  // namespace eulerpeps
