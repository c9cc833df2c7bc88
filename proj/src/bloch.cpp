#include "eulerpeps/bloch.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "eulerpeps/error.hpp"

namespace eulerpeps {

using std::cos;

Eigen::Matrix3d bloch_hamiltonian(KPoint k, double mu) {
  const double k1 = k.k1, k2 = k.k2;
  Eigen::Matrix3d H;
  H(0, 0) = -mu + 2.0 * cos(k1);
  H(1, 1) = -mu + 2.0 * cos(k2);
  H(2, 2) = -mu + 2.0 * cos(k1 + k2);
  H(0, 1) = 2.0 * cos(0.5 * (k1 + k2)) + 2.0 * cos(0.5 * (k1 - k2));
  H(0, 2) = 2.0 * cos(0.5 * k2) + 2.0 * cos(k1 + 0.5 * k2);
  H(1, 2) = 2.0 * cos(0.5 * k1) + 2.0 * cos(0.5 * k1 + k2);
  H(1, 0) = H(0, 1);
  H(2, 0) = H(0, 2);
  H(2, 1) = H(1, 2);
  return H;
}

Eigen::Vector3d n_vector(KPoint k) {
  return {cos(0.5 * k.k1), cos(0.5 * k.k2), cos(0.5 * (k.k1 + k.k2))};
}

Eigen::Vector3d n_hat(KPoint k) { return n_vector(k).normalized(); }

Eigen::Matrix3d bloch_hamiltonian_rank1(KPoint k, double mu) {
  const Eigen::Vector3d n = n_vector(k);
  return (-mu - 2.0) * Eigen::Matrix3d::Identity() + 4.0 * n * n.transpose();
}

Eigen::Matrix3d flat_projector(KPoint k) {
  const Eigen::Vector3d u = n_hat(k);
  return Eigen::Matrix3d::Identity() - u * u.transpose();
}

BandSolution band_solution(KPoint k, double mu) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(bloch_hamiltonian(k, mu));
  BandSolution out;
  out.energies = es.eigenvalues();
  Eigen::Vector3d top = es.eigenvectors().col(2);
  if (top.dot(n_vector(k)) < 0.0) top = -top;
  // The flat pair is degenerate; fix its gauge by Gram-Schmidt on e1, e2, e3.
  Eigen::Matrix3d V;
  V.col(2) = top;
  int filled = 0;
  for (int a = 0; a < 3 && filled < 2; ++a) {
    Eigen::Vector3d v = Eigen::Vector3d::Unit(a);
    v -= top.dot(v) * top;
    for (int b = 0; b < filled; ++b) v -= V.col(b).dot(v) * V.col(b);
    if (v.norm() < 1e-6) continue;
    V.col(filled++) = v.normalized();
  }
  out.vectors = V;
  return out;
}

std::vector<double> bz_lattice_points(int grid) {
  std::vector<double> ks(grid);
  for (int m = 0; m < grid; ++m) {
    double k = 2.0 * std::numbers::pi * m / grid;
    if (k > std::numbers::pi) k -= 2.0 * std::numbers::pi;
    ks[m] = k;
  }
  return ks;
}

std::vector<double> bz_midpoints(int grid) {
  std::vector<double> ks(grid);
  for (int m = 0; m < grid; ++m) ks[m] = -std::numbers::pi + 2.0 * std::numbers::pi * (m + 0.5) / grid;
  return ks;
}

double spectral_gap(int grid) {
  if (grid < 3) fail(ErrorCode::InvalidArgument, "spectral_gap needs grid >= 3");
  const auto ks = bz_lattice_points(grid);
  double best = std::numeric_limits<double>::infinity();
  for (double k1 : ks)
    for (double k2 : ks) best = std::min(best, 4.0 * n_vector({k1, k2}).squaredNorm());
  return best;
}

}  // namespace eulerpeps
