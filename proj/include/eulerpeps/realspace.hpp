#pragma once

#include <array>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eulerpeps/lattice.hpp"

namespace eulerpeps {

using cplx = std::complex<double>;
using Beta = std::array<cplx, 6>;

// Boundary: phase e^{iθ·w} on hoppings that wrap the torus.
// Distributed: phase e^{i(θ1 Δr1/L1 + θ2 Δr2/L2)} on every hopping, with Δr the
// reduced displacement including orbital offsets. Both gauges give the same
// spectrum; only the distributed one has a smooth θ-dependence of the
// eigenvectors and is used for the many-body metric.
enum class TwistGauge { Boundary, Distributed };

struct HamiltonianOptions {
  double mu = 0.0;
  std::optional<Beta> beta;
  double theta1 = 0.0;
  double theta2 = 0.0;
  TwistGauge gauge = TwistGauge::Boundary;
  bool check_c2t = true;
};

struct HoppingMatrix {
  Eigen::MatrixXcd H;
  double mu = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::optional<Beta> beta;
  std::vector<std::string> warnings;
};

struct SpectrumResult {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;  // empty unless requested
};

Beta default_beta();
// Residual of β_{i+3} = c·β_i* minimised over unimodular c.
double c2t_residual(const Beta& beta);
// Random normalised β obeying β_{i+3} = β_i*.
Beta random_c2t_beta(std::mt19937_64& rng);

HoppingMatrix build_hamiltonian(const Lattice& lat, const HamiltonianOptions& opts = {});
SpectrumResult single_particle_spectrum(const HoppingMatrix& h, bool with_vectors = false);

// 6·Σ_⬡ a⬡† a⬡ with a⬡ = Σ_p β_p a_p, assembled independently of the bond lists.
Eigen::MatrixXcd hexagon_projector_sum(const Lattice& lat, const Beta& beta);

struct CylinderSpectrum {
  int L1 = 0;
  int L2 = 0;
  double mu = 0.0;
  std::vector<double> ky;
  std::vector<Eigen::VectorXd> levels;  // sorted, one vector per sector
};

// Per-k_y blocks of the bond-truncated Hamiltonian. Works for tori as well,
// where the union of blocks is the full single-particle spectrum.
CylinderSpectrum cylinder_spectrum(const Lattice& lat, double mu);

struct SpectralFlowReport {
  double flat_energy = 0.0;
  int min_flat_count = 0;               // per-sector count within 1e-9 of −2−μ, minimised
  double max_flat_deviation = 0.0;      // over the lowest min_flat_count levels
  double min_gap_2L1 = 0.0;             // min over sectors of E[2L1] − E[2L1−1] (1-based)
  double window_lo = 0.0;               // −2−μ
  double window_hi = 0.0;               // 1−μ
  bool free_line_found = false;         // a gap line with no level crossing in any sector
  double free_line = 0.0;
  double free_line_clearance = 0.0;
  bool midgap_crossed = false;          // info: sector counts below the mid-gap line differ
  int in_gap_levels = 0;                // info: levels strictly inside the window
};

SpectralFlowReport spectral_flow_report(const CylinderSpectrum& cs, double tol = 1e-6);

struct ManyBodyMetricResult {
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  double trace = 0.0;
  double rhs = 0.0;    // (1/L1L2) Σ_k tr g(k)
  double bound = 0.0;  // 4πA|χ|/(L1L2)
  double step = 0.0;
  double min_gap = 0.0;
  bool trace_identity_ok = false;  // |trace − rhs| ≤ 10·step²
  bool bound_strict = false;       // trace > bound
};

ManyBodyMetricResult many_body_metric(const Lattice& lat, double mu, double step = 1e-3);

// Smallest gap above the 2N/3 lowest levels of the β-generalised Hamiltonian.
double beta_gap(const Lattice& lat, const Beta& beta, double mu = 0.0);

}  // namespace eulerpeps
