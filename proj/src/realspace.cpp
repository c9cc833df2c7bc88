#include "eulerpeps/realspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "eulerpeps/error.hpp"
#include "eulerpeps/geometry.hpp"

namespace eulerpeps {

namespace {

int wrap(int x, int L) { return ((x % L) + L) % L; }
int wind(int x, int L) { return (x - wrap(x, L)) / L; }

bool cylinder_drops(const Lattice& lat, const HexCorner& a, const HexCorner& b) {
  return lat.boundary() == Boundary::CylinderOpenA1 && wind(a.u1, lat.L1()) != wind(b.u1, lat.L1());
}

cplx twist_phase(const Lattice& lat, const HexCorner& a, const HexCorner& b, const HamiltonianOptions& o) {
  if (o.theta1 == 0.0 && o.theta2 == 0.0) return 1.0;
  double arg = 0.0;
  if (o.gauge == TwistGauge::Boundary) {
    arg = o.theta1 * (wind(b.u1, lat.L1()) - wind(a.u1, lat.L1())) +
          o.theta2 * (wind(b.u2, lat.L2()) - wind(a.u2, lat.L2()));
  } else {
    const Eigen::Vector2d ra = Eigen::Vector2d(a.u1, a.u2) + sublattice_offset(a.sub);
    const Eigen::Vector2d rb = Eigen::Vector2d(b.u1, b.u2) + sublattice_offset(b.sub);
    arg = o.theta1 * (rb.x() - ra.x()) / lat.L1() + o.theta2 * (rb.y() - ra.y()) / lat.L2();
  }
  return std::polar(1.0, arg);
}

}  // namespace

Beta default_beta() {
  Beta b;
  b.fill(cplx(1.0 / std::sqrt(6.0), 0.0));
  return b;
}

double c2t_residual(const Beta& beta) {
  cplx s = 0.0;
  for (int i = 0; i < 3; ++i) s += beta[i + 3] * beta[i];
  const cplx c = std::abs(s) > 0.0 ? s / std::abs(s) : cplx(1.0);
  double r = 0.0;
  for (int i = 0; i < 3; ++i) r += std::norm(beta[i + 3] - c * std::conj(beta[i]));
  return std::sqrt(r);
}

Beta random_c2t_beta(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Beta b;
  for (int i = 0; i < 3; ++i) {
    b[i] = cplx(nd(rng), nd(rng));
    b[i + 3] = std::conj(b[i]);
  }
  double n = 0.0;
  for (const auto& x : b) n += std::norm(x);
  for (auto& x : b) x /= std::sqrt(n);
  return b;
}

HoppingMatrix build_hamiltonian(const Lattice& lat, const HamiltonianOptions& opts) {
  HoppingMatrix out;
  out.mu = opts.mu;
  out.theta1 = opts.theta1;
  out.theta2 = opts.theta2;
  out.beta = opts.beta;
  if (opts.beta) {
    double n = 0.0;
    for (const auto& x : *opts.beta) n += std::norm(x);
    if (std::abs(n - 1.0) > 1e-10) fail(ErrorCode::Normalization, "beta must have unit norm");
    if (opts.check_c2t && c2t_residual(*opts.beta) > 1e-10)
      out.warnings.push_back("beta violates the C2T constraint beta_{i+3} = beta_i* (up to a global phase)");
  }
  const int N = lat.num_sites();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N, N);
  for (int h = 0; h < lat.num_hexagons(); ++h) {
    const auto& hx = lat.hexagon(h);
    for (int p = 0; p < 6; ++p) {
      for (int q = 0; q < 6; ++q) {
        cplx coef;
        if (opts.beta) {
          coef = 6.0 * std::conj((*opts.beta)[p]) * (*opts.beta)[q];
        } else {
          if (p == q) continue;
          coef = 1.0;
        }
        if (p != q && cylinder_drops(lat, hx[p], hx[q])) continue;
        H(hx[p].flat, hx[q].flat) += coef * twist_phase(lat, hx[p], hx[q], opts);
      }
    }
  }
  const double shift = opts.beta ? -(opts.mu + 2.0) : -opts.mu;
  H.diagonal().array() += shift;
  out.H = std::move(H);
  return out;
}

SpectrumResult single_particle_spectrum(const HoppingMatrix& h, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.H, with_vectors ? Eigen::ComputeEigenvectors
                                                                         : Eigen::EigenvaluesOnly);
  SpectrumResult r;
  r.energies = es.eigenvalues();
  if (with_vectors) r.vectors = es.eigenvectors();
  return r;
}

Eigen::MatrixXcd hexagon_projector_sum(const Lattice& lat, const Beta& beta) {
  const int N = lat.num_sites();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  for (int h = 0; h < lat.num_hexagons(); ++h) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
    const auto f = lat.hexagon_flat(h);
    for (int p = 0; p < 6; ++p) v(f[p]) += beta[p];
    M += 6.0 * v.conjugate() * v.transpose();
  }
  return M;
}

CylinderSpectrum cylinder_spectrum(const Lattice& lat, double mu) {
  CylinderSpectrum cs;
  cs.L1 = lat.L1();
  cs.L2 = lat.L2();
  cs.mu = mu;
  const int n = 3 * lat.L1();
  for (int m = 0; m < lat.L2(); ++m) {
    double k = 2.0 * std::numbers::pi * m / lat.L2();
    if (k > std::numbers::pi) k -= 2.0 * std::numbers::pi;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    // One hexagon per a2-translation class carries every hopping exactly once.
    for (int m1 = 0; m1 < lat.L1(); ++m1) {
      const auto& hx = lat.hexagon(m1 * lat.L2());
      for (int p = 0; p < 6; ++p) {
        for (int q = 0; q < 6; ++q) {
          if (p == q || cylinder_drops(lat, hx[p], hx[q])) continue;
          const int I = 3 * wrap(hx[p].u1, lat.L1()) + static_cast<int>(hx[p].sub);
          const int J = 3 * wrap(hx[q].u1, lat.L1()) + static_cast<int>(hx[q].sub);
          M(I, J) += std::polar(1.0, k * (hx[q].u2 - hx[p].u2));
        }
      }
    }
    M.diagonal().array() -= mu;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    cs.ky.push_back(k);
    cs.levels.push_back(es.eigenvalues());
  }
  return cs;
}

SpectralFlowReport spectral_flow_report(const CylinderSpectrum& cs, double tol) {
  SpectralFlowReport r;
  r.flat_energy = -2.0 - cs.mu;
  r.window_lo = r.flat_energy;
  r.window_hi = 1.0 - cs.mu;
  r.min_flat_count = 1 << 30;
  r.min_gap_2L1 = 1e300;
  const int nv = 2 * cs.L1;
  for (const auto& lv : cs.levels) {
    int c = 0;
    for (int i = 0; i < lv.size(); ++i)
      if (std::abs(lv(i) - r.flat_energy) <= 1e-9) ++c;
    r.min_flat_count = std::min(r.min_flat_count, c);
    if (lv.size() > nv) r.min_gap_2L1 = std::min(r.min_gap_2L1, lv(nv) - lv(nv - 1));
  }
  for (const auto& lv : cs.levels)
    for (int i = 0; i < r.min_flat_count; ++i)
      r.max_flat_deviation = std::max(r.max_flat_deviation, std::abs(lv(i) - r.flat_energy));

  std::vector<double> pts{r.window_lo, r.window_hi};
  for (const auto& lv : cs.levels)
    for (int i = 0; i < lv.size(); ++i)
      if (lv(i) > r.window_lo + tol && lv(i) < r.window_hi - tol) {
        pts.push_back(lv(i));
        ++r.in_gap_levels;
      }
  std::sort(pts.begin(), pts.end());
  auto count_below = [](const Eigen::VectorXd& lv, double e) {
    int c = 0;
    for (int i = 0; i < lv.size(); ++i) c += lv(i) < e;
    return c;
  };
  auto constant_count = [&](double e) {
    const int c0 = count_below(cs.levels.front(), e);
    for (const auto& lv : cs.levels)
      if (count_below(lv, e) != c0) return false;
    return true;
  };
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double e = 0.5 * (pts[i] + pts[i + 1]);
    const double clearance = 0.5 * (pts[i + 1] - pts[i]);
    if (clearance > r.free_line_clearance && constant_count(e)) {
      r.free_line_clearance = clearance;
      r.free_line = e;
    }
  }
  r.free_line_found = r.free_line_clearance > tol;
  r.midgap_crossed = !constant_count(0.5 * (r.window_lo + r.window_hi));
  return r;
}

ManyBodyMetricResult many_body_metric(const Lattice& lat, double mu, double step) {
  if (!(mu > -2.0 && mu < 1.0)) fail(ErrorCode::InvalidArgument, "many_body_metric needs -2 < mu < 1");
  if (!(step >= 1e-4 && step <= 1e-2)) fail(ErrorCode::InvalidArgument, "many_body_metric step must lie in [1e-4, 1e-2]");
  if (lat.boundary() != Boundary::Torus) fail(ErrorCode::InvalidArgument, "many_body_metric needs a torus");
  const int N = lat.num_sites();
  const int nocc = 2 * N / 3;
  ManyBodyMetricResult r;
  r.step = step;
  r.min_gap = 1e300;
  auto occupied = [&](double t1, double t2) {
    HamiltonianOptions o;
    o.mu = mu;
    o.theta1 = t1;
    o.theta2 = t2;
    o.gauge = TwistGauge::Distributed;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_hamiltonian(lat, o).H);
    const double gap = es.eigenvalues()(nocc) - es.eigenvalues()(nocc - 1);
    if (gap < 1e-8) fail(ErrorCode::Degeneracy, "single-particle gap closes at sampled twist");
    r.min_gap = std::min(r.min_gap, gap);
    return Eigen::MatrixXcd(es.eigenvectors().leftCols(nocc));
  };
  const Eigen::MatrixXcd phi0 = occupied(0.0, 0.0);
  auto D = [&](double t1, double t2) {
    const Eigen::MatrixXcd ov = phi0.adjoint() * occupied(t1, t2);
    return -std::log(std::abs(ov.partialPivLu().determinant()));
  };
  const double h = step;
  auto second = [&](int axis) {
    auto f = [&](double t) { return axis == 0 ? D(t, 0.0) : D(0.0, t); };
    return (-f(2 * h) + 16.0 * f(h) + 16.0 * f(-h) - f(-2 * h)) / (12.0 * h * h);
  };
  const double g11 = second(0);
  const double g22 = second(1);
  const double g12 = (D(h, h) - D(h, -h) - D(-h, h) + D(-h, -h)) / (4.0 * h * h);
  r.g << g11, g12, g12, g22;
  r.trace = g11 + g22;

  double s = 0.0;
  for (int m1 = 0; m1 < lat.L1(); ++m1)
    for (int m2 = 0; m2 < lat.L2(); ++m2)
      s += quantum_metric({2.0 * std::numbers::pi * m1 / lat.L1(), 2.0 * std::numbers::pi * m2 / lat.L2()},
                          GeoMethod::ClosedForm)
               .trace();
  r.rhs = s / lat.num_cells();
  const double chi_abs = std::round(std::abs(euler_class(101)));
  r.bound = 4.0 * std::numbers::pi * unit_cell_area() * chi_abs / lat.num_cells();
  r.trace_identity_ok = std::abs(r.trace - r.rhs) <= 10.0 * step * step;
  r.bound_strict = r.trace > r.bound;
  return r;
}

double beta_gap(const Lattice& lat, const Beta& beta, double mu) {
  HamiltonianOptions o;
  o.mu = mu;
  o.beta = beta;
  o.check_c2t = false;
  const auto e = single_particle_spectrum(build_hamiltonian(lat, o)).energies;
  const int nocc = 2 * lat.num_sites() / 3;
  return e(nocc) - e(nocc - 1);
}

}  // namespace eulerpeps
