#include "eulerpeps/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "eulerpeps/bloch.hpp"
#include "eulerpeps/error.hpp"

namespace eulerpeps {

namespace {

double k_value(int m, int L) {
  double k = 2.0 * std::numbers::pi * m / L;
  if (k > std::numbers::pi + 1e-12) k -= 2.0 * std::numbers::pi;
  return k;
}

int mod(int x, int L) { return ((x % L) + L) % L; }

// Flat-band projector in the cell gauge: orbital phases e^{ik·r_α} attached.
Eigen::Matrix3cd cell_projector(double k1, double k2) {
  const Eigen::Matrix3d P = flat_projector({k1, k2});
  Eigen::Vector3cd w;
  for (int a = 0; a < 3; ++a) {
    const Eigen::Vector2d r = sublattice_offset(static_cast<Sublattice>(a));
    w(a) = std::polar(1.0, k1 * r.x() + k2 * r.y());
  }
  return w.asDiagonal() * P.cast<cplx>() * w.conjugate().asDiagonal();
}

}  // namespace

CorrelationModes correlation_spectrum(int L1, int L2, int cut) {
  if (L1 < 2 || L2 < 2) fail(ErrorCode::DegenerateSize, "correlation spectrum needs L1, L2 >= 2");
  if (cut < 1 || cut >= L1) fail(ErrorCode::InvalidArgument, "cut must satisfy 1 <= cut < L1");
  CorrelationModes cm;
  cm.L1 = L1;
  cm.L2 = L2;
  cm.cut = cut;
  for (int m2 = 0; m2 < L2; ++m2) {
    const double k2 = 2.0 * std::numbers::pi * m2 / L2;
    std::vector<Eigen::Matrix3cd> P(L1);
    for (int m1 = 0; m1 < L1; ++m1) P[m1] = cell_projector(2.0 * std::numbers::pi * m1 / L1, k2);
    // G depends on n − m only.
    std::vector<Eigen::Matrix3cd> B(2 * cut - 1, Eigen::Matrix3cd::Zero());
    for (int d = -(cut - 1); d <= cut - 1; ++d) {
      Eigen::Matrix3cd s = Eigen::Matrix3cd::Zero();
      for (int m1 = 0; m1 < L1; ++m1) s += std::polar(1.0, 2.0 * std::numbers::pi * m1 * d / L1) * P[m1];
      B[d + cut - 1] = s / double(L1);
    }
    Eigen::MatrixXcd G(3 * cut, 3 * cut);
    for (int n = 0; n < cut; ++n)
      for (int m = 0; m < cut; ++m) G.block<3, 3>(3 * n, 3 * m) = B[n - m + cut - 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    cm.k2_index.push_back(m2);
    cm.lambda.push_back(es.eigenvalues());
  }
  return cm;
}

std::vector<ESLevel> free_many_body_es(const CorrelationModes& modes, const FreeESOptions& opts) {
  struct Mode {
    double lam;
    int m2;
    bool ref;
    double cost;
  };
  std::vector<Mode> all;
  for (size_t s = 0; s < modes.lambda.size(); ++s)
    for (int i = 0; i < modes.lambda[s].size(); ++i) {
      const double l = std::clamp(modes.lambda[s](i), opts.clamp, 1.0 - opts.clamp);
      all.push_back({l, modes.k2_index[s], false, 0.0});
    }
  // Reference: the highest two thirds of the modes occupied.
  std::vector<size_t> idx(all.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return all[a].lam > all[b].lam; });
  const size_t nref = 2 * all.size() / 3;
  for (size_t r = 0; r < nref; ++r) all[idx[r]].ref = true;
  for (auto& m : all) {
    const double logit = std::log(m.lam) - std::log1p(-m.lam);
    m.cost = m.ref ? logit : -logit;  // change of ε when the mode is flipped
  }
  std::sort(all.begin(), all.end(), [](const Mode& a, const Mode& b) { return a.cost < b.cost; });
  double negative_total = 0.0;
  for (const auto& m : all) negative_total += std::min(0.0, m.cost);

  const int L2 = modes.L2;
  std::vector<ESLevel> out;
  // Depth-first over flip sets in ascending cost; costs ≥ 0 allow early exit.
  std::vector<int> stackK{0}, stackC{0};
  struct Frame {
    size_t next;
    double eps;
    int K;
    int channel;
    double neg_left;
  };
  std::vector<Frame> st{{0, 0.0, 0, 0, negative_total}};
  out.push_back({0, 0.0, 0, 0.0});
  while (!st.empty() && out.size() < opts.max_levels) {
    Frame& f = st.back();
    if (f.next >= all.size()) {
      st.pop_back();
      continue;
    }
    const size_t i = f.next++;
    const Mode& m = all[i];
    const double neg_left = f.neg_left - std::min(0.0, m.cost);
    const double eps = f.eps + m.cost;
    if (m.cost >= 0.0 && eps + neg_left > opts.eps_max) {
      f.next = all.size();
      continue;
    }
    const int dK = m.ref ? -m.m2 : m.m2;
    const int K = mod(f.K + dK, L2);
    const int ch = f.channel + (m.ref ? -1 : 1);
    if (eps <= opts.eps_max) out.push_back({K, k_value(K, L2), ch, eps});
    st.push_back({i + 1, eps, K, ch, neg_left});
  }
  std::sort(out.begin(), out.end(), [](const ESLevel& a, const ESLevel& b) {
    return a.K != b.K ? a.K < b.K : a.eps < b.eps;
  });
  return out;
}

double correlation_entropy(const CorrelationModes& modes) {
  double s = 0.0;
  for (const auto& v : modes.lambda)
    for (int i = 0; i < v.size(); ++i) {
      const double l = v(i);
      if (l > 1e-15 && l < 1.0 - 1e-15) s += -l * std::log(l) - (1.0 - l) * std::log1p(-l);
    }
  return s;
}

double SchmidtSpectrum::total() const {
  double t = 0.0;
  for (const auto& l : levels) t += l.lambda;
  return t;
}

double SchmidtSpectrum::entropy() const {
  double s = 0.0;
  for (const auto& l : levels)
    if (l.lambda > 0.0) s -= l.lambda * std::log(l.lambda);
  return s;
}

SchmidtSpectrum schmidt_es(const SparseState& state, const Lattice& lat, int cut, bool use_momentum,
                           double lambda_floor) {
  if (cut < 1 || cut >= lat.L1()) fail(ErrorCode::InvalidArgument, "cut must satisfy 1 <= cut < L1");
  if (lat.num_sites() > 24) fail(ErrorCode::SizeLimit, "Schmidt spectra limited to N <= 24");
  const int L2 = lat.L2();
  const int nA = 3 * cut * L2;
  const Bits maskA = (Bits(1) << nA) - 1;
  const double norm2 = std::pow(state.norm(), 2);
  if (norm2 == 0.0) fail(ErrorCode::ZeroState, "Schmidt decomposition of the zero state");

  // Group amplitudes by subsystem particle number.
  struct Block {
    std::vector<Bits> rows, cols;
    std::unordered_map<Bits, int> ri, ci;
    std::vector<std::tuple<int, int, cplx>> entries;
  };
  std::map<int, Block> blocks;
  for (const auto& [b, amp] : state.terms()) {
    const Bits a = b & maskA, c = b >> nA;
    Block& bl = blocks[__builtin_popcountll(a)];
    auto [it, inserted] = bl.ri.try_emplace(a, static_cast<int>(bl.rows.size()));
    if (inserted) bl.rows.push_back(a);
    auto [jt, jins] = bl.ci.try_emplace(c, static_cast<int>(bl.cols.size()));
    if (jins) bl.cols.push_back(c);
    bl.entries.push_back({it->second, jt->second, amp});
  }

  // a2 translation on A: (m1, m2, s) → (m1, m2 + 1, s), with reordering sign.
  auto translate = [&](Bits x, int& sign) {
    std::vector<int> img;
    for (int f = 0; f < nA; ++f)
      if ((x >> f) & 1) {
        const int cell = f / 3;
        const int m1 = cell / L2, m2 = cell % L2;
        img.push_back(3 * (m1 * L2 + (m2 + 1) % L2) + f % 3);
      }
    int inv = 0;
    for (size_t i = 0; i < img.size(); ++i)
      for (size_t j = i + 1; j < img.size(); ++j) inv += img[i] > img[j];
    sign = (inv & 1) ? -1 : 1;
    Bits y = 0;
    for (int f : img) y |= Bits(1) << f;
    return y;
  };

  SchmidtSpectrum out;
  out.momentum = use_momentum;
  out.L2 = L2;
  for (auto& [na, bl] : blocks) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(bl.rows.size(), bl.cols.size());
    for (const auto& [r, c, v] : bl.entries) M(r, c) += v;
    const Eigen::MatrixXcd rho = M * M.adjoint() / norm2;
    const int channel = na - 2 * nA / 3;
    if (!use_momentum) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > lambda_floor) out.levels.push_back({0, 0.0, channel, es.eigenvalues()(i), 0.0});
      continue;
    }
    const int dim = static_cast<int>(bl.rows.size());
    // Signed permutation T and symmetry check T ρ T† = ρ.
    std::vector<int> tgt(dim), sgn(dim);
    for (int r = 0; r < dim; ++r) {
      const Bits y = translate(bl.rows[r], sgn[r]);
      auto it = bl.ri.find(y);
      if (it == bl.ri.end()) fail(ErrorCode::Symmetry, "state is not translation invariant along a2");
      tgt[r] = it->second;
    }
    double asym = 0.0;
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        asym = std::max(asym, std::abs(double(sgn[r] * sgn[c]) * rho(r, c) - rho(tgt[r], tgt[c])));
    if (asym > 1e-10) fail(ErrorCode::Symmetry, "reduced density matrix does not commute with a2 translation");
    std::vector<std::vector<Eigen::VectorXcd>> basis(L2);
    std::vector<bool> seen(dim, false);
    for (int r0 = 0; r0 < dim; ++r0) {
      if (seen[r0]) continue;
      std::vector<int> orbit;
      std::vector<int> signs;
      int r = r0, s = 1;
      do {
        seen[r] = true;
        orbit.push_back(r);
        signs.push_back(s);
        s *= sgn[r];
        r = tgt[r];
      } while (r != r0);
      const int d = static_cast<int>(orbit.size());
      for (int m = 0; m < L2; ++m) {
        const cplx lam = std::polar(1.0, 2.0 * std::numbers::pi * m / L2);
        if (std::abs(std::pow(lam, d) - double(s)) > 1e-9) continue;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        for (int t = 0; t < d; ++t) v(orbit[t]) = std::pow(lam, -t) * double(signs[t]) / std::sqrt(double(d));
        basis[m].push_back(std::move(v));
      }
    }
    for (int m = 0; m < L2; ++m) {
      if (basis[m].empty()) continue;
      Eigen::MatrixXcd B(dim, basis[m].size());
      for (size_t c = 0; c < basis[m].size(); ++c) B.col(c) = basis[m][c];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B.adjoint() * rho * B, Eigen::EigenvaluesOnly);
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > lambda_floor)
          out.levels.push_back({m, k_value(m, L2), channel, es.eigenvalues()(i), 0.0});
    }
  }
  double emin = 1e300;
  for (auto& l : out.levels) {
    l.eps = -std::log(l.lambda);
    emin = std::min(emin, l.eps);
  }
  for (auto& l : out.levels) l.eps -= emin;
  std::sort(out.levels.begin(), out.levels.end(), [](const SchmidtLevel& a, const SchmidtLevel& b) {
    return a.K != b.K ? a.K < b.K : a.eps < b.eps;
  });
  return out;
}

CuspReport cusp_report(const std::vector<std::pair<int, double>>& levels, int L2, double tol) {
  std::map<int, double> best;  // |K| index → min ε
  for (const auto& [K, e] : levels) {
    const int m = mod(K, L2);
    const int a = std::min(m, L2 - m);
    auto it = best.find(a);
    if (it == best.end() || e < it->second) best[a] = e;
  }
  if (best.size() < 2) fail(ErrorCode::InvalidArgument, "cusp report needs at least two distinct |K| values");
  CuspReport r;
  if (!best.count(0)) return r;
  r.k0_min = best.at(0);
  auto it = std::next(best.begin());
  r.neighbour_K = it->first;
  r.neighbour_min = it->second;
  r.margin = r.neighbour_min - r.k0_min;
  r.present = r.margin > tol;
  return r;
}

CuspReport cusp_report(const std::vector<ESLevel>& levels, int L2, double tol) {
  std::vector<std::pair<int, double>> v;
  for (const auto& l : levels) v.push_back({l.K, l.eps});
  return cusp_report(v, L2, tol);
}

CuspReport cusp_report(const SchmidtSpectrum& s, double tol) {
  if (!s.momentum) fail(ErrorCode::InvalidArgument, "cusp report needs a momentum-resolved spectrum");
  std::vector<std::pair<int, double>> v;
  for (const auto& l : s.levels) v.push_back({l.K, l.eps});
  return cusp_report(v, s.L2, tol);
}

GateLayout remove_cut_crossing(const GateLayout& layout, const Lattice& lat, int cut) {
  const int nA = 3 * cut * lat.L2();
  GateLayout out;
  out.num_sites = layout.num_sites;
  for (const auto& g : layout.bonds)
    if ((g.i < nA) == (g.j < nA)) out.bonds.push_back(g);
  return out;
}

}  // namespace eulerpeps
