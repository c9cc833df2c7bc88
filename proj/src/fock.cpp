#include "eulerpeps/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eulerpeps/circuit.hpp"
#include "eulerpeps/error.hpp"

namespace eulerpeps {

// ---------------------------------------------------------------- SparseState

SparseState SparseState::basis(int num_modes, Bits b, cplx amp) {
  SparseState s(num_modes);
  if (std::abs(amp) > kPruneThreshold) s.terms_.push_back({b, amp});
  return s;
}

SparseState SparseState::from_map(int num_modes, const std::unordered_map<Bits, cplx>& acc) {
  std::vector<Term> t;
  t.reserve(acc.size());
  for (const auto& kv : acc)
    if (std::abs(kv.second) > kPruneThreshold) t.push_back(kv);
  std::sort(t.begin(), t.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  SparseState s(num_modes);
  s.terms_ = std::move(t);
  return s;
}

SparseState SparseState::from_terms(int num_modes, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  SparseState s(num_modes);
  for (const auto& t : terms) {
    if (!s.terms_.empty() && s.terms_.back().first == t.first)
      s.terms_.back().second += t.second;
    else
      s.terms_.push_back(t);
  }
  std::erase_if(s.terms_, [](const Term& t) { return std::abs(t.second) <= kPruneThreshold; });
  return s;
}

cplx SparseState::amplitude(Bits b) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), b,
                             [](const Term& t, Bits key) { return t.first < key; });
  return (it != terms_.end() && it->first == b) ? it->second : cplx(0.0);
}

double SparseState::norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.second);
  return std::sqrt(s);
}

cplx SparseState::inner(const SparseState& other) const {
  cplx acc = 0.0;
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() && b != other.terms_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      acc += std::conj(a->second) * b->second;
      ++a;
      ++b;
    }
  }
  return acc;
}

SparseState SparseState::scaled(cplx s) const {
  SparseState out(num_modes_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    const cplx v = t.second * s;
    if (std::abs(v) > kPruneThreshold) out.terms_.push_back({t.first, v});
  }
  return out;
}

SparseState SparseState::normalized() const {
  const double n = norm();
  if (n == 0.0) fail(ErrorCode::ZeroState, "cannot normalise the zero state");
  return scaled(1.0 / n);
}

SparseState SparseState::plus(const SparseState& other, cplx s) const {
  std::vector<Term> t = terms_;
  for (const auto& o : other.terms_) t.push_back({o.first, s * o.second});
  return from_terms(num_modes_, std::move(t));
}

int SparseState::particle_number() const {
  if (terms_.empty()) return -1;
  const int n = __builtin_popcountll(terms_.front().first);
  for (const auto& t : terms_)
    if (__builtin_popcountll(t.first) != n) return -1;
  return n;
}

SparseState apply_ladder(const SparseState& s, int site, Ladder kind) {
  if (site < 0 || site >= s.num_modes()) fail(ErrorCode::InvalidArgument, "ladder site out of range");
  std::vector<SparseState::Term> out;
  out.reserve(s.size());
  const Bits m = Bits(1) << site;
  for (const auto& [b, a] : s.terms()) {
    const bool occ = b & m;
    if ((kind == Ladder::Create) == occ) continue;
    out.push_back({b ^ m, a * double(ladder_sign(b, site))});
  }
  return SparseState::from_terms(s.num_modes(), std::move(out));
}

// ------------------------------------------------------------ hexagon algebra

HexOperator hex_operator(const Lattice& lat, int h, const Beta& beta) {
  HexOperator op;
  op.hex = h;
  op.sites = lat.hexagon_flat(h);
  op.coef = beta;
  return op;
}

SparseState hex_annihilate(const SparseState& s, const HexOperator& op) {
  std::unordered_map<Bits, cplx> acc;
  acc.reserve(s.size() * 6);
  for (const auto& [b, a] : s.terms()) {
    for (int p = 0; p < 6; ++p) {
      const int site = op.sites[p];
      const Bits m = Bits(1) << site;
      if (!(b & m)) continue;
      acc[b ^ m] += a * op.coef[p] * double(ladder_sign(b, site));
    }
  }
  return SparseState::from_map(s.num_modes(), acc);
}

cplx anticommutator(const HexOperator& a, const HexOperator& b) {
  cplx s = 0.0;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q)
      if (a.sites[p] == b.sites[q]) s += a.coef[p] * std::conj(b.coef[q]);
  return s;
}

SparseState build_ground_state(const Lattice& lat, const std::vector<Beta>& per_hex, const std::vector<int>& order) {
  if (lat.boundary() != Boundary::Torus) fail(ErrorCode::InvalidArgument, "ground state construction needs a torus");
  const int N = lat.num_sites();
  if (N > 64) fail(ErrorCode::SizeLimit, "Fock patterns are limited to 64 modes");
  std::vector<int> seq = order;
  if (seq.empty())
    for (int h = 0; h < lat.num_hexagons(); ++h) seq.push_back(h);
  const Bits full = N == 64 ? ~Bits(0) : ((Bits(1) << N) - 1);
  SparseState psi = SparseState::basis(N, full);
  for (int h : seq) {
    const Beta& b = per_hex.empty() ? default_beta() : per_hex.at(h);
    psi = hex_annihilate(psi, hex_operator(lat, h, b));
    if (psi.empty()) fail(ErrorCode::ZeroState, "hexagon product annihilated the state");
  }
  return psi;
}

SparseState build_ground_state(const Lattice& lat, const std::optional<Beta>& beta, const std::vector<int>& order) {
  std::vector<Beta> per_hex;
  if (beta) per_hex.assign(lat.num_hexagons(), *beta);
  return build_ground_state(lat, per_hex, order);
}

double fidelity(const SparseState& a, const SparseState& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(a.inner(b)) / (na * nb);
}

std::string serialize_state(const SparseState& s) {
  std::string out = "# modes " + std::to_string(s.num_modes()) + "\n";
  char buf[96];
  for (const auto& [b, a] : s.terms()) {
    std::snprintf(buf, sizeof buf, "%llu %.17g %.17g\n", static_cast<unsigned long long>(b), a.real(), a.imag());
    out += buf;
  }
  return out;
}

SparseState parse_state(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int modes = -1;
  std::vector<SparseState::Term> terms;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream h(line.substr(1));
      std::string key;
      h >> key >> modes;
      continue;
    }
    std::istringstream l(line);
    unsigned long long b;
    double re, im;
    if (!(l >> b >> re >> im)) fail(ErrorCode::Io, "malformed state line: " + line);
    terms.push_back({b, cplx(re, im)});
  }
  if (modes < 0 || modes > 64) fail(ErrorCode::Io, "state text lacks a valid '# modes' header");
  for (const auto& t : terms)
    if (modes < 64 && (t.first >> modes))
      fail(ErrorCode::Io, "pattern " + std::to_string(t.first) + " exceeds " + std::to_string(modes) + " modes");
  return SparseState::from_terms(modes, std::move(terms));
}

// ---------------------------------------------------------------- many-body

std::vector<Bits> sector_basis(int n, int k) {
  std::vector<Bits> out;
  if (k < 0 || k > n) return out;
  if (k == 0) return {Bits(0)};
  Bits v = (Bits(1) << k) - 1;
  const Bits limit = n == 64 ? ~Bits(0) : (Bits(1) << n);
  while (v < limit) {
    out.push_back(v);
    const Bits t = v | (v - 1);
    const Bits w = (t + 1) | (((~t & -~t) - 1) >> (__builtin_ctzll(v) + 1));
    if (w <= v) break;
    v = w;
  }
  return out;
}

ManyBodyModel::ManyBodyModel(const Lattice& lat, double mu, double alpha)
    : n_(lat.num_sites()), mu_(mu), alpha_(alpha) {
  if (n_ > 64) fail(ErrorCode::SizeLimit, "many-body model limited to 64 modes");
  for (int h = 0; h < lat.num_hexagons(); ++h) {
    const auto& hx = lat.hexagon(h);
    for (int p = 0; p < 6; ++p)
      for (int q = 0; q < 6; ++q) {
        if (p == q) continue;
        if (lat.boundary() == Boundary::CylinderOpenA1 && (hx[p].u1 >= lat.L1()) != (hx[q].u1 >= lat.L1())) continue;
        hops_.push_back({hx[p].flat, hx[q].flat});
      }
  }
  dress_ = dressing_table(gate_layout(lat));
}

cplx ManyBodyModel::dressing(int site, Bits b) const {
  int charge = 0;
  for (const auto& [k, sigma] : dress_[site]) charge += sigma * int((b >> k) & 1);
  return std::polar(1.0, alpha_ * charge);
}

SparseState ManyBodyModel::apply(const SparseState& s) const {
  std::unordered_map<Bits, cplx> acc;
  acc.reserve(s.size() * 8);
  for (const auto& [b, a] : s.terms()) apply(b, [&](Bits b2, cplx v) { acc[b2] += a * v; });
  return SparseState::from_map(s.num_modes(), acc);
}

ManyBodyOperator ManyBodyModel::matrix(Representation rep, int particles) const {
  ManyBodyOperator op;
  op.num_modes = n_;
  if (rep == Representation::Full) {
    if (n_ > 20) fail(ErrorCode::SizeLimit, "full Fock representation limited to N <= 20");
    op.basis.resize(Bits(1) << n_);
    for (Bits b = 0; b < op.basis.size(); ++b) op.basis[b] = b;
  } else {
    if (n_ > 24) fail(ErrorCode::SizeLimit, "fixed-number representation limited to N <= 24");
    op.particles = particles < 0 ? 2 * n_ / 3 : particles;
    op.basis = sector_basis(n_, op.particles);
  }
  const auto& basis = op.basis;
  auto index = [&](Bits b) -> Eigen::Index {
    if (rep == Representation::Full) return static_cast<Eigen::Index>(b);
    return std::lower_bound(basis.begin(), basis.end(), b) - basis.begin();
  };
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(basis.size() * (hops_.size() / 4 + 1));
  for (size_t c = 0; c < basis.size(); ++c)
    apply(basis[c], [&](Bits b2, cplx v) { trip.emplace_back(index(b2), static_cast<Eigen::Index>(c), v); });
  op.matrix.resize(basis.size(), basis.size());
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

ManyBodyOperator many_body_hamiltonian(const Lattice& lat, double mu, double alpha, Representation rep, int particles) {
  return ManyBodyModel(lat, mu, alpha).matrix(rep, particles);
}

namespace {

EigenResult dense_lowest(const SpMat& H, int k, bool with_vectors) {
  const Eigen::MatrixXcd D(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, with_vectors ? Eigen::ComputeEigenvectors
                                                                     : Eigen::EigenvaluesOnly);
  EigenResult r;
  const int kk = std::min<int>(k, D.rows());
  r.values = es.eigenvalues().head(kk);
  if (with_vectors) r.vectors = es.eigenvectors().leftCols(kk);
  return r;
}

// Lowest eigenpair of H restricted to the orthogonal complement of `locked`.
std::pair<double, Eigen::VectorXcd> lanczos_lowest(const SpMat& H, const std::vector<Eigen::VectorXcd>& locked) {
  const Eigen::Index n = H.rows();
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v0(n);
  for (Eigen::Index i = 0; i < n; ++i) v0(i) = cplx(nd(rng), nd(rng));
  auto project = [&](Eigen::VectorXcd& w) {
    for (const auto& u : locked) w -= u * u.dot(w);
  };
  project(v0);
  v0.normalize();
  int m = static_cast<int>(std::min<Eigen::Index>(n - locked.size(), 160));
  while (true) {
    Eigen::MatrixXcd V(n, m + 1);
    std::vector<double> a, b;
    V.col(0) = v0;
    int steps = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXcd w = H * V.col(j);
      a.push_back(V.col(j).dot(w).real());
      for (int pass = 0; pass < 2; ++pass) {
        w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
        project(w);
      }
      const double beta = w.norm();
      b.push_back(beta);
      if (beta < 1e-12) {
        steps = j + 1;
        break;
      }
      V.col(j + 1) = w / beta;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      T(j, j) = a[j];
      if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = b[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double resid = std::abs(b[steps - 1] * es.eigenvectors()(steps - 1, 0));
    const double lam = es.eigenvalues()(0);
    const bool exhausted = steps < m || m >= n - static_cast<Eigen::Index>(locked.size());
    if (resid <= 1e-11 * std::max(1.0, std::abs(lam)) || exhausted) {
      Eigen::VectorXcd x = V.leftCols(steps) * es.eigenvectors().col(0).cast<cplx>();
      project(x);
      return {lam, x.normalized()};
    }
    m = static_cast<int>(std::min<Eigen::Index>(n - locked.size(), 2 * m));
  }
}

}  // namespace

EigenResult lowest_eigenpairs(const SpMat& H, int k, bool with_vectors, int dense_limit) {
  if (H.rows() <= dense_limit) return dense_lowest(H, k, with_vectors);
  const int kk = std::min<int>(k, H.rows());
  std::vector<Eigen::VectorXcd> locked;
  EigenResult r;
  r.values.resize(kk);
  for (int i = 0; i < kk; ++i) {
    auto [lam, x] = lanczos_lowest(H, locked);
    r.values(i) = lam;
    locked.push_back(std::move(x));
  }
  if (with_vectors) {
    r.vectors.resize(H.rows(), kk);
    for (int i = 0; i < kk; ++i) r.vectors.col(i) = locked[i];
  }
  return r;
}

Eigen::VectorXd all_eigenvalues(const SpMat& H) {
  const Eigen::MatrixXcd D(H);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(D, Eigen::EigenvaluesOnly).eigenvalues();
}

Eigen::VectorXd full_many_body_spectrum(const Lattice& lat, double mu, double alpha) {
  const int N = lat.num_sites();
  if (N > 14) fail(ErrorCode::SizeLimit, "full many-body spectrum limited to N <= 14");
  const ManyBodyModel model(lat, mu, alpha);
  std::vector<double> all;
  for (int k = 0; k <= N; ++k) {
    const auto ev = all_eigenvalues(model.matrix(Representation::FixedNumber, k).matrix);
    all.insert(all.end(), ev.data(), ev.data() + ev.size());
  }
  std::sort(all.begin(), all.end());
  return Eigen::Map<Eigen::VectorXd>(all.data(), all.size());
}

GroundSpaceReport ground_space_dimension(const Lattice& lat, double mu) {
  GroundSpaceReport r;
  HamiltonianOptions o;
  o.mu = mu;
  const auto e = single_particle_spectrum(build_hamiltonian(lat, o)).energies;
  for (int i = 0; i < e.size(); ++i) r.zero_modes += std::abs(e(i)) < 1e-8;
  r.dimension = 1LL << r.zero_modes;
  const int N = lat.num_sites();
  if (N <= 12) {
    const ManyBodyModel model(lat, mu, 0.0);
    std::vector<Eigen::VectorXd> sectors;
    double emin = 1e300;
    for (int k = 0; k <= N; ++k) {
      sectors.push_back(all_eigenvalues(model.matrix(Representation::FixedNumber, k).matrix));
      emin = std::min(emin, sectors.back()(0));
    }
    r.ed_dimension = 0;
    for (int k = 0; k <= N; ++k) {
      int c = 0;
      for (int i = 0; i < sectors[k].size(); ++i) c += sectors[k](i) < emin + 1e-8;
      r.ed_dimension += c;
      if (c > 0) r.fillings.push_back(k);
    }
  }
  return r;
}

UniqueGroundReport verify_unique_ground_state(const Lattice& lat, double mu, double alpha) {
  if (!(mu > -2.0 && mu < 1.0)) fail(ErrorCode::InvalidArgument, "uniqueness check needs -2 < mu < 1");
  const int N = lat.num_sites();
  if (N > 24) fail(ErrorCode::SizeLimit, "uniqueness check limited to N <= 24");
  const ManyBodyModel model(lat, mu, alpha);
  struct Level {
    double e;
    int sector;
  };
  std::vector<Level> levels;
  for (int k = 0; k <= N; ++k) {
    const auto op = model.matrix(Representation::FixedNumber, k);
    const auto r = lowest_eigenpairs(op.matrix, 2, false);
    for (int i = 0; i < r.values.size(); ++i) levels.push_back({r.values(i), k});
  }
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.e < b.e; });
  UniqueGroundReport rep;
  rep.ground_energy = levels.front().e;
  rep.particles = levels.front().sector;
  rep.expected_energy = (-2.0 - mu) * (2 * N / 3);
  for (const auto& l : levels) {
    if (l.e < rep.ground_energy + 1e-8) {
      ++rep.degeneracy;
    } else {
      rep.gap = l.e - rep.ground_energy;
      break;
    }
  }
  if (rep.degeneracy > 1)
    fail(ErrorCode::Degeneracy, "ground state is " + std::to_string(rep.degeneracy) + "-fold degenerate");
  const auto op = model.matrix(Representation::FixedNumber, rep.particles);
  const auto gs = lowest_eigenpairs(op.matrix, 1, true);
  std::vector<SparseState::Term> terms;
  for (size_t i = 0; i < op.basis.size(); ++i) terms.push_back({op.basis[i], gs.vectors(i, 0)});
  const SparseState ed = SparseState::from_terms(N, std::move(terms));
  const SparseState built = apply_circuit(build_ground_state(lat), lat, alpha);
  rep.fidelity = fidelity(ed, built);
  return rep;
}

double energy_variance(const Lattice& lat, double mu, double alpha, const SparseState& s) {
  const ManyBodyModel model(lat, mu, alpha);
  const SparseState psi = s.normalized();
  const SparseState hpsi = model.apply(psi);
  const double e = psi.inner(hpsi).real();
  return hpsi.inner(hpsi).real() - e * e;
}

}  // namespace eulerpeps
