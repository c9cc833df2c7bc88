#include "eulerpeps/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "eulerpeps/error.hpp"

namespace eulerpeps {

GateLayout gate_layout(const Lattice& lat) {
  GateLayout g;
  g.num_sites = lat.num_sites();
  for (int h = 0; h < lat.num_hexagons(); ++h) {
    const auto f = lat.hexagon_flat(h);
    for (int p = 0; p < 6; ++p) g.bonds.push_back({f[p], f[(p + 1) % 6], h, p, p < 3 ? 1 : -1});
  }
  return g;
}

nlohmann::json layout_to_json(const GateLayout& layout) {
  nlohmann::json bonds = nlohmann::json::array();
  for (const auto& b : layout.bonds)
    bonds.push_back({{"i", b.i}, {"j", b.j}, {"hexagon", b.hex}, {"position", b.pos + 1}, {"sigma", b.sigma}});
  return {{"num_sites", layout.num_sites}, {"bonds", bonds}};
}

int circuit_charge(const GateLayout& layout, Bits b) {
  int c = 0;
  for (const auto& g : layout.bonds) c += g.sigma * int((b >> g.i) & (b >> g.j) & 1);
  return c;
}

SparseState apply_circuit(const SparseState& s, const GateLayout& layout, double alpha) {
  std::vector<SparseState::Term> out;
  out.reserve(s.size());
  for (const auto& [b, a] : s.terms()) out.push_back({b, a * std::polar(1.0, alpha * circuit_charge(layout, b))});
  return SparseState::from_terms(s.num_modes(), std::move(out));
}

SparseState apply_circuit(const SparseState& s, const Lattice& lat, double alpha) {
  return apply_circuit(s, gate_layout(lat), alpha);
}

LayoutReport c2t_layout_check(const Lattice& lat, const GateLayout& layout) {
  LayoutReport r;
  std::map<int, std::array<int, 6>> sig;
  for (const auto& g : layout.bonds) sig[g.hex][g.pos] = g.sigma;
  for (const auto& [h, s] : sig)
    for (int j = 0; j < 3; ++j)
      if (s[j] != -s[j + 3]) ++r.conjugation_violations;
  std::map<std::pair<int, int>, int> cover;
  for (const auto& g : layout.bonds) ++cover[{std::min(g.i, g.j), std::max(g.i, g.j)}];
  for (const auto& e : lat.neighbor_pairs(BondKind::NN)) {
    const auto key = std::make_pair(std::min(e.i, e.j), std::max(e.i, e.j));
    auto it = cover.find(key);
    if (it == cover.end())
      ++r.uncovered_bonds;
    else if (it->second != 1)
      ++r.multiply_covered_bonds;
  }
  r.c2t_ok = r.conjugation_violations == 0;
  r.unique_ok = r.uncovered_bonds == 0 && r.multiply_covered_bonds == 0;
  return r;
}

std::vector<std::vector<std::pair<int, int>>> dressing_table(const GateLayout& layout) {
  std::vector<std::vector<std::pair<int, int>>> t(layout.num_sites);
  for (const auto& g : layout.bonds) {
    t[g.i].push_back({g.j, g.sigma});
    t[g.j].push_back({g.i, g.sigma});
  }
  return t;
}

namespace {

void check_dense_size(int n) {
  if (n > 14) fail(ErrorCode::SizeLimit, "dense Fock-space operators limited to N <= 14");
}

}  // namespace

SpMat creation_matrix(int num_modes, int site) {
  check_dense_size(num_modes);
  const Bits dim = Bits(1) << num_modes;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Bits y = 0; y < dim; ++y) {
    if ((y >> site) & 1) continue;
    trip.emplace_back(static_cast<Eigen::Index>(y | (Bits(1) << site)), static_cast<Eigen::Index>(y),
                      cplx(ladder_sign(y, site)));
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat dressed_creation(const Lattice& lat, int site, double alpha) {
  const int n = lat.num_sites();
  check_dense_size(n);
  const auto table = dressing_table(gate_layout(lat));
  const Bits dim = Bits(1) << n;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Bits y = 0; y < dim; ++y) {
    if ((y >> site) & 1) continue;
    // a_i† Π_j [1 − (1 − e^{iσα}) n_j] acting on |y⟩
    cplx f = 1.0;
    for (const auto& [j, sigma] : table[site])
      if ((y >> j) & 1) f *= 1.0 - (1.0 - std::polar(1.0, sigma * alpha));
    trip.emplace_back(static_cast<Eigen::Index>(y | (Bits(1) << site)), static_cast<Eigen::Index>(y),
                      f * double(ladder_sign(y, site)));
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat conjugated_creation(const Lattice& lat, int site, double alpha) {
  const int n = lat.num_sites();
  const GateLayout layout = gate_layout(lat);
  SpMat a = creation_matrix(n, site);
  // (U a† U†)_{xy} = U_x a†_{xy} conj(U_y) for diagonal U.
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      const Bits x = static_cast<Bits>(it.row());
      const Bits y = static_cast<Bits>(it.col());
      it.valueRef() *= std::polar(1.0, alpha * (circuit_charge(layout, x) - circuit_charge(layout, y)));
    }
  return a;
}

ManyBodyOperator transformed_hamiltonian(const Lattice& lat, double mu, double alpha, Representation rep,
                                         int particles) {
  return many_body_hamiltonian(lat, mu, alpha, rep, particles);
}

}  // namespace eulerpeps
