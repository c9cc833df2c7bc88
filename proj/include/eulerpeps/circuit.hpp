#pragma once

#include <string>
#include <vector>

#include "eulerpeps/fock.hpp"
#include "eulerpeps/lattice.hpp"

namespace eulerpeps {

// Gate on hexagon edge (pos, pos+1); σ = +1 for pos 0..2 and −1 for 3..5.
struct GateBond {
  int i = 0;
  int j = 0;
  int hex = 0;
  int pos = 0;
  int sigma = 1;
};

struct GateLayout {
  int num_sites = 0;
  std::vector<GateBond> bonds;
};

GateLayout gate_layout(const Lattice& lat);
nlohmann::json layout_to_json(const GateLayout& layout);

// Σ_bonds σ n_i n_j for one basis pattern.
int circuit_charge(const GateLayout& layout, Bits b);
SparseState apply_circuit(const SparseState& s, const GateLayout& layout, double alpha);
SparseState apply_circuit(const SparseState& s, const Lattice& lat, double alpha);

struct LayoutReport {
  bool c2t_ok = true;
  bool unique_ok = true;
  int conjugation_violations = 0;
  int uncovered_bonds = 0;
  int multiply_covered_bonds = 0;
  bool pass() const { return c2t_ok && unique_ok; }
};

LayoutReport c2t_layout_check(const Lattice& lat, const GateLayout& layout);

// Per-site (neighbour, σ) lists used to dress ladder operators.
std::vector<std::vector<std::pair<int, int>>> dressing_table(const GateLayout& layout);

// Full Fock-space matrices (N ≤ 14).
SpMat creation_matrix(int num_modes, int site);
SpMat dressed_creation(const Lattice& lat, int site, double alpha);
// U a† U† assembled from the diagonal circuit phases; oracle for dressed_creation.
SpMat conjugated_creation(const Lattice& lat, int site, double alpha);

ManyBodyOperator transformed_hamiltonian(const Lattice& lat, double mu, double alpha,
                                         Representation rep = Representation::FixedNumber, int particles = -1);

}  // namespace eulerpeps
