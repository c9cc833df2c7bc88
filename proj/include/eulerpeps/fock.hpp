#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "eulerpeps/lattice.hpp"
#include "eulerpeps/realspace.hpp"

namespace eulerpeps {

using Bits = std::uint64_t;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

constexpr double kPruneThreshold = 1e-15;

// Bit i of a basis pattern is the occupation of mode i in canonical order.
class SparseState {
 public:
  using Term = std::pair<Bits, cplx>;

  SparseState() = default;
  explicit SparseState(int num_modes) : num_modes_(num_modes) {}
  static SparseState basis(int num_modes, Bits b, cplx amp = 1.0);
  static SparseState from_map(int num_modes, const std::unordered_map<Bits, cplx>& acc);
  static SparseState from_terms(int num_modes, std::vector<Term> terms);

  int num_modes() const { return num_modes_; }
  const std::vector<Term>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  cplx amplitude(Bits b) const;
  double norm() const;
  cplx inner(const SparseState& other) const;  // ⟨this|other⟩
  SparseState normalized() const;
  SparseState scaled(cplx s) const;
  SparseState plus(const SparseState& other, cplx s = 1.0) const;  // this + s·other
  // Every stored pattern has this particle number, or -1 if mixed/empty.
  int particle_number() const;

 private:
  int num_modes_ = 0;
  std::vector<Term> terms_;  // sorted by pattern, no |amp| <= kPruneThreshold
};

enum class Ladder { Create, Annihilate };

// (−1)^{number of occupied modes below site}
inline int ladder_sign(Bits b, int site) {
  const Bits below = site == 0 ? 0 : (b & ((Bits(1) << site) - 1));
  return (__builtin_popcountll(below) & 1) ? -1 : 1;
}

SparseState apply_ladder(const SparseState& s, int site, Ladder kind);

struct HexOperator {
  int hex = 0;
  std::array<int, 6> sites{};
  std::array<cplx, 6> coef{};
};

HexOperator hex_operator(const Lattice& lat, int h, const Beta& beta = default_beta());
// Σ_p coef_p a_{site_p}
SparseState hex_annihilate(const SparseState& s, const HexOperator& op);
// {A, B†} for one-body annihilators A = Σ α_i a_i, B = Σ γ_j a_j: Σ_i α_i γ_i*.
cplx anticommutator(const HexOperator& a, const HexOperator& b);

// Π_⬡ ã⬡ |1…1⟩, hexagons applied in the given order (default ascending id).
SparseState build_ground_state(const Lattice& lat, const std::optional<Beta>& beta = std::nullopt,
                               const std::vector<int>& order = {});
SparseState build_ground_state(const Lattice& lat, const std::vector<Beta>& per_hex,
                               const std::vector<int>& order = {});

double fidelity(const SparseState& a, const SparseState& b);

std::string serialize_state(const SparseState& s);
SparseState parse_state(const std::string& text);

// Patterns of n modes holding exactly k particles, ascending.
std::vector<Bits> sector_basis(int n, int k);

enum class Representation { Full, FixedNumber };

struct ManyBodyOperator {
  SpMat matrix;
  std::vector<Bits> basis;
  int num_modes = 0;
  int particles = -1;  // -1 for the full Fock space
};

// H (α = 0) or H′ = U H U† (α ≠ 0) written with dressed operators. Hoppings are
// the same hexagon-pair entries as the single-particle Hamiltonian.
class ManyBodyModel {
 public:
  ManyBodyModel(const Lattice& lat, double mu, double alpha);

  int num_modes() const { return n_; }
  // Emits (pattern, amplitude) for H|b⟩.
  template <class F>
  void apply(Bits b, F&& emit) const;
  SparseState apply(const SparseState& s) const;
  ManyBodyOperator matrix(Representation rep, int particles = -1) const;

 private:
  cplx dressing(int site, Bits b) const;

  int n_;
  double mu_;
  double alpha_;
  std::vector<std::pair<int, int>> hops_;                 // ordered (i, j) for a_i† a_j
  std::vector<std::vector<std::pair<int, int>>> dress_;   // per site: (neighbour, σ)
};

template <class F>
void ManyBodyModel::apply(Bits b, F&& emit) const {
  const double diag = -mu_ * __builtin_popcountll(b);
  if (diag != 0.0) emit(b, cplx(diag));
  for (const auto& [i, j] : hops_) {
    if (!((b >> j) & 1)) continue;
    const Bits b1 = b & ~(Bits(1) << j);
    if ((b1 >> i) & 1) continue;
    const int s = ladder_sign(b, j) * ladder_sign(b1, i);
    cplx amp = s;
    if (alpha_ != 0.0) amp *= std::conj(dressing(j, b1)) * dressing(i, b1);
    emit(b1 | (Bits(1) << i), amp);
  }
}

ManyBodyOperator many_body_hamiltonian(const Lattice& lat, double mu, double alpha,
                                       Representation rep = Representation::FixedNumber, int particles = -1);

struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

// Lowest k eigenpairs of a Hermitian sparse matrix: dense solve up to
// dense_limit, Lanczos with full reorthogonalisation above.
EigenResult lowest_eigenpairs(const SpMat& H, int k, bool with_vectors, int dense_limit = 2500);
Eigen::VectorXd all_eigenvalues(const SpMat& H);

// Sorted spectrum over every particle-number sector.
Eigen::VectorXd full_many_body_spectrum(const Lattice& lat, double mu, double alpha);

struct GroundSpaceReport {
  long long dimension = 0;       // 2^(zero modes)
  int zero_modes = 0;
  long long ed_dimension = -1;   // kernel size from ED, N ≤ 12 only
  std::vector<int> fillings;     // particle numbers present in the ED kernel
};

GroundSpaceReport ground_space_dimension(const Lattice& lat, double mu = -2.0);

struct UniqueGroundReport {
  double ground_energy = 0.0;
  int particles = 0;
  int degeneracy = 0;
  double gap = 0.0;
  double fidelity = 0.0;  // against the circuit-dressed constructed state
  double expected_energy = 0.0;
};

UniqueGroundReport verify_unique_ground_state(const Lattice& lat, double mu, double alpha);

// ⟨H²⟩ − ⟨H⟩² for a normalised copy of s.
double energy_variance(const Lattice& lat, double mu, double alpha, const SparseState& s);

}  // namespace eulerpeps
