#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace eulerpeps {

enum class Boundary { Torus, CylinderOpenA1 };
enum class Sublattice : int { A = 0, B = 1, C = 2 };
enum class BondKind { NN, NNN, Third };

const char* boundary_name(Boundary b);
Boundary parse_boundary(const std::string& s);
const char* bond_kind_name(BondKind k);

struct SiteIndex {
  int m1 = 0;
  int m2 = 0;
  Sublattice sub = Sublattice::A;
  int flat = 0;
};

// A hexagon corner with its cell coordinates before wrapping, so that bond
// displacements and boundary windings can be read off directly.
struct HexCorner {
  int flat = 0;
  int u1 = 0;
  int u2 = 0;
  Sublattice sub = Sublattice::A;
};

// One (unordered) pair of hexagon corners. p < q are local positions 0..5.
struct BondEntry {
  int i = 0;
  int j = 0;
  int hex = 0;
  int p = 0;
  int q = 0;
  int w1 = 0;  // winding of j relative to i along a1
  int w2 = 0;
};

// Membership of a site in a hexagon at local position pos (0-based).
struct Membership {
  int hex = 0;
  int pos = 0;
};

// Reduced offset of each sublattice inside the unit cell.
Eigen::Vector2d sublattice_offset(Sublattice s);
// Cartesian lattice vectors of the 2D embedding.
Eigen::Vector2d lattice_vector(int which);
double unit_cell_area();

class Lattice {
 public:
  Lattice(int L1, int L2, Boundary boundary);

  int L1() const { return L1_; }
  int L2() const { return L2_; }
  Boundary boundary() const { return boundary_; }
  int num_sites() const { return 3 * L1_ * L2_; }
  int num_cells() const { return L1_ * L2_; }
  int num_hexagons() const { return static_cast<int>(hexagons_.size()); }

  int flat_index(int m1, int m2, Sublattice s) const;
  SiteIndex site(int flat) const;
  Eigen::Vector2d position(int flat) const;

  const std::array<HexCorner, 6>& hexagon(int h) const;
  std::array<SiteIndex, 6> hexagon_sites(int h) const;
  std::array<int, 6> hexagon_flat(int h) const;
  // True unless the hexagon wraps the open a1 edge of a cylinder.
  bool hexagon_complete(int h) const;
  const std::vector<Membership>& memberships(int flat) const { return members_.at(flat); }

  std::vector<BondEntry> neighbor_pairs(BondKind kind) const;

 private:
  int L1_;
  int L2_;
  Boundary boundary_;
  std::vector<std::array<HexCorner, 6>> hexagons_;
  std::vector<std::vector<Membership>> members_;
};

Lattice build_lattice(int L1, int L2, Boundary boundary);
nlohmann::json lattice_to_json(const Lattice& lat);

// Local positions paired by the C2 rotation about the hexagon centre.
inline int antipode(int pos) { return (pos + 3) % 6; }

}  // namespace eulerpeps
