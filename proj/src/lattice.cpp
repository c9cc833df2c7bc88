#include "eulerpeps/lattice.hpp"

#include <cmath>
#include <string>

#include "eulerpeps/error.hpp"

namespace eulerpeps {

namespace {

struct Corner {
  int d1, d2;
  Sublattice sub;
};

// Hexagon of cell (m1, m2), counterclockwise from the lower-left A site.
constexpr std::array<Corner, 6> kHexTemplate = {{
    {0, 0, Sublattice::A},
    {0, 1, Sublattice::B},
    {1, 1, Sublattice::C},
    {1, 0, Sublattice::A},
    {0, 0, Sublattice::B},
    {0, 0, Sublattice::C},
}};

int wrap(int x, int L) { return ((x % L) + L) % L; }
int winding(int x, int L) { return (x - wrap(x, L)) / L; }

}  // namespace

const char* boundary_name(Boundary b) {
  return b == Boundary::Torus ? "torus" : "cylinder-open-a1";
}

Boundary parse_boundary(const std::string& s) {
  if (s == "torus") return Boundary::Torus;
  if (s == "cylinder" || s == "cylinder-open-a1") return Boundary::CylinderOpenA1;
  fail(ErrorCode::InvalidArgument, "unknown boundary '" + s + "'");
}

const char* bond_kind_name(BondKind k) {
  switch (k) {
    case BondKind::NN: return "nn";
    case BondKind::NNN: return "nnn";
    case BondKind::Third: return "third";
  }
  return "?";
}

Eigen::Vector2d sublattice_offset(Sublattice s) {
  switch (s) {
    case Sublattice::A: return {0.0, 0.5};
    case Sublattice::B: return {0.5, 0.0};
    case Sublattice::C: return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

Eigen::Vector2d lattice_vector(int which) {
  if (which == 1) return {std::sqrt(3.0) / 2.0, 0.5};
  return {0.0, -1.0};
}

double unit_cell_area() { return std::sqrt(3.0) / 2.0; }

Lattice::Lattice(int L1, int L2, Boundary boundary) : L1_(L1), L2_(L2), boundary_(boundary) {
  if (L1 < 2 || L2 < 2)
    fail(ErrorCode::DegenerateSize, "lattice needs L1 >= 2 and L2 >= 2, got " + std::to_string(L1) +
                                        "x" + std::to_string(L2));
  members_.assign(num_sites(), {});
  hexagons_.reserve(num_cells());
  for (int m1 = 0; m1 < L1_; ++m1) {
    for (int m2 = 0; m2 < L2_; ++m2) {
      std::array<HexCorner, 6> hx{};
      for (int p = 0; p < 6; ++p) {
        const Corner& c = kHexTemplate[p];
        hx[p].u1 = m1 + c.d1;
        hx[p].u2 = m2 + c.d2;
        hx[p].sub = c.sub;
        hx[p].flat = flat_index(hx[p].u1, hx[p].u2, c.sub);
        members_[hx[p].flat].push_back({static_cast<int>(hexagons_.size()), p});
      }
      hexagons_.push_back(hx);
    }
  }
}

int Lattice::flat_index(int m1, int m2, Sublattice s) const {
  return 3 * (wrap(m1, L1_) * L2_ + wrap(m2, L2_)) + static_cast<int>(s);
}

SiteIndex Lattice::site(int flat) const {
  if (flat < 0 || flat >= num_sites()) fail(ErrorCode::InvalidArgument, "site index out of range");
  const int cell = flat / 3;
  return {cell / L2_, cell % L2_, static_cast<Sublattice>(flat % 3), flat};
}

Eigen::Vector2d Lattice::position(int flat) const {
  const SiteIndex s = site(flat);
  const Eigen::Vector2d o = sublattice_offset(s.sub);
  return (s.m1 + o.x()) * lattice_vector(1) + (s.m2 + o.y()) * lattice_vector(2);
}

const std::array<HexCorner, 6>& Lattice::hexagon(int h) const {
  if (h < 0 || h >= num_hexagons())
    fail(ErrorCode::InvalidHexagon, "hexagon id " + std::to_string(h) + " out of range");
  return hexagons_[h];
}

std::array<SiteIndex, 6> Lattice::hexagon_sites(int h) const {
  std::array<SiteIndex, 6> out{};
  const auto& hx = hexagon(h);
  for (int p = 0; p < 6; ++p) out[p] = site(hx[p].flat);
  return out;
}

std::array<int, 6> Lattice::hexagon_flat(int h) const {
  std::array<int, 6> out{};
  const auto& hx = hexagon(h);
  for (int p = 0; p < 6; ++p) out[p] = hx[p].flat;
  return out;
}

bool Lattice::hexagon_complete(int h) const {
  if (boundary_ == Boundary::Torus) return true;
  for (const auto& c : hexagon(h))
    if (c.u1 >= L1_) return false;
  return true;
}

std::vector<BondEntry> Lattice::neighbor_pairs(BondKind kind) const {
  const int sep = kind == BondKind::NN ? 1 : kind == BondKind::NNN ? 2 : 3;
  const int count = sep == 3 ? 3 : 6;
  std::vector<BondEntry> out;
  out.reserve(count * hexagons_.size());
  for (int h = 0; h < num_hexagons(); ++h) {
    const auto& hx = hexagons_[h];
    for (int p = 0; p < count; ++p) {
      const int q = (p + sep) % 6;
      const HexCorner& a = hx[p];
      const HexCorner& b = hx[q];
      BondEntry e;
      e.i = a.flat;
      e.j = b.flat;
      e.hex = h;
      e.p = p;
      e.q = q;
      e.w1 = winding(b.u1, L1_) - winding(a.u1, L1_);
      e.w2 = winding(b.u2, L2_) - winding(a.u2, L2_);
      if (boundary_ == Boundary::CylinderOpenA1 && e.w1 != 0) continue;
      out.push_back(e);
    }
  }
  return out;
}

Lattice build_lattice(int L1, int L2, Boundary boundary) { return Lattice(L1, L2, boundary); }

nlohmann::json lattice_to_json(const Lattice& lat) {
  using nlohmann::json;
  json j;
  j["L1"] = lat.L1();
  j["L2"] = lat.L2();
  j["boundary"] = boundary_name(lat.boundary());
  json sites = json::array();
  const char* names[] = {"A", "B", "C"};
  for (int f = 0; f < lat.num_sites(); ++f) {
    const SiteIndex s = lat.site(f);
    const Eigen::Vector2d r = lat.position(f);
    sites.push_back({{"flat", f},
                     {"cell", {s.m1, s.m2}},
                     {"sublattice", names[static_cast<int>(s.sub)]},
                     {"position", {r.x(), r.y()}}});
  }
  j["sites"] = sites;
  json hexes = json::array();
  for (int h = 0; h < lat.num_hexagons(); ++h) hexes.push_back(lat.hexagon_flat(h));
  j["hexagons"] = hexes;
  json bonds;
  for (BondKind k : {BondKind::NN, BondKind::NNN, BondKind::Third}) {
    json list = json::array();
    for (const auto& e : lat.neighbor_pairs(k)) list.push_back({e.i, e.j});
    bonds[bond_kind_name(k)] = list;
  }
  j["bonds"] = bonds;
  return j;
}

}  // namespace eulerpeps
