#include "eulerpeps/peps.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "eulerpeps/error.hpp"

namespace eulerpeps {

namespace {

using Wide = unsigned __int128;

int popcount(Wide x) {
  return __builtin_popcountll(static_cast<std::uint64_t>(x)) + __builtin_popcountll(static_cast<std::uint64_t>(x >> 64));
}

double sign_below(Wide x, int mode) {
  const Wide mask = mode == 0 ? Wide(0) : ((Wide(1) << mode) - 1);
  return (popcount(x & mask) & 1) ? -1.0 : 1.0;
}

bool bit(Wide x, int mode) { return (x >> mode) & 1; }

}  // namespace

WTensor w_tensor(WVariant v) {
  WTensor w;
  w.variant = v;
  const double s6 = 1.0 / std::sqrt(6.0);
  if (v == WVariant::D2) {
    w.D = 2;
    w.A[0] = Eigen::MatrixXd::Zero(2, 2);
    w.A[1] = Eigen::MatrixXd::Zero(2, 2);
    w.A[0](0, 1) = s6;
    w.A[1](0, 0) = 1.0;
    w.A[1](1, 1) = -1.0;
    w.Q = Eigen::MatrixXd::Zero(2, 2);
    w.Q(1, 0) = 1.0;
  } else {
    w.D = 6;
    w.A[0] = Eigen::MatrixXd::Zero(6, 6);
    w.A[1] = Eigen::MatrixXd::Zero(6, 6);
    w.A[0](5, 0) = s6;
    for (int l = 0; l < 5; ++l) w.A[1](l, l + 1) = 1.0;
    w.Q = Eigen::MatrixXd::Identity(6, 6);
  }
  return w;
}

std::array<double, 64> contract_w_ring(WVariant v) {
  const WTensor w = w_tensor(v);
  std::array<double, 64> amp{};
  for (int b = 0; b < 64; ++b) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(w.D, w.D);
    if (v == WVariant::D2) {
      // A^{s6} ⋯ A^{s1} Q; A¹ = diag(1, −1) carries the fermionic string.
      for (int i = 5; i >= 0; --i) P = P * w.A[(b >> i) & 1];
      amp[b] = (P * w.Q).trace();
    } else {
      // The D = 6 ring is the bosonic W state; attach the string explicitly.
      for (int i = 0; i < 6; ++i) P = P * w.A[(b >> i) & 1];
      int parity = 0;
      for (int i = 0; i < 6; ++i)
        if (!((b >> i) & 1)) parity += __builtin_popcount(b & ((1 << i) - 1));
      amp[b] = (P * w.Q).trace() * ((parity & 1) ? -1.0 : 1.0);
    }
  }
  return amp;
}

std::array<double, 64> simplex_state_amplitudes() {
  const SparseState full = SparseState::basis(6, 0b111111);
  SparseState acc(6);
  for (int i = 0; i < 6; ++i) acc = acc.plus(apply_ladder(full, i, Ladder::Annihilate), 1.0 / std::sqrt(6.0));
  std::array<double, 64> amp{};
  for (const auto& [b, a] : acc.terms()) amp[b] = a.real();
  return amp;
}

int MapTensor::nonzeros() const {
  int c = 0;
  for (const auto& x : m)
    for (const auto& y : x)
      for (double z : y) c += z != 0.0;
  return c;
}

MapTensor default_map_tensor() {
  MapTensor M;
  M.m[1][1][1] = 1.0;
  M.m[0][1][0] = 1.0;
  M.m[0][0][1] = -1.0;
  return M;
}

int Tensor5::nonzeros(double tol) const {
  int c = 0;
  for (const auto& x : data) c += std::abs(x) > tol;
  return c;
}

Tensor5 assemble_site_tensor(WVariant v, const MapTensor& M) {
  const WTensor w = w_tensor(v);
  Tensor5 T(2, w.D);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double m = M.m[i][a][b];
        if (m == 0.0) continue;
        for (int u = 0; u < w.D; ++u)
          for (int l = 0; l < w.D; ++l)
            for (int d = 0; d < w.D; ++d)
              for (int r = 0; r < w.D; ++r) T(i, u, l, d, r) += m * w.A[a](l, r) * w.A[b](u, d);
      }
  return T;
}

bool site_tensor_parity_even(const Tensor5& T) {
  if (T.D != 2) fail(ErrorCode::InvalidArgument, "parity grading is defined for the D = 2 tensors only");
  for (int i = 0; i < 2; ++i)
    for (int u = 0; u < 2; ++u)
      for (int l = 0; l < 2; ++l)
        for (int d = 0; d < 2; ++d)
          for (int r = 0; r < 2; ++r)
            if (std::abs(T(i, u, l, d, r)) > 0.0 && ((1 - i) + u + l + d + r) % 2 != 0) return false;
  return true;
}

RTensorPair build_r_pair(double alpha, int branch) {
  RTensorPair r;
  r.alpha = alpha;
  r.branch = branch >= 0 ? 1 : -1;
  r.R[0][0][0] = 1.0;
  r.R[0][1][1] = 1.0;
  r.R[1][1][1] = std::sqrt(-1.0 + std::polar(1.0, r.branch * alpha));
  return r;
}

double r_pair_residual(const RTensorPair& r) {
  const cplx e = std::polar(1.0, r.branch * r.alpha);
  double worst = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          cplx s = 0.0;
          for (int q = 0; q < 2; ++q) s += r.R[q][a][b] * r.R[q][c][d];
          const cplx gate = (a == b && c == d) ? (a == 1 && c == 1 ? e : cplx(1.0)) : cplx(0.0);
          worst = std::max(worst, std::abs(s - gate));
        }
  return worst;
}

std::array<int, 4> leg_branches(Sublattice s) {
  // Site at position p ≤ 3 of one hexagon (left/right legs on edges p−1, p)
  // and p+3 of another (up/down legs on edges p+2, p+3); σ = + on edges 1..3.
  switch (s) {
    case Sublattice::A: return {+1, -1, -1, +1};
    case Sublattice::B: return {-1, +1, -1, +1};
    case Sublattice::C: return {-1, +1, -1, +1};
  }
  return {1, 1, 1, 1};
}

Tensor5 assemble_interacting_tensor(const Tensor5& T, double alpha, Sublattice s) {
  const int D = T.D;
  const auto br = leg_branches(s);
  std::array<RTensorPair, 4> R;
  for (int k = 0; k < 4; ++k) R[k] = build_r_pair(alpha, br[k]);
  Tensor5 out(T.dp, 2 * D);
  for (int i = 0; i < T.dp; ++i)
    for (int u = 0; u < D; ++u)
      for (int l = 0; l < D; ++l)
        for (int d = 0; d < D; ++d)
          for (int r = 0; r < D; ++r) {
            const cplx t = T(i, u, l, d, r);
            if (t == cplx(0.0)) continue;
            for (int qu = 0; qu < 2; ++qu)
              for (int ql = 0; ql < 2; ++ql)
                for (int qd = 0; qd < 2; ++qd)
                  for (int qr = 0; qr < 2; ++qr)
                    out(i, qu * D + u, ql * D + l, qd * D + d, qr * D + r) =
                        t * R[0].R[qu][i][i] * R[1].R[ql][i][i] * R[2].R[qd][i][i] * R[3].R[qr][i][i];
          }
  return out;
}

SparseState evaluate_peps_state(const Lattice& lat, const std::vector<Beta>& per_hex, const MapTensor& M,
                                const std::vector<int>& order) {
  if (lat.boundary() != Boundary::Torus) fail(ErrorCode::InvalidArgument, "PEPS evaluation needs a torus");
  const int H = lat.num_hexagons();
  const int N = lat.num_sites();
  if (H > 12) fail(ErrorCode::SizeLimit, "PEPS enumeration limited to 12 hexagons");
  const int V = 6 * H;
  std::vector<int> seq = order;
  if (seq.empty())
    for (int h = 0; h < H; ++h) seq.push_back(h);
  // c′ is the virtual mode at the site's position 1..3, c the one at 4..6.
  std::vector<int> cprime(N), cright(N);
  for (int j = 0; j < N; ++j)
    for (const auto& mem : lat.memberships(j)) (mem.pos < 3 ? cprime[j] : cright[j]) = 6 * mem.hex + mem.pos;

  std::unordered_map<Bits, cplx> acc;
  std::vector<int> hole(H, 0);
  const Wide virt_full = (Wide(1) << V) - 1;
  while (true) {
    Wide s = virt_full;
    cplx coef = 1.0;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
      const int h = *it;
      const int mode = 6 * h + hole[h];
      const Beta& b = per_hex.empty() ? default_beta() : per_hex.at(h);
      coef *= sign_below(s, mode) * b[hole[h]];
      s &= ~(Wide(1) << mode);
    }
    for (int j = N - 1; j >= 0 && coef != cplx(0.0); --j) {
      const int cp = cprime[j], cc = cright[j];
      const bool op = bit(s, cp), oc = bit(s, cc);
      if (op && oc) {
        coef *= M.m[1][1][1] * sign_below(s, cc);
        s &= ~(Wide(1) << cc);
        coef *= sign_below(s, cp);
        s &= ~(Wide(1) << cp);
        coef *= sign_below(s, V + j);
        s |= Wide(1) << (V + j);
      } else if (op) {
        coef *= M.m[0][1][0] * sign_below(s, cp);
        s &= ~(Wide(1) << cp);
      } else if (oc) {
        coef *= M.m[0][0][1] * sign_below(s, cc);
        s &= ~(Wide(1) << cc);
      } else {
        coef = 0.0;
      }
    }
    if (coef != cplx(0.0)) acc[static_cast<Bits>(s >> V)] += coef;
    int k = 0;
    while (k < H && ++hole[k] == 6) hole[k++] = 0;
    if (k == H) break;
  }
  return SparseState::from_map(N, acc);
}

SparseState evaluate_peps_state(const Lattice& lat, const Beta& beta) {
  return evaluate_peps_state(lat, std::vector<Beta>(lat.num_hexagons(), beta));
}

nlohmann::json tensor_to_json(const Tensor5& T) {
  using nlohmann::json;
  json re = json::array(), im = json::array();
  for (int i = 0; i < T.dp; ++i) {
    json ri = json::array(), ii = json::array();
    for (int u = 0; u < T.D; ++u) {
      json ru = json::array(), iu = json::array();
      for (int l = 0; l < T.D; ++l) {
        json rl = json::array(), il = json::array();
        for (int d = 0; d < T.D; ++d) {
          json rd = json::array(), id = json::array();
          for (int r = 0; r < T.D; ++r) {
            rd.push_back(T(i, u, l, d, r).real());
            id.push_back(T(i, u, l, d, r).imag());
          }
          rl.push_back(rd);
          il.push_back(id);
        }
        ru.push_back(rl);
        iu.push_back(il);
      }
      ri.push_back(ru);
      ii.push_back(iu);
    }
    re.push_back(ri);
    im.push_back(ii);
  }
  return {{"index_order", {"physical", "up", "left", "down", "right"}},
          {"shape", {T.dp, T.D, T.D, T.D, T.D}},
          {"real", re},
          {"imag", im}};
}

}  // namespace eulerpeps
