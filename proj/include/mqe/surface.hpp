#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "mqe/basket.hpp"
#include "mqe/covers.hpp"
#include "mqe/error.hpp"
#include "mqe/group.hpp"
#include "mqe/rational.hpp"
#include "mqe/search_space.hpp"
#include "mqe/singularities.hpp"

namespace mqe {

// One candidate: the generating vector lives in `g0`, which carries the
// mixed action through tau = tau'^2 and phi = conjugation by tau'.
struct MixedData {
  const FiniteGroup* g0 = nullptr;
  Elem tau = 0;
  GroupMap phi;
  GeneratingVector vector;
  Signature signature;
  int genus = 0;
  std::size_t order_G = 0;
};

inline MixedData make_mixed_data(const FiniteGroup& g0, Elem tau, GroupMap phi, GeneratingVector v,
                                 const Signature& sig) {
  MixedData d;
  d.g0 = &g0;
  d.tau = tau;
  d.phi = std::move(phi);
  d.vector = std::move(v);
  d.signature = sig;
  d.genus = genus_of_cover(static_cast<std::int64_t>(g0.order()), sig);
  d.order_G = 2 * g0.order();
  return d;
}

// A singular point of Y = (C x C)/G0 over the branch pair (i, j), named by
// the K_i-orbit of the coset rep K_j; type C(n, a) with the a as computed
// (not canonicalized). `fixed` marks points fixed by the involution of Y.
struct YPoint {
  int i = 0, j = 0;
  Elem rep = 0;
  int n = 0, a = 0;
  bool fixed = false;
  auto key() const { return std::make_tuple(i, j, n, a, fixed); }
};

namespace detail {

// exponent[x] = t when x = h^t (0 <= t < ord h), -1 otherwise
inline std::vector<int> power_exponents(const FiniteGroup& G, Elem h) {
  std::vector<int> e(G.order(), -1);
  Elem x = 0;
  for (unsigned t = 0; t < G.element_order(h); ++t, x = G.mul(x, h)) e[x] = static_cast<int>(t);
  return e;
}

inline Subgroup cyclic_subgroup(const FiniteGroup& G, Elem h) {
  std::vector<Elem> m;
  Elem x = 0;
  for (unsigned t = 0; t < G.element_order(h); ++t, x = G.mul(x, h)) m.push_back(x);
  return Subgroup(G.order(), std::move(m));
}

inline GroupMap inverse_on(const GroupMap& f) {
  GroupMap r;
  r.images.assign(f.images.size(), kNoElem);
  for (std::size_t x = 0; x < f.images.size(); ++x) r.images[f.images[x]] = static_cast<Elem>(x);
  return r;
}

}  // namespace detail

// Whether the point (K_i, b K_i) over the diagonal pair is fixed by the
// involution: some h in G0 has phi(h) tau h in K_i and phi(h) b in K_i.
inline bool fixed_point_test(const MixedData& d, int i, int j, Elem b) {
  if (i != j) fail(ErrorCode::NotDiagonal, "fixed points only lie over diagonal pairs");
  const FiniteGroup& G = *d.g0;
  const Elem hi = d.vector.tail[static_cast<std::size_t>(i)];
  Subgroup K = detail::cyclic_subgroup(G, hi);
  GroupMap phi_inv = detail::inverse_on(d.phi);
  const Elem b_inv = G.inv(b);
  for (Elem k : K.members()) {
    Elem h = phi_inv(G.mul(k, b_inv));
    if (K.contains(G.mul(G.mul(d.phi(h), d.tau), h))) return true;
  }
  return false;
}

// Singular points of Y: for each ordered pair (i, j), K_i acts on G0/K_j by
// k . bK_j = phi(k) b K_j. An orbit through bK_j has stabilizer of order
// n = |{k in K_i : phi(k) in b K_j b^-1}|; its generator x = h_i^(m_i/n)
// satisfies b^-1 phi(x) b = h_j^gamma and the point is C(n, n gamma / m_j).
inline std::vector<YPoint> singular_points_Y(const MixedData& d) {
  const FiniteGroup& G = *d.g0;
  const auto& h = d.vector.tail;
  const int r = static_cast<int>(h.size());
  std::vector<YPoint> out;
  for (int i = 0; i < r; ++i) {
    const int mi = static_cast<int>(G.element_order(h[i]));
    const Elem step = d.phi(h[i]);
    for (int j = 0; j < r; ++j) {
      const int mj = static_cast<int>(G.element_order(h[j]));
      Subgroup Kj = detail::cyclic_subgroup(G, h[j]);
      auto exp_j = detail::power_exponents(G, h[j]);
      LeftCosets cos = left_coset_partition(G, Kj);
      std::vector<char> seen(cos.reps.size(), 0);
      for (std::size_t c = 0; c < cos.reps.size(); ++c) {
        if (seen[c]) continue;
        const Elem b = cos.reps[c];
        // walk the orbit
        std::size_t len = 0;
        for (Elem x = b;;) {
          auto id = cos.id_of[x];
          if (seen[id]) break;
          seen[id] = 1;
          ++len;
          x = G.mul(step, cos.reps[id]);
        }
        const int n = mi / static_cast<int>(len);
        if (n == 1) continue;
        const Elem x = G.pow(h[i], mi / n);
        const int gamma = exp_j[G.mul(G.mul(G.inv(b), d.phi(x)), b)];
        if (gamma <= 0) fail(ErrorCode::InvariantViolation, "stabilizer generator misses K_j");
        YPoint p;
        p.i = i;
        p.j = j;
        p.rep = b;
        p.n = n;
        p.a = n * gamma / mj;
        p.fixed = i == j && fixed_point_test(d, i, j, b);
        out.push_back(p);
      }
    }
  }
  return out;
}

// Direct computation on the materialized set G0/K_i x G0/K_j with
// g . (uK_i, vK_j) = (g u K_i, phi(g) v K_j): orbits, stabilizers and the
// rotation exponents of a stabilizer generator. A diagonal point is fixed
// when some tau' g, acting by (uK_i, vK_i) -> (phi(g) v K_i, tau g u K_i),
// keeps it in its orbit.
inline std::vector<YPoint> bruteforce_singularity_oracle(const MixedData& d, std::size_t cap = 4'000'000) {
  const FiniteGroup& G = *d.g0;
  const auto& h = d.vector.tail;
  const int r = static_cast<int>(h.size());
  const Elem n0 = static_cast<Elem>(G.order());
  std::vector<YPoint> out;
  std::vector<LeftCosets> cos;
  std::vector<std::vector<int>> exps;
  for (int i = 0; i < r; ++i) {
    cos.push_back(left_coset_partition(G, detail::cyclic_subgroup(G, h[i])));
    exps.push_back(detail::power_exponents(G, h[i]));
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const std::size_t ci = cos[i].reps.size(), cj = cos[j].reps.size();
      if (ci * cj > cap) fail(ErrorCode::OracleCapExceeded, "coset product too large for the oracle");
      std::vector<int> orbit(ci * cj, -1);
      std::vector<std::size_t> reps;
      for (std::size_t p = 0; p < ci * cj; ++p) {
        if (orbit[p] >= 0) continue;
        const int id = static_cast<int>(reps.size());
        reps.push_back(p);
        const Elem u = cos[i].reps[p / cj], v = cos[j].reps[p % cj];
        for (Elem g = 0; g < n0; ++g) {
          std::size_t q = cos[i].id_of[G.mul(g, u)] * cj + cos[j].id_of[G.mul(d.phi(g), v)];
          orbit[q] = id;
        }
      }
      for (std::size_t p : reps) {
        const Elem u = cos[i].reps[p / cj], v = cos[j].reps[p % cj];
        std::vector<Elem> stab;
        for (Elem g = 0; g < n0; ++g)
          if (cos[i].id_of[G.mul(g, u)] == cos[i].id_of[u] && cos[j].id_of[G.mul(d.phi(g), v)] == cos[j].id_of[v])
            stab.push_back(g);
        const int n = static_cast<int>(stab.size());
        if (n == 1) continue;
        const int mi = static_cast<int>(G.element_order(h[i]));
        const int mj = static_cast<int>(G.element_order(h[j]));
        // rotation of s at (u p_i, v p_j): u^-1 s u = h_i^e1, v^-1 phi(s) v = h_j^e2
        int a = -1;
        for (Elem s : stab) {
          int e1 = exps[i][G.mul(G.mul(G.inv(u), s), u)];
          int e2 = exps[j][G.mul(G.mul(G.inv(v), d.phi(s)), v)];
          if (e1 < 0 || e2 < 0) fail(ErrorCode::OracleMismatch, "stabilizer element is not a local rotation");
          if (e1 * n == mi) {
            a = static_cast<int>(static_cast<std::int64_t>(e2) * n / mj % n);
            break;
          }
        }
        if (a < 0) fail(ErrorCode::OracleMismatch, "stabilizer is not cyclic of the expected kind");
        YPoint pt;
        pt.i = i;
        pt.j = j;
        pt.rep = v;
        pt.n = n;
        pt.a = a;
        if (i == j)
          for (Elem g = 0; g < n0 && !pt.fixed; ++g) {
            std::size_t q = cos[i].id_of[G.mul(d.phi(g), v)] * cj + cos[i].id_of[G.mul(G.mul(d.tau, g), u)];
            pt.fixed = orbit[q] == orbit[p];
          }
        out.push_back(pt);
      }
    }
  return out;
}

// Multiset comparison on (pair, n, a, fixed).
inline bool same_points(std::vector<YPoint> a, std::vector<YPoint> b) {
  auto less = [](const YPoint& x, const YPoint& y) { return x.key() < y.key(); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].key() != b[k].key()) return false;
  return true;
}

// Fixed points give D(n, a); the others are identified in pairs by the
// involution, which preserves the analytic type, so they are counted per
// (n, {a, a'}).
inline Basket assemble_basket_X(const std::vector<YPoint>& points) {
  Basket b;
  std::map<std::pair<int, int>, int> free_points;
  for (const YPoint& p : points) {
    if (p.fixed) {
      b.add(make_class(Flavor::D, p.n, p.a).key());
    } else {
      ++free_points[{p.n, std::min(p.a, dual_residue(p.n, p.a))}];
    }
  }
  for (const auto& [na, count] : free_points) {
    if (count % 2 != 0)
      fail(ErrorCode::PairingParityError, "odd number of non-fixed points of type C(" + std::to_string(na.first) +
                                              "," + std::to_string(na.second) + ")");
    b.add({Flavor::C, na.first, na.second}, count / 2);
  }
  return b;
}

inline Basket assemble_basket_X(const MixedData& d) { return assemble_basket_X(singular_points_Y(d)); }

enum class Minimality { Minimal, Unknown };

inline std::string to_string(Minimality m) { return m == Minimality::Minimal ? "minimal" : "unknown"; }

struct SurfaceInvariants {
  Rational K2, e;
  int chi = 0, pg = 0, q = 0;
  int d = 0;
  int genus = 0;
  std::size_t order_G = 0;
  Minimality minimality = Minimality::Unknown;
};

// Minimal when q >= 1, when every exceptional curve of the resolution has
// self-intersection -2 or -3, or for the basket 2 C(4,1) + 3 C(2,1).
inline Minimality minimality(int q, const Basket& basket) {
  if (q >= 1) return Minimality::Minimal;
  bool small = true;
  for (const auto& [k, mult] : basket.classes())
    for (int v : resolution_graph(make_class(k)).nodes) small = small && (v == -2 || v == -3);
  if (small) return Minimality::Minimal;
  Basket special;
  special.add({Flavor::C, 4, 1}, 2);
  special.add({Flavor::C, 2, 1}, 3);
  return basket == special ? Minimality::Minimal : Minimality::Unknown;
}

inline SurfaceInvariants surface_invariants(const MixedData& d, const Basket& basket) {
  SurfaceInvariants s;
  const Rational beta2 = Rational(d.genus - 1) * Rational(d.genus - 1);
  const Rational G(static_cast<std::int64_t>(d.order_G));
  s.K2 = Rational(8) * beta2 / G - basket.k();
  s.e = Rational(4) * beta2 / G + basket.e();
  const Rational twelve_chi = s.K2 + s.e;
  if (!(twelve_chi / Rational(12)).is_integer())
    fail(ErrorCode::NoetherViolation, "K^2 + e = " + twelve_chi.str() + " is not divisible by 12");
  s.chi = static_cast<int>((twelve_chi / Rational(12)).num());
  s.q = d.signature.q;
  s.pg = s.chi - 1 + s.q;
  s.d = basket.d();
  s.genus = d.genus;
  s.order_G = d.order_G;
  if (!s.K2.is_integer() || s.d % 2 != 0 || s.pg < 0)
    fail(ErrorCode::NoetherViolation, "inconsistent invariants K^2 = " + s.K2.str());
  s.minimality = minimality(s.q, basket);
  return s;
}

}  // namespace mqe
