#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mqe/group.hpp"

namespace mqe {

// Groups of the notation used in the classification tables.
struct NamedGroupDescriptor {
  enum class Kind { Cyclic, Dihedral, Dicyclic, Metacyclic, Alternating, Symmetric, DirectProduct, SemidirectCyclic };
  Kind kind = Kind::Cyclic;
  std::vector<int> params;
  std::vector<NamedGroupDescriptor> factors;

  static NamedGroupDescriptor cyclic(int n) { return {Kind::Cyclic, {n}, {}}; }
  // D_n, order 2n
  static NamedGroupDescriptor dihedral(int n) { return {Kind::Dihedral, {n}, {}}; }
  // BD_n = <x,y | y^2n = 1, x^2 = y^n, x y x^-1 = y^-1>, order 4n
  static NamedGroupDescriptor dicyclic(int n) { return {Kind::Dicyclic, {n}, {}}; }
  // D_{p,q,r} = <x,y | x^p = y^q = 1, x y x^-1 = y^r>
  static NamedGroupDescriptor metacyclic(int p, int q, int r) { return {Kind::Metacyclic, {p, q, r}, {}}; }
  // Z_q semidirect Z_p with the generator of Z_p acting as y -> y^r; same group as D_{p,q,r}
  static NamedGroupDescriptor semidirect_cyclic(int p, int q, int r) { return {Kind::SemidirectCyclic, {p, q, r}, {}}; }
  static NamedGroupDescriptor alternating(int n) { return {Kind::Alternating, {n}, {}}; }
  static NamedGroupDescriptor symmetric(int n) { return {Kind::Symmetric, {n}, {}}; }
  static NamedGroupDescriptor direct_product(std::vector<NamedGroupDescriptor> f) {
    return {Kind::DirectProduct, {}, std::move(f)};
  }
};

namespace detail {

struct PairHash {
  std::size_t operator()(const std::pair<int, int>& p) const noexcept {
    return std::hash<long long>()((static_cast<long long>(p.first) << 32) ^ static_cast<unsigned>(p.second));
  }
};

struct ElemVecHash {
  std::size_t operator()(const std::vector<Elem>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

inline int mod(long long a, int n) {
  long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

inline int inverse_mod(int r, int q) {
  for (int s = 1; s < q; ++s)
    if (static_cast<long long>(r) * s % q == 1 % q) return s;
  return q == 1 ? 0 : -1;
}

// x^i y^j normal forms with x^-1 y x = y^s.
inline FiniteGroup metacyclic_group(int p, int q, int r) {
  if (p < 1 || q < 1) fail(ErrorCode::InconsistentPresentation, "nonpositive order");
  r = mod(r, q);
  if (q > 1 && std::gcd(r, q) != 1) fail(ErrorCode::InconsistentPresentation, "r not a unit mod q");
  long long rp = 1;
  for (int i = 0; i < p; ++i) rp = rp * r % q;
  if (q > 1 && rp != 1) fail(ErrorCode::InconsistentPresentation, "r^p != 1 mod q");
  const int s = q == 1 ? 0 : inverse_mod(r, q);
  std::vector<long long> spow(p + 1, 1);
  for (int i = 1; i <= p; ++i) spow[i] = q == 1 ? 0 : spow[i - 1] * s % q;
  using P = std::pair<int, int>;
  auto mul = [&](const P& a, const P& b) {
    return P{mod(a.first + b.first, p), q == 1 ? 0 : mod(a.second * spow[b.first] + b.second, q)};
  };
  std::vector<P> gens{{1 % p, 0}, {0, 1 % q}};
  return FiniteGroup::closure<P, PairHash>(gens, P{0, 0}, mul, kDefaultOrderCap);
}

inline FiniteGroup dicyclic_group(int n) {
  if (n < 1) fail(ErrorCode::InconsistentPresentation, "BD_n needs n >= 1");
  const int q = 2 * n;
  using P = std::pair<int, int>;  // x^i y^j, i in {0,1}
  auto mul = [&](const P& a, const P& b) {
    if (b.first == 0) return P{a.first, mod(a.second + b.second, q)};
    int j = mod(b.second - a.second, q);
    if (a.first == 0) return P{1, j};
    return P{0, mod(j + n, q)};
  };
  std::vector<P> gens{{1, 0}, {0, 1}};
  return FiniteGroup::closure<P, PairHash>(gens, P{0, 0}, mul, kDefaultOrderCap);
}

inline Permutation cycle_perm(int degree, const std::vector<int>& cycle) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0u);
  for (std::size_t i = 0; i < cycle.size(); ++i) p[cycle[i]] = cycle[(i + 1) % cycle.size()];
  return p;
}

}  // namespace detail

inline FiniteGroup construct_named(const NamedGroupDescriptor& d) {
  using K = NamedGroupDescriptor::Kind;
  auto need = [&](std::size_t k) {
    if (d.params.size() != k) fail(ErrorCode::InconsistentPresentation, "wrong parameter count");
  };
  switch (d.kind) {
    case K::Cyclic:
      need(1);
      return detail::metacyclic_group(1, d.params[0], 1);
    case K::Dihedral:
      need(1);
      return detail::metacyclic_group(2, d.params[0], -1);
    case K::Dicyclic:
      need(1);
      return detail::dicyclic_group(d.params[0]);
    case K::Metacyclic:
    case K::SemidirectCyclic:
      need(3);
      return detail::metacyclic_group(d.params[0], d.params[1], d.params[2]);
    case K::Alternating:
    case K::Symmetric: {
      need(1);
      const int n = d.params[0];
      if (n < 1) fail(ErrorCode::InconsistentPresentation, "degree must be positive");
      std::vector<Permutation> gens;
      if (d.kind == K::Symmetric) {
        if (n >= 2) gens.push_back(detail::cycle_perm(n, {0, 1}));
        if (n >= 3) {
          std::vector<int> c(n);
          std::iota(c.begin(), c.end(), 0);
          gens.push_back(detail::cycle_perm(n, c));
        }
      } else {
        for (int k = 2; k < n; ++k) gens.push_back(detail::cycle_perm(n, {0, 1, k}));
      }
      if (gens.empty()) gens.push_back(detail::cycle_perm(n, {0}));
      return FiniteGroup::from_permutations(gens, static_cast<std::size_t>(n));
    }
    case K::DirectProduct: {
      std::vector<FiniteGroup> fs;
      for (const auto& f : d.factors) fs.push_back(construct_named(f));
      std::vector<std::vector<Elem>> gens;
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (Elem g : fs[i].generators()) {
          std::vector<Elem> v(fs.size(), 0);
          v[i] = g;
          gens.push_back(v);
        }
      if (gens.empty()) gens.push_back(std::vector<Elem>(fs.size(), 0));
      auto mul = [&](const std::vector<Elem>& a, const std::vector<Elem>& b) {
        std::vector<Elem> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = fs[i].mul(a[i], b[i]);
        return r;
      };
      return FiniteGroup::closure<std::vector<Elem>, detail::ElemVecHash>(gens, std::vector<Elem>(fs.size(), 0), mul,
                                                                          kDefaultOrderCap);
    }
  }
  fail(ErrorCode::InconsistentPresentation, "unknown descriptor");
}

}  // namespace mqe
