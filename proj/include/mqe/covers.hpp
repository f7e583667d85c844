#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <vector>

#include "mqe/group.hpp"
#include "mqe/isomorphism.hpp"
#include "mqe/rational.hpp"
#include "mqe/search_space.hpp"

namespace mqe {

// (d1, e1, ..., dq, eq; h1, ..., hr). The default ordering compares the
// genus part first, then the tail, entrywise by element index.
struct GeneratingVector {
  std::vector<Elem> genus;
  std::vector<Elem> tail;
  friend auto operator<=>(const GeneratingVector&, const GeneratingVector&) = default;
};

struct GeneratingVectorHash {
  std::size_t operator()(const GeneratingVector& v) const noexcept {
    std::size_t h = 1469598103934665603ull ^ v.genus.size();
    for (auto x : v.genus) h = (h ^ x) * 1099511628211ull;
    for (auto x : v.tail) h = (h ^ (x + 0x9e37u)) * 1099511628211ull;
    return h;
  }
};

// g from 2g - 2 = |G0| * Theta.
inline int genus_of_cover(std::int64_t order, const Signature& sig) {
  Rational g = Rational(order) * sig.theta() / Rational(2) + Rational(1);
  if (!g.is_integer()) fail(ErrorCode::NonIntegralGenus, "2g-2 = " + (Rational(order) * sig.theta()).str());
  return static_cast<int>(g.num());
}

// prod [d_i, e_i] * h_1 ... h_r
inline Elem relation_product(const FiniteGroup& G, const GeneratingVector& v) {
  Elem p = 0;
  for (std::size_t i = 0; i + 1 < v.genus.size(); i += 2) p = G.mul(p, G.commutator(v.genus[i], v.genus[i + 1]));
  for (Elem h : v.tail) p = G.mul(p, h);
  return p;
}

inline bool is_generating_vector(const FiniteGroup& G, const GeneratingVector& v, const Signature& sig) {
  if (v.genus.size() != static_cast<std::size_t>(2 * sig.q) || v.tail.size() != sig.m.size()) return false;
  for (Elem x : v.genus)
    if (x >= G.order()) return false;
  std::vector<int> orders;
  for (Elem h : v.tail) {
    if (h >= G.order()) return false;
    orders.push_back(static_cast<int>(G.element_order(h)));
  }
  std::sort(orders.begin(), orders.end());
  auto m = sig.m;
  std::sort(m.begin(), m.end());
  if (orders != m) return false;
  if (relation_product(G, v) != 0) return false;
  std::vector<Elem> all(v.genus);
  all.insert(all.end(), v.tail.begin(), v.tail.end());
  return generates(G, all);
}

inline GeneratingVector conjugate(const FiniteGroup& G, Elem g, const GeneratingVector& v) {
  GeneratingVector w = v;
  for (auto& x : w.genus) x = G.conj(g, x);
  for (auto& x : w.tail) x = G.conj(g, x);
  return w;
}

inline GeneratingVector apply(const GroupMap& f, const GeneratingVector& v) {
  GeneratingVector w = v;
  for (auto& x : w.genus) x = f(x);
  for (auto& x : w.tail) x = f(x);
  return w;
}

// Every generating vector of G with the given signature, over all orderings
// of the branch orders. The first free slot runs over conjugacy-class
// representatives; results are closed under simultaneous conjugation
// afterwards. Empty when the Hurwitz genus is not an integer >= 2.
inline std::vector<GeneratingVector> enumerate_generating_vectors(const FiniteGroup& G, const Signature& sig) {
  std::vector<GeneratingVector> out;
  {
    Rational g = Rational(static_cast<std::int64_t>(G.order())) * sig.theta() / Rational(2) + Rational(1);
    if (!g.is_integer() || g < Rational(2)) return out;
  }
  const auto n = static_cast<Elem>(G.order());
  std::map<unsigned, std::vector<Elem>> by_order;
  for (Elem x = 0; x < n; ++x) by_order[G.element_order(x)].push_back(x);
  auto cls = conjugacy_class_ids(G);
  auto class_reps = [&](const std::vector<Elem>& pool) {
    std::vector<Elem> reps;
    std::set<std::uint32_t> seen;
    for (Elem x : pool)
      if (seen.insert(cls[x]).second) reps.push_back(x);
    return reps;
  };
  std::vector<Elem> everything(n);
  std::iota(everything.begin(), everything.end(), Elem{0});

  std::set<GeneratingVector> found;
  std::vector<int> orders = sig.m;
  std::sort(orders.begin(), orders.end());
  const std::size_t q2 = 2 * static_cast<std::size_t>(sig.q);
  const std::size_t r = orders.size();
  do {
    bool feasible = true;
    for (int o : orders) feasible = feasible && by_order.count(static_cast<unsigned>(o));
    if (!feasible) continue;
    GeneratingVector v;
    v.genus.assign(q2, 0);
    v.tail.assign(r, 0);
    // slot s < q2 is genus entry s, then tail entries
    auto pool = [&](std::size_t s) -> const std::vector<Elem>& {
      return s < q2 ? everything : by_order[static_cast<unsigned>(orders[s - q2])];
    };
    const std::size_t slots = q2 + r;
    std::vector<Elem> first_pool = slots ? class_reps(pool(0)) : std::vector<Elem>{};
    // the last slot is solved from the relation when r >= 1
    const std::size_t free_slots = r >= 1 ? slots - 1 : slots;
    auto finish = [&](Elem prod) {
      if (r >= 1) {
        Elem last = G.inv(prod);
        if (G.element_order(last) != static_cast<unsigned>(orders[r - 1])) return;
        v.tail[r - 1] = last;
      } else if (prod != 0) {
        return;
      }
      std::vector<Elem> all(v.genus);
      all.insert(all.end(), v.tail.begin(), v.tail.end());
      if (generates(G, all)) found.insert(v);
    };
    // prod is the relation product of the fixed prefix; genus entries are
    // consumed in pairs.
    auto dfs = [&](auto&& self, std::size_t s, Elem prod) -> void {
      if (s == free_slots) {
        finish(prod);
        return;
      }
      const std::vector<Elem>& choices = s == 0 ? first_pool : pool(s);
      for (Elem x : choices) {
        if (s < q2) {
          v.genus[s] = x;
          if (s % 2 == 0) {
            self(self, s + 1, prod);
          } else {
            self(self, s + 1, G.mul(prod, G.commutator(v.genus[s - 1], x)));
          }
        } else {
          v.tail[s - q2] = x;
          self(self, s + 1, G.mul(prod, x));
        }
      }
    };
    dfs(dfs, 0, 0);
  } while (std::next_permutation(orders.begin(), orders.end()));

  std::set<GeneratingVector> closed;
  for (const auto& v : found)
    for (Elem g = 0; g < n; ++g) closed.insert(conjugate(G, g, v));
  out.assign(closed.begin(), closed.end());
  return out;
}

// Automorphisms of G0 induced by the ambient group of the mixed action (those
// of G preserving G0, restricted to it). Required by hurwitz_reduce.
struct EquivalenceContext {
  std::vector<GroupMap> automorphisms;
};

struct HurwitzOrbit {
  GeneratingVector representative;
  std::size_t size = 0;
  std::vector<std::size_t> members;  // indices into the input list
};

namespace hurwitz {

// (h_i, h_{i+1}) -> (h_i h_{i+1} h_i^-1, h_i)
inline GeneratingVector braid(const FiniteGroup& G, GeneratingVector v, std::size_t i) {
  Elem a = v.tail[i], b = v.tail[i + 1];
  v.tail[i] = G.conj(a, b);
  v.tail[i + 1] = a;
  return v;
}

// (a, b) -> (ab, b) on handle k
inline GeneratingVector twist_a(const FiniteGroup& G, GeneratingVector v, std::size_t k) {
  v.genus[2 * k] = G.mul(v.genus[2 * k], v.genus[2 * k + 1]);
  return v;
}

// (a, b) -> (a, ba) on handle k
inline GeneratingVector twist_b(const FiniteGroup& G, GeneratingVector v, std::size_t k) {
  v.genus[2 * k + 1] = G.mul(v.genus[2 * k + 1], v.genus[2 * k]);
  return v;
}

// Pushes h_1 around the last handle (a, b): with c = b a^-1 b^-1,
// h_1 -> c h_1 c^-1 and b -> h_1' b. Preserves [a, b] h_1 exactly.
inline GeneratingVector push(const FiniteGroup& G, GeneratingVector v) {
  const std::size_t k = v.genus.size() / 2 - 1;
  Elem a = v.genus[2 * k], b = v.genus[2 * k + 1];
  Elem c = G.mul(G.mul(b, G.inv(a)), G.inv(b));
  Elem h = G.conj(c, v.tail[0]);
  v.tail[0] = h;
  v.genus[2 * k + 1] = G.mul(h, b);
  return v;
}

// (a1, b1, a2, b2) -> (Z a2 Z^-1, Z b2 Z^-1, a1, b1) with Z = [a1, b1]
inline GeneratingVector swap_handles(const FiniteGroup& G, GeneratingVector v) {
  Elem a1 = v.genus[0], b1 = v.genus[1];
  Elem z = G.commutator(a1, b1);
  v.genus[0] = G.conj(z, v.genus[2]);
  v.genus[1] = G.conj(z, v.genus[3]);
  v.genus[2] = a1;
  v.genus[3] = b1;
  return v;
}

// Transvection linking the two handles: with c = b1 a1^-1 b1^-1,
// a2 -> c a2 c^-1, b1 -> a2' b1, b2 -> b2 c^-1. Preserves [a1,b1][a2,b2].
inline GeneratingVector link_handles(const FiniteGroup& G, GeneratingVector v) {
  Elem a1 = v.genus[0], b1 = v.genus[1];
  Elem c = G.mul(G.mul(b1, G.inv(a1)), G.inv(b1));
  Elem a2 = G.conj(c, v.genus[2]);
  v.genus[2] = a2;
  v.genus[1] = G.mul(a2, b1);
  v.genus[3] = G.mul(v.genus[3], G.inv(c));
  return v;
}

// All single moves applicable to v.
inline std::vector<GeneratingVector> neighbours(const FiniteGroup& G, const GeneratingVector& v,
                                                const EquivalenceContext& ctx) {
  std::vector<GeneratingVector> out;
  for (std::size_t i = 0; i + 1 < v.tail.size(); ++i) out.push_back(braid(G, v, i));
  const std::size_t handles = v.genus.size() / 2;
  for (std::size_t k = 0; k < handles; ++k) {
    out.push_back(twist_a(G, v, k));
    out.push_back(twist_b(G, v, k));
  }
  if (handles >= 1 && !v.tail.empty()) out.push_back(push(G, v));
  if (handles == 2) {
    out.push_back(swap_handles(G, v));
    out.push_back(link_handles(G, v));
  }
  for (const auto& f : ctx.automorphisms) out.push_back(apply(f, v));
  return out;
}

}  // namespace hurwitz

// Orbits of the vectors under braid moves, handle moves (q <= 2) and the
// automorphisms of the context. The input must be closed under these moves;
// a move leaving it raises InvariantViolation. Representatives are orbit
// minima; orbits are listed by representative.
inline std::vector<HurwitzOrbit> hurwitz_reduce(const FiniteGroup& G, const std::vector<GeneratingVector>& vectors,
                                                const EquivalenceContext* ctx) {
  if (!ctx) fail(ErrorCode::MixedContextMissing, "hurwitz_reduce needs the ambient group data");
  std::unordered_map<GeneratingVector, std::size_t, GeneratingVectorHash> index;
  for (std::size_t i = 0; i < vectors.size(); ++i) index.emplace(vectors[i], i);
  std::vector<std::size_t> parent(vectors.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (const auto& w : hurwitz::neighbours(G, vectors[i], *ctx)) {
      auto it = index.find(w);
      if (it == index.end()) fail(ErrorCode::InvariantViolation, "Hurwitz move leaves the vector set");
      std::size_t a = find(i), b = find(it->second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<std::size_t, HurwitzOrbit> orbits;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    auto& o = orbits[find(i)];
    if (o.members.empty() || vectors[i] < o.representative) o.representative = vectors[i];
    o.members.push_back(i);
    ++o.size;
  }
  std::vector<HurwitzOrbit> out;
  for (auto& [root, o] : orbits) out.push_back(std::move(o));
  std::sort(out.begin(), out.end(),
            [](const HurwitzOrbit& a, const HurwitzOrbit& b) { return a.representative < b.representative; });
  return out;
}

}  // namespace mqe
