#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "mqe/group.hpp"

namespace mqe {

// Per-element data preserved by every isomorphism.
struct ElementInvariant {
  unsigned order = 0;
  std::uint32_t class_size = 0;
  std::uint32_t square_roots = 0;
  std::uint64_t centralizer_profile = 0;  // hash of element orders in the centralizer
  std::uint64_t refined = 0;              // colour after refinement over the Cayley table
  friend auto operator<=>(const ElementInvariant&, const ElementInvariant&) = default;
};

struct Fingerprint {
  std::size_t order = 0;
  std::vector<ElementInvariant> elements;  // sorted multiset
  std::size_t center_order = 0;
  std::size_t derived_order = 0;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline std::vector<std::uint32_t> conjugacy_class_ids(const FiniteGroup& G) {
  std::vector<std::uint32_t> cls(G.order(), ~std::uint32_t{0});
  std::uint32_t next = 0;
  for (Elem x = 0; x < G.order(); ++x) {
    if (cls[x] != ~std::uint32_t{0}) continue;
    for (Elem g = 0; g < G.order(); ++g) cls[G.conj(g, x)] = next;
    ++next;
  }
  return cls;
}

inline std::vector<ElementInvariant> element_invariants(const FiniteGroup& G) {
  const auto n = G.order();
  auto cls = conjugacy_class_ids(G);
  std::vector<std::uint32_t> class_size(n, 0);
  for (auto c : cls) ++class_size[c];
  std::vector<ElementInvariant> inv(n);
  for (Elem x = 0; x < n; ++x) {
    inv[x].order = G.element_order(x);
    inv[x].class_size = class_size[cls[x]];
    ++inv[G.mul(x, x)].square_roots;
  }
  std::vector<std::uint32_t> hist;
  for (Elem x = 0; x < n; ++x) {
    hist.assign(n + 1, 0);
    for (Elem y = 0; y < n; ++y)
      if (G.mul(x, y) == G.mul(y, x)) ++hist[G.element_order(y)];
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t o = 1; o <= n; ++o)
      if (hist[o]) h = (h ^ (o * 1000003ull + hist[o])) * 1099511628211ull;
    inv[x].centralizer_profile = h;
  }
  // Two rounds of colour refinement: an element's new colour hashes its old
  // colour with the multiset of (colour(y), colour(xy)) over all y.
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  std::vector<std::uint64_t> colour(n);
  for (Elem x = 0; x < n; ++x)
    colour[x] = mix(mix(mix(inv[x].order, inv[x].class_size), inv[x].square_roots), inv[x].centralizer_profile);
  std::vector<std::uint64_t> pairs(n), next(n);
  for (int round = 0; round < 2; ++round) {
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y) pairs[y] = mix(colour[y] * 31, colour[G.mul(x, y)]);
      std::sort(pairs.begin(), pairs.end());
      std::uint64_t h = colour[x];
      for (auto v : pairs) h = mix(h, v);
      next[x] = h;
    }
    colour.swap(next);
  }
  for (Elem x = 0; x < n; ++x) inv[x].refined = colour[x];
  return inv;
}

inline Subgroup derived_subgroup(const FiniteGroup& G) {
  std::vector<char> seen(G.order(), 0);
  std::vector<Elem> comms;
  for (Elem a = 0; a < G.order(); ++a)
    for (Elem b = 0; b < G.order(); ++b) {
      Elem c = G.commutator(a, b);
      if (!seen[c]) {
        seen[c] = 1;
        comms.push_back(c);
      }
    }
  return generated_subgroup(G, comms);
}

inline Fingerprint fingerprint(const FiniteGroup& G) {
  Fingerprint f;
  f.order = G.order();
  f.elements = element_invariants(G);
  for (const auto& e : f.elements)
    if (e.class_size == 1) ++f.center_order;
  std::sort(f.elements.begin(), f.elements.end());
  f.derived_order = derived_subgroup(G).size();
  return f;
}

// Greedy generating sequence: `seed` entries first (those that enlarge the
// span), then elements maximizing the generated subgroup.
inline std::vector<Elem> generating_sequence(const FiniteGroup& G, std::span<const Elem> seed = {}) {
  std::vector<Elem> seq;
  Subgroup S = generated_subgroup(G, seq);
  for (Elem s : seed)
    if (!S.contains(s)) {
      seq.push_back(s);
      S = generated_subgroup(G, seq);
    }
  while (S.size() < G.order()) {
    Elem best = kNoElem;
    std::size_t best_size = 0;
    std::size_t tried = 0;
    std::vector<Elem> cand;
    for (Elem x = 0; x < G.order(); ++x)
      if (!S.contains(x)) cand.push_back(x);
    std::stable_sort(cand.begin(), cand.end(),
                     [&](Elem a, Elem b) { return G.element_order(a) > G.element_order(b); });
    const std::size_t budget = G.order() <= 256 ? cand.size() : 64;
    for (Elem x : cand) {
      if (tried++ >= budget) break;
      seq.push_back(x);
      std::size_t sz = generated_subgroup(G, seq).size();
      seq.pop_back();
      if (sz > best_size) {
        best_size = sz;
        best = x;
      }
      if (sz == G.order()) break;
    }
    seq.push_back(best);
    S = generated_subgroup(G, seq);
  }
  return seq;
}

// Greedy generating sequence of a subgroup H, largest element orders first.
inline std::vector<Elem> subgroup_generating_sequence(const FiniteGroup& G, const Subgroup& H) {
  std::vector<Elem> seq;
  Subgroup S = generated_subgroup(G, seq);
  std::vector<Elem> hm = H.members();
  std::stable_sort(hm.begin(), hm.end(), [&](Elem a, Elem b) { return G.element_order(a) > G.element_order(b); });
  while (S.size() < H.size()) {
    Elem best = kNoElem;
    std::size_t best_size = 0;
    for (Elem x : hm) {
      if (S.contains(x)) continue;
      seq.push_back(x);
      std::size_t sz = generated_subgroup(G, seq).size();
      seq.pop_back();
      if (sz > best_size) {
        best_size = sz;
        best = x;
      }
      if (sz == H.size()) break;
    }
    seq.push_back(best);
    S = generated_subgroup(G, seq);
  }
  return seq;
}

// Backtracking over images of a generating sequence of `src`. Each level
// extends the partial map to the next subgroup of the chain and checks that it
// stays an injective homomorphism. `visit` receives every complete injective
// homomorphism and returns false to stop the search.
class EmbeddingSearch {
 public:
  EmbeddingSearch(const FiniteGroup& src, const FiniteGroup& tgt, std::vector<Elem> gens,
                  std::vector<std::vector<Elem>> candidates)
      : src_(src), tgt_(tgt), gens_(std::move(gens)), cand_(std::move(candidates)) {}

  // With element invariants of both groups every assigned pair must agree,
  // which prunes partial maps long before the chain is complete.
  EmbeddingSearch(const FiniteGroup& src, const FiniteGroup& tgt, std::vector<Elem> gens,
                  std::vector<std::vector<Elem>> candidates, const std::vector<ElementInvariant>* src_inv,
                  const std::vector<ElementInvariant>* tgt_inv)
      : EmbeddingSearch(src, tgt, std::move(gens), std::move(candidates)) {
    src_inv_ = src_inv;
    tgt_inv_ = tgt_inv;
  }

  // Returns false if stopped by the visitor.
  bool run(const std::function<bool(const GroupMap&)>& visit) {
    img_.images.assign(src_.order(), kNoElem);
    used_.assign(tgt_.order(), 0);
    img_.images[0] = 0;
    used_[0] = 1;
    members_.assign(1, 0);
    return descend(0, visit);
  }

 private:
  bool descend(std::size_t level, const std::function<bool(const GroupMap&)>& visit) {
    if (level == gens_.size()) return visit(img_);
    const Elem s = gens_[level];
    for (Elem y : cand_[level]) {
      std::size_t mark = members_.size();
      bool ok = extend(level, s, y);
      if (ok && !descend(level + 1, visit)) return false;
      for (std::size_t i = mark; i < members_.size(); ++i) {
        used_[img_.images[members_[i]]] = 0;
        img_.images[members_[i]] = kNoElem;
      }
      members_.resize(mark);
    }
    return true;
  }

  bool assign(Elem x, Elem y) {
    if (img_.images[x] != kNoElem) return img_.images[x] == y;
    if (used_[y]) return false;
    if (src_inv_ && (*src_inv_)[x] != (*tgt_inv_)[y]) return false;
    img_.images[x] = y;
    used_[y] = 1;
    members_.push_back(x);
    return true;
  }

  bool extend(std::size_t level, Elem s, Elem y) {
    if (img_.images[s] != kNoElem) return img_.images[s] == y;
    if (src_.element_order(s) != tgt_.element_order(y)) return false;
    if (!assign(s, y)) return false;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      Elem x = members_[i];
      Elem fx = img_.images[x];
      for (std::size_t t = 0; t <= level; ++t) {
        Elem g = gens_[t];
        if (!assign(src_.mul(x, g), tgt_.mul(fx, img_.images[g]))) return false;
      }
    }
    return true;
  }

  const FiniteGroup& src_;
  const FiniteGroup& tgt_;
  std::vector<Elem> gens_;
  std::vector<std::vector<Elem>> cand_;
  GroupMap img_;
  std::vector<char> used_;
  std::vector<Elem> members_;
  const std::vector<ElementInvariant>* src_inv_ = nullptr;
  const std::vector<ElementInvariant>* tgt_inv_ = nullptr;
};

// Candidate images of each generator: target elements whose invariants match.
inline std::vector<std::vector<Elem>> matching_candidates(const std::vector<ElementInvariant>& src_inv,
                                                          const std::vector<ElementInvariant>& tgt_inv,
                                                          const std::vector<Elem>& gens) {
  std::vector<std::vector<Elem>> cand(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (Elem y = 0; y < tgt_inv.size(); ++y)
      if (tgt_inv[y] == src_inv[gens[i]]) cand[i].push_back(y);
  return cand;
}

inline std::optional<GroupMap> is_isomorphic(const FiniteGroup& G, const FiniteGroup& H) {
  if (G.order() != H.order()) return std::nullopt;
  auto ig = element_invariants(G);
  auto ih = element_invariants(H);
  {
    auto a = ig, b = ih;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  if (derived_subgroup(G).size() != derived_subgroup(H).size()) return std::nullopt;
  auto gens = generating_sequence(G);
  if (gens.empty()) return identity_map(G.order());
  auto cand = matching_candidates(ig, ih, gens);
  // Composing with inner automorphisms of H, the first image can be taken
  // from one element per conjugacy class, and the second from one element per
  // orbit of the centralizer of the first image.
  auto cls = conjugacy_class_ids(H);
  std::vector<char> class_seen(H.order(), 0);
  std::optional<GroupMap> found;
  for (Elem y1 : cand[0]) {
    if (class_seen[cls[y1]]) continue;
    class_seen[cls[y1]] = 1;
    auto local = cand;
    local[0] = {y1};
    if (gens.size() > 1) {
      std::vector<Elem> cent;
      for (Elem c = 0; c < H.order(); ++c)
        if (H.mul(c, y1) == H.mul(y1, c)) cent.push_back(c);
      std::vector<char> seen(H.order(), 0);
      std::vector<Elem> reps;
      for (Elem y2 : cand[1]) {
        if (seen[y2]) continue;
        reps.push_back(y2);
        for (Elem c : cent) seen[H.conj(c, y2)] = 1;
      }
      local[1] = std::move(reps);
    }
    EmbeddingSearch search(G, H, gens, std::move(local), &ig, &ih);
    search.run([&](const GroupMap& m) {
      found = m;
      return false;
    });
    if (found) break;
  }
  return found;
}

// Generators of the group of automorphisms of G mapping the subgroup H onto
// itself (all of Aut(G) when H is G). Built from one representative per
// reachable image at every level of the stabilizer chain defined by a
// generating sequence that starts with generators of H.
inline std::vector<GroupMap> automorphism_generators(const FiniteGroup& G, const Subgroup& H) {
  auto inv = element_invariants(G);
  auto hgens = generating_sequence(G, subgroup_generating_sequence(G, H));
  const std::size_t k = hgens.size();
  auto base = matching_candidates(inv, inv, hgens);
  for (std::size_t i = 0; i < k; ++i)
    if (H.contains(hgens[i])) {
      std::erase_if(base[i], [&](Elem y) { return !H.contains(y); });
    } else {
      std::erase_if(base[i], [&](Elem y) { return H.contains(y); });
    }

  std::vector<GroupMap> gens;
  for (std::size_t level = 0; level < k; ++level) {
    // Images of hgens[level] reachable while fixing hgens[0..level-1].
    std::vector<char> reached(G.order(), 0);
    reached[hgens[level]] = 1;
    for (Elem y : base[level]) {
      if (reached[y]) continue;
      std::vector<std::vector<Elem>> cand = base;
      for (std::size_t t = 0; t < level; ++t) cand[t] = {hgens[t]};
      cand[level] = {y};
      EmbeddingSearch search(G, G, hgens, cand, &inv, &inv);
      std::optional<GroupMap> found;
      search.run([&](const GroupMap& m) {
        found = m;
        return false;
      });
      if (!found) continue;
      gens.push_back(*found);
      // Orbit of hgens[level] under the generators found at this level.
      std::vector<Elem> orbit;
      for (Elem z = 0; z < G.order(); ++z)
        if (reached[z]) orbit.push_back(z);
      for (std::size_t i = 0; i < orbit.size(); ++i)
        for (std::size_t gi = gens.size(); gi-- > 0;) {
          bool fixes_prefix = true;
          for (std::size_t t = 0; t < level && fixes_prefix; ++t)
            fixes_prefix = gens[gi](hgens[t]) == hgens[t];
          if (!fixes_prefix) continue;
          Elem z = gens[gi](orbit[i]);
          if (!reached[z]) {
            reached[z] = 1;
            orbit.push_back(z);
          }
        }
    }
  }
  return gens;
}

// An automorphism of G carrying subgroup A onto subgroup B, if any.
inline std::optional<GroupMap> automorphism_carrying(const FiniteGroup& G, const Subgroup& A, const Subgroup& B) {
  if (A.size() != B.size()) return std::nullopt;
  auto inv = element_invariants(G);
  auto gens = generating_sequence(G, subgroup_generating_sequence(G, A));
  auto cand = matching_candidates(inv, inv, gens);
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (A.contains(gens[i])) std::erase_if(cand[i], [&](Elem y) { return !B.contains(y); });
  EmbeddingSearch search(G, G, gens, cand, &inv, &inv);
  std::optional<GroupMap> found;
  search.run([&](const GroupMap& m) {
    found = m;
    return false;
  });
  return found;
}

}  // namespace mqe
