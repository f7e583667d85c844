#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mqe/error.hpp"

namespace mqe {

using Elem = std::uint32_t;
inline constexpr Elem kNoElem = ~Elem{0};

// Images of 0..degree-1, 0-based. Composition follows the right-action
// convention: (x*y)(i) = y(x(i)), i.e. apply x first.
using Permutation = std::vector<std::uint32_t>;

inline constexpr std::size_t kDefaultOrderCap = 2048;

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : p) h = (h ^ v) * 1099511628211ull;
    return h;
  }
};

inline Permutation compose(const Permutation& x, const Permutation& y) {
  Permutation r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = y[x[i]];
  return r;
}

inline bool is_valid_permutation(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

// A finite group stored as a dense multiplication table. Element 0 is the
// identity; elements are numbered in breadth-first order of right
// multiplication by the generators.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  std::size_t order() const { return n_; }
  static constexpr Elem identity() { return 0; }

  Elem mul(Elem a, Elem b) const { return table_[std::size_t(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  unsigned element_order(Elem a) const { return ord_[a]; }

  Elem pow(Elem a, std::int64_t k) const {
    std::int64_t o = ord_[a];
    k %= o;
    if (k < 0) k += o;
    Elem r = 0;
    for (std::int64_t i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }

  // g x g^-1
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv_[g]); }
  // a b a^-1 b^-1
  Elem commutator(Elem a, Elem b) const { return mul(mul(a, b), mul(inv_[a], inv_[b])); }

  const std::vector<Elem>& generators() const { return gens_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  bool has_permutations() const { return !perms_.empty(); }
  std::size_t degree() const { return degree_; }
  const Permutation& permutation(Elem a) const { return perms_.at(a); }

  std::optional<Elem> find(const Permutation& p) const {
    for (std::size_t i = 0; i < perms_.size(); ++i)
      if (perms_[i] == p) return static_cast<Elem>(i);
    return std::nullopt;
  }

  bool is_abelian() const {
    for (Elem a : gens_)
      for (Elem b : gens_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  // Closure of `gens` under `mul` starting from `id`. T must be hashable by
  // Hash and equality-comparable. Element i of the result is elements[i].
  template <class T, class Hash, class Mul>
  static FiniteGroup closure(const std::vector<T>& gens, const T& id, Mul mul, std::size_t cap,
                             std::vector<T>* elements_out = nullptr) {
    std::vector<T> elems{id};
    std::unordered_map<T, Elem, Hash> index;
    index.emplace(id, 0);
    const std::size_t k = gens.size();
    std::vector<Elem> right;
    std::vector<Elem> parent{0};
    std::vector<std::uint32_t> via{0};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t g = 0; g < k; ++g) {
        T y = mul(elems[i], gens[g]);
        auto [it, fresh] = index.emplace(y, static_cast<Elem>(elems.size()));
        if (fresh) {
          if (elems.size() >= cap)
            fail(ErrorCode::OrderCapExceeded, "closure exceeds order cap " + std::to_string(cap));
          elems.push_back(std::move(y));
          parent.push_back(static_cast<Elem>(i));
          via.push_back(static_cast<std::uint32_t>(g));
        }
        right.push_back(it->second);
      }
    }
    FiniteGroup G;
    G.n_ = elems.size();
    G.table_.assign(G.n_ * G.n_, 0);
    for (std::size_t x = 0; x < G.n_; ++x) {
      Elem* row = &G.table_[x * G.n_];
      row[0] = static_cast<Elem>(x);
      for (std::size_t y = 1; y < G.n_; ++y) row[y] = right[std::size_t(row[parent[y]]) * k + via[y]];
    }
    for (const T& g : gens) {
      Elem e = index.at(g);
      if (std::find(G.gens_.begin(), G.gens_.end(), e) == G.gens_.end()) G.gens_.push_back(e);
    }
    G.finish();
    if (elements_out) *elements_out = std::move(elems);
    return G;
  }

  static FiniteGroup from_permutations(const std::vector<Permutation>& gens, std::size_t degree,
                                       std::size_t cap = kDefaultOrderCap, std::string label = {}) {
    for (const auto& p : gens)
      if (p.size() != degree || !is_valid_permutation(p))
        fail(ErrorCode::InvalidPermutation, "generator is not a permutation of degree " + std::to_string(degree));
    Permutation id(degree);
    for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<std::uint32_t>(i);
    std::vector<Permutation> elems;
    FiniteGroup G = closure<Permutation, PermutationHash>(
        gens, id, [](const Permutation& a, const Permutation& b) { return compose(a, b); }, cap, &elems);
    G.perms_ = std::move(elems);
    G.degree_ = degree;
    G.label_ = std::move(label);
    return G;
  }

  // Realizes the group by its right-regular permutation representation, so it
  // can be serialized. Element numbering is preserved.
  void attach_regular_permutations() {
    perms_.assign(n_, Permutation(n_));
    for (std::size_t g = 0; g < n_; ++g)
      for (std::size_t x = 0; x < n_; ++x) perms_[g][x] = mul(static_cast<Elem>(x), static_cast<Elem>(g));
    degree_ = n_;
  }

  // Attaches permutation images, one per element (used for subgroups of a
  // permutation group, which inherit the parent's realization).
  void attach_permutations(std::vector<Permutation> perms, std::size_t degree) {
    perms_ = std::move(perms);
    degree_ = degree;
  }

 private:
  void finish() {
    inv_.assign(n_, 0);
    for (std::size_t x = 0; x < n_; ++x) {
      const Elem* row = &table_[x * n_];
      for (std::size_t y = 0; y < n_; ++y)
        if (row[y] == 0) {
          inv_[x] = static_cast<Elem>(y);
          break;
        }
    }
    ord_.assign(n_, 1);
    for (std::size_t x = 0; x < n_; ++x) {
      Elem p = static_cast<Elem>(x);
      unsigned o = 1;
      while (p != 0) {
        p = mul(p, static_cast<Elem>(x));
        ++o;
      }
      ord_[x] = o;
    }
  }

  std::size_t n_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inv_;
  std::vector<unsigned> ord_;
  std::vector<Elem> gens_;
  std::string label_;
  std::vector<Permutation> perms_;
  std::size_t degree_ = 0;
};

// Sorted member list plus a membership mask over the parent's elements.
class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(std::size_t parent_order, std::vector<Elem> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    mask_.assign(parent_order, 0);
    for (Elem x : members_) mask_[x] = 1;
  }

  const std::vector<Elem>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(Elem x) const { return mask_[x] != 0; }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members_ == b.members_; }

 private:
  std::vector<Elem> members_;
  std::vector<char> mask_;
};

inline Subgroup generated_subgroup(const FiniteGroup& G, std::span<const Elem> seed) {
  std::vector<char> in(G.order(), 0);
  std::vector<Elem> list{0};
  in[0] = 1;
  for (std::size_t i = 0; i < list.size(); ++i)
    for (Elem s : seed) {
      Elem y = G.mul(list[i], s);
      if (!in[y]) {
        in[y] = 1;
        list.push_back(y);
      }
    }
  return Subgroup(G.order(), std::move(list));
}

inline bool generates(const FiniteGroup& G, std::span<const Elem> seed) {
  return generated_subgroup(G, seed).size() == G.order();
}

inline bool is_subgroup(const FiniteGroup& G, const Subgroup& H) {
  if (H.size() == 0 || !H.contains(0)) return false;
  for (Elem a : H.members())
    for (Elem b : H.members())
      if (!H.contains(G.mul(a, G.inv(b)))) return false;
  return true;
}

inline bool is_normal(const FiniteGroup& G, const Subgroup& H) {
  for (Elem g : G.generators())
    for (Elem h : H.members())
      if (!H.contains(G.conj(g, h))) return false;
  return true;
}

// Coset number of every element for the left cosets gH, numbered by their
// minimal member; representatives are those minimal members.
struct LeftCosets {
  std::vector<Elem> reps;
  std::vector<std::uint32_t> id_of;
};

inline LeftCosets left_coset_partition(const FiniteGroup& G, const Subgroup& H) {
  if (!is_subgroup(G, H)) fail(ErrorCode::NotASubgroup, "member set is not closed");
  LeftCosets c;
  c.id_of.assign(G.order(), ~std::uint32_t{0});
  for (std::size_t g = 0; g < G.order(); ++g) {
    if (c.id_of[g] != ~std::uint32_t{0}) continue;
    auto id = static_cast<std::uint32_t>(c.reps.size());
    c.reps.push_back(static_cast<Elem>(g));
    for (Elem h : H.members()) c.id_of[G.mul(static_cast<Elem>(g), h)] = id;
  }
  return c;
}

inline std::vector<Elem> left_cosets(const FiniteGroup& G, const Subgroup& H) {
  return left_coset_partition(G, H).reps;
}

// A map given by images of every source element. Entries may be kNoElem for
// maps defined only on a subgroup.
struct GroupMap {
  std::vector<Elem> images;
  Elem operator()(Elem x) const { return images[x]; }
  friend bool operator==(const GroupMap&, const GroupMap&) = default;
};

inline GroupMap identity_map(std::size_t n) {
  GroupMap m;
  m.images.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.images[i] = static_cast<Elem>(i);
  return m;
}

inline bool is_homomorphism(const FiniteGroup& src, const FiniteGroup& tgt, const GroupMap& f) {
  if (f.images.size() != src.order()) return false;
  for (Elem a = 0; a < src.order(); ++a)
    for (Elem b = 0; b < src.order(); ++b)
      if (f(src.mul(a, b)) != tgt.mul(f(a), f(b))) return false;
  return true;
}

inline bool is_bijective(const GroupMap& f, std::size_t target_order) {
  if (f.images.size() != target_order) return false;
  std::vector<char> hit(target_order, 0);
  for (Elem y : f.images) {
    if (y >= target_order || hit[y]) return false;
    hit[y] = 1;
  }
  return true;
}

// second after first
inline GroupMap compose(const GroupMap& second, const GroupMap& first) {
  GroupMap r;
  r.images.resize(first.images.size());
  for (std::size_t i = 0; i < first.images.size(); ++i)
    r.images[i] = first.images[i] == kNoElem ? kNoElem : second(first.images[i]);
  return r;
}

inline GroupMap inverse(const GroupMap& f) {
  GroupMap r;
  r.images.assign(f.images.size(), kNoElem);
  for (std::size_t i = 0; i < f.images.size(); ++i)
    if (f.images[i] != kNoElem) r.images[f.images[i]] = static_cast<Elem>(i);
  return r;
}

// h -> t h t^-1 on the members of H; kNoElem elsewhere.
inline GroupMap conjugation_map(const FiniteGroup& G, Elem t, const Subgroup& H) {
  GroupMap m;
  m.images.assign(G.order(), kNoElem);
  for (Elem h : H.members()) {
    Elem c = G.conj(t, h);
    if (!H.contains(c)) fail(ErrorCode::DoesNotNormalize, "conjugate leaves the subgroup");
    m.images[h] = c;
  }
  return m;
}

// The subgroup H realized as a group in its own right, with the embedding of
// its elements into the parent and the reverse lookup.
struct EmbeddedGroup {
  FiniteGroup group;
  std::vector<Elem> to_parent;    // group element -> parent element
  std::vector<Elem> from_parent;  // parent element -> group element or kNoElem
};

inline EmbeddedGroup realize_subgroup(const FiniteGroup& G, std::span<const Elem> gens) {
  std::vector<Elem> g(gens.begin(), gens.end());
  std::vector<Elem> elems;
  EmbeddedGroup e;
  e.group = FiniteGroup::closure<Elem, std::hash<Elem>>(
      g, Elem{0}, [&G](Elem a, Elem b) { return G.mul(a, b); }, G.order() + 1, &elems);
  e.to_parent = elems;
  e.from_parent.assign(G.order(), kNoElem);
  for (std::size_t i = 0; i < elems.size(); ++i) e.from_parent[elems[i]] = static_cast<Elem>(i);
  if (G.has_permutations()) {
    std::vector<Permutation> perms;
    perms.reserve(elems.size());
    for (Elem x : elems) perms.push_back(G.permutation(x));
    e.group.attach_permutations(std::move(perms), G.degree());
  }
  return e;
}

}  // namespace mqe
