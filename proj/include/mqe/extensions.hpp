#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqe/catalogue.hpp"
#include "mqe/covers.hpp"
#include "mqe/group.hpp"
#include "mqe/isomorphism.hpp"

namespace mqe {

// All subgroups of index 2, sorted by member list. They are the kernels of
// the nonzero maps G -> Z2, all of which factor through G / <squares>.
inline std::vector<Subgroup> index_two_subgroups(const FiniteGroup& G) {
  std::vector<Elem> squares;
  for (Elem x = 0; x < G.order(); ++x) squares.push_back(G.mul(x, x));
  std::sort(squares.begin(), squares.end());
  squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
  Subgroup Q = generated_subgroup(G, squares);
  // basis of G/Q over F2
  std::vector<Elem> basis;
  std::vector<Elem> span = Q.members();
  Subgroup S = Q;
  for (Elem x = 0; x < G.order() && S.size() < G.order(); ++x)
    if (!S.contains(x)) {
      basis.push_back(x);
      span.push_back(x);
      S = generated_subgroup(G, span);
    }
  std::vector<Subgroup> out;
  const std::size_t k = basis.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<Elem> gens = Q.members();
    std::size_t t0 = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) {
        gens.push_back(basis[i]);
      } else if (t0 == k) {
        t0 = i;
      } else {
        gens.push_back(G.mul(basis[t0], basis[i]));
      }
    }
    out.push_back(generated_subgroup(G, gens));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) { return a.members() < b.members(); });
  return out;
}

// True iff no element outside H is an involution, i.e. G -> G/H does not split.
inline bool unsplit_test(const FiniteGroup& G, const Subgroup& H) {
  if (2 * H.size() != G.order() || !is_subgroup(G, H)) fail(ErrorCode::NotIndexTwo, "subgroup is not of index 2");
  for (Elem x = 0; x < G.order(); ++x)
    if (!H.contains(x) && G.element_order(x) == 2) return false;
  return true;
}

// A degree-2 extension of G0 realizing a mixed action. Elements of G0 are
// handled through `g0`, the embedded subgroup realized as a group; tau and
// phi live there.
struct MixedExtension {
  std::shared_ptr<const FiniteGroup> G;
  std::string G_label;
  Subgroup embedded{0, {}};
  std::shared_ptr<const EmbeddedGroup> g0;
  GroupMap identification;  // reference copy of G0 -> g0->group
  Elem tau_prime = kNoElem;  // in G
  Elem tau = kNoElem;        // in g0->group
  GroupMap phi;              // on g0->group
};

// tau = tau'^2 and phi = conjugation by tau', both on the embedded copy.
inline std::pair<Elem, GroupMap> mixed_action_data(const FiniteGroup& G, const EmbeddedGroup& g0, Elem tau_prime) {
  if (g0.from_parent[tau_prime] != kNoElem) fail(ErrorCode::ValidationError, "tau' must lie outside G0");
  Elem tau = g0.from_parent[G.mul(tau_prime, tau_prime)];
  GroupMap phi;
  phi.images.resize(g0.group.order());
  const Elem ti = G.inv(tau_prime);
  for (Elem h = 0; h < g0.group.order(); ++h) {
    Elem c = g0.from_parent[G.mul(G.mul(tau_prime, g0.to_parent[h]), ti)];
    if (c == kNoElem) fail(ErrorCode::DoesNotNormalize, "G0 is not normal");
    phi.images[h] = c;
  }
  return {tau, phi};
}

inline std::pair<Elem, GroupMap> mixed_action_data(const MixedExtension& ext) {
  return mixed_action_data(*ext.G, *ext.g0, ext.tau_prime);
}

inline MixedExtension with_tau_prime(MixedExtension ext, Elem tau_prime) {
  ext.tau_prime = tau_prime;
  std::tie(ext.tau, ext.phi) = mixed_action_data(ext);
  return ext;
}

// Builds the extension data for G over its index-2 subgroup H; tau' is the
// smallest element outside H.
inline MixedExtension make_extension(std::shared_ptr<const FiniteGroup> G, std::string label, const Subgroup& H) {
  if (!unsplit_test(*G, H)) fail(ErrorCode::SplitExtension, "an involution lies outside G0");
  MixedExtension ext;
  ext.G = std::move(G);
  ext.G_label = std::move(label);
  ext.embedded = H;
  auto gens = subgroup_generating_sequence(*ext.G, H);
  ext.g0 = std::make_shared<const EmbeddedGroup>(realize_subgroup(*ext.G, gens));
  Elem t = 0;
  while (H.contains(t)) ++t;
  ext.tau_prime = t;
  ext.identification = identity_map(H.size());
  std::tie(ext.tau, ext.phi) = mixed_action_data(ext);
  return ext;
}

// Automorphisms of G0 induced by automorphisms of G preserving it (inner ones
// included, so conjugation by tau' acts as phi).
inline EquivalenceContext equivalence_context(const MixedExtension& ext) {
  EquivalenceContext ctx;
  const auto& e = *ext.g0;
  for (const GroupMap& a : automorphism_generators(*ext.G, ext.embedded)) {
    GroupMap r;
    r.images.resize(e.group.order());
    for (Elem h = 0; h < e.group.order(); ++h) r.images[h] = e.from_parent[a(e.to_parent[h])];
    ctx.automorphisms.push_back(std::move(r));
  }
  ctx.automorphisms.push_back(ext.phi);
  return ctx;
}

// Every unsplit extension G of G0 by Z2 with G in the catalogue, one per
// class under automorphisms of G. The identification maps G0 onto the
// embedded copy.
inline std::vector<MixedExtension> enumerate_unsplit_extensions(const FiniteGroup& G0, const Catalogue& cat) {
  const std::size_t order = 2 * G0.order();
  if (!cat.is_complete(order))
    fail(ErrorCode::OrderNotCovered, "catalogue does not cover order " + std::to_string(order));
  std::vector<MixedExtension> out;
  const Fingerprint target = fingerprint(G0);
  for (const CatalogueEntry& entry : cat.groups_of_order(order).groups) {
    const FiniteGroup& G = *entry.group;
    std::vector<Subgroup> kept;
    for (const Subgroup& H : index_two_subgroups(G)) {
      if (!unsplit_test(G, H)) continue;
      bool seen = false;
      for (const Subgroup& K : kept) seen = seen || automorphism_carrying(G, K, H).has_value();
      if (seen) continue;
      auto realized = realize_subgroup(G, subgroup_generating_sequence(G, H));
      if (fingerprint(realized.group) != target) continue;
      auto iso = is_isomorphic(G0, realized.group);
      if (!iso) continue;
      kept.push_back(H);
      MixedExtension ext = make_extension(entry.group, entry.label, H);
      // make_extension realizes H from the same generating sequence, so the
      // element numbering agrees with `realized`
      ext.identification = *iso;
      out.push_back(std::move(ext));
    }
  }
  return out;
}

}  // namespace mqe
