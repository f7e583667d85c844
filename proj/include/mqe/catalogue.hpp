#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqe/group.hpp"
#include "mqe/isomorphism.hpp"

namespace mqe {

struct CatalogueEntry {
  std::string label;
  std::string name;
  std::shared_ptr<const FiniteGroup> group;
};

class Catalogue {
 public:
  struct OrderSlice {
    std::span<const CatalogueEntry> groups;
    bool complete = false;
  };

  OrderSlice groups_of_order(std::size_t n) const {
    auto it = entries_.find(n);
    OrderSlice s;
    if (it != entries_.end()) s.groups = it->second;
    s.complete = complete_.count(n) != 0;
    return s;
  }

  bool is_complete(std::size_t n) const { return complete_.count(n) != 0; }
  const std::map<std::size_t, std::vector<CatalogueEntry>>& entries() const { return entries_; }
  const std::set<std::size_t>& complete_orders() const { return complete_; }
  const std::string& provenance() const { return provenance_; }
  const std::map<std::size_t, std::size_t>& class_counts() const { return class_counts_; }

  // Label of the catalogue entry isomorphic to G, if present.
  std::optional<std::string> identify(const FiniteGroup& G) const {
    auto it = entries_.find(G.order());
    if (it == entries_.end()) return std::nullopt;
    for (const auto& e : it->second)
      if (is_isomorphic(G, *e.group)) return e.label;
    return std::nullopt;
  }

  void add(CatalogueEntry e) { entries_[e.group->order()].push_back(std::move(e)); }
  void declare_complete(std::size_t n) { complete_.insert(n); }
  void set_provenance(std::string p) { provenance_ = std::move(p); }
  void set_class_count(std::size_t n, std::size_t c) { class_counts_[n] = c; }

  // Copy keeping only groups of order <= max_order (coverage shrinks with it).
  Catalogue restricted_to(std::size_t max_order) const {
    Catalogue c;
    c.provenance_ = provenance_ + " [restricted to orders <= " + std::to_string(max_order) + "]";
    for (const auto& [n, list] : entries_)
      if (n <= max_order) c.entries_[n] = list;
    for (auto n : complete_)
      if (n <= max_order) c.complete_.insert(n);
    for (const auto& [n, k] : class_counts_)
      if (n <= max_order) c.class_counts_[n] = k;
    return c;
  }

 private:
  std::map<std::size_t, std::vector<CatalogueEntry>> entries_;
  std::set<std::size_t> complete_;
  std::string provenance_;
  std::map<std::size_t, std::size_t> class_counts_;
};

// Full axiom check on a table group: identity, inverses, and associativity on
// a fixed pseudo-random sample of triples (exhaustive below order 64).
inline bool check_group_axioms(const FiniteGroup& G, std::uint32_t seed = 20240601u) {
  const auto n = static_cast<Elem>(G.order());
  for (Elem x = 0; x < n; ++x) {
    if (G.mul(0, x) != x || G.mul(x, 0) != x) return false;
    if (G.mul(x, G.inv(x)) != 0 || G.mul(G.inv(x), x) != 0) return false;
  }
  auto assoc = [&](Elem a, Elem b, Elem c) { return G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)); };
  if (n < 64) {
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c)
          if (!assoc(a, b, c)) return false;
    return true;
  }
  std::mt19937 rng(seed);
  std::uniform_int_distribution<Elem> pick(0, n - 1);
  for (int i = 0; i < 4096; ++i)
    if (!assoc(pick(rng), pick(rng), pick(rng))) return false;
  return true;
}

struct CatalogueLoadOptions {
  std::size_t order_cap = kDefaultOrderCap;
  bool check_duplicates = true;
};

inline Catalogue parse_catalogue(const nlohmann::json& doc, const CatalogueLoadOptions& opt = {}) {
  auto bad = [](const std::string& m) { fail(ErrorCode::ParseError, "catalogue: " + m); };
  if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array()) bad("missing groups array");
  Catalogue cat;
  if (doc.contains("meta") && doc["meta"].is_object()) {
    const auto& meta = doc["meta"];
    if (meta.contains("provenance")) cat.set_provenance(meta["provenance"].get<std::string>());
    if (meta.contains("class_counts"))
      for (const auto& [k, v] : meta["class_counts"].items()) cat.set_class_count(std::stoul(k), v.get<std::size_t>());
  }
  if (doc.contains("complete_orders"))
    for (const auto& n : doc["complete_orders"]) cat.declare_complete(n.get<std::size_t>());

  for (const auto& g : doc["groups"]) {
    if (!g.contains("order") || !g.contains("degree") || !g.contains("generators")) bad("group entry lacks fields");
    const auto order = g["order"].get<std::size_t>();
    const auto degree = g["degree"].get<std::size_t>();
    std::string label = g.value("label", "G(" + std::to_string(order) + ",?)");
    std::vector<Permutation> gens;
    for (const auto& p : g["generators"]) {
      Permutation perm;
      for (const auto& v : p) {
        auto x = v.get<std::int64_t>();
        if (x < 1 || static_cast<std::size_t>(x) > degree)
          fail(ErrorCode::ValidationError, label + ": image out of range");
        perm.push_back(static_cast<std::uint32_t>(x - 1));
      }
      gens.push_back(std::move(perm));
    }
    FiniteGroup G;
    try {
      G = FiniteGroup::from_permutations(gens, degree, opt.order_cap, label);
    } catch (const Error& e) {
      fail(ErrorCode::ValidationError, label + ": " + e.what());
    }
    if (G.order() != order)
      fail(ErrorCode::ValidationError,
           label + ": generators give order " + std::to_string(G.order()) + ", declared " + std::to_string(order));
    if (!check_group_axioms(G)) fail(ErrorCode::ValidationError, label + ": group axioms fail");
    cat.add({label, g.value("name", ""), std::make_shared<const FiniteGroup>(std::move(G))});
  }

  for (const auto& [n, list] : cat.entries()) {
    if (opt.check_duplicates) {
      std::vector<Fingerprint> fps;
      for (const auto& e : list) fps.push_back(fingerprint(*e.group));
      for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (fps[i] == fps[j] && is_isomorphic(*list[i].group, *list[j].group))
            fail(ErrorCode::ValidationError, "duplicate isomorphism class: " + list[i].label + " ~ " + list[j].label);
    }
    auto cc = cat.class_counts().find(n);
    if (cat.is_complete(n) && cc != cat.class_counts().end() && cc->second != list.size())
      fail(ErrorCode::ValidationError, "order " + std::to_string(n) + " declared complete with " +
                                           std::to_string(list.size()) + " groups, recorded count " +
                                           std::to_string(cc->second));
  }
  for (auto n : cat.complete_orders())
    if (cat.groups_of_order(n).groups.empty() && cat.class_counts().count(n))
      fail(ErrorCode::ValidationError, "order " + std::to_string(n) + " declared complete but absent");
  return cat;
}

inline Catalogue load_catalogue(const std::string& path, const CatalogueLoadOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IOError, "cannot open catalogue " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("catalogue: ") + e.what());
  }
  return parse_catalogue(doc, opt);
}

// Canonical re-serialization: groups sorted by (order, label).
inline nlohmann::json to_json(const Catalogue& cat) {
  nlohmann::json doc;
  doc["meta"]["provenance"] = cat.provenance();
  for (const auto& [n, c] : cat.class_counts()) doc["meta"]["class_counts"][std::to_string(n)] = c;
  doc["complete_orders"] = std::vector<std::size_t>(cat.complete_orders().begin(), cat.complete_orders().end());
  doc["groups"] = nlohmann::json::array();
  for (const auto& [n, list] : cat.entries()) {
    std::vector<const CatalogueEntry*> sorted;
    for (const auto& e : list) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->label < b->label; });
    for (const auto* e : sorted) {
      const FiniteGroup& G = *e->group;
      nlohmann::json g;
      g["order"] = n;
      g["label"] = e->label;
      if (!e->name.empty()) g["name"] = e->name;
      g["degree"] = G.degree();
      nlohmann::json gens = nlohmann::json::array();
      for (Elem x : G.generators()) {
        std::vector<std::uint32_t> img;
        for (auto v : G.permutation(x)) img.push_back(v + 1);
        gens.push_back(img);
      }
      g["generators"] = gens;
      doc["groups"].push_back(g);
    }
  }
  return doc;
}

}  // namespace mqe
