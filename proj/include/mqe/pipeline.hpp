#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mqe/albanese.hpp"
#include "mqe/basket.hpp"
#include "mqe/catalogue.hpp"
#include "mqe/covers.hpp"
#include "mqe/extensions.hpp"
#include "mqe/search_space.hpp"
#include "mqe/surface.hpp"

namespace mqe {

struct SearchConfig {
  int pg = 0, q = 0;
  int k2_min = 1, k2_max = 1;
  std::size_t max_order = kDefaultOrderCap;
  unsigned jobs = 1;
  bool oracle_check = false;
  std::optional<std::size_t> g0_order;  // only branches with this |G0|
};

struct FamilyRecord {
  int K2 = 0, pg = 0, q = 0;
  std::string basket, signature;
  std::size_t order_G0 = 0;
  std::string G0, G0_name;
  std::size_t order_G = 0;
  std::string G, G_name;
  int genus = 0;
  std::optional<int> g_alb;
  Minimality minimality = Minimality::Unknown;
  std::optional<int> n_orbits;  // orbits sharing this record's table columns
  std::size_t orbit_size = 0;
  nlohmann::json representative;  // analyze input reproducing the record
};

enum class SkipReason { OrderNotCovered, OrderAboveCap };

inline std::string to_string(SkipReason r) {
  return r == SkipReason::OrderNotCovered ? "OrderNotCovered" : "OrderAboveCap";
}

struct SkipEntry {
  int K2 = 0;
  std::string basket, signature;
  std::size_t order_G0 = 0;
  SkipReason reason = SkipReason::OrderNotCovered;
  friend bool operator==(const SkipEntry&, const SkipEntry&) = default;
};

struct SearchStats {
  std::size_t branches = 0, shards = 0, candidates = 0, oracle_checks = 0;
};

struct SearchResult {
  std::vector<FamilyRecord> records;
  std::vector<SkipEntry> skips;
  SearchStats stats;
};

namespace detail {

inline nlohmann::json perm_json(const FiniteGroup& G, Elem x) {
  nlohmann::json a = nlohmann::json::array();
  for (auto v : G.permutation(x)) a.push_back(v + 1);
  return a;
}

// Analyze input for a vector living in ext.g0.
inline nlohmann::json serialize_candidate(const MixedExtension& ext, const GeneratingVector& v, const Signature& sig) {
  const FiniteGroup& G = *ext.G;
  const EmbeddedGroup& e = *ext.g0;
  nlohmann::json j;
  j["G"]["degree"] = G.degree();
  j["G"]["generators"] = nlohmann::json::array();
  for (Elem g : G.generators()) j["G"]["generators"].push_back(perm_json(G, g));
  j["G0_generators"] = nlohmann::json::array();
  for (Elem g : e.group.generators()) j["G0_generators"].push_back(perm_json(G, e.to_parent[g]));
  j["tau_prime"] = perm_json(G, ext.tau_prime);
  j["vector"]["genus_part"] = nlohmann::json::array();
  j["vector"]["tail"] = nlohmann::json::array();
  for (Elem x : v.genus) j["vector"]["genus_part"].push_back(perm_json(G, e.to_parent[x]));
  for (Elem x : v.tail) j["vector"]["tail"].push_back(perm_json(G, e.to_parent[x]));
  nlohmann::json s = nlohmann::json::array({sig.q});
  for (int m : sig.m) s.push_back(m);
  j["signature"] = s;
  return j;
}

// Computes per-order catalogue data once, on first use, across threads.
template <class Key, class Value>
class OnceCache {
 public:
  template <class F>
  const Value& get(const Key& k, F make) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard lock(mutex_);
      auto& s = slots_[k];
      if (!s) s = std::make_shared<Slot>();
      slot = s;
    }
    std::call_once(slot->once, [&] { slot->value = make(); });
    return slot->value;
  }

 private:
  struct Slot {
    std::once_flag once;
    Value value;
  };
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<Slot>> slots_;
};

inline bool record_less(const FamilyRecord& a, const FamilyRecord& b) {
  auto key = [](const FamilyRecord& r) {
    return std::make_tuple(r.K2, r.basket, r.signature, r.order_G0, r.G0, r.order_G, r.G);
  };
  if (key(a) != key(b)) return key(a) < key(b);
  return a.representative.dump() < b.representative.dump();
}

}  // namespace detail

// The search branches of one (pg, q, K^2): a basket with B = 24 chi - 3 K^2
// and an admissible signature, which fix |G0|.
inline std::vector<SearchBranch> search_branches(int pg, int q, int K2) {
  std::vector<SearchBranch> out;
  for (const Basket& b : enumerate_baskets(target_B(pg, q, K2), pg))
    for (auto& br : enumerate_signatures(b, pg, q, K2)) out.push_back(std::move(br));
  return out;
}

// Analyzes every vector of one G0 for one branch over every unsplit
// extension; records one family per Hurwitz orbit with the target basket.
inline std::vector<FamilyRecord> run_shard(const SearchBranch& br, const CatalogueEntry& g0_entry,
                                           const std::vector<MixedExtension>& extensions, bool oracle_check,
                                           SearchStats& stats) {
  std::vector<FamilyRecord> out;
  const FiniteGroup& G0 = *g0_entry.group;
  auto vectors = enumerate_generating_vectors(G0, br.signature);
  if (vectors.empty()) return out;
  for (const MixedExtension& ext : extensions) {
    const FiniteGroup& H = ext.g0->group;
    std::vector<GeneratingVector> kept;
    for (const GeneratingVector& v0 : vectors) {
      GeneratingVector v = apply(ext.identification, v0);
      MixedData d = make_mixed_data(H, ext.tau, ext.phi, v, br.signature);
      auto points = singular_points_Y(d);
      ++stats.candidates;
      if (oracle_check) {
        if (!same_points(points, bruteforce_singularity_oracle(d)))
          fail(ErrorCode::OracleMismatch, "fast path and oracle disagree on a candidate of " + g0_entry.label);
        ++stats.oracle_checks;
      }
      Basket basket = assemble_basket_X(points);
      if (basket != br.basket) continue;
      SurfaceInvariants inv = surface_invariants(d, basket);
      if (inv.pg != br.pg || inv.q != br.q || inv.K2 != Rational(br.K2)) continue;
      kept.push_back(std::move(v));
    }
    if (kept.empty()) continue;
    std::sort(kept.begin(), kept.end());
    EquivalenceContext ctx = equivalence_context(ext);
    auto orbits = hurwitz_reduce(H, kept, &ctx);
    for (const HurwitzOrbit& o : orbits) {
      MixedData d = make_mixed_data(H, ext.tau, ext.phi, o.representative, br.signature);
      Basket basket = assemble_basket_X(d);
      SurfaceInvariants inv = surface_invariants(d, basket);
      FamilyRecord r;
      r.K2 = br.K2;
      r.pg = br.pg;
      r.q = br.q;
      r.basket = basket.str();
      r.signature = br.signature.str();
      r.order_G0 = H.order();
      r.G0 = g0_entry.label;
      r.G0_name = g0_entry.name;
      r.order_G = ext.G->order();
      r.G = ext.G_label;
      r.genus = inv.genus;
      if (br.q == 1) r.g_alb = albanese_genus(d).g_alb;
      r.minimality = inv.minimality;
      r.orbit_size = o.size;
      r.representative = detail::serialize_candidate(ext, o.representative, br.signature);
      out.push_back(std::move(r));
    }
  }
  return out;
}

// Full search over K^2 in [k2_min, k2_max]. Branches whose |G| exceeds the cap
// or whose orders the catalogue does not cover completely are reported as
// skips. Output is independent of the number of jobs.
inline SearchResult run_search(const SearchConfig& cfg, const Catalogue& cat) {
  if (cfg.k2_min > cfg.k2_max) fail(ErrorCode::ValidationError, "empty K^2 range");
  if (cfg.max_order > kDefaultOrderCap) fail(ErrorCode::ValidationError, "max order above the group cap");
  SearchResult res;
  std::vector<SearchBranch> branches;
  for (int K2 = cfg.k2_min; K2 <= cfg.k2_max; ++K2)
    for (auto& br : search_branches(cfg.pg, cfg.q, K2)) {
      if (cfg.g0_order && static_cast<std::size_t>(br.order_G0) != *cfg.g0_order) continue;
      ++res.stats.branches;
      const auto og = static_cast<std::size_t>(br.order_G), og0 = static_cast<std::size_t>(br.order_G0);
      std::optional<SkipReason> why;
      if (og > cfg.max_order) {
        why = SkipReason::OrderAboveCap;
      } else if (!cat.is_complete(og) || !cat.is_complete(og0)) {
        why = SkipReason::OrderNotCovered;
      }
      if (why) {
        res.skips.push_back({K2, br.basket.str(), br.signature.str(), og0, *why});
        continue;
      }
      branches.push_back(std::move(br));
    }

  struct Shard {
    std::size_t branch;
    const CatalogueEntry* g0;
  };
  std::vector<Shard> shards;
  for (std::size_t b = 0; b < branches.size(); ++b)
    for (const CatalogueEntry& e : cat.groups_of_order(static_cast<std::size_t>(branches[b].order_G0)).groups)
      shards.push_back({b, &e});
  res.stats.shards = shards.size();

  detail::OnceCache<std::string, std::vector<MixedExtension>> ext_cache;
  std::vector<std::vector<FamilyRecord>> results(shards.size());
  std::vector<SearchStats> shard_stats(shards.size());
  std::vector<std::exception_ptr> errors(shards.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s; (s = next.fetch_add(1)) < shards.size();) {
      try {
        const Shard& sh = shards[s];
        const SearchBranch& br = branches[sh.branch];
        // skip the extension work when G0 has no vectors at all
        if (enumerate_generating_vectors(*sh.g0->group, br.signature).empty()) continue;
        const auto& exts = ext_cache.get(sh.g0->label, [&] { return enumerate_unsplit_extensions(*sh.g0->group, cat); });
        results[s] = run_shard(br, *sh.g0, exts, cfg.oracle_check, shard_stats[s]);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t s = 0; s < shards.size(); ++s) {
    res.stats.candidates += shard_stats[s].candidates;
    res.stats.oracle_checks += shard_stats[s].oracle_checks;
    for (auto& r : results[s]) res.records.push_back(std::move(r));
  }
  std::sort(res.records.begin(), res.records.end(), detail::record_less);
  // n_orbits: orbits sharing (K^2, basket, signature, G0, G)
  for (std::size_t a = 0; a < res.records.size();) {
    std::size_t b = a;
    auto cell = [&](const FamilyRecord& r) { return std::tie(r.K2, r.basket, r.signature, r.G0, r.G); };
    while (b < res.records.size() && cell(res.records[b]) == cell(res.records[a])) ++b;
    for (std::size_t k = a; k < b; ++k) res.records[k].n_orbits = static_cast<int>(b - a);
    a = b;
  }
  std::sort(res.skips.begin(), res.skips.end(), [](const SkipEntry& x, const SkipEntry& y) {
    return std::tie(x.K2, x.basket, x.signature, x.order_G0) < std::tie(y.K2, y.basket, y.signature, y.order_G0);
  });
  return res;
}

// ---- single-candidate analysis ----

namespace detail {

inline Elem parse_element(const FiniteGroup& G, const nlohmann::json& j) {
  if (j.is_number_integer()) {
    auto k = j.get<std::int64_t>();
    if (k < 0 || static_cast<std::size_t>(k) >= G.order()) fail(ErrorCode::ValidationError, "element index out of range");
    return static_cast<Elem>(k);
  }
  if (!j.is_array()) fail(ErrorCode::ParseError, "element must be an index or a permutation");
  Permutation p;
  for (const auto& v : j) {
    auto x = v.get<std::int64_t>();
    if (x < 1 || static_cast<std::size_t>(x) > G.degree()) fail(ErrorCode::ValidationError, "image out of range");
    p.push_back(static_cast<std::uint32_t>(x - 1));
  }
  auto e = G.find(p);
  if (!e) fail(ErrorCode::ValidationError, "permutation is not an element of G");
  return *e;
}

}  // namespace detail

struct AnalyzeResult {
  FamilyRecord record;
  Basket basket;
  SurfaceInvariants invariants;
  std::vector<YPoint> points;
  std::optional<AlbaneseData> albanese;
};

// A validated analyze input: the extension with its chosen tau', and the
// vector in the coordinates of ext.g0.
struct Candidate {
  MixedExtension ext;
  GeneratingVector vector;
  Signature signature;
};

// Input: {"G": {"degree", "generators"}, "G0_generators", "tau_prime",
// "vector": {"genus_part", "tail"}, "signature": [q, m1, ..]}. Elements are
// permutations (1-based images) or indices into G's element list.
inline Candidate parse_candidate(const nlohmann::json& in) {
  Candidate c;
  try {
    const auto degree = in.at("G").at("degree").get<std::size_t>();
    std::vector<Permutation> gens;
    for (const auto& g : in.at("G").at("generators")) {
      Permutation p;
      for (const auto& v : g) {
        auto x = v.get<std::int64_t>();
        if (x < 1 || static_cast<std::size_t>(x) > degree) fail(ErrorCode::InvalidPermutation, "image out of range");
        p.push_back(static_cast<std::uint32_t>(x - 1));
      }
      gens.push_back(std::move(p));
    }
    if (gens.empty()) {
      gens.emplace_back(degree);
      std::iota(gens[0].begin(), gens[0].end(), 0u);
    }
    auto G = std::make_shared<FiniteGroup>(FiniteGroup::from_permutations(gens, degree));
    std::vector<Elem> h0;
    for (const auto& g : in.at("G0_generators")) h0.push_back(detail::parse_element(*G, g));
    Subgroup H = generated_subgroup(*G, h0);
    if (!unsplit_test(*G, H)) fail(ErrorCode::SplitExtension, "an involution lies outside G0");
    MixedExtension& ext = c.ext;
    ext.G = G;
    ext.embedded = H;
    ext.g0 = std::make_shared<const EmbeddedGroup>(realize_subgroup(*G, h0));
    ext.tau_prime = detail::parse_element(*G, in.at("tau_prime"));
    if (H.contains(ext.tau_prime)) fail(ErrorCode::ValidationError, "tau' lies in G0");
    ext.identification = identity_map(H.size());
    std::tie(ext.tau, ext.phi) = mixed_action_data(ext);

    const auto& s = in.at("signature");
    if (!s.is_array() || s.empty()) fail(ErrorCode::ParseError, "signature must be [q, m1, ...]");
    c.signature.q = s[0].get<int>();
    for (std::size_t k = 1; k < s.size(); ++k) c.signature.m.push_back(s[k].get<int>());
    std::sort(c.signature.m.begin(), c.signature.m.end());

    auto to_g0 = [&](const nlohmann::json& j) {
      Elem x = ext.g0->from_parent[detail::parse_element(*G, j)];
      if (x == kNoElem) fail(ErrorCode::NotGenerating, "vector entry outside G0");
      return x;
    };
    for (const auto& j : in.at("vector").at("genus_part")) c.vector.genus.push_back(to_g0(j));
    for (const auto& j : in.at("vector").at("tail")) c.vector.tail.push_back(to_g0(j));
    const FiniteGroup& g0 = ext.g0->group;
    if (!is_generating_vector(g0, c.vector, c.signature))
      fail(ErrorCode::NotGenerating, "not a generating vector of G0 with signature " + c.signature.str());
    Rational genus = Rational(static_cast<std::int64_t>(g0.order())) * c.signature.theta() / Rational(2) + Rational(1);
    if (!genus.is_integer() || genus < Rational(2)) fail(ErrorCode::GenusBelowTwo, "g(C) = " + genus.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("analyze input: ") + e.what());
  }
  return c;
}

inline AnalyzeResult analyze(const nlohmann::json& in, const Catalogue* cat = nullptr, bool oracle_check = false) {
  AnalyzeResult out;
  Candidate c = parse_candidate(in);
  const FiniteGroup& g0 = c.ext.g0->group;
  MixedData d = make_mixed_data(g0, c.ext.tau, c.ext.phi, c.vector, c.signature);
  out.points = singular_points_Y(d);
  if (oracle_check && !same_points(out.points, bruteforce_singularity_oracle(d)))
    fail(ErrorCode::OracleMismatch, "fast path and oracle disagree");
  out.basket = assemble_basket_X(out.points);
  out.invariants = surface_invariants(d, out.basket);
  if (c.signature.q == 1) out.albanese = albanese_genus(d);

  FamilyRecord& r = out.record;
  r.K2 = static_cast<int>(out.invariants.K2.num());
  r.pg = out.invariants.pg;
  r.q = out.invariants.q;
  r.basket = out.basket.str();
  r.signature = c.signature.str();
  r.order_G0 = g0.order();
  r.order_G = c.ext.G->order();
  r.G0 = r.G = "-";
  if (cat) {
    if (auto l = cat->identify(g0)) r.G0 = *l;
    if (auto l = cat->identify(*c.ext.G)) r.G = *l;
  }
  r.genus = d.genus;
  if (out.albanese) r.g_alb = out.albanese->g_alb;
  r.minimality = out.invariants.minimality;
  r.orbit_size = 0;
  r.representative = in;
  return out;
}

// ---- output ----

inline std::string tsv_header() {
  return "K2\tpg\tq\tbasket\tsignature\tordG0\tG0\tordG\tG\tgC\tg_alb\tminimal\tn_orbits\n";
}

inline std::string to_tsv(const std::vector<FamilyRecord>& records) {
  std::ostringstream os;
  os << tsv_header();
  for (const auto& r : records) {
    os << r.K2 << '\t' << r.pg << '\t' << r.q << '\t' << r.basket << '\t' << r.signature << '\t' << r.order_G0 << '\t'
       << r.G0 << '\t' << r.order_G << '\t' << r.G << '\t' << r.genus << '\t'
       << (r.g_alb ? std::to_string(*r.g_alb) : "-") << '\t' << to_string(r.minimality) << '\t'
       << (r.n_orbits ? std::to_string(*r.n_orbits) : "-") << '\n';
  }
  return os.str();
}

inline std::string skips_to_tsv(const std::vector<SkipEntry>& skips) {
  std::ostringstream os;
  os << "K2\tbasket\tsignature\tordG0\treason\n";
  for (const auto& s : skips)
    os << s.K2 << '\t' << s.basket << '\t' << s.signature << '\t' << s.order_G0 << '\t' << to_string(s.reason) << '\n';
  return os.str();
}

inline nlohmann::json to_json(const FamilyRecord& r) {
  nlohmann::json j;
  j["K2"] = r.K2;
  j["pg"] = r.pg;
  j["q"] = r.q;
  j["basket"] = r.basket;
  j["signature"] = r.signature;
  j["ordG0"] = r.order_G0;
  j["G0"] = r.G0;
  j["ordG"] = r.order_G;
  j["G"] = r.G;
  j["gC"] = r.genus;
  j["g_alb"] = r.g_alb ? nlohmann::json(*r.g_alb) : nlohmann::json(nullptr);
  j["minimal"] = to_string(r.minimality);
  j["n_orbits"] = r.n_orbits ? nlohmann::json(*r.n_orbits) : nlohmann::json(nullptr);
  j["representative"] = r.representative;
  return j;
}

inline nlohmann::json to_json(const std::vector<FamilyRecord>& records, const std::vector<SkipEntry>& skips) {
  nlohmann::json j;
  j["records"] = nlohmann::json::array();
  for (const auto& r : records) j["records"].push_back(to_json(r));
  j["skips"] = nlohmann::json::array();
  for (const auto& s : skips)
    j["skips"].push_back({{"K2", s.K2},
                          {"basket", s.basket},
                          {"signature", s.signature},
                          {"ordG0", s.order_G0},
                          {"reason", to_string(s.reason)}});
  return j;
}

}  // namespace mqe
