#include <gtest/gtest.h>

#include "common.hpp"
#include "mqe/covers.hpp"
#include "mqe/extensions.hpp"

using namespace mqe;

namespace {

const CatalogueEntry& entry(const std::string& label) {
  const auto& cat = test::shipped_catalogue();
  for (const auto& [n, list] : cat.entries())
    for (const auto& e : list)
      if (e.label == label) return e;
  throw std::runtime_error("no " + label);
}

}  // namespace

TEST(Covers, GenusOfCover) {
  EXPECT_EQ(genus_of_cover(2, parse_signature("1;2,2")), 2);
  EXPECT_EQ(genus_of_cover(2, parse_signature("2;-")), 3);
  EXPECT_EQ(genus_of_cover(16, parse_signature("0;2,2,2,4")), 3);
  try {
    genus_of_cover(3, parse_signature("0;2,2,2,4"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonIntegralGenus);
  }
}

TEST(Covers, VectorsOfZ2) {
  FiniteGroup z2 = construct_named(NamedGroupDescriptor::cyclic(2));
  auto v = enumerate_generating_vectors(z2, parse_signature("1;2,2"));
  // h1 = h2 = t; (d, e) any of the 4 pairs
  EXPECT_EQ(v.size(), 4u);
  for (const auto& x : v) EXPECT_TRUE(is_generating_vector(z2, x, parse_signature("1;2,2")));
  // all nonzero (d1, e1, d2, e2) in Z2^4
  EXPECT_EQ(enumerate_generating_vectors(z2, parse_signature("2;-")).size(), 15u);
  FiniteGroup z3 = construct_named(NamedGroupDescriptor::cyclic(3));
  EXPECT_TRUE(enumerate_generating_vectors(z3, parse_signature("0;3,3")).empty());
}

TEST(Covers, EnumerationMatchesBruteForce) {
  // every 4-tuple of Q8 checked directly against the seeded enumeration
  FiniteGroup q8 = construct_named(NamedGroupDescriptor::dicyclic(2));
  Signature sig = parse_signature("0;4,4,4,4");
  std::size_t brute = 0;
  const auto n = static_cast<Elem>(q8.order());
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        for (Elem d = 0; d < n; ++d) brute += is_generating_vector(q8, {{}, {a, b, c, d}}, sig);
  EXPECT_EQ(enumerate_generating_vectors(q8, sig).size(), brute);
  EXPECT_GT(brute, 0u);
}

TEST(Covers, HurwitzCollapsesGenusTwoVectors) {
  const auto& z4 = entry("G(4,1)");
  auto subs = index_two_subgroups(*z4.group);
  ASSERT_EQ(subs.size(), 1u);
  MixedExtension ext = make_extension(z4.group, z4.label, subs[0]);
  auto vectors = enumerate_generating_vectors(ext.g0->group, parse_signature("2;-"));
  EquivalenceContext ctx = equivalence_context(ext);
  auto orbits = hurwitz_reduce(ext.g0->group, vectors, &ctx);
  ASSERT_EQ(orbits.size(), 1u);
  EXPECT_EQ(orbits[0].size, 15u);
  EXPECT_EQ(orbits[0].representative, *std::min_element(vectors.begin(), vectors.end()));
}

TEST(Covers, HurwitzReduceIsIdempotentAndMoveClosed) {
  const auto& d4 = entry("G(8,3)");
  FiniteGroup G = *d4.group;
  Signature sig = parse_signature("0;2,2,2,2,2");
  auto vectors = enumerate_generating_vectors(G, sig);
  ASSERT_FALSE(vectors.empty());
  EquivalenceContext ctx;
  auto orbits = hurwitz_reduce(G, vectors, &ctx);
  std::size_t total = 0;
  std::vector<GeneratingVector> reps;
  for (const auto& o : orbits) {
    total += o.size;
    reps.push_back(o.representative);
  }
  EXPECT_EQ(total, vectors.size());
  // one braid move lands in the same orbit
  for (const auto& o : orbits) {
    auto moved = hurwitz::braid(G, o.representative, 0);
    auto it = std::lower_bound(vectors.begin(), vectors.end(), moved);
    ASSERT_TRUE(it != vectors.end() && *it == moved);
    std::size_t idx = static_cast<std::size_t>(it - vectors.begin());
    EXPECT_NE(std::find(o.members.begin(), o.members.end(), idx), o.members.end());
  }
  auto again = hurwitz_reduce(G, vectors, &ctx);
  ASSERT_EQ(again.size(), orbits.size());
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    EXPECT_EQ(again[k].representative, reps[k]);
    for (std::size_t m : orbits[k].members) EXPECT_LE(orbits[k].representative, vectors[m]);
  }
}

TEST(Covers, HurwitzNeedsContext) {
  FiniteGroup z2 = construct_named(NamedGroupDescriptor::cyclic(2));
  auto v = enumerate_generating_vectors(z2, parse_signature("2;-"));
  try {
    hurwitz_reduce(z2, v, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedContextMissing);
  }
}

TEST(Covers, MovesPreserveTheRelation) {
  const auto& g = entry("G(8,3)");
  const FiniteGroup& G = *g.group;
  Signature sig = parse_signature("2;2,2");
  auto vectors = enumerate_generating_vectors(G, sig);
  ASSERT_FALSE(vectors.empty());
  EquivalenceContext ctx;
  for (std::size_t k = 0; k < std::min<std::size_t>(vectors.size(), 200); ++k)
    for (const auto& w : hurwitz::neighbours(G, vectors[k], ctx)) EXPECT_TRUE(is_generating_vector(G, w, sig));
}
