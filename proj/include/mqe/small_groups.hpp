#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "mqe/catalogue.hpp"
#include "mqe/group.hpp"
#include "mqe/isomorphism.hpp"
#include "mqe/named_groups.hpp"

namespace mqe {

// All automorphisms of N, as image vectors.
inline std::vector<GroupMap> all_automorphisms(const FiniteGroup& N) {
  auto inv = element_invariants(N);
  auto gens = generating_sequence(N);
  std::vector<GroupMap> out;
  EmbeddingSearch search(N, N, gens, matching_candidates(inv, inv, gens), &inv, &inv);
  search.run([&](const GroupMap& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

namespace detail {

inline std::vector<int> prime_divisors(int n) {
  std::vector<int> ps;
  for (int p = 2; p <= n; ++p)
    if (n % p == 0) {
      bool prime = true;
      for (int d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
      if (prime) ps.push_back(p);
    }
  return ps;
}

// The group of pairs t^k x (0 <= k < p, x in N) with x t = t beta(x) and
// t^p = z. Requires beta(z) = z and beta^p = conjugation x -> z^-1 x z.
inline FiniteGroup cyclic_extension(const FiniteGroup& N, const GroupMap& beta, Elem z, int p) {
  const auto n = static_cast<Elem>(N.order());
  std::vector<std::vector<Elem>> bpow(p + 1, identity_map(n).images);
  for (int l = 1; l <= p; ++l)
    for (Elem x = 0; x < n; ++x) bpow[l][x] = beta(bpow[l - 1][x]);
  using P = std::pair<int, int>;
  auto mul = [&](const P& a, const P& b) {
    int k = a.first + b.first;
    Elem x = N.mul(bpow[b.first][a.second], b.second);
    if (k >= p) {
      k -= p;
      x = N.mul(z, x);
    }
    return P{k, static_cast<int>(x)};
  };
  std::vector<P> gens{{1 % p, 0}};
  for (Elem g : N.generators()) gens.push_back({0, static_cast<int>(g)});
  return FiniteGroup::closure<P, PairHash>(gens, P{0, 0}, mul, kDefaultOrderCap);
}

}  // namespace detail

// One group per isomorphism class of order n, built without the catalogue.
// Every group of order n <= 16 is solvable, so it has a normal subgroup N of
// prime index p; the group is then a cyclic extension of N determined by an
// automorphism beta (conjugation by a lift t of the generator) and z = t^p.
// Enumerating all admissible (N, beta, z) and reducing by isomorphism gives
// the classes.
inline std::vector<FiniteGroup> enumerate_small_groups(int n) {
  if (n < 1 || n > 16) fail(ErrorCode::OutOfRange, "enumerate_small_groups supports 1 <= n <= 16");
  static std::map<int, std::vector<FiniteGroup>> memo;
  static std::mutex memo_mutex;
  {
    std::lock_guard lock(memo_mutex);
    if (auto it = memo.find(n); it != memo.end()) return it->second;
  }
  std::vector<FiniteGroup> found;
  std::vector<Fingerprint> prints;
  auto offer = [&](FiniteGroup G) {
    if (!check_group_axioms(G)) fail(ErrorCode::ValidationError, "extension table is not a group");
    auto f = fingerprint(G);
    for (std::size_t i = 0; i < found.size(); ++i)
      if (prints[i] == f && is_isomorphic(G, found[i])) return;
    found.push_back(std::move(G));
    prints.push_back(std::move(f));
  };
  if (n == 1) {
    offer(FiniteGroup::from_permutations({Permutation{0}}, 1));
  } else {
    for (int p : detail::prime_divisors(n))
      for (const FiniteGroup& N : enumerate_small_groups(n / p)) {
        auto autos = all_automorphisms(N);
        for (const GroupMap& beta : autos) {
          // beta^p as a map
          std::vector<Elem> bp = identity_map(N.order()).images;
          for (int i = 0; i < p; ++i)
            for (auto& x : bp) x = beta(x);
          for (Elem z = 0; z < N.order(); ++z) {
            if (beta(z) != z) continue;
            bool ok = true;
            for (Elem x = 0; x < N.order() && ok; ++x) ok = bp[x] == N.mul(N.mul(N.inv(z), x), z);
            if (ok) offer(detail::cyclic_extension(N, beta, z, p));
          }
        }
      }
  }
  std::lock_guard lock(memo_mutex);
  memo.emplace(n, found);
  return found;
}

}  // namespace mqe
