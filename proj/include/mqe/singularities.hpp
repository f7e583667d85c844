#pragma once

#include <compare>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mqe/error.hpp"
#include "mqe/rational.hpp"

namespace mqe {

// Hirzebruch-Jung expansion n/a = b1 - 1/(b2 - 1/(...)), all b_i >= 2.
struct HJFraction {
  int n = 1;
  int a = 0;
  std::vector<int> coefficients;
};

inline void require_coprime_pair(int n, int a) {
  if (n < 2 || a <= 0 || a >= n) fail(ErrorCode::OutOfRange, "need n > a > 0 and n >= 2");
  if (std::gcd(n, a) != 1) fail(ErrorCode::NotCoprime, std::to_string(n) + "," + std::to_string(a));
}

inline HJFraction hj_expand(int n, int a) {
  require_coprime_pair(n, a);
  HJFraction f{n, a, {}};
  std::int64_t p = n, q = a;
  while (q > 0) {
    std::int64_t b = (p + q - 1) / q;
    f.coefficients.push_back(static_cast<int>(b));
    std::int64_t r = b * q - p;
    p = q;
    q = r;
  }
  return f;
}

// Inverse of hj_expand: the coprime pair (n, a) with n/a = [b1..bl].
inline std::pair<std::int64_t, std::int64_t> hj_evaluate(std::span<const int> b) {
  if (b.empty()) return {1, 0};
  std::int64_t p = b.back(), q = 1;
  for (std::size_t i = b.size() - 1; i-- > 0;) {
    std::int64_t np = detail::checked_mul(b[i], p) - q;
    q = p;
    p = np;
  }
  return {p, q};
}

inline int dual_residue(int n, int a) {
  if (n == 1) return 0;
  if (std::gcd(n, a) != 1) fail(ErrorCode::NotCoprime, std::to_string(n) + "," + std::to_string(a));
  a %= n;
  if (a < 0) a += n;
  for (int x = 1; x < n; ++x)
    if (static_cast<std::int64_t>(a) * x % n == 1) return x;
  return 1;  // n == 2 handled by the loop; unreachable otherwise
}

enum class Flavor { C, D };

struct SingularityKey {
  Flavor flavor = Flavor::C;
  int n = 0;
  int a = 0;
  friend auto operator<=>(const SingularityKey&, const SingularityKey&) = default;
};

inline std::string render(const SingularityKey& k) {
  return std::string(k.flavor == Flavor::C ? "C(" : "D(") + std::to_string(k.n) + "," + std::to_string(k.a) + ")";
}

struct SingularityClass {
  Flavor flavor = Flavor::C;
  int n = 0;
  int a = 0;
  int a_dual = 0;
  std::vector<int> hj;  // expansion of n/a
  Rational k, e, B;
  int index = 1;        // n / gcd(n, a+1) of the underlying cyclic point
  int m = 0;            // D only: half-length, hj has 2m+1 entries
  int center = 0;       // D only: middle coefficient 2b

  SingularityKey key() const { return {flavor, n, a}; }
};

// Correction terms of a cyclic point C_{n,a}.
inline void cyclic_terms(int n, int a, int a_dual, const std::vector<int>& hj, Rational& k, Rational& e,
                         Rational& B) {
  std::int64_t excess = 0;
  for (int b : hj) excess += b - 2;
  k = Rational(-2) + Rational(2 + a + a_dual, n) + Rational(excess);
  e = Rational(static_cast<std::int64_t>(hj.size()) + 1) - Rational(1, n);
  B = Rational(2) * e + k;
}

// Reasons D_{n,a} fails admissibility; empty when admissible.
inline std::vector<std::string> d_type_failures(int n, int a, const std::vector<int>& hj) {
  std::vector<std::string> why;
  if (static_cast<std::int64_t>(a) * a % n != 1 % n) why.emplace_back("a^2 != 1 mod n");
  if (n % 2 != 0) why.emplace_back("n odd");
  if (hj.size() % 2 == 0) {
    why.emplace_back("expansion length even");
  } else if (hj[hj.size() / 2] % 2 != 0) {
    why.emplace_back("middle coefficient " + std::to_string(hj[hj.size() / 2]) + " odd");
  }
  return why;
}

inline SingularityClass make_class(Flavor flavor, int n, int a) {
  require_coprime_pair(n, a);
  SingularityClass c;
  c.flavor = flavor;
  c.n = n;
  c.a_dual = dual_residue(n, a);
  c.a = flavor == Flavor::C ? std::min(a, c.a_dual) : a;
  if (flavor == Flavor::C) c.a_dual = std::max(a, c.a_dual);
  c.hj = hj_expand(n, c.a).coefficients;
  c.index = n / std::gcd(n, c.a + 1);
  cyclic_terms(n, c.a, c.a_dual, c.hj, c.k, c.e, c.B);
  if (flavor == Flavor::D) {
    auto why = d_type_failures(n, a, c.hj);
    if (!why.empty()) {
      std::string msg = "D(" + std::to_string(n) + "," + std::to_string(a) + "):";
      for (const auto& w : why) msg += " " + w + ";";
      fail(ErrorCode::DTypeInadmissible, msg);
    }
    c.m = static_cast<int>(c.hj.size() / 2);
    c.center = c.hj[c.m];
    c.k = c.k / Rational(2);
    c.e = c.e / Rational(2) + Rational(3);
    c.B = c.B / Rational(2) + Rational(6);
  }
  return c;
}

inline SingularityClass make_class(const SingularityKey& k) { return make_class(k.flavor, k.n, k.a); }

struct ResolutionGraph {
  enum class Shape { Chain, Star };
  Shape shape = Shape::Chain;
  std::vector<int> nodes;  // self-intersections
  std::vector<std::pair<int, int>> edges;
};

// C: chain -b1..-bl. D: chain -b1..-bm, then a center -(b_{m+1}/2 + 1) carrying
// two extra -2 leaves.
inline ResolutionGraph resolution_graph(const SingularityClass& c) {
  ResolutionGraph g;
  if (c.flavor == Flavor::C) {
    for (std::size_t i = 0; i < c.hj.size(); ++i) {
      g.nodes.push_back(-c.hj[i]);
      if (i > 0) g.edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(i));
    }
    return g;
  }
  g.shape = ResolutionGraph::Shape::Star;
  for (int i = 0; i < c.m; ++i) {
    g.nodes.push_back(-c.hj[i]);
    if (i > 0) g.edges.emplace_back(i - 1, i);
  }
  const int center = c.m;
  g.nodes.push_back(-(c.center / 2 + 1));
  if (c.m > 0) g.edges.emplace_back(c.m - 1, center);
  g.nodes.push_back(-2);
  g.nodes.push_back(-2);
  g.edges.emplace_back(center, center + 1);
  g.edges.emplace_back(center, center + 2);
  return g;
}

// Parameters naming the local group of a D-type point: n/a =
// [b1..bm, 2b, bm..b1], p/q = [b1..bm] (1/0 for m = 0), xi = b p - q.
struct DGroupDescriptor {
  enum class Case { Cyclic, XiOdd, XiEven };
  Case kind = Case::XiOdd;
  int n = 0, a = 0, m = 0;
  std::int64_t p = 1, q = 0, b = 0, xi = 0;
  std::optional<std::pair<int, int>> cyclic_equivalent;  // set for a = 1: C(2n, n+1)
};

inline DGroupDescriptor d_group_descriptor(int n, int a) {
  SingularityClass c = make_class(Flavor::D, n, a);
  DGroupDescriptor d;
  d.n = n;
  d.a = a;
  d.m = c.m;
  d.b = c.center / 2;
  if (c.m > 0) {
    auto [p, q] = hj_evaluate(std::span<const int>(c.hj.data(), static_cast<std::size_t>(c.m)));
    d.p = p;
    d.q = q;
  }
  d.xi = d.b * d.p - d.q;
  if (d.xi == 0) {
    d.kind = DGroupDescriptor::Case::Cyclic;
  } else {
    d.kind = d.xi % 2 != 0 ? DGroupDescriptor::Case::XiOdd : DGroupDescriptor::Case::XiEven;
  }
  if (a == 1) d.cyclic_equivalent = std::make_pair(2 * n, n + 1);
  return d;
}

}  // namespace mqe
