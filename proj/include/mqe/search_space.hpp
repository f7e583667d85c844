#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "mqe/basket.hpp"
#include "mqe/rational.hpp"
#include "mqe/singularities.hpp"

namespace mqe {

// B of the basket forced by K^2 = 8 chi - B/3.
inline Rational target_B(int pg, int q, int K2) { return Rational(24 * (1 - q + pg) - 3 * K2); }

// Every C and D class with B <= B0. A C class with expansion [b1..bl] has
// B >= sum b_i, a D class has B >= 6 + sum b_i / 2.
inline std::vector<SingularityClass> classes_with_B_at_most(const Rational& B0) {
  std::vector<SingularityClass> out;
  if (B0 < Rational(3)) return out;
  std::set<SingularityKey> seen;
  std::vector<int> b;
  const std::int64_t c_budget = B0.floor();
  // C classes: all strings with sum <= B0
  auto walk = [&](auto&& self, std::int64_t budget) -> void {
    if (!b.empty()) {
      auto [n, a] = hj_evaluate(b);
      SingularityKey key{Flavor::C, static_cast<int>(n), static_cast<int>(std::min<std::int64_t>(a, dual_residue(static_cast<int>(n), static_cast<int>(a))))};
      if (seen.insert(key).second) {
        auto c = make_class(key);
        if (c.B <= B0) out.push_back(c);
      }
    }
    for (int x = 2; x <= budget; ++x) {
      b.push_back(x);
      self(self, budget - x);
      b.pop_back();
    }
  };
  walk(walk, c_budget);
  // D classes: palindromes [h, 2c, reverse(h)] with sum <= 2(B0 - 6)
  if (B0 >= Rational(15, 2)) {
    const std::int64_t d_budget = (Rational(2) * (B0 - Rational(6))).floor();
    std::vector<int> half;
    auto walk_d = [&](auto&& self, std::int64_t budget) -> void {
      for (int mid = 2; mid <= budget; mid += 2) {
        std::vector<int> s(half);
        s.push_back(mid);
        s.insert(s.end(), half.rbegin(), half.rend());
        auto [n, a] = hj_evaluate(s);
        if (n % 2 == 0) {
          SingularityKey key{Flavor::D, static_cast<int>(n), static_cast<int>(a)};
          if (seen.insert(key).second) {
            auto c = make_class(key);
            if (c.B <= B0) out.push_back(c);
          }
        }
      }
      for (int x = 2; 2 * x + 2 <= budget; ++x) {
        half.push_back(x);
        self(self, budget - 2 * x);
        half.pop_back();
      }
    };
    walk_d(walk_d, d_budget);
  }
  std::sort(out.begin(), out.end(), [](const SingularityClass& x, const SingularityClass& y) {
    if (x.B != y.B) return x.B < y.B;
    return x.key() < y.key();
  });
  return out;
}

// Baskets with B = B0 satisfying the integrality constraint and the bound on
// the number d of D points (d even, d/2 <= pg + 1).
inline std::vector<Basket> enumerate_baskets(const Rational& B0, int pg) {
  std::vector<Basket> out;
  if (B0 < Rational(0)) return out;
  if (B0 == Rational(0)) {
    out.emplace_back();
    return out;
  }
  auto cls = classes_with_B_at_most(B0);
  std::map<Rational, std::vector<std::size_t>> by_B;
  for (std::size_t i = 0; i < cls.size(); ++i) by_B[cls[i].B].push_back(i);
  std::vector<std::size_t> chosen;
  auto emit = [&]() {
    Basket b;
    for (auto i : chosen) b.add(cls[i].key());
    const int d = b.d();
    if (d % 2 != 0 || d / 2 > pg + 1) return;
    if (!b.integrality_sum().is_integer()) return;
    out.push_back(std::move(b));
  };
  // Indices are nondecreasing; the last class is found by exact lookup.
  auto dfs = [&](auto&& self, std::size_t start, const Rational& remaining) -> void {
    if (auto it = by_B.find(remaining); it != by_B.end())
      for (auto j : it->second)
        if (j >= start) {
          chosen.push_back(j);
          emit();
          chosen.pop_back();
        }
    const Rational half = remaining / Rational(2);
    for (std::size_t j = start; j < cls.size() && cls[j].B <= half; ++j) {
      chosen.push_back(j);
      self(self, j, remaining - cls[j].B);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0, B0);
  std::sort(out.begin(), out.end(), [](const Basket& a, const Basket& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

// (q; m1 <= ... <= mr)
struct Signature {
  int q = 0;
  std::vector<int> m;

  Rational theta() const {
    Rational t(2 * q - 2);
    for (int x : m) t += Rational(x - 1, x);
    return t;
  }
  // "q;m1,m2,..." with "-" for an empty branch list
  std::string str() const {
    std::string s = std::to_string(q) + ";";
    if (m.empty()) return s + "-";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
    return s;
  }
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

inline Signature parse_signature(const std::string& text) {
  Signature s;
  auto semi = text.find(';');
  if (semi == std::string::npos) fail(ErrorCode::ParseError, "signature needs 'q;...'");
  s.q = std::stoi(text.substr(0, semi));
  std::string rest = text.substr(semi + 1);
  if (rest != "-" && !rest.empty()) {
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto end = rest.find(',', pos);
      if (end == std::string::npos) end = rest.size();
      s.m.push_back(std::stoi(rest.substr(pos, end - pos)));
      pos = end + 1;
    }
  }
  std::sort(s.m.begin(), s.m.end());
  return s;
}

struct SearchBranch {
  int pg = 0, q = 0, K2 = 0;
  Basket basket;
  Signature signature;
  Rational theta, beta;
  std::int64_t order_G0 = 0;
  std::int64_t order_G = 0;
  int genus = 0;
};

namespace detail {

inline Rational slack_M(int r, int q) { return std::max(Rational(1, 6), Rational(r - 3 + 4 * q, 2)); }

// Conditions on a complete signature once beta and Theta are known.
inline bool signature_admissible(const Basket& basket, int q, const std::vector<int>& m, const Rational& theta,
                                 std::int64_t beta, int I) {
  const int r = static_cast<int>(m.size());
  if (Rational(r) > Rational(2) * theta + Rational(4 * (1 - q))) return false;
  const Rational M = slack_M(r, q);
  const Rational bound_e = (Rational(2 * I) * Rational(beta) * theta + Rational(1)) / M;
  const Rational bound_f = (Rational(beta) * theta + Rational(1)) / M;
  int exceptions = 0;
  for (int x : m) {
    if (x > 4 * beta + 6) return false;
    if ((2 * beta * I) % x != 0) return false;
    if (Rational(x) > bound_e) return false;
    if (!(beta % x == 0 && Rational(x) <= bound_f)) ++exceptions;
  }
  if (exceptions > basket.count(Flavor::C) + basket.d() / 2) return false;
  for (const auto& [k, mult] : basket.classes()) {
    bool divides = false;
    for (int x : m) divides = divides || x % k.n == 0;
    if (!divides) return false;
  }
  return true;
}

inline SearchBranch make_branch(const Basket& basket, int pg, int q, int K2, std::vector<int> m, const Rational& theta,
                                std::int64_t beta) {
  SearchBranch br;
  br.pg = pg;
  br.q = q;
  br.K2 = K2;
  br.basket = basket;
  br.signature = {q, std::move(m)};
  br.theta = theta;
  br.beta = Rational(beta);
  Rational g0 = Rational(2 * beta) / theta;
  br.order_G0 = g0.num();
  br.order_G = 2 * br.order_G0;
  br.genus = static_cast<int>(beta + 1);
  return br;
}

}  // namespace detail

// Smallest positive value of Theta for a given q.
inline Rational theta_floor(int q) {
  if (q == 0) return Rational(1, 42);
  if (q == 1) return Rational(1, 2);
  return Rational(2 * q - 2);
}

// All signatures compatible with the basket and the target invariants. Each
// beta = g(C) - 1 fixes Theta = N / (3 beta) with N = 12 chi + k - e, so the
// branch orders are the multisets of divisors of 2 beta I whose terms
// (1 - 1/m) add up to Theta - 2q + 2.
inline std::vector<SearchBranch> enumerate_signatures(const Basket& basket, int pg, int q, int K2) {
  std::vector<SearchBranch> out;
  const int chi = 1 - q + pg;
  const Rational N = Rational(12 * chi) + basket.k() - basket.e();
  if (N <= Rational(0)) return out;
  const int I = basket.index();
  const std::int64_t beta_max = (N / (Rational(3) * theta_floor(q))).floor();
  for (std::int64_t beta = 1; beta <= beta_max; ++beta) {
    const Rational theta = N / (Rational(3) * Rational(beta));
    const Rational order_g0 = Rational(2 * beta) / theta;
    if (!order_g0.is_integer()) continue;
    const Rational S = theta - Rational(2 * q - 2);
    if (S < Rational(0)) continue;
    std::vector<int> divisors;
    const std::int64_t L = 2 * beta * I;
    for (std::int64_t x = 2; x <= std::min<std::int64_t>(L, 4 * beta + 6); ++x)
      if (L % x == 0) divisors.push_back(static_cast<int>(x));
    std::vector<int> m;
    auto dfs = [&](auto&& self, std::size_t start, const Rational& rest) -> void {
      if (rest == Rational(0)) {
        if (detail::signature_admissible(basket, q, m, theta, beta, I))
          out.push_back(detail::make_branch(basket, pg, q, K2, m, theta, beta));
        return;
      }
      for (std::size_t i = start; i < divisors.size(); ++i) {
        Rational t = Rational(divisors[i] - 1, divisors[i]);
        if (t > rest) break;
        m.push_back(divisors[i]);
        self(self, i, rest - t);
        m.pop_back();
      }
    };
    dfs(dfs, 0, S);
  }
  std::sort(out.begin(), out.end(), [](const SearchBranch& a, const SearchBranch& b) {
    if (a.signature.m.size() != b.signature.m.size()) return a.signature.m.size() < b.signature.m.size();
    return a.signature < b.signature;
  });
  return out;
}

}  // namespace mqe
