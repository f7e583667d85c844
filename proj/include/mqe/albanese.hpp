#pragma once

#include <cstdint>
#include <vector>

#include "mqe/error.hpp"
#include "mqe/group.hpp"
#include "mqe/rational.hpp"
#include "mqe/surface.hpp"

namespace mqe {

// Pairs (x, y) of G0 x G0 are coded as x * |G0| + y.
struct AlbaneseData {
  std::vector<std::uint32_t> image;  // sorted codes
  std::size_t M = 0;
  std::int64_t deg_psi = 0;
  int g_alb = 0;
};

// Subgroup of G0 x G0 generated by (a, a^-1), (b, b^-1), (h_i, 1), (1, h_i)
// for the vector (a, b; h_1..h_r).
inline std::vector<std::uint32_t> monodromy_image(const MixedData& d) {
  if (d.signature.q != 1 || d.vector.genus.size() != 2)
    fail(ErrorCode::WrongIrregularity, "the Albanese computation needs q = 1");
  const FiniteGroup& G = *d.g0;
  const auto n = static_cast<std::uint32_t>(G.order());
  std::vector<std::pair<Elem, Elem>> gens;
  for (Elem x : d.vector.genus) gens.emplace_back(x, G.inv(x));
  for (Elem h : d.vector.tail) {
    gens.emplace_back(h, 0);
    gens.emplace_back(0, h);
  }
  std::vector<char> in(std::size_t(n) * n, 0);
  std::vector<std::uint32_t> list{0};
  in[0] = 1;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Elem x = list[k] / n, y = list[k] % n;
    for (const auto& [s, t] : gens) {
      std::uint32_t c = G.mul(x, s) * n + G.mul(y, t);
      if (!in[c]) {
        in[c] = 1;
        list.push_back(c);
      }
    }
  }
  std::sort(list.begin(), list.end());
  return list;
}

// Size of the union of the translates g . Im over g in G, where
// g (x, y) = (g x, phi(g) y) and tau' g (x, y) = (phi(g) y, tau g x).
inline std::size_t twisted_union_size(const MixedData& d, const std::vector<std::uint32_t>& image) {
  const FiniteGroup& G = *d.g0;
  const auto n = static_cast<std::uint32_t>(G.order());
  std::vector<char> hit(std::size_t(n) * n, 0);
  std::size_t M = 0;
  auto mark = [&](std::uint32_t c) {
    if (!hit[c]) {
      hit[c] = 1;
      ++M;
    }
  };
  for (Elem g = 0; g < n; ++g) {
    const Elem pg = d.phi(g), tg = G.mul(d.tau, g);
    for (std::uint32_t c : image) {
      const Elem x = c / n, y = c % n;
      mark(G.mul(g, x) * n + G.mul(pg, y));
      mark(G.mul(pg, y) * n + G.mul(tg, x));
    }
  }
  return M;
}

inline AlbaneseData albanese_genus(const MixedData& d) {
  AlbaneseData a;
  a.image = monodromy_image(d);
  a.M = twisted_union_size(d, a.image);
  const auto n2 = static_cast<std::int64_t>(d.g0->order() * d.g0->order());
  const auto M = static_cast<std::int64_t>(a.M);
  if (n2 % M != 0) fail(ErrorCode::IntegralityViolation, "|G0|^2 / M is not an integer");
  a.deg_psi = n2 / M;
  Rational g = Rational(1) + Rational(d.genus - 1) * Rational(M, n2);
  if (!g.is_integer()) fail(ErrorCode::IntegralityViolation, "g_alb = " + g.str());
  a.g_alb = static_cast<int>(g.num());
  return a;
}

}  // namespace mqe
