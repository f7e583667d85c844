#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>

#include "mqe/rational.hpp"
#include "mqe/singularities.hpp"

namespace mqe {

// Multiset of singularity classes of X.
class Basket {
 public:
  Basket() = default;

  // C keys are stored with the canonical residue min(a, a').
  void add(SingularityKey k, int multiplicity = 1) {
    if (multiplicity <= 0) return;
    if (k.flavor == Flavor::C) k.a = std::min(k.a, dual_residue(k.n, k.a));
    classes_[k] += multiplicity;
  }

  const std::map<SingularityKey, int>& classes() const { return classes_; }
  bool empty() const { return classes_.empty(); }

  int size() const {
    int s = 0;
    for (const auto& [k, m] : classes_) s += m;
    return s;
  }
  int count(Flavor f) const {
    int s = 0;
    for (const auto& [k, m] : classes_)
      if (k.flavor == f) s += m;
    return s;
  }
  int d() const { return count(Flavor::D); }

  Rational k() const { return sum([](const SingularityClass& c) { return c.k; }); }
  Rational e() const { return sum([](const SingularityClass& c) { return c.e; }); }
  Rational B() const { return sum([](const SingularityClass& c) { return c.B; }); }

  // lcm of the indices of the cyclic points of Y lying over the basket
  int index() const {
    int I = 1;
    for (const auto& [k, m] : classes_) I = std::lcm(I, make_class(k).index);
    return I;
  }

  // sum over C of (a + a')/n plus sum over D of a/n; an integer for every
  // basket that actually occurs
  Rational integrality_sum() const {
    Rational s;
    for (const auto& [k, m] : classes_) {
      if (k.flavor == Flavor::C)
        s += Rational(m) * Rational(k.a + dual_residue(k.n, k.a), k.n);
      else
        s += Rational(m) * Rational(k.a, k.n);
    }
    return s;
  }

  // "2xC(2,1);2xD(2,1)", classes sorted by (flavor, n, a); "-" when empty.
  std::string str() const {
    if (classes_.empty()) return "-";
    std::string s;
    for (const auto& [k, m] : classes_) {
      if (!s.empty()) s += ";";
      s += std::to_string(m) + "x" + render(k);
    }
    return s;
  }

  friend bool operator==(const Basket&, const Basket&) = default;
  friend bool operator<(const Basket& a, const Basket& b) { return a.classes_ < b.classes_; }

 private:
  template <class F>
  Rational sum(F f) const {
    Rational s;
    for (const auto& [k, m] : classes_) s += Rational(m) * f(make_class(k));
    return s;
  }

  std::map<SingularityKey, int> classes_;
};

// Parses the rendering produced by Basket::str().
inline Basket parse_basket(const std::string& text) {
  Basket b;
  if (text == "-" || text.empty()) return b;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    int m = 0, n = 0, a = 0;
    char f = 0;
    if (std::sscanf(item.c_str(), "%dx%c(%d,%d)", &m, &f, &n, &a) != 4 || (f != 'C' && f != 'D'))
      fail(ErrorCode::ParseError, "bad basket item '" + item + "'");
    b.add({f == 'C' ? Flavor::C : Flavor::D, n, a}, m);
    pos = end + 1;
  }
  return b;
}

}  // namespace mqe
