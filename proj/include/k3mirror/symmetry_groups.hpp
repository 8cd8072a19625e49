#pragma once

// Finite groups of diagonal symmetries, written additively in (Q/Z)^m.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "invertible_poly.hpp"
#include "linalg.hpp"

namespace k3m {

// A value in Q/Z kept as num/den with 0 <= num < den, gcd(num, den) = 1.
class RationalResidue {
 public:
  RationalResidue() = default;
  RationalResidue(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw ParseError("residue denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }
  static RationalResidue from_rational(const Rational& q) {
    Integer n = mod_floor(numerator(q), denominator(q));
    return RationalResidue(to_i64(n), to_i64(denominator(q)));
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  Rational to_rational() const { return Rational(num_, den_); }
  bool is_zero() const { return num_ == 0; }

  friend RationalResidue operator+(const RationalResidue& a, const RationalResidue& b) {
    std::int64_t l = std::lcm(a.den_, b.den_);
    return RationalResidue(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
  }
  RationalResidue operator-() const { return RationalResidue(-num_, den_); }
  friend RationalResidue operator*(std::int64_t k, const RationalResidue& a) {
    return RationalResidue((k % a.den_) * a.num_, a.den_);
  }
  friend auto operator<=>(const RationalResidue&, const RationalResidue&) = default;
  friend bool operator==(const RationalResidue&, const RationalResidue&) = default;

  std::string to_string() const {
    if (num_ == 0) return "0";
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_ = 0, den_ = 1;
};

class DiagonalSymmetry {
 public:
  DiagonalSymmetry() = default;
  explicit DiagonalSymmetry(std::vector<RationalResidue> entries) : entries_(std::move(entries)) {}
  static DiagonalSymmetry zero(std::size_t m) { return DiagonalSymmetry(std::vector<RationalResidue>(m)); }

  std::size_t size() const { return entries_.size(); }
  const RationalResidue& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<RationalResidue>& entries() const { return entries_; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& r) { return r.is_zero(); });
  }
  std::int64_t order() const {
    std::int64_t o = 1;
    for (const auto& r : entries_) o = std::lcm(o, r.den());
    return o;
  }
  RationalResidue coordinate_sum() const {
    RationalResidue s;
    for (const auto& r : entries_) s = s + r;
    return s;
  }

  friend DiagonalSymmetry operator+(const DiagonalSymmetry& a, const DiagonalSymmetry& b) {
    if (a.size() != b.size()) throw ElementNotInAmbient("dimension mismatch");
    std::vector<RationalResidue> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
    return DiagonalSymmetry(std::move(e));
  }
  DiagonalSymmetry operator-() const {
    std::vector<RationalResidue> e;
    for (const auto& r : entries_) e.push_back(-r);
    return DiagonalSymmetry(std::move(e));
  }
  friend DiagonalSymmetry operator*(std::int64_t k, const DiagonalSymmetry& a) {
    std::vector<RationalResidue> e;
    for (const auto& r : a.entries_) e.push_back(k * r);
    return DiagonalSymmetry(std::move(e));
  }
  friend auto operator<=>(const DiagonalSymmetry&, const DiagonalSymmetry&) = default;
  friend bool operator==(const DiagonalSymmetry&, const DiagonalSymmetry&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) s += (i ? "," : "") + entries_[i].to_string();
    return s + ")";
  }

 private:
  std::vector<RationalResidue> entries_;
};

// Accepts "(1/4,3/4,0,0)" or "1/4,3/4,0,0"; entries may be integers.
inline DiagonalSymmetry parse_symmetry(std::string_view text) {
  std::vector<RationalResidue> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) throw ParseError("empty entry in symmetry '" + std::string(text) + "'");
    auto slash = cur.find('/');
    try {
      std::int64_t n = std::stoll(cur.substr(0, slash));
      std::int64_t d = slash == std::string::npos ? 1 : std::stoll(cur.substr(slash + 1));
      out.emplace_back(n, d);
    } catch (const std::logic_error&) {
      throw ParseError("bad entry '" + cur + "'");
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == '(' || c == ')' || c == ' ' || c == '[' || c == ']') continue;
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  return DiagonalSymmetry(std::move(out));
}

inline constexpr std::size_t kDefaultGroupCap = 1'000'000;

class SymmetryGroup {
 public:
  SymmetryGroup() = default;

  // Closure of the generators; elements are kept sorted.
  static SymmetryGroup generated_by(std::size_t ambient, std::vector<DiagonalSymmetry> generators,
                                    std::size_t cap = kDefaultGroupCap) {
    SymmetryGroup g;
    g.ambient_ = ambient;
    std::set<DiagonalSymmetry> elems{DiagonalSymmetry::zero(ambient)};
    for (const auto& gen : generators) {
      if (gen.size() != ambient) throw ElementNotInAmbient("generator " + gen.to_string());
      if (elems.count(gen)) continue;
      std::vector<DiagonalSymmetry> base(elems.begin(), elems.end());
      DiagonalSymmetry step = gen;
      while (!elems.count(step)) {
        for (const auto& b : base) {
          elems.insert(b + step);
          if (elems.size() > cap) throw GroupTooLarge("more than " + std::to_string(cap) + " elements");
        }
        step = step + gen;
      }
      g.generators_.push_back(gen);
    }
    g.elements_.assign(elems.begin(), elems.end());
    return g;
  }

  // Subgroup from a closed element set; generators picked greedily.
  static SymmetryGroup from_elements(std::size_t ambient, const std::vector<DiagonalSymmetry>& elements) {
    std::vector<DiagonalSymmetry> sorted = elements;
    std::sort(sorted.begin(), sorted.end());
    // Prefer high-order elements so generator lists stay short.
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return a.order() > b.order();
    });
    SymmetryGroup g = generated_by(ambient, {});
    for (const auto& e : sorted) {
      if (g.contains(e)) continue;
      auto gens = g.generators_;
      gens.push_back(e);
      g = generated_by(ambient, std::move(gens));
    }
    if (g.order() != elements.size()) throw NotASubgroup("element set is not closed");
    return g;
  }

  std::size_t ambient_size() const { return ambient_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<DiagonalSymmetry>& elements() const { return elements_; }
  const std::vector<DiagonalSymmetry>& generators() const { return generators_; }

  bool contains(const DiagonalSymmetry& g) const {
    return std::binary_search(elements_.begin(), elements_.end(), g);
  }
  bool is_subgroup_of(const SymmetryGroup& other) const {
    return ambient_ == other.ambient_ &&
           std::all_of(generators_.begin(), generators_.end(),
                       [&](const auto& g) { return other.contains(g); });
  }

  friend bool operator==(const SymmetryGroup& a, const SymmetryGroup& b) {
    return a.ambient_ == b.ambient_ && a.elements_ == b.elements_;
  }

  std::string generators_string() const {
    if (generators_.empty()) return "<>";
    std::string s = "<";
    for (std::size_t i = 0; i < generators_.size(); ++i) s += (i ? ", " : "") + generators_[i].to_string();
    return s + ">";
  }

 private:
  std::size_t ambient_ = 0;
  std::vector<DiagonalSymmetry> generators_;
  std::vector<DiagonalSymmetry> elements_;
};

inline bool groups_equal(const SymmetryGroup& a, const SymmetryGroup& b) { return a == b; }

// Columns of A^{-1}, reduced mod 1.
inline SymmetryGroup max_group(const ExponentMatrix& a, std::size_t cap = kDefaultGroupCap) {
  auto inv = inverse(a.to_int_matrix());
  if (!inv) throw NotInvertible("exponent matrix is singular");
  const std::size_t m = a.size();
  std::vector<DiagonalSymmetry> gens;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<RationalResidue> e;
    for (std::size_t i = 0; i < m; ++i) e.push_back(RationalResidue::from_rational((*inv)(i, j)));
    gens.emplace_back(std::move(e));
  }
  return SymmetryGroup::generated_by(m, std::move(gens), cap);
}

inline SymmetryGroup max_group(const InvertiblePolynomial& w) { return max_group(w.exponent_matrix()); }

inline SymmetryGroup sl_subgroup(const SymmetryGroup& g) {
  std::vector<DiagonalSymmetry> keep;
  for (const auto& e : g.elements())
    if (e.coordinate_sum().is_zero()) keep.push_back(e);
  return SymmetryGroup::from_elements(g.ambient_size(), keep);
}

inline DiagonalSymmetry exponential_grading(const WeightSystem& ws) {
  std::vector<RationalResidue> e;
  for (auto q : ws.weights) e.emplace_back(q, ws.degree);
  return DiagonalSymmetry(std::move(e));
}

inline SymmetryGroup j_subgroup(const WeightSystem& ws) {
  return SymmetryGroup::generated_by(ws.weights.size(), {exponential_grading(ws)});
}

inline SymmetryGroup j_subgroup(const InvertiblePolynomial& w) { return j_subgroup(weight_system(w)); }
inline SymmetryGroup sl_subgroup(const InvertiblePolynomial& w) { return sl_subgroup(max_group(w)); }

// True when A g^T is integral, i.e. g preserves every monomial.
inline bool preserves_polynomial(const ExponentMatrix& a, const DiagonalSymmetry& g) {
  const std::size_t m = a.size();
  for (std::size_t i = 0; i < m; ++i) {
    RationalResidue s;
    for (std::size_t j = 0; j < m; ++j) s = s + static_cast<std::int64_t>(a(i, j)) * g[j];
    if (!s.is_zero()) return false;
  }
  return true;
}

// G^T = { g in G^max_{W^T} : g A h^T in Z for all h in G }.
inline SymmetryGroup dual_group(const SymmetryGroup& g, const ExponentMatrix& a) {
  const std::size_t m = a.size();
  if (g.ambient_size() != m) throw ElementNotInAmbient("group and matrix dimensions differ");
  for (const auto& h : g.generators())
    if (!preserves_polynomial(a, h)) throw GroupNotInMax(h.to_string());
  // A h^T for each generator, as exact rationals.
  std::vector<std::vector<Rational>> ah;
  for (const auto& h : g.generators()) {
    std::vector<Rational> v(m, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) v[i] += Rational(a(i, j)) * h[j].to_rational();
    ah.push_back(std::move(v));
  }
  const SymmetryGroup big = max_group(a.transpose());
  std::vector<DiagonalSymmetry> keep;
  for (const auto& x : big.elements()) {
    bool ok = true;
    for (const auto& v : ah) {
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i) s += x[i].to_rational() * v[i];
      if (denominator(s) != 1) {
        ok = false;
        break;
      }
    }
    if (ok) keep.push_back(x);
  }
  return SymmetryGroup::from_elements(m, keep);
}

inline SymmetryGroup dual_group(const SymmetryGroup& g, const InvertiblePolynomial& w) {
  return dual_group(g, w.exponent_matrix());
}

// Invariant factors of G/N from the Smith form of the relation lattice
// { v in Z^k : sum v_i g_i in N } for the generators g_i of G.
inline std::vector<std::int64_t> quotient_invariants(const SymmetryGroup& g, const SymmetryGroup& n) {
  if (g.ambient_size() != n.ambient_size()) throw ElementNotInAmbient("dimension mismatch");
  for (const auto& h : n.generators())
    if (!g.contains(h)) throw NotASubgroup(h.to_string() + " not in the larger group");
  const auto& gg = g.generators();
  const auto& ng = n.generators();
  const std::size_t m = g.ambient_size(), k = gg.size(), l = ng.size();
  if (k == 0) return {};
  std::int64_t d = 1;
  for (const auto& x : gg) d = std::lcm(d, x.order());
  auto scaled = [&](const DiagonalSymmetry& x, std::size_t i) {
    return Integer(x[i].num() * (d / x[i].den()));
  };
  // Columns: generators of G, generators of N (negated), d * e_i (negated).
  IntMatrix rel(m, k + l + m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) rel(i, j) = scaled(gg[j], i);
    for (std::size_t j = 0; j < l; ++j) rel(i, k + j) = -scaled(ng[j], i);
    rel(i, k + l + i) = -d;
  }
  IntMatrix ker = integer_kernel(rel);
  IntMatrix proj(ker.rows(), k);
  for (std::size_t r = 0; r < ker.rows(); ++r)
    for (std::size_t j = 0; j < k; ++j) proj(r, j) = ker(r, j);
  SmithForm s = smith_form(proj);
  std::vector<std::int64_t> out;
  for (const auto& x : s.divisors)
    if (x > 1) out.push_back(to_i64(x));
  return out;
}

// All H with lower <= H <= upper, built as joins of lower with cyclic
// subgroups of the quotient; sorted by order then elements.
inline std::vector<SymmetryGroup> enumerate_intermediate(const SymmetryGroup& lower,
                                                         const SymmetryGroup& upper) {
  if (!lower.is_subgroup_of(upper)) throw NotASubgroup("lower group not contained in upper group");
  std::set<std::vector<DiagonalSymmetry>> seen{lower.elements()};
  std::vector<SymmetryGroup> out{lower};
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const SymmetryGroup cur = out[idx];
    for (const auto& x : upper.elements()) {
      if (cur.contains(x)) continue;
      auto gens = cur.generators();
      gens.push_back(x);
      SymmetryGroup next = SymmetryGroup::generated_by(upper.ambient_size(), gens);
      if (seen.insert(next.elements()).second) out.push_back(std::move(next));
    }
  }
  std::sort(out.begin(), out.end(), [](const SymmetryGroup& a, const SymmetryGroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return out;
}

// perm[i] is the new position of coordinate i.
inline SymmetryGroup permute_coordinates(const SymmetryGroup& g, const std::vector<std::size_t>& perm) {
  const std::size_t m = g.ambient_size();
  if (perm.size() != m) throw ElementNotInAmbient("permutation size mismatch");
  std::vector<DiagonalSymmetry> gens;
  for (const auto& x : g.generators()) {
    std::vector<RationalResidue> e(m);
    for (std::size_t i = 0; i < m; ++i) e[perm[i]] = x[i];
    gens.emplace_back(std::move(e));
  }
  return SymmetryGroup::generated_by(m, std::move(gens));
}

inline std::string invariants_to_string(const std::vector<std::int64_t>& inv) {
  if (inv.empty()) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < inv.size(); ++i) s += (i ? " x " : "") + ("Z/" + std::to_string(inv[i]));
  return s;
}

}  // namespace k3m
