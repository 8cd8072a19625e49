#pragma once

// Even lattices given by Gram matrices: named lattices, signatures,
// discriminant forms, saturation and overlattices.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "quadform.hpp"

namespace k3m {

class GramLattice {
 public:
  GramLattice() = default;
  explicit GramLattice(IntMatrix gram) : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols()) throw DegenerateGram("Gram matrix is not square");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (gram_(i, j) != gram_(j, i)) throw DegenerateGram("Gram matrix is not symmetric");
    if (k3m::determinant(gram_) == 0) throw DegenerateGram("Gram matrix is singular");
  }
  static GramLattice from_rows(const std::vector<std::vector<long>>& rows) {
    IntMatrix g(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw DegenerateGram("Gram matrix is not square");
      for (std::size_t j = 0; j < rows.size(); ++j) g(i, j) = rows[i][j];
    }
    return GramLattice(std::move(g));
  }

  std::size_t rank() const { return gram_.rows(); }
  const IntMatrix& gram() const { return gram_; }
  Integer determinant() const { return k3m::determinant(gram_); }
  bool is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (gram_(i, i) % 2 != 0) return false;
    return true;
  }

 private:
  IntMatrix gram_;
};

struct Signature {
  int positive = 0, negative = 0;
  int rank() const { return positive + negative; }
  friend bool operator==(const Signature&, const Signature&) = default;
  std::string to_string() const {
    return "(" + std::to_string(positive) + "," + std::to_string(negative) + ")";
  }
};

namespace detail {

inline IntMatrix dynkin_gram(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = -2;
  for (auto [a, b] : edges) g(a, b) = g(b, a) = 1;
  return g;
}

// Central node 0, then legs with p-1, q-1, r-1 further nodes.
inline IntMatrix t_gram(int p, int q, int r) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t next = 1;
  for (int leg : {p, q, r}) {
    std::size_t prev = 0;
    for (int i = 1; i < leg; ++i) {
      edges.emplace_back(prev, next);
      prev = next++;
    }
  }
  return dynkin_gram(next, edges);
}

inline std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  std::string cur;
  for (char c : s) {
    if (c == '{' || c == '}' || c == '_') continue;
    if (c == ',') {
      if (cur.empty()) throw ParseError("bad parameter list");
      out.push_back(std::stoi(cur));
      cur.clear();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      cur += c;
    } else {
      throw ParseError(std::string("bad character in parameters: ") + c);
    }
  }
  if (cur.empty()) throw ParseError("missing parameter");
  out.push_back(std::stoi(cur));
  return out;
}

}  // namespace detail

// U, A_l, D_m, E_6..E_8, T_{p,q,r} and <n>; subscripts may be braced or bare
// ("A3"). ADE lattices are negative definite.
inline GramLattice named_lattice(std::string_view name_in) {
  std::string name;
  for (char c : name_in)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '$') name += c;
  if (name.empty()) throw UnknownName("empty lattice name");
  if (name == "U") return GramLattice(IntMatrix{{0, 1}, {1, 0}});
  auto angle = [&](const std::string& open, const std::string& close) -> std::optional<std::string> {
    if (name.rfind(open, 0) == 0 && name.size() > open.size() + close.size() &&
        name.compare(name.size() - close.size(), close.size(), close) == 0)
      return name.substr(open.size(), name.size() - open.size() - close.size());
    return std::nullopt;
  };
  for (auto [open, close] : {std::pair<std::string, std::string>{"<", ">"},
                             {"\xE2\x9F\xA8", "\xE2\x9F\xA9"},  // U+27E8, U+27E9
                             {"\\langle", "\\rangle"}}) {
    if (auto inner = angle(open, close)) {
      auto v = detail::parse_int_list(*inner);
      if (v.size() != 1 || v[0] == 0) throw BadParameters("<n> needs a nonzero integer");
      return GramLattice(IntMatrix{{Integer(v[0])}});
    }
  }
  const char kind = name[0];
  if (std::string("ADET").find(kind) == std::string::npos) throw UnknownName(std::string(name_in));
  std::vector<int> params;
  try {
    params = detail::parse_int_list(std::string_view(name).substr(1));
  } catch (const ParseError&) {
    throw UnknownName(std::string(name_in));
  }
  if (kind == 'T') {
    if (params.size() != 3) throw BadParameters("T_{p,q,r} needs three parameters");
    for (int x : params)
      if (x < 2) throw BadParameters("T_{p,q,r} needs p,q,r >= 2");
    return GramLattice(detail::t_gram(params[0], params[1], params[2]));
  }
  if (params.size() != 1) throw BadParameters(std::string(name_in));
  const int n = params[0];
  if (kind == 'A') {
    if (n < 1) throw BadParameters("A_l needs l >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return GramLattice(detail::dynkin_gram(n, e));
  }
  if (kind == 'D') {
    if (n < 4) throw BadParameters("D_m needs m >= 4");
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (int i = 0; i + 2 < n; ++i) e.emplace_back(i, i + 1);
    e.emplace_back(n - 3, n - 1);
    return GramLattice(detail::dynkin_gram(n, e));
  }
  if (n < 6 || n > 8) throw BadParameters("E_n needs 6 <= n <= 8");
  return GramLattice(detail::t_gram(2, 3, n - 3));
}

inline GramLattice rescale(const GramLattice& l, const Integer& n) {
  if (n == 0) throw BadParameters("rescale by zero");
  IntMatrix g = l.gram();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= n;
  return GramLattice(std::move(g));
}

inline GramLattice direct_sum(const GramLattice& a, const GramLattice& b) {
  if (a.rank() == 0) return b;
  if (b.rank() == 0) return a;
  return GramLattice(block_diagonal(a.gram(), b.gram()));
}

// Congruence diagonalization over Q.
inline Signature signature(const IntMatrix& gram) {
  RatMatrix m = to_rational(gram);
  const std::size_t n = m.rows();
  Signature s;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, p) == 0) ++p;
      if (p < n) {
        m.swap_rows(k, p);
        m.swap_cols(k, p);
      } else {
        std::size_t q = k + 1;
        while (q < n && m(k, q) == 0) ++q;
        if (q == n) continue;  // null direction
        m.add_row(k, q, Rational(1));
        m.add_col(k, q, Rational(1));
      }
    }
    const Rational pivot = m(k, k);
    if (pivot == 0) continue;
    (pivot > 0 ? s.positive : s.negative) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / pivot;
      m.add_row(i, k, Rational(-f));
      m.add_col(i, k, Rational(-f));
    }
  }
  return s;
}

inline Signature signature(const GramLattice& l) { return signature(l.gram()); }

struct DiscriminantGroup {
  FiniteAbelianGroup group;
  std::vector<std::vector<Rational>> lifts;  // generators of L^*/L in L-coordinates
};

// With S G T = D, the columns of T divided by the diagonal give L^*/L.
inline DiscriminantGroup discriminant_group(const GramLattice& l) {
  SmithForm s = smith_form(l.gram());
  DiscriminantGroup d;
  std::vector<std::int64_t> inv;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    const Integer di = abs_int(s.diag(i, i));
    if (di == 1) continue;
    inv.push_back(to_i64(di));
    std::vector<Rational> v(l.rank());
    for (std::size_t r = 0; r < l.rank(); ++r) v[r] = Rational(s.right(r, i), di);
    d.lifts.push_back(std::move(v));
  }
  d.group = FiniteAbelianGroup(inv);
  return d;
}

inline Rational bilinear(const IntMatrix& g, const std::vector<Rational>& x, const std::vector<Rational>& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0 && g(i, j) != 0) s += x[i] * Rational(g(i, j)) * y[j];
  }
  return s;
}

inline Fraction to_fraction(const Rational& r) {
  return Fraction(to_i64(numerator(r)), to_i64(denominator(r)));
}

inline FiniteQuadraticForm discriminant_form(const GramLattice& l) {
  if (!l.is_even()) throw OddLattice("discriminant quadratic form needs an even lattice");
  const DiscriminantGroup d = discriminant_group(l);
  const std::size_t r = d.lifts.size();
  if (r == 0) return trivial_form();
  std::vector<Fraction> q(r);
  std::vector<std::vector<Fraction>> b(r, std::vector<Fraction>(r));
  for (std::size_t i = 0; i < r; ++i) {
    q[i] = reduce_mod(to_fraction(bilinear(l.gram(), d.lifts[i], d.lifts[i])), 2);
    for (std::size_t j = 0; j < r; ++j)
      b[i][j] = reduce_mod(to_fraction(bilinear(l.gram(), d.lifts[i], d.lifts[j])), 1);
  }
  return FiniteQuadraticForm(d.group.invariants(), q, b);
}

// A sublattice of an ambient lattice, given by integer coordinate rows.
struct AmbientSublattice {
  GramLattice ambient;
  IntMatrix basis;  // rows, in ambient coordinates
};

// Q-span intersected with the ambient lattice: with S B T = D the first
// rank rows of T^{-1} span it.
inline AmbientSublattice saturation(const AmbientSublattice& s) {
  SmithForm f = smith_form(s.basis);
  const std::size_t r = f.divisors.size();
  auto tinv = inverse(f.right);
  IntMatrix b(r, s.basis.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < s.basis.cols(); ++j) b(i, j) = numerator((*tinv)(i, j));
  return AmbientSublattice{s.ambient, std::move(b)};
}

inline bool is_primitive(const AmbientSublattice& s) {
  SmithForm f = smith_form(s.basis);
  for (const auto& d : f.divisors)
    if (d != 1) return false;
  return true;
}

inline bool contains_sublattice(const AmbientSublattice& outer, const IntMatrix& rows) {
  HermiteForm h = hermite_form(outer.basis);
  IntMatrix ob = h.basis();
  for (std::size_t i = 0; i < rows.rows(); ++i)
    if (!integer_coordinates(ob, rows.row(i))) return false;
  return true;
}

// inner <= outer <= ambient. If inner and outer are primitive in the ambient
// then so is inner in outer; primitivity of inner in outer together with
// primitivity of outer gives primitivity of inner in the ambient.
struct ChainPrimitivity {
  bool inner_in_ambient = false;
  bool outer_in_ambient = false;
  bool inner_in_outer = false;
};

inline ChainPrimitivity chain_primitivity_detail(const AmbientSublattice& inner, const AmbientSublattice& outer) {
  if (inner.ambient.gram() != outer.ambient.gram()) throw NotASublattice("different ambient lattices");
  if (!contains_sublattice(outer, inner.basis)) throw NotASublattice("inner lattice is not contained in outer");
  ChainPrimitivity c;
  c.inner_in_ambient = is_primitive(inner);
  c.outer_in_ambient = is_primitive(outer);
  // inner in outer: coordinates of inner in a basis of outer.
  IntMatrix ob = hermite_form(outer.basis).basis();
  IntMatrix coords(inner.basis.rows(), ob.rows());
  for (std::size_t i = 0; i < inner.basis.rows(); ++i) {
    auto x = integer_coordinates(ob, inner.basis.row(i));
    for (std::size_t j = 0; j < ob.rows(); ++j) coords(i, j) = (*x)[j];
  }
  SmithForm f = smith_form(coords);
  c.inner_in_outer = std::all_of(f.divisors.begin(), f.divisors.end(), [](const Integer& d) { return d == 1; });
  return c;
}

// Primitivity of inner in outer, cross-checked against both halves of the
// chain lemma.
inline bool chain_primitivity(const AmbientSublattice& inner, const AmbientSublattice& outer) {
  const ChainPrimitivity c = chain_primitivity_detail(inner, outer);
  if (c.inner_in_ambient && !c.inner_in_outer) throw std::logic_error("chain lemma violated (part 2)");
  if (c.inner_in_outer && c.outer_in_ambient && !c.inner_in_ambient)
    throw std::logic_error("chain lemma violated (part 1)");
  return c.inner_in_outer;
}

struct Overlattice {
  GramLattice lattice;
  RatMatrix basis;  // rows, in coordinates of the original lattice
  std::size_t index = 1;
};

// One even overlattice per isotropic subgroup of the discriminant form.
inline std::vector<Overlattice> overlattices(const GramLattice& l) {
  const FiniteQuadraticForm form = discriminant_form(l);
  const DiscriminantGroup dg = discriminant_group(l);
  const std::size_t n = l.rank();
  std::vector<Overlattice> out;
  if (form.num_generators() == 0) {
    out.push_back(Overlattice{l, to_rational(IntMatrix::identity(n)), 1});
    return out;
  }
  for (const auto& h : isotropic_subgroups(form)) {
    std::vector<std::vector<Rational>> vecs;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> e(n, 0);
      e[i] = 1;
      vecs.push_back(std::move(e));
    }
    for (const auto& g : h.generators) {
      std::vector<Rational> v(n, 0);
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) v[j] += Rational(g[i]) * dg.lifts[i][j];
      vecs.push_back(std::move(v));
    }
    Integer den = 1;
    for (const auto& v : vecs)
      for (const auto& x : v) den = lcm_int(den, denominator(x));
    IntMatrix scaled(vecs.size(), n);
    for (std::size_t i = 0; i < vecs.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) scaled(i, j) = numerator(Rational(vecs[i][j] * den));
    IntMatrix hb = hermite_form(scaled).basis();
    RatMatrix basis(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) basis(i, j) = Rational(hb(i, j), den);
    IntMatrix g(n, n);
    bool integral = true;
    for (std::size_t i = 0; i < n && integral; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational v = bilinear(l.gram(), basis.row(i), basis.row(j));
        if (denominator(v) != 1) {
          integral = false;
          break;
        }
        g(i, j) = numerator(v);
      }
    if (!integral) continue;
    GramLattice m(std::move(g));
    if (!m.is_even()) continue;
    out.push_back(Overlattice{std::move(m), std::move(basis), h.order()});
  }
  return out;
}

// Ranks add to 20 and q_M is isometric to -q_N.
inline bool mirror_check(std::size_t rank_m, const FiniteQuadraticForm& q_m, std::size_t rank_n,
                         const FiniteQuadraticForm& q_n) {
  return rank_m + rank_n == 20 && is_isomorphic(q_m, negate(q_n));
}

// Sufficient condition for an even lattice with this signature and form to
// be unique in its genus: indefinite, signature congruence, and
// rank >= 2 + l(A).
inline bool nikulin_unique(const Signature& sig, const FiniteQuadraticForm& q) {
  if (sig.positive < 1 || sig.negative < 1) return false;
  const int diff = ((sig.positive - sig.negative) % 8 + 8) % 8;
  if (diff != gauss_signature(q)) return false;
  return static_cast<std::size_t>(sig.rank()) >= 2 + q.group().length();
}

namespace detail {

class LatticeParser {
 public:
  explicit LatticeParser(std::string_view text) : src_(text) {
    std::string s(text);
    for (std::size_t p = s.find("\\oplus"); p != std::string::npos; p = s.find("\\oplus")) s.replace(p, 6, "+");
    for (std::size_t p = s.find("\xE2\x8A\x95"); p != std::string::npos; p = s.find("\xE2\x8A\x95")) s.replace(p, 3, "+");
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c)) && c != '$') s_ += c;
  }
  GramLattice parse() {
    GramLattice l = expr();
    if (pos_ != s_.size()) throw ParseError("trailing input in '" + std::string(src_) + "'");
    return l;
  }

 private:
  GramLattice expr() {
    GramLattice l = term();
    while (pos_ < s_.size() && s_[pos_] == '+') {
      ++pos_;
      l = direct_sum(l, term());
    }
    return l;
  }
  GramLattice term() {
    GramLattice base;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      base = expr();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError("expected ')'");
      ++pos_;
    } else {
      // A name runs until '+', '(' of a rescale, '^' or ')'.
      std::size_t start = pos_;
      int depth = 0;
      while (pos_ < s_.size()) {
        char c = s_[pos_];
        if (c == '{' || c == '<') ++depth;
        if (c == '}' || c == '>') --depth;
        if (depth == 0 && (c == '+' || c == '(' || c == '^' || c == ')')) break;
        ++pos_;
      }
      base = named_lattice(s_.substr(start, pos_ - start));
    }
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
      if (pos_ >= s_.size()) throw ParseError("expected ')' after rescale");
      auto v = parse_int_list(s_.substr(start, pos_ - start));
      ++pos_;
      if (v.size() != 1) throw BadParameters("rescale needs one integer");
      base = rescale(base, v[0]);
    }
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      std::size_t start = pos_;
      if (pos_ < s_.size() && s_[pos_] == '{') ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '}') ++pos_;
      int times = parse_int_list(s_.substr(start, pos_ - start))[0];
      GramLattice acc;
      for (int i = 0; i < times; ++i) acc = direct_sum(acc, base);
      base = acc;
    }
    return base;
  }

  std::string_view src_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// "U+D_5+D_9", "U(2)+E_8^2", "<4>+A_3"; '\oplus' is accepted for '+'.
inline GramLattice parse_lattice_expression(std::string_view text) {
  return detail::LatticeParser(text).parse();
}

}  // namespace k3m
