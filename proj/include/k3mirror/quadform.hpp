#pragma once

// Finite quadratic forms q : A -> Q/2Z on finite abelian groups, with the
// generator symbols w_{p,k}^e, u_k, v_k, Gauss-sum signatures and
// isomorphism testing.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "errors.hpp"
#include "linalg.hpp"

namespace k3m {

using Fraction = boost::rational<std::int64_t>;

inline std::string fraction_to_string(const Fraction& f) {
  if (f.denominator() == 1) return std::to_string(f.numerator());
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

// Reduce into [0, m) for m = 1 or 2.
inline Fraction reduce_mod(const Fraction& f, std::int64_t m) {
  const std::int64_t den = f.denominator();
  std::int64_t num = f.numerator() % (m * den);
  if (num < 0) num += m * den;
  return Fraction(num, den);
}

class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<std::int64_t> invariants) : inv_(std::move(invariants)) {}
  const std::vector<std::int64_t>& invariants() const { return inv_; }
  std::int64_t order() const {
    std::int64_t o = 1;
    for (auto n : inv_) o *= n;
    return o;
  }
  // Minimal number of generators.
  std::size_t length() const { return inv_.size(); }
  friend bool operator==(const FiniteAbelianGroup&, const FiniteAbelianGroup&) = default;
  std::string to_string() const {
    if (inv_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < inv_.size(); ++i) s += (i ? " x " : "") + ("Z/" + std::to_string(inv_[i]));
    return s;
  }

 private:
  std::vector<std::int64_t> inv_;
};

using GroupElement = std::vector<std::int64_t>;

// Values are kept over a common denominator N: q as an integer mod 2N, b as
// an integer mod N. b(e_i, e_i) is always q(e_i) mod N.
class FiniteQuadraticForm {
 public:
  FiniteQuadraticForm() = default;

  FiniteQuadraticForm(std::vector<std::int64_t> orders, const std::vector<Fraction>& q,
                      const std::vector<std::vector<Fraction>>& b)
      : orders_(std::move(orders)) {
    const std::size_t r = orders_.size();
    if (q.size() != r || b.size() != r) throw DegenerateForm("shape mismatch");
    for (auto n : orders_)
      if (n < 2) throw DegenerateForm("generator orders must be at least 2");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < r; ++i) {
      den = std::lcm(den, q[i].denominator());
      if (b[i].size() != r) throw DegenerateForm("shape mismatch");
      for (std::size_t j = 0; j < r; ++j) den = std::lcm(den, b[i][j].denominator());
    }
    den_ = den;
    q_.resize(r);
    b_.assign(r * r, 0);
    for (std::size_t i = 0; i < r; ++i) {
      Fraction qi = reduce_mod(q[i], 2);
      q_[i] = qi.numerator() * (den / qi.denominator());
      for (std::size_t j = 0; j < r; ++j) {
        if (i == j) continue;
        Fraction bij = reduce_mod(b[i][j], 1);
        b_[i * r + j] = bij.numerator() * (den / bij.denominator());
      }
      b_[i * r + i] = q_[i] % den_;
    }
    validate();
  }

  std::size_t num_generators() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::int64_t denominator() const { return den_; }
  std::int64_t order() const {
    std::int64_t o = 1;
    for (auto n : orders_) o *= n;
    return o;
  }

  Fraction q_gen(std::size_t i) const { return Fraction(q_[i], den_); }
  Fraction b_gen(std::size_t i, std::size_t j) const { return Fraction(b_[i * num_generators() + j], den_); }

  // Scaled values: q in [0, 2N), b in [0, N).
  std::int64_t q_scaled(const GroupElement& x) const {
    const std::size_t r = num_generators();
    const std::int64_t m2 = 2 * den_;
    std::int64_t s = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (x[i] == 0) continue;
      s = (s + (x[i] * x[i] % m2) * q_[i]) % m2;
      for (std::size_t j = i + 1; j < r; ++j)
        if (x[j] != 0) s = (s + 2 * ((x[i] * x[j]) % m2) * b_[i * r + j]) % m2;
    }
    return s;
  }
  std::int64_t b_scaled(const GroupElement& x, const GroupElement& y) const {
    const std::size_t r = num_generators();
    std::int64_t s = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < r; ++j)
        if (y[j] != 0) s = (s + ((x[i] * y[j]) % den_) * b_[i * r + j]) % den_;
    }
    return s;
  }
  Fraction q(const GroupElement& x) const { return Fraction(q_scaled(x), den_); }
  Fraction b(const GroupElement& x, const GroupElement& y) const { return Fraction(b_scaled(x, y), den_); }

  // Mixed-radix enumeration of A.
  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    GroupElement x(num_generators(), 0);
    while (true) {
      out.push_back(x);
      std::size_t i = 0;
      while (i < x.size() && ++x[i] == orders_[i]) x[i++] = 0;
      if (i == x.size()) break;
    }
    return out;
  }
  std::size_t index_of(const GroupElement& x) const {
    std::size_t idx = 0, mult = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      idx += static_cast<std::size_t>(x[i]) * mult;
      mult *= static_cast<std::size_t>(orders_[i]);
    }
    return idx;
  }
  GroupElement add(const GroupElement& x, const GroupElement& y) const {
    GroupElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] + y[i]) % orders_[i];
    return z;
  }
  GroupElement scale(std::int64_t k, const GroupElement& x) const {
    GroupElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = ((k % orders_[i]) * x[i] % orders_[i] + orders_[i]) % orders_[i];
    return z;
  }
  std::int64_t element_order(const GroupElement& x) const {
    std::int64_t o = 1;
    for (std::size_t i = 0; i < x.size(); ++i) o = std::lcm(o, orders_[i] / std::gcd(orders_[i], x[i]));
    return o;
  }

  bool is_nondegenerate() const {
    const std::size_t r = num_generators();
    for (const auto& x : elements()) {
      bool zero = std::all_of(x.begin(), x.end(), [](auto c) { return c == 0; });
      if (zero) continue;
      bool paired = false;
      for (std::size_t j = 0; j < r && !paired; ++j) {
        GroupElement e(r, 0);
        e[j] = 1;
        if (b_scaled(x, e) != 0) paired = true;
      }
      if (!paired) return false;
    }
    return true;
  }

  // Re-expressed on generators with invariant-factor orders n_1 | n_2 | ...
  FiniteQuadraticForm normalized() const {
    const std::size_t r = num_generators();
    bool chain = true;
    for (std::size_t i = 0; i + 1 < r; ++i)
      if (orders_[i + 1] % orders_[i] != 0) chain = false;
    if (chain) return *this;
    IntMatrix d(r, r);
    for (std::size_t i = 0; i < r; ++i) d(i, i) = orders_[i];
    SmithForm s = smith_form(d);
    auto linv = inverse(s.left);
    std::vector<GroupElement> gens;
    std::vector<std::int64_t> new_orders;
    for (std::size_t j = 0; j < r; ++j) {
      std::int64_t dj = to_i64(s.diag(j, j));
      if (dj == 1) continue;
      GroupElement g(r);
      for (std::size_t i = 0; i < r; ++i)
        g[i] = to_i64(mod_floor(numerator((*linv)(i, j)), Integer(orders_[i])));
      gens.push_back(std::move(g));
      new_orders.push_back(dj);
    }
    return on_generators(gens, new_orders);
  }

  // Form restricted to the subgroup generated by gens with the given orders
  // (the caller guarantees the orders and independence).
  FiniteQuadraticForm on_generators(const std::vector<GroupElement>& gens,
                                    const std::vector<std::int64_t>& orders) const {
    FiniteQuadraticForm f;
    f.orders_ = orders;
    f.den_ = den_;
    const std::size_t k = gens.size();
    f.q_.resize(k);
    f.b_.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      f.q_[i] = q_scaled(gens[i]);
      for (std::size_t j = 0; j < k; ++j) f.b_[i * k + j] = b_scaled(gens[i], gens[j]);
    }
    f.reduce_denominator();
    f.validate();
    return f;
  }

  FiniteAbelianGroup group() const { return FiniteAbelianGroup(normalized().orders_); }

  // q-value multiset as reduced fractions in [0, 2).
  std::map<Fraction, std::int64_t> value_histogram() const {
    std::map<Fraction, std::int64_t> h;
    for (const auto& x : elements()) ++h[Fraction(q_scaled(x), den_)];
    return h;
  }

  std::string to_string() const {
    if (orders_.empty()) return "trivial";
    std::ostringstream os;
    for (std::size_t i = 0; i < orders_.size(); ++i) os << (i ? " x " : "") << "Z/" << orders_[i];
    os << " q=[";
    for (std::size_t i = 0; i < orders_.size(); ++i) os << (i ? "," : "") << fraction_to_string(q_gen(i));
    os << "] b=[";
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < orders_.size(); ++j) os << (j ? "," : "") << fraction_to_string(b_gen(i, j));
      os << ']';
    }
    os << ']';
    return os.str();
  }

  friend FiniteQuadraticForm direct_sum(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b);
  friend FiniteQuadraticForm negate(const FiniteQuadraticForm& a);

 private:
  void validate() const {
    const std::size_t r = num_generators();
    for (std::size_t i = 0; i < r; ++i) {
      const std::int64_t n = orders_[i];
      // q(n e_i) = n^2 q(e_i) must vanish mod 2, n b(e_i, .) mod 1.
      if ((n % (2 * den_)) * (n % (2 * den_)) % (2 * den_) * q_[i] % (2 * den_) != 0)
        throw DegenerateForm("q is not well defined on generator " + std::to_string(i));
      for (std::size_t j = 0; j < r; ++j) {
        if ((n % den_) * b_[i * r + j] % den_ != 0)
          throw DegenerateForm("b is not well defined on generator " + std::to_string(i));
        if (b_[i * r + j] != b_[j * r + i]) throw DegenerateForm("b is not symmetric");
      }
      if (b_[i * r + i] != q_[i] % den_) throw DegenerateForm("b(e,e) differs from q(e) mod 1");
    }
  }

  void reduce_denominator() {
    std::int64_t g = den_;
    for (auto v : q_) g = std::gcd(g, v);
    for (auto v : b_) g = std::gcd(g, v);
    if (g <= 1) return;
    den_ /= g;
    for (auto& v : q_) v /= g;
    for (auto& v : b_) v /= g;
  }

  std::vector<std::int64_t> orders_;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> q_;
  std::vector<std::int64_t> b_;
};

inline FiniteQuadraticForm direct_sum(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b) {
  const std::size_t ra = a.num_generators(), rb = b.num_generators(), r = ra + rb;
  if (ra == 0) return b;
  if (rb == 0) return a;
  FiniteQuadraticForm s;
  s.den_ = std::lcm(a.den_, b.den_);
  const std::int64_t fa = s.den_ / a.den_, fb = s.den_ / b.den_;
  s.orders_ = a.orders_;
  s.orders_.insert(s.orders_.end(), b.orders_.begin(), b.orders_.end());
  s.q_.resize(r);
  s.b_.assign(r * r, 0);
  for (std::size_t i = 0; i < ra; ++i) {
    s.q_[i] = a.q_[i] * fa;
    for (std::size_t j = 0; j < ra; ++j) s.b_[i * r + j] = a.b_[i * ra + j] * fa;
  }
  for (std::size_t i = 0; i < rb; ++i) {
    s.q_[ra + i] = b.q_[i] * fb;
    for (std::size_t j = 0; j < rb; ++j) s.b_[(ra + i) * r + ra + j] = b.b_[i * rb + j] * fb;
  }
  s.validate();
  return s.normalized();
}

inline FiniteQuadraticForm negate(const FiniteQuadraticForm& a) {
  FiniteQuadraticForm n = a;
  for (auto& v : n.q_) v = (2 * n.den_ - v) % (2 * n.den_);
  for (auto& v : n.b_) v = (n.den_ - v) % n.den_;
  return n;
}

inline FiniteQuadraticForm trivial_form() { return FiniteQuadraticForm(); }

inline FiniteQuadraticForm direct_power(const FiniteQuadraticForm& a, int times) {
  FiniteQuadraticForm s;
  for (int i = 0; i < times; ++i) s = direct_sum(s, a);
  return s;
}

namespace detail {

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

inline int legendre(std::int64_t a, std::int64_t p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace detail

// w_{p,k}^eps on Z/p^k. For p = 2, q(1) = eps/2^k with eps in {1,-1,5,-5};
// for odd p, q(1) = a/p^k with a the smallest positive even integer whose
// Legendre symbol mod p is eps.
inline FiniteQuadraticForm w_form(std::int64_t p, int k, int eps) {
  if (!detail::is_prime(p)) throw InadmissibleSymbol("w_{" + std::to_string(p) + "," + std::to_string(k) + "}: p is not prime");
  if (k < 1) throw InadmissibleSymbol("w_{p,k} needs k >= 1");
  const std::int64_t n = detail::ipow(p, k);
  Fraction q;
  if (p == 2) {
    if (eps != 1 && eps != -1 && eps != 5 && eps != -5)
      throw InadmissibleSymbol("w_{2," + std::to_string(k) + "}^" + std::to_string(eps) + ": epsilon must be +-1 or +-5");
    q = Fraction(eps, n);
  } else {
    if (eps != 1 && eps != -1)
      throw InadmissibleSymbol("w_{" + std::to_string(p) + "," + std::to_string(k) + "}^" + std::to_string(eps) +
                               ": epsilon must be +-1");
    std::int64_t a = 2;
    while (detail::legendre(a, p) != eps) a += 2;
    q = Fraction(a, n);
  }
  return FiniteQuadraticForm({n}, {q}, {{reduce_mod(q, 1)}});
}

inline FiniteQuadraticForm u_form(int k = 1) {
  if (k < 1) throw InadmissibleSymbol("u_k needs k >= 1");
  const Fraction h(1, detail::ipow(2, k));
  const std::int64_t n = detail::ipow(2, k);
  return FiniteQuadraticForm({n, n}, {Fraction(0), Fraction(0)}, {{Fraction(0), h}, {h, Fraction(0)}});
}

inline FiniteQuadraticForm v_form(int k = 1) {
  if (k < 1) throw InadmissibleSymbol("v_k needs k >= 1");
  const std::int64_t n = detail::ipow(2, k);
  const Fraction h(1, n), d(2, n);
  return FiniteQuadraticForm({n, n}, {d, d}, {{reduce_mod(d, 1), h}, {h, reduce_mod(d, 1)}});
}

// --- Gauss sums ------------------------------------------------------------

namespace detail {

using Poly = std::vector<Integer>;  // coefficients, low degree first

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division by a monic polynomial.
inline Poly poly_divide_exact(Poly a, const Poly& m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  if (a.size() < m.size()) return {};
  Poly q(a.size() - dm, 0);
  for (std::size_t i = a.size(); i-- > dm;) {
    Integer c = a[i];
    if (c == 0) continue;
    q[i - dm] = c;
    for (std::size_t j = 0; j <= dm; ++j) a[i - dm + j] -= c * m[j];
  }
  return q;
}

inline Poly poly_mod(Poly a, const Poly& m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  for (std::size_t i = a.size(); i-- > dm;) {
    Integer c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dm; ++j) a[i - dm + j] -= c * m[j];
  }
  trim(a);
  return a;
}

inline Poly cyclotomic(std::int64_t n) {
  Poly p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (std::int64_t d = 1; d < n; ++d)
    if (n % d == 0) p = poly_divide_exact(p, cyclotomic(d));
  return p;
}

}  // namespace detail

// sign(q) in Z/8 with sum_{a in A} exp(pi i q(a)) = sqrt|A| * exp(2 pi i sign/8).
// The sum lives in Z[zeta_M]; the candidate sign is confirmed exactly (T real
// and T^2 = |A| modulo the cyclotomic polynomial), then the sign of T = +-sqrt|A|
// is read off numerically, which is safe because |T| >= 1.
inline int gauss_signature(const FiniteQuadraticForm& f) {
  if (f.num_generators() == 0) return 0;
  if (!f.is_nondegenerate()) throw DegenerateForm("Gauss sum of a degenerate form");
  const std::int64_t two_n = 2 * f.denominator();
  const std::int64_t m = std::lcm(two_n, std::int64_t{8});
  const std::int64_t step = m / two_n;
  std::vector<Integer> s(m, 0);
  for (const auto& x : f.elements()) s[(f.q_scaled(x) * step) % m] += 1;
  const detail::Poly phi = detail::cyclotomic(m);
  const Integer order = f.order();
  for (int sig = 0; sig < 8; ++sig) {
    const std::int64_t shift = sig * (m / 8);
    detail::Poly t(m, 0), tc(m, 0);
    for (std::int64_t e = 0; e < m; ++e) {
      t[((e - shift) % m + m) % m] += s[e];
    }
    for (std::int64_t e = 0; e < m; ++e) tc[(m - e) % m] += t[e];
    detail::Poly diff(m, 0);
    for (std::int64_t e = 0; e < m; ++e) diff[e] = t[e] - tc[e];
    if (!detail::poly_mod(diff, phi).empty()) continue;
    detail::Poly sq(2 * m, 0);
    for (std::int64_t i = 0; i < m; ++i)
      if (t[i] != 0)
        for (std::int64_t j = 0; j < m; ++j)
          if (t[j] != 0) sq[i + j] += t[i] * t[j];
    sq[0] -= order;
    if (!detail::poly_mod(sq, phi).empty()) continue;
    long double re = 0;
    for (std::int64_t e = 0; e < m; ++e)
      if (t[e] != 0)
        re += static_cast<long double>(t[e]) * std::cos(2.0L * 3.14159265358979323846264338327950288L * e / m);
    if (re > 0.5L) return sig;
  }
  throw DegenerateForm("Gauss sum has no admissible argument");
}

// --- isomorphism -------------------------------------------------------------

inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

namespace detail {

// Target-side tables for the backtracking search.
struct ElementTable {
  const FiniteQuadraticForm* form;
  std::vector<GroupElement> elems;
  std::vector<std::int64_t> order;
  std::vector<Fraction> qval;
};

inline ElementTable make_table(const FiniteQuadraticForm& f) {
  ElementTable t{&f, f.elements(), {}, {}};
  for (const auto& x : t.elems) {
    t.order.push_back(f.element_order(x));
    t.qval.push_back(f.q(x));
  }
  return t;
}

}  // namespace detail

// Backtracking over generator images: each image must have the generator's
// order and q-value, reproduce b against earlier images, and keep the span
// of the images free of collapse.
inline std::optional<std::vector<GroupElement>> find_isometry(const FiniteQuadraticForm& a_in,
                                                              const FiniteQuadraticForm& b_in,
                                                              std::uint64_t budget = kDefaultSearchBudget) {
  const FiniteQuadraticForm a = a_in.normalized();
  const FiniteQuadraticForm b = b_in.normalized();
  if (a.orders() != b.orders()) return std::nullopt;
  if (a.num_generators() == 0) return std::vector<GroupElement>{};
  if (a.value_histogram() != b.value_histogram()) return std::nullopt;

  const auto table = detail::make_table(b);
  const std::size_t r = a.num_generators();
  std::vector<GroupElement> src_gens;
  for (std::size_t i = 0; i < r; ++i) {
    GroupElement e(r, 0);
    e[i] = 1;
    src_gens.push_back(e);
  }
  std::vector<std::vector<std::size_t>> candidates(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < table.elems.size(); ++t)
      if (table.order[t] == a.orders()[i] && table.qval[t] == a.q_gen(i)) candidates[i].push_back(t);

  std::vector<std::size_t> chosen;
  std::uint64_t nodes = 0;
  std::vector<std::vector<char>> span_stack;
  std::vector<char> span(table.elems.size(), 0);
  span[0] = 1;
  std::size_t span_size = 1;

  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == r) return true;
    for (std::size_t t : candidates[i]) {
      if (++nodes > budget) throw SearchBudgetExceeded("isomorphism search exceeded " + std::to_string(budget) + " nodes");
      if (span[t]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        if (b.b(table.elems[t], table.elems[chosen[j]]) != a.b_gen(i, j)) ok = false;
      if (!ok) continue;
      // New span = old span + <t>; must have size |old| * order.
      std::vector<char> next = span;
      std::size_t next_size = span_size;
      GroupElement step = table.elems[t];
      for (std::int64_t k = 1; k < a.orders()[i]; ++k) {
        for (std::size_t s = 0; s < table.elems.size(); ++s) {
          if (!span[s]) continue;
          std::size_t idx = b.index_of(b.add(table.elems[s], step));
          if (!next[idx]) {
            next[idx] = 1;
            ++next_size;
          }
        }
        step = b.add(step, table.elems[t]);
      }
      if (next_size != span_size * static_cast<std::size_t>(a.orders()[i])) continue;
      std::swap(span, next);
      std::swap(span_size, next_size);
      chosen.push_back(t);
      if (dfs(i + 1)) return true;
      chosen.pop_back();
      std::swap(span, next);
      std::swap(span_size, next_size);
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  std::vector<GroupElement> images;
  for (auto t : chosen) images.push_back(table.elems[t]);
  return images;
}

inline bool is_isomorphic(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                          std::uint64_t budget = kDefaultSearchBudget) {
  const auto an = a.normalized(), bn = b.normalized();
  if (an.orders() != bn.orders()) return false;
  if (an.value_histogram() != bn.value_histogram()) return false;
  if (an.is_nondegenerate() && bn.is_nondegenerate() && gauss_signature(an) != gauss_signature(bn)) return false;
  return find_isometry(an, bn, budget).has_value();
}

// --- isotropic subgroups ----------------------------------------------------

struct IsotropicSubgroup {
  std::vector<GroupElement> generators;
  std::vector<std::size_t> elements;  // indices into form.elements()
  std::size_t order() const { return elements.size(); }
};

// Every subgroup H with q|_H = 0, the trivial one included. Grown by adding
// isotropic elements orthogonal to the current subgroup, which keeps q = 0.
inline std::vector<IsotropicSubgroup> isotropic_subgroups(const FiniteQuadraticForm& f) {
  const auto elems = f.elements();
  std::vector<std::size_t> isotropic;
  for (std::size_t i = 1; i < elems.size(); ++i)
    if (f.q_scaled(elems[i]) == 0) isotropic.push_back(i);

  std::vector<IsotropicSubgroup> out{IsotropicSubgroup{{}, {0}}};
  std::set<std::vector<std::size_t>> seen{{0}};
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const IsotropicSubgroup cur = out[idx];
    std::vector<char> in(elems.size(), 0);
    for (auto e : cur.elements) in[e] = 1;
    for (auto x : isotropic) {
      if (in[x]) continue;
      bool orth = std::all_of(cur.generators.begin(), cur.generators.end(),
                              [&](const GroupElement& g) { return f.b_scaled(g, elems[x]) == 0; });
      if (!orth) continue;
      std::vector<char> next = in;
      std::vector<std::size_t> members = cur.elements;
      GroupElement step = elems[x];
      while (!in[f.index_of(step)]) {
        for (auto s : cur.elements) {
          std::size_t k = f.index_of(f.add(elems[s], step));
          if (!next[k]) {
            next[k] = 1;
            members.push_back(k);
          }
        }
        step = f.add(step, elems[x]);
      }
      std::sort(members.begin(), members.end());
      if (!seen.insert(members).second) continue;
      IsotropicSubgroup h{cur.generators, members};
      h.generators.push_back(elems[x]);
      out.push_back(std::move(h));
    }
  }
  std::sort(out.begin(), out.end(), [](const IsotropicSubgroup& a, const IsotropicSubgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements < b.elements;
  });
  return out;
}

// --- symbolic expressions ----------------------------------------------------

namespace detail {

class FormParser {
 public:
  explicit FormParser(std::string_view text) : src_(text) {
    std::string s(text);
    auto replace_all = [&](const std::string& from, const std::string& to) {
      for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
        s.replace(p, from.size(), to);
    };
    replace_all("\\oplus", "+");
    replace_all("\xE2\x8A\x95", "+");  // U+2295
    replace_all("\\omega", "w");
    replace_all("\\left", "");
    replace_all("\\right", "");
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c)) && c != '$') s_ += c;
  }

  FiniteQuadraticForm parse() {
    if (s_.empty()) throw ParseError("empty form expression");
    FiniteQuadraticForm f = expr();
    if (pos_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(why + " at position " + std::to_string(pos_) + " in '" + std::string(src_) + "'");
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept_word(const std::string& w) {
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    pos_ += w.size();
    return true;
  }
  std::int64_t integer(bool allow_sign) {
    bool braced = accept('{');
    bool neg = false;
    if (allow_sign) {
      if (accept('-')) neg = true;
      else accept('+');
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    std::int64_t v = std::stoll(s_.substr(start, pos_ - start));
    if (braced) expect('}');
    return neg ? -v : v;
  }

  FiniteQuadraticForm expr() {
    FiniteQuadraticForm f = term();
    while (accept('+')) f = direct_sum(f, term());
    return f;
  }

  FiniteQuadraticForm term() {
    FiniteQuadraticForm base;
    bool repeatable = true;
    if (accept('(')) {
      base = expr();
      expect(')');
    } else {
      base = symbol(repeatable);
    }
    if (repeatable && accept('^')) {
      std::int64_t times = integer(false);
      if (times < 0) fail("negative multiplicity");
      base = direct_power(base, static_cast<int>(times));
    }
    return base;
  }

  FiniteQuadraticForm symbol(bool& repeatable) {
    if (accept_word("trivial")) return trivial_form();
    if (accept('0')) return trivial_form();
    if (accept('u') || accept('v')) {
      const char kind = s_[pos_ - 1];
      int k = 1;
      if (accept('_')) k = static_cast<int>(integer(false));
      return kind == 'u' ? u_form(k) : v_form(k);
    }
    if (accept('w')) {
      std::optional<std::int64_t> p, k, eps;
      for (int part = 0; part < 2; ++part) {
        if (accept('_')) {
          expect('{');
          p = integer(false);
          expect(',');
          k = integer(false);
          expect('}');
        } else if (accept('^')) {
          eps = integer(true);
        }
      }
      if (!p || !eps) fail("w needs both _{p,k} and ^eps");
      repeatable = false;  // a further '^' would be ambiguous
      return w_form(*p, static_cast<int>(*k), static_cast<int>(*eps));
    }
    fail("unknown symbol");
  }

  std::string_view src_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Grammar: term ('+' term)*, where a term is "trivial", "u", "v", "u_k",
// "v_k", "w_{p,k}^e" (sub/superscript in either order), "(expr)^m" or
// "u^m"/"v_k^m". "\oplus" and U+2295 are accepted for '+'.
inline FiniteQuadraticForm parse_form_expression(std::string_view text) {
  return detail::FormParser(text).parse();
}

}  // namespace k3m
