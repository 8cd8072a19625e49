#pragma once

// Invertible polynomials: parsing, exponent matrices, weight systems,
// atomic decomposition and the BHK transpose.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace k3m {

struct WeightSystem {
  std::vector<std::int64_t> weights;
  std::int64_t degree = 0;

  bool is_calabi_yau() const {
    return std::accumulate(weights.begin(), weights.end(), std::int64_t{0}) == degree;
  }
  WeightSystem sorted_descending() const {
    WeightSystem s = *this;
    std::sort(s.weights.begin(), s.weights.end(), std::greater<>());
    return s;
  }
  std::string to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < weights.size(); ++i) os << (i ? "," : "") << weights[i];
    os << ';' << degree << ')';
    return os.str();
  }
  friend bool operator==(const WeightSystem&, const WeightSystem&) = default;
};

// Rows are monomials, columns are variables.
class ExponentMatrix {
 public:
  ExponentMatrix() = default;
  explicit ExponentMatrix(std::vector<std::vector<int>> rows) : rows_(std::move(rows)) {
    for (const auto& r : rows_)
      if (r.size() != rows_.size()) throw NotInvertible("exponent matrix is not square");
  }

  std::size_t size() const { return rows_.size(); }
  int operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<std::vector<int>>& rows() const { return rows_; }

  ExponentMatrix transpose() const {
    std::vector<std::vector<int>> t(size(), std::vector<int>(size()));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) t[j][i] = rows_[i][j];
    return ExponentMatrix(std::move(t));
  }

  IntMatrix to_int_matrix() const {
    IntMatrix m(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) m(i, j) = rows_[i][j];
    return m;
  }

  Integer determinant() const { return k3m::determinant(to_int_matrix()); }

  // "[[2,0,1,0],[0,4,0,0],...]"
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < size(); ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < size(); ++j) s += (j ? "," : "") + std::to_string(rows_[i][j]);
      s += "]";
    }
    return s + "]";
  }

  friend bool operator==(const ExponentMatrix&, const ExponentMatrix&) = default;

 private:
  std::vector<std::vector<int>> rows_;
};

enum class AtomicKind { Fermat, Loop, Chain };

struct AtomicBlock {
  AtomicKind kind;
  std::vector<std::size_t> variables;  // in block order
  std::vector<int> exponents;          // a_i, aligned with variables

  friend bool operator==(const AtomicBlock&, const AtomicBlock&) = default;
};

inline std::string atomic_kind_name(AtomicKind k) {
  switch (k) {
    case AtomicKind::Fermat: return "Fermat";
    case AtomicKind::Loop: return "Loop";
    case AtomicKind::Chain: return "Chain";
  }
  return "?";
}

class InvertiblePolynomial {
 public:
  InvertiblePolynomial(std::vector<std::string> variables, ExponentMatrix a)
      : variables_(std::move(variables)), a_(std::move(a)) {
    if (variables_.size() != a_.size()) throw NotInvertible("variable count mismatch");
    if (a_.determinant() == 0) throw NotInvertible("exponent matrix is singular");
  }

  const std::vector<std::string>& variables() const { return variables_; }
  const ExponentMatrix& exponent_matrix() const { return a_; }
  std::size_t num_variables() const { return variables_.size(); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i) out += '+';
      for (std::size_t j = 0; j < a_.size(); ++j) {
        int e = a_(i, j);
        if (e == 0) continue;
        out += variables_[j];
        if (e > 1) out += '^' + std::to_string(e);
      }
    }
    return out;
  }

  friend bool operator==(const InvertiblePolynomial&, const InvertiblePolynomial&) = default;

 private:
  std::vector<std::string> variables_;
  ExponentMatrix a_;
};

namespace detail {

inline int variable_rank(const std::string& name) {
  static const std::string order = "xyzw";
  if (name.size() == 1) {
    auto p = order.find(name[0]);
    if (p != std::string::npos) return static_cast<int>(p);
  }
  return 4;
}

inline bool natural_less(const std::string& a, const std::string& b) {
  int ra = variable_rank(a), rb = variable_rank(b);
  if (ra != rb) return ra < rb;
  // Letter prefix, then numeric suffix.
  auto split = [](const std::string& s) {
    std::size_t k = 0;
    while (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k]))) ++k;
    long n = k < s.size() ? std::stol(s.substr(k)) : -1;
    return std::make_pair(s.substr(0, k), n);
  };
  return split(a) < split(b);
}

// Row order so that row i carries the leading (>= 2) exponent of variable i.
inline std::optional<std::vector<std::size_t>> diagonal_row_order(
    const std::vector<std::vector<int>>& rows) {
  const std::size_t m = rows.size();
  std::vector<std::size_t> assign(m);
  std::vector<bool> used(m, false);
  std::function<bool(std::size_t)> go = [&](std::size_t var) -> bool {
    if (var == m) return true;
    for (std::size_t r = 0; r < m; ++r) {
      if (used[r] || rows[r][var] < 2) continue;
      used[r] = true;
      assign[var] = r;
      if (go(var + 1)) return true;
      used[r] = false;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return assign;
}

}  // namespace detail

// Grammar: monomials joined by '+'; a monomial is a product of factors
// `name` or `name^e` (e may be braced). Names are a letter followed by digits,
// so "x^2z" reads as x^2 * z. Coefficients are not allowed.
inline InvertiblePolynomial parse_polynomial(std::string_view text,
                                             std::vector<std::string> variables = {}) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '$' && c != '*') s += c;
  if (s.empty()) throw ParseError("empty polynomial");

  std::vector<std::map<std::string, int>> monomials;
  std::size_t i = 0;
  auto read_int = [&]() -> int {
    bool braced = i < s.size() && s[i] == '{';
    if (braced) ++i;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) throw ParseError("expected exponent in '" + std::string(text) + "'");
    int v = std::stoi(s.substr(start, i - start));
    if (braced) {
      if (i >= s.size() || s[i] != '}') throw ParseError("unbalanced brace");
      ++i;
    }
    return v;
  };
  while (i < s.size()) {
    std::map<std::string, int> mono;
    bool any = false;
    while (i < s.size() && s[i] != '+') {
      if (!std::isalpha(static_cast<unsigned char>(s[i])))
        throw ParseError(std::string("unexpected character '") + s[i] + "' in '" +
                         std::string(text) + "'");
      std::string name(1, s[i++]);
      if (i < s.size() && s[i] == '_') ++i;
      bool braced = i < s.size() && s[i] == '{';
      if (braced) ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) name += s[i++];
      if (braced) {
        if (i >= s.size() || s[i] != '}') throw ParseError("unbalanced brace");
        ++i;
      }
      int e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        e = read_int();
      }
      if (e < 1) throw ParseError("non-positive exponent");
      mono[name] += e;
      any = true;
    }
    if (!any) throw ParseError("empty monomial in '" + std::string(text) + "'");
    monomials.push_back(std::move(mono));
    if (i < s.size()) {
      ++i;  // '+'
      if (i == s.size()) throw ParseError("trailing '+'");
    }
  }

  if (variables.empty()) {
    for (const auto& m : monomials)
      for (const auto& [name, e] : m)
        if (std::find(variables.begin(), variables.end(), name) == variables.end())
          variables.push_back(name);
    std::sort(variables.begin(), variables.end(), detail::natural_less);
  } else {
    for (const auto& m : monomials)
      for (const auto& [name, e] : m)
        if (std::find(variables.begin(), variables.end(), name) == variables.end())
          throw ParseError("undeclared variable '" + name + "'");
  }
  if (monomials.size() != variables.size())
    throw NotInvertible(std::to_string(monomials.size()) + " monomials in " +
                        std::to_string(variables.size()) + " variables");

  std::vector<std::vector<int>> rows;
  for (const auto& m : monomials) {
    std::vector<int> r(variables.size(), 0);
    for (const auto& [name, e] : m)
      r[std::find(variables.begin(), variables.end(), name) - variables.begin()] = e;
    rows.push_back(std::move(r));
  }
  if (auto order = detail::diagonal_row_order(rows)) {
    std::vector<std::vector<int>> sorted;
    for (std::size_t v = 0; v < rows.size(); ++v) sorted.push_back(rows[(*order)[v]]);
    rows = std::move(sorted);
  }
  return InvertiblePolynomial(std::move(variables), ExponentMatrix(std::move(rows)));
}

inline ExponentMatrix exponent_matrix(const InvertiblePolynomial& w) { return w.exponent_matrix(); }

// Solves A q = d * 1 with minimal positive integer q, gcd(q) = 1.
inline WeightSystem weight_system(const ExponentMatrix& a) {
  auto inv = inverse(a.to_int_matrix());
  if (!inv) throw NotInvertible("exponent matrix is singular");
  std::vector<Rational> q(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) q[i] += (*inv)(i, j);
  Integer d = 1;
  for (const auto& x : q) {
    if (x <= 0) throw NoPositiveSolution("weight " + rational_to_string(x) + " is not positive");
    d = lcm_int(d, denominator(x));
  }
  WeightSystem ws;
  Integer g = 0;
  std::vector<Integer> qi;
  for (const auto& x : q) {
    qi.push_back(numerator(Rational(x * d)));
    g = gcd_int(g, qi.back());
  }
  for (auto& x : qi) ws.weights.push_back(to_i64(x / g));
  ws.degree = to_i64(d / g);
  return ws;
}

inline WeightSystem weight_system(const InvertiblePolynomial& w) {
  return weight_system(w.exponent_matrix());
}

inline bool is_calabi_yau(const WeightSystem& ws) { return ws.is_calabi_yau(); }

// Each row is x_i^{a_i} times at most one other variable to the first power;
// the "pointer" of a row is that other variable. Fermat blocks have no pointer
// and are not pointed at, chains are paths ending at a pure power, loops are
// cycles. Rows are first permuted (exhaustively) to expose that shape.
inline std::vector<AtomicBlock> atomic_decomposition(const ExponentMatrix& a) {
  const std::size_t m = a.size();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> pointer(m, -1);
    bool ok = true;
    for (std::size_t v = 0; v < m && ok; ++v) {
      const auto& row = a.rows()[perm[v]];
      if (row[v] < 2) {
        ok = false;
        break;
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (j == v || row[j] == 0) continue;
        if (row[j] != 1 || pointer[v] != -1) {
          ok = false;
          break;
        }
        pointer[v] = static_cast<int>(j);
      }
    }
    if (!ok) continue;
    std::vector<int> indegree(m, 0);
    for (std::size_t v = 0; v < m; ++v)
      if (pointer[v] >= 0) ++indegree[pointer[v]];
    if (std::any_of(indegree.begin(), indegree.end(), [](int d) { return d > 1; })) continue;

    auto diag = [&](std::size_t v) { return a.rows()[perm[v]][v]; };
    std::vector<AtomicBlock> blocks;
    std::vector<bool> seen(m, false);
    // who_points[v] = variable whose row contains v, or -1.
    std::vector<int> who_points(m, -1);
    for (std::size_t v = 0; v < m; ++v)
      if (pointer[v] >= 0) who_points[pointer[v]] = static_cast<int>(v);
    // Chains and Fermat blocks start at pure powers.
    for (std::size_t v = 0; v < m; ++v) {
      if (pointer[v] != -1) continue;
      AtomicBlock b{who_points[v] == -1 ? AtomicKind::Fermat : AtomicKind::Chain, {}, {}};
      for (int cur = static_cast<int>(v); cur != -1; cur = who_points[cur]) {
        b.variables.push_back(cur);
        b.exponents.push_back(diag(cur));
        seen[cur] = true;
      }
      blocks.push_back(std::move(b));
    }
    for (std::size_t v = 0; v < m; ++v) {
      if (seen[v]) continue;
      AtomicBlock b{AtomicKind::Loop, {}, {}};
      std::size_t cur = v;
      do {
        b.variables.push_back(cur);
        b.exponents.push_back(diag(cur));
        seen[cur] = true;
        cur = static_cast<std::size_t>(who_points[cur]);
      } while (cur != v);
      blocks.push_back(std::move(b));
    }
    std::sort(blocks.begin(), blocks.end(), [](const AtomicBlock& x, const AtomicBlock& y) {
      return *std::min_element(x.variables.begin(), x.variables.end()) <
             *std::min_element(y.variables.begin(), y.variables.end());
    });
    return blocks;
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw NotInvertible("no Fermat/loop/chain decomposition");
}

inline std::vector<AtomicBlock> atomic_decomposition(const InvertiblePolynomial& w) {
  return atomic_decomposition(w.exponent_matrix());
}

// Rebuilds the exponent matrix of a block sum; rows are indexed by variable.
inline ExponentMatrix assemble_blocks(const std::vector<AtomicBlock>& blocks, std::size_t m) {
  std::vector<std::vector<int>> rows(m, std::vector<int>(m, 0));
  for (const auto& b : blocks) {
    const std::size_t k = b.variables.size();
    for (std::size_t t = 0; t < k; ++t) {
      std::size_t v = b.variables[t];
      rows[v][v] = b.exponents[t];
      if (b.kind == AtomicKind::Chain && t > 0) rows[v][b.variables[t - 1]] = 1;
      if (b.kind == AtomicKind::Loop) rows[v][b.variables[(t + k - 1) % k]] = 1;
    }
  }
  return ExponentMatrix(std::move(rows));
}

inline std::string block_to_string(const AtomicBlock& b, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << atomic_kind_name(b.kind) << '(';
  for (std::size_t i = 0; i < b.variables.size(); ++i) os << (i ? "," : "") << names[b.variables[i]];
  os << ';';
  for (std::size_t i = 0; i < b.exponents.size(); ++i) os << (i ? "," : "") << b.exponents[i];
  os << ')';
  return os.str();
}

// Variable i of the transpose corresponds to monomial i of w.
inline InvertiblePolynomial transpose(const InvertiblePolynomial& w) {
  return InvertiblePolynomial(w.variables(), w.exponent_matrix().transpose());
}

// Index of the variable x0 that occurs only as a pure power x0^n, if any.
inline std::optional<std::size_t> pure_power_variable(const ExponentMatrix& a, int n) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    bool ok = a(j, j) == n;
    for (std::size_t i = 0; i < a.size() && ok; ++i)
      if (i != j && (a(i, j) != 0 || a(j, i) != 0)) ok = false;
    if (ok) return j;
  }
  return std::nullopt;
}

// Polynomials equal up to renaming variables: returns perm with
// other.variable(perm[i]) playing the role of w.variable(i).
inline std::optional<std::vector<std::size_t>> variable_permutation(const InvertiblePolynomial& w,
                                                                    const InvertiblePolynomial& other) {
  const std::size_t m = w.num_variables();
  if (other.num_variables() != m) return std::nullopt;
  auto rows_of = [](const ExponentMatrix& a) {
    std::vector<std::vector<int>> r = a.rows();
    std::sort(r.begin(), r.end());
    return r;
  };
  const auto target = rows_of(other.exponent_matrix());
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::vector<int>> rows;
    for (const auto& r : w.exponent_matrix().rows()) {
      std::vector<int> nr(m, 0);
      for (std::size_t j = 0; j < m; ++j) nr[perm[j]] = r[j];
      rows.push_back(std::move(nr));
    }
    std::sort(rows.begin(), rows.end());
    if (rows == target) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace k3m
