#pragma once

// Exact integer and rational linear algebra: dense matrices, Bareiss
// determinant, Hermite and Smith normal forms with transforms.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace k3m {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer abs_int(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd_int(Integer a, Integer b) {
  a = abs_int(a);
  b = abs_int(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Integer lcm_int(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_int(a / gcd_int(a, b) * b);
}

// Floor division and non-negative remainder (cpp_int truncates).
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs_int(m);
  return r;
}

inline std::int64_t to_i64(const Integer& a) {
  if (a > std::numeric_limits<std::int64_t>::max() ||
      a < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(a);
}

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows,
                          std::size_t cols_if_empty = 0) {
    Matrix m(rows.size(), rows.empty() ? cols_if_empty : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }
  std::vector<std::vector<T>> to_rows() const {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix submatrix(const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols) const {
    Matrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
    return s;
  }

  Matrix select_rows(const std::vector<std::size_t>& rows) const {
    Matrix s(rows.size(), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) s(i, j) = (*this)(rows[i], j);
    return s;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero_row(std::size_t i) const {
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) return false;
    return true;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

inline IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
  return c;
}

// Fraction-free Bareiss elimination.
inline Integer determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// Reduced row echelon form over Q; returns the rank.
inline std::size_t rref(RatMatrix& m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    Rational inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m(i, c) != 0) m.add_row(i, r, Rational(-m(i, c)));
    ++r;
  }
  return r;
}

inline std::size_t rank(const IntMatrix& m) {
  RatMatrix r = to_rational(m);
  return rref(r);
}

inline std::optional<RatMatrix> inverse(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = Rational(m(i, j));
    aug(i, n + i) = 1;
  }
  if (rref(aug) < n) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i)
    if (aug(i, i) != 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// Row-style Hermite normal form: transform * m = basis-with-zero-rows-below.
struct HermiteForm {
  IntMatrix form;       // same shape as the input; rows >= rank are zero
  IntMatrix transform;  // unimodular, rows x rows
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;

  IntMatrix basis() const {
    IntMatrix b(rank, form.cols());
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < form.cols(); ++j) b(i, j) = form(i, j);
    return b;
  }
};

inline HermiteForm hermite_form(const IntMatrix& m) {
  HermiteForm h{m, IntMatrix::identity(m.rows()), 0, {}};
  IntMatrix& a = h.form;
  IntMatrix& t = h.transform;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    // Euclid on column c among rows r.. until one nonzero entry remains.
    while (true) {
      std::size_t best = a.rows();
      for (std::size_t i = r; i < a.rows(); ++i)
        if (a(i, c) != 0 && (best == a.rows() || abs_int(a(i, c)) < abs_int(a(best, c))))
          best = i;
      if (best == a.rows()) break;
      a.swap_rows(r, best);
      t.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < a.rows(); ++i) {
        if (a(i, c) == 0) continue;
        Integer q = a(i, c) / a(r, c);
        a.add_row(i, r, Integer(-q));
        t.add_row(i, r, Integer(-q));
        if (a(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) {
      a.negate_row(r);
      t.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(a(i, c), a(r, c));
      a.add_row(i, r, Integer(-q));
      t.add_row(i, r, Integer(-q));
    }
    h.pivots.push_back(c);
    ++r;
  }
  h.rank = r;
  return h;
}

// Smith normal form: left * m * right = diag, diag entries d_1 | d_2 | ...
struct SmithForm {
  IntMatrix left, diag, right;
  std::vector<Integer> divisors;  // nonzero diagonal entries, ascending
};

inline SmithForm smith_form(const IntMatrix& m) {
  SmithForm s{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols()), {}};
  IntMatrix& a = s.diag;
  const std::size_t n = std::min(a.rows(), a.cols());
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      std::size_t pi = a.rows(), pj = a.cols();
      for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j)
          if (a(i, j) != 0 && (pi == a.rows() || abs_int(a(i, j)) < abs_int(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == a.rows()) {
        for (std::size_t k = 0; k < t; ++k) s.divisors.push_back(a(k, k));
        return s;
      }
      a.swap_rows(t, pi);
      s.left.swap_rows(t, pi);
      a.swap_cols(t, pj);
      s.right.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        a.add_row(i, t, Integer(-q));
        s.left.add_row(i, t, Integer(-q));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        a.add_col(j, t, Integer(-q));
        s.right.add_col(j, t, Integer(-q));
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold an offending row into row t and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < a.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (a(i, j) % a(t, t) != 0) {
            a.add_row(t, i, Integer(1));
            s.left.add_row(t, i, Integer(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      s.left.negate_row(t);
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    if (a(k, k) != 0) s.divisors.push_back(a(k, k));
  return s;
}

// Basis (as rows) of the integer kernel {v : m v = 0}.
inline IntMatrix integer_kernel(const IntMatrix& m) {
  HermiteForm h = hermite_form(m.transpose());
  IntMatrix k(m.cols() - h.rank, m.cols());
  for (std::size_t i = h.rank; i < m.cols(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) k(i - h.rank, j) = h.transform(i, j);
  return k;
}

// Integer coordinates of v in the row basis b (rows independent), if any.
inline std::optional<std::vector<Integer>> integer_coordinates(const IntMatrix& b,
                                                               const std::vector<Integer>& v) {
  const std::size_t r = b.rows(), n = b.cols();
  RatMatrix aug(n, r + 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < r; ++i) aug(j, i) = Rational(b(i, j));
    aug(j, r) = Rational(v[j]);
  }
  std::size_t rk = rref(aug);
  std::vector<Integer> x(r, 0);
  for (std::size_t i = 0; i < rk; ++i) {
    std::size_t lead = 0;
    while (lead <= r && aug(i, lead) == 0) ++lead;
    if (lead == r) return std::nullopt;  // inconsistent
    if (lead > r) continue;
    const Rational& val = aug(i, r);
    if (denominator(val) != 1) return std::nullopt;
    x[lead] = numerator(val);
  }
  // Ranks must agree for a consistent system with independent rows.
  for (std::size_t j = 0; j < n; ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < r; ++i) s += x[i] * b(i, j);
    if (s != v[j]) return std::nullopt;
  }
  return x;
}

inline std::string rational_to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

}  // namespace k3m
