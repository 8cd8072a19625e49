#include <cstdlib>
#include <map>

#include <gtest/gtest.h>

#include "k3mirror/verify.hpp"

using namespace k3m;

namespace {

std::filesystem::path data_dir() {
  const char* env = std::getenv("K3MIRROR_DATA");
  return env ? env : K3MIRROR_DEFAULT_DATA;
}

std::vector<std::string> table_polynomials() {
  std::vector<std::string> out;
  for (int n : {4, 8, 12})
    for (const auto& l : load_table(data_dir() / ("order" + std::to_string(n) + ".json")).lines)
      out.push_back(l.polynomial);
  return out;
}

// Block signature (kind, size, sorted exponents), independent of ordering.
using Shape = std::tuple<std::string, std::size_t, std::vector<int>>;

std::multiset<Shape> shapes(const std::vector<AtomicBlock>& blocks) {
  std::multiset<Shape> s;
  for (const auto& b : blocks) {
    auto e = b.exponents;
    std::sort(e.begin(), e.end());
    s.insert({atomic_kind_name(b.kind), b.variables.size(), e});
  }
  return s;
}

// Oracle: try every simultaneous relabelling and read off canonical blocks
// along the diagonal. Rows are matched to the variable carrying their largest
// exponent, which is the diagonal entry in every atomic type.
std::optional<std::multiset<Shape>> permutation_oracle(const ExponentMatrix& a) {
  const std::size_t m = a.size();
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  do {
    // b(i, j) = a(row placed at i, column placed at j)
    std::vector<std::size_t> row_for(m, m);
    bool ok = true;
    for (std::size_t r = 0; r < m && ok; ++r) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < m; ++j)
        if (a(r, j) > a(r, best)) best = j;
      if (row_for[p[best]] != m) ok = false;
      row_for[p[best]] = r;
    }
    if (!ok) continue;
    std::vector<std::size_t> col(m);
    for (std::size_t j = 0; j < m; ++j) col[p[j]] = j;
    auto b = [&](std::size_t i, std::size_t j) { return a(row_for[i], col[j]); };
    std::multiset<Shape> out;
    std::size_t start = 0;
    while (ok && start < m) {
      // A block runs while each row has a 1 just right of the diagonal.
      std::size_t end = start;
      while (end + 1 < m && b(end, end + 1) == 1) ++end;
      const std::size_t len = end - start + 1;
      const bool loop = len >= 2 && b(end, start) == 1;
      std::vector<int> ex;
      for (std::size_t i = start; i <= end && ok; ++i) {
        ex.push_back(b(i, i));
        for (std::size_t j = 0; j < m; ++j) {
          if (j == i) continue;
          const bool allowed = (j == i + 1 && i < end) || (loop && i == end && j == start);
          if (b(i, j) != (allowed ? 1 : 0)) ok = false;
        }
        if (len >= 2 && b(i, i) < 2) ok = false;
      }
      if (!ok) break;
      std::sort(ex.begin(), ex.end());
      out.insert({len == 1 ? "Fermat" : (loop ? "Loop" : "Chain"), len, ex});
      start = end + 1;
    }
    if (ok) return out;
  } while (std::next_permutation(p.begin(), p.end()));
  return std::nullopt;
}

// Independent weight solver: Gaussian elimination over Q on A q = 1.
// Comparisons go through numerator(): under C++20, Boost 1.74's
// rational == integer recurses through its own reversed candidate.
WeightSystem oracle_weights(const ExponentMatrix& a) {
  const std::size_t m = a.size();
  std::vector<std::vector<Fraction>> aug(m, std::vector<Fraction>(m + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug[i][j] = Fraction(a(i, j));
    aug[i][m] = Fraction(1);
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (aug[p][c].numerator() == 0) ++p;
    std::swap(aug[p], aug[c]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || aug[r][c].numerator() == 0) continue;
      const Fraction f = aug[r][c] / aug[c][c];
      for (std::size_t k = c; k <= m; ++k) aug[r][k] -= f * aug[c][k];
    }
  }
  std::vector<Fraction> q(m);
  std::int64_t d = 1;
  for (std::size_t i = 0; i < m; ++i) {
    q[i] = aug[i][m] / aug[i][i];
    d = std::lcm(d, q[i].denominator());
  }
  WeightSystem ws;
  ws.degree = d;
  for (const auto& x : q) ws.weights.push_back((x * d).numerator());
  return ws;
}

}  // namespace

TEST(ParsePolynomial, LineTwelve) {
  const auto w = parse_polynomial("x^2z+y^4+z^4+w^8");
  ASSERT_EQ(w.num_variables(), 4u);
  EXPECT_EQ(w.exponent_matrix().rows(),
            (std::vector<std::vector<int>>{{2, 0, 1, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 8}}));
}

TEST(ParsePolynomial, SingleFermatTerm) {
  const auto w = parse_polynomial("x^4");
  EXPECT_EQ(w.exponent_matrix().rows(), (std::vector<std::vector<int>>{{4}}));
}

TEST(ParsePolynomial, Errors) {
  EXPECT_THROW(parse_polynomial("x^2+y^2", {"x", "y", "z"}), Error);
  EXPECT_THROW(parse_polynomial("x^2+x^2"), Error);
  EXPECT_THROW(parse_polynomial("x^2+y^+"), Error);
  EXPECT_THROW(parse_polynomial("x^2y^2"), Error);
  // Parses, but has no positive weight system.
  EXPECT_THROW(weight_system(parse_polynomial("xy+xy^2")), NoPositiveSolution);
}

TEST(AtomicDecomposition, SpecExamples) {
  auto w = parse_polynomial("x^2z+y^4+z^4+w^8");
  EXPECT_EQ(shapes(atomic_decomposition(w)),
            (std::multiset<Shape>{{"Chain", 2, {2, 4}}, {"Fermat", 1, {4}}, {"Fermat", 1, {8}}}));
  w = parse_polynomial("x^4+y^4+z^3w+zw^3");
  EXPECT_EQ(shapes(atomic_decomposition(w)),
            (std::multiset<Shape>{{"Fermat", 1, {4}}, {"Fermat", 1, {4}}, {"Loop", 2, {3, 3}}}));
  w = parse_polynomial("x^2+y^4+z^8+w^8");
  EXPECT_EQ(atomic_decomposition(w).size(), 4u);
}

TEST(AtomicDecomposition, ChainBlockOrderStartsAtPurePower) {
  const auto w = parse_polynomial("x^2z+y^4+z^4+w^8");
  for (const auto& b : atomic_decomposition(w))
    if (b.kind == AtomicKind::Chain) {
      EXPECT_EQ(block_to_string(b, w.variables()), "Chain(z,x;4,2)");
    }
}

TEST(AtomicDecomposition, RejectsNonAtomicMatrix) {
  EXPECT_THROW(atomic_decomposition(ExponentMatrix({{2, 1, 1}, {0, 3, 0}, {0, 0, 3}})), NotInvertible);
}

TEST(AtomicDecomposition, AgreesWithPermutationOracleOnAllTables) {
  for (const auto& text : table_polynomials()) {
    const auto w = parse_polynomial(text);
    for (const auto& v : {w, transpose(w)}) {
      const auto oracle = permutation_oracle(v.exponent_matrix());
      ASSERT_TRUE(oracle.has_value()) << v.to_string();
      const auto blocks = atomic_decomposition(v);
      EXPECT_EQ(shapes(blocks), *oracle) << v.to_string();
      // Blocks partition the variables and reassemble to A up to relabelling.
      std::vector<std::size_t> vars;
      for (const auto& b : blocks) vars.insert(vars.end(), b.variables.begin(), b.variables.end());
      std::sort(vars.begin(), vars.end());
      EXPECT_EQ(vars, detail::identity_perm(v.num_variables()));
      EXPECT_EQ(assemble_blocks(blocks, v.num_variables()), v.exponent_matrix());
    }
  }
}

TEST(WeightSystem, SpecExamples) {
  EXPECT_EQ(weight_system(parse_polynomial("x^2z+y^4+z^4+w^8")), (WeightSystem{{3, 2, 2, 1}, 8}));
  EXPECT_EQ(weight_system(ExponentMatrix({{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}})),
            (WeightSystem{{1, 1, 1, 1}, 4}));
  EXPECT_EQ(weight_system(ExponentMatrix(std::vector<std::vector<int>>{{2}})), (WeightSystem{{1}, 2}));
}

TEST(WeightSystem, CalabiYauCondition) {
  EXPECT_TRUE(is_calabi_yau(WeightSystem{{3, 2, 2, 1}, 8}));
  EXPECT_TRUE(is_calabi_yau(WeightSystem{{1, 1, 1, 1}, 4}));
  EXPECT_FALSE(is_calabi_yau(WeightSystem{{1, 1, 1}, 4}));
}

TEST(WeightSystem, AgreesWithEliminationOracleOnAllTables) {
  for (const auto& text : table_polynomials()) {
    const auto w = parse_polynomial(text);
    for (const auto& v : {w, transpose(w)}) {
      const WeightSystem ws = weight_system(v);
      WeightSystem oracle = oracle_weights(v.exponent_matrix());
      std::int64_t g = 0;
      for (auto q : oracle.weights) g = std::gcd(g, q);
      g = std::gcd(g, oracle.degree);
      for (auto& q : oracle.weights) q /= g;
      oracle.degree /= g;
      EXPECT_EQ(ws, oracle) << v.to_string();
      EXPECT_TRUE(ws.is_calabi_yau()) << v.to_string();
      for (std::size_t i = 0; i < v.num_variables(); ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < v.num_variables(); ++j) s += v.exponent_matrix()(i, j) * ws.weights[j];
        EXPECT_EQ(s, ws.degree);
      }
    }
  }
}

TEST(Transpose, SpecExamples) {
  const auto w = parse_polynomial("x^2z+y^4+z^4+w^8");
  const auto t = transpose(w);
  EXPECT_EQ(t, parse_polynomial("x^2+y^4+xz^4+w^8"));
  EXPECT_EQ(weight_system(t), (WeightSystem{{4, 2, 1, 1}, 8}));
  const auto fermat = parse_polynomial("x^4+y^4+z^4+w^4");
  EXPECT_EQ(transpose(fermat), fermat);
}

TEST(Transpose, InvolutionAndDeterminantOnAllTables) {
  for (const auto& text : table_polynomials()) {
    const auto w = parse_polynomial(text);
    EXPECT_EQ(transpose(transpose(w)), w);
    EXPECT_EQ(abs_int(w.exponent_matrix().determinant()), abs_int(transpose(w).exponent_matrix().determinant()));
  }
}

TEST(PurePower, FindsTheDistinguishedVariable) {
  EXPECT_EQ(pure_power_variable(parse_polynomial("x^2z+y^4+z^4+w^8").exponent_matrix(), 4), 1u);
  EXPECT_EQ(pure_power_variable(parse_polynomial("x^2+y^4+z^8+w^8").exponent_matrix(), 8), 2u);
  EXPECT_FALSE(pure_power_variable(parse_polynomial("x^2z+y^4+z^4+w^8").exponent_matrix(), 3).has_value());
}
