#pragma once

// Configurations of curves on a K3 surface: intersection graphs, automorphism
// actions by node permutation, orbit divisors and the lattices they span.

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "linalg.hpp"

namespace k3m {

// Auxiliary curves (lines and the like) take part in spans of curve classes
// but are not part of the invariant generating set.
enum class CurveKind { Coordinate, Exceptional, Auxiliary };

inline CurveKind parse_curve_kind(std::string_view s) {
  if (s == "coordinate") return CurveKind::Coordinate;
  if (s == "exceptional") return CurveKind::Exceptional;
  if (s == "auxiliary") return CurveKind::Auxiliary;
  throw ParseError("unknown curve kind '" + std::string(s) + "'");
}

inline std::string curve_kind_name(CurveKind k) {
  switch (k) {
    case CurveKind::Coordinate: return "coordinate";
    case CurveKind::Exceptional: return "exceptional";
    case CurveKind::Auxiliary: return "auxiliary";
  }
  return "?";
}

struct CurveNode {
  int id = 0;
  std::string label;
  int genus = 0;
  CurveKind kind = CurveKind::Exceptional;
  int self_intersection() const { return 2 * genus - 2; }
};

struct CurveEdge {
  int a = 0, b = 0, multiplicity = 1;
};

class CurveConfiguration {
 public:
  CurveConfiguration() = default;
  CurveConfiguration(std::vector<CurveNode> nodes, std::vector<CurveEdge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].genus < 0) throw ParseError("negative genus on node " + std::to_string(nodes_[i].id));
      if (!index_.emplace(nodes_[i].id, i).second)
        throw ParseError("duplicate node id " + std::to_string(nodes_[i].id));
    }
    gram_ = IntMatrix(nodes_.size(), nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) gram_(i, i) = nodes_[i].self_intersection();
    for (const auto& e : edges_) {
      const std::size_t a = index_of(e.a), b = index_of(e.b);
      if (a == b) throw ParseError("self-loop on node " + std::to_string(e.a));
      if (e.multiplicity < 0) throw ParseError("negative intersection multiplicity");
      gram_(a, b) += e.multiplicity;
      gram_(b, a) += e.multiplicity;
    }
  }

  const std::vector<CurveNode>& nodes() const { return nodes_; }
  const std::vector<CurveEdge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownNode("node " + std::to_string(id));
    return it->second;
  }
  bool has_node(int id) const { return index_.count(id) > 0; }
  const CurveNode& node(int id) const { return nodes_[index_of(id)]; }
  // Node-level intersection matrix, diagonal 2g - 2.
  const IntMatrix& intersection_matrix() const { return gram_; }
  Integer intersection(int a, int b) const { return gram_(index_of(a), index_of(b)); }

 private:
  std::vector<CurveNode> nodes_;
  std::vector<CurveEdge> edges_;
  std::map<int, std::size_t> index_;
  IntMatrix gram_;
};

class ConfigAutomorphism {
 public:
  ConfigAutomorphism() = default;
  ConfigAutomorphism(std::string name, std::map<int, int> images)
      : name_(std::move(name)), images_(std::move(images)) {}

  // Cycle notation over node ids, e.g. "(16 17)(19 20)"; commas optional.
  // Nodes not mentioned are fixed.
  static ConfigAutomorphism from_cycles(std::string name, std::string_view cycles,
                                        const CurveConfiguration& cfg) {
    std::map<int, int> images;
    for (const auto& n : cfg.nodes()) images[n.id] = n.id;
    std::set<int> moved;
    std::size_t i = 0;
    while (i < cycles.size()) {
      char c = cycles[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c != '(') throw ParseError("expected '(' in cycle notation '" + std::string(cycles) + "'");
      std::size_t close = cycles.find(')', i);
      if (close == std::string_view::npos) throw ParseError("unterminated cycle");
      std::vector<int> cyc;
      std::string cur;
      for (std::size_t k = i + 1; k <= close; ++k) {
        char d = cycles[k];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          cur += d;
        } else if (!cur.empty()) {
          cyc.push_back(std::stoi(cur));
          cur.clear();
        }
      }
      for (int id : cyc) {
        cfg.index_of(id);
        if (!moved.insert(id).second) throw BadAutomorphism("node " + std::to_string(id) + " appears twice");
      }
      for (std::size_t k = 0; k < cyc.size(); ++k) images[cyc[k]] = cyc[(k + 1) % cyc.size()];
      i = close + 1;
    }
    ConfigAutomorphism a(std::move(name), std::move(images));
    a.validate(cfg);
    return a;
  }

  const std::string& name() const { return name_; }
  int image(int id) const {
    auto it = images_.find(id);
    if (it == images_.end()) throw UnknownNode("node " + std::to_string(id));
    return it->second;
  }
  std::size_t order() const {
    std::size_t o = 1;
    std::set<int> seen;
    for (const auto& [id, img] : images_) {
      if (seen.count(id)) continue;
      std::size_t len = 0;
      int cur = id;
      do {
        seen.insert(cur);
        cur = image(cur);
        ++len;
      } while (cur != id);
      o = std::lcm(o, len);
    }
    return o;
  }

  // A graph automorphism preserving genus, kind and intersection numbers.
  void validate(const CurveConfiguration& cfg) const {
    std::set<int> targets;
    for (const auto& n : cfg.nodes()) {
      int img = image(n.id);
      const CurveNode& m = cfg.node(img);
      if (m.genus != n.genus || m.kind != n.kind)
        throw BadAutomorphism(name_ + " maps node " + std::to_string(n.id) + " to an incompatible node");
      targets.insert(img);
    }
    if (targets.size() != cfg.size()) throw BadAutomorphism(name_ + " is not a bijection");
    for (const auto& a : cfg.nodes())
      for (const auto& b : cfg.nodes())
        if (cfg.intersection(a.id, b.id) != cfg.intersection(image(a.id), image(b.id)))
          throw BadAutomorphism(name_ + " does not preserve the intersection between " +
                                std::to_string(a.id) + " and " + std::to_string(b.id));
  }

 private:
  std::string name_;
  std::map<int, int> images_;
};

struct OrbitDivisor {
  std::vector<int> nodes;  // unit coefficients
  std::string label() const {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? "+" : "") + std::to_string(nodes[i]);
    return s;
  }
  friend bool operator==(const OrbitDivisor&, const OrbitDivisor&) = default;
};

inline std::vector<Integer> divisor_vector(const CurveConfiguration& cfg, const OrbitDivisor& d) {
  std::vector<Integer> v(cfg.size(), 0);
  for (int id : d.nodes) v[cfg.index_of(id)] += 1;
  return v;
}

// Intersection matrix of the given divisors; it may be degenerate.
inline IntMatrix gram_from_configuration(const CurveConfiguration& cfg, const std::vector<OrbitDivisor>& divisors) {
  IntMatrix c(divisors.size(), cfg.size());
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    auto v = divisor_vector(cfg, divisors[i]);
    for (std::size_t j = 0; j < cfg.size(); ++j) c(i, j) = v[j];
  }
  return c * cfg.intersection_matrix() * c.transpose();
}

// One divisor per orbit of nodes, ordered by smallest node index.
inline std::vector<OrbitDivisor> orbit_sums(const CurveConfiguration& cfg, const ConfigAutomorphism& a) {
  std::vector<OrbitDivisor> out;
  std::set<int> seen;
  for (const auto& n : cfg.nodes()) {
    if (seen.count(n.id)) continue;
    OrbitDivisor d;
    int cur = n.id;
    do {
      d.nodes.push_back(cur);
      seen.insert(cur);
      cur = a.image(cur);
    } while (cur != n.id);
    std::sort(d.nodes.begin(), d.nodes.end(),
              [&](int x, int y) { return cfg.index_of(x) < cfg.index_of(y); });
    out.push_back(std::move(d));
  }
  return out;
}

// Orbit divisors of coordinate and exceptional curves.
inline std::vector<OrbitDivisor> invariant_divisors(const CurveConfiguration& cfg, const ConfigAutomorphism& a) {
  std::vector<OrbitDivisor> out;
  for (auto& d : orbit_sums(cfg, a))
    if (cfg.node(d.nodes.front()).kind != CurveKind::Auxiliary) out.push_back(std::move(d));
  return out;
}

// 1 + number of orbits of exceptional curves.
inline std::size_t rank_via_orbits(const CurveConfiguration& cfg, const ConfigAutomorphism& a) {
  std::size_t k = 0;
  for (const auto& d : orbit_sums(cfg, a))
    if (cfg.node(d.nodes.front()).kind == CurveKind::Exceptional) ++k;
  return 1 + k;
}

// The lattice spanned by classes with Gram matrix gamma, i.e. Z^k modulo the
// radical. A class is identified with its row of gamma, so spans can be
// compared exactly through Hermite forms.
struct SpanLattice {
  std::size_t rank = 0;
  IntMatrix gamma;         // Gram matrix of the spanning classes
  IntMatrix row_hnf;       // Hermite basis of the row span of gamma
  IntMatrix combinations;  // basis classes as integer combinations of the spanning classes
  GramLattice lattice;     // Gram matrix on that basis
};

inline SpanLattice span_lattice(const IntMatrix& gamma) {
  SpanLattice s;
  s.gamma = gamma;
  HermiteForm h = hermite_form(gamma);
  s.rank = h.rank;
  s.row_hnf = h.basis();
  s.combinations = IntMatrix(h.rank, gamma.rows());
  for (std::size_t i = 0; i < h.rank; ++i)
    for (std::size_t j = 0; j < gamma.rows(); ++j) s.combinations(i, j) = h.transform(i, j);
  s.lattice = GramLattice(s.combinations * gamma * s.combinations.transpose());
  return s;
}

inline SpanLattice span_lattice(const CurveConfiguration& cfg, const std::vector<OrbitDivisor>& divisors) {
  return span_lattice(gram_from_configuration(cfg, divisors));
}

// Whether the classes indexed by subset span the same lattice as all of them.
inline bool spans_same_lattice(const IntMatrix& gamma, const std::vector<std::size_t>& subset) {
  const IntMatrix full = hermite_form(gamma).basis();
  const IntMatrix part = hermite_form(gamma.select_rows(subset)).basis();
  return full == part;
}

// Drops classes from the highest index down whenever the rest still spans
// the same lattice over Z, so low indices are preferred. The result is
// irredundant but may exceed the rank when no rank-sized subset generates.
inline std::vector<std::size_t> minimal_generators(const IntMatrix& gamma) {
  std::vector<std::size_t> keep(gamma.rows());
  std::iota(keep.begin(), keep.end(), 0);
  const IntMatrix full = hermite_form(gamma).basis();
  for (std::size_t i = gamma.rows(); i-- > 0;) {
    std::vector<std::size_t> trial;
    for (auto k : keep)
      if (k != i) trial.push_back(k);
    if (hermite_form(gamma.select_rows(trial)).basis() == full) keep = std::move(trial);
  }
  return keep;
}

// True when `subset` has exactly rank-many rows and spans the same lattice.
inline bool is_generating_basis(const IntMatrix& gamma, const std::vector<std::size_t>& subset) {
  return subset.size() == hermite_form(gamma).rank && spans_same_lattice(gamma, subset);
}

inline std::vector<std::size_t> minimal_generators(const CurveConfiguration& cfg,
                                                   const std::vector<OrbitDivisor>& divisors) {
  return minimal_generators(gram_from_configuration(cfg, divisors));
}

struct InvariantLattice {
  GramLattice lattice;
  std::vector<OrbitDivisor> divisors;     // all invariant divisors
  std::vector<std::size_t> generators;    // indices into divisors
  bool generators_are_basis = false;      // lattice Gram is on `generators`
};

inline InvariantLattice invariant_lattice(const CurveConfiguration& cfg, const ConfigAutomorphism& a) {
  InvariantLattice out;
  out.divisors = invariant_divisors(cfg, a);
  const IntMatrix gamma = gram_from_configuration(cfg, out.divisors);
  const SpanLattice span = span_lattice(gamma);
  const std::size_t expected = rank_via_orbits(cfg, a);
  if (span.rank != expected)
    throw RankDeficiency("orbit divisors span rank " + std::to_string(span.rank) + ", orbit count gives " +
                         std::to_string(expected));
  out.generators = minimal_generators(gamma);
  if (out.generators.size() == span.rank) {
    out.generators_are_basis = true;
    out.lattice = GramLattice(gamma.submatrix(out.generators, out.generators));
  } else {
    out.lattice = span.lattice;
  }
  return out;
}

// Embeds the span of `inner` into the span of `outer` (both node divisors)
// as an AmbientSublattice of the outer span lattice.
inline AmbientSublattice embed_span(const CurveConfiguration& cfg, const std::vector<OrbitDivisor>& inner,
                                    const std::vector<OrbitDivisor>& outer) {
  const SpanLattice outer_span = span_lattice(cfg, outer);
  // Intersection vectors of inner classes against the outer classes.
  IntMatrix co(outer.size(), cfg.size()), ci(inner.size(), cfg.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    auto v = divisor_vector(cfg, outer[i]);
    for (std::size_t j = 0; j < cfg.size(); ++j) co(i, j) = v[j];
  }
  for (std::size_t i = 0; i < inner.size(); ++i) {
    auto v = divisor_vector(cfg, inner[i]);
    for (std::size_t j = 0; j < cfg.size(); ++j) ci(i, j) = v[j];
  }
  const IntMatrix w = ci * cfg.intersection_matrix() * co.transpose();
  // Coordinates w.r.t. the outer Hermite basis, whose rows are the images of
  // outer_span.combinations.
  IntMatrix coords(inner.size(), outer_span.rank);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    auto x = integer_coordinates(outer_span.row_hnf, w.row(i));
    if (!x) throw NotASublattice("class " + inner[i].label() + " is not in the outer span");
    for (std::size_t j = 0; j < outer_span.rank; ++j) coords(i, j) = (*x)[j];
  }
  IntMatrix basis = hermite_form(coords).basis();
  return AmbientSublattice{outer_span.lattice, std::move(basis)};
}

}  // namespace k3m
