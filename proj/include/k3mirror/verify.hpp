#pragma once

// Table ingestion and the verification harness: per-line checks, mirror
// pairs, equivalence classes, overlattice-free classes and the curated curve
// configurations. Every check has a stable key; failures whose key is listed
// in the known-discrepancy file are downgraded to WARN with its citation.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveconfig.hpp"
#include "errors.hpp"
#include "invertible_poly.hpp"
#include "lattice.hpp"
#include "quadform.hpp"
#include "symmetry_groups.hpp"

namespace k3m {

using json = nlohmann::json;

enum class Status { Pass, Warn, Fail };

inline std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Warn: return "WARN";
    case Status::Fail: return "FAIL";
  }
  return "?";
}

struct Check {
  std::string key;  // "n4/line12/weights"
  Status status = Status::Pass;
  std::string computed, expected;
  std::string citation;  // set on WARN
};

struct LineReport {
  std::string subject;  // "n4/line12"
  std::vector<Check> checks;

  Status status() const {
    Status s = Status::Pass;
    for (const auto& c : checks) s = std::max(s, c.status);
    return s;
  }
  // Records a raw outcome; known discrepancies are applied later.
  void add(const std::string& name, bool ok, std::string computed = {}, std::string expected = {}) {
    checks.push_back(Check{subject + "/" + name, ok ? Status::Pass : Status::Fail, std::move(computed),
                           std::move(expected), {}});
  }
};

struct TableReport {
  std::vector<LineReport> reports;

  std::size_t count(Status s) const {
    std::size_t n = 0;
    for (const auto& r : reports)
      for (const auto& c : r.checks) n += c.status == s;
    return n;
  }
  std::size_t num_checks() const {
    std::size_t n = 0;
    for (const auto& r : reports) n += r.checks.size();
    return n;
  }
  std::vector<const Check*> with_status(Status s) const {
    std::vector<const Check*> out;
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        if (c.status == s) out.push_back(&c);
    return out;
  }
  const Check* find(const std::string& key) const {
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        if (c.key == key) return &c;
    return nullptr;
  }
  void append(TableReport other) {
    for (auto& r : other.reports) reports.push_back(std::move(r));
  }

  std::string to_text() const {
    std::ostringstream os;
    for (const auto& r : reports) {
      os << status_name(r.status()) << "  " << r.subject << " (" << r.checks.size() << " checks)\n";
      for (const auto& c : r.checks) {
        if (c.status == Status::Pass) continue;
        os << "    " << status_name(c.status) << " " << c.key;
        if (!c.computed.empty() || !c.expected.empty())
          os << ": computed " << c.computed << ", expected " << c.expected;
        os << "\n";
        if (!c.citation.empty()) os << "      see: " << c.citation << "\n";
      }
    }
    os << "summary: " << reports.size() << " subjects, " << num_checks() << " checks, " << count(Status::Pass)
       << " PASS, " << count(Status::Warn) << " WARN, " << count(Status::Fail) << " FAIL\n";
    return os.str();
  }

  json to_json() const {
    json out;
    out["summary"] = {{"subjects", reports.size()},
                      {"checks", num_checks()},
                      {"pass", count(Status::Pass)},
                      {"warn", count(Status::Warn)},
                      {"fail", count(Status::Fail)}};
    out["reports"] = json::array();
    for (const auto& r : reports) {
      json jr{{"subject", r.subject}, {"status", status_name(r.status())}, {"checks", json::array()}};
      for (const auto& c : r.checks) {
        json jc{{"key", c.key}, {"status", status_name(c.status)}};
        if (!c.computed.empty()) jc["computed"] = c.computed;
        if (!c.expected.empty()) jc["expected"] = c.expected;
        if (!c.citation.empty()) jc["citation"] = c.citation;
        jr["checks"].push_back(std::move(jc));
      }
      out["reports"].push_back(std::move(jr));
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Data model

struct GroupSpec {
  std::vector<std::int64_t> quotient;                   // invariant factors of G/J
  std::optional<std::vector<std::string>> generators;   // G/J generators, (Q/Z)^4 text
  bool from_sidecar = false;
};

struct TableLine {
  int order = 0;
  int line = 0;
  int rank = 0;
  std::optional<int> dual;  // nullopt means "self"
  std::vector<std::int64_t> weights;
  std::int64_t degree = 0;
  std::string polynomial;
  GroupSpec group;
  std::string form;
  bool star = false, exceptional = false, nol = false;
  std::optional<int> belcastro;
  std::optional<std::vector<std::size_t>> transpose_perm;  // position of each transpose variable in the dual
  std::string note;

  int dual_line() const { return dual.value_or(line); }
  std::string subject() const { return "n" + std::to_string(order) + "/line" + std::to_string(line); }
};

struct Table {
  int order = 0;
  std::vector<TableLine> lines;

  const TableLine* find(int line) const {
    for (const auto& l : lines)
      if (l.line == line) return &l;
    return nullptr;
  }
  const TableLine& at(int line) const {
    if (auto* l = find(line)) return *l;
    throw SchemaError("order " + std::to_string(order) + " table has no line " + std::to_string(line));
  }
};

namespace detail {

inline json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw SchemaError("missing data file " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(p.string() + ": " + e.what());
  }
}

template <class T>
T field(const json& j, const char* name, const std::string& where) {
  if (!j.contains(name)) throw SchemaError(where + ": missing field '" + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + ": bad field '" + name + "': " + e.what());
  }
}

inline std::string perm_string(const std::vector<std::size_t>& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

template <class T>
std::string list_string(const std::vector<T>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

inline bool is_identity(const std::vector<std::size_t>& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

inline std::vector<std::size_t> identity_perm(std::size_t m) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// Applies perm (perm[i] = new position of coordinate i) to a vector.
template <class T>
std::vector<T> permute_vector(const std::vector<T>& v, const std::vector<std::size_t>& perm) {
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[perm[i]] = v[i];
  return out;
}

// Sorted monomial rows of the polynomial after renaming variables by perm.
inline std::vector<std::vector<int>> permuted_monomials(const ExponentMatrix& a, const std::vector<std::size_t>& perm) {
  std::vector<std::vector<int>> rows;
  for (const auto& r : a.rows()) rows.push_back(permute_vector(r, perm));
  std::sort(rows.begin(), rows.end());
  return rows;
}

inline bool valid_perm(const std::vector<std::size_t>& p, std::size_t m) {
  if (p.size() != m) return false;
  std::vector<std::size_t> s = p;
  std::sort(s.begin(), s.end());
  return s == identity_perm(m);
}

}  // namespace detail

inline TableLine parse_table_line(const json& j, int order) {
  const std::string where = "order " + std::to_string(order) + " line " +
                            (j.contains("line") ? j["line"].dump() : std::string("?"));
  TableLine l;
  l.order = order;
  l.line = detail::field<int>(j, "line", where);
  l.rank = detail::field<int>(j, "rank", where);
  if (!j.contains("dual")) throw SchemaError(where + ": missing field 'dual'");
  if (j["dual"].is_string()) {
    if (j["dual"].get<std::string>() != "self") throw SchemaError(where + ": dual must be a number or \"self\"");
  } else {
    l.dual = detail::field<int>(j, "dual", where);
  }
  l.weights = detail::field<std::vector<std::int64_t>>(j, "weights", where);
  l.degree = detail::field<std::int64_t>(j, "degree", where);
  l.polynomial = detail::field<std::string>(j, "polynomial", where);
  l.form = detail::field<std::string>(j, "form", where);
  const json g = detail::field<json>(j, "group", where);
  l.group.quotient = detail::field<std::vector<std::int64_t>>(g, "quotient", where + " group");
  if (g.contains("generators")) l.group.generators = g["generators"].get<std::vector<std::string>>();
  l.group.from_sidecar = g.value("generators_from", std::string()) == "sidecar";
  l.star = j.value("star", false);
  l.exceptional = j.value("exceptional", false);
  l.nol = j.value("nol", false);
  if (j.contains("belcastro")) l.belcastro = j["belcastro"].get<int>();
  if (j.contains("transpose_perm")) {
    auto p = j["transpose_perm"].get<std::vector<std::size_t>>();
    if (!detail::valid_perm(p, l.weights.size())) throw SchemaError(where + ": transpose_perm is not a permutation");
    l.transpose_perm = std::move(p);
  }
  l.note = j.value("note", std::string());
  return l;
}

// Validates duplicates and dual references; "self" duals are taken literally.
inline Table parse_table(const json& doc) {
  Table t;
  t.order = detail::field<int>(doc, "order", "table");
  for (const auto& e : detail::field<json>(doc, "lines", "table")) t.lines.push_back(parse_table_line(e, t.order));
  std::set<int> seen;
  for (const auto& l : t.lines)
    if (!seen.insert(l.line).second)
      throw SchemaError("order " + std::to_string(t.order) + ": duplicate line " + std::to_string(l.line));
  for (const auto& l : t.lines)
    if (l.dual && !seen.count(*l.dual))
      throw SchemaError("order " + std::to_string(t.order) + " line " + std::to_string(l.line) +
                        ": dual " + std::to_string(*l.dual) + " does not exist");
  std::sort(t.lines.begin(), t.lines.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
  return t;
}

inline Table load_table(const std::filesystem::path& path) { return parse_table(detail::read_json(path)); }

struct SidecarEntry {
  std::string polynomial;
  std::map<int, int> lines;  // order -> line
  std::vector<std::int64_t> quotient;
  std::vector<std::string> generators;
};

inline std::vector<SidecarEntry> load_sidecar(const std::filesystem::path& path) {
  const json doc = detail::read_json(path);
  std::vector<SidecarEntry> out;
  for (const auto& p : detail::field<json>(doc, "polynomials", "sidecar")) {
    const auto poly = detail::field<std::string>(p, "polynomial", "sidecar");
    for (const auto& e : detail::field<json>(p, "entries", "sidecar " + poly)) {
      SidecarEntry s;
      s.polynomial = poly;
      const json lines = detail::field<json>(e, "lines", "sidecar " + poly);
      for (const auto& [k, v] : lines.items())
        s.lines[std::stoi(k)] = v.get<int>();
      s.quotient = detail::field<std::vector<std::int64_t>>(e, "quotient", "sidecar " + poly);
      s.generators = detail::field<std::vector<std::string>>(e, "generators", "sidecar " + poly);
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Fills group generators of lines that defer to the sidecar table.
inline void apply_sidecar(Table& t, const std::vector<SidecarEntry>& sidecar) {
  for (const auto& s : sidecar) {
    auto it = s.lines.find(t.order);
    if (it == s.lines.end()) continue;
    const TableLine* found = t.find(it->second);
    if (!found) throw SchemaError("sidecar refers to missing line " + std::to_string(it->second));
    TableLine& l = const_cast<TableLine&>(*found);
    if (parse_polynomial(l.polynomial) != parse_polynomial(s.polynomial))
      throw SchemaError("sidecar polynomial " + s.polynomial + " differs from line " + std::to_string(l.line));
    if (l.group.generators && !l.group.from_sidecar)
      throw SchemaError("line " + std::to_string(l.line) + " has generators both inline and in the sidecar");
    l.group.generators = s.generators;
    l.group.from_sidecar = true;
  }
  for (const auto& l : t.lines)
    if (l.group.from_sidecar && !l.group.generators)
      throw SchemaError("line " + std::to_string(l.line) + " defers to the sidecar but no entry lists it");
}

// ---------------------------------------------------------------------------
// Known discrepancies

struct KnownDiscrepancy {
  std::string key;
  std::string citation;
  std::string category;
};

inline std::vector<KnownDiscrepancy> load_known_discrepancies(const std::filesystem::path& path) {
  const json doc = detail::read_json(path);
  std::vector<KnownDiscrepancy> out;
  for (const auto& e : detail::field<json>(doc, "entries", "known discrepancies")) {
    KnownDiscrepancy k{detail::field<std::string>(e, "key", "known discrepancy"),
                       detail::field<std::string>(e, "citation", "known discrepancy"),
                       e.value("category", std::string())};
    if (k.citation.empty()) throw SchemaError("known discrepancy " + k.key + " has no citation");
    out.push_back(std::move(k));
  }
  return out;
}

// Failing checks with a known key become WARN; a known key whose check ran
// and passed is reported as a stale entry (FAIL) so the list stays honest.
inline void apply_known_discrepancies(TableReport& report, const std::vector<KnownDiscrepancy>& known) {
  std::map<std::string, const KnownDiscrepancy*> by_key;
  for (const auto& k : known) by_key[k.key] = &k;
  LineReport stale{"known-discrepancies", {}};
  for (auto& r : report.reports)
    for (auto& c : r.checks) {
      auto it = by_key.find(c.key);
      if (it == by_key.end()) continue;
      if (c.status == Status::Fail) {
        c.status = Status::Warn;
        c.citation = it->second->citation;
      } else {
        stale.checks.push_back(Check{"known-discrepancies/stale/" + c.key, Status::Fail, "check passed",
                                     "documented discrepancy", it->second->citation});
      }
    }
  if (!stale.checks.empty()) report.reports.push_back(std::move(stale));
}

// ---------------------------------------------------------------------------
// Per-line analysis shared by several checks

struct LineModel {
  InvertiblePolynomial w;
  SymmetryGroup j, sl, g;
  bool group_ok = false;  // generators parsed and the group is well formed
  std::optional<FiniteQuadraticForm> form;
  std::optional<std::size_t> x0;
};

inline SymmetryGroup group_from_generators(const InvertiblePolynomial& w, const std::vector<std::string>& gens) {
  auto all = j_subgroup(w).generators();
  for (const auto& s : gens) all.push_back(parse_symmetry(s));
  return SymmetryGroup::generated_by(w.num_variables(), std::move(all));
}

inline LineModel build_model(const TableLine& l) {
  LineModel m{parse_polynomial(l.polynomial), {}, {}, {}, false, std::nullopt, std::nullopt};
  m.j = j_subgroup(m.w);
  m.sl = sl_subgroup(m.w);
  m.x0 = pure_power_variable(m.w.exponent_matrix(), l.order);
  if (l.group.generators) {
    try {
      m.g = group_from_generators(m.w, *l.group.generators);
      m.group_ok = true;
    } catch (const Error&) {
    }
  }
  try {
    m.form = parse_form_expression(l.form);
  } catch (const Error&) {
  }
  return m;
}

using ModelMap = std::map<int, LineModel>;

inline ModelMap build_models(const Table& t) {
  ModelMap out;
  for (const auto& l : t.lines) out.emplace(l.line, build_model(l));
  return out;
}

// ---------------------------------------------------------------------------
// Checks

inline LineReport verify_line(const TableLine& l, const LineModel& m) {
  LineReport r{l.subject(), {}};
  const WeightSystem ws = weight_system(m.w);
  r.add("weights", ws.weights == l.weights && ws.degree == l.degree, ws.to_string(),
        WeightSystem{l.weights, l.degree}.to_string());
  r.add("calabi-yau", ws.is_calabi_yau(), ws.to_string(), "degree = sum of weights");
  r.add("x0-shape", m.x0.has_value(), m.x0 ? m.w.variables()[*m.x0] : "none",
        "a variable occurring only as a pure power of exponent " + std::to_string(l.order));
  r.add("group-generators", m.group_ok,
        l.group.generators ? (m.group_ok ? "parsed" : "unparsable") : "missing",
        l.group.from_sidecar ? "sidecar generators" : "inline generators");
  if (m.group_ok) {
    const auto q = quotient_invariants(m.g, m.j);
    r.add("group-quotient", q == l.group.quotient, invariants_to_string(q), invariants_to_string(l.group.quotient));
    r.add("group-bounds", m.j.is_subgroup_of(m.g) && m.g.is_subgroup_of(m.sl),
          "|J|=" + std::to_string(m.j.order()) + " |G|=" + std::to_string(m.g.order()) +
              " |SL|=" + std::to_string(m.sl.order()),
          "J <= G <= SL");
  }
  r.add("form-parse", m.form.has_value(), m.form ? m.form->group().to_string() : "parse error", l.form);
  return r;
}

inline LineReport verify_line(const TableLine& l) { return verify_line(l, build_model(l)); }

// Dual-reference involution over a table.
inline LineReport verify_dual_involution(const Table& t) {
  LineReport r{"n" + std::to_string(t.order) + "/duals", {}};
  for (const auto& l : t.lines) {
    const TableLine& d = t.at(l.dual_line());
    r.add("involution:" + std::to_string(l.line), d.dual_line() == l.line,
          std::to_string(l.line) + " -> " + std::to_string(d.line) + " -> " + std::to_string(d.dual_line()),
          std::to_string(l.line));
  }
  return r;
}

// One direction of the transpose checks, i -> j.
inline void transpose_checks(LineReport& r, const TableLine& li, const LineModel& mi, const TableLine& lj,
                             const LineModel& mj) {
  const std::string tag = ":" + std::to_string(li.line);
  const InvertiblePolynomial wt = transpose(mi.w);
  const auto perm = li.transpose_perm.value_or(detail::identity_perm(wt.num_variables()));
  const WeightSystem wst = weight_system(wt);
  const auto moved = detail::permute_vector(wst.weights, perm);
  r.add("transpose-weights" + tag, moved == lj.weights && wst.degree == lj.degree,
        WeightSystem{moved, wst.degree}.to_string() + " via " + detail::perm_string(perm),
        WeightSystem{lj.weights, lj.degree}.to_string());
  r.add("transpose-polynomial" + tag,
        detail::permuted_monomials(wt.exponent_matrix(), perm) ==
            detail::permuted_monomials(mj.w.exponent_matrix(), detail::identity_perm(wt.num_variables())),
        wt.to_string() + " via " + detail::perm_string(perm), mj.w.to_string());
  if (!mi.group_ok) return;
  const SymmetryGroup gt = dual_group(mi.g, mi.w);
  const auto q = quotient_invariants(gt, j_subgroup(wt));
  r.add("dual-quotient" + tag, q == lj.group.quotient, invariants_to_string(q),
        invariants_to_string(lj.group.quotient));
  if (!mj.group_ok) return;
  const SymmetryGroup moved_group = permute_coordinates(gt, perm);
  r.add("dual-group" + tag, moved_group == mj.g, moved_group.generators_string(), mj.g.generators_string());
  // The transpose of x0^n is x0^n; the alignment must keep it in place.
  if (mi.x0 && mj.x0)
    r.add("x0-preserved" + tag, perm[*mi.x0] == *mj.x0, mj.w.variables()[perm[*mi.x0]],
          mj.w.variables()[*mj.x0]);
}

inline LineReport verify_mirror_pair(const TableLine& li, const LineModel& mi, const TableLine& lj,
                                     const LineModel& mj) {
  const int a = std::min(li.line, lj.line), b = std::max(li.line, lj.line);
  LineReport r{"n" + std::to_string(li.order) + "/pair" + std::to_string(a) + "-" + std::to_string(b), {}};
  r.add("rank-sum", li.rank + lj.rank == 20, std::to_string(li.rank) + "+" + std::to_string(lj.rank), "20");
  if (mi.form && mj.form)
    r.add("form-negation", is_isomorphic(*mi.form, negate(*mj.form)), li.form + " vs -(" + lj.form + ")",
          "isomorphic");
  else
    r.add("form-negation", false, "unparsable form", "isomorphic");
  transpose_checks(r, li, mi, lj, mj);
  if (li.line != lj.line) transpose_checks(r, lj, mj, li, mi);
  return r;
}

inline LineReport verify_mirror_pair(const TableLine& li, const TableLine& lj) {
  return verify_mirror_pair(li, build_model(li), lj, build_model(lj));
}

// Lines with the same polynomial whose groups differ by a variable permutation
// that preserves the polynomial and fixes x0 describe the same K3 surface with
// the same automorphism, so their declared ranks and forms must agree.
inline LineReport verify_x0_equivalence(const Table& t, const ModelMap& models) {
  LineReport r{"n" + std::to_string(t.order) + "/x0-equivalence", {}};
  for (std::size_t i = 0; i < t.lines.size(); ++i)
    for (std::size_t k = i + 1; k < t.lines.size(); ++k) {
      const TableLine &a = t.lines[i], &b = t.lines[k];
      const LineModel &ma = models.at(a.line), &mb = models.at(b.line);
      if (!ma.group_ok || !mb.group_ok || !ma.x0 || ma.w != mb.w || ma.x0 != mb.x0) continue;
      const std::size_t m = ma.w.num_variables();
      const auto target = detail::permuted_monomials(ma.w.exponent_matrix(), detail::identity_perm(m));
      auto perm = detail::identity_perm(m);
      std::optional<std::vector<std::size_t>> hit;
      do {
        if (perm[*ma.x0] != *ma.x0) continue;
        if (detail::permuted_monomials(ma.w.exponent_matrix(), perm) != target) continue;
        if (permute_coordinates(ma.g, perm) == mb.g) {
          hit = perm;
          break;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (!hit) continue;
      const bool same = a.rank == b.rank && ma.form && mb.form && is_isomorphic(*ma.form, *mb.form);
      r.add("lines" + std::to_string(a.line) + "-" + std::to_string(b.line), same,
            "ranks " + std::to_string(a.rank) + " and " + std::to_string(b.rank) + ", groups related by " +
                detail::perm_string(*hit),
            "equal ranks and forms");
    }
  return r;
}

// Equivalence classes ------------------------------------------------------

struct ClassRelation {
  std::string kind;  // "iso" or "deform"
  int a = 0, b = 0;
  std::optional<std::vector<std::size_t>> perm;
  bool supplied = false;
};

struct EquivalenceClass {
  std::string name;
  std::vector<int> members;
  std::vector<ClassRelation> relations;
  bool nol = false;
};

struct ClassFile {
  int order = 0;
  std::vector<EquivalenceClass> classes;
  const EquivalenceClass* find(const std::string& name) const {
    for (const auto& c : classes)
      if (c.name == name) return &c;
    return nullptr;
  }
  const EquivalenceClass* class_of(int line) const {
    for (const auto& c : classes)
      if (std::count(c.members.begin(), c.members.end(), line)) return &c;
    return nullptr;
  }
};

inline ClassFile load_class_file(const std::filesystem::path& path) {
  const json doc = detail::read_json(path);
  ClassFile f;
  f.order = detail::field<int>(doc, "order", path.string());
  for (const auto& c : detail::field<json>(doc, "classes", path.string())) {
    EquivalenceClass e;
    e.name = detail::field<std::string>(c, "name", path.string());
    e.members = detail::field<std::vector<int>>(c, "members", e.name);
    e.nol = c.value("nol", false);
    for (const auto& rj : c.value("relations", json::array())) {
      ClassRelation rel;
      rel.kind = detail::field<std::string>(rj, "kind", e.name);
      if (rel.kind != "iso" && rel.kind != "deform") throw SchemaError(e.name + ": unknown relation " + rel.kind);
      auto ab = detail::field<std::vector<int>>(rj, "lines", e.name);
      if (ab.size() != 2) throw SchemaError(e.name + ": a relation joins two lines");
      rel.a = ab[0];
      rel.b = ab[1];
      if (rj.contains("perm")) rel.perm = rj["perm"].get<std::vector<std::size_t>>();
      rel.supplied = rj.value("supplied", false);
      e.relations.push_back(std::move(rel));
    }
    f.classes.push_back(std::move(e));
  }
  return f;
}

inline LineReport verify_relation(const Table& t, const ModelMap& models, const EquivalenceClass& cls,
                                  const ClassRelation& rel) {
  LineReport r{"n" + std::to_string(t.order) + "/" + cls.name + "/" + rel.kind + std::to_string(rel.a) + "-" +
                   std::to_string(rel.b),
               {}};
  const bool in_class = std::count(cls.members.begin(), cls.members.end(), rel.a) &&
                        std::count(cls.members.begin(), cls.members.end(), rel.b);
  r.add("members", in_class, std::to_string(rel.a) + "," + std::to_string(rel.b), "members of " + cls.name);
  if (!in_class || !t.find(rel.a) || !t.find(rel.b)) return r;
  const LineModel &ma = models.at(rel.a), &mb = models.at(rel.b);
  if (!ma.group_ok || !mb.group_ok) {
    r.add("groups-available", false, "missing group", "both groups");
    return r;
  }
  const std::size_t m = ma.w.num_variables();
  const auto perm = rel.perm.value_or(detail::identity_perm(m));
  if (!detail::valid_perm(perm, m)) {
    r.add("perm-valid", false, detail::perm_string(perm), "a permutation");
    return r;
  }
  SymmetryGroup ga, gb;
  WeightSystem wa, wb;
  if (rel.kind == "iso") {
    ga = dual_group(ma.g, ma.w);
    gb = dual_group(mb.g, mb.w);
    wa = weight_system(transpose(ma.w));
    wb = weight_system(transpose(mb.w));
  } else {
    ga = ma.g;
    gb = mb.g;
    wa = weight_system(ma.w);
    wb = weight_system(mb.w);
  }
  const auto moved = detail::permute_vector(wa.weights, perm);
  const std::string what = rel.kind == "iso" ? "transpose weights" : "weights";
  r.add("weights", moved == wb.weights && wa.degree == wb.degree,
        what + " " + WeightSystem{moved, wa.degree}.to_string(), wb.to_string());
  const SymmetryGroup pg = permute_coordinates(ga, perm);
  r.add(rel.kind == "iso" ? "dual-groups-equal" : "groups-equal", groups_equal(pg, gb), pg.generators_string(),
        gb.generators_string());
  // A permutation allowance is a manual alignment and is surfaced.
  if (rel.perm && !detail::is_identity(*rel.perm))
    r.add("identity-alignment", false, "aligned by " + detail::perm_string(*rel.perm), "identity");
  return r;
}

inline TableReport verify_equivalence_classes(const Table& t, const ModelMap& models, const ClassFile& f,
                                              const std::function<bool(const EquivalenceClass&)>& keep = {}) {
  TableReport out;
  const std::string base = "n" + std::to_string(t.order);
  if (!keep) {
    LineReport part{base + "/classes", {}};
    std::map<int, int> seen;
    for (const auto& c : f.classes)
      for (int m : c.members) ++seen[m];
    bool ok = true;
    std::string bad;
    for (const auto& l : t.lines)
      if (seen[l.line] != 1) {
        ok = false;
        bad += " " + std::to_string(l.line);
      }
    for (const auto& [line, n] : seen)
      if (!t.find(line)) {
        ok = false;
        bad += " " + std::to_string(line) + "?";
      }
    part.add("partition", ok, ok ? "every line in one class" : "problem lines:" + bad, "a partition");
    out.reports.push_back(std::move(part));
  }
  for (const auto& c : f.classes) {
    if (keep && !keep(c)) continue;
    LineReport r{base + "/" + c.name, {}};
    // Shared invariants.
    const TableLine* first = t.find(c.members.front());
    bool same = first != nullptr;
    for (int m : c.members) {
      const TableLine* l = t.find(m);
      if (!l || !first) {
        same = false;
        continue;
      }
      const auto &fa = models.at(first->line).form, &fb = models.at(m).form;
      if (l->rank != first->rank || !fa || !fb || !is_isomorphic(*fa, *fb)) same = false;
    }
    // Class names carry the rank, e.g. "rank10d".
    if (c.name.rfind("rank", 0) == 0 && first) {
      const int named = std::atoi(c.name.c_str() + 4);
      r.add("named-rank", named == first->rank, std::to_string(first->rank), std::to_string(named));
    }
    r.add("shared-rank-and-form", same, same ? "rank " + std::to_string(first->rank) : "members differ",
          "one rank and form");
    if (!c.nol) {
      // Union-find over the claimed relations.
      std::map<int, int> parent;
      for (int m : c.members) parent[m] = m;
      std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
      for (const auto& rel : c.relations)
        if (parent.count(rel.a) && parent.count(rel.b)) parent[root(rel.a)] = root(rel.b);
      std::set<int> roots;
      for (int m : c.members) roots.insert(root(m));
      r.add("connected", roots.size() == 1, std::to_string(roots.size()) + " component(s)", "1 component");
    }
    bool rep = c.nol;
    for (int m : c.members)
      if (const TableLine* l = t.find(m)) rep = rep || l->star || l->exceptional || l->nol;
    r.add("representative", rep, rep ? "present" : "none", "a starred, exceptional or overlattice-free member");
    out.reports.push_back(std::move(r));
    for (const auto& rel : c.relations) out.reports.push_back(verify_relation(t, models, c, rel));
  }
  return out;
}

// Overlattice-free classes ---------------------------------------------------

struct NolEntry {
  int order = 0;
  std::string class_name;
  std::string lattice;
};

inline std::vector<NolEntry> load_nol_entries(const std::filesystem::path& path) {
  const json doc = detail::read_json(path);
  std::vector<NolEntry> out;
  for (const auto& e : detail::field<json>(doc, "entries", "nol lattices"))
    out.push_back(NolEntry{detail::field<int>(e, "order", "nol"), detail::field<std::string>(e, "class", "nol"),
                           detail::field<std::string>(e, "lattice", "nol")});
  return out;
}

// L must have the line's rank, signature (1, r-1), the line's form and no
// proper even overlattice.
inline LineReport verify_nol(const TableLine& line, const GramLattice& l, const std::string& subject) {
  LineReport r{subject, {}};
  r.add("rank", static_cast<int>(l.rank()) == line.rank, std::to_string(l.rank()), std::to_string(line.rank));
  const Signature sig = signature(l);
  r.add("signature", sig == Signature{1, line.rank - 1}, sig.to_string(),
        Signature{1, line.rank - 1}.to_string());
  r.add("even", l.is_even(), l.is_even() ? "even" : "odd", "even");
  if (!l.is_even()) return r;
  const FiniteQuadraticForm q = discriminant_form(l);
  bool iso = false;
  try {
    iso = is_isomorphic(q, parse_form_expression(line.form));
  } catch (const Error&) {
  }
  r.add("form", iso, q.to_string(), line.form);
  const auto over = overlattices(l);
  r.add("no-proper-overlattice", over.size() == 1, std::to_string(over.size() - 1) + " proper", "0 proper");
  return r;
}

inline LineReport verify_nol(const TableLine& line, const GramLattice& l) {
  return verify_nol(line, l, line.subject() + "/nol");
}

// Curated configurations -------------------------------------------------------

struct CaseAutomorphism {
  std::string name;
  int order = 1;
  std::string cycles;
  std::string power_of;
  int exponent = 1;
};

struct ExceptionalCase {
  std::string name;
  int order = 0, line = 0;
  std::vector<std::vector<std::string>> group_generators;  // alternative printed generator lists
  CurveConfiguration cfg;
  std::vector<CaseAutomorphism> automorphisms;
  json expected;
};

inline ExceptionalCase load_case(const std::filesystem::path& path) {
  const json doc = detail::read_json(path);
  const std::string where = path.filename().string();
  ExceptionalCase c;
  c.name = detail::field<std::string>(doc, "name", where);
  const json line = detail::field<json>(doc, "line", where);
  c.order = detail::field<int>(line, "order", where);
  c.line = detail::field<int>(line, "line", where);
  if (doc.contains("group_generators"))
    c.group_generators = doc["group_generators"].get<std::vector<std::vector<std::string>>>();
  std::vector<CurveNode> nodes;
  for (const auto& n : detail::field<json>(doc, "nodes", where))
    nodes.push_back(CurveNode{detail::field<int>(n, "id", where), n.value("label", std::string()),
                              detail::field<int>(n, "genus", where),
                              parse_curve_kind(detail::field<std::string>(n, "kind", where))});
  std::vector<CurveEdge> edges;
  for (const auto& e : detail::field<json>(doc, "edges", where)) {
    auto v = e.get<std::vector<int>>();
    if (v.size() != 2 && v.size() != 3) throw SchemaError(where + ": an edge is [a, b] or [a, b, multiplicity]");
    edges.push_back(CurveEdge{v[0], v[1], v.size() == 3 ? v[2] : 1});
  }
  c.cfg = CurveConfiguration(std::move(nodes), std::move(edges));
  for (const auto& a : detail::field<json>(doc, "automorphisms", where))
    c.automorphisms.push_back(CaseAutomorphism{detail::field<std::string>(a, "name", where),
                                               detail::field<int>(a, "order", where), a.value("cycles", ""),
                                               a.value("power_of", ""), a.value("exponent", 1)});
  c.expected = doc.value("expected", json::object());
  return c;
}

namespace detail {

inline std::vector<OrbitDivisor> classes_from_json(const json& j) {
  std::vector<OrbitDivisor> out;
  for (const auto& c : j) out.push_back(OrbitDivisor{c.get<std::vector<int>>()});
  return out;
}

inline std::vector<std::size_t> one_based(const std::vector<int>& v) {
  std::vector<std::size_t> out;
  for (int x : v) out.push_back(static_cast<std::size_t>(x - 1));
  return out;
}

inline std::string index_string(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + 1);
  return s + "}";
}

// Row space of the node-level intersection vectors of the divisors.
inline IntMatrix class_span(const CurveConfiguration& cfg, const std::vector<OrbitDivisor>& divs) {
  IntMatrix c(divs.size(), cfg.size());
  for (std::size_t i = 0; i < divs.size(); ++i) {
    auto v = divisor_vector(cfg, divs[i]);
    for (std::size_t j = 0; j < cfg.size(); ++j) c(i, j) = v[j];
  }
  return hermite_form(c * cfg.intersection_matrix()).basis();
}

inline ConfigAutomorphism power(const ConfigAutomorphism& a, int e, const CurveConfiguration& cfg,
                                const std::string& name) {
  std::map<int, int> images;
  for (const auto& n : cfg.nodes()) {
    int x = n.id;
    for (int k = 0; k < e; ++k) x = a.image(x);
    images[n.id] = x;
  }
  return ConfigAutomorphism(name, std::move(images));
}

}  // namespace detail

// A symbol that fails to parse is a failed check rather than an error.
inline void printed_form_check(LineReport& r, const std::string& name, const FiniteQuadraticForm& q,
                               const std::string& text) {
  std::string got;
  bool ok = false;
  try {
    ok = is_isomorphic(q, parse_form_expression(text));
    got = ok ? "isomorphic" : "not isomorphic to " + q.to_string();
  } catch (const Error& e) {
    got = e.what();
  }
  r.add(name, ok, got, text);
}

inline LineReport verify_exceptional(const ExceptionalCase& c, const TableLine* line = nullptr,
                                     const LineModel* model = nullptr) {
  LineReport r{"case/" + c.name, {}};
  const json& ex = c.expected;
  std::map<std::string, ConfigAutomorphism> autos;
  for (const auto& a : c.automorphisms) {
    try {
      ConfigAutomorphism x = ConfigAutomorphism::from_cycles(a.name, a.cycles, c.cfg);
      r.add("automorphism:" + a.name, a.order % static_cast<int>(x.order()) == 0,
            "permutation order " + std::to_string(x.order()), "divides " + std::to_string(a.order));
      if (!a.power_of.empty()) {
        auto base = autos.find(a.power_of);
        bool ok = base != autos.end();
        if (ok) {
          ConfigAutomorphism p = detail::power(base->second, a.exponent, c.cfg, a.name);
          for (const auto& n : c.cfg.nodes()) ok = ok && p.image(n.id) == x.image(n.id);
        }
        r.add("automorphism:" + a.name + ":power", ok, ok ? "matches" : "differs",
              a.power_of + "^" + std::to_string(a.exponent));
      }
      autos.emplace(a.name, std::move(x));
    } catch (const Error& e) {
      r.add("automorphism:" + a.name, false, e.what(), "a valid automorphism");
    }
  }
  // The printed group generators must give the table line's group.
  if (line && model && model->group_ok) {
    for (std::size_t i = 0; i < c.group_generators.size(); ++i) {
      SymmetryGroup g = group_from_generators(model->w, c.group_generators[i]);
      std::string text;
      for (const auto& s : c.group_generators[i]) text += s;
      r.add("group-text:" + std::to_string(i + 1), g == model->g, text,
            "group of line " + std::to_string(line->line) + " " + model->g.generators_string());
    }
  }
  auto sigma_it = autos.find("sigma4");
  if (sigma_it == autos.end()) sigma_it = autos.begin();
  if (sigma_it == autos.end()) return r;
  const ConfigAutomorphism& sigma = sigma_it->second;

  // Lattice spanned by every non-auxiliary curve.
  if (ex.contains("curves_rank") || ex.contains("curves_form")) {
    std::vector<OrbitDivisor> all;
    for (const auto& n : c.cfg.nodes())
      if (n.kind != CurveKind::Auxiliary) all.push_back(OrbitDivisor{{n.id}});
    const SpanLattice full = span_lattice(gram_from_configuration(c.cfg, all));
    if (ex.contains("curves_rank"))
      r.add("curves-rank", full.rank == ex["curves_rank"].get<std::size_t>(), std::to_string(full.rank),
            std::to_string(ex["curves_rank"].get<int>()));
    const FiniteQuadraticForm fq = discriminant_form(full.lattice);
    if (ex.contains("curves_form")) printed_form_check(r, "curves-form", fq, ex["curves_form"].get<std::string>());
    if (ex.contains("curves_form_printed"))
      printed_form_check(r, "curves-form-printed", fq, ex["curves_form_printed"].get<std::string>());
  }

  // Invariant lattice L_B.
  const auto orbit_classes = invariant_divisors(c.cfg, sigma);
  const auto lb_classes = ex.contains("lb_classes") ? detail::classes_from_json(ex["lb_classes"]) : orbit_classes;
  bool classes_ok = true;
  for (const auto& d : lb_classes) {
    const auto orbits = orbit_sums(c.cfg, sigma);
    std::vector<int> sorted = d.nodes;
    std::sort(sorted.begin(), sorted.end());
    bool found = false;
    for (const auto& o : orbits) {
      std::vector<int> os = o.nodes;
      std::sort(os.begin(), os.end());
      found = found || os == sorted;
    }
    classes_ok = classes_ok && found && c.cfg.node(d.nodes.front()).kind != CurveKind::Auxiliary;
  }
  r.add("lb-classes-are-orbits", classes_ok, classes_ok ? "yes" : "no", "orbit sums of non-auxiliary curves");
  r.add("lb-classes-span", detail::class_span(c.cfg, lb_classes) == detail::class_span(c.cfg, orbit_classes),
        std::to_string(lb_classes.size()) + " listed classes",
        "same span as all " + std::to_string(orbit_classes.size()) + " invariant orbit sums");
  const IntMatrix gamma = gram_from_configuration(c.cfg, lb_classes);
  const SpanLattice lb = span_lattice(gamma);
  const std::size_t formula = rank_via_orbits(c.cfg, sigma);
  r.add("lb-rank", lb.rank == formula && (!ex.contains("lb_rank") || ex["lb_rank"].get<std::size_t>() == lb.rank),
        std::to_string(lb.rank),
        "orbit formula " + std::to_string(formula) +
            (ex.contains("lb_rank") ? ", curated " + std::to_string(ex["lb_rank"].get<int>()) : ""));
  if (line) r.add("lb-rank-vs-table", static_cast<int>(lb.rank) == line->rank, std::to_string(lb.rank),
                  "line " + std::to_string(line->line) + " rank " + std::to_string(line->rank));
  const Signature sig = signature(lb.lattice);
  r.add("lb-signature", sig == Signature{1, static_cast<int>(lb.rank) - 1}, sig.to_string(),
        Signature{1, static_cast<int>(lb.rank) - 1}.to_string());
  const FiniteQuadraticForm q = discriminant_form(lb.lattice);
  if (ex.contains("lb_form")) {
    r.add("lb-form", is_isomorphic(q, parse_form_expression(ex["lb_form"].get<std::string>())), q.to_string(),
          ex["lb_form"].get<std::string>());
  }
  if (line && model && model->form)
    r.add("lb-form-vs-table", is_isomorphic(q, *model->form), q.to_string(), line->form);
  if (ex.contains("lb_form_printed")) printed_form_check(r, "lb-form-printed", q, ex["lb_form_printed"].get<std::string>());
  const int gs = gauss_signature(q);
  const int want = ((2 - static_cast<int>(lb.rank)) % 8 + 8) % 8;
  r.add("lb-gauss-signature", gs == want, std::to_string(gs), std::to_string(want) + " = 2 - rank mod 8");
  if (ex.contains("lb_lattice")) {
    const GramLattice named = parse_lattice_expression(ex["lb_lattice"].get<std::string>());
    r.add("lb-lattice-form", is_isomorphic(discriminant_form(named), q) && named.rank() == lb.rank,
          ex["lb_lattice"].get<std::string>(), "rank " + std::to_string(lb.rank) + " and " + q.to_string());
  }
  const auto mg = minimal_generators(gamma);
  r.add("lb-greedy-generators", mg.size() == lb.rank && is_generating_basis(gamma, mg), detail::index_string(mg),
        "a generating basis of " + std::to_string(lb.rank) + " classes");
  if (ex.contains("lb_generators")) {
    const auto idx = detail::one_based(ex["lb_generators"].get<std::vector<int>>());
    bool in_range = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return i < gamma.rows(); });
    r.add("lb-curated-generators", in_range && is_generating_basis(gamma, idx), detail::index_string(idx),
          "a generating basis");
  }

  // S(tau) and the primitivity chain.
  auto tau_it = autos.find("tau");
  if (tau_it == autos.end()) return r;
  const auto stau_classes = orbit_sums(c.cfg, tau_it->second);
  const IntMatrix sgamma = gram_from_configuration(c.cfg, stau_classes);
  const SpanLattice stau = span_lattice(sgamma);
  if (ex.contains("stau_rank"))
    r.add("stau-rank", stau.rank == ex["stau_rank"].get<std::size_t>(), std::to_string(stau.rank),
          std::to_string(ex["stau_rank"].get<int>()));
  if (ex.value("stau_two_elementary", false)) {
    const auto inv = discriminant_group(stau.lattice).group.invariants();
    const bool two = std::all_of(inv.begin(), inv.end(), [](std::int64_t d) { return d == 2; });
    r.add("stau-two-elementary", two && inv.size() == ex.value("stau_discriminant_length", inv.size()),
          FiniteAbelianGroup(inv).to_string(),
          "(Z/2)^" + std::to_string(ex.value("stau_discriminant_length", 0)));
  }
  const auto smg = minimal_generators(sgamma);
  r.add("stau-greedy-generators", smg.size() == stau.rank && is_generating_basis(sgamma, smg),
        detail::index_string(smg), "a generating basis of " + std::to_string(stau.rank) + " classes");
  std::vector<std::size_t> stau_gens = smg;
  if (ex.contains("stau_generators")) {
    const auto idx = detail::one_based(ex["stau_generators"].get<std::vector<int>>());
    bool in_range = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return i < sgamma.rows(); });
    const bool ok = in_range && is_generating_basis(sgamma, idx);
    r.add("stau-curated-generators", ok, detail::index_string(idx), "a generating basis");
    if (in_range) stau_gens = idx;
  }
  if (ex.contains("primitive")) {
    std::vector<OrbitDivisor> gen_classes;
    for (auto i : stau_gens) gen_classes.push_back(stau_classes[i]);
    bool ok = false;
    std::string got;
    try {
      const AmbientSublattice inner = embed_span(c.cfg, lb_classes, stau_classes);
      const AmbientSublattice outer = embed_span(c.cfg, gen_classes, stau_classes);
      ok = chain_primitivity(inner, outer) == ex["primitive"].get<bool>() && is_primitive(inner);
      got = ok ? "primitive" : "not primitive";
    } catch (const std::exception& e) {
      got = e.what();
    }
    r.add("lb-primitive-in-stau", ok, got, ex["primitive"].get<bool>() ? "primitive" : "not primitive");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Driver

struct RunOptions {
  std::optional<int> order;
  std::optional<int> line;
};

struct DataSet {
  std::map<int, Table> tables;
  std::map<int, ClassFile> classes;
  std::vector<NolEntry> nol;
  std::vector<ExceptionalCase> cases;
  std::vector<KnownDiscrepancy> known;
};

inline DataSet load_data(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw SchemaError("data directory " + dir.string() + " does not exist");
  DataSet d;
  const auto sidecar = load_sidecar(dir / "sidecar_groups.json");
  for (int n : {4, 8, 12}) {
    Table t = load_table(dir / ("order" + std::to_string(n) + ".json"));
    if (t.order != n) throw SchemaError("order" + std::to_string(n) + ".json declares order " + std::to_string(t.order));
    apply_sidecar(t, sidecar);
    d.tables.emplace(n, std::move(t));
    ClassFile f = load_class_file(dir / ("classes_n" + std::to_string(n) + ".json"));
    if (f.order != n) throw SchemaError("class file order mismatch for n=" + std::to_string(n));
    d.classes.emplace(n, std::move(f));
  }
  d.nol = load_nol_entries(dir / "nol_lattices.json");
  const auto cdir = dir / "configs";
  if (!std::filesystem::is_directory(cdir)) throw SchemaError("missing directory " + cdir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(cdir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) d.cases.push_back(load_case(p));
  d.known = load_known_discrepancies(dir / "known_discrepancies.json");
  return d;
}

inline TableReport run_all(const DataSet& d, const RunOptions& opt = {}) {
  TableReport out;
  for (const auto& [n, t] : d.tables) {
    if (opt.order && *opt.order != n) continue;
    if (opt.line && !t.find(*opt.line)) throw SchemaError("order " + std::to_string(n) + " has no line " +
                                                          std::to_string(*opt.line));
    const ModelMap models = build_models(t);
    auto wanted = [&](int line) { return !opt.line || *opt.line == line; };
    for (const auto& l : t.lines)
      if (wanted(l.line)) out.reports.push_back(verify_line(l, models.at(l.line)));
    if (!opt.line) out.reports.push_back(verify_dual_involution(t));
    for (const auto& l : t.lines) {
      const TableLine& d2 = t.at(l.dual_line());
      if (d2.line < l.line) continue;
      if (!wanted(l.line) && !wanted(d2.line)) continue;
      out.reports.push_back(verify_mirror_pair(l, models.at(l.line), d2, models.at(d2.line)));
    }
    if (!opt.line) out.reports.push_back(verify_x0_equivalence(t, models));
    const ClassFile& cf = d.classes.at(n);
    std::function<bool(const EquivalenceClass&)> keep;
    if (opt.line) keep = [&](const EquivalenceClass& c) {
      return std::count(c.members.begin(), c.members.end(), *opt.line) > 0;
    };
    out.append(verify_equivalence_classes(t, models, cf, keep));
    for (const auto& e : d.nol) {
      if (e.order != n) continue;
      const EquivalenceClass* c = cf.find(e.class_name);
      const std::string subject = "n" + std::to_string(n) + "/" + e.class_name + "/nol";
      if (!c) {
        LineReport r{subject, {}};
        r.add("class-exists", false, "missing", e.class_name);
        out.reports.push_back(std::move(r));
        continue;
      }
      if (keep && !keep(*c)) continue;
      out.reports.push_back(verify_nol(t.at(c->members.front()), parse_lattice_expression(e.lattice), subject));
    }
    for (const auto& c : d.cases) {
      if (c.order != n || !wanted(c.line)) continue;
      const TableLine* line = t.find(c.line);
      out.reports.push_back(verify_exceptional(c, line, line ? &models.at(c.line) : nullptr));
    }
  }
  apply_known_discrepancies(out, d.known);
  return out;
}

inline TableReport run_all(const std::filesystem::path& dir, const RunOptions& opt = {}) {
  return run_all(load_data(dir), opt);
}

}  // namespace k3m
