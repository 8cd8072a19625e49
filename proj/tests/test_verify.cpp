#include <cstdlib>
#include <set>

#include <gtest/gtest.h>

#include "k3mirror/verify.hpp"

using namespace k3m;

namespace {

std::filesystem::path data_dir() {
  const char* env = std::getenv("K3MIRROR_DATA");
  return env ? env : K3MIRROR_DEFAULT_DATA;
}

const DataSet& data() {
  static const DataSet d = load_data(data_dir());
  return d;
}

bool all_pass(const LineReport& r) {
  for (const auto& c : r.checks)
    if (c.status != Status::Pass) return false;
  return !r.checks.empty();
}

std::string failures(const LineReport& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (c.status != Status::Pass) s += c.key + " (" + c.computed + " vs " + c.expected + ") ";
  return s;
}

json table_json(int order, const json& lines) { return json{{"order", order}, {"lines", lines}}; }

json minimal_line(int line, const json& dual) {
  return json{{"line", line},
              {"rank", 10},
              {"dual", dual},
              {"weights", {1, 1, 1, 1}},
              {"degree", 4},
              {"polynomial", "x^4+y^4+z^4+w^4"},
              {"group", {{"quotient", json::array()}, {"generators", json::array()}}},
              {"form", "w_{2,2}^1"}};
}

}  // namespace

TEST(LoadTable, LineCounts) {
  EXPECT_EQ(data().tables.at(4).lines.size(), 89u);
  EXPECT_EQ(data().tables.at(8).lines.size(), 37u);
  EXPECT_EQ(data().tables.at(12).lines.size(), 28u);
  for (const auto& [n, t] : data().tables)
    for (const auto& l : t.lines) EXPECT_EQ(t.at(l.dual_line()).dual_line(), l.line) << l.subject();
}

TEST(LoadTable, RejectsDanglingDualAndDuplicates) {
  EXPECT_THROW(parse_table(table_json(4, json::array({minimal_line(1, 2)}))), SchemaError);
  EXPECT_THROW(parse_table(table_json(4, json::array({minimal_line(1, "self"), minimal_line(1, "self")}))),
               SchemaError);
  const Table ok = parse_table(table_json(4, json::array({minimal_line(2, 1), minimal_line(1, 2)})));
  EXPECT_EQ(ok.lines.front().line, 1);
  EXPECT_FALSE(parse_table(table_json(4, json::array({minimal_line(1, "self")}))).lines[0].dual.has_value());
}

TEST(VerifyLine, LineTwelvePasses) {
  const auto& l = data().tables.at(4).at(12);
  const auto r = verify_line(l);
  EXPECT_TRUE(all_pass(r)) << failures(r);
}

TEST(VerifyLine, WrongDegreeFailsWeights) {
  auto l = data().tables.at(4).at(12);
  l.degree = 9;
  const auto r = verify_line(l);
  TableReport t{{r}};
  ASSERT_NE(t.find("n4/line12/weights"), nullptr);
  EXPECT_EQ(t.find("n4/line12/weights")->status, Status::Fail);
}

TEST(VerifyLine, SidecarGroupOnLineEightySeven) {
  const auto& l = data().tables.at(4).at(87);
  EXPECT_TRUE(l.group.from_sidecar);
  ASSERT_TRUE(l.group.generators.has_value());
  const auto m = build_model(l);
  ASSERT_TRUE(m.group_ok);
  EXPECT_EQ(quotient_invariants(m.g, m.j), l.group.quotient);
}

TEST(VerifyMirrorPair, Examples) {
  const auto& t = data().tables.at(4);
  for (auto [a, b] : {std::pair{12, 78}, {37, 37}, {1, 85}}) {
    const auto r = verify_mirror_pair(t.at(a), t.at(b));
    EXPECT_TRUE(all_pass(r)) << a << "-" << b << ": " << failures(r);
  }
}

TEST(VerifyMirrorPair, DetectsBrokenForm) {
  const auto& t = data().tables.at(4);
  auto l = t.at(78);
  l.form = "w_{2,2}^{1}+w_{2,2}^{5}";
  const auto r = verify_mirror_pair(t.at(12), l);
  EXPECT_FALSE(all_pass(r));
}

TEST(EquivalenceClasses, RankFourAndRankOneRelations) {
  const auto& t = data().tables.at(4);
  const auto models = build_models(t);
  const auto& cf = data().classes.at(4);
  const auto* rank4 = cf.find("rank4");
  ASSERT_NE(rank4, nullptr);
  for (const auto& rel : rank4->relations) {
    const auto r = verify_relation(t, models, *rank4, rel);
    EXPECT_TRUE(all_pass(r)) << r.subject << ": " << failures(r);
  }
  const auto* rank1 = cf.find("rank1");
  ASSERT_NE(rank1, nullptr);
  EXPECT_EQ(rank1->members, (std::vector<int>{1, 2, 3, 4, 5}));
  const auto rep = verify_equivalence_classes(t, models, cf, [](const EquivalenceClass& c) { return c.name == "rank1"; });
  EXPECT_EQ(rep.count(Status::Fail), 0u) << rep.to_text();
  EXPECT_GT(rep.num_checks(), 4u);
}

TEST(EquivalenceClasses, RelationOutsideClassFails) {
  const auto& t = data().tables.at(4);
  const auto models = build_models(t);
  const auto* rank4 = data().classes.at(4).find("rank4");
  const auto r = verify_relation(t, models, *rank4, ClassRelation{"deform", 12, 14, std::nullopt, false});
  EXPECT_FALSE(all_pass(r));
}

TEST(Nol, RankOneLatticeAndFaultInjection) {
  const auto& l = data().tables.at(4).at(1);
  EXPECT_TRUE(all_pass(verify_nol(l, named_lattice("<4>"))));
  // U(2) has rank 2 and proper overlattices; it must not pass as a rank-2 class.
  auto two = data().tables.at(12).at(data().classes.at(12).find("rank2")->members.front());
  EXPECT_TRUE(all_pass(verify_nol(two, named_lattice("U"))));
  const auto bad = verify_nol(two, rescale(named_lattice("U"), 2));
  TableReport t{{bad}};
  EXPECT_EQ(t.find(two.subject() + "/nol/no-proper-overlattice")->status, Status::Fail);
}

TEST(Exceptional, LineTwelveCasePasses) {
  for (const auto& c : data().cases) {
    if (c.name != "line12_rank4") continue;
    const auto& t = data().tables.at(4);
    const auto m = build_model(t.at(12));
    const auto r = verify_exceptional(c, &t.at(12), &m);
    EXPECT_TRUE(all_pass(r)) << failures(r);
    return;
  }
  FAIL() << "line12_rank4 case missing";
}

TEST(KnownDiscrepancies, FailBecomesWarnAndPassBecomesStale) {
  TableReport t;
  LineReport r{"x", {}};
  r.add("bad", false, "1", "2");
  r.add("good", true, "1", "1");
  r.add("other", false, "1", "2");
  t.reports.push_back(r);
  apply_known_discrepancies(t, {{"x/bad", "documented", "erratum"}, {"x/good", "old note", "erratum"}});
  EXPECT_EQ(t.find("x/bad")->status, Status::Warn);
  EXPECT_EQ(t.find("x/bad")->citation, "documented");
  EXPECT_EQ(t.find("x/other")->status, Status::Fail);
  ASSERT_NE(t.find("known-discrepancies/stale/x/good"), nullptr);
  EXPECT_EQ(t.find("known-discrepancies/stale/x/good")->status, Status::Fail);
}

TEST(RunAll, EmptyDirectoryIsAnError) {
  const auto tmp = std::filesystem::temp_directory_path() / "k3mirror_empty_data";
  std::filesystem::create_directories(tmp);
  EXPECT_THROW(run_all(tmp), Error);
  EXPECT_THROW(run_all(tmp / "missing"), SchemaError);
}

TEST(RunAll, OrderFilterAndLineFilter) {
  RunOptions opt;
  opt.order = 8;
  const auto r = run_all(data(), opt);
  std::set<std::string> lines;
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.subject.rfind("n8/", 0) == 0 || rep.subject.rfind("case/", 0) == 0 ||
                  rep.subject == "known-discrepancies",
              true)
        << rep.subject;
    if (rep.subject.rfind("n8/line", 0) == 0) lines.insert(rep.subject);
  }
  EXPECT_EQ(lines.size(), 37u);
  RunOptions one;
  one.order = 4;
  one.line = 12;
  const auto r12 = run_all(data(), one);
  EXPECT_NE(r12.find("n4/line12/weights"), nullptr);
  EXPECT_NE(r12.find("n4/pair12-78/rank-sum"), nullptr);
  EXPECT_EQ(r12.count(Status::Fail), 0u) << r12.to_text();
  one.line = 500;
  EXPECT_THROW(run_all(data(), one), SchemaError);
}

TEST(RunAll, FullRunHasOnlyCitedWarnings) {
  const auto r = run_all(data());
  EXPECT_EQ(r.count(Status::Fail), 0u) << r.to_text();
  std::set<std::string> cats;
  for (const auto* c : r.with_status(Status::Warn)) {
    EXPECT_FALSE(c->citation.empty()) << c->key;
    for (const auto& k : data().known)
      if (k.key == c->key) cats.insert(k.category);
  }
  EXPECT_EQ(cats, (std::set<std::string>{"alignment", "erratum", "line-20-63", "symbol"}));
  EXPECT_EQ(r.count(Status::Warn), data().known.size());
  EXPECT_EQ(r.to_json()["summary"]["fail"].get<int>(), 0);
}
