#include <doctest.h>

#include <array>

#include "namelogic/equivalence.hpp"
#include "namelogic/model_io.hpp"
#include "support/support.hpp"

using namespace namelogic;
using namelogic::testing::FormulaShape;
using namelogic::testing::figure1;

namespace {

KripkeModel loop_model(const std::string& state, const std::string& agent) {
  KripkeModel m({state}, {agent}, {"n"});
  m.add_edge(0, 0, 0);
  m.assign_name(0, 0, 0);
  m.declare_proposition("p");
  return m;
}

// Both points see the same E/S behaviour, but w's agent c covers x and y at
// once while nobody at w' does.
std::pair<KripkeModel, KripkeModel> hennessy_milner_gap() {
  KripkeModel left({"w", "x", "y"}, {"a", "b", "c"}, {"n"});
  left.add_edge(0, 0, 0);
  left.add_edge(0, 0, 1);
  left.add_edge(1, 0, 0);
  left.add_edge(1, 0, 2);
  for (std::size_t v : {0, 1, 2}) left.add_edge(2, 0, v);
  for (std::size_t a : {0, 1, 2}) left.assign_name(0, 0, a);
  left.declare_proposition("p");
  left.declare_proposition("q");
  left.set_true("p", 1);
  left.set_true("q", 2);

  KripkeModel right({"w'", "x'", "y'"}, {"a'", "b'"}, {"n"});
  right.add_edge(0, 0, 0);
  right.add_edge(0, 0, 1);
  right.add_edge(1, 0, 0);
  right.add_edge(1, 0, 2);
  for (std::size_t a : {0, 1}) right.assign_name(0, 0, a);
  right.declare_proposition("p");
  right.declare_proposition("q");
  right.set_true("p", 1);
  right.set_true("q", 2);
  return {left, right};
}

bool distinguishes(const KripkeModel& m1, std::size_t w1, const KripkeModel& m2, std::size_t w2,
                   const Formula& f) {
  const std::array<KripkeModel, 2> parts{m1, m2};
  const KripkeModel joined = disjoint_union(parts);
  return check(joined, w1, f).value && !check(joined, m1.state_count() + w2, f).value;
}

KripkeModel random(std::uint64_t seed, std::size_t states) {
  RandomModelParams p;
  p.states = states;
  p.agents = 2;
  p.names = 2;
  p.propositions = {"p"};
  p.mode = seed % 2 ? RandomMode::Epistemic : RandomMode::General;
  p.seed = seed;
  return random_model(p);
}

}  // namespace

TEST_CASE("frame morphisms") {
  const KripkeModel x = loop_model("x", "a"), x2 = loop_model("x'", "b");
  CHECK(check_frame_morphism(x, x2, StateMap{0}, true).ok());

  const KripkeModel m = figure1();
  StateMap id = {0, 1, 2, 3};
  CHECK(check_frame_morphism(m, m, id, true).ok());

  // b sees {w, v} at w, but the target has no agent at s whose set is {s, t}.
  KripkeModel src({"w", "v"}, {"a", "b"}, {"n"});
  src.add_edge(0, 0, 0);
  src.add_edge(1, 0, 0);
  src.add_edge(1, 0, 1);
  src.add_edge(1, 1, 1);
  src.assign_name(0, 0, 0);
  src.assign_name(0, 0, 1);
  src.assign_name(1, 0, 1);
  KripkeModel dst({"s", "t"}, {"c"}, {"n"});
  dst.add_edge(0, 0, 0);
  dst.add_edge(0, 1, 1);
  dst.assign_name(0, 0, 0);
  dst.assign_name(1, 0, 0);
  const auto bad = check_frame_morphism(src, dst, StateMap{0, 1}, false);
  CHECK_FALSE(bad.ok());
  CHECK(bad.violations[0].condition == "there");
}

TEST_CASE("bisimulation clauses") {
  const KripkeModel m = figure1();
  CHECK(check_bisimulation(m, m, graph_relation(StateMap{0, 1, 2, 3})).ok());

  KripkeModel named = loop_model("x", "a");
  KripkeModel unnamed({"y"}, {"a"}, {"n"});
  unnamed.add_edge(0, 0, 0);
  unnamed.declare_proposition("p");
  const auto report = check_bisimulation(unnamed, named, BisimRelation{{0, 0}});
  CHECK_FALSE(report.ok());
  bool clause2 = false;
  for (const auto& v : report.violations) clause2 = clause2 || v.condition == "2";
  CHECK(clause2);
}

TEST_CASE("greatest bisimulation") {
  const KripkeModel m = figure1();
  const BisimRelation self = greatest_bisimulation(m, m);
  for (std::size_t w = 0; w < 4; ++w) CHECK(self.count({w, w}));
  CHECK(check_bisimulation(m, m, self).ok());
  CHECK_FALSE(self.count({m.state_index("w"), m.state_index("v")}));

  const std::array<KripkeModel, 2> parts{m, m};
  const KripkeModel doubled = disjoint_union(parts);
  const BisimRelation b = greatest_bisimulation(m, doubled);
  for (std::size_t w = 0; w < 4; ++w) {
    CHECK(b.count({w, w}));
    CHECK(b.count({w, w + 4}));
  }

  CHECK(bisimilar(m, 0, m, 0));
  CHECK(bisimilar(loop_model("x", "a"), 0, loop_model("x'", "b"), 0));
  CHECK_FALSE(bisimilar(m, m.state_index("w"), m, m.state_index("s")));
}

TEST_CASE("greatest bisimulation is a fixpoint and contains every bisimulation") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const KripkeModel m1 = random(seed, 1 + seed % 4);
    const KripkeModel m2 = random(seed + 1000, 1 + seed % 3);
    const BisimRelation b = greatest_bisimulation(m1, m2);
    CHECK(check_bisimulation(m1, m2, b).ok());
    // Dropping nothing: every pair survives one more refinement round, i.e.
    // re-running on the result is stable; and all single pairs that form a
    // bisimulation on their own are included.
    for (std::size_t x = 0; x < m1.state_count(); ++x)
      for (std::size_t y = 0; y < m2.state_count(); ++y)
        if (check_bisimulation(m1, m2, BisimRelation{{x, y}}).ok()) CHECK(b.count({x, y}));
    const BisimRelation again = greatest_bisimulation(m1, m2);
    CHECK(again == b);
  }
}

TEST_CASE("distinguishing formulas") {
  const KripkeModel m = figure1();
  const auto f = distinguishing_formula(m, m.state_index("w"), m, m.state_index("s"));
  REQUIRE(f);
  CHECK(*f == atom("p"));

  KripkeModel empty({"y"}, {"a"}, {"n"});
  empty.add_edge(0, 0, 0);
  empty.declare_proposition("p");
  const auto g = distinguishing_formula(loop_model("x", "a"), 0, empty, 0);
  REQUIRE(g);
  CHECK(*g == someone("n", verum()));
  CHECK(distinguishes(loop_model("x", "a"), 0, empty, 0, *g));

  // Separated only at depth two: x is named in the first model, not in the second.
  auto chain = [](bool named_at_x) {
    KripkeModel c({"w", "x"}, {"a"}, {"n"});
    c.add_edge(0, 0, 0);
    c.add_edge(0, 0, 1);
    c.add_edge(0, 1, 1);
    c.assign_name(0, 0, 0);
    if (named_at_x) c.assign_name(1, 0, 0);
    c.declare_proposition("p");
    return c;
  };
  const KripkeModel deep1 = chain(true), deep2 = chain(false);
  const auto h = distinguishing_formula(deep1, 0, deep2, 0);
  REQUIRE(h);
  CHECK(h->modal_depth() >= 2);
  CHECK(distinguishes(deep1, 0, deep2, 0, *h));
  CHECK_FALSE(distinguishing_formula(deep1, 0, deep1, 0));
}

TEST_CASE("non-bisimilar points without a distinguishing formula") {
  const auto [left, right] = hennessy_milner_gap();
  CHECK_FALSE(bisimilar(left, 0, right, 0));
  CHECK_FALSE(distinguishing_formula(left, 0, right, 0));
  FormulaShape shape;
  shape.depth = 3;
  CHECK(modal_equiv_corpus(left, 0, right, 0, testing::random_corpus(41, 400, shape)));
  // The classes still separate x from y.
  const auto classes = modal_equivalence_classes(left);
  CHECK(classes[1] != classes[2]);
}

TEST_CASE("distinguishing formulas on random non-bisimilar pairs") {
  std::size_t found = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const KripkeModel m1 = random(seed, 1 + seed % 4);
    const KripkeModel m2 = random(seed + 7000, 1 + (seed / 4) % 4);
    for (std::size_t x = 0; x < m1.state_count(); ++x) {
      for (std::size_t y = 0; y < m2.state_count(); ++y) {
        if (bisimilar(m1, x, m2, y)) continue;
        const auto f = distinguishing_formula(m1, x, m2, y);
        if (!f) continue;
        ++found;
        CHECK(distinguishes(m1, x, m2, y, *f));
        CHECK_FALSE(contains_op(*f, Op::Common));
        CHECK_FALSE(contains_op(*f, Op::Distributed));
      }
    }
  }
  CHECK(found > 100);
}

TEST_CASE("bisimilar points agree on random formulas") {
  FormulaShape shape;
  shape.names = {"n", "m"};
  shape.props = {"p"};
  shape.depth = 3;
  shape.common = true;
  const auto corpus = testing::random_corpus(42, 120, shape);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const KripkeModel m = random(seed, 2 + seed % 3);
    const std::array<KripkeModel, 2> parts{m, random(seed + 50, 2)};
    const KripkeModel joined = disjoint_union(parts);
    const StateMap inc = union_inclusion(parts, 0);
    for (std::size_t w = 0; w < m.state_count(); ++w) {
      REQUIRE(bisimilar(m, w, joined, inc[w]));
      CHECK(modal_equiv_corpus(m, w, joined, inc[w], corpus));
    }
  }
  const KripkeModel m = figure1();
  CHECK_FALSE(modal_equiv_corpus(m, m.state_index("w"), m, m.state_index("u"), {atom("p")}));
  CHECK(modal_equiv_corpus(m, 0, m, 0, {}));
}

TEST_CASE("graphs of morphisms and functional bisimulations") {
  FormulaShape shape;
  shape.names = {"n", "m"};
  shape.props = {"p"};
  shape.depth = 3;
  shape.common = true;
  const auto corpus = testing::random_corpus(43, 60, shape);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const KripkeModel m = random(seed, 2 + seed % 4);
    const KripkeModel sub = generated_submodel(m, seed % m.state_count());
    const StateMap f = map_by_state_ids(sub, m);
    REQUIRE(check_frame_morphism(sub, m, f, true).ok());
    const BisimRelation g = graph_relation(f);
    CHECK(check_bisimulation(sub, m, g).ok());
    const auto back = as_function(g, sub.state_count());
    REQUIRE(back);
    CHECK(*back == f);
    for (const auto& phi : corpus)
      for (std::size_t w = 0; w < sub.state_count(); ++w)
        CHECK(check(sub, w, phi).value == check(m, f[w], phi).value);

    // A functional bisimulation gives back a morphism.
    const BisimRelation self = greatest_bisimulation(m, m);
    StateMap pick(m.state_count());
    for (std::size_t w = 0; w < m.state_count(); ++w) pick[w] = w;
    CHECK(check_frame_morphism(m, m, *as_function(graph_relation(pick), m.state_count()), true).ok());
    CHECK(self.count({0, 0}));
  }
}

TEST_CASE("frame validity moves along surjective morphisms") {
  // The two-copy union maps onto the original; validity on the union transfers.
  const std::vector<Formula> formulas = {parse_formula("S[n] p -> p"), parse_formula("E[n] p -> p"),
                                         parse_formula("S[n] p -> S[n] S[n] p"),
                                         parse_formula("E[n] (p -> !p) -> E[n] p -> E[n] !p")};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const KripkeModel m = random(seed, 1 + seed % 3);
    const std::array<KripkeModel, 2> parts{m, m};
    const KripkeModel joined = disjoint_union(parts);
    StateMap onto(joined.state_count());
    for (std::size_t w = 0; w < onto.size(); ++w) onto[w] = w % m.state_count();
    REQUIRE(check_frame_morphism(joined, m, onto, false).ok());
    for (const auto& f : formulas)
      if (frame_valid(joined, f)) CHECK(frame_valid(m, f));
  }
}

TEST_CASE("relations and maps serialize") {
  const KripkeModel m = figure1();
  const BisimRelation b = greatest_bisimulation(m, m);
  CHECK(relation_from_json(relation_to_json(m, m, b), m, m) == b);
  const StateMap f = {0, 1, 2, 3};
  CHECK(map_from_json(map_to_json(m.states(), m.states(), f), m, m) == f);
  CHECK(kripke_from_json(to_json(m)) == m);
}
