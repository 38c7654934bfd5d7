#include <doctest.h>

#include <array>

#include "namelogic/error.hpp"
#include "namelogic/kripke.hpp"
#include "support/support.hpp"

using namespace namelogic;
using namelogic::testing::FormulaShape;
using namelogic::testing::figure1;
using namelogic::testing::naive_holds;

namespace {

bool holds(const KripkeModel& m, const char* state, const char* text) {
  return check(m, state, parse_formula(text)).value;
}

std::set<std::string> ids(const KripkeModel& m, const StateSet& s) {
  std::set<std::string> out;
  for (std::size_t w = 0; w < m.state_count(); ++w)
    if (s.test(w)) out.insert(m.states()[w]);
  return out;
}

KripkeModel single_state() {
  KripkeModel m({"x"}, {"a"}, {"n"});
  m.add_edge(0, 0, 0);
  m.assign_name(0, 0, 0);
  return m;
}

std::vector<KripkeModel> random_models(std::size_t count, std::uint64_t seed) {
  std::vector<KripkeModel> out;
  for (std::size_t k = 0; k < count; ++k) {
    RandomModelParams p;
    p.states = 1 + k % 5;
    p.agents = 1 + k % 3;
    p.names = 2;
    p.mode = k % 2 ? RandomMode::Epistemic : RandomMode::General;
    p.seed = seed + k;
    out.push_back(random_model(p));
  }
  return out;
}

}  // namespace

TEST_CASE("figure 1 judgments") {
  const KripkeModel m = figure1();
  CHECK(holds(m, "w", "S[n] p & !E[n] p"));
  CHECK(holds(m, "w", "!S[m] p & E[m] p & E[m] !p"));
  CHECK(holds(m, "u", "S[m] q & !S[m] S[m] q"));
  CHECK(holds(m, "s", "!S[n] p & !S[n] !S[n] p"));
  CHECK(holds(m, "w", "C[n] (p | q)"));
  CHECK_FALSE(holds(m, "v", "C[m] !q"));
}

TEST_CASE("distributed knowledge at figure 1's w") {
  const KripkeModel m = figure1();
  const TruthResult d = check(m, "w", parse_formula("D[n] (p & q)"));
  CHECK(d.value);
  REQUIRE(d.witness);
  CHECK(std::set<std::string>(d.witness->agents.begin(), d.witness->agents.end()) ==
        std::set<std::string>{"a", "b"});
  CHECK_FALSE(holds(m, "w", "S[n] (p & q)"));
  // Subset enumeration agrees.
  CHECK(naive_holds(m, 0, parse_formula("D[n] (p & q)")));
  CHECK_FALSE(naive_holds(m, 0, parse_formula("S[n] (p & q)")));
}

TEST_CASE("extensions") {
  const KripkeModel m = figure1();
  CHECK(ids(m, extension(m, atom("p"))) == std::set<std::string>{"w", "v"});
  CHECK(ids(m, extension(m, parse_formula("E[m] false"))) == std::set<std::string>{"w"});
  CHECK(extension(m, verum()).all());
  for (const char* t : {"S[n] p", "C[m] !q", "D[n] q", "E[n] S[m] q"}) {
    const Formula f = parse_formula(t);
    const StateSet ext = extension(m, f);
    for (std::size_t w = 0; w < m.state_count(); ++w) CHECK(ext.test(w) == check(m, w, f).value);
  }
}

TEST_CASE("witnesses re-verify") {
  const KripkeModel m = figure1();
  const TruthResult s = check(m, "w", parse_formula("S[n] p"));
  REQUIRE(s.witness);
  REQUIRE(s.witness->agents.size() == 1);
  const std::size_t a = m.agent_index(s.witness->agents[0]);
  CHECK(m.named(0, m.name_index("n")).test(a));
  CHECK((m.successors(a, 0) & ~m.truth_set("p")).none());

  const TruthResult c = check(m, "v", parse_formula("C[m] !q"));
  REQUIRE(c.witness);
  const auto& path = c.witness->path;
  REQUIRE(path.size() >= 2);
  CHECK(path.front() == "v");
  CHECK(m.truth_set("q").test(m.state_index(path.back())));
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const std::size_t a_i = m.agent_index(c.witness->agents[i]);
    const std::size_t x = m.state_index(path[i]);
    CHECK(m.named(x, m.name_index("m")).test(a_i));
    CHECK(m.successors(a_i, x).test(m.state_index(path[i + 1])));
  }
}

TEST_CASE("undeclared symbols are errors") {
  const KripkeModel m = figure1();
  CHECK_THROWS_AS(check(m, "zz", atom("p")), ModelError);
  CHECK_THROWS_AS(check(m, "w", atom("r")), ModelError);
  CHECK_THROWS_AS(check(m, "w", parse_formula("S[k] p")), ModelError);
  CHECK_THROWS_AS(check(m, "w", parse_formula("B[c;n] p")), ModelError);
}

TEST_CASE("validation modes") {
  const KripkeModel m = figure1();
  const auto lenient = validate_model(m, ValidationMode::Lenient);
  CHECK_FALSE(has_errors(lenient));
  REQUIRE(lenient.size() == 1);
  CHECK(lenient[0].severity == Severity::Warning);
  CHECK(has_errors(validate_model(m, ValidationMode::Strict)));

  const KripkeModel x = single_state();
  for (auto mode : {ValidationMode::Lenient, ValidationMode::Strict, ValidationMode::Epistemic})
    CHECK(validate_model(x, mode).empty());

  KripkeModel broken({"w", "v"}, {"a"}, {"n"});
  broken.add_edge(0, 0, 1);
  broken.assign_name(0, 0, 0);
  const auto d = validate_model(broken, ValidationMode::Lenient);
  CHECK(has_errors(d));
  CHECK(d[0].code.find("reflex") != std::string::npos);

  KripkeModel asym({"w", "v"}, {"a"}, {"n"});
  asym.add_edge(0, 0, 0);
  asym.add_edge(0, 0, 1);
  asym.add_edge(0, 1, 1);
  asym.assign_name(0, 0, 0);
  asym.assign_name(1, 0, 0);
  CHECK_FALSE(has_errors(validate_model(asym, ValidationMode::Lenient)));
  CHECK(has_errors(validate_model(asym, ValidationMode::Epistemic)));
}

TEST_CASE("frame validity") {
  KripkeModel x({"x"}, {"a"}, {"n"});
  x.add_edge(0, 0, 0);
  x.assign_name(0, 0, 0);
  CHECK(frame_valid(x, parse_formula("S[n] p -> p")));
  CHECK(frame_valid(x, parse_formula("p -> p")));

  // Named agent without its loop: the valuation p = {v} refutes at w.
  KripkeModel bad({"w", "v"}, {"a"}, {"n"});
  bad.add_edge(0, 0, 1);
  bad.assign_name(0, 0, 0);
  CHECK_FALSE(frame_valid(bad, parse_formula("S[n] p -> p")));
  const auto cm = frame_countermodel(bad, parse_formula("S[n] p -> p"));
  REQUIRE(cm);
  CHECK_FALSE(check(cm->model, cm->state, parse_formula("S[n] p -> p")).value);
  CHECK(frame_valid(bad, parse_formula("p -> p")));

  CHECK_THROWS_AS(frame_valid(figure1(), parse_formula("p & q & S[n] (p | q)"), 4), BudgetExceeded);
}

TEST_CASE("generated submodels and unions") {
  const KripkeModel m = figure1();
  CHECK(generated_submodel(m, 0).state_count() == 4);

  const KripkeModel x = single_state();
  CHECK(generated_submodel(x, 0) == x);

  const std::array<KripkeModel, 2> parts{x, x};
  const KripkeModel two = disjoint_union(parts);
  CHECK(two.state_count() == 2);
  CHECK(generated_submodel(two, 0).state_count() == 1);

  const std::array<KripkeModel, 2> fig_x{m, x};
  const KripkeModel joined = disjoint_union(fig_x);
  CHECK(joined.state_count() == 5);
  const StateMap inc = union_inclusion(fig_x, 0);
  for (const char* t : {"S[n] p & !E[n] p", "!S[m] p & E[m] p & E[m] !p", "C[n] (p | q)",
                        "C[m] !q", "S[m] q & !S[m] S[m] q"}) {
    const Formula f = parse_formula(t);
    for (std::size_t w = 0; w < m.state_count(); ++w)
      CHECK(check(m, w, f).value == check(joined, inc[w], f).value);
  }

  const std::array<KripkeModel, 1> one{m};
  const KripkeModel copy = disjoint_union(one);
  CHECK(copy.state_count() == m.state_count());
  CHECK(copy.states()[0] == "0:w");
}

TEST_CASE("random models") {
  RandomModelParams p;
  p.states = 1;
  p.agents = 1;
  p.names = 1;
  p.seed = 7;
  CHECK_FALSE(has_errors(validate_model(random_model(p), ValidationMode::Lenient)));

  p = RandomModelParams{};
  p.states = 4;
  p.agents = 2;
  p.names = 2;
  p.mode = RandomMode::Epistemic;
  p.seed = 1;
  const KripkeModel e = random_model(p);
  CHECK_FALSE(has_errors(validate_model(e, ValidationMode::Epistemic)));
  CHECK(random_model(p) == e);

  for (const auto& m : random_models(200, 300))
    CHECK_FALSE(has_errors(validate_model(m, ValidationMode::Lenient)));
}

TEST_CASE("relation closure from the model file") {
  const KripkeModel m = figure1();
  const std::size_t a = m.agent_index("a");
  CHECK(m.successors(a, m.state_index("w")).count() == 2);
  CHECK(m.successors(a, m.state_index("v")).test(m.state_index("w")));
}

TEST_CASE("evaluator agrees with the clause-by-clause oracle") {
  FormulaShape shape;
  shape.names = {"n", "m"};
  shape.depth = 3;
  shape.common = true;
  shape.distributed = true;
  const auto corpus = testing::random_corpus(21, 80, shape);
  for (const auto& m : random_models(60, 500)) {
    Evaluator eval(m);
    for (const auto& f : corpus)
      for (std::size_t w = 0; w < m.state_count(); ++w)
        REQUIRE(eval.holds(w, f) == naive_holds(m, w, f));
  }
}

TEST_CASE("semantic properties on random models") {
  FormulaShape shape;
  shape.depth = 2;
  const auto corpus = testing::random_corpus(22, 30, shape);
  for (const auto& m : random_models(80, 900)) {
    Evaluator eval(m);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Formula& phi = corpus[i];
      const Formula& psi = corpus[(i + 1) % corpus.size()];
      const StateSet& a = eval.extension(phi);
      const StateSet& b = eval.extension(psi);
      const bool included = (a & ~b).none();
      for (std::size_t w = 0; w < m.state_count(); ++w) {
        if (included) {
          CHECK((!eval.holds(w, someone("n", phi)) || eval.holds(w, someone("n", psi))));
          CHECK((!eval.holds(w, everyone("n", phi)) || eval.holds(w, everyone("n", psi))));
          CHECK((!eval.holds(w, common("n", phi)) || eval.holds(w, common("n", psi))));
          CHECK((!eval.holds(w, distributed("n", phi)) || eval.holds(w, distributed("n", psi))));
        }
        CHECK(eval.holds(w, everyone("n", phi & psi)) ==
              (eval.holds(w, everyone("n", phi)) && eval.holds(w, everyone("n", psi))));
        if (eval.holds(w, distributed("n", phi)) && eval.holds(w, distributed("n", psi)))
          CHECK(eval.holds(w, distributed("n", phi & psi)));
        if (m.named(w, 0).none()) {
          CHECK(eval.holds(w, everyone("n", phi)));
          CHECK_FALSE(eval.holds(w, someone("n", phi)));
          CHECK_FALSE(eval.holds(w, distributed("n", phi)));
        }
        if (eval.holds(w, common("n", phi))) {
          Formula ek = phi;
          for (std::size_t k = 1; k <= m.state_count(); ++k) {
            ek = everyone("n", ek);
            CHECK(eval.holds(w, ek));
          }
        }
        if (eval.holds(w, someone("n", phi))) {
          bool some = false;
          for (std::size_t a_i = 0; a_i < m.agent_count(); ++a_i)
            if (m.named(w, 0).test(a_i) && eval.holds(w, believes(m.agents()[a_i], "n", phi)))
              some = true;
          CHECK(some);
        }
      }
    }
  }
}
