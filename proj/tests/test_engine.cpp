#include <doctest.h>

#include <set>

#include "prodgen/engine.hpp"
#include "support/support.hpp"

using namespace prodgen;
using gil::Atom;

namespace {

std::vector<std::string> run(const std::string& grammar_text, const std::string& input_text,
                             GeneratorOptions opts = {}, const Registry* reg = nullptr) {
  static const Registry toy = testing::toy_registry();
  auto g = tgl::parse_grammar(grammar_text);
  Generator gen(g, reg ? *reg : toy, gil::parse_gil(input_text), std::move(opts));
  return testing::texts(gen.take(0));
}

std::string rule(const std::string& name, const std::string& cat, const std::string& body,
                 const std::string& test = "") {
  return "(DEFPRODUCTION \"" + name + "\" (:PRECOND (:CAT " + cat + " :TEST (" + test + ")) :ACTIONS (:TEMPLATE " +
         body + ")))\n";
}

using V = std::vector<std::string>;

}  // namespace

TEST_CASE("sample request") {
  auto g = testing::demo_grammar("meeting.tgl");
  Registry reg = testing::toy_registry();
  auto fs = testing::demo_input("appointment.gil");
  Generator gen(g, reg, fs);
  auto first = gen.next();
  REQUIRE(first);
  CHECK(first->text == "Prof. Zweig will Sie am Freitag treffen");
  CHECK(realize(*first->derivation, reg) == first->text);
  CHECK(first->derivation->applied_rules() ==
        V{"request", "S modal with infinitival VP", "NP title and surname", "VPinf with temp/loc adjuncts",
          "NP addressee pronoun", "PP weekday", "INF meet"});
  CHECK_FALSE(gen.next());
  CHECK(gen.done());

  GeneratorOptions vp;
  vp.start = "VP";
  Generator sub(g, reg, fs, vp);
  auto s = sub.next();
  REQUIRE(s);
  CHECK(s->text == "Sie am Freitag treffen");
}

TEST_CASE("match keeps source order") {
  auto g = testing::demo_grammar("voice.tgl");
  Registry reg = testing::toy_registry();
  auto patient = gil::parse_gil("[(ROLE patient) (CONTENT [(PRED appointment) (QFORCE iota)])]");
  auto names = [](const std::vector<const tgl::Rule*>& rs) {
    V out;
    for (auto* r : rs) out.push_back(r->name);
    return out;
  };
  CHECK(names(match(g, reg, "NP", patient)) == V{"NP definite", "NP pronoun"});
  CHECK(match(g, reg, "VP", patient).empty());
}

TEST_CASE("apply_constraints is all or nothing") {
  auto text = "(DEFPRODUCTION \"c\" (:PRECOND (:CAT S :TEST ()) :ACTIONS (:TEMPLATE (:RULE NP (SELF)) (:RULE VP (SELF))"
              " :CONSTRAINTS (NUM (NP) LHS) (CASE (VP) :VAL nom) (NUM (VP) :VAL pl))))";
  auto r = tgl::parse_grammar(text).rules()[0];
  FeatureGraph graph;
  NodeId lhs = graph.new_node(), np = graph.new_node(), vp = graph.new_node();
  graph.assign(lhs, "NUM", Atom::symbol("sg"));
  std::size_t mark = graph.mark();
  CHECK_FALSE(apply_constraints(r, lhs, {np, vp}, graph));
  CHECK(graph.value(np, "NUM") == Atom::symbol("sg"));
  graph.undo_to(mark);

  graph.assign(vp, "CASE", Atom::symbol("akk"));
  mark = graph.mark();
  auto err = apply_constraints(r, lhs, {np, vp}, graph);
  REQUIRE(err);
  CHECK(err->rule == "c");
  CHECK(err->feature == "CASE");
  CHECK(graph.mark() == mark);
  CHECK_FALSE(graph.value(np, "NUM"));
  CHECK(graph.value(vp, "CASE") == Atom::symbol("akk"));
}

TEST_CASE("nested choices enumerate depth first, latest point first") {
  auto g = testing::demo_grammar("branching.tgl");
  Registry reg = testing::toy_registry();
  Generator gen(g, reg, testing::demo_input("empty.gil"));
  auto sols = testing::texts(gen.take(0));
  CHECK(sols == V{"s1 s21 s3 s51 s61 s71 s8", "s1 s21 s3 s51 s62 s71 s8", "s1 s22 s3 s51 s61 s71 s8",
                  "s1 s22 s3 s51 s62 s71 s8"});
  CHECK(gen.stats().rules_fired == 7);
  CHECK(gen.stats().rules_failed == 1);
  CHECK(gen.stats().bt_created == 3);
}

TEST_CASE("optional calls") {
  std::string g = rule("txt", "TXT", "\"a\" (:OPTRULE X (PATH P)) \"b\"") + rule("x", "X", "\"x\"", "(EXISTS Q)");
  CHECK(run(g, "[]") == V{"a b"});
  CHECK(run(g, "[(P [(R 1)])]") == V{"a b"});
  CHECK(run(g, "[(P [(Q 1)])]") == V{"a x b"});
  // A required call with no material fails the whole rule.
  std::string h = rule("txt", "TXT", "\"a\" (:RULE X (PATH P))") + rule("alt", "TXT", "\"alt\"") +
                  rule("x", "X", "\"x\"");
  CHECK(run(h, "[]") == V{"alt"});
  CHECK(run(h, "[(P [])]") == V{"a x", "alt"});
}

TEST_CASE("constraint conflicts prune combinations") {
  std::string nps = "(DEFPRODUCTION \"np sg\" (:PRECOND (:CAT NP :TEST ()) :ACTIONS (:TEMPLATE \"es\" :CONSTRAINTS (NUM LHS :VAL sg))))\n"
                  "(DEFPRODUCTION \"np pl\" (:PRECOND (:CAT NP :TEST ()) :ACTIONS (:TEMPLATE \"sie\" :CONSTRAINTS (NUM LHS :VAL pl))))\n";
  std::string agree = "(DEFPRODUCTION \"s\" (:PRECOND (:CAT TXT :TEST ()) :ACTIONS (:TEMPLATE (:RULE NP (SELF)) "
                      "(:FUN verb gewinnen :FEATURES NUM) :CONSTRAINTS (NUM (NP) LHS) (NUM LHS :VAL pl))))\n";
  auto gram = tgl::parse_grammar(agree + nps);
  Registry reg = testing::toy_registry();
  Generator gen(gram, reg, gil::parse_gil("[]"));
  CHECK(testing::texts(gen.take(0)) == V{"sie gewinnen"});
  // Met once by the first-solution walk and once by the enumeration.
  CHECK(gen.stats().constraint_conflicts == 2);
  CHECK(gen.trail().empty());
}

TEST_CASE("constraints between sibling constituents") {
  auto text = "(DEFPRODUCTION \"s\" (:PRECOND (:CAT TXT :TEST ()) :ACTIONS (:TEMPLATE (:RULE A (SELF)) (:RULE B (SELF))"
              " :CONSTRAINTS (F (A) (B)))))\n" +
              rule("a1", "A", "\"a1\"") +
              "(DEFPRODUCTION \"a2\" (:PRECOND (:CAT A :TEST ()) :ACTIONS (:TEMPLATE \"a2\" :CONSTRAINTS (F LHS :VAL 2))))\n"
              "(DEFPRODUCTION \"b1\" (:PRECOND (:CAT B :TEST ()) :ACTIONS (:TEMPLATE \"b1\" :CONSTRAINTS (F LHS :VAL 1))))\n"
              "(DEFPRODUCTION \"b2\" (:PRECOND (:CAT B :TEST ()) :ACTIONS (:TEMPLATE \"b2\" :CONSTRAINTS (F LHS :VAL 2))))\n";
  V sols = run(text, "[]");
  std::sort(sols.begin(), sols.end());
  CHECK(sols == V{"a1 b1", "a1 b2", "a2 b2"});
}

TEST_CASE("a sub-problem that needs itself is an error") {
  std::string self = rule("txt", "TXT", "(:RULE A (SELF))") + rule("a", "A", "\"x\" (:RULE A (SELF))");
  CHECK_THROWS_AS(run(self, "[]"), GenerationError);
  std::string mutual = rule("txt", "TXT", "(:RULE A (SELF))") + rule("a", "A", "(:RULE B (SELF))") +
                       rule("b", "B", "(:RULE A (SELF))");
  CHECK_THROWS_AS(run(mutual, "[]"), GenerationError);
  GeneratorOptions nomemo;
  nomemo.memo = false;
  CHECK_THROWS_AS(run(mutual, "[]", nomemo), GenerationError);
  // Descending into a substructure is not a loop.
  std::string down = rule("txt", "TXT", "(:RULE A (SELF))") + rule("a", "A", "\"x\" (:RULE A (PATH N))", "(EXISTS N)") +
                     rule("leaf", "A", "\"y\"");
  CHECK(run(down, "[(N [(N [])])]") == V{"x x y", "x y", "y"});
}

TEST_CASE("side effects are replayed and undone") {
  Registry reg = testing::toy_registry();
  reg.register_side_effect(
      "mention",
      [](Memory& m, const gil::FsPtr&, std::span<const Atom> a) { m["said"] += a[0].display() + ";"; },
      [](Memory& m, const gil::FsPtr&, std::span<const Atom> a) {
        std::string& s = m["said"];
        s.resize(s.size() - a[0].display().size() - 1);
        if (s.empty()) m.erase("said");
      });
  std::string g = rule("txt", "TXT", "(:RULE X (SELF)) (:RULE Y (SELF))") +
                  "(DEFPRODUCTION \"x1\" (:PRECOND (:CAT X :TEST ()) :ACTIONS (:TEMPLATE \"x1\" :SIDE-EFFECTS ((mention one)))))\n"
                  "(DEFPRODUCTION \"x2\" (:PRECOND (:CAT X :TEST ()) :ACTIONS (:TEMPLATE \"x2\")))\n"
                  "(DEFPRODUCTION \"y1\" (:PRECOND (:CAT Y :TEST ()) :ACTIONS (:TEMPLATE \"y1\" :SIDE-EFFECTS ((mention (PATH N))))))\n";
  auto gram = tgl::parse_grammar(g);
  Generator gen(gram, reg, gil::parse_gil("[(N two)]"));
  auto sols = gen.take(0);
  REQUIRE(sols.size() == 2);
  CHECK(sols[0].text == "x1 y1");
  CHECK(sols[0].memory.at("said") == "one;two;");
  CHECK(sols[1].text == "x2 y1");
  CHECK(sols[1].memory.at("said") == "two;");
  CHECK(gen.trail().empty());
  CHECK(gen.trail().memory().empty());
}

TEST_CASE("fire") {
  auto g = testing::demo_grammar("meeting.tgl");
  Registry reg = testing::toy_registry();
  auto fs = testing::demo_input("appointment.gil");
  auto agent = tgl::eval_selector(g.find_rule("S modal with infinitival VP")->actions[0].selector, fs, reg);
  REQUIRE(agent);
  auto np = fire(g, reg, *g.find_rule("NP title and surname"), agent);
  REQUIRE(np);
  CHECK(np->text == "Prof. Zweig");
  CHECK(np->derivation->features.at("NUM") == Atom::symbol("sg"));
  CHECK_FALSE(fire(g, reg, *g.find_rule("NP addressee pronoun"), agent));
  auto again = fire(g, reg, *g.find_rule("NP title and surname"), agent);
  REQUIRE(again);
  CHECK(again->text == np->text);
  auto s = fire(g, reg, *g.find_rule("request"), fs);
  REQUIRE(s);
  CHECK(s->text == "Prof. Zweig will Sie am Freitag treffen");
}

TEST_CASE("inflection follows features fixed later in the derivation") {
  auto g = testing::demo_grammar("agreement.tgl");
  Registry reg = testing::toy_registry();
  Generator gen(g, reg, testing::demo_input("agreement.gil"));
  CHECK(testing::texts(gen.take(0)) == V{"das Team gewinnt heute", "die Spieler gewinnen heute"});
  CHECK(gen.stats().rerealizations == 1);
  CHECK(gen.stats().reused_tokens == 1);
}

TEST_CASE("trace events") {
  auto g = testing::demo_grammar("branching.tgl");
  Registry reg = testing::toy_registry();
  std::vector<TraceEvent> events;
  GeneratorOptions opts;
  opts.trace = [&](const TraceEvent& e) { events.push_back(e); };
  Generator gen(g, reg, testing::demo_input("empty.gil"), opts);
  gen.take(0);
  std::map<TraceEvent::Kind, int> n;
  for (const auto& e : events) ++n[e.kind];
  CHECK(n[TraceEvent::Kind::kRuleFired] == 6);
  CHECK(n[TraceEvent::Kind::kRuleFailed] == 1);
  CHECK(n[TraceEvent::Kind::kBtCreated] == 3);
  CHECK(n[TraceEvent::Kind::kSolution] == 4);
  CHECK(gen.stats().rules_fired == 6 + 1);  // attempts, failures included
  for (const auto& e : events) CHECK_FALSE(e.str().empty());
}

TEST_CASE("streaming and determinism") {
  auto g = testing::demo_grammar("letter.tgl");
  Registry reg = testing::toy_registry();
  auto fs = testing::demo_input("appointment.gil");
  Generator a(g, reg, fs), b(g, reg, fs);
  auto first = a.take(5);
  auto rest = a.take(0);
  CHECK(first.size() == 5);
  CHECK(first.size() + rest.size() == 36);
  auto all = testing::texts(b.take(0));
  V joined = testing::texts(first);
  for (auto& s : testing::texts(rest)) joined.push_back(s);
  CHECK(joined == all);
  CHECK(std::set<std::string>(all.begin(), all.end()).size() == 36);
  CHECK(a.done());
  CHECK(a.take(0).empty());
  CHECK(a.trail().empty());
  CHECK(a.trail().features().pristine());
}

TEST_CASE("no applicable rule gives no solution") {
  auto g = testing::demo_grammar("meeting.tgl");
  Registry reg = testing::toy_registry();
  Generator gen(g, reg, gil::parse_gil("[(PRED other)]"));
  CHECK_FALSE(gen.next());
  CHECK(gen.done());
}

TEST_CASE("inflection errors propagate") {
  std::string g = rule("txt", "TXT", "(:FUN verb gehen)");
  CHECK_THROWS_AS(run(g, "[]"), InflectionError);
}

TEST_CASE("weights and ranking") {
  auto g = testing::demo_grammar("voice.tgl");
  Registry reg = testing::toy_registry();
  GeneratorOptions opts;
  opts.criteria = prefs::parse_criteria(testing::read_file(testing::data_path("voice-weights.crit")));
  opts.criteria.mode = prefs::Mode::kWeightRanked;
  Generator gen(g, reg, testing::demo_input("voice.gil"), opts);
  auto sols = gen.take(0);
  REQUIRE(sols.size() == 4);
  std::vector<prefs::Rational> w;
  for (const auto& s : sols) w.push_back(s.weight);
  CHECK(w == std::vector<prefs::Rational>{5, 2, 3, 0});
  rank_by_weight(sols);
  CHECK(sols[0].weight == prefs::Rational(5));
  CHECK(sols[1].weight == prefs::Rational(3));
  CHECK(sols[3].weight == prefs::Rational(0));
}
