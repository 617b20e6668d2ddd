#include <doctest.h>

#include <set>
#include <sstream>

#include "prodgen/backtrack.hpp"
#include "prodgen/engine.hpp"
#include "support/support.hpp"

using namespace prodgen;
using namespace prodgen::backtrack;
using gil::Atom;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

RealizedToken lit(const std::string& t) { return {Preterminal::literal(t), {}, t}; }

}  // namespace

TEST_CASE("table of the nested example after full enumeration") {
  auto g = testing::demo_grammar("branching.tgl");
  Registry reg = testing::toy_registry();
  Generator gen(g, reg, testing::demo_input("empty.gil"));
  gen.take(0);
  const BtTable& t = gen.table();
  REQUIRE(t.size() == 3);
  CHECK(lines(t.render()) == std::vector<std::string>{
                                 "B1 | s1 | {s21, s22} | s3 . V2 . s8 | remaining:",
                                 "B2 | s1 . V1 . s3 | {s51 . V3 . s71} | s8 | remaining:",
                                 "B3 (in B2/0) | s1 . V1 . s3 . s51 | {s61, s62} | s71 . s8 | remaining:",
                             });
  const BacktrackPoint* b2 = t.find(2);
  REQUIRE(b2);
  CHECK(b2->consumed_without_variant() == 1);
  CHECK(b2->choice->variants.size() == 1);
  CHECK(b2->expansions == 1);
  CHECK_FALSE(b2->open());
  CHECK(t.find(3)->parent == std::make_pair<std::size_t, std::size_t>(2, 0));
  CHECK_FALSE(t.find(0));
  CHECK_FALSE(t.find(4));
  for (const auto& p : t.points()) CHECK(p.choice->exhausted());
}

TEST_CASE("table after the first solution lists the pending rules") {
  auto g = testing::demo_grammar("branching.tgl");
  Registry reg = testing::toy_registry();
  Generator gen(g, reg, testing::demo_input("empty.gil"));
  REQUIRE(gen.next());
  const BtTable& t = gen.table();
  REQUIRE(t.size() == 3);
  CHECK(t.find(1)->remainder_names() == std::vector<std::string>{"b1 second"});
  CHECK(t.find(2)->remainder_names() == std::vector<std::string>{"b2 missing material"});
  CHECK(t.find(3)->remainder_names() == std::vector<std::string>{"b21 second"});
  for (const auto& p : t.points()) {
    CHECK(p.open());
    CHECK(p.pre_context.has_value());
    CHECK(p.post_context.has_value());
  }
  CHECK(render_context(*t.find(3)->pre_context) == "s1 . V1 . s3 . s51");
}

TEST_CASE("every solution is one ego per point spliced into its contexts") {
  auto g = testing::demo_grammar("branching.tgl");
  Registry reg = testing::toy_registry();
  Generator gen(g, reg, testing::demo_input("empty.gil"));
  auto sols = gen.take(0);
  const BtTable& t = gen.table();
  // Expand V-references top-down from B1 using each solution's choices and
  // compare with the solution text.
  std::function<std::string(const std::vector<ContextItem>&, const std::map<std::size_t, std::size_t>&)> expand =
      [&](const std::vector<ContextItem>& items, const std::map<std::size_t, std::size_t>& pick) {
        std::vector<std::string> words;
        for (const auto& it : items) {
          if (auto* tok = std::get_if<RealizedToken>(&it)) {
            words.push_back(tok->text);
          } else {
            std::size_t bt = std::get<EgoRef>(it).bt;
            words.push_back(expand(t.find(bt)->egos[pick.at(bt)]->items, pick));
          }
        }
        return join_tokens(words);
      };
  std::set<std::string> rebuilt;
  for (std::size_t b1 : {0, 1})
    for (std::size_t b3 : {0, 1}) {
      std::map<std::size_t, std::size_t> pick{{1, b1}, {2, 0}, {3, b3}};
      auto pre = expand(*t.find(1)->pre_context, pick);
      auto ego = expand(t.find(1)->egos[b1]->items, pick);
      auto post = expand(*t.find(1)->post_context, pick);
      rebuilt.insert(join_tokens({pre, ego, post}));
    }
  auto texts = testing::texts(sols);
  CHECK(rebuilt == std::set<std::string>(texts.begin(), texts.end()));
}

TEST_CASE("ego variants remember the features of their node") {
  auto g = testing::demo_grammar("voice.tgl");
  Registry reg = testing::toy_registry();
  Generator gen(g, reg, testing::demo_input("voice.gil"));
  gen.take(0);
  const BtTable& t = gen.table();
  REQUIRE(t.size() == 2);
  const BacktrackPoint* np = t.find(2);
  REQUIRE(np->egos.size() == 2);
  CHECK(np->egos[0]->rule == "NP definite");
  CHECK(np->egos[1]->rule == "NP pronoun");
  CHECK(np->egos[0]->features.at("CASE") == Atom::symbol("akk"));
  CHECK(np->egos[1]->features.at("GENDER") == Atom::symbol("masc"));
  CHECK(render_context(np->egos[1]->items) == "ihn");
}

TEST_CASE("render_context") {
  CHECK(render_context({}) == "");
  CHECK(render_context({lit("a"), EgoRef{4}, lit("b")}) == "a . V4 . b");
}

TEST_CASE("memo cache") {
  MemoCache memo;
  Choice c;
  c.category = "NP";
  c.input = gil::parse_gil("[(A 1) (B [(C x)])]");
  CHECK_FALSE(memo.lookup("NP", *c.input));
  memo.insert(&c);
  CHECK(memo.lookup("np", *gil::parse_gil("[(B [(C X)]) (A 1)]")) == &c);
  CHECK_FALSE(memo.lookup("VP", *c.input));
  CHECK_FALSE(memo.lookup("NP", *gil::parse_gil("[(A 2) (B [(C x)])]")));
  CHECK(memo.hits() == 1);
  CHECK(memo.misses() == 3);
  CHECK(memo.size() == 1);
  memo.clear();
  CHECK(memo.size() == 0);
  CHECK_FALSE(memo.lookup("NP", *c.input));
}

TEST_CASE("refresh re-inflects only when hook values change") {
  Registry reg = testing::toy_registry();
  std::map<std::pair<NodeId, std::string>, Atom> values{{{1, "NUM"}, Atom::symbol("sg")}};
  FeatureReader read = [&](NodeId n, const std::string& f) -> std::optional<Atom> {
    auto it = values.find({n, f});
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
  int calls = 0;
  reg.register_function("count", [&](const InflectionRequest& r) {
    ++calls;
    return r.features.count("NUM") ? r.features.at("NUM").display() : std::string("-");
  });
  RealizedToken verb{Preterminal::inflect("verb", {Atom::symbol("gewinnen")}, {{"NUM", 1}}), {}, {}};
  CHECK(refresh(verb, true, read, reg) == Refresh::kFresh);
  CHECK(verb.text == "gewinnt");
  CHECK(refresh(verb, false, read, reg) == Refresh::kReused);
  values[{1, "NUM"}] = Atom::symbol("pl");
  CHECK(refresh(verb, false, read, reg) == Refresh::kRerealized);
  CHECK(verb.text == "gewinnen");

  RealizedToken word = lit("heute");
  CHECK(refresh(word, false, read, reg) == Refresh::kReused);
  CHECK(word.text == "heute");

  std::vector<RealizedToken> frontier;
  for (NodeId n : {1, 2, 3}) {
    frontier.push_back({Preterminal::inflect("count", {}, {{"NUM", n}}), {}, {}});
    refresh(frontier.back(), true, read, reg);
  }
  frontier.push_back(lit("x"));
  CHECK(calls == 3);
  values[{3, "NUM"}] = Atom::symbol("du");
  CHECK(recompute_affected(frontier, read, reg) == 1);
  CHECK(calls == 4);
  CHECK(frontier[0].text == "pl");
  CHECK(frontier[1].text == "-");
  CHECK(frontier[2].text == "du");
  CHECK(recompute_affected(frontier, read, reg) == 0);
  CHECK(calls == 4);
}

TEST_CASE("realizer cache by occurrence") {
  Registry reg = testing::toy_registry();
  Atom num = Atom::symbol("sg");
  FeatureReader read = [&](NodeId, const std::string&) -> std::optional<Atom> { return num; };
  Realizer r;
  Realizer::Counts counts;
  auto verb = Preterminal::inflect("verb", {Atom::symbol("gewinnen")}, {{"NUM", 0}});
  CHECK(r.realize("/1.1", verb, read, reg, counts).text == "gewinnt");
  CHECK(r.realize("/1.2", Preterminal::literal("heute"), read, reg, counts).text == "heute");
  CHECK(counts.fresh == 1);
  CHECK(counts.reused == 0);
  CHECK(r.realize("/1.1", verb, read, reg, counts).text == "gewinnt");
  CHECK(r.realize("/1.2", Preterminal::literal("heute"), read, reg, counts).text == "heute");
  CHECK(counts.reused == 2);
  num = Atom::symbol("pl");
  CHECK(r.realize("/1.1", verb, read, reg, counts).text == "gewinnen");
  CHECK(counts.rerealized == 1);
  CHECK(r.size() == 2);
}
