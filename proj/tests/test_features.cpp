#include <doctest.h>

#include <random>

#include "prodgen/trail.hpp"

using namespace prodgen;
using gil::Atom;

namespace {

// Every observable fact about a small graph, for before/after comparisons.
std::vector<std::string> snapshot(const FeatureGraph& g, NodeId nodes, const std::vector<std::string>& feats) {
  std::vector<std::string> out;
  for (NodeId a = 0; a < nodes; ++a) {
    for (const auto& f : feats) {
      auto v = g.value(a, f);
      out.push_back(v ? v->key() : "-");
      for (NodeId b = 0; b < nodes; ++b)
        for (const auto& h : feats) out.push_back(g.same_class(a, f, b, h) ? "=" : ".");
    }
  }
  return out;
}

}  // namespace

TEST_CASE("assign and equate") {
  FeatureGraph g;
  NodeId a = g.new_node(), b = g.new_node(), c = g.new_node();
  CHECK(g.assign(a, "NUM", Atom::symbol("sg")));
  CHECK(g.assign(a, "num", Atom::symbol("SG")));  // same value, case-folded
  CHECK_FALSE(g.assign(a, "NUM", Atom::symbol("pl")));
  CHECK(g.value(a, "NUM")->key() == Atom::symbol("sg").key());
  CHECK(g.equate(a, "NUM", b, "NUM"));
  CHECK(g.value(b, "NUM") == Atom::symbol("sg"));
  CHECK_FALSE(g.assign(b, "NUM", Atom::symbol("pl")));
  CHECK(g.assign(c, "NUM", Atom::symbol("pl")));
  std::size_t before = g.mark();
  CHECK_FALSE(g.equate(b, "NUM", c, "NUM"));
  CHECK(g.mark() >= before);
  CHECK(g.value(c, "NUM") == Atom::symbol("pl"));
  CHECK_FALSE(g.same_class(b, "NUM", c, "NUM"));
  CHECK(g.bindings(a).size() == 1);
  CHECK_FALSE(g.value(c, "CASE"));
}

TEST_CASE("undo restores earlier states exactly") {
  FeatureGraph g;
  CHECK(g.pristine());
  std::size_t empty = g.mark();
  NodeId a = g.new_node(), b = g.new_node();
  g.assign(a, "CASE", Atom::symbol("nom"));
  std::size_t m = g.mark();
  g.equate(a, "CASE", b, "CASE");
  g.assign(b, "NUM", Atom::symbol("pl"));
  CHECK(g.value(b, "CASE") == Atom::symbol("nom"));
  g.undo_to(m);
  CHECK_FALSE(g.value(b, "CASE"));
  CHECK_FALSE(g.same_class(a, "CASE", b, "CASE"));
  CHECK(g.value(a, "CASE") == Atom::symbol("nom"));
  g.undo_to(empty);
  CHECK(g.pristine());
  CHECK(g.node_count() == 0);
}

TEST_CASE("random operation sequences undo to identical snapshots") {
  std::mt19937 rng(11);
  const std::vector<std::string> feats{"A", "B", "C"};
  const std::vector<Atom> vals{Atom::symbol("x"), Atom::symbol("y"), Atom::number(1)};
  for (int round = 0; round < 200; ++round) {
    FeatureGraph g;
    const NodeId n = 4;
    for (NodeId i = 0; i < n; ++i) g.new_node();
    std::vector<std::pair<std::size_t, std::vector<std::string>>> marks;
    for (int op = 0; op < 30; ++op) {
      if (rng() % 4 == 0) marks.emplace_back(g.mark(), snapshot(g, n, feats));
      NodeId x = rng() % n, y = rng() % n;
      const auto& f = feats[rng() % feats.size()];
      const auto& h = feats[rng() % feats.size()];
      if (rng() % 2) {
        auto before = snapshot(g, n, feats);
        if (!g.assign(x, f, vals[rng() % vals.size()])) CHECK(snapshot(g, n, feats) == before);
      } else {
        auto before = snapshot(g, n, feats);
        if (!g.equate(x, f, y, h)) CHECK(snapshot(g, n, feats) == before);
      }
    }
    while (!marks.empty()) {
      g.undo_to(marks.back().first);
      CHECK(snapshot(g, n, feats) == marks.back().second);
      marks.pop_back();
    }
  }
}

TEST_CASE("trail undoes side effects in reverse order") {
  Registry reg;
  reg.register_side_effect(
      "push",
      [](Memory& m, const gil::FsPtr&, std::span<const Atom> a) { m["log"] += a[0].display(); },
      [](Memory& m, const gil::FsPtr&, std::span<const Atom>) {
        m["log"].pop_back();
        if (m["log"].empty()) m.erase("log");
      });
  Trail t;
  CHECK(t.empty());
  auto start = t.mark();
  NodeId n = t.features().new_node();
  t.run_side_effect("push", *reg.side_effect("push"), nullptr, {Atom::symbol("a")});
  auto mid = t.mark();
  t.features().assign(n, "F", Atom::number(1));
  t.run_side_effect("push", *reg.side_effect("push"), nullptr, {Atom::symbol("b")});
  CHECK(t.memory().at("log") == "ab");
  t.undo_to(mid);
  CHECK(t.memory().at("log") == "a");
  CHECK_FALSE(t.features().value(n, "F"));
  t.undo_to(start);
  CHECK(t.memory().empty());
  CHECK(t.empty());
  CHECK(t.features().pristine());
  Trail::Mark bogus{5, 5};
  CHECK_THROWS_AS(t.undo_to(bogus), std::out_of_range);
}
