#include <doctest.h>

#include "prodgen/morpho.hpp"
#include "support/support.hpp"

using namespace prodgen;
using namespace prodgen::morpho;
using gil::Atom;

namespace {

std::map<std::string, Atom> feats(std::initializer_list<std::pair<const char*, Atom>> kv) {
  std::map<std::string, Atom> out;
  for (const auto& [k, v] : kv) out.emplace(k, v);
  return out;
}

Atom sym(const char* s) { return Atom::symbol(s); }

}  // namespace

TEST_CASE("toy lexicon paradigms") {
  Lexicon lex = Lexicon::toy();
  CHECK(lex.inflect("wollen", feats({{"PERSON", Atom::number(3)}, {"NUM", sym("sg")}})) == "will");
  CHECK(lex.inflect("wollen", {}) == "wollen");
  CHECK(lex.inflect("treffen", feats({{"TENSE", sym("inf")}})) == "treffen");
  CHECK(lex.inflect("sie", feats({{"CASE", sym("akk")}})) == "Sie");
  CHECK(lex.inflect("er", feats({{"CASE", sym("DAT")}})) == "ihm");
  CHECK(lex.inflect("der", feats({{"CASE", sym("akk")}, {"GENDER", sym("masc")}, {"NUM", sym("sg")}})) == "den");
  CHECK(lex.inflect("der", feats({{"CASE", sym("nom")}, {"GENDER", sym("neut")}, {"NUM", sym("pl")}})) == "die");
  CHECK(lex.inflect("Spieler", {}) == "Spieler");
  CHECK(lex.inflect("gewinnen", feats({{"NUM", sym("pl")}})) == "gewinnen");
}

TEST_CASE("inflection failures") {
  Lexicon lex = Lexicon::toy();
  CHECK_THROWS_AS(lex.inflect("gehen", {}), InflectionError);
  CHECK_THROWS_AS(lex.inflect("werden", {}), InflectionError);
  CHECK_THROWS_AS(lex.inflect("er", feats({{"CASE", sym("gen")}})), InflectionError);
}

TEST_CASE("most specific cell wins and equal specificity is ambiguous") {
  Lexicon lex = Lexicon::parse("x | A=1 -> one | A=1,B=2 -> onetwo | -> other\ny | A=1 -> p | B=2 -> q\n");
  CHECK(lex.inflect("x", feats({{"A", Atom::number(1)}})) == "one");
  CHECK(lex.inflect("x", feats({{"A", Atom::number(1)}, {"B", Atom::number(2)}})) == "onetwo");
  CHECK(lex.inflect("x", feats({{"B", Atom::number(2)}})) == "other");
  CHECK(lex.inflect("y", feats({{"A", Atom::number(1)}})) == "p");
  CHECK_THROWS_AS(lex.inflect("y", feats({{"A", Atom::number(1)}, {"B", Atom::number(2)}})), InflectionError);
}

TEST_CASE("lexicon file errors") {
  auto line_of = [](const char* text) {
    try {
      Lexicon::parse(text);
    } catch (const LexiconError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("# c\n\nfoo\n") == 3);
  CHECK(line_of("foo | A -> x\n") == 1);
  CHECK(line_of("foo | A=1 x\n") == 1);
  CHECK(line_of("foo | -> a | -> b\n") == 1);
  CHECK(line_of("foo | A=1,A=2 -> x\n") == 1);
  CHECK(line_of("two words | -> x\n") == 1);
  CHECK(line_of("foo | A=1 -> \n") == 1);
  CHECK(line_of("ok | -> x  # trailing\n") == 0);
}

TEST_CASE("later entries replace earlier ones") {
  Lexicon lex = Lexicon::parse("a | -> first\na | -> second\n");
  CHECK(lex.size() == 1);
  CHECK(lex.inflect("A", {}) == "second");
  CHECK(LexiconEntry::key_text({{"NUM", "sg"}, {"CASE", "akk"}}) == "CASE=akk,NUM=sg");
}

TEST_CASE("weekday names") {
  CHECK(weekday_name(1) == "Montag");
  CHECK(weekday_name(5) == "Freitag");
  CHECK(weekday_name(7) == "Sonntag");
  CHECK_THROWS_AS(weekday_name(0), InflectionError);
  CHECK_THROWS_AS(weekday_name(8), InflectionError);
}

TEST_CASE("registered demo functions") {
  Registry reg = testing::toy_registry();
  CHECK(reg.inflect({"weekday-pp", {Atom::number(5)}, {}}) == "am Freitag");
  CHECK(reg.inflect({"weekday", {Atom::number(6)}, {}}) == "Samstag");
  CHECK(reg.inflect({"word", {Atom::string("Prof."), Atom::string("Zweig")}, {}}) == "Prof. Zweig");
  CHECK(reg.inflect({"modal", {sym("wollen")}, feats({{"NUM", sym("pl")}})}) == "wollen");
  CHECK_THROWS_AS(reg.inflect({"verb", {}, {}}), InflectionError);
  CHECK_THROWS_AS(reg.inflect({"weekday", {sym("fri")}, {}}), InflectionError);
  CHECK_THROWS(reg.inflect({"nosuch", {}, {}}));
}

TEST_CASE("registry name clashes") {
  Registry reg = testing::toy_registry();
  auto noop = [](Memory&, const gil::FsPtr&, std::span<const Atom>) {};
  CHECK_THROWS_AS(reg.register_side_effect("verb", noop, noop), RegistryError);
  CHECK_THROWS_AS(reg.register_function("word", [](const InflectionRequest&) { return std::string(); }), RegistryError);
  reg.register_side_effect("mention", noop, noop);
  CHECK(reg.side_effect("mention"));
  CHECK_FALSE(reg.function("mention"));
}

TEST_CASE("custom lexicon through the registry") {
  Registry reg;
  install_toy_morphology(reg, std::make_shared<Lexicon>(Lexicon::parse("gehen | NUM=sg -> geht | -> gehen\n")));
  CHECK(reg.inflect({"verb", {sym("gehen")}, feats({{"NUM", sym("sg")}})}) == "geht");
  CHECK_THROWS_AS(reg.inflect({"verb", {sym("treffen")}, {}}), InflectionError);
}
