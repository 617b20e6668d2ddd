#include "random_grammar.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace testing {

using namespace prodgen;

namespace {

struct Gen {
  std::mt19937_64 rng;

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }
  template <class T>
  const T& one_of(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  std::string test() {
    switch (pick(0, 6)) {
      case 0: return "(EXISTS A)";
      case 1: return "(EXISTS B)";
      case 2: return "(EQ X v1)";
      case 3: return "(NOT (EQ X v2))";
      case 4: return "(OR (EXISTS A) (EQ X v2))";
      default: return "";
    }
  }

  std::string selector() {
    switch (pick(0, 3)) {
      case 0: return "(PATH A)";
      case 1: return "(PATH B)";
      default: return "(SELF)";
    }
  }

  std::string fs(int depth) {
    std::string out = "[";
    if (chance(0.8)) out += std::string("(X ") + (chance(0.5) ? "v1" : "v2") + ")";
    if (depth > 0 && chance(0.7)) out += "(A " + fs(depth - 1) + ")";
    if (depth > 0 && chance(0.6)) out += "(B " + fs(depth - 1) + ")";
    return out + "]";
  }
};

std::string feature_value(Gen& g, const std::string& feature) {
  if (feature == "NUM") return g.chance(0.5) ? "sg" : "pl";
  return g.chance(0.5) ? "nom" : "akk";
}

}  // namespace

RandomCase random_case(std::uint64_t seed, const RandomParams& p) {
  Gen g{std::mt19937_64(seed)};
  int layers = g.pick(2, p.max_depth);
  std::vector<std::vector<std::string>> cats(static_cast<std::size_t>(layers));
  cats[0].push_back("TXT");
  for (int l = 1; l < layers; ++l)
    for (int k = g.pick(1, 2); k > 0; --k) cats[static_cast<std::size_t>(l)].push_back("C" + std::to_string(l) + "x" + std::to_string(k));

  std::ostringstream text;
  std::vector<std::string> rule_names;
  int rules = 0;
  for (int l = 0; l < layers; ++l) {
    for (const auto& cat : cats[static_cast<std::size_t>(l)]) {
      int budget = p.max_rules - rules;
      // Leave one rule for every category still to come.
      int later = 0;
      for (int m = l; m < layers; ++m) later += static_cast<int>(cats[static_cast<std::size_t>(m)].size());
      int n = std::max(1, std::min(g.pick(1, p.max_conflict), budget - (later - 1)));
      for (int r = 0; r < n; ++r, ++rules) {
        std::string name = cat + "-r" + std::to_string(r);
        rule_names.push_back(name);
        std::string tmpl;
        std::vector<std::string> refs;
        std::map<std::string, int> seen;
        int actions = g.pick(1, 4);
        for (int a = 0; a < actions; ++a) {
          if (l + 1 < layers && g.chance(0.5)) {
            const auto& target = g.one_of(cats[static_cast<std::size_t>(g.pick(l + 1, layers - 1))]);
            bool opt = g.chance(0.3);
            tmpl += std::string(" (") + (opt ? ":OPTRULE " : ":RULE ") + target + " " + g.selector() + ")";
            refs.push_back("(" + target + " " + std::to_string(++seen[target]) + ")");
          } else if (g.chance(0.6)) {
            tmpl += " \"w" + std::to_string(rules) + "_" + std::to_string(a) + "\"";
          } else if (g.chance(0.7)) {
            tmpl += " (:FUN tag t" + std::to_string(rules) + " :FEATURES NUM CASE)";
          } else {
            tmpl += " (:FUN tag (PATH X) :FEATURES NUM)";
          }
        }
        std::string eqs;
        if (p.constraints && g.chance(0.7)) {
          refs.push_back("LHS");
          for (int k = g.pick(1, 3); k > 0; --k) {
            std::string f = g.chance(0.5) ? "NUM" : "CASE";
            const std::string& at = g.one_of(refs);
            if (refs.size() >= 2 && g.chance(0.5)) {
              const std::string& other = g.one_of(refs);
              if (other != at) {
                eqs += " (" + f + " " + at + " " + other + ")";
                continue;
              }
            }
            eqs += " (" + f + " " + at + " :VAL " + feature_value(g, f) + ")";
          }
        }
        text << "(DEFPRODUCTION \"" << name << "\"\n  (:PRECOND (:CAT " << cat << " :TEST (" << g.test()
             << "))\n   :ACTIONS (:TEMPLATE" << tmpl;
        if (!eqs.empty()) text << "\n             :CONSTRAINTS" << eqs;
        text << ")))\n";
      }
    }
  }

  RandomCase out;
  out.grammar_text = text.str();
  out.grammar = tgl::parse_grammar(out.grammar_text);
  out.input_text = g.fs(3);
  out.input = gil::parse_gil(out.input_text);
  if (p.criteria) {
    for (int k = g.pick(1, 3); k > 0; --k) {
      const auto& name = g.one_of(rule_names);
      if (!out.criteria.is_c_rule(name)) out.criteria.add({name, prefs::Rational(g.pick(1, 4))});
    }
    if (g.chance(0.5)) out.criteria.mode = prefs::Mode::kWeightRanked;
  }
  return out;
}

Registry random_registry() {
  Registry r;
  r.register_function("tag", [](const InflectionRequest& req) {
    std::string out;
    for (const auto& a : req.args) out += (out.empty() ? "" : "-") + a.display();
    for (const auto& [f, v] : req.features) out += "/" + f + "=" + v.display();
    return out;
  });
  return r;
}

}  // namespace testing
