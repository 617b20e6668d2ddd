#pragma once

// TGL: production rules mixing canned text, templates and context-free rules.
//
//   (DEFPRODUCTION "<name>"
//     (:PRECOND (:CAT <cat> :TEST (<test>*))
//      :ACTIONS (:TEMPLATE <action>+
//                {:SIDE-EFFECTS (<call>+)}
//                {:CONSTRAINTS <equation>+})))
//
//   (DEFGRAMMAR {:START <cat>} {:SIDE-EFFECT-FREE T|NIL})   ; optional, once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prodgen/gil.hpp"

namespace prodgen {
class Registry;
}

namespace prodgen::tgl {

using gil::Atom;
using gil::Path;

struct SourcePos {
  int line = 0;
  int column = 0;
};

class TglError : public std::runtime_error {
 public:
  TglError(const std::string& what, SourcePos pos);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Argument of a registered predicate, selector or function: a literal atom
/// or the value found at a path of the current input.
using Arg = std::variant<Atom, Path>;

struct TestExpr {
  enum class Kind { kTrue, kExists, kEq, kRoleFillerP, kHasAdjunct, kAnd, kOr, kNot, kCall };

  Kind kind = Kind::kTrue;
  Path path;                       // kExists, kEq
  Atom atom;                       // kEq
  std::string name;                // role, adjunct kind, or predicate name
  std::vector<TestExpr> operands;  // kAnd, kOr, kNot (one operand)
  std::vector<Arg> args;           // kCall
};

struct SelectorExpr {
  enum class Kind { kPath, kRoleFiller, kTheme, kTempAdjunct, kTempDuration, kLocAdjunct, kSelf, kCall };

  Kind kind = Kind::kSelf;
  Path path;         // kPath
  std::string name;  // role or selector name
  std::vector<Arg> args;
};

struct Action {
  enum class Kind { kRule, kOptRule, kFun, kLiteral };

  Kind kind = Kind::kLiteral;
  std::string category;  // kRule, kOptRule
  SelectorExpr selector;
  std::string function;               // kFun
  std::vector<Arg> args;              // kFun
  std::vector<std::string> features;  // kFun: features of the rule's own node handed to the call
  std::string text;                   // kLiteral

  bool is_call() const { return kind == Kind::kRule || kind == Kind::kOptRule; }
};

struct SideEffectCall {
  std::string function;
  std::vector<Arg> args;
};

/// `LHS`, or the k-th (1-based) RULE/OPTRULE action of `category`.
struct ConstituentRef {
  bool lhs = true;
  std::string category;
  int occurrence = 1;

  static ConstituentRef self() { return {}; }
  static ConstituentRef rhs(std::string cat, int k = 1) { return {false, std::move(cat), k}; }
  std::string str() const;
};

struct Constraint {
  enum class Kind { kAssign, kEquate };

  Kind kind = Kind::kAssign;
  std::string feature;
  std::vector<ConstituentRef> at;  // one for kAssign, two or more for kEquate
  Atom value;                      // kAssign
};

struct Rule {
  std::string name;
  std::string category;
  TestExpr test;
  std::vector<Action> actions;
  std::vector<SideEffectCall> side_effects;
  std::vector<Constraint> constraints;
  SourcePos pos;

  /// Template index of the referenced call action; nullopt for LHS or when
  /// the reference does not resolve.
  std::optional<std::size_t> resolve(const ConstituentRef& ref) const;
  bool resolves(const ConstituentRef& ref) const { return ref.lhs || resolve(ref).has_value(); }
};

class Grammar {
 public:
  Grammar();

  void add_rule(Rule rule);  // throws TglError on duplicate name

  const std::vector<Rule>& rules() const { return rules_; }
  /// Rules of a category in source order.
  std::vector<const Rule*> rules_for(std::string_view category) const;
  const Rule* find_rule(std::string_view name) const;
  bool has_category(std::string_view category) const;
  /// Every category used as a rule head or a call target, in first-use order.
  std::vector<std::string> categories() const;

  std::string start = "TXT";
  bool side_effect_free = false;
  bool options_declared = false;

 private:
  std::vector<Rule> rules_;
  std::map<std::string, std::vector<std::size_t>> index_;  // folded category -> rule positions
};

Grammar parse_grammar(std::string_view text);
/// Canonical TGL text; parse_grammar(print_grammar(g)) equals g.
std::string print_grammar(const Grammar& g);
std::string print_rule(const Rule& rule);
bool grammar_equal(const Grammar& a, const Grammar& b);

struct Diagnostic {
  enum class Severity { kError, kWarning };

  Severity severity = Severity::kError;
  std::string rule;  // empty for grammar-level diagnostics
  SourcePos pos;
  std::string message;

  bool is_error() const { return severity == Severity::kError; }
  std::string str() const;
};

std::vector<Diagnostic> validate_grammar(const Grammar& g, const Registry& registry);

/// The part of an input that built-in role and adjunct lookups address:
/// the THEME substructure when present, otherwise the structure itself.
gil::FsPtr proposition(const gil::FsPtr& fs);

bool eval_test(const TestExpr& test, const gil::FsPtr& fs, const Registry& registry);
/// nullptr when nothing is selected.
gil::FsPtr eval_selector(const SelectorExpr& sel, const gil::FsPtr& fs, const Registry& registry);
/// Resolves call arguments against `fs`; nullopt when a path argument is
/// missing or does not name an atom.
std::optional<std::vector<Atom>> eval_args(const std::vector<Arg>& args, const gil::FsPtr& fs);

}  // namespace prodgen::tgl
