#include "prodgen/tgl.hpp"

#include <set>
#include <sstream>

#include "sexpr.hpp"

namespace prodgen::tgl {

using detail::SExpr;

TglError::TglError(const std::string& what, SourcePos pos)
    : std::runtime_error(pos.line > 0 ? "line " + std::to_string(pos.line) + ", column " +
                                            std::to_string(pos.column) + ": " + what
                                      : what),
      pos_(pos) {}

std::string ConstituentRef::str() const {
  if (lhs) return "(LHS)";
  if (occurrence == 1) return "(" + category + ")";
  return "(" + category + " " + std::to_string(occurrence) + ")";
}

std::optional<std::size_t> Rule::resolve(const ConstituentRef& ref) const {
  if (ref.lhs || ref.occurrence < 1) return std::nullopt;
  int seen = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].is_call() && gil::iequals(actions[i].category, ref.category) && ++seen == ref.occurrence)
      return i;
  }
  return std::nullopt;
}

Grammar::Grammar() = default;

void Grammar::add_rule(Rule rule) {
  if (find_rule(rule.name)) throw TglError("duplicate rule name \"" + rule.name + "\"", rule.pos);
  index_[gil::fold(rule.category)].push_back(rules_.size());
  rules_.push_back(std::move(rule));
}

std::vector<const Rule*> Grammar::rules_for(std::string_view category) const {
  std::vector<const Rule*> out;
  auto it = index_.find(gil::fold(category));
  if (it == index_.end()) return out;
  for (std::size_t i : it->second) out.push_back(&rules_[i]);
  return out;
}

const Rule* Grammar::find_rule(std::string_view name) const {
  for (const auto& r : rules_)
    if (r.name == name) return &r;
  return nullptr;
}

bool Grammar::has_category(std::string_view category) const {
  for (const auto& c : categories())
    if (gil::iequals(c, category)) return true;
  return false;
}

std::vector<std::string> Grammar::categories() const {
  std::vector<std::string> out{"TXT"};
  std::set<std::string> seen{"txt"};
  auto add = [&](const std::string& c) {
    if (seen.insert(gil::fold(c)).second) out.push_back(c);
  };
  add(start);
  for (const auto& r : rules_) {
    add(r.category);
    for (const auto& a : r.actions)
      if (a.is_call()) add(a.category);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& msg) { throw TglError(msg, at.pos); }

std::string symbol_text(const SExpr& e, const char* what) {
  if (!e.is_symbol()) fail(e, std::string("expected ") + what + ", found " + e.describe());
  return e.text;
}

Path path_of(const SExpr& e) {
  std::string text = symbol_text(e, "a path");
  try {
    return Path::parse(text);
  } catch (const std::invalid_argument& err) {
    fail(e, err.what());
  }
}

Atom atom_of(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::kSymbol: return Atom::symbol(e.text);
    case SExpr::Kind::kString: return Atom::string(e.text);
    case SExpr::Kind::kInteger: return Atom::number(e.number);
    default: fail(e, "expected an atom, found " + e.describe());
  }
}

Arg arg_of(const SExpr& e) {
  if (e.is_list()) {
    if (e.items.size() == 2 && e.items[0].is_symbol("PATH")) return path_of(e.items[1]);
    fail(e, "arguments are atoms or (PATH <path>)");
  }
  return atom_of(e);
}

std::vector<Arg> args_from(const std::vector<SExpr>& items, std::size_t first) {
  std::vector<Arg> out;
  for (std::size_t i = first; i < items.size(); ++i) out.push_back(arg_of(items[i]));
  return out;
}

const SExpr& head(const SExpr& e, const char* what) {
  if (!e.is_list() || e.items.empty() || !(e.items[0].is_symbol() || e.items[0].is_keyword()))
    fail(e, std::string("expected ") + what + ", found " + e.describe());
  return e.items[0];
}

void arity(const SExpr& e, std::size_t n) {
  if (e.items.size() != n)
    fail(e, "(" + e.items[0].text + " ...) takes " + std::to_string(n - 1) + " argument(s)");
}

TestExpr test_of(const SExpr& e) {
  const SExpr& h = head(e, "a test expression");
  TestExpr t;
  std::string op = gil::fold(h.text);
  if (op == "true") {
    arity(e, 1);
    t.kind = TestExpr::Kind::kTrue;
  } else if (op == "and" || op == "or") {
    if (e.items.size() < 2) fail(e, "(" + h.text + " ...) needs at least one operand");
    t.kind = op == "and" ? TestExpr::Kind::kAnd : TestExpr::Kind::kOr;
    for (std::size_t i = 1; i < e.items.size(); ++i) t.operands.push_back(test_of(e.items[i]));
  } else if (op == "not") {
    arity(e, 2);
    t.kind = TestExpr::Kind::kNot;
    t.operands.push_back(test_of(e.items[1]));
  } else if (op == "exists") {
    arity(e, 2);
    t.kind = TestExpr::Kind::kExists;
    t.path = path_of(e.items[1]);
  } else if (op == "eq") {
    arity(e, 3);
    t.kind = TestExpr::Kind::kEq;
    t.path = path_of(e.items[1]);
    t.atom = atom_of(e.items[2]);
  } else if (op == "role-filler-p") {
    arity(e, 2);
    t.kind = TestExpr::Kind::kRoleFillerP;
    t.name = symbol_text(e.items[1], "a role name");
  } else if (op == "has-adjunct") {
    arity(e, 2);
    t.kind = TestExpr::Kind::kHasAdjunct;
    t.name = symbol_text(e.items[1], "an adjunct kind");
  } else if (op == "pred") {
    if (e.items.size() < 2) fail(e, "(PRED <name> <arg>*) needs a predicate name");
    t.kind = TestExpr::Kind::kCall;
    t.name = symbol_text(e.items[1], "a predicate name");
    t.args = args_from(e.items, 2);
  } else {
    fail(h, "unknown test '" + h.text + "'");
  }
  return t;
}

SelectorExpr selector_of(const SExpr& e) {
  const SExpr& h = head(e, "a selector");
  SelectorExpr s;
  std::string op = gil::fold(h.text);
  if (op == "path") {
    arity(e, 2);
    s.kind = SelectorExpr::Kind::kPath;
    s.path = path_of(e.items[1]);
  } else if (op == "role-filler") {
    arity(e, 2);
    s.kind = SelectorExpr::Kind::kRoleFiller;
    s.name = symbol_text(e.items[1], "a role name");
  } else if (op == "theme") {
    arity(e, 1);
    s.kind = SelectorExpr::Kind::kTheme;
  } else if (op == "temp-adjunct") {
    arity(e, 1);
    s.kind = SelectorExpr::Kind::kTempAdjunct;
  } else if (op == "temp-duration") {
    arity(e, 1);
    s.kind = SelectorExpr::Kind::kTempDuration;
  } else if (op == "loc-adjunct") {
    arity(e, 1);
    s.kind = SelectorExpr::Kind::kLocAdjunct;
  } else if (op == "self") {
    arity(e, 1);
    s.kind = SelectorExpr::Kind::kSelf;
  } else if (op == "sel") {
    if (e.items.size() < 2) fail(e, "(SEL <name> <arg>*) needs a selector name");
    s.kind = SelectorExpr::Kind::kCall;
    s.name = symbol_text(e.items[1], "a selector name");
    s.args = args_from(e.items, 2);
  } else {
    fail(h, "unknown selector '" + h.text + "'");
  }
  return s;
}

// (:FUN name arg* {:FEATURES f+}) or the Lisp-shaped (:FUN (name arg*)).
Action fun_of(const SExpr& e) {
  Action a;
  a.kind = Action::Kind::kFun;
  std::vector<SExpr> items(e.items.begin() + 1, e.items.end());
  if (items.size() == 1 && items[0].is_list() && !items[0].items.empty()) items = items[0].items;
  if (items.empty()) fail(e, "(:FUN ...) needs a function name");
  a.function = symbol_text(items[0], "a function name");
  std::size_t i = 1;
  for (; i < items.size() && !items[i].is_keyword(); ++i) a.args.push_back(arg_of(items[i]));
  if (i < items.size()) {
    if (!items[i].is_keyword(":FEATURES")) fail(items[i], "unexpected " + items[i].describe() + " in :FUN");
    if (i + 1 == items.size()) fail(items[i], ":FEATURES needs at least one feature name");
    for (++i; i < items.size(); ++i) a.features.push_back(symbol_text(items[i], "a feature name"));
  }
  return a;
}

Action action_of(const SExpr& e) {
  if (e.kind == SExpr::Kind::kString) {
    Action a;
    a.kind = Action::Kind::kLiteral;
    a.text = e.text;
    return a;
  }
  const SExpr& h = head(e, "a template action");
  if (h.is_keyword(":RULE") || h.is_keyword(":OPTRULE")) {
    arity(e, 3);
    Action a;
    a.kind = h.is_keyword(":RULE") ? Action::Kind::kRule : Action::Kind::kOptRule;
    a.category = symbol_text(e.items[1], "a category");
    if (gil::iequals(a.category, "LHS")) fail(e.items[1], "LHS is reserved and cannot be a category");
    a.selector = selector_of(e.items[2]);
    return a;
  }
  if (h.is_keyword(":FUN")) return fun_of(e);
  fail(h, "unknown template action " + h.describe());
}

SideEffectCall side_effect_of(const SExpr& e) {
  const SExpr* call = &e;
  std::size_t first = 0;
  if (call->is_list() && !call->items.empty() && call->items[0].is_keyword(":FUN")) first = 1;
  if (!call->is_list() || call->items.size() <= first) fail(e, "expected a side-effect call (<name> <arg>*)");
  SideEffectCall s;
  s.function = symbol_text(call->items[first], "a side-effect name");
  s.args = args_from(call->items, first + 1);
  return s;
}

ConstituentRef ref_of(const SExpr& e) {
  if (e.is_symbol("LHS")) return ConstituentRef::self();
  if (!e.is_list() || e.items.empty() || e.items.size() > 2)
    fail(e, "expected a constituent reference (<cat> {k}) or LHS");
  if (e.items.size() == 1 && e.items[0].is_symbol("LHS")) return ConstituentRef::self();
  std::string cat = symbol_text(e.items[0], "a category");
  int k = 1;
  if (e.items.size() == 2) {
    if (e.items[1].kind != SExpr::Kind::kInteger || e.items[1].number < 1)
      fail(e.items[1], "constituent occurrence must be a positive integer");
    k = static_cast<int>(e.items[1].number);
  }
  return ConstituentRef::rhs(cat, k);
}

Constraint constraint_of(const SExpr& e) {
  if (!e.is_list() || e.items.size() < 3) fail(e, "expected a feature equation");
  Constraint c;
  c.feature = symbol_text(e.items[0], "a feature name");
  if (e.items.size() == 4 && e.items[2].is_keyword(":VAL")) {
    c.kind = Constraint::Kind::kAssign;
    c.at.push_back(ref_of(e.items[1]));
    c.value = atom_of(e.items[3]);
    return c;
  }
  c.kind = Constraint::Kind::kEquate;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    if (e.items[i].is_keyword()) fail(e.items[i], "unexpected " + e.items[i].describe() + " in equation");
    c.at.push_back(ref_of(e.items[i]));
  }
  for (std::size_t i = 0; i < c.at.size(); ++i)
    for (std::size_t j = i + 1; j < c.at.size(); ++j)
      if (c.at[i].lhs == c.at[j].lhs && gil::iequals(c.at[i].category, c.at[j].category) &&
          c.at[i].occurrence == c.at[j].occurrence)
        fail(e, "equation lists constituent " + c.at[i].str() + " twice");
  return c;
}

// Splits a property list into keyword -> following values.
std::vector<std::pair<const SExpr*, std::vector<const SExpr*>>> plist(const SExpr& list, std::size_t first) {
  std::vector<std::pair<const SExpr*, std::vector<const SExpr*>>> out;
  for (std::size_t i = first; i < list.items.size(); ++i) {
    const SExpr& item = list.items[i];
    if (item.is_keyword()) {
      out.emplace_back(&item, std::vector<const SExpr*>{});
    } else {
      if (out.empty()) fail(item, "expected a keyword, found " + item.describe());
      out.back().second.push_back(&item);
    }
  }
  return out;
}

const SExpr& single(const std::pair<const SExpr*, std::vector<const SExpr*>>& kv) {
  if (kv.second.size() != 1) fail(*kv.first, kv.first->text + " takes exactly one value");
  return *kv.second[0];
}

Rule rule_of(const SExpr& form) {
  if (form.items.size() != 3) fail(form, "expected (DEFPRODUCTION \"<name>\" (:PRECOND ... :ACTIONS ...))");
  if (form.items[1].kind != SExpr::Kind::kString) fail(form.items[1], "rule name must be a string");
  Rule r;
  r.name = form.items[1].text;
  r.pos = form.pos;
  const SExpr& body = form.items[2];
  if (!body.is_list()) fail(body, "expected (:PRECOND ... :ACTIONS ...)");
  bool have_pre = false, have_actions = false;
  for (const auto& kv : plist(body, 0)) {
    const SExpr& kw = *kv.first;
    if (kw.is_keyword(":PRECOND")) {
      const SExpr& pre = single(kv);
      if (!pre.is_list()) fail(pre, "expected (:CAT <cat> :TEST (...))");
      have_pre = true;
      bool have_cat = false;
      for (const auto& p : plist(pre, 0)) {
        if (p.first->is_keyword(":CAT")) {
          r.category = symbol_text(single(p), "a category");
          if (gil::iequals(r.category, "LHS")) fail(single(p), "LHS is reserved and cannot be a category");
          have_cat = true;
        } else if (p.first->is_keyword(":TEST")) {
          const SExpr& tests = single(p);
          if (!tests.is_list()) fail(tests, ":TEST expects a list of tests");
          if (tests.items.empty()) {
            r.test.kind = TestExpr::Kind::kTrue;
          } else if (tests.items.size() == 1) {
            r.test = test_of(tests.items[0]);
          } else {
            r.test.kind = TestExpr::Kind::kAnd;
            for (const auto& t : tests.items) r.test.operands.push_back(test_of(t));
          }
        } else {
          fail(*p.first, "unknown precondition keyword " + p.first->text);
        }
      }
      if (!have_cat) fail(pre, ":PRECOND needs :CAT");
    } else if (kw.is_keyword(":ACTIONS")) {
      const SExpr& acts = single(kv);
      if (!acts.is_list()) fail(acts, "expected (:TEMPLATE ...)");
      have_actions = true;
      for (const auto& a : plist(acts, 0)) {
        const SExpr& akw = *a.first;
        if (akw.is_keyword(":TEMPLATE")) {
          if (a.second.empty()) fail(akw, ":TEMPLATE needs at least one action");
          for (const SExpr* x : a.second) r.actions.push_back(action_of(*x));
        } else if (akw.is_keyword(":SIDE-EFFECTS")) {
          const SExpr& calls = single(a);
          if (!calls.is_list() || calls.items.empty()) fail(calls, ":SIDE-EFFECTS expects a list of calls");
          // A single bare call is accepted as well as a list of calls.
          if (!calls.items[0].is_list()) {
            r.side_effects.push_back(side_effect_of(calls));
          } else {
            for (const auto& c : calls.items) r.side_effects.push_back(side_effect_of(c));
          }
        } else if (akw.is_keyword(":CONSTRAINTS") || akw.is_keyword(":CONSTRAINT")) {
          if (a.second.empty()) fail(akw, akw.text + " needs at least one equation");
          for (const SExpr* x : a.second) r.constraints.push_back(constraint_of(*x));
        } else {
          fail(akw, "unknown action keyword " + akw.text);
        }
      }
      if (r.actions.empty()) fail(acts, ":ACTIONS needs a :TEMPLATE");
    } else {
      fail(kw, "unknown rule keyword " + kw.text);
    }
  }
  if (!have_pre) fail(body, "rule \"" + r.name + "\" has no :PRECOND");
  if (!have_actions) fail(body, "rule \"" + r.name + "\" has no :ACTIONS");
  return r;
}

void options_of(const SExpr& form, Grammar& g) {
  if (g.options_declared) fail(form, "DEFGRAMMAR may appear only once");
  g.options_declared = true;
  for (const auto& kv : plist(form, 1)) {
    if (kv.first->is_keyword(":START")) {
      g.start = symbol_text(single(kv), "a category");
    } else if (kv.first->is_keyword(":SIDE-EFFECT-FREE")) {
      const SExpr& v = single(kv);
      if (v.is_symbol("T")) {
        g.side_effect_free = true;
      } else if (v.is_symbol("NIL")) {
        g.side_effect_free = false;
      } else {
        fail(v, ":SIDE-EFFECT-FREE expects T or NIL");
      }
    } else {
      fail(*kv.first, "unknown grammar option " + kv.first->text);
    }
  }
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
  Grammar g;
  for (const SExpr& form : detail::read_all(text)) {
    const SExpr& h = head(form, "DEFPRODUCTION or DEFGRAMMAR");
    if (h.is_symbol("DEFPRODUCTION")) {
      g.add_rule(rule_of(form));
    } else if (h.is_symbol("DEFGRAMMAR")) {
      options_of(form, g);
    } else {
      fail(h, "expected DEFPRODUCTION or DEFGRAMMAR, found " + h.describe());
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string quote(const std::string& s) { return Atom::string(s).to_source(); }

std::string print_arg(const Arg& a) {
  if (const auto* p = std::get_if<Path>(&a)) return "(PATH " + p->str() + ")";
  return std::get<Atom>(a).to_source();
}

std::string print_args(const std::vector<Arg>& args) {
  std::string out;
  for (const auto& a : args) out += " " + print_arg(a);
  return out;
}

std::string print_test(const TestExpr& t) {
  using K = TestExpr::Kind;
  switch (t.kind) {
    case K::kTrue: return "(TRUE)";
    case K::kExists: return "(EXISTS " + t.path.str() + ")";
    case K::kEq: return "(EQ " + t.path.str() + " " + t.atom.to_source() + ")";
    case K::kRoleFillerP: return "(ROLE-FILLER-P " + t.name + ")";
    case K::kHasAdjunct: return "(HAS-ADJUNCT " + t.name + ")";
    case K::kNot: return "(NOT " + print_test(t.operands[0]) + ")";
    case K::kCall: return "(PRED " + t.name + print_args(t.args) + ")";
    case K::kAnd:
    case K::kOr: {
      std::string out = t.kind == K::kAnd ? "(AND" : "(OR";
      for (const auto& o : t.operands) out += " " + print_test(o);
      return out + ")";
    }
  }
  return {};
}

std::string print_selector(const SelectorExpr& s) {
  using K = SelectorExpr::Kind;
  switch (s.kind) {
    case K::kPath: return "(PATH " + s.path.str() + ")";
    case K::kRoleFiller: return "(ROLE-FILLER " + s.name + ")";
    case K::kTheme: return "(THEME)";
    case K::kTempAdjunct: return "(TEMP-ADJUNCT)";
    case K::kTempDuration: return "(TEMP-DURATION)";
    case K::kLocAdjunct: return "(LOC-ADJUNCT)";
    case K::kSelf: return "(SELF)";
    case K::kCall: return "(SEL " + s.name + print_args(s.args) + ")";
  }
  return {};
}

std::string print_action(const Action& a) {
  switch (a.kind) {
    case Action::Kind::kLiteral: return quote(a.text);
    case Action::Kind::kRule: return "(:RULE " + a.category + " " + print_selector(a.selector) + ")";
    case Action::Kind::kOptRule: return "(:OPTRULE " + a.category + " " + print_selector(a.selector) + ")";
    case Action::Kind::kFun: {
      std::string out = "(:FUN " + a.function + print_args(a.args);
      if (!a.features.empty()) {
        out += " :FEATURES";
        for (const auto& f : a.features) out += " " + f;
      }
      return out + ")";
    }
  }
  return {};
}

std::string print_constraint(const Constraint& c) {
  std::string out = "(" + c.feature;
  for (const auto& r : c.at) out += " " + r.str();
  if (c.kind == Constraint::Kind::kAssign) out += " :VAL " + c.value.to_source();
  return out + ")";
}

}  // namespace

std::string print_rule(const Rule& r) {
  std::ostringstream out;
  out << "(DEFPRODUCTION " << quote(r.name) << "\n  (:PRECOND (:CAT " << r.category << " :TEST (";
  if (r.test.kind == TestExpr::Kind::kAnd && r.test.operands.size() > 1) {
    for (std::size_t i = 0; i < r.test.operands.size(); ++i)
      out << (i ? " " : "") << print_test(r.test.operands[i]);
  } else {
    out << print_test(r.test);
  }
  out << "))\n   :ACTIONS (:TEMPLATE";
  for (const auto& a : r.actions) out << "\n              " << print_action(a);
  if (!r.side_effects.empty()) {
    out << "\n             :SIDE-EFFECTS (";
    for (std::size_t i = 0; i < r.side_effects.size(); ++i)
      out << (i ? " " : "") << "(" << r.side_effects[i].function << print_args(r.side_effects[i].args) << ")";
    out << ")";
  }
  if (!r.constraints.empty()) {
    out << "\n             :CONSTRAINTS";
    for (const auto& c : r.constraints) out << " " << print_constraint(c);
  }
  out << ")))\n";
  return out.str();
}

std::string print_grammar(const Grammar& g) {
  std::string out;
  if (g.options_declared || !gil::iequals(g.start, "TXT") || g.side_effect_free) {
    out += "(DEFGRAMMAR :START " + g.start + " :SIDE-EFFECT-FREE " + (g.side_effect_free ? "T" : "NIL") + ")\n\n";
  }
  for (const auto& r : g.rules()) out += print_rule(r) + "\n";
  return out;
}

namespace {

bool arg_equal(const Arg& a, const Arg& b) {
  if (a.index() != b.index()) return false;
  if (const auto* p = std::get_if<Path>(&a)) return *p == std::get<Path>(b);
  return std::get<Atom>(a) == std::get<Atom>(b);
}

bool args_equal(const std::vector<Arg>& a, const std::vector<Arg>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!arg_equal(a[i], b[i])) return false;
  return true;
}

bool test_equal(const TestExpr& a, const TestExpr& b) {
  if (a.kind != b.kind || !(a.path == b.path) || !gil::iequals(a.name, b.name) ||
      a.operands.size() != b.operands.size() || !args_equal(a.args, b.args))
    return false;
  if (a.kind == TestExpr::Kind::kEq && !(a.atom == b.atom)) return false;
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (!test_equal(a.operands[i], b.operands[i])) return false;
  return true;
}

bool selector_equal(const SelectorExpr& a, const SelectorExpr& b) {
  return a.kind == b.kind && a.path == b.path && gil::iequals(a.name, b.name) && args_equal(a.args, b.args);
}

bool action_equal(const Action& a, const Action& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Action::Kind::kLiteral: return a.text == b.text;
    case Action::Kind::kRule:
    case Action::Kind::kOptRule: return gil::iequals(a.category, b.category) && selector_equal(a.selector, b.selector);
    case Action::Kind::kFun: {
      if (!gil::iequals(a.function, b.function) || !args_equal(a.args, b.args) ||
          a.features.size() != b.features.size())
        return false;
      for (std::size_t i = 0; i < a.features.size(); ++i)
        if (!gil::iequals(a.features[i], b.features[i])) return false;
      return true;
    }
  }
  return false;
}

bool ref_equal(const ConstituentRef& a, const ConstituentRef& b) {
  return a.lhs == b.lhs && (a.lhs || (gil::iequals(a.category, b.category) && a.occurrence == b.occurrence));
}

bool rule_equal(const Rule& a, const Rule& b) {
  if (a.name != b.name || !gil::iequals(a.category, b.category) || !test_equal(a.test, b.test) ||
      a.actions.size() != b.actions.size() || a.side_effects.size() != b.side_effects.size() ||
      a.constraints.size() != b.constraints.size())
    return false;
  for (std::size_t i = 0; i < a.actions.size(); ++i)
    if (!action_equal(a.actions[i], b.actions[i])) return false;
  for (std::size_t i = 0; i < a.side_effects.size(); ++i)
    if (!gil::iequals(a.side_effects[i].function, b.side_effects[i].function) ||
        !args_equal(a.side_effects[i].args, b.side_effects[i].args))
      return false;
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const auto& x = a.constraints[i];
    const auto& y = b.constraints[i];
    if (x.kind != y.kind || !gil::iequals(x.feature, y.feature) || x.at.size() != y.at.size()) return false;
    if (x.kind == Constraint::Kind::kAssign && !(x.value == y.value)) return false;
    for (std::size_t j = 0; j < x.at.size(); ++j)
      if (!ref_equal(x.at[j], y.at[j])) return false;
  }
  return true;
}

}  // namespace

bool grammar_equal(const Grammar& a, const Grammar& b) {
  if (!gil::iequals(a.start, b.start) || a.side_effect_free != b.side_effect_free ||
      a.rules().size() != b.rules().size())
    return false;
  for (std::size_t i = 0; i < a.rules().size(); ++i)
    if (!rule_equal(a.rules()[i], b.rules()[i])) return false;
  return true;
}

}  // namespace prodgen::tgl
