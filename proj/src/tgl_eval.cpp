#include <set>

#include "prodgen/registry.hpp"
#include "prodgen/tgl.hpp"

namespace prodgen::tgl {

std::string Diagnostic::str() const {
  std::string out;
  if (pos.line > 0) out += "line " + std::to_string(pos.line) + ": ";
  out += is_error() ? "error: " : "warning: ";
  if (!rule.empty()) out += "rule \"" + rule + "\": ";
  return out + message;
}

namespace {

class Validator {
 public:
  Validator(const Grammar& g, const Registry& reg) : g_(g), reg_(reg) {}

  std::vector<Diagnostic> run() {
    if (g_.rules_for(g_.start).empty()) grammar_error("start category " + g_.start + " has no rules");
    std::set<std::string> warned;
    for (const auto& r : g_.rules()) {
      rule_ = &r;
      test(r.test);
      for (const auto& a : r.actions) {
        if (a.is_call()) {
          selector(a.selector);
          if (g_.rules_for(a.category).empty() && warned.insert(gil::fold(a.category)).second)
            warn("category " + a.category + " has no rules");
        } else if (a.kind == Action::Kind::kFun) {
          if (reg_.side_effect(a.function)) {
            error("'" + a.function + "' is a side effect and cannot be used in a template");
          } else if (!reg_.function(a.function)) {
            error("unknown function '" + a.function + "'");
          }
        }
      }
      for (const auto& s : r.side_effects) {
        if (reg_.function(s.function)) {
          error("'" + s.function + "' is a template function and cannot be used as a side effect");
        } else if (!reg_.side_effect(s.function)) {
          error("unknown side effect '" + s.function + "'");
        }
      }
      for (const auto& c : r.constraints)
        for (const auto& ref : c.at)
          if (!r.resolves(ref))
            error("constraint on " + c.feature + ": constituent " + ref.str() + " does not resolve against the template");
    }
    return std::move(out_);
  }

 private:
  void test(const TestExpr& t) {
    if (t.kind == TestExpr::Kind::kCall && !reg_.predicate(t.name)) error("unknown predicate '" + t.name + "'");
    for (const auto& o : t.operands) test(o);
  }

  void selector(const SelectorExpr& s) {
    if (s.kind == SelectorExpr::Kind::kCall && !reg_.selector(s.name)) error("unknown selector '" + s.name + "'");
  }

  void error(std::string msg) {
    out_.push_back({Diagnostic::Severity::kError, rule_->name, rule_->pos, std::move(msg)});
  }
  void warn(std::string msg) {
    out_.push_back({Diagnostic::Severity::kWarning, rule_->name, rule_->pos, std::move(msg)});
  }
  void grammar_error(std::string msg) { out_.push_back({Diagnostic::Severity::kError, {}, {}, std::move(msg)}); }

  const Grammar& g_;
  const Registry& reg_;
  const Rule* rule_ = nullptr;
  std::vector<Diagnostic> out_;
};

const gil::Path& path_args() {
  static const gil::Path p = gil::Path::parse("ARGS");
  return p;
}

std::string adjunct_attribute(std::string_view kind) {
  std::string k = gil::fold(kind);
  if (k == "temp" || k == "time" || k == "temporal") return "TIME-ADJ";
  if (k == "dur" || k == "duration") return "DUR-ADJ";
  if (k == "loc" || k == "local") return "LOC-ADJ";
  return std::string(kind) + "-ADJ";
}

gil::FsPtr role_filler(const gil::FsPtr& fs, std::string_view role) {
  gil::FsPtr prop = proposition(fs);
  if (!prop) return nullptr;
  auto args = gil::get_path(*prop, path_args());
  if (!args || !args->is_list()) return nullptr;
  for (const auto& item : args->list()) {
    if (!item.is_fs()) continue;
    const gil::Value* r = item.fs()->find("ROLE");
    if (r && r->is_atom() && gil::iequals(r->atom().text, role)) return item.fs();
  }
  return nullptr;
}

gil::FsPtr adjunct(const gil::FsPtr& fs, std::string_view kind) {
  gil::FsPtr prop = proposition(fs);
  if (!prop) return nullptr;
  const gil::Value* v = prop->find(adjunct_attribute(kind));
  return v && v->is_fs() ? v->fs() : nullptr;
}

}  // namespace

std::vector<Diagnostic> validate_grammar(const Grammar& g, const Registry& registry) {
  return Validator(g, registry).run();
}

gil::FsPtr proposition(const gil::FsPtr& fs) {
  if (!fs) return nullptr;
  const gil::Value* theme = fs->find("THEME");
  if (theme && theme->is_fs()) return theme->fs();
  return fs;
}

std::optional<std::vector<Atom>> eval_args(const std::vector<Arg>& args, const gil::FsPtr& fs) {
  std::vector<Atom> out;
  out.reserve(args.size());
  for (const auto& a : args) {
    if (const auto* atom = std::get_if<Atom>(&a)) {
      out.push_back(*atom);
      continue;
    }
    if (!fs) return std::nullopt;
    auto v = gil::get_path(*fs, std::get<Path>(a));
    if (!v || !v->is_atom()) return std::nullopt;
    out.push_back(v->atom());
  }
  return out;
}

bool eval_test(const TestExpr& t, const gil::FsPtr& fs, const Registry& registry) {
  using K = TestExpr::Kind;
  switch (t.kind) {
    case K::kTrue: return true;
    case K::kExists: return fs && gil::get_path(*fs, t.path).has_value();
    case K::kEq: {
      if (!fs) return false;
      auto v = gil::get_path(*fs, t.path);
      return v && v->is_atom() && v->atom() == t.atom;
    }
    case K::kRoleFillerP: return role_filler(fs, t.name) != nullptr;
    case K::kHasAdjunct: return adjunct(fs, t.name) != nullptr;
    case K::kAnd:
      for (const auto& o : t.operands)
        if (!eval_test(o, fs, registry)) return false;
      return true;
    case K::kOr:
      for (const auto& o : t.operands)
        if (eval_test(o, fs, registry)) return true;
      return false;
    case K::kNot: return !eval_test(t.operands.at(0), fs, registry);
    case K::kCall: {
      const PredicateFn* fn = registry.predicate(t.name);
      if (!fn) throw RegistryError("unknown predicate '" + t.name + "'");
      auto args = eval_args(t.args, fs);
      if (!args) return false;
      return (*fn)(fs, *args);
    }
  }
  return false;
}

gil::FsPtr eval_selector(const SelectorExpr& s, const gil::FsPtr& fs, const Registry& registry) {
  using K = SelectorExpr::Kind;
  switch (s.kind) {
    case K::kPath: return gil::get_fs(fs, s.path);
    case K::kRoleFiller: return role_filler(fs, s.name);
    case K::kTheme: return proposition(fs);
    case K::kTempAdjunct: return adjunct(fs, "temp");
    case K::kTempDuration: return adjunct(fs, "dur");
    case K::kLocAdjunct: return adjunct(fs, "loc");
    case K::kSelf: return fs;
    case K::kCall: {
      const SelectorFn* fn = registry.selector(s.name);
      if (!fn) throw RegistryError("unknown selector '" + s.name + "'");
      auto args = eval_args(s.args, fs);
      if (!args) return nullptr;
      return (*fn)(fs, *args);
    }
  }
  return nullptr;
}

}  // namespace prodgen::tgl
