#include "prodgen/registry.hpp"

namespace prodgen {

std::string InflectionRequest::str() const {
  std::string out = function + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].to_source();
  }
  for (const auto& [name, value] : features) out += "; " + name + "=" + value.display();
  return out + ")";
}

bool operator==(const InflectionRequest& a, const InflectionRequest& b) {
  return gil::iequals(a.function, b.function) && a.args == b.args && a.features == b.features;
}

void Registry::claim(const std::string& name, const char* kind, bool callable) {
  if (name.empty()) throw RegistryError(std::string("empty ") + kind + " name");
  std::string key = gil::fold(name);
  bool taken = callable ? (functions_.count(key) || side_effects_.count(key))
                        : (std::string(kind) == "predicate" ? predicates_.count(key) : selectors_.count(key));
  if (taken) throw RegistryError(std::string(kind) + " '" + name + "' is already registered");
}

void Registry::register_predicate(std::string name, PredicateFn fn) {
  claim(name, "predicate", false);
  predicates_.emplace(gil::fold(name), std::move(fn));
}

void Registry::register_selector(std::string name, SelectorFn fn) {
  claim(name, "selector", false);
  selectors_.emplace(gil::fold(name), std::move(fn));
}

void Registry::register_function(std::string name, InflectionFn fn) {
  claim(name, "function", true);
  if (!fn) throw RegistryError("function '" + name + "' has no implementation");
  functions_.emplace(gil::fold(name), std::move(fn));
}

void Registry::register_side_effect(std::string name, EffectFn apply, EffectFn undo) {
  claim(name, "side effect", true);
  if (!apply) throw RegistryError("side effect '" + name + "' has no implementation");
  if (!undo) throw RegistryError("side effect '" + name + "' must supply an undo callback");
  side_effects_.emplace(gil::fold(name), SideEffect{std::move(apply), std::move(undo)});
}

namespace {
template <typename Map>
const typename Map::mapped_type* lookup(const Map& m, std::string_view name) {
  auto it = m.find(gil::fold(name));
  return it == m.end() ? nullptr : &it->second;
}
}  // namespace

const PredicateFn* Registry::predicate(std::string_view name) const { return lookup(predicates_, name); }
const SelectorFn* Registry::selector(std::string_view name) const { return lookup(selectors_, name); }
const InflectionFn* Registry::function(std::string_view name) const { return lookup(functions_, name); }
const Registry::SideEffect* Registry::side_effect(std::string_view name) const {
  return lookup(side_effects_, name);
}

std::string Registry::inflect(const InflectionRequest& req) const {
  const InflectionFn* fn = function(req.function);
  if (!fn) throw InflectionError("unknown function '" + req.function + "'");
  return (*fn)(req);
}

}  // namespace prodgen
