#pragma once

// Named extension points referenced from grammars: test predicates,
// selectors, inflection functions and side effects. Populate before
// generation; treat as immutable afterwards.

#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prodgen/gil.hpp"

namespace prodgen {

/// Memory touched by side effects (e.g. a discourse memory).
using Memory = std::map<std::string, std::string>;

struct InflectionRequest {
  std::string function;
  std::vector<gil::Atom> args;
  /// Bound features only, keyed by upper-case feature name.
  std::map<std::string, gil::Atom> features;

  std::string str() const;
  friend bool operator==(const InflectionRequest& a, const InflectionRequest& b);
};

using PredicateFn = std::function<bool(const gil::FsPtr&, std::span<const gil::Atom>)>;
using SelectorFn = std::function<gil::FsPtr(const gil::FsPtr&, std::span<const gil::Atom>)>;
using InflectionFn = std::function<std::string(const InflectionRequest&)>;
using EffectFn = std::function<void(Memory&, const gil::FsPtr&, std::span<const gil::Atom>)>;

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by inflection functions (unknown lemma, no matching cell, ...).
class InflectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Registry {
 public:
  struct SideEffect {
    EffectFn apply;
    EffectFn undo;
  };

  void register_predicate(std::string name, PredicateFn fn);
  void register_selector(std::string name, SelectorFn fn);
  /// Template functions (`:FUN`). Names are shared with side effects.
  void register_function(std::string name, InflectionFn fn);
  /// Side effects must come with an undo callback.
  void register_side_effect(std::string name, EffectFn apply, EffectFn undo);

  const PredicateFn* predicate(std::string_view name) const;
  const SelectorFn* selector(std::string_view name) const;
  const InflectionFn* function(std::string_view name) const;
  const SideEffect* side_effect(std::string_view name) const;

  std::string inflect(const InflectionRequest& req) const;

 private:
  void claim(const std::string& name, const char* kind, bool callable);

  std::map<std::string, PredicateFn> predicates_;
  std::map<std::string, SelectorFn> selectors_;
  std::map<std::string, InflectionFn> functions_;
  std::map<std::string, SideEffect> side_effects_;
};

}  // namespace prodgen
