#pragma once

// The interpreter: matching, conflict resolution and firing, driven
// top-down and left to right, with solutions streamed on demand.

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prodgen/backtrack.hpp"
#include "prodgen/derivation.hpp"
#include "prodgen/prefs.hpp"
#include "prodgen/registry.hpp"
#include "prodgen/tgl.hpp"
#include "prodgen/trail.hpp"

namespace prodgen {

/// Raised for grammars that cannot be run, e.g. a sub-problem that
/// requires itself.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConstraintError {
  std::string rule;
  std::string feature;
  std::string message;
};

struct TraceEvent {
  enum class Kind { kRuleFired, kRuleFailed, kBtCreated, kBtExpanded, kMemoHit, kConstraintConflict, kSolution };

  Kind kind = Kind::kRuleFired;
  std::size_t choice = 0;
  std::string category;
  std::string rule;
  std::size_t bt = 0;
  std::string detail;

  std::string str() const;
};

using TraceSink = std::function<void(const TraceEvent&)>;

struct Stats {
  std::size_t solutions = 0;
  std::size_t rules_fired = 0;
  std::size_t rules_failed = 0;
  std::size_t constraint_conflicts = 0;
  std::size_t memo_hits = 0;
  std::size_t memo_misses = 0;
  std::size_t inflections = 0;
  std::size_t rerealizations = 0;
  std::size_t reused_tokens = 0;
  std::size_t bt_created = 0;
  std::size_t bt_expanded = 0;
  std::size_t choices = 0;

  std::string report() const;
};

struct FireRecord {
  std::size_t choice = 0;
  std::string rule;
  bool succeeded = false;
  bool new_choice = false;  // choice created in the same step
};

/// What one stream step did. Step 0 builds the first solutions; every later
/// step expands one backtrack point.
struct ExpansionRecord {
  std::size_t step = 0;
  std::optional<std::size_t> bt;
  std::optional<std::size_t> choice;  // choice of the expanded point
  std::vector<FireRecord> fired;
  bool new_variant = false;
  std::size_t solutions = 0;
};

struct Solution {
  std::string text;
  prefs::Rational weight;
  std::shared_ptr<const DerivationNode> derivation;
  std::vector<RealizedToken> frontier;
  Memory memory;
  std::size_t step = 0;
  std::optional<std::size_t> expanded;  // backtrack point whose expansion produced it
};

struct GeneratorOptions {
  std::string start;  // empty: the grammar's start category
  bool memo = true;
  prefs::CriteriaSpec criteria;
  TraceSink trace;
};

/// Applicable rules of `category` on `fs`, in source order.
std::vector<const tgl::Rule*> match(const tgl::Grammar& g, const Registry& registry, std::string_view category,
                                    const gil::FsPtr& fs);

/// Asserts the rule's equations. `slot_nodes` holds the feature node of each
/// template position (ignored for non-call actions). On conflict nothing is
/// left behind on the graph.
std::optional<ConstraintError> apply_constraints(const tgl::Rule& rule, NodeId lhs,
                                                 const std::vector<NodeId>& slot_nodes, FeatureGraph& graph);

/// In-order preterminals of a derivation.
std::vector<Preterminal> frontier(const DerivationNode& node);

/// Realizes a derivation, reading hooks from the feature snapshots stored in
/// its nodes.
std::string realize(const DerivationNode& node, const Registry& registry);

/// Lazily enumerates the solutions of one input.
class Generator {
 public:
  Generator(const tgl::Grammar& g, const Registry& registry, gil::FsPtr input, GeneratorOptions options = {});
  ~Generator();
  Generator(const Generator&) = delete;
  Generator& operator=(const Generator&) = delete;

  std::optional<Solution> next();
  /// Up to `max` further solutions; 0 takes all.
  std::vector<Solution> take(std::size_t max);
  bool done() const;

  const Stats& stats() const;
  const backtrack::BtTable& table() const;
  const Trail& trail() const;
  const std::vector<ExpansionRecord>& expansions() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
  friend std::optional<Solution> fire(const tgl::Grammar&, const Registry&, const tgl::Rule&, const gil::FsPtr&,
                                      GeneratorOptions);
};

/// First solution of `rule` on `fs`, or nullopt when the rule does not apply
/// or fails. Leaves no state behind.
std::optional<Solution> fire(const tgl::Grammar& g, const Registry& registry, const tgl::Rule& rule,
                             const gil::FsPtr& fs, GeneratorOptions options = {});

/// Stable sort by descending weight.
void rank_by_weight(std::vector<Solution>& solutions);

}  // namespace prodgen
