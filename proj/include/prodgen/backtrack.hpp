#pragma once

// Packed derivation forest, table of backtrack points, memo cache and the
// realization cache that carries preterminals across solutions.
//
// A Choice is one sub-problem (category, input) with its ordered conflict
// set. Firing a rule of a choice yields a Variant whose slots are tokens or
// child choices. Choices with two or more applicable rules are backtrack
// points; each of their variants is one element of the ego set.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "prodgen/derivation.hpp"
#include "prodgen/registry.hpp"
#include "prodgen/tgl.hpp"

namespace prodgen::backtrack {

struct Choice;

struct Slot {
  enum class Kind { kToken, kCall, kEmpty };

  Kind kind = Kind::kEmpty;
  std::size_t action = 0;  // template position
  Choice* child = nullptr;  // kCall
};

struct Variant {
  const tgl::Rule* rule = nullptr;
  std::size_t index = 0;   // position in the owning choice's variant list
  std::size_t serial = 0;  // unique across the forest
  std::size_t step = 0;    // stream step that created it
  std::vector<Slot> slots;
  std::vector<std::vector<gil::Atom>> token_args;   // resolved FunCall args, by template position
  std::vector<std::vector<gil::Atom>> effect_args;  // resolved side-effect args
};

struct Choice {
  std::size_t id = 0;
  std::string category;
  gil::FsPtr input;
  std::vector<const tgl::Rule*> conflict_set;  // preference order
  std::size_t next = 0;                        // first unfired rule
  std::size_t failed = 0;                      // rules consumed without a variant
  std::vector<std::unique_ptr<Variant>> variants;
  std::optional<std::size_t> bt;  // backtrack point id
  std::size_t step = 0;           // stream step that created it
  std::vector<Choice*> parents;

  bool exhausted() const { return next >= conflict_set.size(); }
  std::span<const tgl::Rule* const> remainder() const {
    return std::span<const tgl::Rule* const>(conflict_set).subspan(next);
  }
};

/// Reference to another point's ego set inside a context, written V<id>.
struct EgoRef {
  std::size_t bt = 0;
};
using ContextItem = std::variant<RealizedToken, EgoRef>;

struct EgoVariant {
  std::string rule;
  std::vector<ContextItem> items;  // realization when first assembled
  std::map<std::string, gil::Atom> features;
};

struct BacktrackPoint {
  std::size_t id = 0;  // 1-based
  Choice* choice = nullptr;
  std::optional<std::pair<std::size_t, std::size_t>> parent;  // (enclosing point, variant index)
  std::optional<std::vector<ContextItem>> pre_context;        // pending until a solution passes through
  std::optional<std::vector<ContextItem>> post_context;
  std::vector<std::optional<EgoVariant>> egos;  // by variant index; empty until assembled
  std::size_t expansions = 0;
  bool live = true;  // reachable from the root through current variants

  std::vector<std::string> remainder_names() const;
  std::size_t consumed_without_variant() const { return choice->failed; }
  bool open() const { return live && !choice->exhausted(); }
};

class BtTable {
 public:
  BacktrackPoint& record(Choice* choice, std::optional<std::pair<std::size_t, std::size_t>> parent);
  const std::vector<BacktrackPoint>& points() const { return points_; }
  std::vector<BacktrackPoint>& points() { return points_; }
  const BacktrackPoint* find(std::size_t id) const;
  BacktrackPoint* find(std::size_t id);
  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }

  /// One line per point: id, pre-context, ego set, post-context, remainder.
  std::string render() const;

 private:
  std::vector<BacktrackPoint> points_;
};

std::string render_context(const std::vector<ContextItem>& items);

/// Successful sub-problems keyed by category and input structure.
class MemoCache {
 public:
  Choice* lookup(std::string_view category, const gil::FeatureStructure& input);
  void insert(Choice* choice);
  void clear();
  std::size_t size() const { return size_; }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::unordered_map<std::size_t, std::vector<Choice*>> buckets_;
  std::size_t size_ = 0;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Current value of a feature hook.
using FeatureReader = std::function<std::optional<gil::Atom>(NodeId, const std::string&)>;

enum class Refresh { kReused, kRerealized, kFresh };

/// Reads the hooks of `tok` and re-inflects when they differ from the values
/// it was last realized under. `fresh` forces realization.
Refresh refresh(RealizedToken& tok, bool fresh, const FeatureReader& read, const Registry& registry);

/// Re-realizes exactly the frontier tokens whose hook values changed and
/// returns how many were re-inflected.
std::size_t recompute_affected(std::vector<RealizedToken>& frontier, const FeatureReader& read,
                               const Registry& registry);

/// Realized tokens of earlier solutions, keyed by the token's occurrence path
/// through the forest.
class Realizer {
 public:
  struct Counts {
    std::size_t reused = 0;
    std::size_t rerealized = 0;
    std::size_t fresh = 0;
  };

  RealizedToken realize(const std::string& key, const Preterminal& token, const FeatureReader& read,
                        const Registry& registry, Counts& counts);
  std::size_t size() const { return cache_.size(); }

 private:
  std::unordered_map<std::string, RealizedToken> cache_;
};

}  // namespace prodgen::backtrack
