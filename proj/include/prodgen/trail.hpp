#pragma once

#include <string>
#include <vector>

#include "prodgen/features.hpp"
#include "prodgen/registry.hpp"

namespace prodgen {

/// Reversible generation state: the feature graph plus side-effect memory.
/// Marks taken from a trail can be undone to in any nesting order that
/// respects stack discipline.
class Trail {
 public:
  struct Mark {
    std::size_t features = 0;
    std::size_t effects = 0;
  };

  FeatureGraph& features() { return features_; }
  const FeatureGraph& features() const { return features_; }
  const Memory& memory() const { return memory_; }

  Mark mark() const { return {features_.mark(), effects_.size()}; }
  /// Throws std::out_of_range for a mark this trail never handed out.
  void undo_to(const Mark& m);

  void run_side_effect(const std::string& name, const Registry::SideEffect& fx, const gil::FsPtr& input,
                       std::vector<gil::Atom> args);

  std::size_t size() const { return features_.mark() + effects_.size(); }
  bool empty() const { return size() == 0; }

 private:
  struct Effect {
    std::string name;
    const Registry::SideEffect* fx;
    gil::FsPtr input;
    std::vector<gil::Atom> args;
  };

  FeatureGraph features_;
  Memory memory_;
  std::vector<Effect> effects_;
};

}  // namespace prodgen
