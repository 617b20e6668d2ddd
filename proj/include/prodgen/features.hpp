#pragma once

// Feature graph for PATR-style constraints: one variable per (node, feature),
// union-find classes over variables, at most one atom bound per class.
// Every mutation is logged so that undo_to() restores an earlier state
// exactly. No path compression, so undoing a union is a constant-time
// pointer reset.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prodgen/gil.hpp"

namespace prodgen {

using NodeId = std::uint32_t;

class FeatureGraph {
 public:
  NodeId new_node();
  std::size_t node_count() const { return next_node_; }

  /// Binds the class of (node, feature). False on overwrite with a different
  /// atom; nothing changes in that case.
  bool assign(NodeId node, std::string_view feature, const gil::Atom& value);
  /// Merges the classes of two (node, feature) variables. False when both are
  /// bound to different atoms; nothing changes in that case.
  bool equate(NodeId a, std::string_view feature_a, NodeId b, std::string_view feature_b);

  std::optional<gil::Atom> value(NodeId node, std::string_view feature) const;
  bool same_class(NodeId a, std::string_view feature_a, NodeId b, std::string_view feature_b) const;
  /// Bound features of one node.
  std::map<std::string, gil::Atom> bindings(NodeId node) const;

  std::size_t mark() const { return log_.size(); }
  void undo_to(std::size_t mark);
  /// True when no node, variable or binding exists.
  bool pristine() const { return log_.empty() && next_node_ == 0 && vars_.empty(); }

 private:
  struct Var {
    int parent;
    int rank;
    std::optional<gil::Atom> value;
  };
  struct Entry {
    enum class Kind { kNode, kVar, kBind, kUnion };
    Kind kind;
    int var = -1;
    int root = -1;
    bool rank_bumped = false;
    std::map<std::pair<NodeId, std::string>, int>::iterator key;
  };

  int var(NodeId node, std::string_view feature);
  int lookup(NodeId node, std::string_view feature) const;
  int find(int v) const;

  NodeId next_node_ = 0;
  std::vector<Var> vars_;
  std::map<std::pair<NodeId, std::string>, int> index_;
  std::vector<Entry> log_;
};

}  // namespace prodgen
