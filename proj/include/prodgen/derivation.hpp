#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "prodgen/features.hpp"
#include "prodgen/gil.hpp"

namespace prodgen {

/// Frontier element. Inflection calls are kept unrealized until output time
/// so that later constraint changes can re-inflect them.
struct Preterminal {
  enum class Kind { kLiteral, kInflect };

  Kind kind = Kind::kLiteral;
  std::string text;      // kLiteral
  std::string function;  // kInflect
  std::vector<gil::Atom> args;
  std::vector<std::pair<std::string, NodeId>> hooks;  // (feature, node) read at realization

  static Preterminal literal(std::string text);
  static Preterminal inflect(std::string function, std::vector<gil::Atom> args,
                             std::vector<std::pair<std::string, NodeId>> hooks = {});
};

/// A preterminal together with the hook values it was last realized under.
struct RealizedToken {
  Preterminal token;
  std::map<std::string, gil::Atom> features;
  std::string text;
};

struct DerivationNode;
using DerivationChild = std::variant<std::shared_ptr<const DerivationNode>, Preterminal>;

struct DerivationNode {
  std::string category;
  std::string rule;
  gil::FsPtr input;
  NodeId node = 0;
  std::map<std::string, gil::Atom> features;  // bindings when the solution was emitted
  std::vector<DerivationChild> children;      // template order
  std::optional<std::size_t> bt_point;

  /// Rule names of this node and all descendants, pre-order.
  std::vector<std::string> applied_rules() const;
};

/// Joins realized tokens with single spaces; no space is added next to a
/// token that ends or begins with a tab or newline. Empty tokens vanish.
std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace prodgen
