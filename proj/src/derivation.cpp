#include "prodgen/derivation.hpp"

namespace prodgen {

Preterminal Preterminal::literal(std::string text) {
  Preterminal p;
  p.kind = Kind::kLiteral;
  p.text = std::move(text);
  return p;
}

Preterminal Preterminal::inflect(std::string function, std::vector<gil::Atom> args,
                                 std::vector<std::pair<std::string, NodeId>> hooks) {
  Preterminal p;
  p.kind = Kind::kInflect;
  p.function = std::move(function);
  p.args = std::move(args);
  p.hooks = std::move(hooks);
  return p;
}

namespace {
void collect(const DerivationNode& n, std::vector<std::string>& out) {
  out.push_back(n.rule);
  for (const auto& c : n.children)
    if (const auto* child = std::get_if<std::shared_ptr<const DerivationNode>>(&c)) collect(**child, out);
}

bool is_break(char c) { return c == '\n' || c == '\t'; }
}  // namespace

std::vector<std::string> DerivationNode::applied_rules() const {
  std::vector<std::string> out;
  collect(*this, out);
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    if (!out.empty() && !is_break(out.back()) && !is_break(t.front())) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace prodgen
