#include "prodgen/features.hpp"

#include <stdexcept>

namespace prodgen {

namespace {
std::string feature_key(std::string_view f) {
  std::string k(f);
  for (char& c : k) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return k;
}
}  // namespace

NodeId FeatureGraph::new_node() {
  log_.push_back({Entry::Kind::kNode});
  return next_node_++;
}

int FeatureGraph::lookup(NodeId node, std::string_view feature) const {
  auto it = index_.find({node, feature_key(feature)});
  return it == index_.end() ? -1 : it->second;
}

int FeatureGraph::var(NodeId node, std::string_view feature) {
  auto [it, inserted] = index_.emplace(std::make_pair(node, feature_key(feature)), static_cast<int>(vars_.size()));
  if (inserted) {
    vars_.push_back({it->second, 0, std::nullopt});
    Entry e{Entry::Kind::kVar};
    e.var = it->second;
    e.key = it;
    log_.push_back(e);
  }
  return it->second;
}

int FeatureGraph::find(int v) const {
  while (vars_[v].parent != v) v = vars_[v].parent;
  return v;
}

bool FeatureGraph::assign(NodeId node, std::string_view feature, const gil::Atom& value) {
  int root = find(var(node, feature));
  if (vars_[root].value) return *vars_[root].value == value;
  vars_[root].value = value;
  Entry e{Entry::Kind::kBind};
  e.var = root;
  log_.push_back(e);
  return true;
}

bool FeatureGraph::equate(NodeId a, std::string_view feature_a, NodeId b, std::string_view feature_b) {
  int ra = find(var(a, feature_a));
  int rb = find(var(b, feature_b));
  if (ra == rb) return true;
  if (vars_[ra].value && vars_[rb].value && !(*vars_[ra].value == *vars_[rb].value)) return false;
  if (vars_[ra].rank < vars_[rb].rank) std::swap(ra, rb);
  // rb goes under ra
  Entry u{Entry::Kind::kUnion};
  u.var = rb;
  u.root = ra;
  u.rank_bumped = vars_[ra].rank == vars_[rb].rank;
  vars_[rb].parent = ra;
  if (u.rank_bumped) ++vars_[ra].rank;
  log_.push_back(u);
  if (!vars_[ra].value && vars_[rb].value) {
    vars_[ra].value = vars_[rb].value;
    Entry bind{Entry::Kind::kBind};
    bind.var = ra;
    log_.push_back(bind);
  }
  return true;
}

std::optional<gil::Atom> FeatureGraph::value(NodeId node, std::string_view feature) const {
  int v = lookup(node, feature);
  if (v < 0) return std::nullopt;
  return vars_[find(v)].value;
}

bool FeatureGraph::same_class(NodeId a, std::string_view feature_a, NodeId b, std::string_view feature_b) const {
  int va = lookup(a, feature_a);
  int vb = lookup(b, feature_b);
  if (va < 0 || vb < 0) return va == vb && va >= 0;
  return find(va) == find(vb);
}

std::map<std::string, gil::Atom> FeatureGraph::bindings(NodeId node) const {
  std::map<std::string, gil::Atom> out;
  for (auto it = index_.lower_bound({node, std::string()}); it != index_.end() && it->first.first == node; ++it) {
    if (const auto& v = vars_[find(it->second)].value) out.emplace(it->first.second, *v);
  }
  return out;
}

void FeatureGraph::undo_to(std::size_t mark) {
  if (mark > log_.size()) throw std::out_of_range("feature graph mark is not from this trail");
  while (log_.size() > mark) {
    Entry e = log_.back();
    log_.pop_back();
    switch (e.kind) {
      case Entry::Kind::kNode: --next_node_; break;
      case Entry::Kind::kVar:
        index_.erase(e.key);
        vars_.pop_back();
        break;
      case Entry::Kind::kBind: vars_[e.var].value.reset(); break;
      case Entry::Kind::kUnion:
        vars_[e.var].parent = e.var;
        if (e.rank_bumped) --vars_[e.root].rank;
        break;
    }
  }
}

}  // namespace prodgen
