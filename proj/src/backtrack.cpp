#include "prodgen/backtrack.hpp"

#include <algorithm>
#include <cctype>

namespace prodgen::backtrack {

std::vector<std::string> BacktrackPoint::remainder_names() const {
  std::vector<std::string> out;
  for (const tgl::Rule* r : choice->remainder()) out.push_back(r->name);
  return out;
}

BacktrackPoint& BtTable::record(Choice* choice, std::optional<std::pair<std::size_t, std::size_t>> parent) {
  BacktrackPoint p;
  p.id = points_.size() + 1;
  p.choice = choice;
  p.parent = parent;
  choice->bt = p.id;
  points_.push_back(std::move(p));
  return points_.back();
}

const BacktrackPoint* BtTable::find(std::size_t id) const {
  return id >= 1 && id <= points_.size() ? &points_[id - 1] : nullptr;
}

BacktrackPoint* BtTable::find(std::size_t id) {
  return id >= 1 && id <= points_.size() ? &points_[id - 1] : nullptr;
}

std::string render_context(const std::vector<ContextItem>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += " . ";
    if (const auto* tok = std::get_if<RealizedToken>(&item))
      out += tok->text;
    else
      out += "V" + std::to_string(std::get<EgoRef>(item).bt);
  }
  return out;
}

std::string BtTable::render() const {
  std::string out;
  for (const auto& p : points_) {
    out += "B" + std::to_string(p.id);
    if (p.parent) out += " (in B" + std::to_string(p.parent->first) + "/" + std::to_string(p.parent->second) + ")";
    out += " | " + (p.pre_context ? render_context(*p.pre_context) : std::string("?"));
    out += " | {";
    bool first = true;
    for (const auto& ego : p.egos) {
      if (!ego) continue;
      out += (first ? "" : ", ") + render_context(ego->items);
      first = false;
    }
    out += "} | " + (p.post_context ? render_context(*p.post_context) : std::string("?"));
    out += " | remaining:";
    for (const auto& name : p.remainder_names()) out += " \"" + name + "\"";
    out += '\n';
  }
  return out;
}

Choice* MemoCache::lookup(std::string_view category, const gil::FeatureStructure& input) {
  auto it = buckets_.find(gil::fs_hash(input) ^ std::hash<std::string>{}(gil::fold(category)));
  if (it != buckets_.end()) {
    for (Choice* c : it->second) {
      if (gil::iequals(c->category, category) && gil::fs_equal(*c->input, input)) {
        ++hits_;
        return c;
      }
    }
  }
  ++misses_;
  return nullptr;
}

void MemoCache::insert(Choice* choice) {
  buckets_[gil::fs_hash(*choice->input) ^ std::hash<std::string>{}(gil::fold(choice->category))].push_back(choice);
  ++size_;
}

void MemoCache::clear() {
  buckets_.clear();
  size_ = 0;
}

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::map<std::string, gil::Atom> read_hooks(const Preterminal& tok, const FeatureReader& read) {
  std::map<std::string, gil::Atom> out;
  for (const auto& [feature, node] : tok.hooks)
    if (auto v = read(node, feature)) out.emplace(upper(feature), *v);
  return out;
}

std::string inflect(const Preterminal& tok, std::map<std::string, gil::Atom> features, const Registry& registry) {
  return registry.inflect(InflectionRequest{tok.function, tok.args, std::move(features)});
}

}  // namespace

Refresh refresh(RealizedToken& tok, bool fresh, const FeatureReader& read, const Registry& registry) {
  if (tok.token.kind == Preterminal::Kind::kLiteral) {
    tok.text = tok.token.text;
    return fresh ? Refresh::kFresh : Refresh::kReused;
  }
  auto features = read_hooks(tok.token, read);
  if (!fresh && features == tok.features) return Refresh::kReused;
  tok.text = inflect(tok.token, features, registry);
  tok.features = std::move(features);
  return fresh ? Refresh::kFresh : Refresh::kRerealized;
}

std::size_t recompute_affected(std::vector<RealizedToken>& frontier, const FeatureReader& read,
                               const Registry& registry) {
  std::size_t n = 0;
  for (auto& tok : frontier)
    if (refresh(tok, false, read, registry) == Refresh::kRerealized) ++n;
  return n;
}

RealizedToken Realizer::realize(const std::string& key, const Preterminal& token, const FeatureReader& read,
                                const Registry& registry, Counts& counts) {
  auto it = cache_.find(key);
  bool fresh = it == cache_.end();
  if (fresh) it = cache_.emplace(key, RealizedToken{token, {}, {}}).first;
  RealizedToken& cached = it->second;
  cached.token = token;  // node ids of hooks differ per assembly
  switch (refresh(cached, fresh, read, registry)) {
    case Refresh::kReused: ++counts.reused; break;
    case Refresh::kRerealized: ++counts.rerealized; break;
    case Refresh::kFresh:
      if (token.kind == Preterminal::Kind::kInflect) ++counts.fresh;
      break;
  }
  return cached;
}

}  // namespace prodgen::backtrack
