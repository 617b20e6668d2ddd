#include "prodgen/engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace prodgen {

using backtrack::BacktrackPoint;
using backtrack::Choice;
using backtrack::ContextItem;
using backtrack::EgoRef;
using backtrack::EgoVariant;
using backtrack::Slot;
using backtrack::Variant;

namespace {

constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string TraceEvent::str() const {
  std::string where = "#" + std::to_string(choice) + " " + category;
  switch (kind) {
    case Kind::kRuleFired: return "fire    " + where + " " + quoted(rule);
    case Kind::kRuleFailed: return "fail    " + where + " " + quoted(rule) + ": " + detail;
    case Kind::kBtCreated: return "bt+     B" + std::to_string(bt) + " at " + where + " (" + detail + ")";
    case Kind::kBtExpanded: return "expand  B" + std::to_string(bt) + " at " + where + " " + quoted(rule);
    case Kind::kMemoHit: return "memo    " + where;
    case Kind::kConstraintConflict: return "clash   " + where + " " + quoted(rule) + ": " + detail;
    case Kind::kSolution: return "emit    " + detail;
  }
  return {};
}

std::string Stats::report() const {
  std::ostringstream out;
  out << "solutions: " << solutions << '\n'
      << "rules fired: " << rules_fired << '\n'
      << "rules failed: " << rules_failed << '\n'
      << "constraint conflicts: " << constraint_conflicts << '\n'
      << "memo hits: " << memo_hits << '\n'
      << "memo misses: " << memo_misses << '\n'
      << "inflections: " << inflections << '\n'
      << "re-realizations: " << rerealizations << '\n'
      << "reused tokens: " << reused_tokens << '\n'
      << "backtrack points created: " << bt_created << '\n'
      << "backtrack points expanded: " << bt_expanded << '\n';
  return out.str();
}

std::vector<const tgl::Rule*> match(const tgl::Grammar& g, const Registry& registry, std::string_view category,
                                    const gil::FsPtr& fs) {
  std::vector<const tgl::Rule*> out;
  for (const tgl::Rule* r : g.rules_for(category))
    if (tgl::eval_test(r->test, fs, registry)) out.push_back(r);
  return out;
}

std::optional<ConstraintError> apply_constraints(const tgl::Rule& rule, NodeId lhs,
                                                 const std::vector<NodeId>& slot_nodes, FeatureGraph& graph) {
  auto node_of = [&](const tgl::ConstituentRef& ref) -> NodeId {
    if (ref.lhs) return lhs;
    auto at = rule.resolve(ref);
    if (!at || *at >= slot_nodes.size() || slot_nodes[*at] == kNoNode)
      throw GenerationError("rule \"" + rule.name + "\": unresolved constituent " + ref.str());
    return slot_nodes[*at];
  };
  std::size_t mark = graph.mark();
  for (const auto& c : rule.constraints) {
    if (c.kind == tgl::Constraint::Kind::kAssign) {
      NodeId n = node_of(c.at[0]);
      if (!graph.assign(n, c.feature, c.value)) {
        std::string had = graph.value(n, c.feature)->display();
        graph.undo_to(mark);
        return ConstraintError{rule.name, c.feature,
                               "cannot set " + c.feature + " of " + c.at[0].str() + " to " + c.value.display() +
                                   ": already " + had};
      }
      continue;
    }
    NodeId first = node_of(c.at[0]);
    for (std::size_t k = 1; k < c.at.size(); ++k) {
      NodeId other = node_of(c.at[k]);
      if (!graph.equate(first, c.feature, other, c.feature)) {
        std::string a = graph.value(first, c.feature)->display();
        std::string b = graph.value(other, c.feature)->display();
        graph.undo_to(mark);
        return ConstraintError{rule.name, c.feature,
                               "cannot equate " + c.feature + " of " + c.at[0].str() + " (" + a + ") and " +
                                   c.at[k].str() + " (" + b + ")"};
      }
    }
  }
  return std::nullopt;
}

namespace {

void collect_frontier(const DerivationNode& n, std::vector<Preterminal>& out) {
  for (const auto& c : n.children) {
    if (const auto* child = std::get_if<std::shared_ptr<const DerivationNode>>(&c))
      collect_frontier(**child, out);
    else
      out.push_back(std::get<Preterminal>(c));
  }
}

void collect_features(const DerivationNode& n, std::unordered_map<NodeId, const DerivationNode*>& out) {
  out.emplace(n.node, &n);
  for (const auto& c : n.children)
    if (const auto* child = std::get_if<std::shared_ptr<const DerivationNode>>(&c)) collect_features(**child, out);
}

}  // namespace

std::vector<Preterminal> frontier(const DerivationNode& node) {
  std::vector<Preterminal> out;
  collect_frontier(node, out);
  return out;
}

std::string realize(const DerivationNode& node, const Registry& registry) {
  std::unordered_map<NodeId, const DerivationNode*> nodes;
  collect_features(node, nodes);
  backtrack::FeatureReader read = [&](NodeId id, const std::string& feature) -> std::optional<gil::Atom> {
    auto it = nodes.find(id);
    if (it == nodes.end()) return std::nullopt;
    std::string key = feature;
    for (char& ch : key) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    auto f = it->second->features.find(key);
    if (f == it->second->features.end()) return std::nullopt;
    return f->second;
  };
  std::vector<std::string> texts;
  for (auto& p : frontier(node)) {
    RealizedToken tok{std::move(p), {}, {}};
    backtrack::refresh(tok, true, read, registry);
    texts.push_back(std::move(tok.text));
  }
  return join_tokens(texts);
}

void rank_by_weight(std::vector<Solution>& solutions) {
  std::stable_sort(solutions.begin(), solutions.end(),
                   [](const Solution& a, const Solution& b) { return a.weight > b.weight; });
}

struct Generator::Impl {
  struct Visit {
    Choice* choice;
    NodeId node;
  };
  struct Decision {
    Choice* choice;
    std::size_t variant;
    NodeId node;
    std::vector<NodeId> nodes;
  };
  enum class Mode { kFirst, kAll };
  struct Walk {
    Mode mode = Mode::kAll;
    const Variant* required = nullptr;
    std::size_t used = 0;
    bool found = false;
    std::vector<Visit> agenda;
    std::vector<Decision> decisions;
    std::unordered_map<const Choice*, bool> reach;
  };

  Impl(const tgl::Grammar& g, const Registry& r, gil::FsPtr in, GeneratorOptions o)
      : grammar(g), registry(r), input(std::move(in)), options(std::move(o)) {}

  const tgl::Grammar& grammar;
  const Registry& registry;
  gil::FsPtr input;
  GeneratorOptions options;
  const tgl::Rule* forced_rule = nullptr;

  Trail trail;
  backtrack::BtTable table;
  backtrack::MemoCache memo;
  backtrack::Realizer realizer;
  Stats stats;
  std::vector<std::unique_ptr<Choice>> choices;
  std::vector<ExpansionRecord> records;
  std::vector<std::pair<Choice*, std::size_t>> building;
  Walk* walk = nullptr;
  std::deque<Solution> queue;
  Choice* root = nullptr;
  std::size_t step = 0;
  std::size_t serial = 0;
  bool started = false;
  bool finished = false;
  bool memo_cleared = false;

  void emit(TraceEvent ev) {
    if (options.trace) options.trace(ev);
  }

  TraceEvent event(TraceEvent::Kind kind, const Choice& c) {
    TraceEvent ev;
    ev.kind = kind;
    ev.choice = c.id;
    ev.category = c.category;
    return ev;
  }

  // ---- construction -------------------------------------------------------

  std::optional<std::pair<std::size_t, std::size_t>> enclosing_point() const {
    for (auto it = building.rbegin(); it != building.rend(); ++it)
      if (it->first->bt) return std::make_pair(*it->first->bt, it->second);
    if (walk) {
      for (auto it = walk->decisions.rbegin(); it != walk->decisions.rend(); ++it)
        if (it->choice->bt) return std::make_pair(*it->choice->bt, it->variant);
    }
    return std::nullopt;
  }

  static bool same_problem(const Choice& c, std::string_view category, const gil::FeatureStructure& fs) {
    return gil::iequals(c.category, category) && gil::fs_equal(*c.input, fs);
  }

  std::vector<const Choice*> ancestors_of(Choice* from) const {
    std::vector<const Choice*> out;
    std::unordered_set<const Choice*> seen;
    std::vector<Choice*> todo;
    if (from) todo.push_back(from);
    for (const auto& b : building) todo.push_back(b.first);
    while (!todo.empty()) {
      Choice* c = todo.back();
      todo.pop_back();
      if (!seen.insert(c).second) continue;
      out.push_back(c);
      for (Choice* p : c->parents) todo.push_back(p);
    }
    return out;
  }

  [[noreturn]] void cycle(std::string_view category) const {
    throw GenerationError("category " + std::string(category) +
                          " requires itself on the same input; the grammar loops");
  }

  void check_cycle(std::string_view category, const gil::FsPtr& fs, Choice* parent, Choice* hit) const {
    auto ancestors = ancestors_of(parent);
    if (!hit) {
      for (const Choice* a : ancestors)
        if (same_problem(*a, category, *fs)) cycle(category);
      return;
    }
    std::unordered_set<const Choice*> above(ancestors.begin(), ancestors.end());
    std::unordered_set<const Choice*> seen;
    std::vector<const Choice*> todo{hit};
    while (!todo.empty()) {
      const Choice* c = todo.back();
      todo.pop_back();
      if (!seen.insert(c).second) continue;
      if (above.count(c)) cycle(category);
      if (memo_cleared)
        for (const Choice* a : ancestors)
          if (same_problem(*a, c->category, *c->input)) cycle(category);
      for (const auto& v : c->variants)
        for (const auto& s : v->slots)
          if (s.child) todo.push_back(s.child);
    }
  }

  Choice* request(const std::string& category, const gil::FsPtr& fs) {
    Choice* parent = building.empty() ? nullptr : building.back().first;
    if (options.memo) {
      if (Choice* hit = memo.lookup(category, *fs)) {
        check_cycle(category, fs, parent, hit);
        if (parent) hit->parents.push_back(parent);
        ++stats.memo_hits;
        emit(event(TraceEvent::Kind::kMemoHit, *hit));
        return hit;
      }
      ++stats.memo_misses;
    }
    check_cycle(category, fs, parent, nullptr);
    auto owned = std::make_unique<Choice>();
    Choice* c = owned.get();
    c->id = choices.size();
    c->category = category;
    c->input = fs;
    c->step = step;
    if (parent) c->parents.push_back(parent);
    c->conflict_set = prefs::order_conflict_set(match(grammar, registry, category, fs), options.criteria);
    choices.push_back(std::move(owned));
    ++stats.choices;
    if (c->conflict_set.size() >= 2) open_point(c, enclosing_point());
    if (options.memo) memo.insert(c);
    ensure_variant(c);
    return c;
  }

  void open_point(Choice* c, std::optional<std::pair<std::size_t, std::size_t>> parent) {
    BacktrackPoint& p = table.record(c, parent);
    ++stats.bt_created;
    auto ev = event(TraceEvent::Kind::kBtCreated, *c);
    ev.bt = p.id;
    ev.detail = std::to_string(c->conflict_set.size()) + " rules";
    emit(ev);
  }

  void ensure_variant(Choice* c) {
    while (c->variants.empty() && !c->exhausted()) expand(c);
  }

  bool expand(Choice* c) {
    const tgl::Rule* rule = c->conflict_set[c->next++];
    ++stats.rules_fired;
    std::string why;
    // Logged before construction so that nested firings follow their parent.
    std::optional<std::size_t> logged;
    if (!records.empty()) {
      logged = records.back().fired.size();
      records.back().fired.push_back({c->id, rule->name, false, c->step == step});
    }
    auto v = construct(c, rule, why);
    if (logged) records.back().fired[*logged].succeeded = v != nullptr;
    auto ev = event(v ? TraceEvent::Kind::kRuleFired : TraceEvent::Kind::kRuleFailed, *c);
    ev.rule = rule->name;
    ev.detail = why;
    emit(ev);
    if (!v) {
      ++c->failed;
      ++stats.rules_failed;
      return false;
    }
    c->variants.push_back(std::move(v));
    return true;
  }

  struct BuildGuard {
    std::vector<std::pair<Choice*, std::size_t>>& stack;
    ~BuildGuard() { stack.pop_back(); }
  };

  std::unique_ptr<Variant> construct(Choice* c, const tgl::Rule* rule, std::string& why) {
    building.emplace_back(c, c->variants.size());
    BuildGuard guard{building};
    auto v = std::make_unique<Variant>();
    v->rule = rule;
    v->index = c->variants.size();
    v->serial = serial++;
    v->step = step;
    v->token_args.resize(rule->actions.size());
    for (const auto& fx : rule->side_effects) {
      auto args = tgl::eval_args(fx.args, c->input);
      if (!args) {
        why = "argument of side effect " + fx.function + " is missing";
        return nullptr;
      }
      v->effect_args.push_back(std::move(*args));
    }
    for (std::size_t i = 0; i < rule->actions.size(); ++i) {
      const tgl::Action& a = rule->actions[i];
      Slot slot;
      slot.action = i;
      switch (a.kind) {
        case tgl::Action::Kind::kLiteral:
          slot.kind = Slot::Kind::kToken;
          break;
        case tgl::Action::Kind::kFun: {
          auto args = tgl::eval_args(a.args, c->input);
          if (!args) {
            why = "argument of " + a.function + " is missing";
            return nullptr;
          }
          v->token_args[i] = std::move(*args);
          slot.kind = Slot::Kind::kToken;
          break;
        }
        case tgl::Action::Kind::kRule:
        case tgl::Action::Kind::kOptRule: {
          bool optional = a.kind == tgl::Action::Kind::kOptRule;
          gil::FsPtr sub = tgl::eval_selector(a.selector, c->input, registry);
          if (!sub) {
            if (!optional) {
              why = "nothing selected for " + a.category;
              return nullptr;
            }
            slot.kind = Slot::Kind::kEmpty;
            break;
          }
          Choice* child = request(a.category, sub);
          if (child->variants.empty()) {
            if (!optional) {
              why = "no derivation for " + a.category;
              return nullptr;
            }
            slot.kind = Slot::Kind::kEmpty;
            break;
          }
          slot.kind = Slot::Kind::kCall;
          slot.child = child;
          break;
        }
      }
      v->slots.push_back(slot);
    }
    return v;
  }

  // ---- assembly -----------------------------------------------------------

  bool choice_reaches(Walk& w, const Choice* c) {
    if (auto it = w.reach.find(c); it != w.reach.end()) return it->second;
    bool r = false;
    for (const auto& v : c->variants)
      if (variant_reaches(w, v.get())) {
        r = true;
        break;
      }
    w.reach[c] = r;
    return r;
  }

  bool variant_reaches(Walk& w, const Variant* v) {
    if (v == w.required) return true;
    for (const auto& s : v->slots)
      if (s.child && choice_reaches(w, s.child)) return true;
    return false;
  }

  bool run_step(Walk& w) {
    if (w.agenda.empty()) return complete(w);
    Visit it = w.agenda.back();
    w.agenda.pop_back();
    bool cont = visit(w, it);
    w.agenda.push_back(it);
    return cont;
  }

  bool visit(Walk& w, const Visit& it) {
    Choice* c = it.choice;
    bool pending = false;
    if (w.required && w.used == 0)
      for (const auto& a : w.agenda)
        if (choice_reaches(w, a.choice)) {
          pending = true;
          break;
        }
    for (std::size_t i = 0;; ++i) {
      while (i >= c->variants.size() && w.mode == Mode::kFirst && !c->exhausted()) expand(c);
      if (i >= c->variants.size()) break;
      Variant* v = c->variants[i].get();
      if (w.required && w.used == 0 && !pending && !variant_reaches(w, v)) continue;
      const tgl::Rule& rule = *v->rule;
      auto mark = trail.mark();
      std::vector<NodeId> nodes(rule.actions.size(), kNoNode);
      for (std::size_t a = 0; a < rule.actions.size(); ++a)
        if (rule.actions[a].is_call()) nodes[a] = trail.features().new_node();
      for (std::size_t k = 0; k < rule.side_effects.size(); ++k) {
        const auto& call = rule.side_effects[k];
        const auto* fx = registry.side_effect(call.function);
        if (!fx) throw GenerationError("unknown side effect " + call.function);
        trail.run_side_effect(call.function, *fx, c->input, v->effect_args[k]);
        if (!grammar.side_effect_free) {
          memo.clear();
          memo_cleared = true;
        }
      }
      if (auto err = apply_constraints(rule, it.node, nodes, trail.features())) {
        ++stats.constraint_conflicts;
        auto ev = event(TraceEvent::Kind::kConstraintConflict, *c);
        ev.rule = rule.name;
        ev.detail = err->message;
        emit(ev);
        trail.undo_to(mark);
        continue;
      }
      std::size_t base = w.agenda.size();
      for (auto s = v->slots.rbegin(); s != v->slots.rend(); ++s)
        if (s->kind == Slot::Kind::kCall) w.agenda.push_back({s->child, nodes[s->action]});
      w.decisions.push_back({c, i, it.node, std::move(nodes)});
      if (v == w.required) ++w.used;
      bool cont = run_step(w);
      if (v == w.required) --w.used;
      w.decisions.pop_back();
      w.agenda.resize(base);
      trail.undo_to(mark);
      if (!cont) return false;
    }
    return true;
  }

  bool complete(Walk& w) {
    if (w.required && w.used == 0) return true;
    if (w.mode == Mode::kFirst) {
      w.found = true;
      return false;
    }
    queue.push_back(assemble(w.decisions));
    if (!records.empty()) ++records.back().solutions;
    return true;
  }

  void run_walk(Walk& w) {
    if (!root || root->variants.empty()) return;
    auto mark = trail.mark();
    walk = &w;
    try {
      w.agenda.push_back({root, trail.features().new_node()});
      run_step(w);
    } catch (...) {
      walk = nullptr;
      trail.undo_to(mark);
      throw;
    }
    walk = nullptr;
    trail.undo_to(mark);
  }

  // ---- solutions and the table -------------------------------------------

  struct Span {
    std::size_t bt;
    std::size_t variant;
    NodeId node;
    std::size_t open_ev;
    std::size_t close_ev = 0;
    std::optional<std::size_t> parent;
  };
  struct Ev {
    enum class Kind { kOpen, kClose, kToken };
    Kind kind;
    std::size_t index;  // span or frontier position
  };
  struct Replay {
    const std::vector<Decision>& decisions;
    std::size_t next = 0;
    std::vector<RealizedToken> frontier;
    std::vector<Span> spans;
    std::vector<Ev> events;
    std::vector<std::size_t> open;
    backtrack::Realizer::Counts counts;
  };

  std::shared_ptr<DerivationNode> build(Replay& r, const std::string& path) {
    const Decision& d = r.decisions[r.next++];
    const Variant& v = *d.choice->variants[d.variant];
    const tgl::Rule& rule = *v.rule;
    auto node = std::make_shared<DerivationNode>();
    node->category = d.choice->category;
    node->rule = rule.name;
    node->input = d.choice->input;
    node->node = d.node;
    node->features = trail.features().bindings(d.node);
    node->bt_point = d.choice->bt;
    std::optional<std::size_t> span;
    if (d.choice->bt) {
      span = r.spans.size();
      r.spans.push_back({*d.choice->bt, d.variant, d.node, r.events.size(), 0,
                         r.open.empty() ? std::nullopt : std::optional<std::size_t>(r.open.back())});
      r.events.push_back({Ev::Kind::kOpen, *span});
      r.open.push_back(*span);
    }
    backtrack::FeatureReader read = [this](NodeId n, const std::string& f) { return trail.features().value(n, f); };
    for (const Slot& s : v.slots) {
      std::string here = path + "/" + std::to_string(v.serial) + "." + std::to_string(s.action);
      if (s.kind == Slot::Kind::kToken) {
        const tgl::Action& a = rule.actions[s.action];
        Preterminal p;
        if (a.kind == tgl::Action::Kind::kLiteral) {
          p = Preterminal::literal(a.text);
        } else {
          std::vector<std::pair<std::string, NodeId>> hooks;
          for (const auto& f : a.features) hooks.emplace_back(f, d.node);
          p = Preterminal::inflect(a.function, v.token_args[s.action], std::move(hooks));
        }
        r.events.push_back({Ev::Kind::kToken, r.frontier.size()});
        r.frontier.push_back(realizer.realize(here, p, read, registry, r.counts));
        node->children.emplace_back(std::move(p));
      } else if (s.kind == Slot::Kind::kCall) {
        node->children.emplace_back(std::shared_ptr<const DerivationNode>(build(r, here)));
      }
    }
    if (span) {
      r.spans[*span].close_ev = r.events.size();
      r.events.push_back({Ev::Kind::kClose, *span});
      r.open.pop_back();
    }
    return node;
  }

  std::vector<ContextItem> context(const Replay& r, std::size_t from, std::size_t to, std::size_t target) const {
    std::unordered_set<std::size_t> opened;
    for (std::optional<std::size_t> s = target; s; s = r.spans[*s].parent) opened.insert(*s);
    std::vector<ContextItem> out;
    for (std::size_t e = from; e < to; ++e) {
      const Ev& ev = r.events[e];
      if (ev.kind == Ev::Kind::kToken) {
        out.emplace_back(r.frontier[ev.index]);
      } else if (ev.kind == Ev::Kind::kOpen && !opened.count(ev.index)) {
        out.emplace_back(EgoRef{r.spans[ev.index].bt});
        e = r.spans[ev.index].close_ev;
      }
    }
    return out;
  }

  void fill_table(const Replay& r) {
    std::unordered_set<std::size_t> done;
    for (std::size_t s = 0; s < r.spans.size(); ++s) {
      const Span& span = r.spans[s];
      BacktrackPoint* p = table.find(span.bt);
      if (p->egos.size() <= span.variant) p->egos.resize(span.variant + 1);
      if (!p->egos[span.variant]) {
        EgoVariant ego;
        ego.rule = p->choice->variants[span.variant]->rule->name;
        ego.items = context(r, span.open_ev + 1, span.close_ev, s);
        ego.features = trail.features().bindings(span.node);
        p->egos[span.variant] = std::move(ego);
      }
      if (!done.insert(span.bt).second || p->pre_context) continue;
      p->pre_context = context(r, 0, span.open_ev, s);
      p->post_context = context(r, span.close_ev + 1, r.events.size(), s);
    }
  }

  Solution assemble(const std::vector<Decision>& decisions) {
    Replay r{decisions};
    auto tree = build(r, "");
    fill_table(r);
    stats.inflections += r.counts.fresh;
    stats.rerealizations += r.counts.rerealized;
    stats.reused_tokens += r.counts.reused;
    Solution sol;
    std::vector<std::string> texts;
    for (const auto& t : r.frontier) texts.push_back(t.text);
    sol.text = join_tokens(texts);
    sol.derivation = tree;
    sol.weight = prefs::solution_weight(*tree, options.criteria);
    sol.frontier = std::move(r.frontier);
    sol.memory = trail.memory();
    sol.step = step;
    if (!records.empty()) sol.expanded = records.back().bt;
    return sol;
  }

  void update_liveness() {
    std::unordered_set<const Choice*> seen;
    std::vector<const Choice*> todo;
    if (root) todo.push_back(root);
    while (!todo.empty()) {
      const Choice* c = todo.back();
      todo.pop_back();
      if (!seen.insert(c).second) continue;
      for (const auto& v : c->variants)
        for (const auto& s : v->slots)
          if (s.child) todo.push_back(s.child);
    }
    for (auto& p : table.points()) p.live = seen.count(p.choice) > 0;
  }

  // ---- stream ---------------------------------------------------------------

  void start() {
    started = true;
    records.push_back({});
    std::string category = options.start.empty() ? grammar.start : options.start;
    if (forced_rule) {
      auto owned = std::make_unique<Choice>();
      root = owned.get();
      root->category = forced_rule->category;
      root->input = input;
      if (tgl::eval_test(forced_rule->test, input, registry)) root->conflict_set.push_back(forced_rule);
      choices.push_back(std::move(owned));
      ++stats.choices;
      ensure_variant(root);
    } else {
      root = request(category, input);
    }
    Walk first;
    first.mode = Mode::kFirst;
    run_walk(first);
    Walk all;
    run_walk(all);
    update_liveness();
  }

  void advance() {
    auto id = prefs::choose_backtrack_point(table, options.criteria);
    if (!id) {
      finished = true;
      return;
    }
    ++step;
    BacktrackPoint& p = *table.find(*id);
    Choice* c = p.choice;
    ++p.expansions;
    ++stats.bt_expanded;
    ExpansionRecord rec;
    rec.step = step;
    rec.bt = p.id;
    rec.choice = c->id;
    records.push_back(std::move(rec));
    auto ev = event(TraceEvent::Kind::kBtExpanded, *c);
    ev.bt = p.id;
    ev.rule = c->conflict_set[c->next]->name;
    emit(ev);
    if (expand(c)) {
      records.back().new_variant = true;
      Walk w;
      w.required = c->variants.back().get();
      run_walk(w);
    }
    update_liveness();
  }

  std::optional<Solution> next() {
    while (queue.empty()) {
      if (finished) return std::nullopt;
      if (!started)
        start();
      else
        advance();
    }
    Solution s = std::move(queue.front());
    queue.pop_front();
    ++stats.solutions;
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::kSolution;
    ev.detail = s.text;
    emit(ev);
    return s;
  }
};

Generator::Generator(const tgl::Grammar& g, const Registry& registry, gil::FsPtr input, GeneratorOptions options)
    : impl_(std::make_unique<Impl>(g, registry, std::move(input), std::move(options))) {}

Generator::~Generator() = default;

std::optional<Solution> Generator::next() { return impl_->next(); }

std::vector<Solution> Generator::take(std::size_t max) {
  std::vector<Solution> out;
  while (max == 0 || out.size() < max) {
    auto s = next();
    if (!s) break;
    out.push_back(std::move(*s));
  }
  return out;
}

bool Generator::done() const { return impl_->finished && impl_->queue.empty(); }
const Stats& Generator::stats() const { return impl_->stats; }
const backtrack::BtTable& Generator::table() const { return impl_->table; }
const Trail& Generator::trail() const { return impl_->trail; }
const std::vector<ExpansionRecord>& Generator::expansions() const { return impl_->records; }

std::optional<Solution> fire(const tgl::Grammar& g, const Registry& registry, const tgl::Rule& rule,
                             const gil::FsPtr& fs, GeneratorOptions options) {
  Generator gen(g, registry, fs, std::move(options));
  gen.impl_->forced_rule = &rule;
  return gen.next();
}

}  // namespace prodgen
