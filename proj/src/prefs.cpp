#include "prodgen/prefs.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace prodgen::prefs {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num < 0) throw std::invalid_argument("negative weight");
  std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty() || text.front() == '-' || text.front() == '+') return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = parse_int(text.substr(0, slash));
    auto d = parse_int(text.substr(slash + 1));
    if (!n || !d || *d == 0) return std::nullopt;
    return Rational(*n, *d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot), frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12 || (whole.empty() && frac.empty())) return std::nullopt;
    auto w = whole.empty() ? std::optional<std::int64_t>(0) : parse_int(whole);
    auto f = parse_int(frac);
    if (!w || !f) return std::nullopt;
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    return Rational(*w * scale + *f, scale);
  }
  auto n = parse_int(text);
  if (!n) return std::nullopt;
  return Rational(*n);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("division by zero weight");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }

CriteriaError::CriteriaError(const std::string& what, int line)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

CriteriaSpec::CriteriaSpec(std::vector<Criterion> criteria, Mode m) : mode(m) {
  for (auto& c : criteria) add(std::move(c));
}

void CriteriaSpec::add(Criterion c) {
  if (weight(c.rule)) throw std::invalid_argument("criterion for rule '" + c.rule + "' given twice");
  criteria_.push_back(std::move(c));
}

std::optional<Rational> CriteriaSpec::weight(std::string_view rule) const {
  for (const auto& c : criteria_)
    if (c.rule == rule) return c.weight;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

CriteriaSpec parse_criteria(std::string_view text) {
  CriteriaSpec spec;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    std::string name;
    std::string_view rest;
    if (!line.empty() && line.front() == '"') {
      std::size_t close = line.find('"', 1);
      if (close == std::string_view::npos) throw CriteriaError("unterminated quoted rule name", lineno);
      name = std::string(line.substr(1, close - 1));
      rest = line.substr(close + 1);
      if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
      rest = trim(rest);
    } else {
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
      if (line.empty()) continue;
      std::size_t gap = line.find_last_of(" \t");
      if (gap != std::string_view::npos && Rational::parse(line.substr(gap + 1))) {
        name = std::string(trim(line.substr(0, gap)));
        rest = line.substr(gap + 1);
      } else {
        name = std::string(line);
      }
    }
    if (name.empty()) throw CriteriaError("empty rule name", lineno);
    Rational w{1};
    if (!rest.empty()) {
      auto parsed = Rational::parse(rest);
      if (!parsed) throw CriteriaError("bad weight '" + std::string(rest) + "'", lineno);
      w = *parsed;
    }
    try {
      spec.add({name, w});
    } catch (const std::invalid_argument& e) {
      throw CriteriaError(e.what(), lineno);
    }
  }
  return spec;
}

std::vector<std::string> unknown_criteria(const CriteriaSpec& spec, const tgl::Grammar& g) {
  std::vector<std::string> out;
  for (const auto& c : spec.criteria())
    if (!g.find_rule(c.rule)) out.push_back(c.rule);
  return out;
}

std::vector<const tgl::Rule*> order_conflict_set(std::vector<const tgl::Rule*> cs, const CriteriaSpec& spec) {
  if (spec.empty()) return cs;
  std::stable_sort(cs.begin(), cs.end(), [&](const tgl::Rule* a, const tgl::Rule* b) {
    auto wa = spec.weight(a->name), wb = spec.weight(b->name);
    if (wa.has_value() != wb.has_value()) return wa.has_value();
    return wa && *wa > *wb;
  });
  return cs;
}

std::optional<std::size_t> choose_backtrack_point(const backtrack::BtTable& table, const CriteriaSpec& spec) {
  const backtrack::BacktrackPoint* best = nullptr;
  std::optional<Rational> best_key;
  for (const auto& p : table.points()) {
    if (!p.open()) continue;
    std::optional<Rational> key;
    if (!spec.empty()) {
      for (const tgl::Rule* r : p.choice->remainder()) {
        auto w = spec.weight(r->name);
        if (!w) continue;
        if (spec.mode == Mode::kFirstSolutionBias) w = Rational(1);
        if (!key || *w > *key) key = w;
      }
    }
    // Later points win ties, so >= keeps the most recent among equals.
    bool better = !best || (key.has_value() && (!best_key || *key >= *best_key)) || (!key && !best_key);
    if (better) {
      best = &p;
      best_key = key;
    }
  }
  if (!best) return std::nullopt;
  return best->id;
}

namespace {

void count_c_rules(const DerivationNode& n, const CriteriaSpec& spec, std::map<std::string, std::size_t>& counts) {
  if (spec.is_c_rule(n.rule)) ++counts[n.rule];
  for (const auto& c : n.children)
    if (const auto* child = std::get_if<std::shared_ptr<const DerivationNode>>(&c)) count_c_rules(**child, spec, counts);
}

std::map<std::string, std::size_t> record(const DerivationNode& n, const CriteriaSpec& spec, DerivationHistory& h) {
  std::map<std::string, std::size_t> below;
  for (const auto& c : n.children) {
    if (const auto* child = std::get_if<std::shared_ptr<const DerivationNode>>(&c)) {
      for (const auto& [rule, k] : record(**child, spec, h)) below[rule] += k;
    }
  }
  auto& entry = h.at(n.rule);
  ++entry.applications;
  for (const auto& [rule, k] : below) entry.below[rule] += k;
  if (spec.is_c_rule(n.rule)) ++below[n.rule];
  return below;
}

}  // namespace

Rational solution_weight(const DerivationNode& root, const CriteriaSpec& spec) {
  std::map<std::string, std::size_t> counts;
  count_c_rules(root, spec, counts);
  Rational total{0};
  for (const auto& [rule, n] : counts) {
    Rational w = *spec.weight(rule);
    total = total + (spec.formula == WeightFormula::kOncePerCriterion ? w : w / Rational(static_cast<std::int64_t>(n)));
  }
  return total;
}

void DerivationHistory::merge(const DerivationHistory& other) {
  for (const auto& [rule, e] : other.entries_) {
    auto& mine = entries_[rule];
    mine.applications += e.applications;
    for (const auto& [c, k] : e.below) mine.below[c] += k;
  }
  for (const auto& [c, u] : other.usage_) {
    usage_[c].solutions += u.solutions;
    usage_[c].applications += u.applications;
  }
  solutions_ += other.solutions_;
}

const DerivationHistory::Entry* DerivationHistory::find(std::string_view rule) const {
  auto it = entries_.find(std::string(rule));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string DerivationHistory::to_json() const {
  nlohmann::ordered_json j;
  j["solutions"] = solutions_;
  auto& rules = j["rules"] = nlohmann::ordered_json::object();
  for (const auto& [rule, e] : entries_) {
    rules[rule]["applications"] = e.applications;
    rules[rule]["c_rules_below"] = e.below;
  }
  auto& usage = j["c_rules"] = nlohmann::ordered_json::object();
  for (const auto& [c, u] : usage_) {
    usage[c]["solutions"] = u.solutions;
    usage[c]["applications"] = u.applications;
  }
  return j.dump(2);
}

DerivationHistory record_history(const DerivationNode& root, const CriteriaSpec& spec) {
  DerivationHistory h;
  h.count_solution();
  record(root, spec, h);
  std::map<std::string, std::size_t> counts;
  count_c_rules(root, spec, counts);
  for (const auto& [c, n] : counts) {
    auto& u = h.usage_of(c);
    ++u.solutions;
    u.applications += n;
  }
  return h;
}

}  // namespace prodgen::prefs
