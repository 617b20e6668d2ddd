#pragma once

// Criteria over rule names (c-rules): conflict-set ordering, backtrack point
// choice, solution weights and derivational history.
//
// Criteria file, one criterion per line:
//
//   <rule-name> [<weight>]      # weight: integer, decimal or num/den; default 1
//
// A rule name containing spaces may be written in double quotes; unquoted,
// everything before a trailing number is the name.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prodgen/backtrack.hpp"
#include "prodgen/derivation.hpp"
#include "prodgen/tgl.hpp"

namespace prodgen::prefs {

/// Non-negative exact fraction, always normalized.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// "3" or "7/2".
  std::string str() const;
  /// Accepts "3", "0.25", "7/2"; nullopt otherwise or when negative.
  static std::optional<Rational> parse(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct Criterion {
  std::string rule;
  Rational weight{1};
};

enum class Mode { kFirstSolutionBias, kWeightRanked };

/// How repeated applications of one c-rule count towards a solution weight.
enum class WeightFormula {
  kOncePerCriterion,      // each application adds w/n: total w per applied c-rule
  kDividedByOccurrences,  // total w/n per applied c-rule
};

class CriteriaError : public std::runtime_error {
 public:
  CriteriaError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

class CriteriaSpec {
 public:
  CriteriaSpec() = default;
  explicit CriteriaSpec(std::vector<Criterion> criteria, Mode mode = Mode::kFirstSolutionBias);

  void add(Criterion c);  // throws std::invalid_argument on a repeated rule name
  const std::vector<Criterion>& criteria() const { return criteria_; }
  std::optional<Rational> weight(std::string_view rule) const;
  bool is_c_rule(std::string_view rule) const { return weight(rule).has_value(); }
  bool empty() const { return criteria_.empty(); }

  Mode mode = Mode::kFirstSolutionBias;
  WeightFormula formula = WeightFormula::kOncePerCriterion;

 private:
  std::vector<Criterion> criteria_;
};

CriteriaSpec parse_criteria(std::string_view text);

/// Criteria naming no rule of `g`.
std::vector<std::string> unknown_criteria(const CriteriaSpec& spec, const tgl::Grammar& g);

/// Stable partition: c-rules first by descending weight, then the rest.
std::vector<const tgl::Rule*> order_conflict_set(std::vector<const tgl::Rule*> cs, const CriteriaSpec& spec);

/// Open point to expand next, or nullopt when every point is exhausted or
/// unreachable. Without a preference the most recently created point wins.
std::optional<std::size_t> choose_backtrack_point(const backtrack::BtTable& table, const CriteriaSpec& spec);

Rational solution_weight(const DerivationNode& root, const CriteriaSpec& spec);

/// Applied rule -> c-rules applied strictly below it, with counts.
class DerivationHistory {
 public:
  struct Entry {
    std::size_t applications = 0;
    std::map<std::string, std::size_t> below;
  };

  /// Per c-rule: solutions applying it and total applications.
  struct Usage {
    std::size_t solutions = 0;
    std::size_t applications = 0;
  };

  void merge(const DerivationHistory& other);
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const Entry* find(std::string_view rule) const;
  Entry& at(const std::string& rule) { return entries_[rule]; }
  const std::map<std::string, Usage>& usage() const { return usage_; }
  Usage& usage_of(const std::string& c_rule) { return usage_[c_rule]; }
  std::size_t solutions() const { return solutions_; }
  void count_solution(std::size_t n = 1) { solutions_ += n; }

  /// Corpus summary: per rule its applications and c-rules below, plus how
  /// many solutions applied each c-rule and how often.
  std::string to_json() const;

 private:
  std::map<std::string, Entry> entries_;
  std::map<std::string, Usage> usage_;
  std::size_t solutions_ = 0;
};

DerivationHistory record_history(const DerivationNode& root, const CriteriaSpec& spec);

}  // namespace prodgen::prefs
