#pragma once

// GIL: the feature-structure input language.
//
// Concrete syntax:
//   [ (ATTR value) ... ]       feature structure
//   < v, v, ... >              list
//   #n= [ ... ]                coreference definition site
//   #n                         coreference use
//   "text"                     quoted string (backslash escapes)
//   symbol / integer           atoms
//   ; comment                  to end of line

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace prodgen::gil {

class GilError : public std::runtime_error {
 public:
  GilError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// ASCII case folding used for every symbol comparison.
std::string fold(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

struct Atom {
  enum class Kind { kSymbol, kString, kInteger };

  Kind kind = Kind::kSymbol;
  std::string text;  // spelling as written (symbols keep their case)
  std::int64_t integer = 0;

  static Atom symbol(std::string name);
  static Atom string(std::string value);
  static Atom number(std::int64_t value);

  bool is_symbol() const { return kind == Kind::kSymbol; }
  bool is_string() const { return kind == Kind::kString; }
  bool is_integer() const { return kind == Kind::kInteger; }

  /// Plain text, as a word: symbol spelling, string contents, decimal digits.
  std::string display() const;
  /// GIL/TGL spelling: strings are quoted and escaped.
  std::string to_source() const;
  /// Key under which equal atoms collide (symbols folded).
  std::string key() const;

  friend bool operator==(const Atom& a, const Atom& b);
  friend bool operator<(const Atom& a, const Atom& b) { return a.key() < b.key(); }
};

class FeatureStructure;
using FsPtr = std::shared_ptr<const FeatureStructure>;

/// Atom | list | structure. Coreferences are resolved at parse time into
/// shared FsPtr nodes, so a `#n` use and its `#n=` site are the same object.
struct Value {
  std::variant<Atom, std::vector<Value>, FsPtr> data;

  Value() : data(Atom{}) {}
  Value(Atom a) : data(std::move(a)) {}
  Value(std::vector<Value> list) : data(std::move(list)) {}
  Value(FsPtr fs) : data(std::move(fs)) {}

  bool is_atom() const { return std::holds_alternative<Atom>(data); }
  bool is_list() const { return std::holds_alternative<std::vector<Value>>(data); }
  bool is_fs() const { return std::holds_alternative<FsPtr>(data); }

  const Atom& atom() const { return std::get<Atom>(data); }
  const std::vector<Value>& list() const { return std::get<std::vector<Value>>(data); }
  const FsPtr& fs() const { return std::get<FsPtr>(data); }
};

using ValueList = std::vector<Value>;

class FeatureStructure {
 public:
  using Pair = std::pair<std::string, Value>;

  FeatureStructure() = default;
  /// Throws GilError on a duplicate attribute name.
  explicit FeatureStructure(std::vector<Pair> pairs);

  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  /// Case-insensitive attribute lookup.
  const Value* find(std::string_view attribute) const;

 private:
  std::vector<Pair> pairs_;
};

FsPtr make_fs(std::vector<FeatureStructure::Pair> pairs = {});

struct Path {
  std::vector<std::string> segments;

  /// Parses `A.B.C`; throws std::invalid_argument on empty segments.
  static Path parse(std::string_view dotted);
  std::string str() const;

  friend Path operator+(const Path& a, const Path& b);
  friend bool operator==(const Path& a, const Path& b);
};

FsPtr parse_gil(std::string_view text);
std::string serialize_gil(const FeatureStructure& fs);

/// Walks `path` through nested structures. nullopt when a segment is missing
/// or an intermediate value is not a structure.
std::optional<Value> get_path(const FeatureStructure& fs, const Path& path);
/// Same, but only succeeds when the final value is a structure.
FsPtr get_fs(const FsPtr& fs, const Path& path);

/// Structural equality after coreference resolution; attribute order and
/// sharing are irrelevant, list order is significant.
bool fs_equal(const FeatureStructure& a, const FeatureStructure& b);
bool value_equal(const Value& a, const Value& b);
/// Hash consistent with fs_equal.
std::size_t fs_hash(const FeatureStructure& fs);

}  // namespace prodgen::gil
