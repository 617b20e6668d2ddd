#include "prodgen/gil.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace prodgen::gil {

GilError::GilError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

std::string fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

Atom Atom::symbol(std::string name) { return Atom{Kind::kSymbol, std::move(name), 0}; }
Atom Atom::string(std::string value) { return Atom{Kind::kString, std::move(value), 0}; }
Atom Atom::number(std::int64_t value) {
  return Atom{Kind::kInteger, std::to_string(value), value};
}

std::string Atom::display() const { return text; }

std::string Atom::to_source() const {
  if (kind != Kind::kString) return text;
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string Atom::key() const {
  switch (kind) {
    case Kind::kSymbol: return "s:" + fold(text);
    case Kind::kString: return "q:" + text;
    case Kind::kInteger: return "i:" + std::to_string(integer);
  }
  return {};
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Atom::Kind::kSymbol: return iequals(a.text, b.text);
    case Atom::Kind::kString: return a.text == b.text;
    case Atom::Kind::kInteger: return a.integer == b.integer;
  }
  return false;
}

FeatureStructure::FeatureStructure(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  std::set<std::string> seen;
  for (const auto& [name, value] : pairs_) {
    if (!seen.insert(fold(name)).second)
      throw GilError("duplicate attribute '" + name + "'", 0, 0);
  }
}

const Value* FeatureStructure::find(std::string_view attribute) const {
  for (const auto& [name, value] : pairs_)
    if (iequals(name, attribute)) return &value;
  return nullptr;
}

FsPtr make_fs(std::vector<FeatureStructure::Pair> pairs) {
  return std::make_shared<const FeatureStructure>(std::move(pairs));
}

Path Path::parse(std::string_view dotted) {
  Path p;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = dotted.find('.', start);
    std::string_view seg = dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start);
    if (seg.empty()) throw std::invalid_argument("empty path segment in '" + std::string(dotted) + "'");
    p.segments.emplace_back(seg);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

std::string Path::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '.';
    out += segments[i];
  }
  return out;
}

Path operator+(const Path& a, const Path& b) {
  Path p = a;
  p.segments.insert(p.segments.end(), b.segments.begin(), b.segments.end());
  return p;
}

bool operator==(const Path& a, const Path& b) {
  return a.segments.size() == b.segments.size() &&
         std::equal(a.segments.begin(), a.segments.end(), b.segments.begin(),
                    [](const std::string& x, const std::string& y) { return iequals(x, y); });
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { kLBracket, kRBracket, kLParen, kRParen, kLAngle, kRAngle, kComma,
                 kDefTag, kRefTag, kString, kSymbol, kInteger, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t number = 0;
  int line = 0;
  int column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t{Tok::kEnd, {}, 0, line_, col_};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    switch (c) {
      case '[': advance(); t.kind = Tok::kLBracket; return t;
      case ']': advance(); t.kind = Tok::kRBracket; return t;
      case '(': advance(); t.kind = Tok::kLParen; return t;
      case ')': advance(); t.kind = Tok::kRParen; return t;
      case '<': advance(); t.kind = Tok::kLAngle; return t;
      case '>': advance(); t.kind = Tok::kRAngle; return t;
      case ',': advance(); t.kind = Tok::kComma; return t;
      default: break;
    }
    if (c == '#') {
      advance();
      std::string digits;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits += src_[pos_];
        advance();
      }
      if (digits.empty()) throw GilError("expected digits after '#'", t.line, t.column);
      t.number = std::stoll(digits);
      if (t.number <= 0) throw GilError("coreference tags must be positive", t.line, t.column);
      t.text = digits;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        advance();
        t.kind = Tok::kDefTag;
      } else {
        t.kind = Tok::kRefTag;
      }
      return t;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (true) {
        if (pos_ >= src_.size()) throw GilError("unterminated string", t.line, t.column);
        char d = src_[pos_];
        advance();
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= src_.size()) throw GilError("unterminated string", t.line, t.column);
          char e = src_[pos_];
          advance();
          s += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          s += d;
        }
      }
      t.kind = Tok::kString;
      t.text = std::move(s);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::string digits(1, c);
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits += src_[pos_];
        advance();
      }
      t.kind = Tok::kInteger;
      t.text = digits;
      try {
        t.number = std::stoll(digits);
      } catch (const std::out_of_range&) {
        throw GilError("integer out of range", t.line, t.column);
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src_.size()) {
        char d = src_[pos_];
        if (!std::isalnum(static_cast<unsigned char>(d)) && d != '_' && d != '-') break;
        s += d;
        advance();
      }
      t.kind = Tok::kSymbol;
      t.text = std::move(s);
      return t;
    }
    throw GilError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Unresolved document tree; coreference uses are still tags here.
struct RawFs;
struct RawRef {
  std::int64_t tag;
  int line, column;
};
struct RawValue {
  std::variant<Atom, std::vector<RawValue>, std::shared_ptr<RawFs>, RawRef> data;
};
struct RawFs {
  std::vector<std::pair<std::string, RawValue>> pairs;
  std::optional<std::int64_t> tag;
  int line = 0, column = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  std::shared_ptr<RawFs> document() {
    auto root = structure();
    if (cur_.kind != Tok::kEnd) fail("trailing input after the top-level structure");
    return root;
  }

  std::map<std::int64_t, std::shared_ptr<RawFs>> definitions;

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw GilError(msg, cur_.line, cur_.column); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) {
      if (cur_.kind == Tok::kEnd) fail(std::string("unbalanced brackets: expected ") + what + " before end of input");
      fail(std::string("expected ") + what);
    }
    cur_ = lex_.next();
  }

  std::shared_ptr<RawFs> structure() {
    std::optional<std::int64_t> tag;
    Token start = cur_;
    if (cur_.kind == Tok::kDefTag) {
      tag = cur_.number;
      cur_ = lex_.next();
      if (cur_.kind != Tok::kLBracket) fail("a coreference definition must label a structure");
    }
    auto fs = std::make_shared<RawFs>();
    fs->tag = tag;
    fs->line = start.line;
    fs->column = start.column;
    expect(Tok::kLBracket, "'['");
    std::set<std::string> seen;
    while (cur_.kind == Tok::kLParen) {
      cur_ = lex_.next();
      if (cur_.kind != Tok::kSymbol) fail("expected attribute name");
      Token attr = cur_;
      cur_ = lex_.next();
      if (!seen.insert(fold(attr.text)).second)
        throw GilError("duplicate attribute '" + attr.text + "'", attr.line, attr.column);
      RawValue v = value();
      expect(Tok::kRParen, "')'");
      fs->pairs.emplace_back(attr.text, std::move(v));
    }
    expect(Tok::kRBracket, "']'");
    if (tag) {
      if (!definitions.emplace(*tag, fs).second)
        throw GilError("coreference #" + std::to_string(*tag) + " defined more than once", start.line,
                       start.column);
    }
    return fs;
  }

  RawValue value() {
    switch (cur_.kind) {
      case Tok::kSymbol: {
        RawValue v{Atom::symbol(cur_.text)};
        cur_ = lex_.next();
        return v;
      }
      case Tok::kString: {
        RawValue v{Atom::string(cur_.text)};
        cur_ = lex_.next();
        return v;
      }
      case Tok::kInteger: {
        RawValue v{Atom::number(cur_.number)};
        cur_ = lex_.next();
        return v;
      }
      case Tok::kRefTag: {
        RawValue v{RawRef{cur_.number, cur_.line, cur_.column}};
        cur_ = lex_.next();
        return v;
      }
      case Tok::kLBracket:
      case Tok::kDefTag:
        return RawValue{structure()};
      case Tok::kLAngle: {
        cur_ = lex_.next();
        std::vector<RawValue> items;
        if (cur_.kind != Tok::kRAngle) {
          items.push_back(value());
          while (cur_.kind == Tok::kComma) {
            cur_ = lex_.next();
            items.push_back(value());
          }
        }
        expect(Tok::kRAngle, "'>'");
        return RawValue{std::move(items)};
      }
      case Tok::kEnd:
        fail("unbalanced brackets: expected a value before end of input");
      default:
        fail("expected a value");
    }
  }

  Lexer lex_;
  Token cur_;
};

class Resolver {
 public:
  explicit Resolver(const std::map<std::int64_t, std::shared_ptr<RawFs>>& defs) : defs_(defs) {}

  FsPtr build(const RawFs& raw) {
    if (raw.tag) {
      if (auto it = done_.find(*raw.tag); it != done_.end()) return it->second;
      if (!active_.insert(*raw.tag).second)
        throw GilError("coreference cycle through #" + std::to_string(*raw.tag), raw.line, raw.column);
    }
    std::vector<FeatureStructure::Pair> pairs;
    pairs.reserve(raw.pairs.size());
    for (const auto& [name, v] : raw.pairs) pairs.emplace_back(name, convert(v));
    auto fs = make_fs(std::move(pairs));
    if (raw.tag) {
      active_.erase(*raw.tag);
      done_.emplace(*raw.tag, fs);
    }
    return fs;
  }

 private:
  Value convert(const RawValue& v) {
    return std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Atom>) {
            return Value(x);
          } else if constexpr (std::is_same_v<T, std::vector<RawValue>>) {
            ValueList out;
            out.reserve(x.size());
            for (const auto& item : x) out.push_back(convert(item));
            return Value(std::move(out));
          } else if constexpr (std::is_same_v<T, std::shared_ptr<RawFs>>) {
            return Value(build(*x));
          } else {
            auto it = defs_.find(x.tag);
            if (it == defs_.end())
              throw GilError("undefined coreference #" + std::to_string(x.tag), x.line, x.column);
            if (active_.count(x.tag))
              throw GilError("coreference cycle through #" + std::to_string(x.tag), x.line, x.column);
            return Value(build(*it->second));
          }
        },
        v.data);
  }

  const std::map<std::int64_t, std::shared_ptr<RawFs>>& defs_;
  std::map<std::int64_t, FsPtr> done_;
  std::set<std::int64_t> active_;
};

}  // namespace

FsPtr parse_gil(std::string_view text) {
  Parser parser(text);
  auto raw = parser.document();
  Resolver resolver(parser.definitions);
  return resolver.build(*raw);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void count_refs(const Value& v, std::unordered_map<const FeatureStructure*, int>& refs);

void count_refs(const FeatureStructure& fs, std::unordered_map<const FeatureStructure*, int>& refs) {
  for (const auto& [name, v] : fs.pairs()) count_refs(v, refs);
}

void count_refs(const Value& v, std::unordered_map<const FeatureStructure*, int>& refs) {
  if (v.is_fs()) {
    if (refs[v.fs().get()]++ == 0) count_refs(*v.fs(), refs);
  } else if (v.is_list()) {
    for (const auto& item : v.list()) count_refs(item, refs);
  }
}

class Writer {
 public:
  explicit Writer(std::unordered_map<const FeatureStructure*, int> refs) : refs_(std::move(refs)) {}

  void structure(const FeatureStructure& fs) {
    if (auto it = refs_.find(&fs); it != refs_.end() && it->second > 1) {
      if (auto t = tags_.find(&fs); t != tags_.end()) {
        out_ << '#' << t->second;
        return;
      }
      int tag = ++next_tag_;
      tags_.emplace(&fs, tag);
      out_ << '#' << tag << "= ";
    }
    out_ << '[';
    bool first = true;
    for (const auto& [name, v] : fs.pairs()) {
      if (!first) out_ << ' ';
      first = false;
      out_ << '(' << name << ' ';
      value(v);
      out_ << ')';
    }
    out_ << ']';
  }

  std::string str() const { return out_.str(); }

 private:
  void value(const Value& v) {
    if (v.is_atom()) {
      out_ << v.atom().to_source();
    } else if (v.is_fs()) {
      structure(*v.fs());
    } else {
      out_ << '<';
      const auto& items = v.list();
      for (std::size_t i = 0; i < items.size(); ++i) {
        out_ << (i ? ", " : " ");
        value(items[i]);
      }
      out_ << (items.empty() ? ">" : " >");
    }
  }

  std::unordered_map<const FeatureStructure*, int> refs_;
  std::unordered_map<const FeatureStructure*, int> tags_;
  int next_tag_ = 0;
  std::ostringstream out_;
};

}  // namespace

std::string serialize_gil(const FeatureStructure& fs) {
  std::unordered_map<const FeatureStructure*, int> refs;
  refs[&fs] = 1;
  count_refs(fs, refs);
  Writer w(std::move(refs));
  w.structure(fs);
  return w.str();
}

// ---------------------------------------------------------------------------
// Navigation and equality

std::optional<Value> get_path(const FeatureStructure& fs, const Path& path) {
  const FeatureStructure* cur = &fs;
  const Value* v = nullptr;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    if (!cur) return std::nullopt;
    v = cur->find(path.segments[i]);
    if (!v) return std::nullopt;
    cur = v->is_fs() ? v->fs().get() : nullptr;
  }
  if (!v) return std::nullopt;
  return *v;
}

FsPtr get_fs(const FsPtr& fs, const Path& path) {
  if (!fs) return nullptr;
  auto v = get_path(*fs, path);
  if (!v || !v->is_fs()) return nullptr;
  return v->fs();
}

bool value_equal(const Value& a, const Value& b) {
  if (a.data.index() != b.data.index()) return false;
  if (a.is_atom()) return a.atom() == b.atom();
  if (a.is_fs()) return fs_equal(*a.fs(), *b.fs());
  const auto& x = a.list();
  const auto& y = b.list();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!value_equal(x[i], y[i])) return false;
  return true;
}

bool fs_equal(const FeatureStructure& a, const FeatureStructure& b) {
  if (&a == &b) return true;
  if (a.size() != b.size()) return false;
  for (const auto& [name, v] : a.pairs()) {
    const Value* w = b.find(name);
    if (!w || !value_equal(v, *w)) return false;
  }
  return true;
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t value_hash(const Value& v) {
  if (v.is_atom()) return mix(1, std::hash<std::string>{}(v.atom().key()));
  if (v.is_fs()) return mix(2, fs_hash(*v.fs()));
  std::size_t h = 3;
  for (const auto& item : v.list()) h = mix(h, value_hash(item));
  return h;
}

}  // namespace

std::size_t fs_hash(const FeatureStructure& fs) {
  // Order-independent over attributes.
  std::size_t sum = 0;
  for (const auto& [name, v] : fs.pairs()) sum += mix(std::hash<std::string>{}(fold(name)), value_hash(v));
  return mix(fs.size(), sum);
}

}  // namespace prodgen::gil
