#include "sexpr.hpp"

#include <cctype>

namespace prodgen::tgl::detail {

bool SExpr::is_keyword(std::string_view kw) const { return kind == Kind::kKeyword && gil::iequals(text, kw); }
bool SExpr::is_symbol(std::string_view name) const { return kind == Kind::kSymbol && gil::iequals(text, name); }

std::string SExpr::describe() const {
  switch (kind) {
    case Kind::kSymbol: return "symbol '" + text + "'";
    case Kind::kKeyword: return "keyword '" + text + "'";
    case Kind::kString: return "string \"" + text + "\"";
    case Kind::kInteger: return "integer " + text;
    case Kind::kList: return items.empty() ? "'()'" : "list starting with " + items.front().describe();
  }
  return {};
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) break;
      out.push_back(form());
    }
    return out;
  }

 private:
  SourcePos here() const { return {line_, col_}; }

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
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' || c == ';' ||
           c == '\'';
  }

  SExpr form() {
    SourcePos start = here();
    char c = src_[pos_];
    if (c == '\'') {  // 'x reads as x
      advance();
      skip_space();
      if (pos_ >= src_.size()) throw TglError("quote at end of input", start);
      return form();
    }
    if (c == ')') throw TglError("unbalanced parenthesis: unexpected ')'", start);
    if (c == '(') {
      advance();
      SExpr list;
      list.kind = SExpr::Kind::kList;
      list.pos = start;
      while (true) {
        skip_space();
        if (pos_ >= src_.size())
          throw TglError("unbalanced parenthesis: '(' opened here is never closed", start);
        if (src_[pos_] == ')') {
          advance();
          return list;
        }
        list.items.push_back(form());
      }
    }
    if (c == '"') {
      advance();
      SExpr s;
      s.kind = SExpr::Kind::kString;
      s.pos = start;
      while (true) {
        if (pos_ >= src_.size()) throw TglError("unterminated string", start);
        char d = src_[pos_];
        advance();
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= src_.size()) throw TglError("unterminated string", start);
          char e = src_[pos_];
          advance();
          s.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          s.text += d;
        }
      }
      return s;
    }
    std::string word;
    while (pos_ < src_.size() && !delimiter(src_[pos_])) {
      word += src_[pos_];
      advance();
    }
    SExpr atom;
    atom.pos = start;
    atom.text = word;
    bool digits = !word.empty();
    for (std::size_t i = 0; i < word.size(); ++i) {
      char d = word[i];
      if (!(std::isdigit(static_cast<unsigned char>(d)) || (i == 0 && d == '-' && word.size() > 1))) digits = false;
    }
    if (digits) {
      atom.kind = SExpr::Kind::kInteger;
      try {
        atom.number = std::stoll(word);
      } catch (const std::out_of_range&) {
        throw TglError("integer out of range", start);
      }
    } else if (word[0] == ':') {
      if (word.size() == 1) throw TglError("empty keyword", start);
      atom.kind = SExpr::Kind::kKeyword;
    } else {
      atom.kind = SExpr::Kind::kSymbol;
    }
    return atom;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_all(std::string_view text) { return Reader(text).all(); }

}  // namespace prodgen::tgl::detail
