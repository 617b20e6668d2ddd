#pragma once

// Minimal s-expression reader shared by the grammar parser.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prodgen/tgl.hpp"

namespace prodgen::tgl::detail {

struct SExpr {
  enum class Kind { kSymbol, kKeyword, kString, kInteger, kList };

  Kind kind = Kind::kList;
  std::string text;  // keywords keep their leading ':'
  std::int64_t number = 0;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_list() const { return kind == Kind::kList; }
  bool is_symbol() const { return kind == Kind::kSymbol; }
  bool is_keyword() const { return kind == Kind::kKeyword; }
  bool is_keyword(std::string_view kw) const;
  bool is_symbol(std::string_view name) const;
  std::string describe() const;
};

/// Reads every top-level form; throws TglError with position on lexical or
/// bracket errors.
std::vector<SExpr> read_all(std::string_view text);

}  // namespace prodgen::tgl::detail
