#pragma once

// Inflection functions backed by a paradigm lexicon.
//
// Lexicon file format, one entry per line:
//
//   lemma | FEAT=val,FEAT=val -> form | FEAT=val -> form | -> fallback
//
// `#` starts a comment. A cell matches a request when all its pairs are among
// the request's features; the most specific matching cell wins, then the
// fallback.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prodgen/registry.hpp"

namespace prodgen::morpho {

class LexiconError : public std::runtime_error {
 public:
  LexiconError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

struct LexiconEntry {
  struct Cell {
    std::map<std::string, std::string> key;  // FEATURE -> folded value
    std::string form;
  };

  std::string lemma;
  std::vector<Cell> paradigm;
  std::optional<std::string> fallback;

  /// Canonical text of a cell key, e.g. "CASE=akk,NUM=sg".
  static std::string key_text(const std::map<std::string, std::string>& key);
};

class Lexicon {
 public:
  void add(LexiconEntry entry);  // replaces an entry with the same lemma
  const LexiconEntry* find(std::string_view lemma) const;
  std::size_t size() const { return entries_.size(); }

  /// Throws InflectionError for an unknown lemma, an ambiguous match, or no
  /// matching cell and no fallback.
  std::string inflect(std::string_view lemma, const std::map<std::string, gil::Atom>& features) const;

  static Lexicon parse(std::string_view text);
  /// The built-in German lexicon used by the demo grammars.
  static Lexicon toy();

 private:
  std::map<std::string, LexiconEntry> entries_;
};

/// German weekday name for 1..7 (Montag..Sonntag).
std::string weekday_name(std::int64_t day);

/// Registers the demo functions:
///   verb, modal, pronoun, noun, det, adj   lexicon lookup of the first argument
///   word                                   arguments verbatim, space separated
///   weekday / weekday-pp                   "Freitag" / "am Freitag" for 5
void install_toy_morphology(Registry& registry, std::shared_ptr<const Lexicon> lexicon);

}  // namespace prodgen::morpho
