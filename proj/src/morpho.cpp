#include "prodgen/morpho.hpp"

#include <sstream>

namespace prodgen::morpho {

namespace {

constexpr const char* kToyLexicon = R"(
# verbs
treffen     | TENSE=inf -> treffen | TENSE=pres,PERSON=1,NUM=sg -> treffe | TENSE=pres,PERSON=3,NUM=sg -> trifft | TENSE=pres,NUM=pl -> treffen
wollen      | PERSON=1,NUM=sg -> will | PERSON=3,NUM=sg -> will | NUM=pl -> wollen | -> wollen
werden      | NUM=sg -> wird | NUM=pl -> werden
verschieben | TENSE=inf -> verschieben | TENSE=part -> verschoben | TENSE=pres,NUM=sg -> verschiebt | TENSE=pres,NUM=pl -> verschieben
absagen     | TENSE=inf -> absagen | TENSE=part -> abgesagt
gewinnen    | NUM=sg -> gewinnt | NUM=pl -> gewinnen
spielen     | NUM=sg -> spielt | NUM=pl -> spielen
# pronouns
sie         | CASE=nom -> Sie | CASE=akk -> Sie | CASE=dat -> Ihnen
er          | CASE=nom -> er | CASE=akk -> ihn | CASE=dat -> ihm
ich         | CASE=nom -> ich | CASE=akk -> mich | CASE=dat -> mir
# nouns and titles
termin      | NUM=sg -> Termin | NUM=pl -> Termine
treffen-n   | NUM=sg -> Treffen | NUM=pl -> Treffen
team        | NUM=sg -> Team | NUM=pl -> Teams
spieler     | -> Spieler
herr        | CASE=nom -> Herr | CASE=akk -> Herrn | CASE=dat -> Herrn
frau        | -> Frau
# determiners
der         | CASE=nom,GENDER=masc,NUM=sg -> der | CASE=akk,GENDER=masc,NUM=sg -> den | CASE=dat,GENDER=masc,NUM=sg -> dem | CASE=nom,GENDER=neut,NUM=sg -> das | CASE=akk,GENDER=neut,NUM=sg -> das | CASE=dat,GENDER=neut,NUM=sg -> dem | CASE=nom,NUM=pl -> die | CASE=akk,NUM=pl -> die | CASE=dat,NUM=pl -> den
)";

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == std::string_view::npos ? s.npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

LexiconError::LexiconError(const std::string& what, int line)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string LexiconEntry::key_text(const std::map<std::string, std::string>& key) {
  std::string out;
  for (const auto& [f, v] : key) {
    if (!out.empty()) out += ',';
    out += f + "=" + v;
  }
  return out;
}

void Lexicon::add(LexiconEntry entry) {
  std::string k = gil::fold(entry.lemma);
  entries_.insert_or_assign(k, std::move(entry));
}

const LexiconEntry* Lexicon::find(std::string_view lemma) const {
  auto it = entries_.find(gil::fold(lemma));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Lexicon::inflect(std::string_view lemma, const std::map<std::string, gil::Atom>& features) const {
  const LexiconEntry* e = find(lemma);
  if (!e) throw InflectionError("unknown lemma '" + std::string(lemma) + "'");
  const LexiconEntry::Cell* best = nullptr;
  bool ambiguous = false;
  for (const auto& cell : e->paradigm) {
    bool match = true;
    for (const auto& [f, v] : cell.key) {
      auto it = features.find(f);
      if (it == features.end() || gil::fold(it->second.display()) != v) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (!best || cell.key.size() > best->key.size()) {
      best = &cell;
      ambiguous = false;
    } else if (cell.key.size() == best->key.size() && cell.form != best->form) {
      ambiguous = true;
    }
  }
  if (best && ambiguous)
    throw InflectionError("ambiguous paradigm match for '" + std::string(lemma) + "'");
  if (best) return best->form;
  if (e->fallback) return *e->fallback;
  std::string have;
  for (const auto& [f, v] : features) have += (have.empty() ? "" : ",") + f + "=" + v.display();
  throw InflectionError("no form of '" + std::string(lemma) + "' for {" + have + "}");
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto fields = split(line, '|');
    LexiconEntry entry;
    entry.lemma = fields[0];
    if (entry.lemma.empty() || entry.lemma.find(' ') != std::string::npos)
      throw LexiconError("expected a single-word lemma before '|'", lineno);
    if (fields.size() < 2) throw LexiconError("entry '" + entry.lemma + "' has no forms", lineno);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::size_t arrow = fields[i].find("->");
      if (arrow == std::string::npos) throw LexiconError("expected 'key -> form' in '" + fields[i] + "'", lineno);
      std::string key = trim(std::string_view(fields[i]).substr(0, arrow));
      std::string form = trim(std::string_view(fields[i]).substr(arrow + 2));
      if (form.empty()) throw LexiconError("empty form in entry '" + entry.lemma + "'", lineno);
      if (key.empty()) {
        if (entry.fallback) throw LexiconError("entry '" + entry.lemma + "' has two fallbacks", lineno);
        entry.fallback = form;
        continue;
      }
      LexiconEntry::Cell cell;
      for (const auto& pair : split(key, ',')) {
        std::size_t eq = pair.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size())
          throw LexiconError("malformed feature pair '" + pair + "'", lineno);
        std::string f = upper(trim(pair.substr(0, eq)));
        if (!cell.key.emplace(f, gil::fold(trim(pair.substr(eq + 1)))).second)
          throw LexiconError("feature " + f + " repeated in one cell", lineno);
      }
      cell.form = form;
      entry.paradigm.push_back(std::move(cell));
    }
    lex.add(std::move(entry));
  }
  return lex;
}

Lexicon Lexicon::toy() { return parse(kToyLexicon); }

std::string weekday_name(std::int64_t day) {
  static const char* names[] = {"Montag", "Dienstag", "Mittwoch", "Donnerstag", "Freitag", "Samstag", "Sonntag"};
  if (day < 1 || day > 7) throw InflectionError("weekday out of range: " + std::to_string(day));
  return names[day - 1];
}

namespace {

std::int64_t day_arg(const InflectionRequest& req) {
  if (req.args.size() != 1 || !req.args[0].is_integer())
    throw InflectionError(req.function + " expects one integer argument");
  return req.args[0].integer;
}

}  // namespace

void install_toy_morphology(Registry& registry, std::shared_ptr<const Lexicon> lexicon) {
  for (const char* name : {"verb", "modal", "pronoun", "noun", "det", "adj"}) {
    registry.register_function(name, [lexicon, name](const InflectionRequest& req) {
      if (req.args.empty()) throw InflectionError(std::string(name) + " expects a lemma argument");
      return lexicon->inflect(req.args[0].display(), req.features);
    });
  }
  registry.register_function("word", [](const InflectionRequest& req) {
    std::string out;
    for (const auto& a : req.args) out += (out.empty() ? "" : " ") + a.display();
    return out;
  });
  registry.register_function("weekday", [](const InflectionRequest& req) { return weekday_name(day_arg(req)); });
  registry.register_function("weekday-pp",
                             [](const InflectionRequest& req) { return "am " + weekday_name(day_arg(req)); });
}

}  // namespace prodgen::morpho
