#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "prodgen/engine.hpp"
#include "prodgen/gil.hpp"
#include "prodgen/morpho.hpp"
#include "prodgen/prefs.hpp"
#include "prodgen/tgl.hpp"

namespace {

using namespace prodgen;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string at(const std::string& path, int line, int column) {
  std::string out = path;
  if (line > 0) out += ":" + std::to_string(line);
  if (column > 0) out += ":" + std::to_string(column);
  return out;
}

tgl::Grammar load_grammar(const std::string& path) {
  std::string text = slurp(path);
  try {
    return tgl::parse_grammar(text);
  } catch (const tgl::TglError& e) {
    throw UsageError(at(path, e.pos().line, e.pos().column) + ": error: " + e.what());
  }
}

gil::FsPtr load_input(const std::string& path) {
  std::string text = slurp(path);
  try {
    return gil::parse_gil(text);
  } catch (const gil::GilError& e) {
    throw UsageError(at(path, e.line(), e.column()) + ": error: " + e.what());
  }
}

Registry make_registry(const std::string& lexicon_path) {
  std::shared_ptr<const morpho::Lexicon> lexicon;
  if (lexicon_path.empty()) {
    lexicon = std::make_shared<morpho::Lexicon>(morpho::Lexicon::toy());
  } else {
    try {
      lexicon = std::make_shared<morpho::Lexicon>(morpho::Lexicon::parse(slurp(lexicon_path)));
    } catch (const morpho::LexiconError& e) {
      throw UsageError(at(lexicon_path, e.line(), 0) + ": error: " + e.what());
    }
  }
  Registry registry;
  morpho::install_toy_morphology(registry, lexicon);
  return registry;
}

// Prints diagnostics; true when one of them is an error.
bool report(const std::string& path, const std::vector<tgl::Diagnostic>& diags, std::ostream& out) {
  bool errors = false;
  for (const auto& d : diags) {
    out << at(path, d.pos.line, d.pos.column) << ": " << (d.is_error() ? "error: " : "warning: ");
    if (!d.rule.empty()) out << "rule \"" << d.rule << "\": ";
    out << d.message << '\n';
    errors |= d.is_error();
  }
  return errors;
}

struct RunConfig {
  std::string grammar;
  std::string input;
  std::string start;
  std::size_t max = 1;
  std::string criteria;
  std::string lexicon;
  std::string formula = "once";
  std::string history;
  bool weights = false;
  bool rank = false;
  bool trace = false;
  bool stats = false;
  bool table = false;
  bool dedupe = false;
  bool no_memo = false;
};

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--grammar", cfg.grammar, "TGL grammar file")->required();
  cmd->add_option("--input", cfg.input, "GIL input file")->required();
  cmd->add_option("--start", cfg.start, "start category (default: the grammar's, normally TXT)");
  cmd->add_option("--criteria", cfg.criteria, "criteria file: <rule-name> [weight] per line");
  cmd->add_option("--lexicon", cfg.lexicon, "lexicon file replacing the built-in one");
  cmd->add_option("--weight-formula", cfg.formula, "once: w per applied c-rule; divided: w/n")
      ->check(CLI::IsMember({"once", "divided"}));
  cmd->add_flag("--no-memo", cfg.no_memo, "disable the memo cache");
}

struct Session {
  tgl::Grammar grammar;
  Registry registry;
  gil::FsPtr input;
  GeneratorOptions options;
};

Session open_session(const RunConfig& cfg) {
  Session s{load_grammar(cfg.grammar), make_registry(cfg.lexicon), load_input(cfg.input), {}};
  auto diags = tgl::validate_grammar(s.grammar, s.registry);
  std::ostringstream msg;
  if (report(cfg.grammar, diags, msg)) throw UsageError(msg.str() + cfg.grammar + ": grammar has errors");
  std::cerr << msg.str();
  if (!cfg.start.empty() && !s.grammar.has_category(cfg.start))
    throw UsageError("unknown start category " + cfg.start);
  s.options.start = cfg.start;
  s.options.memo = !cfg.no_memo;
  if (!cfg.criteria.empty()) {
    try {
      s.options.criteria = prefs::parse_criteria(slurp(cfg.criteria));
    } catch (const prefs::CriteriaError& e) {
      throw UsageError(at(cfg.criteria, e.line(), 0) + ": error: " + e.what());
    }
    for (const auto& name : prefs::unknown_criteria(s.options.criteria, s.grammar))
      std::cerr << cfg.criteria << ": warning: no rule named \"" << name << "\"\n";
  }
  if (cfg.weights) s.options.criteria.mode = prefs::Mode::kWeightRanked;
  if (cfg.formula == "divided") s.options.criteria.formula = prefs::WeightFormula::kDividedByOccurrences;
  if (cfg.trace) s.options.trace = [](const TraceEvent& ev) { std::cerr << "trace: " << ev.str() << '\n'; };
  return s;
}

int cmd_generate(const RunConfig& cfg) {
  Session s = open_session(cfg);
  Generator gen(s.grammar, s.registry, s.input, s.options);
  std::vector<Solution> out;
  std::set<std::string> seen;
  auto accept = [&](Solution sol) {
    if (cfg.dedupe && !seen.insert(sol.text).second) return;
    out.push_back(std::move(sol));
  };
  if (cfg.rank) {
    for (auto& sol : gen.take(0)) accept(std::move(sol));
    rank_by_weight(out);
    if (cfg.max && out.size() > cfg.max) out.resize(cfg.max);
  } else {
    while (cfg.max == 0 || out.size() < cfg.max) {
      auto sol = gen.next();
      if (!sol) break;
      accept(std::move(*sol));
    }
  }
  prefs::DerivationHistory history;
  for (const auto& sol : out) {
    if (cfg.weights) std::cout << "[w=" << sol.weight.str() << "] ";
    std::cout << sol.text << '\n';
    if (!cfg.history.empty()) history.merge(prefs::record_history(*sol.derivation, s.options.criteria));
  }
  std::cout.flush();
  if (!cfg.history.empty()) {
    std::ofstream h(cfg.history);
    if (!h) throw UsageError(cfg.history + ": cannot write file");
    h << history.to_json() << '\n';
  }
  if (cfg.table) std::cerr << gen.table().render();
  if (cfg.stats) std::cerr << gen.stats().report();
  return out.empty() ? 1 : 0;
}

int cmd_stats(const RunConfig& cfg) {
  Session s = open_session(cfg);
  Generator gen(s.grammar, s.registry, s.input, s.options);
  auto all = gen.take(0);
  std::cout << gen.stats().report();
  if (cfg.table) std::cout << gen.table().render();
  return all.empty() ? 1 : 0;
}

int cmd_validate(const std::string& path, const std::string& lexicon) {
  tgl::Grammar g = load_grammar(path);
  Registry registry = make_registry(lexicon);
  auto diags = tgl::validate_grammar(g, registry);
  if (report(path, diags, std::cerr)) return 2;
  std::cout << "OK\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Production-rule surface realizer"};
  app.require_subcommand(1);

  RunConfig gen_cfg;
  auto* generate = app.add_subcommand("generate", "realize an input, printing one solution per line");
  add_run_options(generate, gen_cfg);
  generate->add_option("--max", gen_cfg.max, "number of solutions, 0 for all")->capture_default_str();
  generate->add_flag("--weights", gen_cfg.weights, "weight-ranked choices; prefix lines with [w=...]");
  generate->add_flag("--rank", gen_cfg.rank, "enumerate everything, then sort by weight");
  generate->add_flag("--trace", gen_cfg.trace, "trace rule firing on stderr");
  generate->add_flag("--stats", gen_cfg.stats, "statistics on stderr");
  generate->add_flag("--table", gen_cfg.table, "table of backtrack points on stderr");
  generate->add_flag("--dedupe", gen_cfg.dedupe, "drop repeated strings");
  generate->add_option("--history", gen_cfg.history, "write derivational history (JSON) of printed solutions");

  RunConfig stats_cfg;
  stats_cfg.max = 0;
  auto* stats = app.add_subcommand("stats", "enumerate all solutions and print statistics");
  add_run_options(stats, stats_cfg);
  stats->add_flag("--table", stats_cfg.table, "also print the table of backtrack points");

  std::string validate_path, validate_lexicon;
  auto* validate = app.add_subcommand("validate", "check a grammar");
  validate->add_option("--grammar", validate_path, "TGL grammar file")->required();
  validate->add_option("--lexicon", validate_lexicon, "lexicon file replacing the built-in one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) return cmd_generate(gen_cfg);
    if (*stats) return cmd_stats(stats_cfg);
    return cmd_validate(validate_path, validate_lexicon);
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
