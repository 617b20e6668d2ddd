#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "prodgen/engine.hpp"
#include "prodgen/gil.hpp"
#include "prodgen/morpho.hpp"
#include "prodgen/prefs.hpp"
#include "prodgen/tgl.hpp"

namespace py = pybind11;
using namespace prodgen;

namespace {

// Raised for malformed GIL, TGL, criteria or lexicon text.
struct SyntaxProblem {
  std::string message;
  int line;
  int column;
};

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const gil::GilError& e) {
    throw SyntaxProblem{e.what(), e.line(), e.column()};
  } catch (const tgl::TglError& e) {
    throw SyntaxProblem{e.what(), e.pos().line, e.pos().column};
  } catch (const prefs::CriteriaError& e) {
    throw SyntaxProblem{e.what(), e.line(), 0};
  } catch (const morpho::LexiconError& e) {
    throw SyntaxProblem{e.what(), e.line(), 0};
  }
}

py::object to_python(const gil::Value& v) {
  if (v.is_fs()) {
    py::dict d;
    for (const auto& [name, child] : v.fs()->pairs()) d[py::str(name)] = to_python(child);
    return d;
  }
  if (v.is_list()) {
    py::list l;
    for (const auto& item : v.list()) l.append(to_python(item));
    return l;
  }
  const gil::Atom& a = v.atom();
  if (a.is_integer()) return py::int_(a.integer);
  return py::str(a.text);
}

Registry make_registry(const std::optional<std::string>& lexicon) {
  auto lex = std::make_shared<morpho::Lexicon>(lexicon ? morpho::Lexicon::parse(*lexicon) : morpho::Lexicon::toy());
  Registry r;
  morpho::install_toy_morphology(r, lex);
  return r;
}

py::dict solution_dict(const Solution& s) {
  py::dict d;
  d["text"] = s.text;
  d["weight"] = s.weight.str();
  d["rules"] = s.derivation->applied_rules();
  d["step"] = s.step;
  return d;
}

py::dict stats_dict(const Stats& s) {
  py::dict d;
  d["solutions"] = s.solutions;
  d["rules_fired"] = s.rules_fired;
  d["rules_failed"] = s.rules_failed;
  d["constraint_conflicts"] = s.constraint_conflicts;
  d["memo_hits"] = s.memo_hits;
  d["memo_misses"] = s.memo_misses;
  d["inflections"] = s.inflections;
  d["rerealizations"] = s.rerealizations;
  d["reused_tokens"] = s.reused_tokens;
  d["backtrack_points"] = s.bt_created;
  d["expansions"] = s.bt_expanded;
  return d;
}

// Owns everything a Generator borrows.
class Session {
 public:
  Session(const std::string& grammar, const std::string& input, const std::string& start,
          const std::optional<std::string>& criteria, bool weights, bool memo, const std::string& formula,
          const std::optional<std::string>& lexicon) {
    guarded([&] {
      grammar_ = tgl::parse_grammar(grammar);
      registry_ = make_registry(lexicon);
      input_ = gil::parse_gil(input);
      if (criteria) options_.criteria = prefs::parse_criteria(*criteria);
      return 0;
    });
    for (const auto& d : tgl::validate_grammar(grammar_, registry_))
      if (d.is_error()) throw std::invalid_argument(d.str());
    if (!start.empty() && !grammar_.has_category(start)) throw std::invalid_argument("unknown start category " + start);
    if (formula == "divided")
      options_.criteria.formula = prefs::WeightFormula::kDividedByOccurrences;
    else if (formula != "once")
      throw std::invalid_argument("weight formula must be 'once' or 'divided'");
    if (weights) options_.criteria.mode = prefs::Mode::kWeightRanked;
    options_.start = start;
    options_.memo = memo;
    gen_ = std::make_unique<Generator>(grammar_, registry_, input_, options_);
  }

  std::optional<py::dict> next() {
    auto s = gen_->next();
    if (!s) return std::nullopt;
    return solution_dict(*s);
  }

  py::list take(std::size_t max) {
    py::list out;
    for (const auto& s : gen_->take(max)) out.append(solution_dict(s));
    return out;
  }

  py::dict stats() const { return stats_dict(gen_->stats()); }
  std::string table() const { return gen_->table().render(); }
  bool done() const { return gen_->done(); }

 private:
  tgl::Grammar grammar_;
  Registry registry_;
  gil::FsPtr input_;
  GeneratorOptions options_;
  std::unique_ptr<Generator> gen_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Production-rule surface realizer";

  static PyObject* parse_error = PyErr_NewException("prodgen._core.ParseError", PyExc_ValueError, nullptr);
  m.add_object("ParseError", py::handle(parse_error));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SyntaxProblem& e) {
      py::object err = py::reinterpret_borrow<py::object>(parse_error)(e.message);
      err.attr("line") = e.line;
      err.attr("column") = e.column;
      PyErr_SetObject(parse_error, err.ptr());
    }
  });
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);
  py::register_exception<InflectionError>(m, "InflectionError", PyExc_RuntimeError);

  m.def(
      "parse_gil", [](const std::string& text) { return guarded([&] { return to_python(gil::Value(gil::parse_gil(text))); }); },
      py::arg("text"), "Parse GIL text into nested dicts, lists, strings and ints.");
  m.def(
      "canonical_gil",
      [](const std::string& text) { return guarded([&] { return gil::serialize_gil(*gil::parse_gil(text)); }); },
      py::arg("text"), "Canonical GIL spelling, sharing written with #n tags.");
  m.def(
      "validate",
      [](const std::string& grammar, const std::optional<std::string>& lexicon) {
        auto g = guarded([&] { return tgl::parse_grammar(grammar); });
        Registry reg = guarded([&] { return make_registry(lexicon); });
        py::list out;
        for (const auto& d : tgl::validate_grammar(g, reg)) {
          py::dict item;
          item["severity"] = d.is_error() ? "error" : "warning";
          item["rule"] = d.rule;
          item["line"] = d.pos.line;
          item["column"] = d.pos.column;
          item["message"] = d.message;
          out.append(item);
        }
        return out;
      },
      py::arg("grammar"), py::arg("lexicon") = py::none(), "Diagnostics for a grammar text.");

  py::class_<Session>(m, "Session")
      .def(py::init<const std::string&, const std::string&, const std::string&, const std::optional<std::string>&,
                    bool, bool, const std::string&, const std::optional<std::string>&>(),
           py::arg("grammar"), py::arg("input"), py::arg("start") = "", py::arg("criteria") = py::none(),
           py::arg("weights") = false, py::arg("memo") = true, py::arg("formula") = "once",
           py::arg("lexicon") = py::none())
      .def("next", &Session::next, "Next solution, or None when exhausted.")
      .def("take", &Session::take, py::arg("max") = 0, "Up to max further solutions; 0 takes all.")
      .def("stats", &Session::stats)
      .def("table", &Session::table)
      .def("done", &Session::done)
      .def("__iter__", [](py::object self) { return self; })
      .def("__next__", [](Session& s) {
        auto r = s.next();
        if (!r) throw py::stop_iteration();
        return *r;
      });
}
