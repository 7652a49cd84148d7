#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "torsionkit/cli.hpp"
#include "torsionkit/computability.hpp"
#include "torsionkit/constructions.hpp"
#include "torsionkit/presentation_io.hpp"
#include "torsionkit/torsion.hpp"
#include "torsionkit/wordproblem.hpp"

namespace py = pybind11;
using namespace torsionkit;

namespace {

// Words cross the boundary as text in the presentation's names.
Word word_in(const Presentation& p, const std::string& text) {
  Word w = parse_word(text, p.names());
  p.check_word(w);
  return w;
}

py::dict verdict_dict(const Verdict& v, const Presentation& p) {
  py::dict d;
  d["status"] = to_string(v.status);
  d["fuel_spent"] = v.fuel_spent;
  d["provisional"] = v.provisional;
  d["certificate"] = v.certificate ? py::cast(format_certificate(*v.certificate, p.names())) : py::none();
  return d;
}

std::vector<std::vector<Natural>> table_rows(const CosetTable& t) { return t.rows; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Group presentations, word problems and torsion orders";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);

  m.def("cantor_pair", &cantor_pair, py::arg("x"), py::arg("y"));
  m.def("cantor_unpair", &cantor_unpair, py::arg("z"));
  m.def("nth_prime", &nth_prime, py::arg("i"));

  m.def("free_reduce", [](const std::string& w) { return format_word(parse_word(w)); });
  m.def("invert", [](const std::string& w) { return format_word(invert(parse_word(w))); });
  m.def("concat", [](const std::string& u, const std::string& v) {
    return format_word(concat(parse_word(u), parse_word(v)));
  });
  m.def("power", [](const std::string& w, std::int64_t n) { return format_word(power(parse_word(w), n)); });
  m.def("cyclic_reduce", [](const std::string& w) {
    auto [core, c] = cyclic_reduce(parse_word(w));
    return std::make_pair(format_word(core), format_word(c));
  }, "Returns (core, c) with w = c core c^-1.");
  m.def("enumerate_words", [](std::optional<Natural> gens, Natural rank) {
    return format_word(enumerate_words(gens, rank));
  }, py::arg("generators"), py::arg("rank"));

  py::class_<Presentation>(m, "Presentation")
      .def_static("parse", &parse_presentation, py::arg("text"))
      .def_static("finite", [](Natural gens, const std::vector<std::string>& rels, std::vector<std::string> names) {
        NameTable table(names);
        std::vector<Word> words;
        for (const auto& r : rels) words.push_back(parse_word(r, table));
        return Presentation::finite(gens, std::move(words), std::move(names));
      }, py::arg("generators"), py::arg("relators"), py::arg("names") = std::vector<std::string>{})
      .def("to_text", &format_presentation)
      .def_property_readonly("kind", [](const Presentation& p) { return to_string(p.presentation_class()); })
      .def_property_readonly("generator_count", [](const Presentation& p) -> std::optional<Natural> {
        if (!p.has_finite_alphabet()) return std::nullopt;
        return p.generator_count();
      })
      .def("relators", [](const Presentation& p, std::size_t n) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& r : p.stream().take(n)) out.emplace_back(format_word(r.word, p.names()), r.cause);
        return out;
      }, py::arg("n"), "First n (word, cause) pairs of the relator stream.")
      .def("__repr__", [](const Presentation& p) { return "<Presentation " + to_string(p.presentation_class()) + ">"; });

  m.def("free_product", &free_product, py::arg("parts"));
  m.def("k_torsion_quotient", &k_torsion_quotient, py::arg("p"), py::arg("k"));
  m.def("torsion_free_quotient", &torsion_free_quotient, py::arg("p"));
  m.def("abelianization_invariants", [](const Presentation& p) {
    std::vector<py::int_> out;
    for (const auto& d : abelianization_invariants(p)) out.push_back(py::int_(py::str(d.str())));
    return out;
  }, py::arg("p"));
  m.def("enumerate_finite_presentations", &enumerate_finite_presentations, py::arg("rank"));

  m.def("prove_trivial", [](const Presentation& p, const std::string& w, Natural fuel) {
    Verdict v;
    {
      py::gil_scoped_release release;
      v = normal_closure_prove_trivial(p, word_in(p, w), fuel);
    }
    return verdict_dict(v, p);
  }, py::arg("p"), py::arg("word"), py::arg("fuel"));
  m.def("refute_trivial", [](const Presentation& p, const std::string& w, Natural max_degree, Natural relator_budget) {
    return verdict_dict(refute_trivial_finite_quotient(p, word_in(p, w), max_degree, relator_budget), p);
  }, py::arg("p"), py::arg("word"), py::arg("max_degree"), py::arg("relator_budget") = 256);
  m.def("coset_table", [](const Presentation& p, const std::vector<std::string>& subgroup,
                          Natural max_cosets) -> std::optional<std::vector<std::vector<Natural>>> {
    std::vector<Word> h;
    for (const auto& s : subgroup) h.push_back(word_in(p, s));
    auto t = todd_coxeter(p, h, max_cosets);
    if (!t) return std::nullopt;
    return table_rows(*t);
  }, py::arg("p"), py::arg("subgroup") = std::vector<std::string>{}, py::arg("max_cosets") = 10000,
        "Rows of the coset table, or None past max_cosets.");

  m.def("torord", [](const Presentation& p, Natural bound, Natural fuel, Natural words, Natural max_degree,
                     Natural relator_prefix) {
    TorordOptions o;
    o.words = words;
    o.max_degree = max_degree;
    o.relator_prefix = relator_prefix;
    TorordResult r;
    {
      py::gil_scoped_release release;
      r = torord_bounded(p, bound, fuel, o);
    }
    std::vector<std::string> lines;
    for (const auto& c : r.certificates) lines.push_back(format_order_line(c, p.names()));
    return std::make_pair(r.orders.members(), lines);
  }, py::arg("p"), py::arg("bound"), py::arg("fuel"), py::arg("words") = 64, py::arg("max_degree") = 6,
        py::arg("relator_prefix") = 256, "Returns (orders, certificate lines).");

  m.def("build_pn", [](Natural prime, const std::string& reset) { return build_Pn(prime, parse_reset(reset)); },
        py::arg("prime"), py::arg("reset"));
  m.def("build_qcomp", [](const std::string& reset) { return build_Qn_complement(parse_reset(reset)); },
        py::arg("reset"));
  m.def("build_qphi", [](const std::string& program, Natural budget) {
    return build_Qphi(Sigma2Predicate{parse_program(program), budget});
  }, py::arg("program"), py::arg("budget"));
  m.def("universal_tf_assembly", [](std::optional<Natural> limit) { return universal_tf_assembly(limit); },
        py::arg("limit") = py::none());

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command line in process; returns (exit code, stdout, stderr).");
}
