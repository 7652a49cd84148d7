#include "torsionkit/cli.hpp"

#include <CLI11.hpp>

#include <sstream>

#include "torsionkit/computability.hpp"
#include "torsionkit/constructions.hpp"
#include "torsionkit/presentation_io.hpp"
#include "torsionkit/torsion.hpp"
#include "torsionkit/wordproblem.hpp"

namespace torsionkit {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Natural> parse_list(std::string_view text) {
  std::vector<Natural> out;
  std::stringstream in{std::string(text)};
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + item + "'");
    }
  }
  return out;
}

// `builtin:<name>[:a,b,...]` or a program file.
Program load_program(const std::string& spec) {
  if (!spec.starts_with("builtin:")) return parse_program(read_file(spec));
  std::string name = spec.substr(8);
  std::string args;
  if (auto colon = name.find(':'); colon != std::string::npos) {
    args = name.substr(colon + 1);
    name = name.substr(0, colon);
  }
  const auto values = parse_list(args);
  if (name == "identity") return programs::identity();
  if (name == "diverge") return programs::diverge();
  if (name == "doubling") return programs::doubling();
  if (name == "halt_on_evens") return programs::halt_on_evens();
  if (name == "total") return programs::total(values.empty() ? 0 : values[0]);
  if (name == "halt_on_set") return programs::halt_on_set(values);
  if (name == "membership") return programs::membership_predicate(values);
  if (name == "even_and_m_positive") return programs::even_and_m_positive_predicate();
  if (name == "constant") {
    if (values.size() != 1) throw UsageError("builtin:constant needs one value");
    return programs::constant(values[0]);
  }
  throw UsageError("unknown builtin program '" + name + "'");
}

Presentation load_presentation(const std::string& path) { return parse_presentation(read_file(path)); }

// Recipe text followed by `# rel <k>: <word>` for the first `emit` items;
// provenance goes to `<output>.prov` or `prov` when set.
void emit_stream(const Presentation& p, Natural emit, const std::string& output, const std::string& prov,
                 std::ostream& out) {
  const auto items = p.stream().take(emit);
  std::string text = format_presentation(p);
  for (std::size_t k = 0; k < items.size(); ++k) {
    text += "# rel " + std::to_string(k) + ": " + format_word(items[k].word, p.names()) + "\n";
  }
  std::string prov_path = prov;
  if (!output.empty()) {
    write_file(output, text);
    if (prov_path.empty()) prov_path = output + ".prov";
  } else {
    out << text;
  }
  if (!prov_path.empty()) write_file(prov_path, format_provenance(items));
}

int report(const Verdict& v, const NameTable& names, std::ostream& out) {
  out << "verdict " << to_string(v.status) << "\n";
  out << "fuel " << v.fuel_spent << "\n";
  if (v.provisional) out << "provisional\n";
  if (v.certificate) out << format_certificate(*v.certificate, names);
  switch (v.status) {
    case Status::proved:
      return kExitProved;
    case Status::refuted:
      return kExitRefuted;
    case Status::unknown:
      return kExitUnknown;
  }
  return kExitUnknown;
}

std::vector<const char*> argv_of(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"torsionkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return argv;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Group presentations, torsion and word problems"};
  app.require_subcommand(1);

  // wp
  std::string wp_file, wp_word, wp_engine;
  Natural wp_fuel = 0, wp_degree = 0;
  auto* wp = app.add_subcommand("wp", "Word problem query");
  wp->add_option("presentation", wp_file)->required();
  wp->add_option("word", wp_word)->required();
  wp->add_option("--engine", wp_engine)->required()->check(CLI::IsMember({"closure", "tc", "kb", "quotient"}));
  wp->add_option("--fuel", wp_fuel, "Step budget; coset limit for tc; relator budget for quotient")->required();
  wp->add_option("--degree", wp_degree, "Largest permutation degree (quotient)");

  // tf
  std::string tf_file, tf_output, tf_prov;
  Natural tf_emit = 0;
  auto* tf = app.add_subcommand("tf", "Torsion-free quotient stream");
  tf->add_option("presentation", tf_file)->required();
  tf->add_option("--emit", tf_emit, "Relators to list")->required();
  tf->add_option("-o,--output", tf_output);
  tf->add_option("--prov", tf_prov);

  // torord
  std::string to_file;
  Natural to_bound = 0, to_fuel = 0;
  TorordOptions to_options;
  auto* torord = app.add_subcommand("torord", "Certified torsion orders up to a bound");
  torord->add_option("presentation", to_file)->required();
  torord->add_option("--bound", to_bound)->required();
  torord->add_option("--fuel", to_fuel, "Fuel per triviality query")->required();
  torord->add_option("--words", to_options.words)->capture_default_str();
  torord->add_option("--degree", to_options.max_degree)->capture_default_str();
  torord->add_option("--prefix", to_options.relator_prefix)->capture_default_str();

  // tc
  std::string tc_file;
  Natural tc_max = 0;
  std::vector<std::string> tc_subgroup;
  auto* tc = app.add_subcommand("tc", "Todd-Coxeter coset enumeration");
  tc->add_option("presentation", tc_file)->required();
  tc->add_option("--max-cosets", tc_max)->required();
  tc->add_option("--subgroup", tc_subgroup, "Subgroup generator (repeatable)");

  // kb
  std::string kb_file;
  Natural kb_fuel = 0;
  auto* kb = app.add_subcommand("kb", "Knuth-Bendix completion");
  kb->add_option("presentation", kb_file)->required();
  kb->add_option("--fuel", kb_fuel)->required();

  // construct
  std::string co_kind, co_program, co_output, co_prov;
  Natural co_prime = 0, co_budget = 0, co_emit = 0;
  std::optional<Natural> co_limit;
  auto* construct = app.add_subcommand("construct", "Build pn, qphi, qcomp or universal");
  construct->add_option("kind", co_kind)->required()->check(CLI::IsMember({"pn", "qphi", "qcomp", "universal"}));
  construct->add_option("--program", co_program, "Program file or builtin:<name>[:args]");
  construct->add_option("--prime", co_prime);
  construct->add_option("--budget", co_budget, "Steps per phi evaluation (qphi)");
  construct->add_option("--limit", co_limit, "Number of factors (universal)");
  construct->add_option("--emit", co_emit, "Relators to list")->required();
  construct->add_option("-o,--output", co_output);
  construct->add_option("--prov", co_prov);

  // pair
  std::vector<Natural> pa_values;
  bool pa_unpair = false;
  auto* pair = app.add_subcommand("pair", "Cantor pairing");
  pair->add_option("values", pa_values)->required();
  pair->add_flag("--unpair", pa_unpair);

  // we, crush
  std::string we_program;
  Natural we_items = 0, we_diagonals = 0;
  auto* we = app.add_subcommand("we", "Enumerate the domain of a program");
  we->add_option("program", we_program)->required();
  we->add_option("--items", we_items)->required();
  we->add_option("--diagonals", we_diagonals)->required();
  std::string cr_program;
  Natural cr_items = 0, cr_diagonals = 0;
  auto* crush_cmd = app.add_subcommand("crush", "Enumerate the crushed domain of a program");
  crush_cmd->add_option("program", cr_program)->required();
  crush_cmd->add_option("--items", cr_items)->required();
  crush_cmd->add_option("--diagonals", cr_diagonals)->required();

  // abel
  std::string ab_file;
  auto* abel = app.add_subcommand("abel", "Abelianization invariants");
  abel->add_option("presentation", ab_file)->required();

  const auto argv = argv_of(args);
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*wp) {
      const auto p = load_presentation(wp_file);
      const Word w = parse_word(wp_word, p.names());
      p.check_word(w);
      if (wp_engine == "closure") return report(normal_closure_prove_trivial(p, w, wp_fuel), p.names(), out);
      if (wp_engine == "quotient") {
        if (wp_degree == 0) throw UsageError("--degree is required for the quotient engine");
        return report(refute_trivial_finite_quotient(p, w, wp_degree, wp_fuel), p.names(), out);
      }
      if (!p.is_finite()) throw UsageError(wp_engine + " needs a finite presentation");
      if (wp_engine == "tc") {
        Verdict v;
        if (auto table = todd_coxeter(p, {}, wp_fuel)) {
          v.status = table->trace(0, w) == 0 ? Status::proved : Status::refuted;
          v.certificate = CosetTableCertificate{*table, {}, w};
        }
        v.fuel_spent = wp_fuel;
        return report(v, p.names(), out);
      }
      Natural spent = 0;
      auto system = kb_complete(p, wp_fuel, &spent);
      Verdict v;
      if (system) v = kb_decide(*system, w);
      v.fuel_spent = spent;
      return report(v, p.names(), out);
    }
    if (*tf) {
      emit_stream(torsion_free_quotient(load_presentation(tf_file)), tf_emit, tf_output, tf_prov, out);
      return kExitProved;
    }
    if (*torord) {
      if (to_bound < 2) throw UsageError("--bound must be at least 2");
      const auto p = load_presentation(to_file);
      const auto result = torord_bounded(p, to_bound, to_fuel, to_options);
      for (const auto& c : result.certificates) out << format_order_line(c, p.names()) << "\n";
      return kExitProved;
    }
    if (*tc) {
      const auto p = load_presentation(tc_file);
      if (!p.is_finite()) throw UsageError("tc needs a finite presentation");
      std::vector<Word> subgroup;
      for (const auto& s : tc_subgroup) subgroup.push_back(parse_word(s, p.names()));
      for (const auto& s : subgroup) p.check_word(s);
      auto table = todd_coxeter(p, subgroup, tc_max);
      if (!table) {
        out << "index unknown\n";
        return kExitUnknown;
      }
      out << "index " << table->size() << "\n";
      out << format_certificate(CosetTableCertificate{*table, subgroup, Word{}}, p.names());
      return kExitProved;
    }
    if (*kb) {
      const auto p = load_presentation(kb_file);
      if (!p.is_finite()) throw UsageError("kb needs a finite presentation");
      Natural spent = 0;
      auto system = kb_complete(p, kb_fuel, &spent);
      out << "fuel " << spent << "\n";
      if (!system) {
        out << "confluent unknown\n";
        return kExitUnknown;
      }
      out << "confluent yes\n";
      for (const auto& r : system->rules()) {
        out << "rule " << format_word(r.lhs, p.names()) << " -> " << format_word(r.rhs, p.names()) << "\n";
      }
      return kExitProved;
    }
    if (*construct) {
      Presentation p;
      auto need_program = [&] {
        if (co_program.empty()) throw UsageError("construct " + co_kind + " needs --program");
        return load_program(co_program);
      };
      if (co_kind == "pn") {
        if (co_prime == 0) throw UsageError("construct pn needs --prime");
        p = build_Pn(co_prime, ReSet::from_program(need_program()));
      } else if (co_kind == "qphi") {
        if (co_budget == 0) throw UsageError("construct qphi needs --budget");
        p = build_Qphi(Sigma2Predicate{need_program(), co_budget});
      } else if (co_kind == "qcomp") {
        p = build_Qn_complement(ReSet::from_program(need_program()));
      } else {
        p = universal_tf_assembly(co_limit);
      }
      emit_stream(p, co_emit, co_output, co_prov, out);
      return kExitProved;
    }
    if (*pair) {
      if (pa_unpair) {
        if (pa_values.size() != 1) throw UsageError("pair --unpair takes one value");
        auto [x, y] = cantor_unpair(pa_values[0]);
        out << x << " " << y << "\n";
      } else {
        if (pa_values.size() != 2) throw UsageError("pair takes two values");
        out << cantor_pair(pa_values[0], pa_values[1]) << "\n";
      }
      return kExitProved;
    }
    if (*we || *crush_cmd) {
      const bool crushed = crush_cmd->parsed();
      ReSet s = ReSet::from_program(load_program(crushed ? cr_program : we_program));
      if (crushed) s = crush(s);
      const auto items = crushed ? we_enumerate(s, cr_items, cr_diagonals) : we_enumerate(s, we_items, we_diagonals);
      for (std::size_t k = 0; k < items.size(); ++k) out << (k ? " " : "") << items[k];
      out << "\n";
      return kExitProved;
    }
    if (*abel) {
      const auto p = load_presentation(ab_file);
      if (!p.is_finite()) throw UsageError("abel needs a finite presentation");
      out << "invariants";
      for (const auto& d : abelianization_invariants(p)) out << " " << d;
      out << "\n";
      return kExitProved;
    }
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnknown;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace torsionkit
