// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. The torsionkit executable path is argv[1].
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "torsionkit/computability.hpp"
#include "torsionkit/constructions.hpp"
#include "torsionkit/presentation_io.hpp"
#include "torsionkit/wordproblem.hpp"

using namespace torsionkit;

namespace {

std::string cli_path;
std::vector<std::set<Natural>> snapshots;  // every certified torord set computed here

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

Presentation fp(Natural gens, const std::vector<Word>& rels) { return Presentation::finite(gens, rels); }
Word W(const std::string& s) { return parse_word(s); }

std::vector<Word> prefix_words(const Presentation& p, std::size_t n) {
  std::vector<Word> out;
  for (const auto& r : p.stream().take(n)) out.push_back(r.word);
  return out;
}

std::string format_set(const std::set<Natural>& s) {
  std::string out = "{";
  for (Natural n : s) out += (out.size() > 1 ? "," : "") + std::to_string(n);
  return out + "}";
}

// Runs torord, re-verifies each certificate against the relators a refutation
// had to respect, and records the snapshot.
std::set<Natural> certified(Check& c, const Presentation& p, Natural bound, Natural fuel, Natural max_degree) {
  TorordOptions options;
  options.max_degree = max_degree;
  const auto r = torord_bounded(p, bound, fuel, options);
  const std::vector<Word> rels =
      p.is_finite() ? p.relators() : prefix_words(p, 4 * options.relator_prefix);
  for (const auto& cert : r.certificates) {
    c.expect(verify_order_certificate(cert, rels), "certificate for order " + std::to_string(cert.order) + " fails");
    for (const auto& [d, w] : cert.refutations) c.expect(w.degree <= max_degree, "refutation degree too large");
  }
  snapshots.push_back(r.orders.members());
  return r.orders.members();
}

std::vector<Word> words_up_to(Natural gens, std::size_t len) {
  std::vector<Word> out;
  for (Natural r = 0;; ++r) {
    Word w = enumerate_words(gens, r);
    if (w.size() > len) break;
    out.push_back(w);
  }
  return out;
}

std::vector<Natural> divisors(Natural n) {
  std::vector<Natural> out;
  for (Natural d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

void criterion_1(Check& c) {
  for (Natural x = 0; x <= 2000; ++x) {
    for (Natural y = 0; y <= 2000; ++y) {
      const Natural z = cantor_pair(x, y);
      if (z != (x + y) * (x + y + 1) / 2 + y || cantor_unpair(z) != std::make_pair(x, y)) {
        c.expect(false, "pair mismatch at " + std::to_string(x) + "," + std::to_string(y));
        return;
      }
    }
  }
  // Surjective onto the triangle the square covers.
  const Natural top = cantor_pair(2000, 0);
  for (Natural z = 0; z <= top; ++z) {
    auto [x, y] = cantor_unpair(z);
    c.expect(x <= 2000 && y <= 2000 && cantor_pair(x, y) == z, "unpair mismatch at " + std::to_string(z));
  }
}

std::vector<Natural> range(Natural n) {
  std::vector<Natural> out(n);
  std::iota(out.begin(), out.end(), Natural{0});
  return out;
}

void criterion_2(Check& c) {
  const std::vector<std::vector<Natural>> fixtures{{},     {7},     {0},          {2, 9},           {1, 30},
                                                   {4, 5}, {1, 2, 3, 4, 5}, {0, 6, 12, 18, 24}, {3, 10, 17, 21, 40}, {19}};
  for (const auto& w : fixtures) {
    const ReSet s = w.empty() ? ReSet::from_program(programs::diverge())
                              : ReSet::from_program(programs::halt_on_set(w, 2));
    const auto got = we_enumerate(crush(s), 50, 4000);
    c.expect(got == range(w.size()), "crush of a set of size " + std::to_string(w.size()));
  }
  c.expect(we_enumerate(crush(ReSet::from_program(programs::total(1))), 60, 4000) == range(60), "crush of N");
  c.expect(we_enumerate(crush(ReSet::from_program(programs::halt_on_evens())), 30, 4000) == range(30),
           "crush of the evens");
}

void criterion_3(Check& c) {
  const auto finite = build_Pn(3, ReSet::from_program(programs::halt_on_set({2, 5, 6})));
  const auto got = certified(c, finite, 10, 1000000, 3);
  c.expect(got == std::set<Natural>{3}, "finite W gave " + format_set(got));
  const auto total = build_Pn(3, ReSet::from_program(programs::total()));
  for (Natural j = 0; j <= 20; ++j) {
    const auto v = normal_closure_prove_trivial(total, Word::generator(j), 1000000);
    c.expect(v.status == Status::proved && verify_certificate(total, *v.certificate),
             "x" + std::to_string(j) + " not proved trivial");
  }
  const auto none = certified(c, total, 10, 1000000, 3);
  c.expect(none.empty(), "total W gave " + format_set(none));
}

void criterion_4(Check& c) {
  const Natural budget = 100000000;
  const auto a = certified(c, build_Qphi({programs::membership_predicate({2, 3, 4, 6}), budget}), 12, 2000, 6);
  c.expect(a == std::set<Natural>{2, 3, 4, 6}, "A = {2,3,4,6} gave " + format_set(a));
  const auto q = build_Qphi({programs::membership_predicate({2, 3, 4, 6}), budget});
  c.expect(check_stage_discipline(q.stream().take(400)), "stage discipline");
  const auto empty = certified(c, build_Qphi({programs::constant(0), budget}), 12, 2000, 6);
  c.expect(empty.empty(), "A = {} gave " + format_set(empty));
  const auto all = certified(c, build_Qphi({programs::constant(1), budget}), 12, 2000, 12);
  std::set<Natural> expect;
  for (Natural n = 2; n <= 12; ++n) expect.insert(n);
  c.expect(all == expect, "A = all gave " + format_set(all));
}

void criterion_5(Check& c) {
  const auto xy = torsion_free_quotient(fp(2, {W("x0^2"), W("x1^3")}));
  for (const char* g : {"x0", "x1"}) {
    const auto v = normal_closure_prove_trivial(xy, W(g), 1000000);
    c.expect(v.status == Status::proved, std::string(g) + " not proved in <x,y | x^2, y^3>^tf");
  }

  const auto p = fp(3, {W("x0^2"), W("x1^3"), concat(W("x0 x1"), Word::generator(2, -6))});
  const auto q = torsion_free_quotient(p);
  for (const char* g : {"x0", "x1", "x2"}) {
    const auto v = normal_closure_prove_trivial(q, W(g), 1000000);
    c.expect(v.status == Status::proved, std::string(g) + " not proved in the tf quotient");
  }
  bool stage_two_z = false;
  for (const auto& r : q.stream().take(2000)) {
    if (r.cause.starts_with("tower stage 2 word x2 ")) stage_two_z = true;
    if (r.cause.starts_with("tower stage 1 word x2")) c.expect(false, "z emitted at stage 1");
  }
  c.expect(stage_two_z, "no stage 2 emission of z");

  const auto f2 = torsion_free_quotient(fp(2, {}));
  for (const auto& r : f2.stream().take(10000)) c.expect(r.word.empty(), "nonempty relator in F2^tf");
}

void criterion_6(Check& c) {
  const std::vector<std::pair<Presentation, Natural>> cases{
      {fp(2, {W("x0^2"), W("x1^3"), W("x0 x1 x0 x1")}), 6}, {fp(1, {W("x0^6")}), 6}};
  for (const auto& [p, size] : cases) {
    const auto table = todd_coxeter(p, {}, 1000);
    c.expect(table && table->size() == size, "coset table size");
    const auto kb = kb_complete(p, 1000000);
    c.expect(kb.has_value(), "knuth-bendix did not complete");
    if (!table || !kb) return;
    for (const auto& w : words_up_to(p.generator_count(), 4)) {
      const bool tc = table->trace(0, w) == 0;
      c.expect(kb->normal_form(w).empty() == tc, "kb disagrees on " + format_word(w));
      const auto v = normal_closure_prove_trivial(p, w, 20000);
      c.expect((v.status == Status::proved) == tc, "closure disagrees on " + format_word(w));
      const Natural n = element_order_in_table(*table, w);
      c.expect(size % n == 0, "order does not divide the group order");
      for (Natural k = 1; k <= 6; ++k) {
        c.expect(element_order_in_table(*table, power(w, static_cast<std::int64_t>(k))) == n / std::gcd(n, k),
                 "order of a power of " + format_word(w));
      }
      c.expect(table->trace(0, power(w, static_cast<std::int64_t>(n))) == 0, "w^order not trivial");
    }
    std::set<Natural> orders;
    for (const auto& w : words_up_to(p.generator_count(), 4)) {
      const Natural n = element_order_in_table(*table, w);
      if (n > 1) orders.insert(n);
    }
    const auto got = certified(c, p, size, 20000, 6);
    c.expect(got == orders, "torord " + format_set(got) + " vs table " + format_set(orders));
  }
}

void criterion_7(Check& c) {
  const auto v4 = todd_coxeter(fp(2, {W("x0^2"), W("x1^2"), W("x0 x1 x0 x1")}), {}, 100);
  c.expect(v4 && v4->complete && v4->size() == 4, "coset table of the Klein group");
  if (!v4) return;
  const auto items = k_torsion_quotient(fp(2, {}), 2).stream().take(200);
  c.expect(items.size() == 200, "fewer than 200 relators");
  for (const auto& r : items)
    for (Natural coset = 0; coset < v4->size(); ++coset)
      c.expect(v4->trace(coset, r.word) == coset, "relator " + format_word(r.word) + " is not the identity");
}

void criterion_8(Check& c) {
  // Cyclic products checked against the oracle, then every snapshot so far.
  for (const auto& orders : std::vector<std::vector<Natural>>{{4, 6}, {12}, {2, 5}}) {
    std::vector<Word> rels;
    for (std::size_t i = 0; i < orders.size(); ++i)
      rels.push_back(Word::generator(i, static_cast<std::int64_t>(orders[i])));
    const Natural bound = *std::max_element(orders.begin(), orders.end());
    const auto got = certified(c, fp(orders.size(), rels), bound, 20000, bound);
    c.expect(got == torord_oracle_cyclics(orders), "free product of cyclics gave " + format_set(got));
  }
  for (const auto& s : snapshots)
    c.expect(is_factor_complete(divisor_closure(s)), "snapshot " + format_set(s) + " not factor-complete");
  if (c.ok) c.detail = std::to_string(snapshots.size()) + " snapshots";
}

void criterion_9(Check& c) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    std::set<Natural> x;
    for (Natural k = 0, n = rng() % 12; k < n; ++k) x.insert(1 + rng() % 200);
    const auto coded = prime_code(x);
    c.expect(prime_decode(coded.members()) == x, "prime code round trip");
    c.expect(is_factor_complete(coded.members()), "prime code not factor-complete");
  }
}

void criterion_10(Check& c) {
  const auto basis = f2_universal_basis(2);
  std::set<Word> images;
  Natural count = 0;
  for (const auto& w : words_up_to(2, 5)) {
    Word image;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Word& b = basis[w[i].generator.index];
      image = concat(image, w[i].inverse() ? invert(b) : b);
    }
    images.insert(image);
    ++count;
  }
  c.expect(count == 1 + 4 + 12 + 36 + 108 + 324, "word count");
  c.expect(images.size() == count, "basis words collide");
}

std::string run_process(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  out += "\nexit " + std::to_string(pclose(pipe));
  return out;
}

void criterion_11(Check& c) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "torsionkit_acceptance";
  fs::create_directories(dir);
  const std::string input = (dir / "xyz.txt").string();
  write_file(input, "gens: 3\nrel: x0^2\nrel: x1^3\nrel: x0 x1 x2^-1 x2^-1 x2^-1 x2^-1 x2^-1 x2^-1\n");
  const std::string free2 = (dir / "f2.txt").string();
  write_file(free2, "gens: 2\nstream: kt 2\n");
  const std::vector<std::string> commands{
      "tf " + input + " --emit 300",
      "tf " + free2 + " --emit 200",
      "construct pn --prime 3 --program builtin:halt_on_set:2,5 --emit 100",
      "construct qphi --program builtin:membership:2,3,4,6 --budget 100000000 --emit 200",
      "construct qcomp --program builtin:halt_on_evens --emit 100",
      "construct universal --limit 4 --emit 100",
      "torord " + input + " --bound 6 --fuel 20000",
  };
  for (const auto& args : commands) {
    const std::string out_a = (dir / "a.txt").string(), out_b = (dir / "b.txt").string();
    const bool streams = !args.starts_with("torord");
    const std::string base = "'" + cli_path + "' " + args;
    const std::string run_a = run_process(base + (streams ? " -o " + out_a : ""));
    const std::string run_b = run_process(base + (streams ? " -o " + out_b : ""));
    c.expect(run_a == run_b, "stdout differs: " + args);
    c.expect(run_a.ends_with("exit 0"), "nonzero exit: " + args);
    if (streams) {
      c.expect(read_file(out_a) == read_file(out_b), "output differs: " + args);
      c.expect(read_file(out_a + ".prov") == read_file(out_b + ".prov"), "provenance differs: " + args);
    }
  }
  for (const auto& p : {build_Qn_complement(ReSet::from_program(programs::halt_on_set({3}))),
                        universal_tf_assembly(Natural{6}), k_torsion_quotient(fp(2, {}), 3)}) {
    c.expect(prefix_words(p, 300) == prefix_words(p, 300), "stream prefix differs");
  }
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to torsionkit>\n";
    return 64;
  }
  cli_path = argv[1];

  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "cantor pairing on [0,2000]^2", 1, criterion_1},
      {2, "crush semantics", 10, criterion_2},
      {3, "Pn torsion orders", 120, criterion_3},
      {4, "Qphi torsion orders", 300, criterion_4},
      {5, "torsion-free quotient", 300, criterion_5},
      {6, "engine cross-validation", 60, criterion_6},
      {7, "k-torsion quotient contract", 30, criterion_7},
      {8, "factor-completeness of snapshots", 60, criterion_8},
      {9, "prime trick", 1, criterion_9},
      {10, "F2 basis freeness", 10, criterion_10},
      {11, "determinism", 120, criterion_11},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.limit_s) check.expect(false, "over the time limit");
    if (!check.ok) ++failures;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (check.ok ? "PASS" : "FAIL") << " " << cr.id << " " << cr.name << " (" << secs << " s, limit "
         << cr.limit_s << " s)";
    if (!check.detail.empty()) line << ": " << check.detail;
    std::cout << line.str() << std::endl;
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
