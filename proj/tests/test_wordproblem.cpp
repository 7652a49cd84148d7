#include <map>
#include <set>

#include "doctest.h"
#include "torsionkit/wordproblem.hpp"

using namespace torsionkit;

namespace {

Word W(const char* text) { return parse_word(text); }

Presentation fp(Natural gens, std::initializer_list<const char*> rels) {
  std::vector<Word> rs;
  for (auto r : rels) rs.push_back(W(r));
  return Presentation::finite(gens, rs);
}

std::vector<Word> words_up_to(Natural gens, std::size_t length) {
  std::vector<Word> out;
  for (Natural r = 0;; ++r) {
    Word w = enumerate_words(gens, r);
    if (w.size() > length) break;
    out.push_back(w);
  }
  return out;
}

// Closes the generator permutations of a table under composition.
std::set<std::vector<Natural>> generated_group(const CosetTable& t) {
  std::vector<std::vector<Natural>> gens;
  for (Natural g = 0; g < t.generator_count; ++g) {
    std::vector<Natural> p(t.size());
    for (Natural c = 0; c < t.size(); ++c) p[c] = t.rows[c][2 * g];
    gens.push_back(p);
  }
  std::vector<Natural> id(t.size());
  for (Natural c = 0; c < t.size(); ++c) id[c] = c;
  std::set<std::vector<Natural>> seen{id};
  std::vector<std::vector<Natural>> todo{id};
  while (!todo.empty()) {
    auto p = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      std::vector<Natural> q(p.size());
      for (Natural c = 0; c < p.size(); ++c) q[c] = g[p[c]];
      if (seen.insert(q).second) todo.push_back(q);
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("prover derives a^4 from a^2") {
  auto p = fp(1, {"x0^2"});
  auto v = normal_closure_prove_trivial(p, W("x0^4"), 1000);
  REQUIRE(v.status == Status::proved);
  const auto& d = std::get<TrivialityDerivation>(*v.certificate);
  CHECK(verify_derivation(d));
  CHECK(d.factors.size() == 2);
  CHECK(verify_certificate(p, *v.certificate));
}

TEST_CASE("prover stays unknown on a free generator") {
  auto p = fp(1, {});
  for (Natural fuel : {1, 10, 1000}) {
    auto v = normal_closure_prove_trivial(p, W("x0"), fuel);
    CHECK(v.status == Status::unknown);
    CHECK_FALSE(v.certificate.has_value());
  }
}

TEST_CASE("prover handles commutators in Z^2") {
  auto p = fp(2, {"x0 x1 x0^-1 x1^-1"});
  auto v = normal_closure_prove_trivial(p, W("x0^2 x1^3 x0^-1 x0^-1 x1^-1 x1^-1 x1^-1"), 100000);
  REQUIRE(v.status == Status::proved);
  CHECK(verify_certificate(p, *v.certificate));
  // Oracle: in Z^2 a word is trivial iff both exponent sums vanish.
  for (const auto& w : words_up_to(2, 4)) {
    long sa = 0, sb = 0;
    for (const auto& l : w) (l.generator.index == 0 ? sa : sb) += l.sign;
    auto verdict = normal_closure_prove_trivial(p, w, 20000);
    if (verdict.status == Status::proved) {
      CHECK(sa == 0);
      CHECK(sb == 0);
      CHECK(verify_certificate(p, *verdict.certificate));
    } else {
      CHECK((sa != 0 || sb != 0));
    }
  }
}

TEST_CASE("prover is monotone in fuel") {
  auto p = fp(2, {"x0^2", "x1^3", "x0 x1 x0 x1"});
  for (const auto& w : words_up_to(2, 3)) {
    auto small = normal_closure_prove_trivial(p, w, 300);
    if (small.status != Status::proved) continue;
    CHECK(normal_closure_prove_trivial(p, w, 3000).status == Status::proved);
  }
}

TEST_CASE("todd-coxeter sizes") {
  auto s3 = todd_coxeter(fp(2, {"x0^2", "x1^3", "x0 x1 x0 x1"}), {}, 100);
  REQUIRE(s3);
  CHECK(s3->size() == 6);
  CHECK(generated_group(*s3).size() == 6);
  auto c6 = todd_coxeter(fp(1, {"x0^6"}), {}, 100);
  REQUIRE(c6);
  CHECK(c6->size() == 6);
  auto v4 = todd_coxeter(fp(2, {"x0^2", "x1^2", "x0 x1 x0 x1"}), {}, 100);
  REQUIRE(v4);
  CHECK(v4->size() == 4);
  const auto group = generated_group(*v4);
  CHECK(group.size() == 4);
  for (const auto& g : group) {
    std::vector<Natural> sq(g.size());
    for (Natural c = 0; c < g.size(); ++c) sq[c] = g[g[c]];
    for (Natural c = 0; c < g.size(); ++c) CHECK(sq[c] == c);
  }
  CHECK_FALSE(todd_coxeter(fp(2, {}), {}, 50));
  auto index = todd_coxeter(fp(2, {"x0^2", "x1^3", "x0 x1 x0 x1"}), {W("x1")}, 100);
  REQUIRE(index);
  CHECK(index->size() == 2);
}

TEST_CASE("element orders from tables") {
  auto c6 = *todd_coxeter(fp(1, {"x0^6"}), {}, 100);
  CHECK(element_order_in_table(c6, W("x0")) == 6);
  CHECK(element_order_in_table(c6, W("x0^2")) == 3);
  auto s3 = *todd_coxeter(fp(2, {"x0^2", "x1^3", "x0 x1 x0 x1"}), {}, 100);
  CHECK(element_order_in_table(s3, W("x0 x1")) == 2);
  CHECK(element_order_in_table(s3, W("x1")) == 3);
  CosetTable partial;
  CHECK_THROWS_AS(element_order_in_table(partial, W("x0")), std::invalid_argument);
}

TEST_CASE("knuth-bendix on C3 matches the coset table") {
  auto p = fp(1, {"x0^3"});
  auto kb = kb_complete(p, 10000);
  REQUIRE(kb);
  CHECK(kb->locally_confluent());
  std::set<Word> forms;
  auto table = *todd_coxeter(p, {}, 10);
  for (const auto& u : words_up_to(1, 4)) {
    forms.insert(kb->normal_form(u));
    for (const auto& v : words_up_to(1, 4)) {
      const bool tc_equal = table.trace(0, u) == table.trace(0, v);
      CHECK(kb->equal(u, v) == tc_equal);
    }
  }
  // Shortlex prefers the shorter spelling x0^-1 of the element a^2.
  CHECK(forms == std::set<Word>{W("1"), W("x0"), W("x0^-1")});
  CHECK(kb->normal_form(W("x0^2")) == W("x0^-1"));
}

TEST_CASE("knuth-bendix on Z^2 gives a^i b^j") {
  auto p = fp(2, {"x0 x1 x0^-1 x1^-1"});
  auto kb = kb_complete(p, 100000);
  REQUIRE(kb);
  CHECK(kb->locally_confluent());
  for (const auto& w : words_up_to(2, 4)) {
    long sa = 0, sb = 0;
    for (const auto& l : w) (l.generator.index == 0 ? sa : sb) += l.sign;
    CHECK(kb->normal_form(w) == concat(Word::generator(0, sa), Word::generator(1, sb)));
  }
}

TEST_CASE("knuth-bendix on a free group has no rules") {
  auto kb = kb_complete(fp(2, {}), 100);
  REQUIRE(kb);
  CHECK(kb->rules().empty());
  CHECK(kb->locally_confluent());
}

TEST_CASE("knuth-bendix certificates re-verify") {
  auto p = fp(2, {"x0^2", "x1^3", "x0 x1 x0 x1"});
  auto kb = kb_complete(p, 100000);
  REQUIRE(kb);
  for (const auto& w : words_up_to(2, 3)) {
    auto v = kb_decide(*kb, w);
    REQUIRE(v.certificate);
    CHECK(verify_certificate(p, *v.certificate));
  }
}

TEST_CASE("finite quotient refutation") {
  auto c2 = fp(1, {"x0^2"});
  auto v = refute_trivial_finite_quotient(c2, W("x0"), 2, 100);
  REQUIRE(v.status == Status::refuted);
  CHECK_FALSE(v.provisional);
  const auto& wit = std::get<FiniteQuotientWitness>(*v.certificate);
  CHECK(wit.degree == 2);
  CHECK(format_cycles(wit.images[0]) == "(1 2)");
  CHECK(verify_certificate(c2, *v.certificate));

  CHECK(refute_trivial_finite_quotient(c2, W("x0^2"), 3, 100).status == Status::unknown);

  // ab has infinite order in C2 * C3; the natural map onto S3 sends it to a
  // 3-cycle, so a witness exists at degree 3.
  auto free23 = fp(2, {"x0^2", "x1^3"});
  auto r = refute_trivial_finite_quotient(free23, W("x0 x1"), 5, 100);
  REQUIRE(r.status == Status::refuted);
  CHECK(std::get<FiniteQuotientWitness>(*r.certificate).degree <= 5);
  CHECK(verify_certificate(free23, *r.certificate));
}

TEST_CASE("stream refutations are provisional") {
  auto p = k_torsion_quotient(fp(1, {}), 3);
  auto v = refute_trivial_finite_quotient(p, W("x0"), 3, 20);
  REQUIRE(v.status == Status::refuted);
  CHECK(v.provisional);
  CHECK(verify_certificate(p, *v.certificate));
}

TEST_CASE("cycle notation round trip") {
  Permutation p{1, 2, 0, 4, 3};
  CHECK(format_cycles(p) == "(1 2 3)(4 5)");
  CHECK(parse_cycles("(1 2 3)(4 5)", 5) == p);
  CHECK(parse_cycles("()", 3) == Permutation{0, 1, 2});
  CHECK_THROWS_AS(parse_cycles("(1 1)", 3), ParseError);
}

TEST_CASE("torsion orders of free products of cyclics") {
  CHECK(torord_oracle_cyclics({4, 6}) == std::set<Natural>{2, 3, 4, 6});
  CHECK(torord_oracle_cyclics({7}) == std::set<Natural>{7});
  CHECK(torord_oracle_cyclics({12}) == std::set<Natural>{2, 3, 4, 6, 12});
  CHECK_THROWS_AS(torord_oracle_cyclics({1}), std::invalid_argument);
}

TEST_CASE("engines agree on S3 and C6") {
  for (auto p : {fp(2, {"x0^2", "x1^3", "x0 x1 x0 x1"}), fp(1, {"x0^6"})}) {
    auto table = *todd_coxeter(p, {}, 100);
    auto kb = *kb_complete(p, 100000);
    for (const auto& w : words_up_to(p.generator_count(), 4)) {
      const bool tc = table.trace(0, w) == 0;
      CHECK(kb.normal_form(w).empty() == tc);
      auto v = normal_closure_prove_trivial(p, w, 20000);
      if (v.status == Status::proved) CHECK(tc);
      if (tc) CHECK(v.status == Status::proved);
      auto r = refute_trivial_finite_quotient(p, w, 3, 100);
      CHECK_FALSE((r.status == Status::refuted && v.status == Status::proved));
    }
  }
}

TEST_CASE("certificate text") {
  auto p = fp(1, {"x0^2"});
  auto v = normal_closure_prove_trivial(p, W("x0^4"), 1000);
  CHECK(format_certificate(*v.certificate) == "derivation:\nconj 1 rel 0 sign +1\nconj 1 rel 0 sign +1\n");
}
