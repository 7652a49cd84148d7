#include <algorithm>

#include "doctest.h"
#include "torsionkit/constructions.hpp"

using namespace torsionkit;

namespace {

std::vector<Word> words_of(const RelatorStream& s, std::size_t n) {
  std::vector<Word> out;
  for (const auto& r : s.take(n)) out.push_back(r.word);
  return out;
}

bool contains(const std::vector<Word>& ws, const Word& w) { return std::find(ws.begin(), ws.end(), w) != ws.end(); }

std::set<Natural> certified(const Presentation& p, Natural bound, Natural fuel, Natural max_degree = 6) {
  TorordOptions options;
  options.max_degree = max_degree;
  auto r = torord_bounded(p, bound, fuel, options);
  for (const auto& c : r.certificates) {
    StreamPrefix prefix(p.stream());
    prefix.extend_to(4 * TorordOptions{}.relator_prefix);
    std::vector<Word> rels;
    for (const auto& item : prefix.items()) rels.push_back(item.word);
    CHECK(verify_order_certificate(c, rels));
  }
  std::set<Natural> orders = r.orders.members();
  CHECK(is_factor_complete(divisor_closure(orders)));
  return orders;
}

Sigma2Predicate membership(const std::vector<Natural>& members) {
  return Sigma2Predicate{programs::membership_predicate(members), 100000000};
}

}  // namespace

TEST_CASE("Pn with empty W is the plain power stream") {
  auto p = build_Pn(2, ReSet::from_program(programs::diverge()));
  auto items = p.stream().take(5);
  for (Natural i = 0; i < 5; ++i) CHECK(items[i].word == Word::generator(i, 2));
  CHECK_THROWS_AS(build_Pn(4, ReSet::from_program(programs::diverge())), std::invalid_argument);
  CHECK(p.constructors() == std::vector<std::string>{"pn 2 " + ReSet::from_program(programs::diverge()).describe()});
}

TEST_CASE("Pn with finite W has torsion orders {p}") {
  auto p = build_Pn(3, ReSet::from_program(programs::halt_on_set({4, 9})));
  auto ws = words_of(p.stream(), 200);
  CHECK(contains(ws, Word::generator(0)));
  CHECK(contains(ws, Word::generator(1)));
  CHECK_FALSE(contains(ws, Word::generator(2)));
  CHECK(certified(p, 10, 2000) == std::set<Natural>{3});
}

TEST_CASE("Pn with total W kills every generator") {
  auto p = build_Pn(3, ReSet::from_program(programs::total()));
  for (Natural j = 0; j <= 20; ++j) {
    auto v = normal_closure_prove_trivial(p, Word::generator(j), 1000000);
    CHECK(v.status == Status::proved);
  }
  CHECK(certified(p, 10, 2000).empty());
}

TEST_CASE("Qphi plan stages") {
  StagedRelatorPlan all(Sigma2Predicate{programs::constant(1), 100000000});
  for (int t = 0; t < 5; ++t) all.tick();
  for (Natural i = 2; i <= 6; ++i) CHECK(all.stage(i) == 1);
  CHECK(all.stage(7) == 0);
  CHECK(all.log().size() == 5);

  StagedRelatorPlan none(Sigma2Predicate{programs::constant(0), 100000000});
  for (int t = 0; t < 4; ++t) none.tick();
  // Ticks 0..3 evaluate indices 2, 3, 2, 4.
  CHECK(none.stage(2) == 3);
  CHECK(none.stage(3) == 2);
  CHECK(none.stage(4) == 2);
  CHECK(none.stage(5) == 1);
  CHECK(none.log()[1].value == Natural{0});
}

TEST_CASE("Qphi with phi = 1 keeps the first stage") {
  auto q = build_Qphi(Sigma2Predicate{programs::constant(1), 100000000});
  auto items = q.stream().take(10);
  for (Natural k = 0; k < 10; ++k) {
    const Natural i = k + 2;
    CHECK(items[k].word == Word::generator(qphi_generator(i, 1), static_cast<std::int64_t>(i)));
  }
  CHECK(check_stage_discipline(items));
}

TEST_CASE("Qphi stage discipline") {
  auto q = build_Qphi(membership({2, 3, 4, 6}));
  CHECK(check_stage_discipline(q.stream().take(500)));
  std::vector<Relator> bad{{Word::generator(qphi_generator(2, 2), 2), ""}};
  CHECK_FALSE(check_stage_discipline(bad));
  std::vector<Relator> twice{{Word::generator(qphi_generator(3, 1), 3), ""}, {Word::generator(qphi_generator(3, 1)), ""},
                             {Word::generator(qphi_generator(3, 1)), ""}};
  CHECK_FALSE(check_stage_discipline(twice));
}

TEST_CASE("Qphi realises its set") {
  CHECK(certified(build_Qphi(membership({2, 3, 4, 6})), 12, 2000) == std::set<Natural>{2, 3, 4, 6});
  CHECK(certified(build_Qphi(Sigma2Predicate{programs::constant(0), 100000000}), 8, 2000).empty());
  CHECK(certified(build_Qphi(Sigma2Predicate{programs::constant(1), 100000000}), 6, 2000) ==
        std::set<Natural>{2, 3, 4, 5, 6});
}

TEST_CASE("Qphi propagates budget exhaustion") {
  auto q = build_Qphi(Sigma2Predicate{programs::diverge(), 50});
  CHECK_THROWS_AS(q.stream().take(3), BudgetExhausted);
}

TEST_CASE("prime coded complement") {
  auto empty = build_Qn_complement(ReSet::from_program(programs::diverge()));
  auto e = certified(empty, 8, 2000, 7);
  CHECK(e.count(3));
  CHECK(e.count(5));
  CHECK(e.count(7));
  auto three = build_Qn_complement(ReSet::from_program(programs::halt_on_set({3})));
  auto t = certified(three, 8, 2000, 7);
  CHECK(t.count(3));
  CHECK_FALSE(t.count(5));
  CHECK(t.count(7));
  auto all = build_Qn_complement(ReSet::from_program(programs::total()));
  CHECK(normal_closure_prove_trivial(all, Word::generator(5), 100000).status == Status::proved);
  CHECK(certified(all, 8, 2000).empty());
}

TEST_CASE("prime trick") {
  CHECK(prime_code({1, 2, 3}).members() == std::set<Natural>{2, 3, 5});
  CHECK(prime_code({}).members().empty());
  CHECK_THROWS_AS(prime_code({0}), std::invalid_argument);
  CHECK(prime_decode({2, 3, 5}) == std::set<Natural>{1, 2, 3});
  CHECK_THROWS_AS(prime_decode({4}), std::invalid_argument);
  CHECK(prime_code_stream(ReSet::from_program(programs::halt_on_set({0, 2})), 2, 100) == std::vector<Natural>{2, 5});
}

TEST_CASE("F2 universal basis") {
  auto b1 = f2_universal_basis(1);
  CHECK(b1 == std::vector<Word>{parse_word("x1^-1 x0 x1")});
  auto b2 = f2_universal_basis(2);
  CHECK(b2[1] == parse_word("x1^-1 x1^-1 x0 x1^2"));
  CHECK_THROWS_AS(f2_universal_basis(0), std::invalid_argument);
}

TEST_CASE("universal assembly over given parts") {
  auto q = universal_tf_assembly(std::vector<Presentation>{Presentation::finite(0, {}), Presentation::finite(1, {}),
                                                           Presentation::finite(1, {parse_word("x0^2")})});
  auto items = q.stream().take(300);
  for (const auto& r : items) {
    if (r.word.empty()) continue;
    std::set<Natural> blocks;
    for (Natural g : r.word.support()) blocks.insert(cantor_unpair(g).first);
    CHECK(blocks.size() == 1);
  }
  const Word c2_gen = Word::generator(cantor_pair(2, 0));
  CHECK(normal_closure_prove_trivial(q, c2_gen, 100000).status == Status::proved);
  CHECK(normal_closure_prove_trivial(q, Word::generator(cantor_pair(1, 0)), 2000).status == Status::unknown);
}

TEST_CASE("universal assembly over the enumeration") {
  auto q = universal_tf_assembly(Natural{5});
  CHECK(q.constructors() == std::vector<std::string>{"universal 5"});
  CHECK(certified(q, 6, 1000).empty());
  CHECK_THROWS_AS(higman_embedding(q), std::logic_error);
}
