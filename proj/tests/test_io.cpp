#include "doctest.h"
#include "torsionkit/computability.hpp"
#include "torsionkit/constructions.hpp"
#include "torsionkit/presentation_io.hpp"

using namespace torsionkit;

namespace {

std::vector<Word> prefix_words(const Presentation& p, std::size_t n) {
  std::vector<Word> out;
  for (const auto& r : p.stream().take(n)) out.push_back(r.word);
  return out;
}

void round_trip(const Presentation& p, std::size_t items) {
  const std::string text = format_presentation(p);
  const Presentation back = parse_presentation(text);
  CHECK(format_presentation(back) == text);
  CHECK(back.presentation_class() == p.presentation_class());
  CHECK(prefix_words(back, items) == prefix_words(p, items));
}

std::string parse_error(std::string_view text) {
  try {
    parse_presentation(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("finite presentations round trip") {
  const auto p = parse_presentation("gens: 2\nrel: x0^2\nrel: x1^3\nrel: x0 x1 x0 x1\n");
  CHECK(p.is_finite());
  CHECK(p.relators().size() == 3);
  CHECK(format_presentation(p) == "gens: 2\nrel: x0^2\nrel: x1^3\nrel: x0 x1 x0 x1\n");
  round_trip(p, 10);
  round_trip(Presentation::finite(0, {}), 1);
}

TEST_CASE("names, comments and blank lines") {
  const auto p = parse_presentation("# dihedral\ngens: 2\nnames: r s\n\nrel: r^4\nrel: s^2\n  # inline\nrel: s r s r\n");
  CHECK(p.names().names() == std::vector<std::string>{"r", "s"});
  CHECK(p.relators()[0] == Word::generator(0, 4));
  CHECK(format_presentation(p) == "gens: 2\nnames: r s\nrel: r^4\nrel: s^2\nrel: s r s r\n");
  round_trip(p, 5);
}

TEST_CASE("stream transformers round trip") {
  round_trip(parse_presentation("gens: 2\nrel: x0^2\nrel: x1^3\nstream: tf\n"), 6);
  round_trip(parse_presentation("gens: 2\nstream: kt 2\n"), 50);
  round_trip(parse_presentation("gens: 1\nrel: x0^4\nstream: kt 2\nstream: tf\n"), 4);
  round_trip(k_torsion_quotient(Presentation::finite(1, {}), 3), 20);
}

TEST_CASE("sources round trip") {
  round_trip(build_Pn(3, ReSet::from_program(programs::halt_on_set({1, 4}))), 40);
  round_trip(build_Qphi(Sigma2Predicate{programs::membership_predicate({2, 4}), 100000000}), 30);
  round_trip(build_Qn_complement(ReSet::from_program(programs::halt_on_evens())), 30);
  round_trip(universal_tf_assembly(Natural{3}), 5);
  round_trip(parse_presentation("gens: omega\nstream: universal all\n"), 3);
  round_trip(parse_presentation("gens: omega\nstream: pn 5 [HALT]\nstream: kt 5\n"), 20);
}

TEST_CASE("presentations without a recipe are rejected") {
  CHECK_FALSE(universal_tf_assembly(std::vector<Presentation>{Presentation::finite(1, {})}).serializable());
  CHECK_THROWS_AS(format_presentation(universal_tf_assembly(std::vector<Presentation>{Presentation::finite(1, {})})),
                  std::invalid_argument);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(parse_error("") == "line 1: missing 'gens:'");
  CHECK(parse_error("rel: x0\n").starts_with("line 1:"));
  CHECK(parse_error("gens: two\n").starts_with("line 1:"));
  CHECK(parse_error("gens: 1\nrel: x0\nrel: x3\n").starts_with("line 3:"));
  CHECK(parse_error("gens: 1\nrel: x0^0\n").starts_with("line 2:"));
  CHECK(parse_error("gens: 2\nnames: a\n").starts_with("line 2:"));
  CHECK(parse_error("gens: 1\nfoo: bar\n").starts_with("line 2:"));
  CHECK(parse_error("gens: 1\nstream: kt 0\n").starts_with("line 2:"));
  CHECK(parse_error("gens: 1\nstream: nope\n").starts_with("line 2:"));
  CHECK(parse_error("gens: 1\nstream: pn 3 [HALT]\n").starts_with("line 2:"));
  CHECK(parse_error("gens: omega\nrel: x0\n").starts_with("line 2:"));
  CHECK(parse_error("gens: omega\n# none\nstream: pn 4 [HALT]\n").starts_with("line 3:"));
  CHECK(parse_error("gens: omega\nstream: qcomp [BOGUS]\n").starts_with("line 2:"));
  CHECK(parse_error("gens: 1\nstream: tf\nrel: x0\n").starts_with("line 3:"));
}

TEST_CASE("provenance lines") {
  const auto p = build_Pn(2, ReSet::from_program(programs::halt_on_set({0})));
  const auto items = p.stream().take(2);
  CHECK(format_provenance(items) == "rel 0: cause " + items[0].cause + "\nrel 1: cause " + items[1].cause + "\n");
  CHECK(items[0].cause == "power 2 of x0");
}
