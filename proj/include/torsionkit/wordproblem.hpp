#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "torsionkit/presentation.hpp"
#include "torsionkit/words.hpp"

namespace torsionkit {

/// One factor conjugate(relator^sign, conjugator) of a triviality derivation.
/// `relator_index` is the position of `relator` in the relator source the
/// engine was given (the presentation's stream for the public entry points).
struct DerivationFactor {
  Word conjugator;
  Natural relator_index = 0;
  int sign = 1;
  Word relator;

  Word value() const;
  DerivationFactor inverse() const;

  friend bool operator==(const DerivationFactor&, const DerivationFactor&) = default;
};

using Derivation = std::vector<DerivationFactor>;

/// Product of the factors, freely reduced.
Word evaluate(const Derivation& d);
Derivation inverse(const Derivation& d);
/// Conjugates every factor: the product becomes by^-1 * product * by.
Derivation conjugate(const Derivation& d, const Word& by);

/// w as a product of conjugates of relators.
struct TrivialityDerivation {
  Word word;
  Derivation factors;

  friend bool operator==(const TrivialityDerivation&, const TrivialityDerivation&) = default;
};

inline constexpr Natural kUndefinedCoset = UINT64_MAX;

/// Coset table. Column `code` of a row holds the image of that coset under
/// the letter with that code (x0, x0^-1, x1, x1^-1, ...). Row 0 is the
/// subgroup coset.
struct CosetTable {
  Natural generator_count = 0;
  std::vector<std::vector<Natural>> rows;
  bool complete = false;

  Natural size() const { return rows.size(); }
  /// Image of `coset` under `w`; kUndefinedCoset if the trace falls off.
  Natural trace(Natural coset, const Word& w) const;

  friend bool operator==(const CosetTable&, const CosetTable&) = default;
};

/// A coset table together with the word whose action it reports and the
/// subgroup generators it was built for.
struct CosetTableCertificate {
  CosetTable table;
  std::vector<Word> subgroup;
  Word word;

  friend bool operator==(const CosetTableCertificate&, const CosetTableCertificate&) = default;
};

/// Permutation of {0, ..., k-1}; image[i] is the image of point i.
using Permutation = std::vector<std::uint32_t>;

/// Right action: letters act left to right.
Permutation evaluate_permutation(const std::vector<Permutation>& images, const Word& w, std::size_t degree);
/// Cycle notation on points 1..k, `()` for the identity.
std::string format_cycles(const Permutation& p);
Permutation parse_cycles(std::string_view text, std::size_t degree);

/// Homomorphism to Sym(degree). `generators[i]` is the generator mapped to
/// `images[i]`; generators not listed map to the identity.
struct FiniteQuotientWitness {
  Natural degree = 0;
  std::vector<Natural> generators;
  std::vector<Permutation> images;
  Word word;
  Natural relators_checked = 0;
  bool provisional = false;

  friend bool operator==(const FiniteQuotientWitness&, const FiniteQuotientWitness&) = default;
};

struct RewritingRule {
  Word lhs;
  Word rhs;
  Derivation derivation;  // lhs * rhs^-1

  friend bool operator==(const RewritingRule&, const RewritingRule&) = default;
};

/// Confluent rewriting system plus the normal form of `word`, which is
/// nonempty for a refutation.
struct RewritingCertificate {
  std::vector<RewritingRule> rules;
  Word word;
  Word normal_form;

  friend bool operator==(const RewritingCertificate&, const RewritingCertificate&) = default;
};

using Certificate =
    std::variant<TrivialityDerivation, CosetTableCertificate, FiniteQuotientWitness, RewritingCertificate>;

enum class Status { proved, refuted, unknown };
std::string to_string(Status s);

struct Verdict {
  Status status = Status::unknown;
  Natural fuel_spent = 0;
  std::optional<Certificate> certificate;
  /// Refutation checked only a relator prefix of a stream-backed
  /// presentation.
  bool provisional = false;
};

/// A relator together with its index in the source it came from.
struct IndexedRelator {
  Word word;
  Natural index = 0;
};

/// Triviality prover over a fixed relator list. The search is best-first on
/// the length of the current word; a move replaces a subword s by t^-1
/// where s t is a cyclic permutation of a relator or its inverse, or rotates
/// the word by one letter. Round b caps word length at |w| + (b + 1) times
/// the longest relator. One unit of fuel is one generated successor, plus
/// one per round. A round that exhausts its states without hitting the
/// length cap ends the search with Unknown.
Verdict prove_trivial_with(const std::vector<IndexedRelator>& relators, const Word& w, Natural fuel);

/// The same prover with its relator variants built once, for many queries
/// against one relator list.
class TrivialityProver {
 public:
  explicit TrivialityProver(std::vector<IndexedRelator> relators);
  Verdict prove(const Word& w, Natural fuel) const;
  std::size_t relator_count() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Semi-decider for w = e. Round b uses the first 16 * 2^b stream items;
/// each item read costs one unit of fuel, and a round whose prefix costs more
/// than the remaining fuel ends the search. Until the stream ends a round
/// spends at most half the fuel left.
/// Never returns Refuted. Throws std::invalid_argument on alphabet mismatch.
Verdict normal_closure_prove_trivial(const Presentation& p, const Word& w, Natural fuel);

/// HLT coset enumeration with lookahead. std::nullopt once more than
/// `max_cosets` cosets are live after lookahead.
std::optional<CosetTable> todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup,
                                       Natural max_cosets);

/// Order of the permutation `w` induces on the cosets. Throws
/// std::invalid_argument for an incomplete table.
Natural element_order_in_table(const CosetTable& t, const Word& w);

/// Shortlex-confluent rewriting system for a finite presentation. The free
/// cancellation rules x x^-1 -> 1 are implicit and not listed in `rules`.
class RewritingSystem {
 public:
  RewritingSystem() = default;
  RewritingSystem(Natural generator_count, std::vector<RewritingRule> rules);

  Natural generator_count() const { return generator_count_; }
  const std::vector<RewritingRule>& rules() const { return rules_; }

  Word normal_form(const Word& w) const;
  /// Normal form plus a derivation of w * normal_form^-1.
  std::pair<Word, Derivation> reduce(const Word& w) const;
  bool equal(const Word& u, const Word& v) const { return normal_form(u) == normal_form(v); }
  /// Every critical pair resolves.
  bool locally_confluent() const;

 private:
  Natural generator_count_ = 0;
  std::vector<RewritingRule> rules_;
  std::size_t max_lhs_ = 0;
};

/// Knuth-Bendix completion under shortlex. Fuel counts rewrite steps and
/// critical pairs examined; std::nullopt on exhaustion.
std::optional<RewritingSystem> kb_complete(const Presentation& p, Natural fuel, Natural* fuel_spent = nullptr);

/// Word problem through a completed system: Proved with a derivation or
/// Refuted with the rule set.
Verdict kb_decide(const RewritingSystem& system, const Word& w);

/// Searches homomorphisms into Sym(k), 2 <= k <= max_degree, under which the
/// first `relator_budget` stream relators vanish and `w` does not. Finite
/// alphabets assign every generator; countable ones assign support(w) and
/// send the rest to the identity. Never returns Proved.
Verdict refute_trivial_finite_quotient(const Presentation& p, const Word& w, Natural max_degree,
                                       Natural relator_budget);

/// Same search against an explicit relator list; `complete` marks the list
/// as the full relator set.
Verdict refute_with(const std::vector<Word>& relators, std::optional<Natural> generator_count, const Word& w,
                    Natural max_degree, bool complete);

/// Union of the nontrivial divisor sets of the orders. Rejects orders < 2.
std::set<Natural> torord_oracle_cyclics(const std::vector<Natural>& orders);

/// Independent re-check of a certificate against a presentation. Derivation
/// factors must name the presentation's stream items.
bool verify_certificate(const Presentation& p, const Certificate& c);
/// Multiplies the factors out and compares with the recorded word.
bool verify_derivation(const TrivialityDerivation& d);
bool verify_witness(const std::vector<Word>& relators, const FiniteQuotientWitness& w);

/// Line format: `derivation:` with `conj <word> rel <i> sign <+-1>` lines;
/// `table:` with one row of images per coset; `homwitness: degree <k>` with
/// one `x<i> <cycles>` line per generator; `rewriting:` with
/// `rule <lhs> -> <rhs>` lines.
std::string format_certificate(const Certificate& c, const NameTable& names = {});

}  // namespace torsionkit
