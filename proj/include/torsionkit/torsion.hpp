#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torsionkit/presentation.hpp"
#include "torsionkit/wordproblem.hpp"

namespace torsionkit {

/// power(word, exponent) is trivial, as shown by `proof`. `stage` is the tower
/// level whose relators the proof uses (1 = the presentation itself).
struct TorsionWitness {
  Word word;
  Natural exponent = 1;
  TrivialityDerivation proof;
  Natural stage = 1;
};

/// Set of naturals >= 2 closed under nontrivial divisors. Either a finite
/// snapshot or a membership predicate.
class FactorCompleteSet {
 public:
  FactorCompleteSet() = default;
  /// Throws std::invalid_argument unless `members` is factor complete.
  explicit FactorCompleteSet(std::set<Natural> members);
  static FactorCompleteSet from_predicate(std::function<bool(Natural)> contains, std::string description);

  bool is_finite() const { return !predicate_; }
  bool contains(Natural n) const;
  /// Throws std::logic_error for predicate-backed sets.
  const std::set<Natural>& members() const;
  const std::string& description() const { return description_; }

 private:
  std::set<Natural> members_;
  std::function<bool(Natural)> predicate_;
  std::string description_;
};

/// pi(n): divisors of n except 1. Rejects n < 2.
FactorCompleteSet factor_closure(Natural n);
bool is_factor_complete(const std::set<Natural>& s);
/// Smallest factor-complete superset (0 and 1 dropped).
std::set<Natural> divisor_closure(const std::set<Natural>& s);

/// Deterministic torsion detector. Epoch e reads the first 16 * 2^e relators
/// and tries words of rank < 8 * 2^e with exponents 1 .. 4 * 2^e, ordered by
/// rank + exponent, with 64 * 2^e fuel per attempt. The empty word is tried
/// with exponent 1 only. Countable presentations use the generators of the
/// relator snapshot plus x0 .. x_e as the alphabet.
///
/// Each call to `step` makes one attempt and reports a new (word, exponent)
/// pair when the attempt succeeds.
class TorsionCursor {
 public:
  explicit TorsionCursor(const Presentation& p);
  TorsionCursor(TorsionCursor&&) noexcept;
  TorsionCursor& operator=(TorsionCursor&&) noexcept;
  ~TorsionCursor();

  std::optional<TorsionWitness> step();
  Natural attempts() const;
  Natural epoch() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Witnesses found in the first `attempts` attempts of a fresh cursor.
std::vector<TorsionWitness> torsion_stream(const Presentation& p, Natural attempts);

struct TowerEmission {
  Natural stage = 1;
  TorsionWitness witness;  // witness.word is the emitted word
};

/// Dovetailed tower of torsion detectors. Stage 1 runs against the
/// presentation; stage s + 1 runs against the relators plus every word
/// emitted at lower stages, and opens once stage s has emitted a word.
/// Step t runs one attempt of stage min(1 + ctz(t), open stages), so each
/// stage gets about half the turns of the one below it. Stages only try
/// cyclically reduced words and skip any word conjugate to a word or inverse
/// already emitted at their own or a lower stage. Words proved trivial with
/// exponent 1 are dropped; the empty word is never emitted. Lower-stage
/// words join a stage's relators as soon as they are emitted.
///
/// Derivation indices of a stage-s witness refer to its snapshot: stream
/// items keep their index, lower-stage words follow from the prefix length
/// on, in emission order.
class TowerCursor {
 public:
  explicit TowerCursor(const Presentation& p);
  TowerCursor(TowerCursor&&) noexcept;
  TowerCursor& operator=(TowerCursor&&) noexcept;
  ~TowerCursor();

  std::optional<TowerEmission> step();
  Natural steps() const;
  Natural stages() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Emissions in the first `steps` steps of a fresh tower.
std::vector<TowerEmission> tor_tower_stream(const Presentation& p, Natural steps);

/// <X | R, T_inf>: the relator stream alternates the items of R with tower
/// steps. A step that finds a word emits it with cause
/// "tower stage <s> word <w> exponent <n>"; a step with nothing to report
/// emits the empty word. Finite and recursive inputs give recursive
/// presentations, countable inputs countable ones.
Presentation torsion_free_quotient(const Presentation& p);

struct TorordOptions {
  /// Candidate words tried (cyclically reduced, in enumeration order).
  Natural words = 64;
  Natural max_degree = 6;
  /// Stream items read for proofs; finite presentations use all relators.
  Natural relator_prefix = 256;
  /// Stream items a refutation must respect; defaults to 4 * relator_prefix.
  std::optional<Natural> relator_budget;
};

struct OrderCertificate {
  Natural order = 0;
  /// word^order is trivial; stage is 1.
  TorsionWitness witness;
  /// (d, witness that word^d is nontrivial) for every proper divisor d.
  std::vector<std::pair<Natural, FiniteQuotientWitness>> refutations;
  bool provisional = false;
  /// Set when this order was read off a certificate for a multiple n of it,
  /// with word = w^(n / order).
  std::optional<Natural> derived_from;
};

struct TorordResult {
  FactorCompleteSet orders;
  /// One certificate per order, ascending.
  std::vector<OrderCertificate> certificates;
};

/// Orders n <= bound with a word w such that w^n is proved trivial and w^d is
/// refuted for every proper divisor d of n. Fuel is per triviality query.
/// Every certified n also certifies each d in pi(n) through w^(n / d).
TorordResult torord_bounded(const Presentation& p, Natural bound, Natural fuel, const TorordOptions& options = {});

/// Independent re-check: the proof multiplies out to word^order and every
/// refutation witness respects `relators` and moves word^d.
bool verify_order_certificate(const OrderCertificate& c, const std::vector<Word>& relators);

/// `order <n> word <w> stage <i> refuted <d1,d2,...>` with `|provisional`
/// appended when a refutation only saw a relator prefix.
std::string format_order_line(const OrderCertificate& c, const NameTable& names = {});

}  // namespace torsionkit
