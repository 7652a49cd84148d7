#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torsionkit/computability.hpp"
#include "torsionkit/presentation.hpp"
#include "torsionkit/torsion.hpp"

namespace torsionkit {

/// <x0, x1, ... | x_i^p for all i, x_j for j in crush(s)>. One tick emits the
/// next power relator, then runs one diagonal of the crushed enumeration and
/// emits a kill for each new element. Rejects non-prime p.
Presentation build_Pn(Natural p, const ReSet& s);

/// Generator label of stage m for index i in build_Qphi.
inline Natural qphi_generator(Natural i, Natural m) { return cantor_pair(i, m); }

/// One relator of the Qphi plan and the event behind it.
struct PlanEvent {
  Natural index = 0;
  Natural stage = 0;
  /// Set for kills: the n and phi value that triggered them.
  std::optional<Natural> n;
  std::optional<Natural> value;
  Relator relator;
};

/// Stage bookkeeping for build_Qphi. Tick t opens index t + 2 with
/// x_<i,1>^i, then evaluates phi(i, m(i), n(i)) for the single index
/// i = a + 2 where <a, b> = t, so every index is revisited along each
/// diagonal. A value other than 1 kills x_<i,m>, moves i to stage m + 1 and
/// emits x_<i,m+1>^i; a value of 1 advances n(i).
class StagedRelatorPlan {
 public:
  explicit StagedRelatorPlan(Sigma2Predicate pred);

  /// Runs one tick; returns the relators it emitted.
  std::vector<Relator> tick();
  Natural ticks() const { return ticks_; }
  /// m(i); 0 while i is not open.
  Natural stage(Natural index) const;
  const std::vector<PlanEvent>& log() const { return log_; }

 private:
  Sigma2Predicate pred_;
  Natural ticks_ = 0;
  std::vector<Natural> stages_;   // by index - 2
  std::vector<Natural> counters_;  // next n, by index - 2
  std::vector<PlanEvent> log_;
};

/// Countable presentation streaming the StagedRelatorPlan of `pred`. All
/// other generators stay free. BudgetExhausted escapes from the cursor.
Presentation build_Qphi(const Sigma2Predicate& pred);

/// Checks that every relator mentioning x_<i,m> is licensed by the plan: the
/// power x_<i,1>^i opens i, a kill must hit the current stage, and only a
/// kill licenses the power x_<i,m+1>^i. So at most one stage per i is live.
/// Empty items are ignored; any other relator fails the check.
bool check_stage_discipline(const std::vector<Relator>& prefix);

/// Generators x_i with x_i^{p_i} for i >= 2, plus x_j for each j in s. Ticks
/// work as in build_Pn, starting at i = 2.
Presentation build_Qn_complement(const ReSet& s);

/// {nth_prime(i) | i in x}. Rejects 0.
FactorCompleteSet prime_code(const std::set<Natural>& x);
/// Inverse of prime_code; throws std::invalid_argument on a non-prime.
std::set<Natural> prime_decode(const std::set<Natural>& primes);
/// Prime codes of the first `items` elements of s, in enumeration order.
std::vector<Natural> prime_code_stream(const ReSet& s, Natural items, Natural max_diagonals);

/// b^-i a b^i for i = 1..n, with a = x0 and b = x1. Rejects n = 0.
std::vector<Word> f2_universal_basis(Natural n);

/// P_0^tf * P_1^tf * ... over enumerate_finite_presentations, or only the
/// first `limit` of them. Generator j of factor i is x_<i,j>.
Presentation universal_tf_assembly(std::optional<Natural> limit);
/// Same assembly over an explicit list of finite presentations.
Presentation universal_tf_assembly(const std::vector<Presentation>& parts);

/// Extension point for a torsion-order preserving embedding of a recursive
/// presentation into a finitely presented group. No implementation ships.
class FinitePresentationEmbedding {
 public:
  virtual ~FinitePresentationEmbedding() = default;
  /// Returns a finite presentation whose group contains the input group and
  /// has the same torsion orders.
  virtual Presentation embed(const Presentation& p) const = 0;
};

/// Always throws std::logic_error.
Presentation higman_embedding(const Presentation& p);

}  // namespace torsionkit
