#include "torsionkit/constructions.hpp"

#include <memory>
#include <stdexcept>

namespace torsionkit {

namespace {

std::string gen_name(Natural g) { return "x" + std::to_string(g); }

// Shared tick loop of build_Pn and build_Qn_complement: power relator for the
// next generator, then one diagonal of kills.
RelatorStream power_and_kill_stream(std::string description, ReSet kills, Natural first,
                                    std::function<Natural(Natural)> exponent) {
  return RelatorStream(std::move(description), [kills, first, exponent] {
    struct State {
      Natural next;
      ReSetEnumerator enumerator;
    };
    auto st = std::make_shared<State>(State{first, ReSetEnumerator(kills)});
    return std::make_unique<BufferedCursor>([st, exponent](std::vector<Relator>& out) {
      const Natural i = st->next++;
      const Natural e = exponent(i);
      out.push_back({Word::generator(i, static_cast<std::int64_t>(e)),
                     "power " + std::to_string(e) + " of " + gen_name(i)});
      for (Natural j : st->enumerator.advance_diagonal()) {
        out.push_back({Word::generator(j), "W emits " + std::to_string(j) + " on diagonal " +
                                               std::to_string(st->enumerator.diagonals() - 1)});
      }
      return true;
    });
  });
}

}  // namespace

Presentation build_Pn(Natural p, const ReSet& s) {
  if (!is_prime(p)) throw std::invalid_argument("build_Pn needs a prime, got " + std::to_string(p));
  const std::string recipe = "pn " + std::to_string(p) + " " + s.describe();
  auto stream = power_and_kill_stream(recipe, crush(s), 0, [p](Natural) { return p; });
  return Presentation::countable(std::move(stream)).with_recipe({}, {recipe});
}

StagedRelatorPlan::StagedRelatorPlan(Sigma2Predicate pred) : pred_(std::move(pred)) {}

Natural StagedRelatorPlan::stage(Natural index) const {
  if (index < 2 || index - 2 >= stages_.size()) return 0;
  return stages_[index - 2];
}

std::vector<Relator> StagedRelatorPlan::tick() {
  std::vector<Relator> out;
  auto emit = [&](PlanEvent ev) {
    out.push_back(ev.relator);
    log_.push_back(std::move(ev));
  };
  auto power_event = [](Natural i, Natural m) {
    const Natural g = qphi_generator(i, m);
    return PlanEvent{i, m, std::nullopt, std::nullopt,
                     Relator{Word::generator(g, static_cast<std::int64_t>(i)),
                             "open index " + std::to_string(i) + " stage " + std::to_string(m) + ": " + gen_name(g) +
                                 "^" + std::to_string(i)}};
  };

  const Natural opened = ticks_++ + 2;
  stages_.push_back(1);
  counters_.push_back(1);
  emit(power_event(opened, 1));

  const Natural i = cantor_unpair(opened - 2).first + 2;
  Natural& m = stages_[i - 2];
  Natural& n = counters_[i - 2];
  const Natural value = sigma2_eval(pred_, i, m, n);
  if (value != 1) {
    const Natural g = qphi_generator(i, m);
    emit(PlanEvent{i, m, n, value,
                   Relator{Word::generator(g), "phi(" + std::to_string(i) + "," + std::to_string(m) + "," +
                                                   std::to_string(n) + ")=" + std::to_string(value) + " kills " +
                                                   gen_name(g)}});
    ++m;
    n = 1;
    emit(power_event(i, m));
  } else {
    ++n;
  }
  return out;
}

Presentation build_Qphi(const Sigma2Predicate& pred) {
  const std::string recipe = "qphi " + std::to_string(pred.budget) + " " + format_program_inline(pred.program);
  RelatorStream stream(recipe, [pred] {
    auto plan = std::make_shared<StagedRelatorPlan>(pred);
    return std::make_unique<BufferedCursor>([plan](std::vector<Relator>& out) {
      for (auto& r : plan->tick()) out.push_back(std::move(r));
      return true;
    });
  });
  return Presentation::countable(std::move(stream)).with_recipe({}, {recipe});
}

bool check_stage_discipline(const std::vector<Relator>& prefix) {
  struct Slot {
    Natural stage = 0;
    bool killed = false;
  };
  std::map<Natural, Slot> slots;
  for (const auto& item : prefix) {
    const Word& w = item.word;
    if (w.empty()) continue;
    const auto support = w.support();
    if (support.size() != 1) return false;
    const auto [i, m] = cantor_unpair(support[0]);
    if (i < 2 || m < 1) return false;
    const bool is_kill = w == Word::generator(support[0]);
    const bool is_power = w == Word::generator(support[0], static_cast<std::int64_t>(i));
    auto it = slots.find(i);
    if (is_power && !is_kill) {
      if (it == slots.end()) {
        if (m != 1) return false;
        slots[i] = Slot{1, false};
      } else {
        if (!it->second.killed || m != it->second.stage + 1) return false;
        it->second = Slot{m, false};
      }
    } else if (is_kill) {
      if (it == slots.end() || it->second.killed || it->second.stage != m) return false;
      it->second.killed = true;
    } else {
      return false;
    }
  }
  return true;
}

Presentation build_Qn_complement(const ReSet& s) {
  const std::string recipe = "qcomp " + s.describe();
  auto stream = power_and_kill_stream(recipe, s, 2, [](Natural i) { return nth_prime(i); });
  return Presentation::countable(std::move(stream)).with_recipe({}, {recipe});
}

FactorCompleteSet prime_code(const std::set<Natural>& x) {
  std::set<Natural> out;
  for (Natural i : x) {
    if (i == 0) throw std::invalid_argument("prime_code indices start at 1");
    out.insert(nth_prime(i));
  }
  return FactorCompleteSet(std::move(out));
}

std::set<Natural> prime_decode(const std::set<Natural>& primes) {
  std::set<Natural> out;
  for (Natural p : primes) {
    auto i = prime_index(p);
    if (!i) throw std::invalid_argument(std::to_string(p) + " is not prime");
    out.insert(*i);
  }
  return out;
}

std::vector<Natural> prime_code_stream(const ReSet& s, Natural items, Natural max_diagonals) {
  std::vector<Natural> out;
  for (Natural i : we_enumerate(s, items, max_diagonals)) out.push_back(nth_prime(i + 1));
  return out;
}

std::vector<Word> f2_universal_basis(Natural n) {
  if (n == 0) throw std::invalid_argument("f2_universal_basis needs n >= 1");
  std::vector<Word> out;
  for (Natural i = 1; i <= n; ++i) out.push_back(conjugate(Word::generator(0), Word::generator(1, static_cast<std::int64_t>(i))));
  return out;
}

Presentation universal_tf_assembly(std::optional<Natural> limit) {
  PresentationSequence seq{[](Natural i) { return torsion_free_quotient(enumerate_finite_presentations(i)); }, limit,
                           "tf of enumerated finite presentations"};
  const std::string recipe = "universal " + (limit ? std::to_string(*limit) : std::string("all"));
  return free_product_stream(seq).with_recipe({}, {recipe});
}

Presentation universal_tf_assembly(const std::vector<Presentation>& parts) {
  std::vector<Presentation> tf;
  for (const auto& p : parts) {
    if (!p.is_finite()) throw std::invalid_argument("universal_tf_assembly parts must be finite");
    tf.push_back(torsion_free_quotient(p));
  }
  auto shared = std::make_shared<std::vector<Presentation>>(std::move(tf));
  PresentationSequence seq{[shared](Natural i) { return (*shared)[i]; }, shared->size(),
                           "tf of " + std::to_string(shared->size()) + " given presentations"};
  return free_product_stream(seq);
}

Presentation higman_embedding(const Presentation&) {
  throw std::logic_error("higman_embedding is not implemented");
}

}  // namespace torsionkit
