#include "torsionkit/torsion.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

namespace torsionkit {

FactorCompleteSet::FactorCompleteSet(std::set<Natural> members) : members_(std::move(members)) {
  if (!is_factor_complete(members_)) throw std::invalid_argument("set is not factor complete");
  description_ = "finite";
}

FactorCompleteSet FactorCompleteSet::from_predicate(std::function<bool(Natural)> contains, std::string description) {
  FactorCompleteSet s;
  s.predicate_ = std::move(contains);
  s.description_ = std::move(description);
  return s;
}

bool FactorCompleteSet::contains(Natural n) const { return predicate_ ? predicate_(n) : members_.count(n) > 0; }

const std::set<Natural>& FactorCompleteSet::members() const {
  if (predicate_) throw std::logic_error("predicate-backed set has no member list");
  return members_;
}

namespace {

std::vector<Natural> proper_divisors(Natural n) {
  std::vector<Natural> out;
  for (Natural d = 1; d < n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

}  // namespace

FactorCompleteSet factor_closure(Natural n) {
  if (n < 2) throw std::invalid_argument("factor_closure needs n >= 2");
  std::set<Natural> s;
  for (Natural d = 2; d <= n; ++d)
    if (n % d == 0) s.insert(d);
  return FactorCompleteSet(std::move(s));
}

bool is_factor_complete(const std::set<Natural>& s) {
  for (Natural n : s) {
    if (n < 2) return false;
    for (Natural d = 2; d < n; ++d)
      if (n % d == 0 && !s.count(d)) return false;
  }
  return true;
}

std::set<Natural> divisor_closure(const std::set<Natural>& s) {
  std::set<Natural> out;
  for (Natural n : s) {
    if (n < 2) continue;
    for (Natural d = 2; d <= n; ++d)
      if (n % d == 0) out.insert(d);
  }
  return out;
}

namespace {

struct TowerShared {
  std::vector<TowerEmission> emissions;
  // Keyed by conjugacy_key.
  std::unordered_map<Word, Natural> min_stage;
};

// Least cyclic rotation of w or w^-1 after cyclic reduction.
Word conjugacy_key(const Word& w) {
  const Word core = cyclic_reduce(w).first;
  Word best = core;
  for (const Word& v : {core, invert(core)}) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      std::vector<Letter> rotated(v.begin() + k, v.end());
      rotated.insert(rotated.end(), v.begin(), v.begin() + k);
      Word candidate(rotated);
      if (candidate < best) best = std::move(candidate);
    }
  }
  return best;
}

Word translate(const Word& w, const std::vector<Natural>& alphabet) {
  if (alphabet.empty()) return w;
  std::vector<Letter> letters;
  for (const auto& l : w) letters.emplace_back(alphabet[l.generator.index], l.sign);
  return Word(letters);
}

class Detector {
 public:
  Detector(const Presentation& p, Natural stage, std::shared_ptr<TowerShared> shared)
      : p_(p), prefix_(p.stream()), stage_(stage), shared_(std::move(shared)) {}

  std::optional<TorsionWitness> step() {
    if (exhausted_) {
      ++attempts_made_;
      return std::nullopt;
    }
    bool fresh_epoch = false;
    while (true) {
      std::optional<std::pair<Natural, Natural>> attempt;
      if (epoch_started_) attempt = next_attempt();
      if (!attempt) {
        // A whole epoch of skipped words: nothing left to try at this size.
        if (fresh_epoch) return std::nullopt;
        // With no generators the empty word is the only candidate.
        if (epoch_started_ && alphabet_size_ == 0 && p_.has_finite_alphabet()) {
          exhausted_ = true;
          ++attempts_made_;
          return std::nullopt;
        }
        start_epoch();
        fresh_epoch = true;
        continue;
      }
      const auto [rank, exponent] = *attempt;
      if (shared_ && dead_ranks_[rank]) continue;
      const Word w = translate(enumerate_words(alphabet_size_, rank), alphabet_);
      if (skip(w, exponent)) {
        // Tower skips depend on the word alone and never get undone.
        if (shared_) dead_ranks_[rank] = true;
        continue;
      }
      absorb_lower();
      ++attempts_made_;
      auto verdict = prover_->prove(power(w, static_cast<std::int64_t>(exponent)), Natural{64} << std::min<Natural>(epoch_, 40));
      if (verdict.status != Status::proved) return std::nullopt;
      found_pairs_.insert({w, exponent});
      if (shared_) {
        found_words_.insert(conjugacy_key(w));
        dead_ranks_[rank] = true;
        // Already trivial here, so killing it adds nothing.
        if (exponent == 1) return std::nullopt;
      }
      return TorsionWitness{w, exponent, std::get<TrivialityDerivation>(*verdict.certificate), stage_};
    }
  }

  Natural attempts() const { return attempts_made_; }
  Natural epoch() const { return epoch_; }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<Word, Natural>& p) const noexcept {
      return WordHash{}(p.first) * 31 + p.second;
    }
  };

  bool skip(const Word& w, Natural exponent) const {
    if (!shared_) return found_pairs_.count({w, exponent}) > 0;
    if (w.empty() || !w.is_cyclically_reduced()) return true;
    const Word key = conjugacy_key(w);
    if (found_words_.count(key)) return true;
    auto it = shared_->min_stage.find(key);
    return it != shared_->min_stage.end() && it->second <= stage_;
  }

  // Lower-stage words join the snapshot as soon as they are emitted.
  void absorb_lower() {
    bool changed = !prover_.has_value();
    if (shared_) {
      for (; lower_seen_ < shared_->emissions.size(); ++lower_seen_) {
        const auto& em = shared_->emissions[lower_seen_];
        if (em.stage >= stage_) continue;
        relators_.push_back({em.witness.word, prefix_.items().size() + lower_count_++});
        changed = true;
      }
    }
    if (changed) prover_.emplace(relators_);
  }

  void start_epoch() {
    if (epoch_started_) ++epoch_;
    epoch_started_ = true;
    const Natural e = std::min<Natural>(epoch_, 40);
    prefix_.extend_to(std::size_t{16} << e);
    std::vector<IndexedRelator> relators;
    for (std::size_t i = 0; i < prefix_.items().size(); ++i) {
      if (!prefix_.items()[i].word.empty()) relators.push_back({prefix_.items()[i].word, i});
    }
    lower_seen_ = 0;
    lower_count_ = 0;
    if (p_.has_finite_alphabet()) {
      alphabet_size_ = p_.generator_count();
      alphabet_.clear();
    } else {
      std::set<Natural> gens;
      for (const auto& r : relators)
        for (Natural g : r.word.support()) gens.insert(g);
      for (Natural g = 0; g <= e; ++g) gens.insert(g);
      alphabet_.assign(gens.begin(), gens.end());
      alphabet_size_ = alphabet_.size();
    }
    relators_ = std::move(relators);
    prover_.reset();
    absorb_lower();

    ranks_ = alphabet_size_ == 0 ? 1 : Natural{8} << e;
    exponents_ = Natural{4} << e;
    sigma_ = 1;
    next_rank_ = 0;
    dead_ranks_.assign(ranks_, false);
  }

  // Pairs (rank, exponent) with rank < ranks_ and 1 <= exponent <= exponents_,
  // by rank + exponent and then rank. The empty word only gets exponent 1.
  std::optional<std::pair<Natural, Natural>> next_attempt() {
    while (sigma_ < ranks_ + exponents_) {
      if (next_rank_ < sigma_ && next_rank_ < ranks_) {
        const Natural r = next_rank_++;
        return std::make_pair(r, sigma_ - r);
      }
      ++sigma_;
      next_rank_ = std::max<Natural>(1, sigma_ > exponents_ ? sigma_ - exponents_ : 0);
      if (next_rank_ >= ranks_) break;
    }
    return std::nullopt;
  }

  Presentation p_;
  StreamPrefix prefix_;
  Natural stage_;
  std::shared_ptr<TowerShared> shared_;
  Natural epoch_ = 0;
  bool epoch_started_ = false;
  Natural ranks_ = 0;
  Natural exponents_ = 0;
  Natural sigma_ = 1;
  Natural next_rank_ = 0;
  std::vector<bool> dead_ranks_;
  bool exhausted_ = false;
  Natural attempts_made_ = 0;
  std::optional<TrivialityProver> prover_;
  std::vector<IndexedRelator> relators_;
  std::size_t lower_seen_ = 0;
  Natural lower_count_ = 0;
  std::vector<Natural> alphabet_;
  Natural alphabet_size_ = 0;
  std::unordered_set<std::pair<Word, Natural>, PairHash> found_pairs_;
  std::unordered_set<Word> found_words_;
};

}  // namespace

struct TorsionCursor::State {
  Detector detector;
};

TorsionCursor::TorsionCursor(const Presentation& p) : state_(std::make_unique<State>(State{Detector(p, 1, nullptr)})) {}
TorsionCursor::TorsionCursor(TorsionCursor&&) noexcept = default;
TorsionCursor& TorsionCursor::operator=(TorsionCursor&&) noexcept = default;
TorsionCursor::~TorsionCursor() = default;

std::optional<TorsionWitness> TorsionCursor::step() { return state_->detector.step(); }
Natural TorsionCursor::attempts() const { return state_->detector.attempts(); }
Natural TorsionCursor::epoch() const { return state_->detector.epoch(); }

std::vector<TorsionWitness> torsion_stream(const Presentation& p, Natural attempts) {
  TorsionCursor cursor(p);
  std::vector<TorsionWitness> out;
  while (cursor.attempts() < attempts) {
    if (auto w = cursor.step()) out.push_back(std::move(*w));
  }
  return out;
}

struct TowerCursor::State {
  Presentation presentation;
  std::shared_ptr<TowerShared> shared = std::make_shared<TowerShared>();
  std::vector<std::unique_ptr<Detector>> stages;
  Natural turn = 0;
  Natural steps = 0;
};

TowerCursor::TowerCursor(const Presentation& p) : state_(std::make_unique<State>()) {
  state_->presentation = p;
  state_->stages.push_back(std::make_unique<Detector>(p, 1, state_->shared));
}
TowerCursor::TowerCursor(TowerCursor&&) noexcept = default;
TowerCursor& TowerCursor::operator=(TowerCursor&&) noexcept = default;
TowerCursor::~TowerCursor() = default;

Natural TowerCursor::steps() const { return state_->steps; }
Natural TowerCursor::stages() const { return state_->stages.size(); }

std::optional<TowerEmission> TowerCursor::step() {
  auto& st = *state_;
  // Ruler schedule: stage s runs on about half the turns of stage s - 1.
  const std::size_t index =
      std::min<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(++st.turn)), st.stages.size() - 1);
  ++st.steps;
  const Natural stage = index + 1;
  auto witness = st.stages[index]->step();
  if (!witness || witness->word.empty()) return std::nullopt;
  auto [it, inserted] = st.shared->min_stage.emplace(conjugacy_key(witness->word), stage);
  if (!inserted) {
    if (it->second <= stage) return std::nullopt;
    it->second = stage;
  }
  TowerEmission em{stage, std::move(*witness)};
  st.shared->emissions.push_back(em);
  if (index + 1 == st.stages.size()) {
    st.stages.push_back(std::make_unique<Detector>(st.presentation, stage + 1, st.shared));
  }
  return em;
}

std::vector<TowerEmission> tor_tower_stream(const Presentation& p, Natural steps) {
  TowerCursor cursor(p);
  std::vector<TowerEmission> out;
  while (cursor.steps() < steps) {
    if (auto em = cursor.step()) out.push_back(std::move(*em));
  }
  return out;
}

Presentation torsion_free_quotient(const Presentation& p) {
  const Presentation input = p;
  RelatorStream stream("tf of (" + p.stream().description() + ")", [input] {
    struct State {
      std::unique_ptr<RelatorCursor> base;
      bool base_ended = false;
      TowerCursor tower;
    };
    auto st = std::make_shared<State>(State{input.stream().open(), false, TowerCursor(input)});
    const NameTable names = input.names();
    return std::make_unique<BufferedCursor>([st, names](std::vector<Relator>& out) {
      if (!st->base_ended) {
        if (auto item = st->base->next()) {
          out.push_back({item->word, "base: " + item->cause});
        } else {
          st->base_ended = true;
        }
      }
      if (auto em = st->tower.step()) {
        out.push_back({em->witness.word, "tower stage " + std::to_string(em->stage) + " word " +
                                             format_word(em->witness.word, names) + " exponent " +
                                             std::to_string(em->witness.exponent)});
      }
      return true;
    });
  });
  auto constructors = p.constructors();
  constructors.push_back("tf");
  if (!p.has_finite_alphabet()) {
    return Presentation::countable(std::move(stream)).with_recipe(p.base_relators(), constructors, p.serializable());
  }
  return Presentation::recursive(p.generator_count(), std::move(stream), p.names().names())
      .with_recipe(p.base_relators(), constructors, p.serializable());
}

namespace {

OrderCertificate derived_certificate(const OrderCertificate& base, Natural d) {
  const Natural n = base.order;
  OrderCertificate c;
  c.order = d;
  c.witness = base.witness;
  c.witness.word = power(base.witness.word, static_cast<std::int64_t>(n / d));
  c.witness.exponent = d;
  c.provisional = base.provisional;
  c.derived_from = n;
  for (Natural dd : proper_divisors(d)) {
    const Natural e = n / d * dd;
    for (const auto& [k, wit] : base.refutations) {
      if (k == e) c.refutations.push_back({dd, wit});
    }
  }
  return c;
}

}  // namespace

TorordResult torord_bounded(const Presentation& p, Natural bound, Natural fuel, const TorordOptions& options) {
  if (bound < 2) throw std::invalid_argument("torord bound must be >= 2");
  std::vector<IndexedRelator> proof_relators;
  std::vector<Word> check_relators;
  bool complete = false;
  if (p.is_finite()) {
    for (std::size_t i = 0; i < p.relators().size(); ++i) proof_relators.push_back({p.relators()[i], i});
    check_relators = p.relators();
    complete = true;
  } else {
    const auto budget = options.relator_budget.value_or(4 * options.relator_prefix);
    StreamPrefix prefix(p.stream());
    prefix.extend_to(std::max<Natural>(budget, options.relator_prefix));
    const auto& items = prefix.items();
    for (std::size_t i = 0; i < items.size() && i < options.relator_prefix; ++i) {
      if (!items[i].word.empty()) proof_relators.push_back({items[i].word, i});
    }
    for (std::size_t i = 0; i < items.size() && i < budget; ++i) check_relators.push_back(items[i].word);
  }

  std::optional<Natural> generator_count;
  std::vector<Natural> alphabet;
  Natural alphabet_size = 0;
  if (p.has_finite_alphabet()) {
    generator_count = p.generator_count();
    alphabet_size = *generator_count;
  } else {
    std::set<Natural> gens;
    for (const auto& r : proof_relators)
      for (Natural g : r.word.support()) gens.insert(g);
    alphabet.assign(gens.begin(), gens.end());
    alphabet_size = alphabet.size();
  }

  const TrivialityProver prover(proof_relators);
  std::map<Natural, OrderCertificate> certified;
  Natural tried = 0;
  const Natural scan_limit = options.words * 64 + 64;
  for (Natural rank = 1; alphabet_size > 0 && tried < options.words && rank < scan_limit; ++rank) {
    const Word w = translate(enumerate_words(alphabet_size, rank), alphabet);
    if (!w.is_cyclically_reduced()) continue;
    ++tried;
    for (Natural n = 2; n <= bound; ++n) {
      auto proof = prover.prove(power(w, static_cast<std::int64_t>(n)), fuel);
      if (proof.status != Status::proved) continue;
      OrderCertificate c;
      c.order = n;
      c.witness = TorsionWitness{w, n, std::get<TrivialityDerivation>(*proof.certificate), 1};
      bool all_refuted = true;
      for (Natural d : proper_divisors(n)) {
        auto r = refute_with(check_relators, generator_count, power(w, static_cast<std::int64_t>(d)),
                             options.max_degree, complete);
        if (r.status != Status::refuted) {
          all_refuted = false;
          break;
        }
        c.provisional = c.provisional || r.provisional;
        c.refutations.push_back({d, std::get<FiniteQuotientWitness>(*r.certificate)});
      }
      if (all_refuted) {
        for (Natural d = 2; d <= n; ++d) {
          if (n % d != 0 || certified.count(d)) continue;
          certified.emplace(d, d == n ? c : derived_certificate(c, d));
        }
      }
      break;
    }
  }

  TorordResult result;
  std::set<Natural> orders;
  for (auto& [n, c] : certified) {
    orders.insert(n);
    result.certificates.push_back(std::move(c));
  }
  result.orders = FactorCompleteSet(std::move(orders));
  return result;
}

bool verify_order_certificate(const OrderCertificate& c, const std::vector<Word>& relators) {
  const Word target = power(c.witness.word, static_cast<std::int64_t>(c.order));
  if (c.witness.proof.word != target || !verify_derivation(c.witness.proof)) return false;
  const auto divisors = proper_divisors(c.order);
  if (c.refutations.size() != divisors.size()) return false;
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    const auto& [d, wit] = c.refutations[i];
    if (d != divisors[i] || wit.word != power(c.witness.word, static_cast<std::int64_t>(d))) return false;
    std::vector<Word> checked(relators.begin(),
                              relators.begin() + std::min<std::size_t>(relators.size(), wit.relators_checked));
    if (checked.size() < wit.relators_checked) return false;
    if (!verify_witness(checked, wit)) return false;
  }
  return true;
}

std::string format_order_line(const OrderCertificate& c, const NameTable& names) {
  std::string refuted;
  for (const auto& [d, wit] : c.refutations) {
    if (!refuted.empty()) refuted += ",";
    refuted += std::to_string(d);
  }
  if (c.provisional) refuted += "|provisional";
  return "order " + std::to_string(c.order) + " word " + format_word(c.witness.word, names) + " stage " +
         std::to_string(c.witness.stage) + " refuted " + refuted;
}

}  // namespace torsionkit
