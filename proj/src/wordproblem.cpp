#include "torsionkit/wordproblem.hpp"

#include <algorithm>
#include <numeric>
#include <functional>
#include <queue>
#include <tuple>
#include <sstream>
#include <unordered_map>

namespace torsionkit {

std::string to_string(Status s) {
  switch (s) {
    case Status::proved:
      return "proved";
    case Status::refuted:
      return "refuted";
    case Status::unknown:
      return "unknown";
  }
  return "unknown";
}

Word DerivationFactor::value() const { return conjugate(power(relator, sign), conjugator); }

DerivationFactor DerivationFactor::inverse() const {
  DerivationFactor f = *this;
  f.sign = -sign;
  return f;
}

Word evaluate(const Derivation& d) {
  std::vector<Letter> raw;
  for (const auto& f : d) {
    const Word v = f.value();
    raw.insert(raw.end(), v.begin(), v.end());
  }
  return free_reduce(raw);
}

Derivation inverse(const Derivation& d) {
  Derivation out;
  out.reserve(d.size());
  for (auto it = d.rbegin(); it != d.rend(); ++it) out.push_back(it->inverse());
  return out;
}

Derivation conjugate(const Derivation& d, const Word& by) {
  Derivation out = d;
  for (auto& f : out) f.conjugator = concat(f.conjugator, by);
  return out;
}

namespace {

// Cyclically reduced core of r^sign, with r = c core c^-1 (before the sign).
struct Cycle {
  std::vector<Letter> letters;
  Word c;
  Natural relator_index;
  int sign;
  const Word* relator;
};

// Rotation of a cycle starting at `rotation`; it equals
// conjugate(relator^sign, conjugator) with conjugator = c * core[0, rotation).
struct Variant {
  std::size_t cycle;
  std::size_t rotation;
};

struct VariantSet {
  std::vector<Cycle> cycles;
  std::vector<Variant> variants;

  std::size_t size(const Variant& v) const { return cycles[v.cycle].letters.size(); }
  const Letter& at(const Variant& v, std::size_t j) const {
    const auto& letters = cycles[v.cycle].letters;
    return letters[(v.rotation + j) % letters.size()];
  }
  Word conjugator(const Variant& v) const {
    const auto& cyc = cycles[v.cycle];
    return concat(cyc.c, Word(std::span<const Letter>(cyc.letters).subspan(0, v.rotation)));
  }
};

VariantSet build_variants(const std::vector<IndexedRelator>& relators) {
  VariantSet out;
  for (const auto& r : relators) {
    if (r.word.empty()) continue;
    auto [core, c] = cyclic_reduce(r.word);
    for (int sign : {1, -1}) {
      const Word v = sign > 0 ? core : invert(core);
      out.cycles.push_back({std::vector<Letter>(v.begin(), v.end()), c, r.index, sign, &r.word});
      for (std::size_t k = 0; k < v.size(); ++k) out.variants.push_back({out.cycles.size() - 1, k});
    }
  }
  return out;
}

struct SearchNode {
  Word word;
  std::size_t parent;
  // Move that produced this node: a variant replacement at `position`, or a
  // rotation when `variant` is npos.
  std::size_t variant;
  std::size_t position;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct RoundResult {
  std::optional<Derivation> derivation;
  bool truncated = false;
  bool out_of_fuel = false;
};

Derivation rebuild(const std::vector<SearchNode>& nodes, std::size_t leaf, const VariantSet& variants) {
  std::vector<std::size_t> path;
  for (std::size_t i = leaf; i != 0; i = nodes[i].parent) path.push_back(i);
  std::reverse(path.begin(), path.end());
  Derivation d;
  Word p;  // w = d * (p u p^-1)
  for (std::size_t i : path) {
    const auto& node = nodes[i];
    const Word& parent = nodes[node.parent].word;
    if (node.variant == npos) {
      p = concat(p, Word(parent.letters().subspan(0, 1)));
      continue;
    }
    const auto& v = variants.variants[node.variant];
    const auto& cyc = variants.cycles[v.cycle];
    const Word a(parent.letters().subspan(0, node.position));
    d.push_back({concat(concat(variants.conjugator(v), invert(a)), invert(p)), cyc.relator_index, cyc.sign, *cyc.relator});
  }
  return d;
}

RoundResult search_round(const VariantSet& variants,
                         const std::unordered_map<Natural, std::vector<std::size_t>>& by_first, const Word& w,
                         std::size_t bound, Natural fuel, Natural& spent) {
  RoundResult result;
  std::vector<SearchNode> nodes;
  std::unordered_map<Word, std::size_t> seen;
  using Key = std::tuple<std::size_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> frontier;
  nodes.push_back({w, 0, npos, 0});
  seen.emplace(w, 0);
  frontier.push({w.size(), 0});

  std::vector<Letter> raw;
  auto offer = [&](std::size_t parent, std::size_t variant, std::size_t position) -> bool {
    if (spent >= fuel) {
      result.out_of_fuel = true;
      return true;
    }
    ++spent;
    Word next = free_reduce(raw);
    if (next.size() > bound) {
      result.truncated = true;
      return false;
    }
    if (seen.count(next)) return false;
    const std::size_t id = nodes.size();
    const bool done = next.empty();
    seen.emplace(next, id);
    frontier.push({next.size(), id});
    nodes.push_back({std::move(next), parent, variant, position});
    if (done) {
      result.derivation = rebuild(nodes, id, variants);
      return true;
    }
    return false;
  };

  while (!frontier.empty()) {
    const std::size_t id = std::get<1>(frontier.top());
    frontier.pop();
    const Word u = nodes[id].word;
    const auto letters = u.letters();
    for (std::size_t p = 0; p < letters.size(); ++p) {
      auto it = by_first.find(letters[p].code());
      if (it == by_first.end()) continue;
      for (std::size_t vi : it->second) {
        const auto& v = variants.variants[vi];
        const std::size_t vsize = variants.size(v);
        std::size_t match = 0;
        while (match < vsize && p + match < letters.size() && letters[p + match] == variants.at(v, match)) ++match;
        for (std::size_t len = 1; len <= match; ++len) {
          raw.assign(letters.begin(), letters.begin() + p);
          for (std::size_t k = vsize; k > len; --k) raw.push_back(variants.at(v, k - 1).inverted());
          raw.insert(raw.end(), letters.begin() + p + len, letters.end());
          if (offer(id, vi, p)) return result;
        }
      }
    }
    if (letters.size() >= 2) {
      raw.assign(letters.begin() + 1, letters.end());
      raw.push_back(letters[0]);
      if (offer(id, npos, 0)) return result;
    }
  }
  return result;
}

std::unordered_map<Natural, std::vector<std::size_t>> index_variants(const VariantSet& variants) {
  std::unordered_map<Natural, std::vector<std::size_t>> by_first;
  for (std::size_t i = 0; i < variants.variants.size(); ++i) {
    by_first[variants.at(variants.variants[i], 0).code()].push_back(i);
  }
  return by_first;
}

std::size_t longest(const std::vector<IndexedRelator>& relators) {
  std::size_t m = 1;
  for (const auto& r : relators) m = std::max(m, r.word.size());
  return m;
}

Verdict proved(const Word& w, Derivation d, Natural spent) {
  Verdict v;
  v.status = Status::proved;
  v.fuel_spent = spent;
  v.certificate = TrivialityDerivation{w, std::move(d)};
  return v;
}

}  // namespace

struct TrivialityProver::Impl {
  std::vector<IndexedRelator> relators;
  VariantSet variants;
  std::unordered_map<Natural, std::vector<std::size_t>> by_first;
  std::size_t step = 1;
};

TrivialityProver::TrivialityProver(std::vector<IndexedRelator> relators) {
  auto impl = std::make_shared<Impl>();
  impl->relators = std::move(relators);
  impl->variants = build_variants(impl->relators);
  impl->by_first = index_variants(impl->variants);
  impl->step = longest(impl->relators);
  impl_ = std::move(impl);
}

std::size_t TrivialityProver::relator_count() const { return impl_->relators.size(); }

Verdict TrivialityProver::prove(const Word& w, Natural fuel) const {
  if (w.empty()) return proved(w, {}, 0);
  Natural spent = 0;
  for (std::size_t b = 0;; ++b) {
    if (spent >= fuel) break;
    ++spent;
    auto round = search_round(impl_->variants, impl_->by_first, w, w.size() + (b + 1) * impl_->step, fuel, spent);
    if (round.derivation) return proved(w, std::move(*round.derivation), spent);
    if (round.out_of_fuel || !round.truncated) break;
  }
  Verdict v;
  v.fuel_spent = spent;
  return v;
}

Verdict prove_trivial_with(const std::vector<IndexedRelator>& relators, const Word& w, Natural fuel) {
  return TrivialityProver(relators).prove(w, fuel);
}

Verdict normal_closure_prove_trivial(const Presentation& p, const Word& w, Natural fuel) {
  p.check_word(w);
  if (w.empty()) return proved(w, {}, 0);
  StreamPrefix prefix(p.stream());
  Natural spent = 0;
  for (std::size_t b = 0;; ++b) {
    if (spent >= fuel) break;
    ++spent;
    const std::size_t want = b < 40 ? (std::size_t{16} << b) : SIZE_MAX;
    // Every relator read costs one unit; a round that cannot pay for its
    // prefix is not started.
    if (!prefix.finished() && want > prefix.items().size()) {
      const std::size_t need = want - prefix.items().size();
      if (need > fuel - spent) {
        spent = fuel;
        break;
      }
      const std::size_t before = prefix.items().size();
      prefix.extend_to(want);
      spent += prefix.items().size() - before;
    }
    std::vector<IndexedRelator> relators;
    for (std::size_t i = 0; i < prefix.items().size(); ++i) {
      if (!prefix.items()[i].word.empty()) relators.push_back({prefix.items()[i].word, i});
    }
    const auto variants = build_variants(relators);
    const auto by_first = index_variants(variants);
    // While items remain unread a round may spend half the fuel left.
    const Natural cap = prefix.finished() ? fuel : spent + (fuel - spent) / 2;
    auto round = search_round(variants, by_first, w, w.size() + (b + 1) * longest(relators), cap, spent);
    if (round.derivation) return proved(w, std::move(*round.derivation), spent);
    if (round.out_of_fuel && cap == fuel) break;
    if (!round.truncated && !round.out_of_fuel && prefix.finished()) break;
  }
  Verdict v;
  v.fuel_spent = spent;
  return v;
}

Natural CosetTable::trace(Natural coset, const Word& w) const {
  for (const auto& l : w) {
    if (coset == kUndefinedCoset) break;
    if (l.generator.index >= generator_count) return kUndefinedCoset;
    coset = rows[coset][l.code()];
  }
  return coset;
}

Natural element_order_in_table(const CosetTable& t, const Word& w) {
  if (!t.complete) throw std::invalid_argument("element order needs a complete coset table");
  std::vector<Natural> image(t.size());
  for (Natural c = 0; c < t.size(); ++c) image[c] = t.trace(c, w);
  std::vector<bool> done(t.size(), false);
  Natural order = 1;
  for (Natural c = 0; c < t.size(); ++c) {
    if (done[c]) continue;
    Natural len = 0;
    for (Natural d = c; !done[d]; d = image[d]) {
      done[d] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

Permutation evaluate_permutation(const std::vector<Permutation>& images, const Word& w, std::size_t degree) {
  Permutation result(degree);
  std::iota(result.begin(), result.end(), 0u);
  std::vector<Permutation> inverses(images.size());
  for (std::size_t g = 0; g < images.size(); ++g) {
    inverses[g].resize(degree);
    for (std::uint32_t i = 0; i < degree; ++i) inverses[g][images[g][i]] = i;
  }
  for (auto& point : result) {
    for (const auto& l : w) {
      if (l.generator.index >= images.size()) continue;
      point = l.inverse() ? inverses[l.generator.index][point] : images[l.generator.index][point];
    }
  }
  return result;
}

std::string format_cycles(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) continue;
    out += "(";
    for (std::uint32_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      if (j != i) out += " ";
      out += std::to_string(j + 1);
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

Permutation parse_cycles(std::string_view text, std::size_t degree) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<bool> used(degree, false);
  std::size_t i = 0;
  auto fail = [&](const std::string& why) { throw ParseError("bad cycle notation '" + std::string(text) + "': " + why); };
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    if (text[i] != '(') fail("expected '('");
    const auto close = text.find(')', i);
    if (close == std::string_view::npos) fail("unclosed cycle");
    std::istringstream in{std::string(text.substr(i + 1, close - i - 1))};
    std::vector<std::uint32_t> cycle;
    long long point = 0;
    while (in >> point) {
      if (point < 1 || static_cast<std::size_t>(point) > degree) fail("point out of range");
      if (used[point - 1]) fail("repeated point");
      used[point - 1] = true;
      cycle.push_back(static_cast<std::uint32_t>(point - 1));
    }
    if (!in.eof()) fail("non-numeric point");
    for (std::size_t k = 0; k < cycle.size(); ++k) p[cycle[k]] = cycle[(k + 1) % cycle.size()];
    i = close + 1;
  }
  return p;
}

namespace {

// Canonical representatives of the conjugacy classes of Sym(k): one
// permutation per partition of k, cycles laid out on consecutive points.
std::vector<Permutation> cycle_type_representatives(std::size_t k) {
  std::vector<Permutation> out;
  std::vector<std::size_t> parts;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t max_part) {
    if (left == 0) {
      Permutation p(k);
      std::uint32_t start = 0;
      for (std::size_t len : parts) {
        for (std::size_t j = 0; j < len; ++j) p[start + j] = static_cast<std::uint32_t>(start + (j + 1) % len);
        start += static_cast<std::uint32_t>(len);
      }
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t part = std::min(left, max_part); part >= 1; --part) {
      parts.push_back(part);
      rec(left - part, part);
      parts.pop_back();
    }
  };
  rec(k, k);
  return out;
}

std::vector<Permutation> all_permutations(std::size_t k) {
  std::vector<Permutation> out;
  Permutation p(k);
  std::iota(p.begin(), p.end(), 0u);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool is_identity(const Permutation& p) {
  for (std::uint32_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

// Relator as a sequence of (slot, inverse) over the assigned generators;
// letters on unassigned generators act trivially and are dropped.
struct SlotWord {
  std::vector<std::pair<std::size_t, bool>> letters;
  std::size_t ready = 0;  // slots that must be assigned before checking
};

SlotWord to_slots(const Word& w, const std::unordered_map<Natural, std::size_t>& slot_of) {
  SlotWord s;
  for (const auto& l : w) {
    auto it = slot_of.find(l.generator.index);
    if (it == slot_of.end()) continue;
    s.letters.emplace_back(it->second, l.inverse());
    s.ready = std::max(s.ready, it->second + 1);
  }
  return s;
}

class HomSearch {
 public:
  HomSearch(std::size_t degree, std::vector<SlotWord> relators, SlotWord target, std::size_t slots)
      : degree_(degree), relators_(std::move(relators)), target_(std::move(target)), images_(slots),
        inverses_(slots) {
    by_level_.resize(slots + 1);
    for (std::size_t i = 0; i < relators_.size(); ++i) by_level_[relators_[i].ready].push_back(i);
  }

  std::optional<std::vector<Permutation>> run(Natural& budget) {
    if (images_.empty()) return std::nullopt;
    for (const auto& rep : cycle_type_representatives(degree_)) {
      assign(0, rep);
      if (!level_ok(1)) continue;
      if (descend(1, budget)) return images_;
      if (budget == 0) return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  void assign(std::size_t slot, const Permutation& p) {
    images_[slot] = p;
    inverses_[slot].resize(degree_);
    for (std::uint32_t i = 0; i < degree_; ++i) inverses_[slot][p[i]] = i;
  }

  bool trivial(const SlotWord& w) const {
    for (std::uint32_t start = 0; start < degree_; ++start) {
      std::uint32_t point = start;
      for (const auto& [slot, inv] : w.letters) point = inv ? inverses_[slot][point] : images_[slot][point];
      if (point != start) return false;
    }
    return true;
  }

  bool level_ok(std::size_t assigned) const {
    for (std::size_t i : by_level_[assigned])
      if (!trivial(relators_[i])) return false;
    return true;
  }

  bool descend(std::size_t slot, Natural& budget) {
    if (slot == images_.size()) return !trivial(target_);
    if (all_.empty()) all_ = all_permutations(degree_);
    for (const auto& p : all_) {
      if (budget == 0) return false;
      --budget;
      assign(slot, p);
      if (!level_ok(slot + 1)) continue;
      if (descend(slot + 1, budget)) return true;
    }
    return false;
  }

  std::size_t degree_;
  std::vector<SlotWord> relators_;
  SlotWord target_;
  std::vector<Permutation> images_;
  std::vector<Permutation> inverses_;
  std::vector<std::vector<std::size_t>> by_level_;
  std::vector<Permutation> all_;
};

constexpr Natural kSearchNodeLimit = 50'000'000;

}  // namespace

Verdict refute_with(const std::vector<Word>& relators, std::optional<Natural> generator_count, const Word& w,
                    Natural max_degree, bool complete) {
  Verdict verdict;
  if (w.empty()) return verdict;
  std::vector<Natural> generators;
  if (generator_count) {
    generators.resize(*generator_count);
    std::iota(generators.begin(), generators.end(), Natural{0});
  } else {
    generators = w.support();
  }
  std::unordered_map<Natural, std::size_t> slot_of;
  for (std::size_t i = 0; i < generators.size(); ++i) slot_of[generators[i]] = i;
  std::vector<SlotWord> slot_relators;
  for (const auto& r : relators) slot_relators.push_back(to_slots(r, slot_of));
  const SlotWord target = to_slots(w, slot_of);

  Natural budget = kSearchNodeLimit;
  for (Natural k = 2; k <= max_degree; ++k) {
    HomSearch search(k, slot_relators, target, generators.size());
    const Natural before = budget;
    auto found = search.run(budget);
    verdict.fuel_spent += before - budget;
    if (found) {
      FiniteQuotientWitness witness;
      witness.degree = k;
      witness.generators = generators;
      witness.images = std::move(*found);
      witness.word = w;
      witness.relators_checked = relators.size();
      witness.provisional = !complete;
      verdict.status = Status::refuted;
      verdict.provisional = !complete;
      verdict.certificate = std::move(witness);
      return verdict;
    }
    if (budget == 0) break;
  }
  return verdict;
}

Verdict refute_trivial_finite_quotient(const Presentation& p, const Word& w, Natural max_degree,
                                       Natural relator_budget) {
  p.check_word(w);
  std::vector<Word> relators;
  bool complete = false;
  if (p.is_finite()) {
    const auto& all = p.relators();
    const std::size_t n = std::min<std::size_t>(all.size(), relator_budget);
    relators.assign(all.begin(), all.begin() + n);
    complete = n == all.size();
  } else {
    for (auto& item : p.stream().take(relator_budget)) relators.push_back(std::move(item.word));
  }
  std::optional<Natural> alphabet;
  if (p.has_finite_alphabet()) alphabet = p.generator_count();
  auto verdict = refute_with(relators, alphabet, w, max_degree, complete);
  return verdict;
}

std::set<Natural> torord_oracle_cyclics(const std::vector<Natural>& orders) {
  std::set<Natural> out;
  for (Natural n : orders) {
    if (n < 2) throw std::invalid_argument("cyclic factor orders must be >= 2");
    for (Natural d = 2; d <= n; ++d)
      if (n % d == 0) out.insert(d);
  }
  return out;
}

bool verify_derivation(const TrivialityDerivation& d) { return evaluate(d.factors) == d.word; }

namespace {

Permutation image_under(const FiniteQuotientWitness& w, const Word& word) {
  std::unordered_map<Natural, std::size_t> slot_of;
  for (std::size_t i = 0; i < w.generators.size(); ++i) slot_of[w.generators[i]] = i;
  std::vector<Permutation> inverses(w.images.size(), Permutation(w.degree));
  for (std::size_t g = 0; g < w.images.size(); ++g)
    for (std::uint32_t i = 0; i < w.degree; ++i) inverses[g][w.images[g][i]] = i;
  Permutation result(w.degree);
  for (std::uint32_t start = 0; start < w.degree; ++start) {
    std::uint32_t point = start;
    for (const auto& l : word) {
      auto it = slot_of.find(l.generator.index);
      if (it == slot_of.end()) continue;
      point = l.inverse() ? inverses[it->second][point] : w.images[it->second][point];
    }
    result[start] = point;
  }
  return result;
}

bool valid_permutation(const Permutation& p, Natural degree) {
  if (p.size() != degree) return false;
  std::vector<bool> hit(degree, false);
  for (auto i : p) {
    if (i >= degree || hit[i]) return false;
    hit[i] = true;
  }
  return true;
}

bool factors_match(const Presentation& p, const Derivation& d) {
  Natural need = 0;
  for (const auto& f : d) need = std::max(need, f.relator_index + 1);
  const auto items = p.stream().take(need);
  for (const auto& f : d) {
    if (f.relator_index >= items.size() || items[f.relator_index].word != f.relator) return false;
  }
  return true;
}

bool verify_table(const Presentation& p, const CosetTableCertificate& c) {
  const auto& t = c.table;
  if (!p.is_finite() || !t.complete || t.generator_count != p.generator_count() || t.rows.empty()) return false;
  for (Natural r = 0; r < t.size(); ++r) {
    if (t.rows[r].size() != 2 * t.generator_count) return false;
    for (Natural x = 0; x < t.rows[r].size(); ++x) {
      const Natural s = t.rows[r][x];
      if (s >= t.size() || t.rows[s][x ^ 1] != r) return false;
    }
  }
  for (const auto& rel : p.relators())
    for (Natural r = 0; r < t.size(); ++r)
      if (t.trace(r, rel) != r) return false;
  for (const auto& h : c.subgroup)
    if (t.trace(0, h) != 0) return false;
  return t.trace(0, c.word) != kUndefinedCoset;
}

}  // namespace

bool verify_witness(const std::vector<Word>& relators, const FiniteQuotientWitness& w) {
  if (w.images.size() != w.generators.size()) return false;
  for (const auto& img : w.images)
    if (!valid_permutation(img, w.degree)) return false;
  for (const auto& r : relators)
    if (!is_identity(image_under(w, r))) return false;
  return !is_identity(image_under(w, w.word));
}

bool verify_certificate(const Presentation& p, const Certificate& c) {
  if (const auto* d = std::get_if<TrivialityDerivation>(&c)) return verify_derivation(*d) && factors_match(p, d->factors);
  if (const auto* t = std::get_if<CosetTableCertificate>(&c)) return verify_table(p, *t);
  if (const auto* w = std::get_if<FiniteQuotientWitness>(&c)) {
    if (p.has_finite_alphabet()) {
      std::vector<Natural> all(p.generator_count());
      std::iota(all.begin(), all.end(), Natural{0});
      if (w->generators != all) return false;
    }
    std::vector<Word> relators;
    if (p.is_finite()) {
      relators = p.relators();
      if (!w->provisional && w->relators_checked < relators.size()) return false;
      relators.resize(std::min<std::size_t>(relators.size(), w->relators_checked));
    } else {
      if (!w->provisional) return false;
      for (auto& item : p.stream().take(w->relators_checked)) relators.push_back(std::move(item.word));
    }
    return verify_witness(relators, *w);
  }
  const auto& rw = std::get<RewritingCertificate>(c);
  if (!p.is_finite()) return false;
  for (const auto& rule : rw.rules) {
    if (!(rule.rhs < rule.lhs)) return false;
    if (evaluate(rule.derivation) != concat(rule.lhs, invert(rule.rhs))) return false;
    if (!factors_match(p, rule.derivation)) return false;
  }
  const RewritingSystem system(p.generator_count(), rw.rules);
  if (!system.locally_confluent()) return false;
  for (const auto& r : p.relators())
    if (!system.normal_form(r).empty()) return false;
  return system.normal_form(rw.word) == rw.normal_form && !rw.normal_form.empty();
}

std::string format_certificate(const Certificate& c, const NameTable& names) {
  std::ostringstream out;
  if (const auto* d = std::get_if<TrivialityDerivation>(&c)) {
    out << "derivation:\n";
    for (const auto& f : d->factors) {
      out << "conj " << format_word(f.conjugator, names) << " rel " << f.relator_index << " sign "
          << (f.sign > 0 ? "+1" : "-1") << "\n";
    }
  } else if (const auto* t = std::get_if<CosetTableCertificate>(&c)) {
    out << "table:\n";
    for (const auto& row : t->table.rows) {
      for (std::size_t x = 0; x < row.size(); ++x) {
        if (x) out << ' ';
        if (row[x] == kUndefinedCoset) out << '-';
        else out << row[x];
      }
      out << "\n";
    }
  } else if (const auto* w = std::get_if<FiniteQuotientWitness>(&c)) {
    out << "homwitness: degree " << w->degree << "\n";
    for (std::size_t i = 0; i < w->generators.size(); ++i) {
      out << names.name(w->generators[i]) << " " << format_cycles(w->images[i]) << "\n";
    }
  } else {
    const auto& rw = std::get<RewritingCertificate>(c);
    out << "rewriting:\n";
    for (const auto& rule : rw.rules) {
      out << "rule " << format_word(rule.lhs, names) << " -> " << format_word(rule.rhs, names) << "\n";
    }
  }
  return out.str();
}

}  // namespace torsionkit
