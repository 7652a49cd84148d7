#include "torsionkit/presentation.hpp"

#include <algorithm>
#include <stdexcept>

#include "torsionkit/computability.hpp"

namespace torsionkit {

std::string to_string(PresentationClass c) {
  switch (c) {
    case PresentationClass::finite:
      return "finite";
    case PresentationClass::recursive:
      return "recursive";
    case PresentationClass::countable:
      return "countable";
  }
  return "unknown";
}

Presentation Presentation::finite(Natural generator_count, std::vector<Word> relators,
                                  std::vector<std::string> names) {
  Presentation p;
  p.class_ = PresentationClass::finite;
  p.generator_count_ = generator_count;
  if (!names.empty() && names.size() != generator_count) {
    throw std::invalid_argument("expected " + std::to_string(generator_count) + " generator names");
  }
  p.names_ = NameTable(std::move(names));
  for (const auto& r : relators) p.check_word(r);
  p.relators_ = std::move(relators);
  p.base_relators_ = p.relators_;
  p.stream_ = RelatorStream::from_list(p.relators_);
  return p;
}

Presentation Presentation::recursive(Natural generator_count, RelatorStream relators,
                                     std::vector<std::string> names) {
  Presentation p;
  p.class_ = PresentationClass::recursive;
  p.generator_count_ = generator_count;
  if (!names.empty() && names.size() != generator_count) {
    throw std::invalid_argument("expected " + std::to_string(generator_count) + " generator names");
  }
  p.names_ = NameTable(std::move(names));
  p.stream_ = std::move(relators);
  p.serializable_ = false;
  return p;
}

Presentation Presentation::countable(RelatorStream relators) {
  Presentation p;
  p.class_ = PresentationClass::countable;
  p.stream_ = std::move(relators);
  p.serializable_ = false;
  return p;
}

Natural Presentation::generator_count() const {
  if (class_ == PresentationClass::countable) throw std::logic_error("countable presentation has omega generators");
  return generator_count_;
}

const std::vector<Word>& Presentation::relators() const {
  if (class_ != PresentationClass::finite) throw std::logic_error("relator list requested from a stream-backed presentation");
  return relators_;
}

void Presentation::check_word(const Word& w) const {
  if (has_finite_alphabet() && w.alphabet_bound() > generator_count_) {
    throw std::invalid_argument("word uses generator x" + std::to_string(w.alphabet_bound() - 1) +
                                " outside an alphabet of " + std::to_string(generator_count_));
  }
}

Presentation Presentation::with_recipe(std::vector<Word> base, std::vector<std::string> constructors,
                                       bool serializable) const {
  Presentation p = *this;
  p.base_relators_ = std::move(base);
  p.constructors_ = std::move(constructors);
  p.serializable_ = serializable;
  return p;
}

bool operator==(const Presentation& a, const Presentation& b) {
  if (a.class_ != b.class_ || a.names_.names() != b.names_.names()) return false;
  if (a.has_finite_alphabet() && a.generator_count_ != b.generator_count_) return false;
  if (a.is_finite()) return a.relators_ == b.relators_;
  if (a.serializable_ != b.serializable_) return false;
  if (!a.serializable_) return a.stream_.description() == b.stream_.description() && a.base_relators_ == b.base_relators_;
  return a.base_relators_ == b.base_relators_ && a.constructors_ == b.constructors_;
}

namespace {

Word translate(const Word& w, const std::function<Natural(Natural)>& map) {
  std::vector<Letter> letters;
  letters.reserve(w.size());
  for (const auto& l : w) letters.emplace_back(map(l.generator.index), l.sign);
  return Word(letters);
}

}  // namespace

std::vector<Natural> free_product_offsets(const std::vector<Presentation>& parts) {
  std::vector<Natural> offsets;
  Natural offset = 0;
  for (const auto& p : parts) {
    offsets.push_back(offset);
    offset += p.generator_count();
  }
  return offsets;
}

Presentation free_product(const std::vector<Presentation>& parts) {
  const bool any_countable = std::any_of(parts.begin(), parts.end(), [](const auto& p) { return !p.has_finite_alphabet(); });
  const bool all_finite = std::all_of(parts.begin(), parts.end(), [](const auto& p) { return p.is_finite(); });
  if (all_finite) {
    const auto offsets = free_product_offsets(parts);
    std::vector<Word> relators;
    Natural total = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Natural off = offsets[i];
      for (const auto& r : parts[i].relators()) relators.push_back(translate(r, [off](Natural g) { return g + off; }));
      total += parts[i].generator_count();
    }
    return Presentation::finite(total, std::move(relators));
  }

  std::vector<std::function<Natural(Natural)>> maps;
  const Natural m = parts.size();
  std::string description = "free product of";
  if (any_countable) {
    for (Natural i = 0; i < m; ++i) maps.push_back([i, m](Natural g) { return g * m + i; });
  } else {
    for (Natural off : free_product_offsets(parts)) maps.push_back([off](Natural g) { return g + off; });
  }
  for (const auto& p : parts) description += " (" + p.stream().description() + ")";

  auto streams = std::make_shared<std::vector<RelatorStream>>();
  for (const auto& p : parts) streams->push_back(p.stream());
  auto shared_maps = std::make_shared<std::vector<std::function<Natural(Natural)>>>(std::move(maps));
  RelatorStream stream(description, [streams, shared_maps] {
    struct State {
      std::vector<std::unique_ptr<RelatorCursor>> cursors;
      std::vector<bool> ended;
      std::size_t turn = 0;
    };
    auto st = std::make_shared<State>();
    for (const auto& s : *streams) st->cursors.push_back(s.open());
    st->ended.assign(streams->size(), false);
    return std::make_unique<BufferedCursor>([st, shared_maps](std::vector<Relator>& out) {
      const std::size_t n = st->cursors.size();
      for (std::size_t tries = 0; tries < n; ++tries) {
        const std::size_t i = st->turn;
        st->turn = (st->turn + 1) % n;
        if (st->ended[i]) continue;
        auto item = st->cursors[i]->next();
        if (!item) {
          st->ended[i] = true;
          continue;
        }
        out.push_back({translate(item->word, (*shared_maps)[i]), "part " + std::to_string(i) + ": " + item->cause});
        return true;
      }
      return false;
    });
  });
  if (any_countable) return Presentation::countable(std::move(stream));
  Natural total = 0;
  for (const auto& p : parts) total += p.generator_count();
  return Presentation::recursive(total, std::move(stream));
}

Presentation free_product_stream(const PresentationSequence& parts) {
  auto seq = std::make_shared<PresentationSequence>(parts);
  RelatorStream stream("free product stream of " + parts.description, [seq] {
    struct State {
      std::vector<std::unique_ptr<RelatorCursor>> cursors;
      std::vector<bool> ended;
      Natural stage = 0;
    };
    auto st = std::make_shared<State>();
    return std::make_unique<BufferedCursor>([st, seq](std::vector<Relator>& out) {
      const Natural s = st->stage++;
      if (!seq->length || s < *seq->length) {
        st->cursors.push_back(seq->at(s).stream().open());
        st->ended.push_back(false);
      }
      bool live = false;
      for (Natural i = 0; i < st->cursors.size() && i <= s; ++i) {
        if (st->ended[i]) continue;
        auto item = st->cursors[i]->next();
        if (!item) {
          st->ended[i] = true;
          continue;
        }
        live = true;
        if (item->word.empty()) continue;
        out.push_back({translate(item->word, [i](Natural g) { return cantor_pair(i, g); }),
                       "part " + std::to_string(i) + ": " + item->cause});
      }
      const bool more_parts = !seq->length || s + 1 < *seq->length;
      return live || more_parts || std::any_of(st->ended.begin(), st->ended.end(), [](bool e) { return !e; });
    });
  });
  return Presentation::countable(std::move(stream));
}

Presentation k_torsion_quotient(const Presentation& p, Natural k) {
  if (k == 0) throw std::invalid_argument("k_torsion_quotient needs k >= 1");
  std::optional<Natural> alphabet;
  if (p.has_finite_alphabet()) alphabet = p.generator_count();
  const RelatorStream base = p.stream();
  RelatorStream stream("kt " + std::to_string(k) + " of (" + base.description() + ")", [base, alphabet, k] {
    struct State {
      std::unique_ptr<RelatorCursor> base;
      bool base_ended = false;
      WordEnumerator words;
    };
    auto st = std::make_shared<State>(State{base.open(), false, WordEnumerator(alphabet)});
    return std::make_unique<BufferedCursor>([st, k](std::vector<Relator>& out) {
      if (!st->base_ended) {
        if (auto item = st->base->next()) {
          out.push_back({item->word, "base: " + item->cause});
        } else {
          st->base_ended = true;
        }
      }
      const Natural rank = st->words.rank();
      const Word w = st->words.next();
      out.push_back({power(w, static_cast<std::int64_t>(k)),
                     "power " + std::to_string(k) + " of word rank " + std::to_string(rank)});
      return true;
    });
  });
  auto constructors = p.constructors();
  constructors.push_back("kt " + std::to_string(k));
  if (!p.has_finite_alphabet()) {
    return Presentation::countable(std::move(stream)).with_recipe(p.base_relators(), constructors, p.serializable());
  }
  return Presentation::recursive(p.generator_count(), std::move(stream), p.names().names())
      .with_recipe(p.base_relators(), constructors, p.serializable());
}

std::vector<BigInt> smith_diagonal(std::vector<std::vector<BigInt>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  const std::size_t steps = std::min(rows, cols);
  std::vector<BigInt> diag;
  using boost::multiprecision::abs;
  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      // Pivot: smallest nonzero |entry| in the trailing block.
      std::optional<std::pair<std::size_t, std::size_t>> pivot;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a[i][j] != 0 && (!pivot || abs(a[i][j]) < abs(a[pivot->first][pivot->second]))) pivot = {i, j};
        }
      }
      if (!pivot) {
        for (std::size_t r = t; r < steps; ++r) diag.push_back(0);
        return diag;
      }
      std::swap(a[t], a[pivot->first]);
      for (auto& row : a) std::swap(row[t], row[pivot->second]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold any offending row into the pivot row and retry.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < rows && !offender; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a[i][j] % a[t][t] != 0) {
            offender = i;
            break;
          }
        }
      }
      if (!offender) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] += a[*offender][j];
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

std::vector<BigInt> abelianization_invariants(const Presentation& p) {
  const Natural n = p.generator_count();
  std::vector<std::vector<BigInt>> matrix;
  for (const auto& r : p.relators()) {
    std::vector<BigInt> row(n, 0);
    for (const auto& l : r) row[l.generator.index] += l.sign;
    matrix.push_back(std::move(row));
  }
  std::vector<BigInt> invariants;
  Natural rank = 0;
  if (!matrix.empty() && n > 0) {
    for (const auto& d : smith_diagonal(matrix)) {
      if (d == 0) continue;
      ++rank;
      if (d != 1) invariants.push_back(d);
    }
  }
  for (Natural i = rank; i < n; ++i) invariants.push_back(0);
  return invariants;
}

Presentation enumerate_finite_presentations(Natural rank) {
  auto [gens, code] = cantor_unpair(rank);
  std::vector<Word> relators;
  while (code > 0) {
    auto [head, tail] = cantor_unpair(code - 1);
    relators.push_back(gens == 0 ? Word{} : enumerate_words(gens, head));
    code = tail;
  }
  return Presentation::finite(gens, std::move(relators));
}

Natural encode_finite_presentation(const Presentation& p) {
  const Natural gens = p.generator_count();
  Natural code = 0;
  const auto& rels = p.relators();
  for (auto it = rels.rbegin(); it != rels.rend(); ++it) {
    const Natural head = gens == 0 ? 0 : rank_of_word(gens, *it);
    const Natural paired = cantor_pair(head, code);
    if (paired == std::numeric_limits<Natural>::max()) throw std::overflow_error("presentation code overflows 64 bits");
    code = paired + 1;
  }
  return cantor_pair(gens, code);
}

}  // namespace torsionkit
