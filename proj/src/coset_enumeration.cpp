#include <algorithm>
#include <numeric>

#include "torsionkit/wordproblem.hpp"

namespace torsionkit {

namespace {

constexpr Natural kNone = kUndefinedCoset;

class Enumerator {
 public:
  Enumerator(Natural generator_count, Natural max_cosets) : columns_(2 * generator_count), max_(max_cosets) {
    add_row();
  }

  bool overflowed() const { return overflow_; }
  Natural live() const { return live_; }
  bool alive(Natural c) const { return parent_[c] == c; }
  Natural rows() const { return table_.size(); }

  void scan_and_fill(Natural a, const std::vector<Natural>& w) {
    if (w.empty()) return;
    while (true) {
      Natural f = a, b = a;
      std::size_t i = 0, j = w.size();
      while (i < j && table_[f][w[i]] != kNone) f = table_[f][w[i++]];
      if (i == j) {
        if (f != a) coincidence(f, a);
        return;
      }
      while (j > i && table_[b][w[j - 1] ^ 1] != kNone) b = table_[b][w[--j] ^ 1];
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        table_[f][w[i]] = b;
        table_[b][w[i] ^ 1] = f;
        return;
      }
      if (!define(f, w[i])) return;
    }
  }

  // Scan without defining new cosets; records deductions and coincidences.
  void scan(Natural a, const std::vector<Natural>& w) {
    if (w.empty()) return;
    Natural f = a, b = a;
    std::size_t i = 0, j = w.size();
    while (i < j && table_[f][w[i]] != kNone) f = table_[f][w[i++]];
    if (i == j) {
      if (f != a) coincidence(f, a);
      return;
    }
    while (j > i && table_[b][w[j - 1] ^ 1] != kNone) b = table_[b][w[--j] ^ 1];
    if (j == i) {
      coincidence(f, b);
    } else if (j == i + 1) {
      table_[f][w[i]] = b;
      table_[b][w[i] ^ 1] = f;
    }
  }

  bool define(Natural c, Natural x) {
    if (live_ >= max_) {
      overflow_ = true;
      return false;
    }
    const Natural n = add_row();
    table_[c][x] = n;
    table_[n][x ^ 1] = c;
    return true;
  }

  void clear_overflow() { overflow_ = false; }

  Natural entry(Natural c, Natural x) const { return table_[c][x]; }
  Natural columns() const { return columns_; }

  CosetTable compact(Natural generator_count) const {
    std::vector<Natural> number(table_.size(), kNone);
    Natural next = 0;
    for (Natural c = 0; c < table_.size(); ++c)
      if (alive(c)) number[c] = next++;
    CosetTable t;
    t.generator_count = generator_count;
    t.complete = true;
    for (Natural c = 0; c < table_.size(); ++c) {
      if (!alive(c)) continue;
      std::vector<Natural> row(columns_);
      for (Natural x = 0; x < columns_; ++x) {
        row[x] = table_[c][x] == kNone ? kNone : number[table_[c][x]];
        if (row[x] == kNone) t.complete = false;
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }

 private:
  Natural add_row() {
    const Natural n = table_.size();
    table_.emplace_back(columns_, kNone);
    parent_.push_back(n);
    ++live_;
    return n;
  }

  Natural rep(Natural c) {
    Natural r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      const Natural next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(Natural a, Natural b, std::vector<Natural>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    --live_;
    queue.push_back(b);
  }

  void coincidence(Natural a, Natural b) {
    std::vector<Natural> queue;
    merge(a, b, queue);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Natural e = queue[q];
      for (Natural x = 0; x < columns_; ++x) {
        const Natural f = table_[e][x];
        if (f == kNone) continue;
        table_[f][x ^ 1] = kNone;
        const Natural e1 = rep(e), f1 = rep(f);
        if (table_[e1][x] != kNone) {
          merge(f1, table_[e1][x], queue);
        } else if (table_[f1][x ^ 1] != kNone) {
          merge(e1, table_[f1][x ^ 1], queue);
        } else {
          table_[e1][x] = f1;
          table_[f1][x ^ 1] = e1;
        }
      }
    }
  }

  Natural columns_;
  Natural max_;
  std::vector<std::vector<Natural>> table_;
  std::vector<Natural> parent_;
  Natural live_ = 0;
  bool overflow_ = false;
};

std::vector<Natural> codes(const Word& w) {
  std::vector<Natural> out;
  for (const auto& l : w) out.push_back(l.code());
  return out;
}

}  // namespace

std::optional<CosetTable> todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup,
                                       Natural max_cosets) {
  const Natural gens = p.generator_count();
  std::vector<std::vector<Natural>> relators;
  for (const auto& r : p.relators()) {
    if (!r.empty()) relators.push_back(codes(r));
  }
  if (max_cosets == 0) return std::nullopt;
  Enumerator e(gens, max_cosets);

  auto lookahead = [&] {
    e.clear_overflow();
    for (Natural c = 0; c < e.rows(); ++c) {
      for (const auto& r : relators) {
        if (!e.alive(c)) break;
        e.scan(c, r);
      }
    }
  };

  // Returns false when the coset limit cannot be met even after lookahead.
  auto run_with_lookahead = [&](auto&& step) {
    while (true) {
      step();
      if (!e.overflowed()) return true;
      lookahead();
      if (e.live() >= max_cosets) return false;
    }
  };

  for (const auto& h : subgroup) {
    p.check_word(h);
    const auto w = codes(h);
    if (!run_with_lookahead([&] { e.scan_and_fill(0, w); })) return std::nullopt;
  }
  for (Natural c = 0; c < e.rows(); ++c) {
    for (const auto& r : relators) {
      if (!e.alive(c)) break;
      if (!run_with_lookahead([&] {
            if (e.alive(c)) e.scan_and_fill(c, r);
          }))
        return std::nullopt;
    }
    for (Natural x = 0; x < e.columns(); ++x) {
      if (!e.alive(c)) break;
      if (e.entry(c, x) != kNone) continue;
      if (!run_with_lookahead([&] {
            if (e.alive(c) && e.entry(c, x) == kNone) e.define(c, x);
          }))
        return std::nullopt;
    }
  }
  auto table = e.compact(gens);
  if (!table.complete) return std::nullopt;
  return table;
}

}  // namespace torsionkit
