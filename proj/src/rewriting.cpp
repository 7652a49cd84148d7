#include <algorithm>
#include <deque>
#include <unordered_map>

#include "torsionkit/wordproblem.hpp"

namespace torsionkit {

namespace {

using Codes = std::vector<Natural>;

struct CodesHash {
  std::size_t operator()(const Codes& c) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Natural x : c) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

Codes to_codes(const Word& w) {
  Codes out;
  for (const auto& l : w) out.push_back(l.code());
  return out;
}

Word to_word(const Codes& c) {
  std::vector<Letter> letters;
  for (Natural x : c) letters.push_back(Letter::from_code(x));
  return Word(letters);
}

bool shortlex_less(const Codes& a, const Codes& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct Rule {
  Codes lhs;
  Codes rhs;
  Derivation derivation;
  bool cancellation = false;
  bool alive = true;
};

class Engine {
 public:
  explicit Engine(Natural generator_count) {
    for (Natural c = 0; c < 2 * generator_count; ++c) add({c, c ^ 1}, {}, {}, true);
  }

  std::size_t add(Codes lhs, Codes rhs, Derivation d, bool cancellation = false) {
    const std::size_t id = rules_.size();
    max_lhs_ = std::max(max_lhs_, lhs.size());
    index_[lhs] = id;
    rules_.push_back({std::move(lhs), std::move(rhs), std::move(d), cancellation, true});
    return id;
  }

  void kill(std::size_t id) {
    rules_[id].alive = false;
    index_.erase(rules_[id].lhs);
  }

  const std::vector<Rule>& rules() const { return rules_; }
  std::vector<Rule>& rules() { return rules_; }

  // Leftmost-innermost rewriting. When `d` is given it receives a derivation
  // of u * result^-1.
  Codes reduce(const Codes& u, Derivation* d, Natural* steps) const {
    Codes out;
    Codes todo(u.rbegin(), u.rend());
    Codes key;
    while (!todo.empty()) {
      out.push_back(todo.back());
      todo.pop_back();
      const std::size_t top = std::min(max_lhs_, out.size());
      for (std::size_t len = 1; len <= top; ++len) {
        key.assign(out.end() - static_cast<std::ptrdiff_t>(len), out.end());
        auto it = index_.find(key);
        if (it == index_.end()) continue;
        const Rule& r = rules_[it->second];
        out.resize(out.size() - len);
        if (steps) ++*steps;
        if (d && !r.derivation.empty()) {
          const Word prefix_inverse = invert(to_word(out));
          for (const auto& f : conjugate(r.derivation, prefix_inverse)) d->push_back(f);
        }
        todo.insert(todo.end(), r.rhs.rbegin(), r.rhs.rend());
        break;
      }
    }
    return out;
  }

 private:
  std::vector<Rule> rules_;
  std::unordered_map<Codes, std::size_t, CodesHash> index_;
  std::size_t max_lhs_ = 0;
};

struct CriticalPair {
  Codes left;   // result of applying rule i at the front
  Codes right;  // result of applying rule j inside
  Derivation derivation;  // left * right^-1
};

// All critical pairs of (i, j): suffix/prefix overlaps of lhs_i with lhs_j,
// and occurrences of lhs_j inside lhs_i.
std::vector<CriticalPair> critical_pairs(const Rule& a, const Rule& b, bool same) {
  std::vector<CriticalPair> out;
  const Codes& l1 = a.lhs;
  const Codes& l2 = b.lhs;
  // W = l1 + l2[k:], overlap length k.
  for (std::size_t k = 1; k < l2.size() && k < l1.size(); ++k) {
    if (!std::equal(l1.end() - static_cast<std::ptrdiff_t>(k), l1.end(), l2.begin())) continue;
    CriticalPair cp;
    const Codes prefix(l1.begin(), l1.end() - static_cast<std::ptrdiff_t>(k));
    cp.left = a.rhs;
    cp.left.insert(cp.left.end(), l2.begin() + static_cast<std::ptrdiff_t>(k), l2.end());
    cp.right = prefix;
    cp.right.insert(cp.right.end(), b.rhs.begin(), b.rhs.end());
    // W left^-1 = D_a, W right^-1 = p D_b p^-1.
    cp.derivation = inverse(a.derivation);
    for (const auto& f : conjugate(b.derivation, invert(to_word(prefix)))) cp.derivation.push_back(f);
    out.push_back(std::move(cp));
  }
  if (!same && l2.size() <= l1.size()) {
    for (std::size_t pos = 0; pos + l2.size() <= l1.size(); ++pos) {
      if (!std::equal(l2.begin(), l2.end(), l1.begin() + static_cast<std::ptrdiff_t>(pos))) continue;
      CriticalPair cp;
      const Codes prefix(l1.begin(), l1.begin() + static_cast<std::ptrdiff_t>(pos));
      cp.left = a.rhs;
      cp.right = prefix;
      cp.right.insert(cp.right.end(), b.rhs.begin(), b.rhs.end());
      cp.right.insert(cp.right.end(), l1.begin() + static_cast<std::ptrdiff_t>(pos + l2.size()), l1.end());
      cp.derivation = inverse(a.derivation);
      for (const auto& f : conjugate(b.derivation, invert(to_word(prefix)))) cp.derivation.push_back(f);
      out.push_back(std::move(cp));
    }
  }
  return out;
}

Engine engine_for(Natural generator_count, const std::vector<RewritingRule>& rules) {
  Engine e(generator_count);
  for (const auto& r : rules) e.add(to_codes(r.lhs), to_codes(r.rhs), r.derivation);
  return e;
}

}  // namespace

RewritingSystem::RewritingSystem(Natural generator_count, std::vector<RewritingRule> rules)
    : generator_count_(generator_count), rules_(std::move(rules)) {
  for (const auto& r : rules_) max_lhs_ = std::max(max_lhs_, r.lhs.size());
}

Word RewritingSystem::normal_form(const Word& w) const { return reduce(w).first; }

std::pair<Word, Derivation> RewritingSystem::reduce(const Word& w) const {
  const Engine e = engine_for(generator_count_, rules_);
  Derivation d;
  const Codes nf = e.reduce(to_codes(w), &d, nullptr);
  return {to_word(nf), std::move(d)};
}

bool RewritingSystem::locally_confluent() const {
  const Engine e = engine_for(generator_count_, rules_);
  const auto& rules = e.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < rules.size(); ++j) {
      for (const auto& cp : critical_pairs(rules[i], rules[j], i == j)) {
        if (e.reduce(cp.left, nullptr, nullptr) != e.reduce(cp.right, nullptr, nullptr)) return false;
      }
    }
  }
  return true;
}

std::optional<RewritingSystem> kb_complete(const Presentation& p, Natural fuel, Natural* fuel_spent) {
  const Natural gens = p.generator_count();
  Engine e(gens);
  Natural spent = 0;
  struct Equation {
    Codes u, v;
    Derivation d;  // u * v^-1
  };
  std::deque<Equation> pending;
  for (std::size_t i = 0; i < p.relators().size(); ++i) {
    const Word& r = p.relators()[i];
    if (r.empty()) continue;
    pending.push_back({to_codes(r), {}, {DerivationFactor{Word{}, i, 1, r}}});
  }

  auto settle = [&]() -> bool {
    while (!pending.empty()) {
      if (spent >= fuel) return false;
      Equation eq = std::move(pending.front());
      pending.pop_front();
      Derivation du, dv;
      Codes u = e.reduce(eq.u, &du, &spent);
      Codes v = e.reduce(eq.v, &dv, &spent);
      if (u == v) continue;
      // u' v'^-1 = (u' u^-1)(u v^-1)(v v'^-1)
      Derivation d = inverse(du);
      d.insert(d.end(), eq.d.begin(), eq.d.end());
      d.insert(d.end(), dv.begin(), dv.end());
      if (shortlex_less(u, v)) {
        std::swap(u, v);
        d = inverse(d);
      }
      const std::size_t id = e.add(u, v, std::move(d));
      // Interreduce the other rules against the new one.
      for (std::size_t j = 0; j < id; ++j) {
        auto& r = e.rules()[j];
        if (!r.alive) continue;
        const Codes& l = e.rules()[id].lhs;
        const bool lhs_reducible = std::search(r.lhs.begin(), r.lhs.end(), l.begin(), l.end()) != r.lhs.end();
        if (lhs_reducible) {
          pending.push_back({r.lhs, r.rhs, r.derivation});
          e.kill(j);
          continue;
        }
        Derivation dr;
        Codes rhs = e.reduce(r.rhs, &dr, &spent);
        if (rhs != r.rhs) {
          auto& rr = e.rules()[j];
          rr.rhs = std::move(rhs);
          rr.derivation.insert(rr.derivation.end(), dr.begin(), dr.end());
        }
      }
    }
    return true;
  };

  std::size_t next = 0;
  while (true) {
    if (!settle()) {
      if (fuel_spent) *fuel_spent = spent;
      return std::nullopt;
    }
    if (next >= e.rules().size()) break;
    const std::size_t i = next++;
    for (std::size_t j = 0; j <= i; ++j) {
      if (!e.rules()[i].alive) break;
      if (!e.rules()[j].alive) continue;
      for (int order = 0; order < (i == j ? 1 : 2); ++order) {
        const Rule a = order == 0 ? e.rules()[i] : e.rules()[j];
        const Rule b = order == 0 ? e.rules()[j] : e.rules()[i];
        for (auto& cp : critical_pairs(a, b, i == j)) {
          if (spent >= fuel) {
            if (fuel_spent) *fuel_spent = spent;
            return std::nullopt;
          }
          ++spent;
          pending.push_back({std::move(cp.left), std::move(cp.right), std::move(cp.derivation)});
        }
      }
      if (!settle()) {
        if (fuel_spent) *fuel_spent = spent;
        return std::nullopt;
      }
    }
  }
  if (fuel_spent) *fuel_spent = spent;
  std::vector<RewritingRule> rules;
  for (const auto& r : e.rules()) {
    if (!r.alive || r.cancellation) continue;
    rules.push_back({to_word(r.lhs), to_word(r.rhs), r.derivation});
  }
  std::sort(rules.begin(), rules.end(), [](const auto& a, const auto& b) { return a.lhs < b.lhs; });
  return RewritingSystem(gens, std::move(rules));
}

Verdict kb_decide(const RewritingSystem& system, const Word& w) {
  auto [nf, d] = system.reduce(w);
  Verdict v;
  if (nf.empty()) {
    v.status = Status::proved;
    v.certificate = TrivialityDerivation{w, std::move(d)};
  } else {
    v.status = Status::refuted;
    v.certificate = RewritingCertificate{system.rules(), w, nf};
  }
  return v;
}

}  // namespace torsionkit
