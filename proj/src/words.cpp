#include "torsionkit/words.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

namespace torsionkit {

namespace {

constexpr Natural kSaturated = std::numeric_limits<Natural>::max();

Natural saturating_mul(Natural a, Natural b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

Natural saturating_add(Natural a, Natural b) {
  return (b > kSaturated - a) ? kSaturated : a + b;
}

// All reduced words of the given weight, in length-then-lex order.
std::vector<Word> weight_level(Natural weight) {
  std::vector<std::vector<Natural>> found;
  std::vector<Natural> codes;
  auto extend = [&](auto&& self, Natural remaining) -> void {
    if (remaining == 0) {
      found.push_back(codes);
      return;
    }
    for (Natural code = 0; code + 1 <= remaining; ++code) {
      if (!codes.empty() && (codes.back() ^ 1U) == code) continue;
      codes.push_back(code);
      self(self, remaining - (code + 1));
      codes.pop_back();
    }
  };
  extend(extend, weight);
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<Word> level;
  level.reserve(found.size());
  for (const auto& seq : found) {
    std::vector<Letter> letters;
    letters.reserve(seq.size());
    for (Natural code : seq) letters.push_back(Letter::from_code(code));
    level.emplace_back(letters);
  }
  return level;
}

}  // namespace

std::string GeneratorId::name() const { return "x" + std::to_string(index); }

Letter::Letter(Natural generator_index, int s) : generator{generator_index} {
  if (s != 1 && s != -1) throw std::invalid_argument("letter sign must be +1 or -1");
  sign = static_cast<std::int8_t>(s);
}

Letter Letter::from_code(Natural code) { return Letter(code / 2, (code % 2) ? -1 : 1); }

Word::Word(std::initializer_list<Letter> letters)
    : Word(std::span<const Letter>(letters.begin(), letters.size())) {}

Word::Word(std::span<const Letter> letters) : letters_(free_reduce(letters).letters_) {}

Word Word::generator(Natural index, std::int64_t exponent) {
  std::vector<Letter> letters;
  const int sign = exponent < 0 ? -1 : 1;
  const std::uint64_t count =
      exponent < 0 ? static_cast<std::uint64_t>(-(exponent + 1)) + 1 : static_cast<std::uint64_t>(exponent);
  letters.assign(count, Letter(index, sign));
  return Word(Reduced{}, std::move(letters));
}

Natural Word::alphabet_bound() const {
  Natural bound = 0;
  for (const auto& l : letters_) bound = std::max(bound, l.generator.index + 1);
  return bound;
}

std::vector<Natural> Word::support() const {
  std::vector<Natural> gens;
  gens.reserve(letters_.size());
  for (const auto& l : letters_) gens.push_back(l.generator.index);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

bool Word::is_cyclically_reduced() const {
  return letters_.size() < 2 || letters_.front() != letters_.back().inverted();
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Word free_reduce(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (const auto& l : raw) {
    if (!out.empty() && out.back() == l.inverted()) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(Word::Reduced{}, std::move(out));
}

Word invert(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(it->inverted());
  return Word(out);
}

Word concat(const Word& u, const Word& v) {
  std::vector<Letter> raw;
  raw.reserve(u.size() + v.size());
  raw.insert(raw.end(), u.begin(), u.end());
  raw.insert(raw.end(), v.begin(), v.end());
  return free_reduce(raw);
}

Word power(const Word& w, std::int64_t n) {
  if (n == 0 || w.empty()) return {};
  const Word base = n < 0 ? invert(w) : w;
  const std::uint64_t count =
      n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  // Conjugate the cyclically reduced core so the result is built directly.
  auto [core, conj] = cyclic_reduce(base);
  std::vector<Letter> raw;
  raw.reserve(conj.size() * 2 + core.size() * count);
  raw.insert(raw.end(), conj.begin(), conj.end());
  for (std::uint64_t i = 0; i < count; ++i) raw.insert(raw.end(), core.begin(), core.end());
  const Word conj_inv = invert(conj);
  raw.insert(raw.end(), conj_inv.begin(), conj_inv.end());
  return free_reduce(raw);
}

Word conjugate(const Word& w, const Word& by) {
  if (w.empty()) return {};
  const Word by_inv = invert(by);
  std::vector<Letter> raw;
  raw.reserve(by.size() * 2 + w.size());
  raw.insert(raw.end(), by_inv.begin(), by_inv.end());
  raw.insert(raw.end(), w.begin(), w.end());
  raw.insert(raw.end(), by.begin(), by.end());
  return free_reduce(raw);
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inverted()) {
    ++lo;
    --hi;
  }
  const auto letters = w.letters();
  return {Word(letters.subspan(lo, hi - lo)), Word(letters.subspan(0, lo))};
}

Natural count_reduced_words(Natural alphabet_size, Natural length) {
  if (length == 0) return 1;
  if (alphabet_size == 0) return 0;
  Natural count = 2 * alphabet_size;
  for (Natural i = 1; i < length; ++i) count = saturating_mul(count, 2 * alphabet_size - 1);
  return count;
}

namespace {

Word unrank_finite(Natural n, Natural rank) {
  if (rank == 0) return {};
  if (n == 0) throw std::out_of_range("the empty alphabet has a single word");
  Natural length = 1;
  Natural remaining = rank - 1;
  while (true) {
    const Natural c = count_reduced_words(n, length);
    if (remaining < c) break;
    remaining -= c;
    ++length;
  }
  // Mixed-radix digits: first letter has 2n choices, the rest 2n-1.
  std::vector<Natural> digits(length);
  for (Natural i = length; i-- > 1;) {
    digits[i] = remaining % (2 * n - 1);
    remaining /= (2 * n - 1);
  }
  digits[0] = remaining;
  std::vector<Letter> letters;
  letters.reserve(length);
  Natural prev = digits[0];
  letters.push_back(Letter::from_code(prev));
  for (Natural i = 1; i < length; ++i) {
    const Natural forbidden = prev ^ 1U;
    const Natural code = digits[i] < forbidden ? digits[i] : digits[i] + 1;
    letters.push_back(Letter::from_code(code));
    prev = code;
  }
  return Word(letters);
}

}  // namespace

Word enumerate_words(std::optional<Natural> alphabet_size, Natural rank) {
  if (alphabet_size) return unrank_finite(*alphabet_size, rank);
  if (rank == 0) return {};
  Natural seen = 1;
  for (Natural weight = 1;; ++weight) {
    auto level = weight_level(weight);
    if (rank < seen + level.size()) return level[rank - seen];
    seen += level.size();
  }
}

Natural rank_of_word(Natural alphabet_size, const Word& w) {
  if (w.empty()) return 0;
  if (w.alphabet_bound() > alphabet_size) throw std::invalid_argument("word outside alphabet");
  Natural rank = 1;
  for (Natural len = 1; len < w.size(); ++len) rank = saturating_add(rank, count_reduced_words(alphabet_size, len));
  Natural value = w[0].code();
  for (std::size_t i = 1; i < w.size(); ++i) {
    const Natural forbidden = w[i - 1].code() ^ 1U;
    const Natural code = w[i].code();
    const Natural digit = code < forbidden ? code : code - 1;
    value = saturating_add(saturating_mul(value, 2 * alphabet_size - 1), digit);
  }
  return saturating_add(rank, value);
}

WordEnumerator::WordEnumerator(std::optional<Natural> alphabet_size) : alphabet_size_(alphabet_size) {}

Word WordEnumerator::next() {
  if (alphabet_size_) return unrank_finite(*alphabet_size_, rank_++);
  ++rank_;
  if (rank_ == 1) return {};
  while (level_pos_ >= level_words_.size()) {
    level_words_ = weight_level(++level_);
    level_pos_ = 0;
  }
  return level_words_[level_pos_++];
}

NameTable::NameTable(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty() || n == "1" || n.find_first_of("^ \t\r\n") != std::string::npos) {
      throw ParseError("invalid generator name '" + n + "'");
    }
    if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(i), n) !=
        names_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ParseError("duplicate generator name '" + n + "'");
    }
  }
}

std::string NameTable::name(Natural index) const {
  if (index < names_.size()) return names_[index];
  return GeneratorId{index}.name();
}

std::optional<Natural> NameTable::lookup(std::string_view name) const {
  if (!names_.empty()) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }
  if (name.size() < 2 || name[0] != 'x') return std::nullopt;
  Natural index = 0;
  const auto* first = name.data() + 1;
  const auto* last = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(first, last, index);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  if (name.size() > 2 && name[1] == '0') return std::nullopt;
  return index;
}

Word parse_word(std::string_view text, const NameTable& names) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  if (tokens.empty()) throw ParseError("empty word text (the identity is spelled '1')");
  if (tokens.size() == 1 && tokens[0] == "1") return {};
  std::vector<Letter> raw;
  for (const auto& tok : tokens) {
    const auto caret = tok.find('^');
    const std::string name = tok.substr(0, caret);
    const auto index = names.lookup(name);
    if (!index) throw ParseError("unknown generator '" + name + "'");
    if (caret == std::string::npos) {
      raw.emplace_back(*index, 1);
      continue;
    }
    const std::string exp = tok.substr(caret + 1);
    if (exp == "-1") {
      raw.emplace_back(*index, -1);
      continue;
    }
    Natural k = 0;
    auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), k);
    if (exp.empty() || ec != std::errc{} || ptr != exp.data() + exp.size() || k == 0) {
      throw ParseError("bad exponent in '" + tok + "'");
    }
    raw.insert(raw.end(), k, Letter(*index, 1));
  }
  return free_reduce(raw);
}

std::string format_word(const Word& w, const NameTable& names) {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    if (!out.empty()) out += ' ';
    const Letter l = w[i];
    if (l.inverse()) {
      out += names.name(l.generator.index) + "^-1";
      ++i;
      continue;
    }
    std::size_t run = 1;
    while (i + run < w.size() && w[i + run] == l) ++run;
    out += names.name(l.generator.index);
    if (run > 1) out += "^" + std::to_string(run);
    i += run;
  }
  return out;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& l : w) {
    h ^= static_cast<std::size_t>(l.code());
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace torsionkit
