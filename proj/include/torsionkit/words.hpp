#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace torsionkit {

using Natural = std::uint64_t;

/// Thrown by every text parser in the library (words, programs, presentations).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorId {
  Natural index = 0;

  /// Default display name, `x<index>`.
  std::string name() const;

  friend auto operator<=>(const GeneratorId&, const GeneratorId&) = default;
};

/// A generator or its inverse. `sign` is +1 or -1.
struct Letter {
  GeneratorId generator;
  std::int8_t sign = 1;

  Letter() = default;
  Letter(Natural generator_index, int sign);

  bool inverse() const { return sign < 0; }
  Letter inverted() const { return Letter(generator.index, -sign); }

  /// Position in the frozen letter order x0 < x0^-1 < x1 < x1^-1 < ...
  Natural code() const { return 2 * generator.index + (inverse() ? 1 : 0); }
  static Letter from_code(Natural code);

  friend bool operator==(const Letter&, const Letter&) = default;
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    return a.code() <=> b.code();
  }
};

/// A freely reduced word. Construction always reduces, so equal group
/// elements of the free group compare equal.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters);
  explicit Word(std::span<const Letter> letters);

  /// Generator `index` raised to `exponent` (any sign).
  static Word generator(Natural index, std::int64_t exponent = 1);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  /// Largest generator index used plus one; 0 for the empty word.
  Natural alphabet_bound() const;
  /// Sorted, de-duplicated generator indices occurring in the word.
  std::vector<Natural> support() const;

  bool is_cyclically_reduced() const;

  friend bool operator==(const Word&, const Word&) = default;
  /// Shortlex over the letter order.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  struct Reduced {};
  Word(Reduced, std::vector<Letter> letters) : letters_(std::move(letters)) {}
  friend Word free_reduce(std::span<const Letter> raw);

  std::vector<Letter> letters_;
};

Word free_reduce(std::span<const Letter> raw);
Word invert(const Word& w);
Word concat(const Word& u, const Word& v);
Word power(const Word& w, std::int64_t n);
/// by^-1 * w * by
Word conjugate(const Word& w, const Word& by);
/// Removes the longest prefix c with w = c u c^-1; returns (u, c).
std::pair<Word, Word> cyclic_reduce(const Word& w);

/// Number of freely reduced words of exactly `length` over `alphabet_size`
/// generators, saturating at UINT64_MAX.
Natural count_reduced_words(Natural alphabet_size, Natural length);

/// Length-lexicographic ranking of reduced words (finite alphabet) or the
/// weight ranking (unbounded alphabet, `alphabet_size` empty). Rank 0 is the
/// empty word. For the unbounded order a word's weight is the sum of
/// `code + 1` over its letters; words are ordered by weight, then length,
/// then lexicographically.
Word enumerate_words(std::optional<Natural> alphabet_size, Natural rank);

/// Sequential cursor over `enumerate_words`; cheaper than re-ranking when
/// walking ranks 0, 1, 2, ...
class WordEnumerator {
 public:
  explicit WordEnumerator(std::optional<Natural> alphabet_size);
  Word next();
  Natural rank() const { return rank_; }

 private:
  std::optional<Natural> alphabet_size_;
  Natural rank_ = 0;
  Natural level_ = 0;
  std::vector<Word> level_words_;
  std::size_t level_pos_ = 0;
};

/// Inverse of `enumerate_words` for finite alphabets.
Natural rank_of_word(Natural alphabet_size, const Word& w);

/// Maps generator indices to display names. Without custom names the
/// generator with index i is spelled `x<i>`.
class NameTable {
 public:
  NameTable() = default;
  explicit NameTable(std::vector<std::string> names);

  bool has_custom_names() const { return !names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  std::string name(Natural index) const;
  std::optional<Natural> lookup(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

/// Text syntax: whitespace-separated letters `name`, `name^-1` or `name^k`
/// (k >= 1); the empty word is spelled `1`.
Word parse_word(std::string_view text, const NameTable& names = {});
std::string format_word(const Word& w, const NameTable& names = {});

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace torsionkit

template <>
struct std::hash<torsionkit::Word> : torsionkit::WordHash {};
