#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "torsionkit/stream.hpp"
#include "torsionkit/words.hpp"

namespace torsionkit {

using BigInt = boost::multiprecision::cpp_int;

enum class PresentationClass { finite, recursive, countable };

std::string to_string(PresentationClass c);

/// A group presentation in one of three classes: finitely many generators
/// and relators; finitely many generators with a relator stream; or
/// generators x0, x1, ... (all naturals) with a relator stream.
///
/// Every presentation exposes its relators as a stream (finite ones stream
/// their list and then end). Presentations built by the library also carry a
/// recipe, the base relators plus `stream:` constructor lines, from which the
/// text format can rebuild them.
class Presentation {
 public:
  static Presentation finite(Natural generator_count, std::vector<Word> relators,
                             std::vector<std::string> names = {});
  static Presentation recursive(Natural generator_count, RelatorStream relators,
                                std::vector<std::string> names = {});
  static Presentation countable(RelatorStream relators);

  PresentationClass presentation_class() const { return class_; }
  bool is_finite() const { return class_ == PresentationClass::finite; }
  bool has_finite_alphabet() const { return class_ != PresentationClass::countable; }
  /// Throws std::logic_error for countable presentations.
  Natural generator_count() const;
  const NameTable& names() const { return names_; }
  /// Throws std::logic_error unless finite.
  const std::vector<Word>& relators() const;
  const RelatorStream& stream() const { return stream_; }

  /// Throws std::invalid_argument when `w` uses a generator outside the
  /// alphabet.
  void check_word(const Word& w) const;

  const std::vector<Word>& base_relators() const { return base_relators_; }
  const std::vector<std::string>& constructors() const { return constructors_; }
  bool serializable() const { return serializable_; }
  /// Replaces the recipe; `constructors` are `stream:` lines without the
  /// prefix, e.g. "kt 2".
  Presentation with_recipe(std::vector<Word> base, std::vector<std::string> constructors,
                           bool serializable = true) const;

  friend bool operator==(const Presentation& a, const Presentation& b);

 private:
  PresentationClass class_ = PresentationClass::finite;
  Natural generator_count_ = 0;
  NameTable names_;
  std::vector<Word> relators_;
  RelatorStream stream_;
  std::vector<Word> base_relators_;
  std::vector<std::string> constructors_;
  bool serializable_ = true;
};

/// A deterministic, possibly infinite sequence of presentations.
struct PresentationSequence {
  std::function<Presentation(Natural)> at;
  std::optional<Natural> length;  // std::nullopt: infinite
  std::string description;
};

/// Disjoint union of generators and relators. All-finite inputs give a finite
/// presentation with generators renumbered by offset; any stream-backed part
/// gives a recursive presentation (relators interleaved round-robin); any
/// countable part gives a countable presentation where generator j of part i
/// becomes j * parts + i.
Presentation free_product(const std::vector<Presentation>& parts);

/// Offsets used by `free_product` for finite-alphabet parts.
std::vector<Natural> free_product_offsets(const std::vector<Presentation>& parts);

/// Free product of a stream of presentations. Generator j of part i becomes
/// generator cantor_pair(i, j). Relators are dovetailed diagonally: stage s
/// pulls the next item of each part i <= s, in order of i.
Presentation free_product_stream(const PresentationSequence& parts);

/// <X | R, w^k for all w>: R interleaved with the k-th powers of all words
/// over the alphabet, in enumeration order. Rejects k = 0.
Presentation k_torsion_quotient(const Presentation& p, Natural k);

/// Elementary divisors of the relator exponent-sum matrix: the nontrivial
/// invariant factors d1 | d2 | ..., followed by one 0 per free rank.
std::vector<BigInt> abelianization_invariants(const Presentation& p);

/// Smith normal form diagonal (invariant factors, zeros last) of an integer
/// matrix given row-major.
std::vector<BigInt> smith_diagonal(std::vector<std::vector<BigInt>> matrix);

/// Finite presentation at `rank` in the enumeration
///   rank = <generator count, list code>, list code 0 = [],
///   list code c > 0 = [h] ++ list(t) where <h, t> = c - 1,
/// with each h decoded as enumerate_words(generator count, h). With zero
/// generators every h decodes to the empty word, so ranks repeat.
Presentation enumerate_finite_presentations(Natural rank);
/// Rank of a finite presentation in that enumeration. Throws
/// std::overflow_error past 64 bits.
Natural encode_finite_presentation(const Presentation& p);

}  // namespace torsionkit
