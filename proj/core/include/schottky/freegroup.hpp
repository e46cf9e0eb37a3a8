#pragma once

// Reduced-word combinatorics of the free group F_g.
//
// Letters are ordered canonically as
//   a_1 < a_2 < ... < a_g < a_1^{-1} < ... < a_g^{-1}
// and every enumeration in the library is lexicographic in that order.
// Words serialize as dot-separated tokens, `a3` for a generator and `a3'`
// for its inverse; the empty word is `e`.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace schottky {

class Letter {
 public:
  /// \p generator is 1-based.
  constexpr Letter(int generator, bool inverted = false) noexcept
      : generator_(static_cast<std::int16_t>(generator)), inverted_(inverted) {}

  constexpr int generator() const noexcept { return generator_; }
  constexpr bool inverted() const noexcept { return inverted_; }
  constexpr Letter inverse() const noexcept { return Letter(generator_, !inverted_); }

  /// Position in the canonical order of the 2g-letter alphabet.
  constexpr int code(int rank) const noexcept {
    return inverted_ ? rank + generator_ - 1 : generator_ - 1;
  }
  static constexpr Letter from_code(int rank, int code) noexcept {
    return code < rank ? Letter(code + 1, false) : Letter(code - rank + 1, true);
  }

  std::string str() const;

  friend constexpr bool operator==(Letter, Letter) noexcept = default;
  friend constexpr std::strong_ordering operator<=>(Letter x, Letter y) noexcept {
    if (x.inverted_ != y.inverted_) return x.inverted_ <=> y.inverted_;
    return x.generator_ <=> y.generator_;
  }

 private:
  std::int16_t generator_;
  bool inverted_;
};

/// A reduced word. The empty word is the identity e.
///
/// Ordering is shortlex: shorter words first, equal lengths compared
/// lexicographically in the canonical letter order.
class Word {
 public:
  Word() = default;

  /// Throws InputError if \p letters is not reduced.
  static Word from_letters(std::vector<Letter> letters);
  /// Parses `a1.a2'.a1`, or `e` / the empty string for the identity.
  static Word parse(std::string_view text);

  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Letter initial() const;
  Letter terminal() const;
  Word prefix(std::size_t n) const;
  /// The word with its first letter removed.
  Word tail() const;

  /// Whether `this · l` is reduced.
  bool admits(Letter l) const noexcept {
    return letters_.empty() || letters_.back() != l.inverse();
  }
  /// `this · l`; throws InputError if that would not be reduced.
  Word appended(Letter l) const;
  /// `l · this`; throws InputError if that would not be reduced.
  Word prepended(Letter l) const;

  /// Largest generator index appearing in the word, 0 for e.
  int max_generator() const noexcept;

  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& x, const Word& y);

 private:
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

/// Free reduction of an arbitrary letter sequence.
Word reduce(std::span<const Letter> sequence);

/// w ⊆ v: w is a prefix of v.
bool extends(const Word& w, const Word& v);
/// w ⊂ v: proper prefix.
bool strictly_extends(const Word& w, const Word& v);

/// The ⊆-larger of two comparable words, so that the cylinders satisfy
/// →w ∩ →v = →max(w,v). Empty optional when the cylinders are disjoint.
std::optional<Word> max_word(const Word& w, const Word& v);

struct DepthLimits {
  int max_depth = 10;
  std::uint64_t max_words = std::uint64_t{1} << 24;
};

/// Number of reduced words of length n, 2g(2g-1)^{n-1} (1 for n = 0).
/// Throws DepthCapError on 64-bit overflow.
std::uint64_t word_count(int rank, int length);

/// Throws DepthCapError when depth or the word count at that depth is over
/// the limits, InputError for rank < 2 or negative depth.
void check_depth(int rank, int depth, const DepthLimits& limits = {});

/// Throws InputError for rank < 2 or when \p w uses a generator above rank.
void require_rank(int rank, const Word& w);

std::vector<Letter> alphabet(int rank);

/// Letters l with w·l reduced, in canonical order. For w = e this is the
/// whole alphabet, otherwise 2g - 1 letters.
std::vector<Letter> admissible_extensions(int rank, const Word& w);

/// All reduced words of exact length n in canonical lexicographic order.
std::vector<Word> enumerate_words(int rank, int length, const DepthLimits& limits = {});

/// Position of w in enumerate_words(rank, |w|). The children of the word at
/// rank r (length >= 1) occupy ranks r(2g-1) .. r(2g-1) + 2g-2 one level down.
std::size_t word_rank(int rank, const Word& w);
Word word_unrank(int rank, int length, std::size_t index);

enum class DropRule { greatest, least };
enum class LevelOrder { lexicographic, reverse_lexicographic };

/// Which admissible letter is left out of S and of every V_w, and how each
/// level I_n - I_{n-1} is enumerated for Gram-Schmidt.
struct IndexSetPolicy {
  DropRule drop = DropRule::greatest;
  LevelOrder order = LevelOrder::lexicographic;

  friend bool operator==(const IndexSetPolicy&, const IndexSetPolicy&) = default;
};

/// The nested index sets I_0 ⊂ I_1 ⊂ ... ⊂ I_N. Level n holds the words of
/// I_n - I_{n-1}, all of length n, in the policy's enumeration order.
class IndexSetFamily {
 public:
  int rank() const noexcept { return rank_; }
  int depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  const IndexSetPolicy& policy() const noexcept { return policy_; }

  const std::vector<Word>& level(int n) const;
  /// |I_n|.
  std::size_t cumulative_size(int n) const;
  bool contains(const Word& w) const;

  friend bool operator==(const IndexSetFamily&, const IndexSetFamily&) = default;

 private:
  friend IndexSetFamily build_index_sets(int, int, const IndexSetPolicy&, const DepthLimits&);
  int rank_ = 0;
  IndexSetPolicy policy_;
  std::vector<std::vector<Word>> levels_;
};

IndexSetFamily build_index_sets(int rank, int depth, const IndexSetPolicy& policy = {},
                                const DepthLimits& limits = {});

}  // namespace schottky
