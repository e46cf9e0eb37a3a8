#include "schottky/freegroup.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include <fmt/format.h>

#include "schottky/error.hpp"

namespace schottky {

std::string Letter::str() const {
  return fmt::format("a{}{}", generator_, inverted_ ? "'" : "");
}

Word Word::from_letters(std::vector<Letter> letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (letters[i].generator() < 1) throw InputError("letter with generator index < 1");
    if (i > 0 && letters[i] == letters[i - 1].inverse()) {
      throw InputError(fmt::format("word is not reduced at position {}", i));
    }
  }
  return Word(std::move(letters));
}

Word Word::parse(std::string_view text) {
  if (text.empty() || text == "e") return Word();
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    std::string_view token = text.substr(pos, dot - pos);
    bool inverted = false;
    if (!token.empty() && token.back() == '\'') {
      inverted = true;
      token.remove_suffix(1);
    }
    if (token.size() < 2 || token.front() != 'a') {
      throw InputError(fmt::format("bad letter token '{}' in word '{}'", token, text));
    }
    int generator = 0;
    auto [end, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), generator);
    if (ec != std::errc() || end != token.data() + token.size() || generator < 1) {
      throw InputError(fmt::format("bad letter token '{}' in word '{}'", token, text));
    }
    letters.emplace_back(generator, inverted);
    pos = dot + 1;
  }
  return from_letters(std::move(letters));
}

Letter Word::initial() const {
  if (empty()) throw InputError("initial letter of the empty word");
  return letters_.front();
}

Letter Word::terminal() const {
  if (empty()) throw InputError("terminal letter of the empty word");
  return letters_.back();
}

Word Word::prefix(std::size_t n) const {
  if (n >= letters_.size()) return *this;
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Word Word::tail() const {
  if (empty()) return *this;
  return Word(std::vector<Letter>(letters_.begin() + 1, letters_.end()));
}

Word Word::appended(Letter l) const {
  if (!admits(l)) throw InputError(fmt::format("{}·{} is not reduced", str(), l.str()));
  auto letters = letters_;
  letters.push_back(l);
  return Word(std::move(letters));
}

Word Word::prepended(Letter l) const {
  if (!empty() && letters_.front() == l.inverse()) {
    throw InputError(fmt::format("{}·{} is not reduced", l.str(), str()));
  }
  std::vector<Letter> letters;
  letters.reserve(letters_.size() + 1);
  letters.push_back(l);
  letters.insert(letters.end(), letters_.begin(), letters_.end());
  return Word(std::move(letters));
}

int Word::max_generator() const noexcept {
  int m = 0;
  for (auto l : letters_) m = std::max(m, l.generator());
  return m;
}

std::string Word::str() const {
  if (empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += '.';
    out += letters_[i].str();
  }
  return out;
}

std::strong_ordering operator<=>(const Word& x, const Word& y) {
  if (auto c = x.length() <=> y.length(); c != 0) return c;
  return std::lexicographical_compare_three_way(x.letters_.begin(), x.letters_.end(),
                                                y.letters_.begin(), y.letters_.end());
}

Word reduce(std::span<const Letter> sequence) {
  std::vector<Letter> stack;
  stack.reserve(sequence.size());
  for (auto l : sequence) {
    if (!stack.empty() && stack.back() == l.inverse()) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word::from_letters(std::move(stack));
}

bool extends(const Word& w, const Word& v) {
  if (w.length() > v.length()) return false;
  auto a = w.letters();
  auto b = v.letters();
  return std::equal(a.begin(), a.end(), b.begin());
}

bool strictly_extends(const Word& w, const Word& v) {
  return w.length() < v.length() && extends(w, v);
}

std::optional<Word> max_word(const Word& w, const Word& v) {
  if (extends(w, v)) return v;
  if (extends(v, w)) return w;
  return std::nullopt;
}

std::uint64_t word_count(int rank, int length) {
  if (rank < 1) throw InputError("rank must be positive");
  if (length < 0) throw InputError("negative word length");
  if (length == 0) return 1;
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 2 * static_cast<std::uint64_t>(rank);
  const std::uint64_t branch = 2 * static_cast<std::uint64_t>(rank) - 1;
  for (int i = 1; i < length; ++i) {
    if (count > max / branch) {
      throw DepthCapError(fmt::format("word count overflows at rank {} length {}", rank, length));
    }
    count *= branch;
  }
  return count;
}

void check_depth(int rank, int depth, const DepthLimits& limits) {
  if (rank < 2) throw InputError(fmt::format("rank {} < 2", rank));
  if (depth < 0) throw InputError("negative depth");
  if (depth > limits.max_depth) {
    throw DepthCapError(fmt::format("depth {} exceeds the cap {}", depth, limits.max_depth));
  }
  if (word_count(rank, depth) > limits.max_words) {
    throw DepthCapError(fmt::format("{} words at rank {} depth {} exceed the cap {}",
                                    word_count(rank, depth), rank, depth, limits.max_words));
  }
}

void require_rank(int rank, const Word& w) {
  if (rank < 2) throw InputError(fmt::format("rank {} < 2", rank));
  if (w.max_generator() > rank) {
    throw InputError(fmt::format("word {} uses a generator above rank {}", w.str(), rank));
  }
}

std::vector<Letter> alphabet(int rank) {
  std::vector<Letter> letters;
  letters.reserve(2 * static_cast<std::size_t>(rank));
  for (int c = 0; c < 2 * rank; ++c) letters.push_back(Letter::from_code(rank, c));
  return letters;
}

std::vector<Letter> admissible_extensions(int rank, const Word& w) {
  require_rank(rank, w);
  std::vector<Letter> out;
  out.reserve(2 * static_cast<std::size_t>(rank));
  for (auto l : alphabet(rank)) {
    if (w.admits(l)) out.push_back(l);
  }
  return out;
}

std::vector<Word> enumerate_words(int rank, int length, const DepthLimits& limits) {
  check_depth(rank, length, limits);
  const auto count = word_count(rank, length);
  std::vector<Word> words;
  words.reserve(count);
  for (std::size_t r = 0; r < count; ++r) words.push_back(word_unrank(rank, length, r));
  return words;
}

std::size_t word_rank(int rank, const Word& w) {
  require_rank(rank, w);
  auto letters = w.letters();
  if (letters.empty()) return 0;
  const auto branch = static_cast<std::size_t>(2 * rank - 1);
  std::size_t r = static_cast<std::size_t>(letters[0].code(rank));
  for (std::size_t i = 1; i < letters.size(); ++i) {
    int code = letters[i].code(rank);
    int skipped = letters[i - 1].inverse().code(rank);
    r = r * branch + static_cast<std::size_t>(code > skipped ? code - 1 : code);
  }
  return r;
}

Word word_unrank(int rank, int length, std::size_t index) {
  if (length < 0) throw InputError("negative word length");
  if (index >= word_count(rank, length)) {
    throw InputError(fmt::format("rank index {} out of range at length {}", index, length));
  }
  if (length == 0) return Word();
  const auto branch = static_cast<std::size_t>(2 * rank - 1);
  std::vector<std::size_t> digits(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 1; --i) {
    digits[static_cast<std::size_t>(i)] = index % branch;
    index /= branch;
  }
  digits[0] = index;
  std::vector<Letter> letters;
  letters.reserve(digits.size());
  letters.push_back(Letter::from_code(rank, static_cast<int>(digits[0])));
  for (std::size_t i = 1; i < digits.size(); ++i) {
    int skipped = letters.back().inverse().code(rank);
    int code = static_cast<int>(digits[i]);
    if (code >= skipped) ++code;
    letters.push_back(Letter::from_code(rank, code));
  }
  return Word::from_letters(std::move(letters));
}

const std::vector<Word>& IndexSetFamily::level(int n) const {
  if (n < 0 || n > depth()) {
    throw InputError(fmt::format("index-set level {} outside 0..{}", n, depth()));
  }
  return levels_[static_cast<std::size_t>(n)];
}

std::size_t IndexSetFamily::cumulative_size(int n) const {
  std::size_t total = 0;
  for (int k = 0; k <= n; ++k) total += level(k).size();
  return total;
}

bool IndexSetFamily::contains(const Word& w) const {
  if (w.length() > static_cast<std::size_t>(depth())) return false;
  const auto& lv = levels_[w.length()];
  return std::find(lv.begin(), lv.end(), w) != lv.end();
}

namespace {

std::vector<Letter> keep_after_drop(std::vector<Letter> candidates, DropRule rule) {
  // candidates arrive in canonical order
  if (rule == DropRule::greatest) {
    candidates.pop_back();
  } else {
    candidates.erase(candidates.begin());
  }
  return candidates;
}

}  // namespace

IndexSetFamily build_index_sets(int rank, int depth, const IndexSetPolicy& policy,
                                const DepthLimits& limits) {
  check_depth(rank, depth, limits);
  IndexSetFamily family;
  family.rank_ = rank;
  family.policy_ = policy;
  family.levels_.push_back({Word()});
  if (depth >= 1) {
    std::vector<Word> level;
    for (auto l : keep_after_drop(alphabet(rank), policy.drop)) {
      level.push_back(Word().appended(l));
    }
    family.levels_.push_back(std::move(level));
  }
  for (int n = 2; n <= depth; ++n) {
    std::vector<Word> level;
    level.reserve(word_count(rank, n - 1) * static_cast<std::uint64_t>(2 * rank - 2));
    for (const auto& parent : enumerate_words(rank, n - 1, limits)) {
      for (auto l : keep_after_drop(admissible_extensions(rank, parent), policy.drop)) {
        level.push_back(parent.appended(l));
      }
    }
    family.levels_.push_back(std::move(level));
  }
  if (policy.order == LevelOrder::reverse_lexicographic) {
    for (auto& level : family.levels_) std::reverse(level.begin(), level.end());
  }
  return family;
}

}  // namespace schottky
