#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace exsets {

/// Finite word over the alphabet {0, ..., M-1}.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<int> symbols) : symbols_(std::move(symbols)) {}
  Word(std::initializer_list<int> symbols) : symbols_(symbols) {}

  /// Parses "0101" (one digit per symbol) or "12.3.0" (dot separated, for
  /// alphabets larger than ten).
  static Word parse(std::string_view text);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  int operator[](std::size_t i) const { return symbols_[i]; }
  int back() const { return symbols_.back(); }
  std::span<const int> symbols() const noexcept { return symbols_; }

  Word slice(std::size_t pos, std::size_t len) const;
  Word operator+(const Word& other) const;
  Word appended(int symbol) const;
  Word repeated(std::size_t times) const;

  /// True if `factor` occurs contiguously in this word.
  bool contains_factor(const Word& factor) const;
  int max_symbol() const;

  /// Digit string when every symbol is below ten, dot separated otherwise.
  std::string str() const;

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

 private:
  std::vector<int> symbols_;
};

/// All words of length n over an M-letter alphabet in lexicographic order.
std::vector<Word> all_words(int alphabet_size, std::size_t n);

/// Finite set of forbidden words. Words are stored sorted and unique.
class ForbiddenFamily {
 public:
  /// Validates alphabet_size >= 2, nonempty words and symbols < alphabet_size.
  /// An empty word list is accepted here (the full shift); normalize_family
  /// rejects it.
  ForbiddenFamily(int alphabet_size, std::vector<Word> words);

  int alphabet_size() const noexcept { return alphabet_size_; }
  const std::vector<Word>& words() const noexcept { return words_; }
  bool empty() const noexcept { return words_.empty(); }
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t min_length() const noexcept { return min_length_; }
  std::size_t max_length() const noexcept { return max_length_; }

  bool operator==(const ForbiddenFamily&) const = default;

 private:
  int alphabet_size_;
  std::vector<Word> words_;
  std::size_t min_length_ = 0;
  std::size_t max_length_ = 0;
};

/// Vertex shift on labelled states. Each state is a legal block of
/// `block_length` base symbols; when block_length > 1 every edge s -> t joins
/// blocks overlapping in block_length - 1 symbols, so a path s_0 s_1 ... reads
/// the symbol sequence label(s_0) followed by the last symbol of each later
/// state. Successor lists are sorted and duplicate free (a 0/1 matrix).
class Sft {
 public:
  Sft(int alphabet_size, int block_length, std::vector<Word> labels,
      std::vector<std::vector<int>> successors);

  static Sft full_shift(int alphabet_size);
  /// The shift with no states at all.
  static Sft empty_shift(int alphabet_size, int block_length = 1);

  int alphabet_size() const noexcept { return alphabet_size_; }
  int block_length() const noexcept { return block_length_; }
  std::size_t num_states() const noexcept { return labels_.size(); }
  std::size_t num_edges() const noexcept;
  bool empty() const noexcept { return labels_.empty(); }

  const Word& label(std::size_t state) const { return labels_[state]; }
  std::span<const int> successors(std::size_t state) const { return successors_[state]; }
  /// Index of the state labelled `block`, or -1.
  int find_state(const Word& block) const;

  /// The (block_length + 1)-word carried by the edge state -> successors(state)[k].
  Word edge_word(std::size_t state, std::size_t k) const;

  /// Essential part: repeatedly removes states lacking an incoming or an
  /// outgoing edge. State order is preserved.
  Sft trimmed() const;

  /// Presentation on legal blocks of length `block_length` (>= current).
  Sft reblocked(int block_length) const;

  /// Presentation of the n-th power of the shift: states are paths of n
  /// states, relabelled as single symbols of a new alphabet.
  Sft higher_power(int n) const;

  /// Edge list "u v" per line with block strings as labels.
  std::string edge_list() const;

 private:
  int alphabet_size_;
  int block_length_;
  std::vector<Word> labels_;
  std::vector<std::vector<int>> successors_;
};

struct SurvivorSet {
  ForbiddenFamily family;
  Sft sft;
  bool empty;
};

/// Exact unsigned count wide enough for word counts up to the oracle cap.
using WordCount = unsigned __int128;
std::string to_string(WordCount value);

/// Removes every word that contains another family word as a factor.
/// Throws on an empty family.
ForbiddenFamily normalize_family(const ForbiddenFamily& family);

/// Higher-block survivor presentation of the sequences avoiding every word of
/// the (normalized) family, trimmed to its essential part.
SurvivorSet build_survivor(const ForbiddenFamily& family);

/// Topological entropy in nats: log of the spectral radius of the trimmed
/// adjacency. Returns -infinity for an empty shift.
double sft_entropy(const Sft& sft);
inline bool is_empty_entropy(double h) { return h == -std::numeric_limits<double>::infinity(); }

inline constexpr std::size_t kWordCountCap = 30;

/// Number of legal words of length n, by dynamic programming over states.
WordCount word_count(const Sft& sft, std::size_t n, std::size_t cap = kWordCountCap);

/// Sum over the family of exp(-s |U|).
double dolgopyat_sum(const ForbiddenFamily& family, double s);

/// True iff no contiguous factor of `word` is a family word.
bool avoids(const Word& word, const ForbiddenFamily& family);

}  // namespace exsets
