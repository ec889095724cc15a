#include "exsets/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "exsets/error.hpp"
#include "exsets/spectral.hpp"

namespace exsets {

// ---------------------------------------------------------------- Word

Word Word::parse(std::string_view text) {
  std::vector<int> out;
  const bool dotted = text.find('.') != std::string_view::npos;
  if (dotted) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = std::min(text.find('.', start), text.size());
      const auto piece = text.substr(start, end - start);
      if (piece.empty()) throw Error("empty symbol in word '" + std::string(text) + "'");
      int value = 0;
      for (char c : piece) {
        if (c < '0' || c > '9') throw Error("invalid symbol in word '" + std::string(text) + "'");
        value = value * 10 + (c - '0');
      }
      out.push_back(value);
      start = end + 1;
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw Error("invalid symbol in word '" + std::string(text) + "'");
      out.push_back(c - '0');
    }
  }
  return Word(std::move(out));
}

Word Word::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > symbols_.size()) throw Error("word slice out of range");
  return Word(std::vector<int>(symbols_.begin() + static_cast<std::ptrdiff_t>(pos),
                               symbols_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

Word Word::operator+(const Word& other) const {
  std::vector<int> out = symbols_;
  out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
  return Word(std::move(out));
}

Word Word::appended(int symbol) const {
  std::vector<int> out = symbols_;
  out.push_back(symbol);
  return Word(std::move(out));
}

Word Word::repeated(std::size_t times) const {
  std::vector<int> out;
  out.reserve(symbols_.size() * times);
  for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), symbols_.begin(), symbols_.end());
  return Word(std::move(out));
}

bool Word::contains_factor(const Word& factor) const {
  if (factor.size() > size()) return false;
  return std::search(symbols_.begin(), symbols_.end(), factor.symbols_.begin(),
                     factor.symbols_.end()) != symbols_.end();
}

int Word::max_symbol() const {
  return symbols_.empty() ? -1 : *std::max_element(symbols_.begin(), symbols_.end());
}

std::string Word::str() const {
  const bool wide = max_symbol() >= 10;
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (wide && i > 0) out += '.';
    out += std::to_string(symbols_[i]);
  }
  return out;
}

std::vector<Word> all_words(int alphabet_size, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t len = 0; len < n; ++len) {
    std::vector<Word> next;
    next.reserve(out.size() * static_cast<std::size_t>(alphabet_size));
    for (const auto& w : out) {
      for (int a = 0; a < alphabet_size; ++a) next.push_back(w.appended(a));
    }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------- ForbiddenFamily

ForbiddenFamily::ForbiddenFamily(int alphabet_size, std::vector<Word> words)
    : alphabet_size_(alphabet_size), words_(std::move(words)) {
  if (alphabet_size_ < 2) throw Error("alphabet size must be at least 2");
  for (const auto& w : words_) {
    if (w.empty()) throw Error("forbidden words must be nonempty");
    for (int s : w.symbols()) {
      if (s < 0 || s >= alphabet_size_) {
        throw Error("symbol " + std::to_string(s) + " in word '" + w.str() +
                    "' is outside the alphabet of size " + std::to_string(alphabet_size_));
      }
    }
  }
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  if (!words_.empty()) {
    min_length_ = words_.front().size();
    for (const auto& w : words_) {
      min_length_ = std::min(min_length_, w.size());
      max_length_ = std::max(max_length_, w.size());
    }
  }
}

ForbiddenFamily normalize_family(const ForbiddenFamily& family) {
  if (family.empty()) throw Error("no forbidden words");
  std::vector<Word> by_length = family.words();
  std::stable_sort(by_length.begin(), by_length.end(),
                   [](const Word& a, const Word& b) { return a.size() < b.size(); });
  std::vector<Word> kept;
  for (const auto& w : by_length) {
    const bool redundant = std::any_of(kept.begin(), kept.end(),
                                       [&](const Word& k) { return w.contains_factor(k); });
    if (!redundant) kept.push_back(w);
  }
  return ForbiddenFamily(family.alphabet_size(), std::move(kept));
}

bool avoids(const Word& word, const ForbiddenFamily& family) {
  return std::none_of(family.words().begin(), family.words().end(),
                      [&](const Word& f) { return word.contains_factor(f); });
}

double dolgopyat_sum(const ForbiddenFamily& family, double s) {
  if (!(s > 0.0)) throw Error("dolgopyat_sum requires s > 0");
  double total = 0.0;
  for (const auto& w : family.words()) total += std::exp(-s * static_cast<double>(w.size()));
  return total;
}

// ---------------------------------------------------------------- Sft

Sft::Sft(int alphabet_size, int block_length, std::vector<Word> labels,
         std::vector<std::vector<int>> successors)
    : alphabet_size_(alphabet_size),
      block_length_(block_length),
      labels_(std::move(labels)),
      successors_(std::move(successors)) {
  if (alphabet_size_ < 1) throw Error("sft alphabet must be nonempty");
  if (block_length_ < 1) throw Error("sft block length must be at least 1");
  if (labels_.size() != successors_.size()) throw Error("sft labels and successor lists differ in size");
  const auto n = static_cast<int>(labels_.size());
  for (auto& succ : successors_) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    for (int t : succ) {
      if (t < 0 || t >= n) throw Error("sft successor out of range");
    }
  }
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    const auto& lab = labels_[s];
    if (lab.size() != static_cast<std::size_t>(block_length_)) throw Error("sft label has wrong block length");
    for (int sym : lab.symbols()) {
      if (sym < 0 || sym >= alphabet_size_) throw Error("sft label symbol outside alphabet");
    }
    if (block_length_ > 1) {
      for (int t : successors_[s]) {
        const auto& next = labels_[static_cast<std::size_t>(t)];
        if (!std::equal(lab.symbols().begin() + 1, lab.symbols().end(), next.symbols().begin())) {
          throw Error("sft edge " + lab.str() + " -> " + next.str() + " does not overlap");
        }
      }
    }
  }
  {
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("sft labels must be distinct");
  }
}

Sft Sft::full_shift(int alphabet_size) {
  std::vector<Word> labels;
  std::vector<std::vector<int>> succ;
  for (int a = 0; a < alphabet_size; ++a) {
    labels.push_back(Word{a});
    std::vector<int> all(static_cast<std::size_t>(alphabet_size));
    for (int b = 0; b < alphabet_size; ++b) all[static_cast<std::size_t>(b)] = b;
    succ.push_back(std::move(all));
  }
  return Sft(alphabet_size, 1, std::move(labels), std::move(succ));
}

Sft Sft::empty_shift(int alphabet_size, int block_length) {
  return Sft(alphabet_size, block_length, {}, {});
}

std::size_t Sft::num_edges() const noexcept {
  std::size_t total = 0;
  for (const auto& s : successors_) total += s.size();
  return total;
}

int Sft::find_state(const Word& block) const {
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    if (labels_[s] == block) return static_cast<int>(s);
  }
  return -1;
}

Word Sft::edge_word(std::size_t state, std::size_t k) const {
  const auto t = static_cast<std::size_t>(successors_[state][k]);
  if (block_length_ == 1) return Word{labels_[state][0], labels_[t][0]};
  return labels_[state].appended(labels_[t].back());
}

Sft Sft::trimmed() const {
  const std::size_t n = labels_.size();
  std::vector<int> in_deg(n, 0), out_deg(n, 0);
  std::vector<std::vector<int>> preds(n);
  for (std::size_t s = 0; s < n; ++s) {
    out_deg[s] = static_cast<int>(successors_[s].size());
    for (int t : successors_[s]) {
      ++in_deg[static_cast<std::size_t>(t)];
      preds[static_cast<std::size_t>(t)].push_back(static_cast<int>(s));
    }
  }
  std::vector<char> alive(n, 1);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (in_deg[s] == 0 || out_deg[s] == 0) queue.push_back(s);
  }
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    if (!alive[s]) continue;
    alive[s] = 0;
    for (int t : successors_[s]) {
      const auto ti = static_cast<std::size_t>(t);
      if (alive[ti] && --in_deg[ti] == 0) queue.push_back(ti);
    }
    for (int p : preds[s]) {
      const auto pi = static_cast<std::size_t>(p);
      if (alive[pi] && --out_deg[pi] == 0) queue.push_back(pi);
    }
  }
  std::vector<int> remap(n, -1);
  std::vector<Word> labels;
  for (std::size_t s = 0; s < n; ++s) {
    if (alive[s]) {
      remap[s] = static_cast<int>(labels.size());
      labels.push_back(labels_[s]);
    }
  }
  std::vector<std::vector<int>> succ(labels.size());
  for (std::size_t s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    auto& out = succ[static_cast<std::size_t>(remap[s])];
    for (int t : successors_[s]) {
      if (alive[static_cast<std::size_t>(t)]) out.push_back(remap[static_cast<std::size_t>(t)]);
    }
  }
  return Sft(alphabet_size_, block_length_, std::move(labels), std::move(succ));
}

namespace {

// All state paths with `count` states, in lexicographic order of the path.
std::vector<std::vector<int>> state_paths(const Sft& sft, std::size_t count) {
  std::vector<std::vector<int>> paths;
  for (std::size_t s = 0; s < sft.num_states(); ++s) paths.push_back({static_cast<int>(s)});
  for (std::size_t len = 1; len < count; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& p : paths) {
      for (int t : sft.successors(static_cast<std::size_t>(p.back()))) {
        auto q = p;
        q.push_back(t);
        next.push_back(std::move(q));
      }
    }
    paths = std::move(next);
  }
  return paths;
}

Word read_path(const Sft& sft, const std::vector<int>& path) {
  Word w = sft.label(static_cast<std::size_t>(path.front()));
  for (std::size_t i = 1; i < path.size(); ++i) w = w.appended(sft.label(static_cast<std::size_t>(path[i])).back());
  return w;
}

}  // namespace

Sft Sft::reblocked(int block_length) const {
  if (block_length < block_length_) throw Error("cannot reblock to a shorter block length");
  if (block_length == block_length_) return *this;
  const auto count = static_cast<std::size_t>(block_length - block_length_ + 1);
  const auto paths = state_paths(*this, count);
  std::map<std::vector<int>, int> index;
  std::vector<Word> labels;
  for (const auto& p : paths) {
    index.emplace(p, static_cast<int>(labels.size()));
    labels.push_back(read_path(*this, p));
  }
  std::vector<std::vector<int>> succ(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::vector<int> tail(paths[i].begin() + 1, paths[i].end());
    for (int t : successors(static_cast<std::size_t>(paths[i].back()))) {
      auto q = tail;
      q.push_back(t);
      succ[i].push_back(index.at(q));
    }
  }
  return Sft(alphabet_size_, block_length, std::move(labels), std::move(succ));
}

Sft Sft::higher_power(int n) const {
  if (n < 1) throw Error("power must be positive");
  const auto paths = state_paths(*this, static_cast<std::size_t>(n));
  const int k = static_cast<int>(paths.size());
  std::vector<std::vector<int>> by_first(num_states());
  for (int i = 0; i < k; ++i) by_first[static_cast<std::size_t>(paths[static_cast<std::size_t>(i)].front())].push_back(i);
  std::vector<Word> labels;
  std::vector<std::vector<int>> succ(paths.size());
  for (int i = 0; i < k; ++i) {
    labels.push_back(Word{i});
    for (int t : successors(static_cast<std::size_t>(paths[static_cast<std::size_t>(i)].back()))) {
      const auto& starts = by_first[static_cast<std::size_t>(t)];
      succ[static_cast<std::size_t>(i)].insert(succ[static_cast<std::size_t>(i)].end(), starts.begin(), starts.end());
    }
  }
  return Sft(std::max(k, 1), 1, std::move(labels), std::move(succ));
}

std::string Sft::edge_list() const {
  std::ostringstream out;
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    for (int t : successors_[s]) out << labels_[s].str() << ' ' << labels_[static_cast<std::size_t>(t)].str() << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- survivors

SurvivorSet build_survivor(const ForbiddenFamily& family) {
  const auto normalized = normalize_family(family);
  const int m = normalized.alphabet_size();
  const auto k = normalized.max_length();
  const std::size_t block = std::max<std::size_t>(1, k - 1);

  auto has_forbidden_suffix = [&](const Word& w) {
    for (const auto& f : normalized.words()) {
      if (f.size() <= w.size() &&
          std::equal(f.symbols().begin(), f.symbols().end(), w.symbols().end() - static_cast<std::ptrdiff_t>(f.size()))) {
        return true;
      }
    }
    return false;
  };

  // Legal blocks grown one symbol at a time; a word is legal iff it has a
  // legal prefix and no forbidden suffix.
  std::vector<Word> legal{Word{}};
  for (std::size_t len = 0; len < block; ++len) {
    std::vector<Word> next;
    for (const auto& w : legal) {
      for (int a = 0; a < m; ++a) {
        auto v = w.appended(a);
        if (!has_forbidden_suffix(v)) next.push_back(std::move(v));
      }
    }
    legal = std::move(next);
  }

  std::map<Word, int> index;
  for (std::size_t i = 0; i < legal.size(); ++i) index.emplace(legal[i], static_cast<int>(i));
  std::vector<std::vector<int>> succ(legal.size());
  for (std::size_t i = 0; i < legal.size(); ++i) {
    for (int a = 0; a < m; ++a) {
      const auto edge = legal[i].appended(a);
      if (has_forbidden_suffix(edge)) continue;
      const auto it = index.find(edge.slice(1, block));
      if (it != index.end()) succ[i].push_back(it->second);
    }
  }
  Sft raw(m, static_cast<int>(block), std::move(legal), std::move(succ));
  auto essential = raw.trimmed();
  const bool empty = essential.empty();
  return SurvivorSet{normalized, std::move(essential), empty};
}

double sft_entropy(const Sft& sft) {
  const auto core = sft.trimmed();
  if (core.empty()) return -std::numeric_limits<double>::infinity();
  std::vector<std::vector<spectral::Edge>> out(core.num_states());
  for (std::size_t s = 0; s < core.num_states(); ++s) {
    for (int t : core.successors(s)) out[s].push_back({t, 1.0});
  }
  return std::log(spectral::spectral_radius(spectral::Digraph(std::move(out))));
}

std::string to_string(WordCount value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out += static_cast<char>('0' + static_cast<int>(value % 10));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

WordCount word_count(const Sft& sft, std::size_t n, std::size_t cap) {
  if (n == 0) throw Error("word length must be positive");
  if (n > cap) throw Error("oracle cap exceeded");
  if (static_cast<double>(n) * std::log2(static_cast<double>(std::max(sft.alphabet_size(), 2))) > 127.0) {
    throw Error("word count would overflow 128 bits");
  }
  if (sft.empty()) return 0;
  const auto block = static_cast<std::size_t>(sft.block_length());
  if (n < block) {
    std::set<Word> prefixes;
    for (std::size_t s = 0; s < sft.num_states(); ++s) prefixes.insert(sft.label(s).slice(0, n));
    return prefixes.size();
  }
  std::vector<WordCount> ways(sft.num_states(), 1), next(sft.num_states());
  for (std::size_t step = block; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t s = 0; s < sft.num_states(); ++s) {
      for (int t : sft.successors(s)) next[static_cast<std::size_t>(t)] += ways[s];
    }
    std::swap(ways, next);
  }
  WordCount total = 0;
  for (auto w : ways) total += w;
  return total;
}

}  // namespace exsets
