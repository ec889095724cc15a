#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "exsets/error.hpp"
#include "exsets/spectral.hpp"
#include "exsets/symbolic.hpp"

using namespace exsets;

namespace {

const double kGolden = std::log((1.0 + std::sqrt(5.0)) / 2.0);

ForbiddenFamily fam(int m, std::initializer_list<const char*> words) {
  std::vector<Word> w;
  for (const char* s : words) w.push_back(Word::parse(s));
  return ForbiddenFamily(m, std::move(w));
}

// Exhaustive count of words of length n avoiding the family.
std::uint64_t brute_count(const ForbiddenFamily& f, std::size_t n) {
  std::uint64_t total = 0;
  for (const auto& w : all_words(f.alphabet_size(), n)) total += avoids(w, f);
  return total;
}

}  // namespace

TEST_CASE("words") {
  CHECK(Word::parse("0101").size() == 4);
  CHECK(Word::parse("12.3.0") == Word{12, 3, 0});
  CHECK(Word{12, 3}.str() == "12.3");
  CHECK(Word::parse("0110").contains_factor(Word{1, 1}));
  CHECK(all_words(3, 2).size() == 9);
}

TEST_CASE("normalize_family") {
  CHECK(normalize_family(fam(2, {"01", "0101"})).words() == std::vector<Word>{Word{0, 1}});
  CHECK(normalize_family(fam(2, {"11"})).words() == std::vector<Word>{Word{1, 1}});
  CHECK(normalize_family(fam(3, {"00", "121", "2121"})) == fam(3, {"00", "121"}));
  CHECK_THROWS_AS(normalize_family(ForbiddenFamily(2, {})), Error);
  CHECK_THROWS_AS(fam(2, {"012"}), Error);
}

TEST_CASE("build_survivor") {
  const auto g = build_survivor(fam(2, {"11"}));
  REQUIRE(g.sft.num_states() == 2);
  CHECK(g.sft.label(0) == Word{0});
  CHECK(g.sft.label(1) == Word{1});
  CHECK(g.sft.num_edges() == 3);
  CHECK(g.sft.find_state(Word{1}) >= 0);
  CHECK(!g.empty);
  CHECK(build_survivor(fam(2, {"0", "1"})).empty);
  CHECK(build_survivor(fam(2, {"00", "01", "10", "11"})).empty);
}

TEST_CASE("sft_entropy") {
  CHECK(sft_entropy(Sft::full_shift(4)) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  const auto g = build_survivor(fam(2, {"11"}));
  CHECK(std::abs(sft_entropy(g.sft) - kGolden) < 1e-9);
  // Oracle: growth of brute-force counts.
  const double slope = std::log(static_cast<double>(brute_count(fam(2, {"11"}), 20) )) / 20.0;
  CHECK(std::abs(slope - kGolden) < 0.05);
  CHECK(is_empty_entropy(sft_entropy(build_survivor(fam(2, {"0", "1"})).sft)));
}

TEST_CASE("word_count") {
  CHECK(word_count(Sft::full_shift(2), 10) == 1024);
  const auto g = build_survivor(fam(2, {"11"}));
  CHECK(word_count(g.sft, 5) == brute_count(fam(2, {"11"}), 5));
  CHECK(word_count(g.sft, 5) == 13);
  CHECK(word_count(g.sft, 1) == 2);
  const auto f = fam(3, {"00", "121"});
  const auto s = build_survivor(f);
  for (std::size_t n = 1; n <= 8; ++n) CHECK(word_count(s.sft, n) == brute_count(f, n));
  CHECK_THROWS_AS(word_count(g.sft, 31), Error);
}

TEST_CASE("dolgopyat_sum") {
  CHECK(dolgopyat_sum(fam(2, {"0110"}), 0.5) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(dolgopyat_sum(fam(2, {"11"}), kGolden) == doctest::Approx(std::exp(-2 * kGolden)).epsilon(1e-12));
  CHECK(dolgopyat_sum(fam(2, {"00", "11"}), 0.1) == doctest::Approx(2 * std::exp(-0.2)).epsilon(1e-12));
}

TEST_CASE("avoids") {
  CHECK(avoids(Word::parse("010010"), fam(2, {"11"})));
  CHECK(!avoids(Word::parse("0110"), fam(2, {"11"})));
  CHECK(!avoids(Word::parse("0101"), fam(2, {"010"})));
}

// Single strongly connected component (the envelope needs irreducibility).
bool irreducible(const Sft& sft) {
  std::vector<std::vector<spectral::Edge>> out(sft.num_states());
  for (std::size_t s = 0; s < sft.num_states(); ++s)
    for (int t : sft.successors(s)) out[s].push_back({t, 1.0});
  return spectral::strongly_connected_components(spectral::Digraph(std::move(out))).size() == 1;
}

TEST_CASE("property: counting envelope") {
  std::mt19937_64 rng(11);
  int tested = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + trial % 2;
    std::vector<Word> words;
    for (int k = 0; k < 1 + trial % 3; ++k) {
      std::vector<int> s(2 + rng() % 3);
      for (auto& x : s) x = static_cast<int>(rng() % m);
      words.emplace_back(std::move(s));
    }
    const auto surv = build_survivor(ForbiddenFamily(m, words));
    if (surv.empty || !irreducible(surv.sft)) continue;
    ++tested;
    const double h = sft_entropy(surv.sft);
    const double env = std::log(static_cast<double>(surv.sft.num_states()));
    const std::size_t top = m == 2 ? 25 : 16;
    for (std::size_t n = 1; n <= top; ++n) {
      const double c = static_cast<double>(word_count(surv.sft, n));
      CHECK(std::abs(std::log(c) / n - h) <= env / n + 1e-9);
    }
  }
  CHECK(tested > 20);
}

TEST_CASE("property: survivor monotonicity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Word> small, big;
    for (int k = 0; k < 3; ++k) {
      std::vector<int> s(2 + rng() % 4);
      for (auto& x : s) x = static_cast<int>(rng() % 2);
      (k == 0 ? small : big).emplace_back(s);
    }
    big.push_back(small[0]);
    const double h1 = sft_entropy(build_survivor(ForbiddenFamily(2, small)).sft);
    const double h2 = sft_entropy(build_survivor(ForbiddenFamily(2, big)).sft);
    CHECK(h2 <= h1 + 1e-12);
  }
}

TEST_CASE("property: one forbidden word") {
  for (int m : {2, 3}) {
    double prev = -1.0;
    for (std::size_t n = 1; n <= 12; ++n) {
      const double h = sft_entropy(build_survivor(ForbiddenFamily(m, {Word(std::vector<int>(n, 0))})).sft);
      CHECK(h < std::log(static_cast<double>(m)));
      CHECK(h >= prev);
      prev = h;
    }
    CHECK(std::log(static_cast<double>(m)) - prev < 1e-3);
    // Any single word, not only 0^n.
    const auto w = Word::parse(m == 2 ? "0110100" : "0210");
    CHECK(sft_entropy(build_survivor(ForbiddenFamily(m, {w})).sft) < std::log(static_cast<double>(m)));
  }
}

TEST_CASE("property: power recoding") {
  for (const auto& f : {fam(2, {"11"}), fam(3, {"00", "121"}), fam(2, {"000", "101"})}) {
    const auto s = build_survivor(f);
    const double h = sft_entropy(s.sft);
    for (int n = 2; n <= 4; ++n) CHECK(std::abs(sft_entropy(s.sft.higher_power(n)) - n * h) < 1e-9);
  }
}

TEST_CASE("property: Dolgopyat contract") {
  // Families with dolgopyat_sum < 1 at s < log M keep entropy growing with the minimal length.
  std::mt19937_64 rng(3);
  const double s = 0.6;
  std::vector<std::pair<std::size_t, double>> seen;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n0 = 3 + trial % 8;
    std::vector<Word> words;
    for (int k = 0; k < 3; ++k) {
      std::vector<int> w(n0 + rng() % 3);
      for (auto& x : w) x = static_cast<int>(rng() % 2);
      words.emplace_back(std::move(w));
    }
    const ForbiddenFamily f(2, words);
    if (dolgopyat_sum(f, s) >= 1.0) continue;
    seen.emplace_back(f.min_length(), sft_entropy(build_survivor(f).sft));
  }
  REQUIRE(seen.size() > 20);
  // Lower envelope by min length is nondecreasing and approaches log 2.
  std::map<std::size_t, double> low;
  for (const auto& [n, h] : seen) low[n] = low.count(n) ? std::min(low[n], h) : h;
  double prev = 0.0;
  for (const auto& [n, h] : low) {
    CHECK(h >= prev - 0.02);
    prev = h;
  }
  CHECK(std::log(2.0) - low.rbegin()->second < 0.01);
}
