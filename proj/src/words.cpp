#include "semipress/words.hpp"

#include <algorithm>
#include <stdexcept>

#include "semipress/rng.hpp"

namespace semipress {

Word reverse(const Word& w) {
  std::vector<Symbol> s(w.symbols().rbegin(), w.symbols().rend());
  return Word(std::move(s));
}

Word concat(const Word& a, const Word& b) {
  std::vector<Symbol> s = a.symbols();
  s.insert(s.end(), b.symbols().begin(), b.symbols().end());
  return Word(std::move(s));
}

bool is_suffix_le(std::span<const Symbol> w_prime, std::span<const Symbol> w) {
  if (w_prime.size() > w.size()) return false;
  return std::equal(w_prime.rbegin(), w_prime.rend(), w.rbegin());
}

bool is_suffix_le(const Word& w_prime, const Word& w) {
  return is_suffix_le(std::span<const Symbol>(w_prime), std::span<const Symbol>(w));
}

std::vector<Word> prefixes(const Word& w) {
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(w.length()));
  std::vector<Symbol> acc;
  for (int i = 0; i < w.length(); ++i) {
    acc.push_back(w[i]);
    out.push_back(Word(acc));
  }
  return out;
}

std::optional<std::uint64_t> word_count(const Alphabet& a, int n) {
  if (n < 0) return std::nullopt;
  std::uint64_t count = 1;
  const auto m = static_cast<std::uint64_t>(a.m);
  for (int i = 0; i < n; ++i) {
    if (count > UINT64_MAX / m) return std::nullopt;
    count *= m;
  }
  return count;
}

void word_at(const Alphabet& a, int n, std::uint64_t index, std::vector<Symbol>& out) {
  out.resize(static_cast<std::size_t>(n));
  const auto m = static_cast<std::uint64_t>(a.m);
  for (int j = n - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = static_cast<Symbol>(index % m);
    index /= m;
  }
}

Word word_at(const Alphabet& a, int n, std::uint64_t index) {
  std::vector<Symbol> s;
  word_at(a, n, index, s);
  return Word(std::move(s));
}

std::optional<std::vector<Word>> enumerate_words(const Alphabet& a, int n,
                                                 std::uint64_t budget) {
  if (n < 1) throw std::invalid_argument("enumerate_words: n must be >= 1");
  const auto count = word_count(a, n);
  if (!count || *count > budget) return std::nullopt;
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(*count));
  for (std::uint64_t i = 0; i < *count; ++i) out.push_back(word_at(a, n, i));
  return out;
}

std::vector<Word> sample_words(const Alphabet& a, int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("sample_words: n, k must be >= 1");
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(k));
  const auto m = static_cast<std::uint32_t>(a.m);
  for (int i = 0; i < k; ++i) {
    std::vector<Symbol> s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const std::uint64_t bits =
          mix_seed(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
      s[static_cast<std::size_t>(j)] = static_cast<Symbol>(bounded(bits, m));
    }
    out.push_back(Word(std::move(s)));
  }
  return out;
}

}  // namespace semipress
