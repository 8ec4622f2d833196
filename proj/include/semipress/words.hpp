#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace semipress {

using Symbol = std::uint8_t;

// Generator count of the free semigroup. m = 1 is allowed for single-map
// regression tests; symbols of every word must be < m.
struct Alphabet {
  int m = 2;

  explicit Alphabet(int m_) : m(m_) {
    if (m < 1 || m > 16) throw std::invalid_argument("Alphabet: m must be in [1,16]");
  }
};

// Nonempty finite string over {0..m-1}, read left to right.
class Word {
 public:
  explicit Word(std::vector<Symbol> symbols) : syms_(std::move(symbols)) {
    if (syms_.empty()) throw std::invalid_argument("Word: length must be >= 1");
  }

  static Word parse(const std::string& digits) {
    std::vector<Symbol> s;
    s.reserve(digits.size());
    for (char c : digits) {
      if (c < '0' || c > '9') throw std::invalid_argument("Word::parse: digit expected");
      s.push_back(static_cast<Symbol>(c - '0'));
    }
    return Word(std::move(s));
  }

  int length() const { return static_cast<int>(syms_.size()); }
  Symbol operator[](int i) const { return syms_[static_cast<std::size_t>(i)]; }
  const std::vector<Symbol>& symbols() const { return syms_; }
  operator std::span<const Symbol>() const { return syms_; }

  std::string str() const {
    std::string out;
    out.reserve(syms_.size());
    for (Symbol s : syms_) out += static_cast<char>('0' + s);
    return out;
  }

  friend bool operator==(const Word& a, const Word& b) { return a.syms_ == b.syms_; }

 private:
  std::vector<Symbol> syms_;
};

// Window omega|_[a, a+len-1] of a one- or two-sided sequence.
struct OmegaWindow {
  int start = 0;  // index of symbols.front() in the ambient sequence
  std::vector<Symbol> symbols;

  OmegaWindow(int start_, std::vector<Symbol> symbols_)
      : start(start_), symbols(std::move(symbols_)) {
    if (symbols.empty()) throw std::invalid_argument("OmegaWindow: length must be >= 1");
  }

  int lo() const { return start; }
  int hi() const { return start + static_cast<int>(symbols.size()) - 1; }
  bool covers(int index) const { return index >= lo() && index <= hi(); }
  Symbol at(int index) const { return symbols[static_cast<std::size_t>(index - start)]; }
};

Word reverse(const Word& w);

// Reading-order concatenation: symbols of a, then symbols of b.
Word concat(const Word& a, const Word& b);

// w' <= w iff w = w'' w' for some possibly empty w''; the empty w' is a
// suffix of every word.
bool is_suffix_le(std::span<const Symbol> w_prime, std::span<const Symbol> w);
bool is_suffix_le(const Word& w_prime, const Word& w);

// [w|_[0,0], ..., w|_[0,|w|-1]]; the k-th entry has length k+1.
std::vector<Word> prefixes(const Word& w);

// m^n as u64, or nullopt on overflow.
std::optional<std::uint64_t> word_count(const Alphabet& a, int n);

// All words of length n in lexicographic order, or nullopt when m^n exceeds
// the budget (use sample_words instead).
std::optional<std::vector<Word>> enumerate_words(const Alphabet& a, int n,
                                                 std::uint64_t budget);

// Lexicographic decode: the index-th word of length n (0-based).
void word_at(const Alphabet& a, int n, std::uint64_t index, std::vector<Symbol>& out);
Word word_at(const Alphabet& a, int n, std::uint64_t index);

// k i.i.d. uniform words of length n; symbol (k, j) is a pure function of
// (seed, k, j), so draws are reproducible and streams never overlap.
std::vector<Word> sample_words(const Alphabet& a, int n, int k, std::uint64_t seed);

}  // namespace semipress
