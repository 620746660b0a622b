#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "limitset/exactmat.hpp"

namespace limitset {

struct Letter {
  int gen = 0;
  int sign = 1;  // +1 or -1

  Letter inverse() const { return {gen, -sign}; }
  // Enumeration order: index ascending, +1 before -1.
  int rank() const { return 2 * gen + (sign < 0 ? 1 : 0); }
  friend bool operator==(Letter a, Letter b) { return a.gen == b.gen && a.sign == b.sign; }
  friend bool operator!=(Letter a, Letter b) { return !(a == b); }
  friend bool operator<(Letter a, Letter b) { return a.rank() < b.rank(); }
};

// Freely reduced word. Construct through reduce() or parse_word().
class Word {
 public:
  Word() = default;

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  // Reduced concatenation.
  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  // Shortlex with the letter order above.
  friend bool operator<(const Word& a, const Word& b);

  // Appends one letter, cancelling if it inverts the last one.
  void push(Letter l);

 private:
  std::vector<Letter> letters_;
};

class GeneratorSet {
 public:
  GeneratorSet() = default;
  // Throws DimensionError on size mismatch, DomainError on duplicate names.
  GeneratorSet(std::vector<std::string> names, std::vector<RationalMatrix> gens);
  GeneratorSet(int n, std::vector<std::string> names, std::vector<RationalMatrix> gens);

  int n() const { return n_; }
  std::size_t size() const { return gens_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  const RationalMatrix& matrix(std::size_t i) const { return gens_[i]; }
  const RationalMatrix& inverse(std::size_t i) const { return inv_[i]; }
  const RationalMatrix& letter(Letter l) const { return l.sign > 0 ? gens_[l.gen] : inv_[l.gen]; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool is_integral() const;

 private:
  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<RationalMatrix> gens_;
  std::vector<RationalMatrix> inv_;
};

// Throws DomainError for an index outside [0, num_gens).
Word reduce(const std::vector<Letter>& raw, std::size_t num_gens);

// (w', c) with w = c w' c^-1 as free words and w' cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w);

// Lexicographically least cyclic rotation of a cyclically reduced word.
Word canonical_rotation(const Word& w);

// Accepts "a", "a^-1", "a^{-1}", "a⁻¹", "a^k", uppercase as inverse of the
// lowercase generator, and compact forms without spaces ("ba^{-1}b").
// Throws ParseError with a byte position.
Word parse_word(const std::string& text, const GeneratorSet& gens);
// Canonical explicit form: "b a^-1 b".
std::string format_word(const Word& w, const GeneratorSet& gens);

RationalMatrix evaluate(const Word& w, const GeneratorSet& gens);

struct Element {
  Word word;
  RationalMatrix matrix;
};

struct Relation {
  Word word;     // newly generated word
  Word earlier;  // first word with the same matrix
  Word relator;  // reduce(word * earlier^-1), evaluates to I
};

struct EnumerationOptions {
  int max_len = 0;
  bool dedup = true;
  std::size_t memory_budget = std::size_t{4} << 30;  // bytes, entry-size accounting
  std::size_t max_relations = 1000000;               // relation log cap
  int workers = 1;
  // Called on each new element in BFS order; returning true stops after it.
  std::function<bool(const Element&)> stop_when;
};

struct EnumerationResult {
  std::vector<Element> elements;        // BFS order; elements[0] is the empty word
  std::vector<std::size_t> level_start;  // elements of length L: [level_start[L], level_start[L+1])
  std::vector<Relation> relations;
  std::size_t relations_seen = 0;  // may exceed relations.size() once capped
  bool dedup = true;
  bool partial = false;       // memory budget hit
  bool stopped_early = false;  // stop_when fired
  int max_len = 0;
  int complete_len = 0;       // every length <= complete_len fully enumerated
  std::size_t bytes_estimate = 0;

  std::size_t count_at_length(int L) const;
  // Index of the element with this matrix (dedup runs only).
  std::optional<std::size_t> find(const RationalMatrix& m) const;

  std::unordered_multimap<std::size_t, std::size_t> index;  // matrix hash -> element
};

EnumerationResult enumerate(const GeneratorSet& gens, const EnumerationOptions& opts);
EnumerationResult enumerate(const GeneratorSet& gens, int max_len, bool dedup);

// 1 + sum_{k=1..L} 2r (2r-1)^{k-1}
std::size_t free_word_count(std::size_t rank, int max_len);

}  // namespace limitset
