#include "limitset/words.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <thread>

#include "limitset/errors.hpp"

namespace limitset {

// ------------------------------------------------------------------- Word

void Word::push(Letter l) {
  if (!letters_.empty() && letters_.back() == l.inverse())
    letters_.pop_back();
  else
    letters_.push_back(l);
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
  return w;
}

Word operator*(const Word& a, const Word& b) {
  Word w = a;
  for (Letter l : b.letters_) w.push(l);
  return w;
}

bool operator<(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                      b.letters_.end());
}

Word reduce(const std::vector<Letter>& raw, std::size_t num_gens) {
  Word w;
  for (Letter l : raw) {
    if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= num_gens)
      throw DomainError("unknown generator index " + std::to_string(l.gen));
    if (l.sign != 1 && l.sign != -1) throw DomainError("letter sign must be +1 or -1");
    w.push(l);
  }
  return w;
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
  const auto& ls = w.letters();
  std::size_t i = 0, j = ls.size();
  while (j - i >= 2 && ls[i] == ls[j - 1].inverse()) {
    ++i;
    --j;
  }
  Word core, conj;
  for (std::size_t k = 0; k < i; ++k) conj.push(ls[k]);
  for (std::size_t k = i; k < j; ++k) core.push(ls[k]);
  return {core, conj};
}

Word canonical_rotation(const Word& w) {
  const auto& ls = w.letters();
  const std::size_t n = ls.size();
  if (n == 0) return w;
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      Letter x = ls[(s + k) % n], y = ls[(best + k) % n];
      if (x == y) continue;
      if (x < y) best = s;
      break;
    }
  }
  Word out;
  for (std::size_t k = 0; k < n; ++k) out.push(ls[(best + k) % n]);
  return out;
}

// ------------------------------------------------------------ GeneratorSet

namespace {
int first_dimension(const std::vector<RationalMatrix>& gens) {
  return gens.empty() ? 0 : gens.front().n();
}
}  // namespace

GeneratorSet::GeneratorSet(std::vector<std::string> names, std::vector<RationalMatrix> gens)
    : n_(first_dimension(gens)) {
  *this = GeneratorSet(n_, std::move(names), std::move(gens));
}

GeneratorSet::GeneratorSet(int n, std::vector<std::string> names, std::vector<RationalMatrix> gens)
    : n_(n), names_(std::move(names)), gens_(std::move(gens)) {
  if (names_.size() != gens_.size()) throw DimensionError("one name per generator required");
  std::set<std::string> seen;
  for (const auto& nm : names_) {
    if (nm.empty()) throw DomainError("generator names must be nonempty");
    if (!seen.insert(nm).second) throw DomainError("duplicate generator name '" + nm + "'");
  }
  for (const auto& g : gens_) {
    if (g.n() != n_) throw DimensionError("generators must share one dimension");
    inv_.push_back(g.inverse());
  }
}

std::optional<std::size_t> GeneratorSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

bool GeneratorSet::is_integral() const {
  return std::all_of(gens_.begin(), gens_.end(), [](const RationalMatrix& g) { return g.is_integral(); });
}

// ----------------------------------------------------------------- parsing

namespace {

bool starts_with(const std::string& s, std::size_t pos, const std::string& p) {
  return s.compare(pos, p.size(), p) == 0;
}

// Longest generator name matching at pos; case_fold lowercases the first char.
std::optional<std::pair<std::size_t, std::size_t>> match_name(const std::string& text,
                                                              std::size_t pos,
                                                              const GeneratorSet& gens,
                                                              bool case_fold) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string nm = gens.name(i);
    if (case_fold) {
      if (!std::islower(static_cast<unsigned char>(nm[0]))) continue;
      nm[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(nm[0])));
      if (gens.index_of(nm)) continue;
    }
    if (starts_with(text, pos, nm) && (!best || nm.size() > best->second)) best = {{i, nm.size()}};
  }
  return best;
}

long parse_exponent(const std::string& text, std::size_t& pos) {
  const std::size_t start = pos;
  if (starts_with(text, pos, "⁻¹")) {  // superscript minus one
    pos += 5;
    return -1;
  }
  if (pos >= text.size() || text[pos] != '^') return 1;
  ++pos;
  bool braced = false;
  if (pos < text.size() && text[pos] == '{') {
    braced = true;
    ++pos;
  }
  bool neg = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    neg = text[pos] == '-';
    ++pos;
  }
  const std::size_t digits = pos;
  long value = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + (text[pos] - '0');
    if (value > 1000000) throw ParseError("exponent too large", digits);
    ++pos;
  }
  if (pos == digits) throw ParseError("malformed exponent after '^'", start);
  if (braced) {
    if (pos >= text.size() || text[pos] != '}') throw ParseError("missing '}' in exponent", pos);
    ++pos;
  }
  return neg ? -value : value;
}

}  // namespace

Word parse_word(const std::string& text, const GeneratorSet& gens) {
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const unsigned char ch = static_cast<unsigned char>(text[pos]);
    if (std::isspace(ch) || ch == '*' || ch == '.') {
      ++pos;
      continue;
    }
    const std::size_t token = pos;
    int sign = 1;
    std::size_t gen = 0;
    if (auto m = match_name(text, pos, gens, false)) {
      gen = m->first;
      pos += m->second;
    } else if (auto u = match_name(text, pos, gens, true)) {
      gen = u->first;
      pos += u->second;
      sign = -1;
    } else if (ch == '1' &&
               (pos + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[pos + 1])))) {
      ++pos;
      continue;
    } else {
      throw ParseError("unknown generator token", token);
    }
    const long e = parse_exponent(text, pos);
    const int s = e < 0 ? -sign : sign;
    for (long k = 0; k < (e < 0 ? -e : e); ++k) w.push(Letter{static_cast<int>(gen), s});
  }
  return w;
}

std::string format_word(const Word& w, const GeneratorSet& gens) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += gens.name(static_cast<std::size_t>(w[i].gen));
    if (w[i].sign < 0) out += "^-1";
  }
  return out;
}

RationalMatrix evaluate(const Word& w, const GeneratorSet& gens) {
  RationalMatrix m = RationalMatrix::identity(gens.n());
  for (Letter l : w.letters()) {
    if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= gens.size())
      throw DomainError("word uses an unknown generator index");
    m = m * gens.letter(l);
  }
  return m;
}

// ------------------------------------------------------------- enumeration

std::size_t EnumerationResult::count_at_length(int L) const {
  if (L < 0 || static_cast<std::size_t>(L) + 1 >= level_start.size()) return 0;
  return level_start[L + 1] - level_start[L];
}

std::optional<std::size_t> EnumerationResult::find(const RationalMatrix& m) const {
  auto range = index.equal_range(m.hash());
  for (auto it = range.first; it != range.second; ++it)
    if (elements[it->second].matrix == m) return it->second;
  return std::nullopt;
}

std::size_t free_word_count(std::size_t rank, int max_len) {
  if (rank == 0) return 1;
  std::size_t total = 1, level = 2 * rank;
  for (int k = 1; k <= max_len; ++k) {
    total += level;
    level *= 2 * rank - 1;
  }
  return total;
}

namespace {

std::size_t element_bytes(const Element& e) {
  std::size_t b = sizeof(Element) + 96 + e.word.size() * sizeof(Letter);
  const int n = e.matrix.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b += sizeof(mpz_class) + 8 * mpz_size(e.matrix.numerator(i, j).get_mpz_t());
  return b;
}

struct Candidate {
  std::size_t parent;
  Letter letter;
  RationalMatrix matrix;
};

}  // namespace

EnumerationResult enumerate(const GeneratorSet& gens, const EnumerationOptions& opts) {
  if (opts.max_len < 0) throw DomainError("max_len must be nonnegative");
  EnumerationResult res;
  res.dedup = opts.dedup;
  res.max_len = opts.max_len;
  const int n = gens.n() > 0 ? gens.n() : 1;

  std::vector<Letter> alphabet;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    alphabet.push_back({static_cast<int>(i), 1});
    alphabet.push_back({static_cast<int>(i), -1});
  }

  auto add = [&](Element e) -> bool {
    res.bytes_estimate += element_bytes(e);
    if (opts.dedup) res.index.emplace(e.matrix.hash(), res.elements.size());
    res.elements.push_back(std::move(e));
    return opts.stop_when && opts.stop_when(res.elements.back());
  };

  res.level_start.push_back(0);
  if (add(Element{Word(), RationalMatrix::identity(n)})) {
    res.stopped_early = true;
    res.level_start.push_back(res.elements.size());
    return res;
  }
  res.level_start.push_back(res.elements.size());
  res.complete_len = 0;

  const int workers = std::max(1, opts.workers);
  for (int L = 1; L <= opts.max_len; ++L) {
    const std::size_t lo = res.level_start[L - 1], hi = res.level_start[L];
    if (lo == hi) {
      res.level_start.push_back(res.elements.size());
      res.complete_len = L;
      continue;
    }

    // Products are computed in parallel shards; insertion is sequential in
    // (parent, letter) order, which fixes the result independent of workers.
    std::vector<std::vector<Candidate>> shards(workers);
    auto work = [&](int wkr) {
      const std::size_t count = hi - lo;
      const std::size_t a = lo + count * wkr / workers, b = lo + count * (wkr + 1) / workers;
      for (std::size_t p = a; p < b; ++p) {
        const Element& parent = res.elements[p];
        for (Letter l : alphabet) {
          if (!parent.word.empty() && parent.word.back() == l.inverse()) continue;
          shards[wkr].push_back({p, l, parent.matrix * gens.letter(l)});
        }
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int wkr = 0; wkr < workers; ++wkr) pool.emplace_back(work, wkr);
      for (auto& t : pool) t.join();
    }

    bool stop = false;
    for (auto& shard : shards) {
      for (auto& c : shard) {
        Word w = res.elements[c.parent].word;
        w.push(c.letter);
        if (opts.dedup) {
          if (auto prev = res.find(c.matrix)) {
            ++res.relations_seen;
            if (res.relations.size() < opts.max_relations) {
              const Word& earlier = res.elements[*prev].word;
              res.relations.push_back({w, earlier, w * earlier.inverse()});
            }
            continue;
          }
        }
        if (res.bytes_estimate > opts.memory_budget) {
          res.partial = true;
          stop = true;
          break;
        }
        if (add(Element{std::move(w), std::move(c.matrix)})) {
          res.stopped_early = true;
          stop = true;
          break;
        }
      }
      if (stop) break;
    }
    res.level_start.push_back(res.elements.size());
    if (stop) break;
    res.complete_len = L;
  }
  return res;
}

EnumerationResult enumerate(const GeneratorSet& gens, int max_len, bool dedup) {
  EnumerationOptions o;
  o.max_len = max_len;
  o.dedup = dedup;
  return enumerate(gens, o);
}

}  // namespace limitset
