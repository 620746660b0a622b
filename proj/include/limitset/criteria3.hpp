#pragma once

#include <optional>
#include <string>
#include <vector>

#include "limitset/exactmat.hpp"
#include "limitset/spectral.hpp"
#include "limitset/words.hpp"

namespace limitset {

// Heuristic stand-in for Zariski density: absolute irreducibility of the
// enumerated span, a loxodromic word, and no invariant bilinear form.
struct ZariskiReport {
  enum class Result { Pass, Fail, Inconclusive };
  Result result = Result::Inconclusive;
  int max_len = 0;
  std::size_t span_dimension = 0;
  bool span_stabilized = false;  // span stopped growing before the horizon
  std::optional<Word> loxodromic;
  std::size_t invariant_forms = 0;  // dim {B : g^T B g = B for all generators}
  std::string detail;
};

const char* to_string(ZariskiReport::Result r);

ZariskiReport zariski_density_heuristic(const GeneratorSet& gens, int max_len, int workers = 1);

struct ComplexWitness {
  Word word;
  RationalMatrix matrix;
  mpq_class discriminant;
  FiniteOrder order;
  InvariantPair invariants;  // real eigenline and invariant plane
};

// Shortest (BFS) deduped word with negative cubic discriminant and provably
// infinite order. Requires n = 3 and integer generators.
std::optional<ComplexWitness> find_complex_spectrum_witness(const GeneratorSet& gens, int max_len,
                                                            int workers = 1);
bool verify_complex_witness(const GeneratorSet& gens, const Word& w);

struct CommutingWitness {
  enum class Case { Semisimple, Unipotent, Mixed };
  Word u, v;
  RationalMatrix mu, mv;
  Case kind = Case::Mixed;
  SpectralClass::Tag tag_u = SpectralClass::Tag::Mixed;
  SpectralClass::Tag tag_v = SpectralClass::Tag::Mixed;
  int power_horizon = 0;  // u^p != v^q for 0 < |p| + |q|, |p|, |q| <= horizon
  bool integral = true;
  bool singular_semisimple_free = true;  // checked on u, v, uv, uv^-1
};

const char* to_string(CommutingWitness::Case c);

constexpr int kPowerHorizon = 50;

std::optional<CommutingWitness> find_commuting_pair(const GeneratorSet& gens, int max_len,
                                                    int workers = 1);
bool verify_commuting_witness(const GeneratorSet& gens, const Word& u, const Word& v,
                              int horizon = kPowerHorizon);

// Elements s, t and a rational basis h = [p1 p2 l] with h^-1 s h = S + 1 and
// h^-1 t h = T + 1, where S = [[0,-1],[1,0]], T = [[1,1],[0,1]].
struct BlockWitness {
  Word s, t;
  QMatrix basis;
};

std::optional<BlockWitness> find_sl2z_block(const GeneratorSet& gens, int max_len, int workers = 1);
bool verify_block_witness(const GeneratorSet& gens, const Word& s, const Word& t, const QMatrix& basis);

struct CriteriaBudget {
  int max_len = 18;     // criterion 3 horizon
  int pair_len = 4;     // criteria 1 and 2 horizon, clipped to max_len
  int gate_len = 6;     // clipped to max_len
  int workers = 1;
};

struct CriteriaReport {
  ZariskiReport gate;
  bool integral = true;
  std::optional<ComplexWitness> criterion3;
  std::optional<CommutingWitness> criterion1;
  std::optional<BlockWitness> criterion2;
  std::vector<int> searched;  // criteria run, in order
  bool full_limit_set = false;
  int witness_criterion = 0;  // 0 when none
  int horizon = 0;
  std::vector<std::string> notes;
};

// Gate, then criteria 3, 1, 2; stops at the first exact witness.
CriteriaReport run_criteria(const GeneratorSet& gens, const CriteriaBudget& budget);

}  // namespace limitset
