#pragma once

#include <random>
#include <utility>
#include <vector>

#include "limitset/exactmat.hpp"
#include "limitset/realmat.hpp"
#include "limitset/words.hpp"

namespace limitset {

// Complete flag V_1 c ... c V_{n-1} as an orthonormal frame; V_k is spanned
// by the first k columns.
class Flag {
 public:
  Flag() = default;
  // Gram-Schmidt of any basis; throws DomainError if the columns are dependent.
  explicit Flag(RealMatrix basis);
  static Flag standard(int n);
  // w0 image of the standard flag: columns e_n, ..., e_1.
  static Flag reversed(int n);

  int n() const { return frame_.rows(); }
  const RealMatrix& frame() const { return frame_; }
  std::vector<double> column(int k) const;
  // max |F^T F - I|
  double gram_residual() const;

 private:
  RealMatrix frame_;
};

struct TransversalityReport {
  double margin = 0;           // min over levels
  std::vector<double> levels;  // |det[F_1..k | F'_1..n-k]|, k = 1..n-1
  bool transverse = false;     // margin > tolerances().gp
};

TransversalityReport transversality_margin(const Flag& f, const Flag& g);

// max_k || P_{V_k(F)} - P_{V_k(F')} ||_2 : largest principal-angle sine over
// the levels. Diameter 1.
double flag_distance(const Flag& f, const Flag& g);

Flag act(const RealMatrix& g, const Flag& f);
// Uses doubles when the condition number allows, extended precision otherwise.
Flag act(const RationalMatrix& g, const Flag& f);
std::vector<Flag> act(const RationalMatrix& g, const std::vector<Flag>& fs);

Flag random_flag(int n, std::mt19937_64& rng);

// exp(t K) F for skew-symmetric K.
Flag rotate_flag(const Flag& f, const RealMatrix& skew, double t);
// Flag at distance r (within 1e-12 relative) from f along a random direction.
Flag sample_at_distance(const Flag& f, double r, std::mt19937_64& rng);
// Flag at a uniformly drawn distance in [0, r] from f.
Flag sample_in_ball(const Flag& f, double r, std::mt19937_64& rng);

struct FixedFlags {
  Flag attractive;
  Flag repulsive;
  double residual = 0;  // max of d(g F+, F+), d(g F-, F-)
};
// Throws DomainError unless g is loxodromic; ConvergenceError if the
// eigenbasis cannot be resolved.
FixedFlags fixed_flags(const RationalMatrix& g);

struct LimitSample {
  Flag flag;
  Word word;
  std::size_t multiplicity = 1;  // loxodromic words sharing this flag
};
// Attractive flags of loxodromic deduped elements up to max_len, merged when
// within merge_eps, in BFS order of first witness.
std::vector<LimitSample> limit_set_sample(const GeneratorSet& gens, int max_len,
                                          double merge_eps = 1e-9);
std::vector<LimitSample> limit_set_sample(const GeneratorSet& gens,
                                          const EnumerationResult& enumeration,
                                          double merge_eps = 1e-9);

struct ContractionRow {
  int length = 0;
  double max_diameter = 0;
  std::size_t words = 0;
};
// For each word length, max over reduced words of that length of diam(w B).
std::vector<ContractionRow> contraction_diagnostic(const GeneratorSet& gens, int max_len,
                                                   const std::vector<Flag>& sample);
double diameter(const std::vector<Flag>& fs);

// n = 3: pi(F) = V_1 direction, pi*(F) = functional annihilating V_2.
std::pair<std::vector<double>, std::vector<double>> projections_sl3(const Flag& f);

}  // namespace limitset
