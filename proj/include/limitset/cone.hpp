#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "limitset/criteria3.hpp"
#include "limitset/growth.hpp"
#include "limitset/spectral.hpp"
#include "limitset/words.hpp"

namespace limitset {

struct ConeRay {
  AVector lambda;           // Jordan projection of the witness
  AVector normalized;       // sum |lambda_i| = 2
  AVector span_normalized;  // lambda_1 - lambda_n = 1
  std::vector<double> slice;  // simple roots divided by their sum
  Word word;
  std::size_t multiplicity = 1;  // loxodromic elements sharing this ray
};

// Slice chart: simple roots over their sum. For n = 3 the slice is the
// segment x = alpha_12 / (alpha_12 + alpha_23), plotted as (x, 1 - x).
std::vector<double> slice_coordinates(const AVector& v);

struct ConeEstimate {
  int n = 0;
  int max_word_len = 0;
  std::vector<ConeRay> rays;  // BFS order of first witness
  std::vector<std::size_t> hull;  // extreme rays, ordered along the hull
  bool experimental = false;      // n > 3: support-direction extreme set
  std::size_t elements_scanned = 0;
  std::size_t loxodromic = 0;
};

ConeEstimate cone_estimate(const GeneratorSet& gens, int max_len, int workers = 1);
ConeEstimate cone_estimate(const GeneratorSet& gens, const EnumerationResult& e, int workers = 1);

struct BoundaryVerdict {
  bool on_boundary = false;
  double distance = 0;          // to the hull boundary, slice coordinates
  double supporting_ratio = 0;  // lambda_{1,2} / lambda_{n-1,n} of v
  bool inside = false;          // within tolerance of the hull
};

// Throws DomainError for an empty hull or v ~ 0, DimensionError on size mismatch.
BoundaryVerdict boundary_test(const ConeEstimate& est, const AVector& v);

// Largest signed distance of any slice point of `inner` outside the hull of
// `outer` (<= 0 when contained).
double hull_excess(const ConeEstimate& inner, const ConeEstimate& outer);

// alpha_{1,2}(v) / alpha_{n-1,n}(v); +inf when the denominator vanishes.
double ratio_12_over_last(const AVector& v);

struct RatioViolation {
  Word word;
  double ratio = 0;
};

struct RatioReport {
  int max_len = 0;
  double bound = 0;          // max ratio over a^{+-1}, before slack
  double slack = 1e-8;
  std::vector<double> a_ratios;  // a, a^-1
  std::size_t words_checked = 0;  // cyclically reduced words
  std::size_t classes = 0;        // up to rotation
  std::size_t skipped = 0;        // lambda_{n-1,n} < 1e-12
  std::vector<Word> skipped_words;
  double max_ratio = 0;
  std::optional<Word> max_word;
  std::vector<RatioViolation> violations;
  bool pass() const { return violations.empty(); }
};

// gens = {a, b}, a first. Throws DimensionError for n < 3 or the wrong
// number of generators, DomainError if a or b is not loxodromic.
RatioReport ratio_check(const GeneratorSet& gens, int max_len, int workers = 1);

struct ThmA1Options {
  int search_len = 4;           // candidate words for a1, b1 in the seed
  std::vector<long> l_powers = {1, 2, 4};
  std::vector<long> k_powers = {1, 2, 4, 8, 16};
  int check_len = 8;            // ratio_check horizon
  int cone_len = 6;             // cone_estimate horizon
  int gate_len = 6;
  double r = 0.1;
  std::size_t samples = 256;
  int pingpong_len = 6;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct ThmA1Attempt {
  long l = 0, k = 0;
  std::string stage;  // "pingpong", "ratio", "boundary", "ok"
  std::string detail;
};

struct ThmA1Result {
  Word a1_word, b1_word;  // in the seed generators
  RationalMatrix a1, b1;
  bool a1_squared = false;
  long l = 0, k = 0;
  RationalMatrix a, b;    // a1^l, b1^k
  std::vector<double> a_ratios;
  std::vector<double> b1_ratios;
  double transversality = 0;  // min over x+-, y+- pairs
  ZariskiReport gate;          // on <a1, b1>
  PingPongCertificate certificate;
  RatioReport ratios;
  ConeEstimate cone;
  BoundaryVerdict boundary;
  std::vector<ThmA1Attempt> attempts;
  GeneratorSet pair() const;
};

// Throws DomainError if the seed fails the gate, BudgetExhausted when no
// candidate or power pair passes.
ThmA1Result build_thmA1_pair(const GeneratorSet& seed, const ThmA1Options& opts = {});

}  // namespace limitset
