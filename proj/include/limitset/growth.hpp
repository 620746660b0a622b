#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "limitset/exactmat.hpp"
#include "limitset/flags.hpp"
#include "limitset/words.hpp"

namespace limitset {

// Orbital counting for one simple root alpha_{i,i+1}.
struct RootExponent {
  int root = 1;                 // i, 1-based
  std::vector<double> grid;     // R values
  std::vector<std::size_t> counts;  // N_alpha(R) over deduped elements
  double slope = 0;             // delta-hat, clamped at 0
  double raw_slope = 0;
  double intercept = 0;
  double residual = 0;          // RMS of the log-count fit
  double r_lo = 0;
  double r_hi = 0;              // completeness cutoff: min alpha over frontier words
};

struct ExponentEstimate {
  int max_len = 0;
  std::size_t elements = 0;
  std::vector<RootExponent> roots;
  double max_slope() const;
};

// Throws InsufficientData for empty generator sets or too thin a window.
ExponentEstimate critical_exponent(const GeneratorSet& gens, int max_len, int workers = 1);
ExponentEstimate critical_exponent(const GeneratorSet& gens, const EnumerationResult& e,
                                   int workers = 1);

struct AnosovRootReport {
  int root = 1;
  double l_hat = 0;       // max |g| / (alpha(mu(g)) + A-hat); +inf when unbounded
  int a_hat = 0;          // grid choice maximizing the envelope value at the horizon
  std::vector<double> min_by_length;  // min alpha(mu(g)) over elements of word length l
  double min_value = 0;   // min over nontrivial elements
  // Second-half linear-growth margin: min over l > h of
  // m(l) - m(h) - 3 (l - h) s / 4 with s the mean increment on [1, h].
  double linear_margin = 0;
  bool pass = false;
};

struct AnosovReport {
  int max_len = 0;
  std::vector<AnosovRootReport> roots;
  bool pass() const;
};

AnosovReport anosov_growth_check(const GeneratorSet& gens, int max_len, int workers = 1);

struct PingPongOptions {
  int len_cap = 8;      // nontrivial gamma up to this length
  int k_cap = 20;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct PingPongCertificate {
  enum class Status { Certified, PreconditionFailed, Eq32Failed, Eq33Failed };
  Status status = Status::PreconditionFailed;
  bool ok() const { return status == Status::Certified; }

  Flag x_plus, x_minus;
  double fixed_residual = 0;
  double r = 0;
  long m = 0;
  int len_cap = 0;
  int k_cap = 0;
  std::uint64_t seed = 0;
  std::size_t samples_b = 0;       // B = B+_{r/2} u B-_{r/2}
  std::size_t samples_sphere = 0;  // boundary spheres of B+-_r
  std::size_t samples_d = 0;       // D sample: L part plus gamma B_r images
  std::size_t limit_points = 0;
  std::size_t gammas = 0;

  double precondition_margin = 0;  // min transversality among x+-, limit sample
  double gp_margin = 0;            // min over B_r x D sample
  double eq32_margin = 0;          // D avoids B, tail gamma B lands in L
  double eq33_margin = 0;          // r/2 - d(beta^{+-mk} y, x+-)
  std::string witness;             // failing sample description
};

const char* to_string(PingPongCertificate::Status s);

PingPongCertificate pingpong_certify(const GeneratorSet& prev, const RationalMatrix& beta,
                                     double r, long m, std::size_t samples,
                                     const PingPongOptions& opts = {});

struct PowerSelection {
  long m = 0;
  double min_root = 0;  // min over roots of alpha(mu(beta^{+-1}))
  long n = 0;
  bool bound_holds = false;  // N <= m * min_root
  bool zero = false;
};

// Throws DomainError for N < 1 or an effectively singular beta.
PowerSelection select_power(const RationalMatrix& beta, long n);

struct KeyLemmaOptions {
  int j_max = 4;             // |j_i| <= j_max
  int gamma_len = 3;         // gamma_i drawn from deduped elements up to this length
  bool positive_only = false;  // j_i > 0 and gamma_i positive words
  std::uint64_t seed = 1;
  int workers = 1;
};

struct KeyLemmaRoot {
  int root = 1;
  double max_deviation = 0;
  std::string witness;
  std::vector<double> max_by_blocks;  // index l - 1
};

struct KeyLemmaReport {
  int max_blocks = 0;
  std::size_t samples = 0;
  std::size_t words_tested = 0;
  std::vector<std::size_t> census;  // words tested per block count
  std::vector<KeyLemmaRoot> roots;
  std::uint64_t seed = 0;
  double constant() const;  // max over roots
};

// Tests samples x max_blocks block words: sample s contributes its first l
// blocks for every l <= max_blocks, so larger max_blocks test supersets.
KeyLemmaReport key_lemma_audit(const GeneratorSet& prev, const RationalMatrix& beta,
                               int max_blocks, std::size_t samples,
                               const KeyLemmaOptions& opts = {});

struct Stage {
  GeneratorSet gens;
  std::optional<PingPongCertificate> certificate;
};

struct StageAudit {
  int stage = 0;
  bool refused = false;
  std::string reason;
  double budget = 0;  // 1 - 2^-stage
  std::vector<double> exponents;       // per root at max_len
  std::vector<double> residuals;
  std::vector<double> horizon_exponents;  // per root at max_len - 2
  bool pass = false;
};

std::vector<StageAudit> condition31_audit(const std::vector<Stage>& stages, int max_len,
                                          int workers = 1);

}  // namespace limitset
