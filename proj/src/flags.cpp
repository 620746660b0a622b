#include "limitset/flags.hpp"

#include <algorithm>
#include <cmath>

#include "limitset/bigfloat.hpp"
#include "limitset/config.hpp"
#include "limitset/errors.hpp"
#include "limitset/kernels.hpp"
#include "limitset/spectral.hpp"

namespace limitset {

Flag::Flag(RealMatrix basis) : frame_(std::move(basis)) {
  if (frame_.rows() != frame_.cols()) throw DimensionError("flag frame must be square");
  if (!orthonormalize_columns(frame_)) throw DomainError("flag basis is degenerate");
}

Flag Flag::standard(int n) { return Flag(RealMatrix::identity(n)); }

Flag Flag::reversed(int n) {
  RealMatrix m(n, n);
  for (int j = 0; j < n; ++j) m(n - 1 - j, j) = 1.0;
  return Flag(m);
}

std::vector<double> Flag::column(int k) const {
  return std::vector<double>(frame_.col(k), frame_.col(k) + n());
}

double Flag::gram_residual() const {
  RealMatrix g = frame_.transpose() * frame_;
  double r = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j) r = std::max(r, std::fabs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return r;
}

TransversalityReport transversality_margin(const Flag& f, const Flag& g) {
  if (f.n() != g.n()) throw DimensionError("flags of different dimension");
  const int n = f.n();
  TransversalityReport rep;
  rep.margin = 1.0;
  for (int k = 1; k < n; ++k) {
    RealMatrix m(n, n);
    for (int j = 0; j < k; ++j) std::copy(f.frame().col(j), f.frame().col(j) + n, m.col(j));
    for (int j = 0; j < n - k; ++j) std::copy(g.frame().col(j), g.frame().col(j) + n, m.col(k + j));
    const double d = std::fabs(determinant(m));
    rep.levels.push_back(d);
    rep.margin = std::min(rep.margin, d);
  }
  if (n < 2) rep.margin = 1.0;
  rep.transverse = rep.margin > tolerances().gp;
  return rep;
}

double flag_distance(const Flag& f, const Flag& g) {
  if (f.n() != g.n()) throw DimensionError("flags of different dimension");
  const int n = f.n();
  const auto& ker = kernels::active();
  RealMatrix pf(n, n), pg(n, n);
  double best = 0;
  for (int k = 1; k < n; ++k) {
    // Accumulate the rank-one projector of column k-1 into each projector.
    const double* u = f.frame().col(k - 1);
    const double* v = g.frame().col(k - 1);
    for (int j = 0; j < n; ++j) {
      ker.axpy(pf.col(j), u, u[j], n);
      ker.axpy(pg.col(j), v, v[j], n);
    }
    SymEigen e = jacobi_eigen(pf - pg);
    const double s = std::max(std::fabs(e.values.front()), std::fabs(e.values.back()));
    best = std::max(best, std::min(1.0, s));
  }
  return best;
}

Flag act(const RealMatrix& g, const Flag& f) { return Flag(g * f.frame()); }

namespace {

// log2 of ||g||_F ||g^-1||_F, computed from exact data.
double log2_condition_estimate(const RationalMatrix& g) {
  auto log2_frob = [](const RationalMatrix& m) {
    mpq_class s = m.frobenius_sq();
    BigFloat b(s, 64);
    return 0.5 * b.log2_abs();
  };
  return log2_frob(g) + log2_frob(g.inverse());
}

Flag act_extended(const RationalMatrix& g, const Flag& f, BigFloat::prec_t prec) {
  const int n = g.n();
  std::vector<BigFloat> ge;
  ge.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ge.emplace_back(g.entry(i, j), prec);
  // Columns of g * frame, then Gram-Schmidt (two passes) in extended precision.
  std::vector<std::vector<BigFloat>> cols(n, std::vector<BigFloat>(n, BigFloat(prec)));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      BigFloat acc(prec);
      for (int k = 0; k < n; ++k) acc += ge[static_cast<std::size_t>(i) * n + k] * BigFloat(f.frame()(k, j), prec);
      cols[j][i] = std::move(acc);
    }
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int p = 0; p < j; ++p) {
        BigFloat d(prec);
        for (int i = 0; i < n; ++i) d += cols[p][i] * cols[j][i];
        for (int i = 0; i < n; ++i) cols[j][i] -= d * cols[p][i];
      }
    BigFloat nrm(prec);
    for (int i = 0; i < n; ++i) nrm += cols[j][i] * cols[j][i];
    if (nrm.is_zero()) throw ConvergenceError("flag image collapsed in extended precision");
    nrm = sqrt(nrm);
    for (int i = 0; i < n; ++i) cols[j][i] /= nrm;
  }
  RealMatrix out(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = cols[j][i].to_double();
  return Flag(out);
}

constexpr double kDoubleConditionBits = 16.0;

BigFloat::prec_t extended_precision(double log2_cond) {
  return static_cast<BigFloat::prec_t>(std::max(128.0, 2.0 * log2_cond + 96.0));
}

}  // namespace

Flag act(const RationalMatrix& g, const Flag& f) {
  if (g.n() != f.n()) throw DimensionError("matrix and flag dimensions differ");
  const double c = log2_condition_estimate(g);
  if (c <= kDoubleConditionBits) return act(RealMatrix::from_rational(g), f);
  return act_extended(g, f, extended_precision(c));
}

std::vector<Flag> act(const RationalMatrix& g, const std::vector<Flag>& fs) {
  std::vector<Flag> out;
  out.reserve(fs.size());
  if (fs.empty()) return out;
  const int n = g.n();
  const double c = log2_condition_estimate(g);
  if (c > kDoubleConditionBits) {
    const auto prec = extended_precision(c);
    for (const auto& f : fs) out.push_back(act_extended(g, f, prec));
    return out;
  }
  // One batched product g * [F_1 | F_2 | ...].
  const RealMatrix gr = RealMatrix::from_rational(g);
  RealMatrix stacked(n, n * static_cast<int>(fs.size()));
  for (std::size_t s = 0; s < fs.size(); ++s)
    std::copy(fs[s].frame().data(), fs[s].frame().data() + n * n,
              stacked.data() + s * static_cast<std::size_t>(n) * n);
  RealMatrix prod = gr * stacked;
  for (std::size_t s = 0; s < fs.size(); ++s) {
    RealMatrix m(n, n);
    std::copy(prod.data() + s * static_cast<std::size_t>(n) * n,
              prod.data() + (s + 1) * static_cast<std::size_t>(n) * n, m.data());
    out.emplace_back(std::move(m));
  }
  return out;
}

Flag random_flag(int n, std::mt19937_64& rng) { return Flag(random_orthogonal(n, rng)); }

Flag rotate_flag(const Flag& f, const RealMatrix& skew, double t) {
  RealMatrix k = skew;
  kernels::active().scale(k.data(), t, k.rows() * k.cols());
  return Flag(expm(k) * f.frame());
}

Flag sample_at_distance(const Flag& f, double r, std::mt19937_64& rng) {
  if (!(r > 0.0) || r > 1.0) throw DomainError("sampling radius must lie in (0, 1]");
  const int n = f.n();
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    RealMatrix k(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        k(i, j) = gauss(rng);
        k(j, i) = -k(i, j);
      }
    const double kn = k.frobenius();
    if (kn == 0.0) continue;
    kernels::active().scale(k.data(), 1.0 / kn, n * n);
    // Bracket the first crossing of d(t) = r, then bisect.
    double lo = 0.0, hi = r;
    while (flag_distance(rotate_flag(f, k, hi), f) < r && hi < 4.0) {
      lo = hi;
      hi *= 2.0;
    }
    if (flag_distance(rotate_flag(f, k, hi), f) < r) continue;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (flag_distance(rotate_flag(f, k, mid), f) < r)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-15 * hi) break;
    }
    return rotate_flag(f, k, hi);
  }
  throw ConvergenceError("could not place a flag at the requested distance");
}

Flag sample_in_ball(const Flag& f, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = r * u(rng);
  if (rho <= 0.0) return f;
  return sample_at_distance(f, rho, rng);
}

FixedFlags fixed_flags(const RationalMatrix& g) {
  CharPoly cp = char_poly(g);
  if (!is_loxodromic(cp)) throw DomainError("fixed_flags requires a loxodromic element");
  const int n = g.n();
  Spectrum s = spectrum(cp.poly);
  std::vector<const Root*> order;
  for (const auto& r : s.roots) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const Root* a, const Root* b) { return a->log_modulus > b->log_modulus; });

  const auto prec = s.precision;
  std::vector<std::vector<BigFloat>> vecs;
  for (const Root* r : order) vecs.push_back(real_eigenvector_big(g, r->z, false, prec));

  auto frame_from = [&](const std::vector<int>& idx) {
    std::vector<std::vector<BigFloat>> cols;
    for (int i : idx) cols.push_back(vecs[i]);
    for (int j = 0; j < n; ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (int p = 0; p < j; ++p) {
          BigFloat d(prec);
          for (int i = 0; i < n; ++i) d += cols[p][i] * cols[j][i];
          for (int i = 0; i < n; ++i) cols[j][i] -= d * cols[p][i];
        }
      BigFloat nrm(prec);
      for (int i = 0; i < n; ++i) nrm += cols[j][i] * cols[j][i];
      if (nrm.is_zero()) throw ConvergenceError("eigenbasis is numerically degenerate");
      nrm = sqrt(nrm);
      for (int i = 0; i < n; ++i) cols[j][i] /= nrm;
    }
    RealMatrix m(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) m(i, j) = cols[j][i].to_double();
    return Flag(m);
  };
  std::vector<int> desc(n), asc(n);
  for (int i = 0; i < n; ++i) {
    desc[i] = i;
    asc[i] = n - 1 - i;
  }
  FixedFlags out{frame_from(desc), frame_from(asc), 0.0};
  out.residual = std::max(flag_distance(act(g, out.attractive), out.attractive),
                          flag_distance(act(g, out.repulsive), out.repulsive));
  return out;
}

std::vector<LimitSample> limit_set_sample(const GeneratorSet& gens,
                                          const EnumerationResult& enumeration, double merge_eps) {
  std::vector<LimitSample> out;
  for (const auto& e : enumeration.elements) {
    if (e.word.empty() || !is_loxodromic(e.matrix)) continue;
    Flag f = fixed_flags(e.matrix).attractive;
    bool merged = false;
    for (auto& s : out)
      if (flag_distance(s.flag, f) <= merge_eps) {
        ++s.multiplicity;
        merged = true;
        break;
      }
    if (!merged) out.push_back({std::move(f), e.word, 1});
  }
  (void)gens;
  return out;
}

std::vector<LimitSample> limit_set_sample(const GeneratorSet& gens, int max_len, double merge_eps) {
  return limit_set_sample(gens, enumerate(gens, max_len, true), merge_eps);
}

double diameter(const std::vector<Flag>& fs) {
  double d = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) d = std::max(d, flag_distance(fs[i], fs[j]));
  return d;
}

std::vector<ContractionRow> contraction_diagnostic(const GeneratorSet& gens, int max_len,
                                                   const std::vector<Flag>& sample) {
  if (sample.empty()) throw DomainError("contraction_diagnostic needs a nonempty flag sample");
  EnumerationResult words = enumerate(gens, max_len, false);
  std::vector<ContractionRow> rows;
  for (int L = 0; L <= max_len; ++L) {
    ContractionRow row;
    row.length = L;
    for (std::size_t i = words.level_start[L]; i < words.level_start[L + 1]; ++i) {
      row.max_diameter = std::max(row.max_diameter, diameter(act(words.elements[i].matrix, sample)));
      ++row.words;
    }
    rows.push_back(row);
  }
  return rows;
}

std::pair<std::vector<double>, std::vector<double>> projections_sl3(const Flag& f) {
  if (f.n() != 3) throw DimensionError("projections_sl3 requires n = 3");
  auto normalize = [](std::vector<double> v) {
    int big = 0;
    for (int i = 1; i < 3; ++i)
      if (std::fabs(v[i]) > std::fabs(v[big])) big = i;
    if (v[big] < 0)
      for (double& x : v) x = -x;
    return v;
  };
  return {normalize(f.column(0)), normalize(f.column(2))};
}

}  // namespace limitset
