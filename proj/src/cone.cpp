#include "limitset/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "limitset/config.hpp"
#include "limitset/errors.hpp"
#include "limitset/flags.hpp"
#include "parallel.hpp"

namespace limitset {

namespace {

constexpr double kMergeEps = 1e-10;
constexpr double kRatioFloor = 1e-12;

AVector normalize_l1(const AVector& v) {
  const double s = v.l1();
  return s > 0 ? v.scaled(2.0 / s) : v;
}

AVector normalize_span(const AVector& v) {
  const double s = v[0] - v[static_cast<std::size_t>(v.n() - 1)];
  return s > 0 ? v.scaled(1.0 / s) : v;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Support family for n > 3: +-e_i and e_i - e_j.
std::vector<std::vector<double>> support_directions(std::size_t d) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < d; ++i)
    for (double s : {1.0, -1.0}) {
      std::vector<double> v(d, 0.0);
      v[i] = s;
      out.push_back(std::move(v));
    }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      std::vector<double> v(d, 0.0);
      v[i] = 1;
      v[j] = -1;
      out.push_back(std::move(v));
    }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Segment endpoints for n = 3 (x coordinate of the slice).
std::pair<double, double> segment(const ConeEstimate& est) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i : est.hull) {
    lo = std::min(lo, est.rays[i].slice[0]);
    hi = std::max(hi, est.rays[i].slice[0]);
  }
  return {lo, hi};
}

// Signed distance outside the hull (negative inside: minus the distance to its boundary).
double signed_outside(const ConeEstimate& est, const std::vector<double>& p) {
  if (est.n == 3) {
    const auto [lo, hi] = segment(est);
    return std::sqrt(2.0) * std::max(lo - p[0], p[0] - hi);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& d : support_directions(p.size())) {
    double h = -std::numeric_limits<double>::infinity();
    for (std::size_t i : est.hull) h = std::max(h, dot(d, est.rays[i].slice));
    worst = std::max(worst, (dot(d, p) - h) / norm(d));
  }
  return worst;
}

bool has_negative_eigenvalue(const RationalMatrix& g) {
  // Loxodromic: all roots real, so Descartes counts positive roots exactly.
  const auto cp = char_poly(g);
  const auto& c = cp.poly.coefficients();
  int changes = 0, last = 0;
  for (const auto& x : c) {
    const int s = sgn(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes != g.n();
}

std::vector<double> pm_ratios(const AVector& lambda) {
  return {ratio_12_over_last(lambda), ratio_12_over_last(opposition_involution(lambda))};
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// Reduced words of length exactly L in shortlex order.
void words_of_length(std::size_t gens, int L, std::vector<Word>& out) {
  std::vector<Letter> letters;
  for (std::size_t g = 0; g < gens; ++g) {
    letters.push_back({static_cast<int>(g), 1});
    letters.push_back({static_cast<int>(g), -1});
  }
  std::vector<Letter> cur;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == L) {
      out.push_back(reduce(cur, gens));
      return;
    }
    for (Letter l : letters) {
      if (!cur.empty() && cur.back() == l.inverse()) continue;
      cur.push_back(l);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
}

}  // namespace

std::vector<double> slice_coordinates(const AVector& v) {
  const int n = v.n();
  std::vector<double> s(static_cast<std::size_t>(n - 1));
  double sum = 0;
  for (int i = 1; i < n; ++i) {
    s[static_cast<std::size_t>(i - 1)] = simple_root(v, i);
    sum += s[static_cast<std::size_t>(i - 1)];
  }
  if (sum > 0)
    for (auto& x : s) x /= sum;
  return s;
}

double ratio_12_over_last(const AVector& v) {
  const int n = v.n();
  const double den = simple_root(v, n - 1);
  if (den < kRatioFloor) return std::numeric_limits<double>::infinity();
  return simple_root(v, 1) / den;
}

ConeEstimate cone_estimate(const GeneratorSet& gens, int max_len, int workers) {
  EnumerationOptions opts;
  opts.max_len = max_len;
  opts.dedup = true;
  opts.workers = workers;
  return cone_estimate(gens, enumerate(gens, opts), workers);
}

ConeEstimate cone_estimate(const GeneratorSet& gens, const EnumerationResult& e, int workers) {
  ConeEstimate est;
  est.n = gens.n();
  est.max_word_len = e.max_len;
  est.experimental = est.n > 3;

  // Conjugate words share a Jordan projection; group by canonical cyclic core.
  std::map<Word, std::size_t> class_of;
  std::vector<std::size_t> rep, elem_class(e.elements.size(), 0);
  for (std::size_t i = 0; i < e.elements.size(); ++i) {
    const Word& w = e.elements[i].word;
    if (w.empty()) continue;
    ++est.elements_scanned;
    Word key = canonical_rotation(cyclic_reduce(w).first);
    auto [it, fresh] = class_of.emplace(std::move(key), rep.size());
    if (fresh) rep.push_back(i);
    elem_class[i] = it->second;
  }
  std::vector<std::optional<AVector>> lam(rep.size());
  detail::parallel_for(rep.size(), workers, [&](std::size_t c) {
    const RationalMatrix& m = e.elements[rep[c]].matrix;
    if (is_loxodromic(m)) lam[c] = jordan_projection(m);
  });

  std::multimap<double, std::size_t> by_x;
  for (std::size_t i = 0; i < e.elements.size(); ++i) {
    if (e.elements[i].word.empty()) continue;
    const auto& l = lam[elem_class[i]];
    if (!l) continue;
    ++est.loxodromic;
    std::vector<double> s = slice_coordinates(*l);
    bool merged = false;
    for (auto it = by_x.lower_bound(s[0] - kMergeEps); it != by_x.end() && it->first <= s[0] + kMergeEps;
         ++it) {
      ConeRay& r = est.rays[it->second];
      bool close = true;
      for (std::size_t k = 0; k < s.size(); ++k) close = close && std::fabs(r.slice[k] - s[k]) <= kMergeEps;
      if (close) {
        ++r.multiplicity;
        merged = true;
        break;
      }
    }
    if (merged) continue;
    ConeRay r;
    r.lambda = *l;
    r.normalized = normalize_l1(*l);
    r.span_normalized = normalize_span(*l);
    r.slice = std::move(s);
    r.word = e.elements[i].word;
    by_x.emplace(r.slice[0], est.rays.size());
    est.rays.push_back(std::move(r));
  }
  if (est.rays.empty()) return est;

  if (est.n == 3) {
    // The slice is the segment (x, 1 - x): its hull is the two extreme x values.
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < est.rays.size(); ++i) {
      if (est.rays[i].slice[0] < est.rays[lo].slice[0]) lo = i;
      if (est.rays[i].slice[0] > est.rays[hi].slice[0]) hi = i;
    }
    est.hull = {lo};
    if (hi != lo) est.hull.push_back(hi);
  } else if (est.n == 2) {
    est.hull = {0};
  } else {
    const double tau = tolerances().hull;
    std::vector<bool> extreme(est.rays.size(), false);
    for (const auto& d : support_directions(est.rays[0].slice.size())) {
      double h = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t i = 0; i < est.rays.size(); ++i) {
        const double v = dot(d, est.rays[i].slice);
        if (v > h + tau) {
          h = v;
          arg = i;
        }
      }
      extreme[arg] = true;
    }
    for (std::size_t i = 0; i < extreme.size(); ++i)
      if (extreme[i]) est.hull.push_back(i);
  }
  return est;
}

BoundaryVerdict boundary_test(const ConeEstimate& est, const AVector& v) {
  if (est.hull.empty()) throw DomainError("boundary_test on an empty cone estimate");
  if (v.n() != est.n) throw DimensionError("boundary_test: vector dimension does not match the estimate");
  if (v.is_zero() || v.norm() < 1e-12) throw DomainError("boundary_test: zero vector");
  const double tau = tolerances().hull;
  BoundaryVerdict out;
  out.supporting_ratio = ratio_12_over_last(v);
  const std::vector<double> p = slice_coordinates(v);
  const double s = signed_outside(est, p);
  out.inside = s <= tau;
  if (est.n == 3 && est.hull.size() == 1) {
    out.distance = dist(p, est.rays[est.hull[0]].slice);
  } else {
    out.distance = std::fabs(s);
  }
  out.on_boundary = out.distance <= tau;
  return out;
}

double hull_excess(const ConeEstimate& inner, const ConeEstimate& outer) {
  if (outer.hull.empty()) throw DomainError("hull_excess: empty outer estimate");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i : inner.hull) {
    const auto& p = inner.rays[i].slice;
    if (outer.n == 3 && outer.hull.size() == 1) {
      worst = std::max(worst, dist(p, outer.rays[outer.hull[0]].slice));
    } else {
      worst = std::max(worst, signed_outside(outer, p));
    }
  }
  return worst;
}

RatioReport ratio_check(const GeneratorSet& gens, int max_len, int workers) {
  if (gens.n() < 3) throw DimensionError("ratio_check needs n >= 3");
  if (gens.size() != 2) throw DimensionError("ratio_check expects exactly two generators {a, b}");
  for (std::size_t i = 0; i < 2; ++i)
    if (!is_loxodromic(gens.matrix(i)))
      throw DomainError("ratio_check: generator " + gens.name(i) + " is not loxodromic");

  RatioReport rep;
  rep.max_len = max_len;
  rep.a_ratios = pm_ratios(jordan_projection(gens.matrix(0)));
  rep.bound = max_of(rep.a_ratios);

  std::vector<Word> words;
  for (int L = 1; L <= max_len; ++L) {
    std::vector<Word> level;
    words_of_length(gens.size(), L, level);
    for (auto& w : level)
      if (w.size() == 1 || w[0] != w.back().inverse()) words.push_back(std::move(w));
  }
  rep.words_checked = words.size();

  std::map<Word, std::size_t> class_of;
  std::vector<Word> reps;
  std::vector<std::size_t> cls(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto [it, fresh] = class_of.emplace(canonical_rotation(words[i]), reps.size());
    if (fresh) reps.push_back(it->first);
    cls[i] = it->second;
  }
  rep.classes = reps.size();

  std::vector<AVector> lam(reps.size());
  detail::parallel_for(reps.size(), workers,
                       [&](std::size_t c) { lam[c] = jordan_projection(evaluate(reps[c], gens)); });

  const int n = gens.n();
  const double limit = rep.bound + rep.slack;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const AVector& l = lam[cls[i]];
    if (simple_root(l, n - 1) < kRatioFloor) {
      ++rep.skipped;
      if (rep.skipped_words.size() < 64) rep.skipped_words.push_back(words[i]);
      continue;
    }
    const double q = simple_root(l, 1) / simple_root(l, n - 1);
    if (!rep.max_word || q > rep.max_ratio) {
      rep.max_ratio = q;
      rep.max_word = words[i];
    }
    if (q > limit) rep.violations.push_back({words[i], q});
  }
  return rep;
}

GeneratorSet ThmA1Result::pair() const { return GeneratorSet({"a", "b"}, {a, b}); }

ThmA1Result build_thmA1_pair(const GeneratorSet& seed, const ThmA1Options& opts) {
  if (seed.n() < 3) throw DimensionError("build_thmA1_pair needs n >= 3");
  const ZariskiReport seed_gate = zariski_density_heuristic(seed, opts.gate_len, opts.workers);
  if (seed_gate.result != ZariskiReport::Result::Pass)
    throw DomainError("seed group fails the Zariski-density gate: " + seed_gate.detail);

  EnumerationOptions eo;
  eo.max_len = opts.search_len;
  eo.dedup = true;
  eo.workers = opts.workers;
  const EnumerationResult e = enumerate(seed, eo);

  struct Candidate {
    std::size_t index;
    AVector lambda;
  };
  std::vector<std::optional<AVector>> lam(e.elements.size());
  detail::parallel_for(e.elements.size(), opts.workers, [&](std::size_t i) {
    const auto& el = e.elements[i];
    if (!el.word.empty() && is_loxodromic(el.matrix)) lam[i] = jordan_projection(el.matrix);
  });
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < lam.size(); ++i)
    if (lam[i]) cands.push_back({i, *lam[i]});

  const int n = seed.n();
  ThmA1Result res;
  const Candidate* a_pick = nullptr;
  for (const auto& c : cands) {
    const double r12 = simple_root(c.lambda, 1), rl = simple_root(c.lambda, n - 1);
    if (std::fabs(r12 - rl) > 1e-9 * std::max(1.0, c.lambda.norm())) {
      a_pick = &c;
      break;
    }
  }
  if (!a_pick)
    throw BudgetExhausted("no loxodromic word up to length " + std::to_string(opts.search_len) +
                          " with lambda_12 != lambda_{n-1,n}");
  res.a1_word = e.elements[a_pick->index].word;
  res.a1 = e.elements[a_pick->index].matrix;
  if (has_negative_eigenvalue(res.a1)) {
    res.a1 = res.a1 * res.a1;
    res.a1_squared = true;
  }
  const AVector lam_a1 = jordan_projection(res.a1);
  res.a_ratios = pm_ratios(lam_a1);
  const double a_bound = max_of(res.a_ratios);
  const FixedFlags fa = fixed_flags(res.a1);

  std::ostringstream best;
  int b_tried = 0;
  for (const auto& c : cands) {
    if (&c == a_pick) continue;
    const std::vector<double> br = pm_ratios(c.lambda);
    if (!(max_of(br) < a_bound - 1e-9)) continue;
    RationalMatrix b1 = e.elements[c.index].matrix;
    if (has_negative_eigenvalue(b1)) b1 = b1 * b1;
    FixedFlags fb;
    try {
      fb = fixed_flags(b1);
    } catch (const ConvergenceError&) {
      continue;
    }
    const Flag* xs[] = {&fa.attractive, &fa.repulsive, &fb.attractive, &fb.repulsive};
    double gp = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) gp = std::min(gp, transversality_margin(*xs[i], *xs[j]).margin);
    if (!(gp > tolerances().gp)) continue;
    const GeneratorSet ab({"a", "b"}, {res.a1, b1});
    ZariskiReport gate = zariski_density_heuristic(ab, opts.gate_len, opts.workers);
    if (gate.result != ZariskiReport::Result::Pass) continue;

    ++b_tried;
    res.b1_word = e.elements[c.index].word;
    res.b1 = b1;
    res.b1_ratios = br;
    res.transversality = gp;
    res.gate = gate;
    res.attempts.clear();
    for (long k : opts.k_powers) {
      for (long l : opts.l_powers) {
        ThmA1Attempt at{l, k, "", ""};
        const RationalMatrix a = power(res.a1, l), b = power(b1, k);
        PingPongOptions po;
        po.len_cap = opts.pingpong_len;
        po.seed = opts.seed;
        po.workers = opts.workers;
        PingPongCertificate cert = pingpong_certify(GeneratorSet({"a"}, {a}), b, opts.r, 1, opts.samples, po);
        if (!cert.ok()) {
          at.stage = "pingpong";
          at.detail = std::string(to_string(cert.status)) + ": " + cert.witness;
          res.attempts.push_back(at);
          continue;
        }
        const GeneratorSet pr({"a", "b"}, {a, b});
        RatioReport rr = ratio_check(pr, opts.check_len, opts.workers);
        if (!rr.pass()) {
          at.stage = "ratio";
          at.detail = std::to_string(rr.violations.size()) + " violations, max " +
                      std::to_string(rr.max_ratio) + " at " + format_word(*rr.max_word, pr);
          res.attempts.push_back(at);
          best << " [" << format_word(res.b1_word, seed) << " l=" << l << " k=" << k << ": " << at.detail << "]";
          continue;
        }
        ConeEstimate cone = cone_estimate(pr, opts.cone_len, opts.workers);
        BoundaryVerdict bv = boundary_test(cone, jordan_projection(a));
        if (!bv.on_boundary) {
          at.stage = "boundary";
          at.detail = "distance " + std::to_string(bv.distance);
          res.attempts.push_back(at);
          continue;
        }
        at.stage = "ok";
        res.attempts.push_back(at);
        res.l = l;
        res.k = k;
        res.a = a;
        res.b = b;
        res.certificate = std::move(cert);
        res.ratios = std::move(rr);
        res.cone = std::move(cone);
        res.boundary = bv;
        return res;
      }
    }
  }
  throw BudgetExhausted("no (a1, b1, l, k) passed within budget (" + std::to_string(b_tried) +
                        " b1 candidates tried)" + best.str());
}

}  // namespace limitset
