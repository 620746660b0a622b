#include "limitset/growth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "limitset/config.hpp"
#include "limitset/errors.hpp"
#include "limitset/spectral.hpp"
#include "parallel.hpp"

namespace limitset {

namespace {

// alpha_{i,i+1}(mu(g)) for every element, row-major [element][root].
std::vector<std::vector<double>> root_values(const EnumerationResult& e, int n, int workers) {
  std::vector<std::vector<double>> out(e.elements.size());
  detail::parallel_for(e.elements.size(), workers, [&](std::size_t i) {
    AVector mu = cartan_projection(e.elements[i].matrix);
    std::vector<double> r(n - 1);
    for (int k = 1; k < n; ++k) r[k - 1] = simple_root(mu, k);
    out[i] = std::move(r);
  });
  return out;
}

struct LineFit {
  double slope = 0, intercept = 0, rms = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - (f.intercept + f.slope * x[i]);
    ss += d * d;
  }
  f.rms = std::sqrt(ss / m);
  return f;
}

constexpr int kGridPoints = 64;

}  // namespace

double ExponentEstimate::max_slope() const {
  double s = 0;
  for (const auto& r : roots) s = std::max(s, r.slope);
  return s;
}

ExponentEstimate critical_exponent(const GeneratorSet& gens, int max_len, int workers) {
  if (gens.size() == 0) throw InsufficientData("critical_exponent needs at least one generator");
  EnumerationOptions opts;
  opts.max_len = max_len;
  opts.dedup = true;
  opts.workers = workers;
  return critical_exponent(gens, enumerate(gens, opts), workers);
}

ExponentEstimate critical_exponent(const GeneratorSet& gens, const EnumerationResult& e,
                                   int workers) {
  if (gens.size() == 0) throw InsufficientData("critical_exponent needs at least one generator");
  if (!e.dedup) throw DomainError("critical_exponent counts group elements; enumerate with dedup");
  const int n = gens.n();
  const auto vals = root_values(e, n, workers);
  ExponentEstimate est;
  est.max_len = e.complete_len;
  est.elements = e.elements.size();

  const int frontier = e.complete_len;
  const std::size_t f_lo = e.level_start[frontier], f_hi = e.level_start[frontier + 1];
  const bool closed = f_lo == f_hi || (frontier < e.max_len && !e.partial && !e.stopped_early);

  for (int k = 0; k < n - 1; ++k) {
    RootExponent re;
    re.root = k + 1;
    std::vector<double> all;
    all.reserve(vals.size());
    for (const auto& v : vals) all.push_back(v[k]);
    std::sort(all.begin(), all.end());

    double r_hi = all.back();
    if (!closed) {
      r_hi = std::numeric_limits<double>::infinity();
      for (std::size_t i = f_lo; i < f_hi; ++i) r_hi = std::min(r_hi, vals[i][k]);
    }
    const auto below = std::upper_bound(all.begin(), all.end(), r_hi);
    const std::size_t m = static_cast<std::size_t>(below - all.begin());
    if (m < 8) throw InsufficientData("too few elements below the completeness cutoff");
    const double r_lo = all[m / 4];
    if (!(r_hi > r_lo)) throw InsufficientData("empty fit window for the critical exponent");
    re.r_lo = r_lo;
    re.r_hi = r_hi;

    std::vector<double> logn;
    for (int g = 0; g < kGridPoints; ++g) {
      const double r = r_lo + (r_hi - r_lo) * g / (kGridPoints - 1);
      const auto c = static_cast<std::size_t>(std::upper_bound(all.begin(), all.end(), r) - all.begin());
      re.grid.push_back(r);
      re.counts.push_back(c);
      logn.push_back(std::log(static_cast<double>(c)));
    }
    LineFit fit = least_squares(re.grid, logn);
    re.raw_slope = fit.slope;
    re.slope = std::max(0.0, fit.slope);
    re.intercept = fit.intercept;
    re.residual = fit.rms;
    est.roots.push_back(std::move(re));
  }
  return est;
}

bool AnosovReport::pass() const {
  if (roots.empty()) return false;
  return std::all_of(roots.begin(), roots.end(), [](const AnosovRootReport& r) { return r.pass; });
}

AnosovReport anosov_growth_check(const GeneratorSet& gens, int max_len, int workers) {
  if (max_len < 3) throw InsufficientData("anosov_growth_check needs max_len >= 3");
  if (gens.size() == 0) throw InsufficientData("anosov_growth_check needs at least one generator");
  EnumerationOptions opts;
  opts.max_len = max_len;
  opts.workers = workers;
  EnumerationResult e = enumerate(gens, opts);
  const int n = gens.n();
  const auto vals = root_values(e, n, workers);
  const int L = e.complete_len;
  if (L < 3) throw InsufficientData("enumeration closed before length 3");

  AnosovReport rep;
  rep.max_len = L;
  for (int k = 0; k < n - 1; ++k) {
    AnosovRootReport r;
    r.root = k + 1;
    r.min_by_length.assign(L + 1, std::numeric_limits<double>::infinity());
    r.min_value = std::numeric_limits<double>::infinity();
    for (int l = 0; l <= L; ++l)
      for (std::size_t i = e.level_start[l]; i < e.level_start[l + 1]; ++i) {
        r.min_by_length[l] = std::min(r.min_by_length[l], vals[i][k]);
        if (l > 0) r.min_value = std::min(r.min_value, vals[i][k]);
      }

    double best_env = -std::numeric_limits<double>::infinity();
    r.l_hat = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= 20; ++a) {
      double lh = 0;
      for (int l = 1; l <= L && std::isfinite(lh); ++l) {
        const double d = r.min_by_length[l] + a;
        lh = d > 0 ? std::max(lh, l / d) : std::numeric_limits<double>::infinity();
      }
      if (!std::isfinite(lh) || lh <= 0) continue;
      const double env = L / lh - a;
      if (!std::isfinite(best_env) || env > best_env + 1e-9 * std::fabs(best_env)) {
        best_env = env;
        r.l_hat = lh;
        r.a_hat = a;
      }
    }

    const int h = (L + 1) / 2;
    const double s = (r.min_by_length[h] - r.min_by_length[1]) / std::max(1, h - 1);
    r.linear_margin = std::numeric_limits<double>::infinity();
    for (int l = h + 1; l <= L; ++l)
      r.linear_margin = std::min(r.linear_margin, r.min_by_length[l] - r.min_by_length[h] - 0.75 * (l - h) * s);
    r.pass = std::isfinite(r.l_hat) && r.min_value > 0 && s > 0 && r.linear_margin > 0;
    rep.roots.push_back(std::move(r));
  }
  return rep;
}

const char* to_string(PingPongCertificate::Status s) {
  switch (s) {
    case PingPongCertificate::Status::Certified: return "Certified";
    case PingPongCertificate::Status::PreconditionFailed: return "PreconditionFailed";
    case PingPongCertificate::Status::Eq32Failed: return "Eq32Failed";
    case PingPongCertificate::Status::Eq33Failed: return "Eq33Failed";
  }
  return "?";
}

namespace {

// min_k |det[F_1..k | G_1..n-k]| without allocation for small n.
double level_margin(const Flag& f, const Flag& g) {
  const int n = f.n();
  if (n > 8) return transversality_margin(f, g).margin;
  std::array<double, 64> m{};
  double best = 1.0;
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) m[i * n + j] = f.frame()(i, j);
    for (int j = 0; j < n - k; ++j)
      for (int i = 0; i < n; ++i) m[i * n + k + j] = g.frame()(i, j);
    // Partial-pivot elimination.
    std::array<double, 64> a = m;
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r)
        if (std::fabs(a[r * n + c]) > std::fabs(a[p * n + c])) p = r;
      if (a[p * n + c] == 0.0) {
        det = 0.0;
        break;
      }
      if (p != c) {
        for (int j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
        det = -det;
      }
      det *= a[c * n + c];
      for (int r = c + 1; r < n; ++r) {
        const double f2 = a[r * n + c] / a[c * n + c];
        for (int j = c; j < n; ++j) a[r * n + j] -= f2 * a[c * n + j];
      }
    }
    best = std::min(best, std::fabs(det));
  }
  return best;
}

// beta^j on flags through eigen-coordinates: a flag transverse to the
// repelling flag is the flag of P L with L unit lower triangular, and
// beta^j P L = P (D^j L D^-j) D^j, where D^j L D^-j only shrinks entries.
class PowerAction {
 public:
  explicit PowerAction(const RationalMatrix& beta) : beta_(beta), n_(beta.n()) {
    Spectrum s = spectrum(beta);
    std::vector<const Root*> order;
    for (const auto& r : s.roots) order.push_back(&r);
    std::sort(order.begin(), order.end(),
              [](const Root* a, const Root* b) { return a->log_modulus > b->log_modulus; });
    p_ = RealMatrix(n_, n_);
    for (int j = 0; j < n_; ++j) {
      auto v = real_eigenvector(beta, order[j]->z, false, s.precision);
      for (int i = 0; i < n_; ++i) p_(i, j) = v[i];
      logmod_.push_back(order[j]->log_modulus);
      sign_.push_back(order[j]->z.re.sign() < 0 ? -1 : 1);
    }
    pinv_ = invert(p_);
  }

  // beta^j y for j != 0.
  Flag apply(const Flag& y, long j) const {
    const bool neg = j < 0;
    const long e = neg ? -j : j;
    RealMatrix c = pinv_ * y.frame();
    if (neg) c = reverse_rows(c);
    // Unit lower triangular factor of c = L U (no pivoting).
    RealMatrix l = RealMatrix::identity(n_);
    RealMatrix a = c;
    double scale = a.max_abs();
    for (int k = 0; k < n_; ++k) {
      const double piv = a(k, k);
      if (!(std::fabs(piv) > 1e-12 * scale)) return fallback(y, j);
      for (int i = k + 1; i < n_; ++i) {
        const double f = a(i, k) / piv;
        l(i, k) = f;
        for (int jj = k; jj < n_; ++jj) a(i, jj) -= f * a(k, jj);
      }
    }
    for (int k = 0; k < n_; ++k)
      for (int i = k + 1; i < n_; ++i) {
        const int ii = neg ? n_ - 1 - i : i, kk = neg ? n_ - 1 - k : k;
        // Ratio of the i-th to k-th eigenvalue of beta^{+-1}, sorted descending.
        const double lg = neg ? (logmod_[kk] - logmod_[ii]) : (logmod_[ii] - logmod_[kk]);
        double f = std::exp(static_cast<double>(e) * lg);
        if ((e & 1) && sign_[ii] != sign_[kk]) f = -f;
        l(i, k) *= f;
      }
    if (neg) l = reverse_rows(l);
    return Flag(p_ * l);
  }

 private:
  Flag fallback(const Flag& y, long j) const { return act(power(beta_, j), y); }

  RealMatrix reverse_rows(const RealMatrix& m) const {
    RealMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) r(m.rows() - 1 - i, j) = m(i, j);
    return r;
  }

  static RealMatrix invert(const RealMatrix& m) {
    const int n = m.rows();
    RealMatrix a = m, inv = RealMatrix::identity(n);
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r)
        if (std::fabs(a(r, c)) > std::fabs(a(p, c))) p = r;
      if (a(p, c) == 0.0) throw ConvergenceError("eigenbasis is singular");
      for (int j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
      const double d = a(c, c);
      for (int j = 0; j < n; ++j) {
        a(c, j) /= d;
        inv(c, j) /= d;
      }
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = a(r, c);
        if (f == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          a(r, j) -= f * a(c, j);
          inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

  RationalMatrix beta_;
  int n_;
  RealMatrix p_, pinv_;
  std::vector<double> logmod_;
  std::vector<int> sign_;
};

double nearest(const Flag& f, const std::vector<Flag>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : set) d = std::min(d, flag_distance(f, s));
  return d;
}

}  // namespace

PingPongCertificate pingpong_certify(const GeneratorSet& prev, const RationalMatrix& beta,
                                     double r, long m, std::size_t samples,
                                     const PingPongOptions& opts) {
  if (prev.size() > 0 && prev.n() != beta.n()) throw DimensionError("beta and generators differ in dimension");
  if (!(r > 0.0) || r > 0.5) throw DomainError("ping-pong radius must lie in (0, 1/2]");
  if (m < 0) throw DomainError("power m must be non-negative");
  if (samples < 8) throw DomainError("ping-pong certificate needs at least 8 samples");
  if (!is_loxodromic(beta)) throw DomainError("pingpong_certify requires a loxodromic beta");

  const double tau = tolerances().gp;
  PingPongCertificate cert;
  cert.r = r;
  cert.m = m;
  cert.len_cap = opts.len_cap;
  cert.k_cap = opts.k_cap;
  cert.seed = opts.seed;

  FixedFlags ff = fixed_flags(beta);
  cert.x_plus = ff.attractive;
  cert.x_minus = ff.repulsive;
  cert.fixed_residual = ff.residual;
  const std::array<const Flag*, 2> xs = {&cert.x_plus, &cert.x_minus};

  // Limit-set sample of the previous stage and its nontrivial short elements.
  std::vector<Flag> limit;
  EnumerationResult e;
  if (prev.size() > 0) {
    EnumerationOptions eo;
    eo.max_len = opts.len_cap;
    eo.workers = opts.workers;
    e = enumerate(prev, eo);
    for (auto& s : limit_set_sample(prev, e)) limit.push_back(std::move(s.flag));
  }
  cert.limit_points = limit.size();

  cert.precondition_margin = level_margin(cert.x_plus, cert.x_minus);
  std::string pre_witness = cert.precondition_margin <= tau ? "x+ and x- not transverse" : "";
  for (std::size_t i = 0; i < limit.size(); ++i)
    for (int s = 0; s < 2; ++s) {
      const double mg = level_margin(*xs[s], limit[i]);
      if (mg < cert.precondition_margin) {
        cert.precondition_margin = mg;
        if (mg <= tau) {
          std::ostringstream w;
          w << "limit sample " << i << " not transverse to " << (s == 0 ? "x+" : "x-")
            << " (margin " << mg << ")";
          pre_witness = w.str();
        }
      }
    }
  const double sep = flag_distance(cert.x_plus, cert.x_minus);
  if (sep <= 2 * r) pre_witness = "balls B+_r and B-_r intersect";
  if (!pre_witness.empty()) {
    cert.status = PingPongCertificate::Status::PreconditionFailed;
    cert.witness = pre_witness;
    return cert;
  }

  std::mt19937_64 rng(opts.seed);
  const std::size_t nb = samples / 2, ns = samples / 4;
  const std::size_t nl = limit.empty() ? 0 : samples - nb - ns;
  std::vector<Flag> ball, sphere, dset;
  for (std::size_t i = 0; i < nb; ++i) {
    const Flag& c = *xs[i % 2];
    ball.push_back((i / 2) % 2 == 0 ? sample_at_distance(c, r / 2, rng) : sample_in_ball(c, r / 2, rng));
  }
  for (std::size_t i = 0; i < ns; ++i) sphere.push_back(sample_at_distance(*xs[i % 2], r, rng));
  for (std::size_t i = 0; i < nl; ++i) dset.push_back(sample_in_ball(limit[i % limit.size()], r / 2, rng));
  cert.samples_b = ball.size();
  cert.samples_sphere = sphere.size();

  std::vector<Flag> bsource = sphere;
  bsource.insert(bsource.end(), ball.begin(), ball.end());
  double tail = std::numeric_limits<double>::infinity();
  std::string tail_witness;
  if (prev.size() > 0) {
    const std::size_t first = e.level_start[1];
    const std::size_t last = e.level_start[e.complete_len + 1];
    const std::size_t frontier = e.level_start[e.complete_len];
    cert.gammas = last - first;
    std::vector<std::vector<Flag>> images(last - first);
    detail::parallel_for(last - first, opts.workers, [&](std::size_t i) {
      images[i] = act(e.elements[first + i].matrix, bsource);
    });
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (first + i >= frontier && !limit.empty() && e.complete_len == opts.len_cap) {
        for (std::size_t p = 0; p < images[i].size(); ++p) {
          const double t = r / 2 - nearest(images[i][p], limit);
          if (t < tail) {
            tail = t;
            tail_witness = "gamma = " + format_word(e.elements[first + i].word, prev) +
                           " maps B outside L";
          }
        }
      }
      dset.insert(dset.end(), std::make_move_iterator(images[i].begin()),
                  std::make_move_iterator(images[i].end()));
    }
  }
  cert.samples_d = dset.size();

  // General position between B_r and D, and D disjoint from B.
  std::vector<double> gp(bsource.size());
  detail::parallel_for(bsource.size(), opts.workers, [&](std::size_t i) {
    double mg = 1.0;
    for (const auto& y : dset) mg = std::min(mg, level_margin(bsource[i], y));
    gp[i] = mg;
  });
  cert.gp_margin = dset.empty() ? 1.0 : *std::min_element(gp.begin(), gp.end());

  std::vector<double> avoid(dset.size());
  detail::parallel_for(dset.size(), opts.workers, [&](std::size_t i) {
    avoid[i] = std::min(flag_distance(dset[i], cert.x_plus), flag_distance(dset[i], cert.x_minus)) - r / 2;
  });
  double avoid_min = std::numeric_limits<double>::infinity();
  std::size_t avoid_at = 0;
  for (std::size_t i = 0; i < avoid.size(); ++i)
    if (avoid[i] < avoid_min) {
      avoid_min = avoid[i];
      avoid_at = i;
    }
  cert.eq32_margin = std::min(avoid_min, tail);

  if (cert.gp_margin <= tau || cert.eq32_margin <= 0) {
    cert.status = PingPongCertificate::Status::Eq32Failed;
    std::ostringstream w;
    if (cert.gp_margin <= tau)
      w << "B_r and D not in general position (margin " << cert.gp_margin << ")";
    else if (tail < avoid_min)
      w << tail_witness << " (margin " << tail << ")";
    else
      w << "D sample " << avoid_at << " meets B (margin " << avoid_min << ")";
    cert.witness = w.str();
    return cert;
  }

  // beta^{+-mk} D inside B, k = 1..k_cap.
  PowerAction pa(beta);
  std::vector<double> m33(dset.size());
  std::vector<long> worst_k(dset.size());
  detail::parallel_for(dset.size(), opts.workers, [&](std::size_t i) {
    double mg = std::numeric_limits<double>::infinity();
    long wk = 0;
    for (int k = 1; k <= opts.k_cap; ++k)
      for (int s = 0; s < 2; ++s) {
        const long j = (s == 0 ? 1 : -1) * m * k;
        const Flag z = j == 0 ? dset[i] : pa.apply(dset[i], j);
        const double v = r / 2 - flag_distance(z, *xs[s]);
        if (v < mg) {
          mg = v;
          wk = j;
        }
      }
    m33[i] = mg;
    worst_k[i] = wk;
  });
  cert.eq33_margin = std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  for (std::size_t i = 0; i < m33.size(); ++i)
    if (m33[i] < cert.eq33_margin) {
      cert.eq33_margin = m33[i];
      at = i;
    }
  if (cert.eq33_margin <= 0) {
    cert.status = PingPongCertificate::Status::Eq33Failed;
    std::ostringstream w;
    w << "beta^" << worst_k[at] << " maps D sample " << at << " outside B (margin " << cert.eq33_margin << ")";
    cert.witness = w.str();
    return cert;
  }
  cert.status = PingPongCertificate::Status::Certified;
  return cert;
}

PowerSelection select_power(const RationalMatrix& beta, long n) {
  if (n < 1) throw DomainError("select_power requires N >= 1");
  AVector mp = cartan_projection(beta), mm = cartan_projection(beta.inverse());
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 1; i < beta.n(); ++i) lo = std::min({lo, simple_root(mp, i), simple_root(mm, i)});
  if (lo <= tolerances().wall) throw DomainError("beta is singular: some alpha(mu(beta^{+-1})) vanishes");
  PowerSelection ps;
  ps.n = n;
  ps.min_root = lo;
  ps.m = static_cast<long>(std::floor(static_cast<double>(n) / lo));
  ps.bound_holds = static_cast<double>(n) <= static_cast<double>(ps.m) * lo;
  ps.zero = ps.m == 0;
  return ps;
}

double KeyLemmaReport::constant() const {
  double c = 0;
  for (const auto& r : roots) c = std::max(c, r.max_deviation);
  return c;
}

KeyLemmaReport key_lemma_audit(const GeneratorSet& prev, const RationalMatrix& beta,
                               int max_blocks, std::size_t samples, const KeyLemmaOptions& opts) {
  if (max_blocks < 1) throw DomainError("max_blocks must be >= 1");
  if (opts.j_max < 1) throw DomainError("j_max must be >= 1");
  const int n = beta.n();
  if (prev.size() > 0 && prev.n() != n) throw DimensionError("beta and generators differ in dimension");

  std::vector<Element> pool;
  if (prev.size() > 0) {
    EnumerationResult e = enumerate(prev, opts.gamma_len, true);
    for (std::size_t i = 1; i < e.elements.size(); ++i) {
      const auto& w = e.elements[i].word.letters();
      if (opts.positive_only &&
          std::any_of(w.begin(), w.end(), [](Letter l) { return l.sign < 0; }))
        continue;
      pool.push_back(e.elements[i]);
    }
  }
  std::vector<std::vector<double>> pool_alpha(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    AVector mu = cartan_projection(pool[i].matrix);
    for (int k = 1; k < n; ++k) pool_alpha[i].push_back(simple_root(mu, k));
  }

  const int jm = opts.j_max;
  std::vector<RationalMatrix> bpow(2 * jm + 1);
  for (int j = -jm; j <= jm; ++j) bpow[j + jm] = power(beta, j);
  std::array<std::vector<double>, 2> balpha;
  {
    AVector mp = cartan_projection(beta), mm = cartan_projection(beta.inverse());
    for (int k = 1; k < n; ++k) {
      balpha[0].push_back(simple_root(mp, k));
      balpha[1].push_back(simple_root(mm, k));
    }
  }

  struct Block {
    int j;
    long gamma;  // -1 for the identity
  };
  // dev[s][l-1][root]
  std::vector<std::vector<std::vector<double>>> dev(samples);
  std::vector<std::vector<Block>> blocks(samples);
  detail::parallel_for(samples, opts.workers, [&](std::size_t s) {
    std::seed_seq sq{static_cast<std::uint64_t>(opts.seed), static_cast<std::uint64_t>(s)};
    std::mt19937_64 rng(sq);
    std::uniform_int_distribution<int> jd(1, jm);
    std::bernoulli_distribution sign_d(0.5);
    std::vector<Block> bl;
    for (int i = 0; i < max_blocks; ++i) {
      int j = jd(rng);
      if (!opts.positive_only && sign_d(rng)) j = -j;
      long g = -1;
      if (!pool.empty()) {
        // gamma_1 may be trivial; later gammas are not.
        const long hi = static_cast<long>(pool.size()) - (i == 0 ? 0 : 1);
        std::uniform_int_distribution<long> gd(i == 0 ? -1 : 0, hi);
        g = gd(rng);
        if (g >= static_cast<long>(pool.size())) g = static_cast<long>(pool.size()) - 1;
      }
      bl.push_back({j, g});
    }
    RationalMatrix w = RationalMatrix::identity(n);
    std::vector<double> predicted(n - 1, 0.0);
    for (int l = 1; l <= max_blocks; ++l) {
      const Block& b = bl[l - 1];
      if (b.gamma >= 0) w = pool[b.gamma].matrix * w;
      w = bpow[b.j + jm] * w;
      for (int k = 0; k < n - 1; ++k) {
        predicted[k] += std::abs(b.j) * balpha[b.j > 0 ? 0 : 1][k];
        if (b.gamma >= 0) predicted[k] += pool_alpha[b.gamma][k];
      }
      AVector mu = cartan_projection(w);
      std::vector<double> d(n - 1);
      for (int k = 0; k < n - 1; ++k) d[k] = std::fabs(simple_root(mu, k + 1) - predicted[k]) / l;
      dev[s].push_back(std::move(d));
    }
    blocks[s] = std::move(bl);
  });

  KeyLemmaReport rep;
  rep.max_blocks = max_blocks;
  rep.samples = samples;
  rep.seed = opts.seed;
  rep.census.assign(max_blocks, samples);
  rep.words_tested = samples * static_cast<std::size_t>(max_blocks);
  for (int k = 0; k < n - 1; ++k) {
    KeyLemmaRoot kr;
    kr.root = k + 1;
    kr.max_by_blocks.assign(max_blocks, 0.0);
    for (std::size_t s = 0; s < samples; ++s)
      for (int l = 1; l <= max_blocks; ++l) {
        const double d = dev[s][l - 1][k];
        kr.max_by_blocks[l - 1] = std::max(kr.max_by_blocks[l - 1], d);
        if (d > kr.max_deviation) {
          kr.max_deviation = d;
          std::ostringstream w;
          w << "sample " << s << ", l = " << l << ":";
          for (int i = l; i >= 1; --i) {
            const Block& b = blocks[s][i - 1];
            w << " (beta^" << b.j << " "
              << (b.gamma < 0 ? std::string("1") : format_word(pool[b.gamma].word, prev)) << ")";
          }
          kr.witness = w.str();
        }
      }
    rep.roots.push_back(std::move(kr));
  }
  return rep;
}

std::vector<StageAudit> condition31_audit(const std::vector<Stage>& stages, int max_len, int workers) {
  std::vector<StageAudit> out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    StageAudit a;
    a.stage = static_cast<int>(i) + 1;
    a.budget = 1.0 - std::ldexp(1.0, -a.stage);
    const Stage& st = stages[i];
    if (a.stage == 1) {
      if (st.gens.size() != 1 || !is_loxodromic(st.gens.matrix(0))) {
        a.refused = true;
        a.reason = "stage 1 must be cyclic on a loxodromic generator";
      }
    } else if (!st.certificate || !st.certificate->ok()) {
      a.refused = true;
      a.reason = "no ping-pong certificate for this stage";
    }
    if (!a.refused) {
      ExponentEstimate full = critical_exponent(st.gens, max_len, workers);
      a.pass = true;
      for (const auto& r : full.roots) {
        a.exponents.push_back(r.slope);
        a.residuals.push_back(r.residual);
        if (r.slope + r.residual > a.budget) a.pass = false;
      }
      if (max_len > 2) {
        try {
          ExponentEstimate shorter = critical_exponent(st.gens, max_len - 2, workers);
          for (const auto& r : shorter.roots) a.horizon_exponents.push_back(r.slope);
        } catch (const InsufficientData&) {
        }
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace limitset
