// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "limitset/cli.hpp"
#include "limitset/cone.hpp"
#include "limitset/config.hpp"
#include "limitset/criteria3.hpp"
#include "limitset/flags.hpp"
#include "limitset/growth.hpp"
#include "limitset/serialize.hpp"
#include "limitset/spectral.hpp"
#include "oracles.hpp"

using namespace limitset;

namespace {

const std::string kData = LIMITSET_DATA_DIR;
const std::string kWord18 = "ba^-1ba^-1ba^-1ba^-1b^-1aba^-1ba^-1b^-1aba^-1";

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

RationalMatrix diag9() { return RationalMatrix::diagonal({9, 3, mpq_class(1, 27)}); }
RationalMatrix conj_h() { return RationalMatrix::from_rows({{2, 1, 1}, {1, 1, 0}, {1, 0, 2}}); }

// Shared pair for the ping-pong / growth criteria.
struct GrowthPair {
  GeneratorSet prev;
  RationalMatrix beta;
  double c_bar = 0;
  PowerSelection power;
  GeneratorSet pair, pair2;
};

const GrowthPair& growth_pair() {
  static const GrowthPair gp = [] {
    GrowthPair g;
    g.prev = GeneratorSet({"a"}, {diag9()});
    g.beta = conjugate(RationalMatrix::diagonal({16, 1, mpq_class(1, 16)}), conj_h());
    KeyLemmaOptions ko;
    ko.seed = 1;
    g.c_bar = key_lemma_audit(g.prev, g.beta, 6, 40, ko).constant();
    g.power = select_power(g.beta, static_cast<long>(std::ceil(20 * g.c_bar)));
    g.pair = GeneratorSet({"a", "b"}, {diag9(), power(g.beta, g.power.m)});
    g.pair2 = GeneratorSet({"a", "b"}, {diag9(), power(g.beta, 2 * g.power.m)});
    return g;
  }();
  return gp;
}

const ThmA1Result& thmA1() {
  static const ThmA1Result r = [] {
    const GeneratorSet seed({"a", "b"}, {diag9(), conj_h()});
    ThmA1Options o;
    o.check_len = 8;
    return build_thmA1_pair(seed, o);
  }();
  return r;
}

GeneratorSet triangle() { return load_generators(kData + "/triangle.json"); }

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const GeneratorSet g = triangle();
  const Word w = parse_word(kWord18, g);
  const RationalMatrix m = evaluate(w, g);
  const mpq_class disc = cubic_discriminant(char_poly(m));
  const FiniteOrder fo = finite_order(m, 24);
  std::ostringstream sink_out, sink_err;
  const char* argv[] = {"limitset", "criteria", nullptr};
  const std::string input = kData + "/triangle.json";
  argv[2] = input.c_str();
  const int code = run_cli(3, argv, sink_out, sink_err);
  const Json report = Json::parse(sink_out.str());
  const auto found = find_complex_spectrum_witness(g, 18);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = w.size() == 18 && sgn(disc) < 0 && fo.kind == FiniteOrder::Kind::ProvablyInfinite && code == 0 &&
           report["result"]["verdict"] == "FullLimitSet" && report["result"]["witness_criterion"] == 3 && found &&
           found->word.size() <= 18 && secs < 1.0;
  o.detail = "disc " + disc.get_str() + ", " + to_string(fo.kind) + ", cli exit " + std::to_string(code) +
             ", search witness length " + (found ? std::to_string(found->word.size()) : "none") + ", " +
             fmt("%.2f s", secs);
  return o;
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const GeneratorSet g = triangle();
  const RationalMatrix a = g.matrix(0), b = g.matrix(1);
  const bool rel = power(a, 3).is_identity() && power(b, 3).is_identity() && power(a * b, 4).is_identity();
  const EnumerationResult e = enumerate(g, 3, true);
  bool a3 = false;
  for (const auto& r : e.relations) {
    const std::string s = format_word(r.relator, g);
    a3 = a3 || s == "a a a" || s == "a^-1 a^-1 a^-1";
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = rel && a3 && secs < 1.0;
  o.detail = std::string("a^3 = b^3 = (ab)^4 = I ") + (rel ? "exact" : "FAILS") + ", a^3 relator " +
             (a3 ? "detected" : "missing") + " at max_len 3, " + fmt("%.3f s", secs);
  return o;
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  double w_pow = 0, w_conj = 0, w_opp = 0, w_maj = 0, w_dbl = 0;
  int lox = 0;
  std::uniform_int_distribution<int> pick(0, 1);
  for (int s = 0; s < 100; ++s) {
    const RationalMatrix g = oracle::random_unimodular(3, 5, rng);
    const RationalMatrix h = oracle::random_unimodular(3, 5, rng);
    const AVector lam = jordan_projection(g), mu = cartan_projection(g);
    const double scale = std::max(1.0, lam.norm());
    for (int k = 2; k <= 5; ++k) {
      const AVector lk = jordan_projection(power(g, k));
      for (int i = 0; i < 3; ++i) w_pow = std::max(w_pow, std::fabs(lk[i] - k * lam[i]) / (k * scale));
    }
    const AVector lc = jordan_projection(conjugate(g, h));
    for (int i = 0; i < 3; ++i) w_conj = std::max(w_conj, std::fabs(lc[i] - lam[i]) / scale);
    // Cartan projection is invariant under conjugation by signed permutations (K elements).
    const RationalMatrix k = RationalMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    const RationalMatrix kk = pick(rng) ? k : RationalMatrix::from_rows({{0, -1, 0}, {1, 0, 0}, {0, 0, 1}});
    const AVector mc = cartan_projection(conjugate(g, kk));
    for (int i = 0; i < 3; ++i) w_conj = std::max(w_conj, std::fabs(mc[i] - mu[i]) / std::max(1.0, mu.norm()));
    const AVector mi = cartan_projection(g.inverse()), om = opposition_involution(mu);
    for (int i = 0; i < 3; ++i) w_opp = std::max(w_opp, std::fabs(mi[i] - om[i]));
    double sl = 0, sm = 0;
    for (int i = 0; i < 2; ++i) {
      sl += lam[i];
      sm += mu[i];
      w_maj = std::max(w_maj, sl - sm);
    }
    if (is_loxodromic(g)) {
      ++lox;
      const AVector big = cartan_projection(power(g, 1024));
      double d = 0;
      for (int i = 0; i < 3; ++i) d += std::pow(big[i] / 1024 - lam[i], 2);
      w_dbl = std::max(w_dbl, std::sqrt(d));
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = w_pow <= 1e-8 && w_conj <= 1e-8 && w_opp <= 1e-9 && w_maj <= 1e-9 && w_dbl <= 1e-3 && lox > 0 &&
           secs < 30;
  o.detail = "powers " + fmt("%.1e", w_pow) + ", conjugation " + fmt("%.1e", w_conj) + ", opposition " +
             fmt("%.1e", w_opp) + ", majorization excess " + fmt("%.1e", w_maj) + ", doubling " +
             fmt("%.1e", w_dbl) + " over " + std::to_string(lox) + " loxodromics, " + fmt("%.1f s", secs);
  return o;
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(404);
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    const int n = 3 + s % 2;
    const RationalMatrix g = oracle::random_unimodular(n, 5, rng);
    const AVector mu = cartan_projection(g);
    double partial = 0;
    for (int k = 1; k < n; ++k) {
      partial += mu[k - 1];
      const double lhs = oracle::log_norm(oracle::exterior(oracle::rows_of(g), k));
      worst = std::max(worst, std::fabs(lhs - partial) / std::max(1.0, std::fabs(partial)));
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst <= 1e-8 && secs < 10;
  o.detail = "max relative gap " + fmt("%.2e", worst) + ", " + fmt("%.1f s", secs);
  return o;
}

Outcome criterion5() {
  const ExponentEstimate e = critical_exponent(GeneratorSet({"a"}, {diag9()}), 200);
  Outcome o;
  o.pass = e.roots.size() == 2;
  for (const auto& r : e.roots) o.pass = o.pass && r.slope <= 0.05;
  o.detail = "slopes " + fmt("%.4f", e.roots[0].slope) + ", " + fmt("%.4f", e.roots[1].slope) + " at max_len 200";
  return o;
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const GrowthPair& g = growth_pair();
  PingPongOptions po;
  po.seed = 1;
  const PingPongCertificate c = pingpong_certify(g.prev, g.beta, 0.1, g.power.m, 1000, po);
  const AnosovReport a = anosov_growth_check(g.pair, 8);
  bool margins = true;
  for (const auto& r : a.roots) margins = margins && r.min_value > 0 && r.linear_margin > 0;
  Outcome o;
  o.pass = c.ok() && c.samples_b + c.samples_sphere + c.samples_d >= 1000 && a.pass() && margins;
  o.detail = "C " + fmt("%.2f", g.c_bar) + ", N " + std::to_string(g.power.n) + ", m " +
             std::to_string(g.power.m) + ", certificate " + to_string(c.status) + " over " + std::to_string(c.samples_b + c.samples_sphere + c.samples_d) + " samples (gp " +
             fmt("%.3f", c.gp_margin) + ", eq32 " + fmt("%.3f", c.eq32_margin) + ", eq33 " +
             fmt("%.3f", c.eq33_margin) + "), linear margins " + fmt("%.3f", a.roots[0].linear_margin) + ", " +
             fmt("%.3f", a.roots[1].linear_margin) + ", " + fmt("%.1f s", seconds_since(t0));
  return o;
}

Outcome criterion7() {
  const GrowthPair& g = growth_pair();
  const ExponentEstimate e1 = critical_exponent(g.pair, 8), e2 = critical_exponent(g.pair2, 8);
  Outcome o;
  o.pass = true;
  std::string d;
  for (std::size_t r = 0; r < e1.roots.size(); ++r) {
    const bool ok = e2.roots[r].slope <= e1.roots[r].slope + e1.roots[r].residual;
    o.pass = o.pass && ok;
    d += "root " + std::to_string(e1.roots[r].root) + ": " + fmt("%.4f", e2.roots[r].slope) + " <= " +
         fmt("%.4f", e1.roots[r].slope) + " + " + fmt("%.4f", e1.roots[r].residual) + "; ";
  }
  o.detail = d + "m " + std::to_string(g.power.m);
  return o;
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const ThmA1Result& r = thmA1();
  const bool ratios = std::fabs(r.a_ratios[0] - 0.25) < 1e-9 && std::fabs(r.a_ratios[1] - 4.0) < 1e-9;
  const RatioReport rr = ratio_check(r.pair(), 8);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = ratios && rr.pass() && rr.max_len == 8 && r.boundary.on_boundary && secs < 600;
  o.detail = "l " + std::to_string(r.l) + ", k " + std::to_string(r.k) + ", ratios(a^{+-1}) " +
             fmt("%.4f", r.a_ratios[0]) + "/" + fmt("%.4f", r.a_ratios[1]) + ", " +
             std::to_string(rr.words_checked) + " cyclically reduced words, " +
             std::to_string(rr.violations.size()) + " violations, max ratio " + fmt("%.10f", rr.max_ratio) +
             ", boundary distance " + fmt("%.1e", r.boundary.distance) + ", " + fmt("%.1f s", secs);
  return o;
}

Outcome criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(909);
  std::size_t transverse = 0;
  double min_margin = 1;
  for (int i = 0; i < 10000; ++i) {
    const auto t = transversality_margin(random_flag(3, rng), random_flag(3, rng));
    transverse += t.transverse;
    min_margin = std::min(min_margin, t.margin);
  }
  double worst_residual = 0;
  int lox = 0;
  while (lox < 100) {
    const RationalMatrix g = oracle::random_unimodular(3, 5, rng);
    if (!is_loxodromic(g)) continue;
    ++lox;
    worst_residual = std::max(worst_residual, fixed_flags(g).residual);
  }
  const ThmA1Result& r = thmA1();
  const GeneratorSet pair = r.pair();
  const FixedFlags fa = fixed_flags(pair.matrix(0)), fb = fixed_flags(pair.matrix(1));
  std::vector<Flag> ball;
  for (const Flag* f : {&fa.attractive, &fa.repulsive, &fb.attractive, &fb.repulsive})
    for (int i = 0; i < 8; ++i) ball.push_back(sample_in_ball(*f, r.certificate.r / 2, rng));
  const auto rows = contraction_diagnostic(pair, 6, ball);
  bool monotone = true;
  std::string diam;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].length < 2) continue;
    diam += fmt("%.2e ", rows[i].max_diameter);
    if (i + 1 < rows.size() && rows[i + 1].length <= 6)
      monotone = monotone && rows[i + 1].max_diameter <= rows[i].max_diameter;
  }
  Outcome o;
  o.pass = transverse == 10000 && worst_residual <= 1e-9 && monotone;
  o.detail = std::to_string(transverse) + "/10000 transverse (min margin " + fmt("%.1e", min_margin) +
             "), fixed residual " + fmt("%.1e", worst_residual) + ", contraction diameters l=2..6: " + diam +
             fmt("(%.1f s)", seconds_since(t0));
  return o;
}

Outcome criterion10() {
  const GeneratorSet pair = thmA1().pair();
  const ConeEstimate c4 = cone_estimate(pair, 4), c6 = cone_estimate(pair, 6), c8 = cone_estimate(pair, 8);
  const double e46 = hull_excess(c4, c6), e68 = hull_excess(c6, c8);
  Outcome o;
  o.pass = e46 <= tolerances().hull && e68 <= tolerances().hull;
  o.detail = "rays " + std::to_string(c4.rays.size()) + " -> " + std::to_string(c6.rays.size()) + " -> " +
             std::to_string(c8.rays.size()) + ", excess 4->6 " + fmt("%.1e", e46) + ", 6->8 " + fmt("%.1e", e68);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome criterion11() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string tri = kData + "/triangle.json", cyc = kData + "/cyclic_diagonal.json",
                    seed = kData + "/diagonal_seed.json";
  const std::vector<std::vector<std::string>> commands = {
      {"classify", tri, "--word", kWord18},
      {"enumerate", tri, "--max-len", "5", "--list"},
      {"limit-cone", seed, "--max-len", "4", "--plot", "--word", "a"},
      {"criteria", tri},
      {"pingpong", seed, "-m", "4", "--samples", "200"},
      {"exponent", cyc, "--max-len", "60", "--format", "json,csv"},
      {"thmA1", seed, "--max-len", "6", "--plot"},
  };
  const auto root = std::filesystem::temp_directory_path() / "limitset_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::size_t files = 0;
  std::vector<std::string> mismatched;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<std::filesystem::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = root / (commands[c][0] + "_" + std::to_string(rep));
      std::vector<std::string> args = {"limitset"};
      args.insert(args.end(), commands[c].begin(), commands[c].end());
      for (const char* extra : {"--seed", "7", "--workers", "2", "--out"}) args.push_back(extra);
      args.push_back(dir.string());
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
      dirs.push_back(dir);
    }
    for (const auto& entry : std::filesystem::directory_iterator(dirs[0])) {
      ++files;
      const auto other = dirs[1] / entry.path().filename();
      const std::string a = slurp(entry.path());
      const bool seeded = a.find("\"seed\": 7") != std::string::npos || a.find("seed=7") != std::string::npos;
      if (!std::filesystem::exists(other) || a != slurp(other) || !seeded)
        mismatched.push_back(commands[c][0] + "/" + entry.path().filename().string());
    }
  }
  Outcome o;
  o.pass = mismatched.empty() && files >= commands.size();
  o.detail = std::to_string(files) + " files compared across " + std::to_string(commands.size()) + " commands";
  for (const auto& m : mismatched) o.detail += ", differs or lacks seed: " + m;
  o.detail += fmt(", %.1f s", seconds_since(t0));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8,
                                                          criterion9, criterion10, criterion11};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %2zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
