#include "limitset/criteria3.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "limitset/errors.hpp"

namespace limitset {

const char* to_string(ZariskiReport::Result r) {
  switch (r) {
    case ZariskiReport::Result::Pass: return "pass";
    case ZariskiReport::Result::Fail: return "fail";
    case ZariskiReport::Result::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(CommutingWitness::Case c) {
  switch (c) {
    case CommutingWitness::Case::Semisimple: return "semisimple";
    case CommutingWitness::Case::Unipotent: return "unipotent";
    case CommutingWitness::Case::Mixed: return "mixed";
  }
  return "?";
}

namespace {

std::vector<mpq_class> flatten(const RationalMatrix& g) {
  std::vector<mpq_class> v;
  v.reserve(static_cast<std::size_t>(g.n()) * g.n());
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) v.push_back(g.entry(i, j));
  return v;
}

std::size_t invariant_form_dimension(const GeneratorSet& gens) {
  const int n = gens.n();
  const int nn = n * n;
  QMatrix eq(static_cast<int>(gens.size()) * nn, nn);
  for (std::size_t s = 0; s < gens.size(); ++s) {
    const QMatrix g = gens.matrix(s).to_qmatrix();
    // (g^T B g - B)_{ij} = sum_{k,l} g_{ki} g_{lj} B_{kl} - B_{ij}
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int row = static_cast<int>(s) * nn + i * n + j;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) eq(row, k * n + l) += g(k, i) * g(l, j);
        eq(row, i * n + j) -= 1;
      }
  }
  return eq.nullspace().size();
}

bool infinite_order(const RationalMatrix& g) {
  return finite_order(g, 24).kind == FiniteOrder::Kind::ProvablyInfinite;
}

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce_mod(const mpz_class& z) {
  mpz_class r = z % mpz_class(static_cast<unsigned long>(kPrime));
  if (r < 0) r += static_cast<unsigned long>(kPrime);
  return r.get_ui();
}

// Entries mod p; nullopt if p divides the denominator.
std::optional<std::vector<std::uint64_t>> mod_image(const RationalMatrix& g) {
  const std::uint64_t d = reduce_mod(g.denominator());
  if (d == 0) return std::nullopt;
  const std::uint64_t dinv = powmod(d, kPrime - 2);
  std::vector<std::uint64_t> v;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) v.push_back(mulmod(reduce_mod(g.numerator(i, j)), dinv));
  return v;
}

bool commute_mod(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::uint64_t x = 0, y = 0;
      for (int k = 0; k < n; ++k) {
        x = (x + mulmod(a[i * n + k], b[k * n + j])) % kPrime;
        y = (y + mulmod(b[i * n + k], a[k * n + j])) % kPrime;
      }
      if (x != y) return false;
    }
  return true;
}

// u^p = v^q for some 0 < |p|, |q| <= horizon.
bool power_relation(const RationalMatrix& u, const RationalMatrix& v, int horizon) {
  std::unordered_multimap<std::size_t, RationalMatrix> pw;
  RationalMatrix up = u, um = u.inverse();
  RationalMatrix cp = up, cm = um;
  for (int p = 1; p <= horizon; ++p) {
    pw.emplace(cp.hash(), cp);
    pw.emplace(cm.hash(), cm);
    cp = cp * up;
    cm = cm * um;
  }
  RationalMatrix vp = v, vm = v.inverse();
  RationalMatrix dp = vp, dm = vm;
  for (int q = 1; q <= horizon; ++q) {
    for (const RationalMatrix* x : {&dp, &dm}) {
      auto range = pw.equal_range(x->hash());
      for (auto it = range.first; it != range.second; ++it)
        if (it->second == *x) return true;
    }
    dp = dp * vp;
    dm = dm * vm;
  }
  return false;
}

SpectralClass::Tag safe_tag(const RationalMatrix& g) {
  try {
    return classify(g).tag;
  } catch (const UnresolvedAtTolerance&) {
    return SpectralClass::Tag::Mixed;
  }
}

bool is_semisimple(const RationalMatrix& g) {
  try {
    return classify(g).semisimple;
  } catch (const UnresolvedAtTolerance&) {
    return false;
  }
}

std::optional<CommutingWitness> commuting_witness(const Element& u, const Element& v, bool integral) {
  if (u.matrix * v.matrix != v.matrix * u.matrix) return std::nullopt;
  if (power_relation(u.matrix, v.matrix, kPowerHorizon)) return std::nullopt;
  CommutingWitness w;
  w.u = u.word;
  w.v = v.word;
  w.mu = u.matrix;
  w.mv = v.matrix;
  w.tag_u = safe_tag(u.matrix);
  w.tag_v = safe_tag(v.matrix);
  w.power_horizon = kPowerHorizon;
  w.integral = integral;
  using Tag = SpectralClass::Tag;
  if (w.tag_u == Tag::Unipotent && w.tag_v == Tag::Unipotent)
    w.kind = CommutingWitness::Case::Unipotent;
  else if (is_semisimple(u.matrix) && is_semisimple(v.matrix))
    w.kind = CommutingWitness::Case::Semisimple;
  else
    w.kind = CommutingWitness::Case::Mixed;
  for (const RationalMatrix& g : {u.matrix, v.matrix, u.matrix * v.matrix, u.matrix * v.matrix.inverse()})
    if (safe_tag(g) == Tag::SingularSemisimple) w.singular_semisimple_free = false;
  return w;
}

QMatrix block_of(int a, int b, int c, int d) {
  QMatrix m(3, 3);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  m(2, 2) = 1;
  return m;
}

bool is_zero_vec(const std::vector<mpq_class>& v) {
  return std::all_of(v.begin(), v.end(), [](const mpq_class& x) { return x == 0; });
}

std::optional<QMatrix> try_block(const RationalMatrix& s, const RationalMatrix& t) {
  const QMatrix S = s.to_qmatrix(), T = t.to_qmatrix(), I = QMatrix::identity(3);
  const QMatrix sm = S - I, tm = T - I;
  auto line = sm.nullspace();
  if (line.size() != 1) return std::nullopt;
  if (!is_zero_vec(tm.apply(line[0]))) return std::nullopt;
  // P = ker(S^2 + I) must be t-invariant.
  const QMatrix proj = S * S + I;
  if (!(proj * T * sm).is_zero()) return std::nullopt;
  std::vector<mpq_class> p1;
  for (const auto& y : (tm * sm).nullspace()) {
    auto p = sm.apply(y);
    if (!is_zero_vec(p)) {
      p1 = std::move(p);
      break;
    }
  }
  if (p1.empty()) return std::nullopt;
  auto p2 = S.apply(p1);
  if (tm.apply(p2) != p1) return std::nullopt;
  QMatrix h(3, 3);
  for (int i = 0; i < 3; ++i) {
    h(i, 0) = p1[i];
    h(i, 1) = p2[i];
    h(i, 2) = line[0][i];
  }
  auto hi = h.inverse();
  if (!hi) return std::nullopt;
  if (!(*hi * S * h == block_of(0, -1, 1, 0)) || !(*hi * T * h == block_of(1, 1, 0, 1))) return std::nullopt;
  return h;
}

bool is_order_four_candidate(const RationalMatrix& g) {
  const CharPoly cp = char_poly(g);
  const auto& c = cp.coefficients();  // ascending
  return c.size() == 4 && c[0] == -1 && c[1] == 1 && c[2] == -1 && c[3] == 1;
}

bool is_transvection(const RationalMatrix& g) {
  const QMatrix m = g.to_qmatrix() - QMatrix::identity(g.n());
  return m.rank() == 1 && (m * m).is_zero();
}

}  // namespace

ZariskiReport zariski_density_heuristic(const GeneratorSet& gens, int max_len, int workers) {
  ZariskiReport rep;
  rep.max_len = max_len;
  const int n = gens.n() > 0 ? gens.n() : 0;
  if (gens.size() == 0) {
    rep.result = ZariskiReport::Result::Fail;
    rep.span_dimension = 1;
    rep.span_stabilized = true;
    rep.detail = "no generators";
    return rep;
  }
  EnumerationOptions opts;
  opts.max_len = max_len;
  opts.workers = workers;
  EnumerationResult e = enumerate(gens, opts);
  const std::size_t full = static_cast<std::size_t>(n) * n;
  RationalSpan span(full);
  std::size_t prev_rank = 0;
  for (int l = 0; l <= e.complete_len; ++l) {
    for (std::size_t i = e.level_start[l]; i < e.level_start[l + 1] && span.rank() < full; ++i)
      span.insert(flatten(e.elements[i].matrix));
    if (l > 0 && span.rank() == prev_rank) rep.span_stabilized = true;
    prev_rank = span.rank();
  }
  if (e.level_start[e.complete_len] == e.level_start[e.complete_len + 1] ||
      (e.complete_len < max_len && !e.partial && !e.stopped_early))
    rep.span_stabilized = true;
  rep.span_dimension = span.rank();
  for (const auto& el : e.elements)
    if (!el.word.empty() && is_loxodromic(el.matrix)) {
      rep.loxodromic = el.word;
      break;
    }
  rep.invariant_forms = invariant_form_dimension(gens);

  if (rep.span_stabilized && rep.span_dimension < full) {
    rep.result = ZariskiReport::Result::Fail;
    rep.detail = "enumerated span is a proper subalgebra (invariant subspace over C)";
  } else if (rep.invariant_forms > 0) {
    rep.result = ZariskiReport::Result::Fail;
    rep.detail = "generators preserve a nonzero bilinear form";
  } else if (rep.span_dimension == full && rep.loxodromic) {
    rep.result = ZariskiReport::Result::Pass;
    rep.detail = "full span, loxodromic word, no invariant form (heuristic)";
  } else {
    rep.result = ZariskiReport::Result::Inconclusive;
    rep.detail = rep.span_dimension < full ? "span still growing at the horizon"
                                           : "no loxodromic word within the horizon";
  }
  return rep;
}

std::optional<ComplexWitness> find_complex_spectrum_witness(const GeneratorSet& gens, int max_len,
                                                            int workers) {
  if (gens.n() != 3) throw DimensionError("complex spectrum search requires n = 3");
  if (!gens.is_integral()) throw DomainError("complex spectrum criterion requires integer generators");
  std::optional<ComplexWitness> found;
  EnumerationOptions opts;
  opts.max_len = max_len;
  opts.workers = workers;
  opts.stop_when = [&](const Element& el) {
    if (el.word.empty()) return false;
    CharPoly cp = char_poly(el.matrix);
    mpq_class disc = cubic_discriminant(cp);
    if (disc >= 0) return false;
    FiniteOrder fo = finite_order(el.matrix, 24);
    if (fo.kind != FiniteOrder::Kind::ProvablyInfinite) return false;
    found = ComplexWitness{el.word, el.matrix, disc, fo, complex_invariant_pair(el.matrix)};
    return true;
  };
  enumerate(gens, opts);
  return found;
}

bool verify_complex_witness(const GeneratorSet& gens, const Word& w) {
  if (gens.n() != 3 || !gens.is_integral()) return false;
  RationalMatrix g = evaluate(w, gens);
  return cubic_discriminant(char_poly(g)) < 0 && infinite_order(g);
}

std::optional<CommutingWitness> find_commuting_pair(const GeneratorSet& gens, int max_len, int workers) {
  if (gens.n() != 3) throw DimensionError("commuting pair search requires n = 3");
  EnumerationOptions opts;
  opts.max_len = max_len;
  opts.workers = workers;
  EnumerationResult e = enumerate(gens, opts);
  std::vector<std::size_t> cand;
  std::vector<std::optional<std::vector<std::uint64_t>>> img;
  for (std::size_t i = 1; i < e.elements.size(); ++i)
    if (infinite_order(e.elements[i].matrix)) {
      cand.push_back(i);
      img.push_back(mod_image(e.elements[i].matrix));
    }
  const bool integral = gens.is_integral();
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a + 1; b < cand.size(); ++b) {
      if (img[a] && img[b] && !commute_mod(*img[a], *img[b], 3)) continue;
      auto w = commuting_witness(e.elements[cand[a]], e.elements[cand[b]], integral);
      if (w) return w;
    }
  return std::nullopt;
}

bool verify_commuting_witness(const GeneratorSet& gens, const Word& u, const Word& v, int horizon) {
  RationalMatrix a = evaluate(u, gens), b = evaluate(v, gens);
  return a * b == b * a && infinite_order(a) && infinite_order(b) && !power_relation(a, b, horizon);
}

std::optional<BlockWitness> find_sl2z_block(const GeneratorSet& gens, int max_len, int workers) {
  if (gens.n() != 3) throw DimensionError("SL(2,Z) block search requires n = 3");
  EnumerationOptions opts;
  opts.max_len = max_len;
  opts.workers = workers;
  EnumerationResult e = enumerate(gens, opts);
  std::vector<std::size_t> ss, ts;
  for (std::size_t i = 1; i < e.elements.size(); ++i) {
    const auto& g = e.elements[i].matrix;
    if (is_order_four_candidate(g))
      ss.push_back(i);
    else if (is_transvection(g))
      ts.push_back(i);
  }
  for (std::size_t a : ss)
    for (std::size_t b : ts) {
      auto h = try_block(e.elements[a].matrix, e.elements[b].matrix);
      if (h) return BlockWitness{e.elements[a].word, e.elements[b].word, *h};
    }
  return std::nullopt;
}

bool verify_block_witness(const GeneratorSet& gens, const Word& s, const Word& t, const QMatrix& basis) {
  if (gens.n() != 3 || basis.rows() != 3 || basis.cols() != 3) return false;
  auto hi = basis.inverse();
  if (!hi) return false;
  const QMatrix S = evaluate(s, gens).to_qmatrix(), T = evaluate(t, gens).to_qmatrix();
  return *hi * S * basis == block_of(0, -1, 1, 0) && *hi * T * basis == block_of(1, 1, 0, 1);
}

CriteriaReport run_criteria(const GeneratorSet& gens, const CriteriaBudget& budget) {
  if (gens.n() != 3) throw DimensionError("run_criteria requires n = 3");
  CriteriaReport rep;
  const int horizon = std::max(0, budget.max_len);
  rep.horizon = horizon;
  rep.integral = gens.is_integral();
  rep.gate = zariski_density_heuristic(gens, std::min(budget.gate_len, horizon), budget.workers);
  rep.notes.push_back("Zariski-density gate is a heuristic");
  if (rep.gate.result == ZariskiReport::Result::Fail) {
    rep.notes.push_back("gate failed; witness searches skipped");
    return rep;
  }
  const int pair_len = std::min(budget.pair_len, horizon);

  if (rep.integral) {
    rep.searched.push_back(3);
    rep.criterion3 = find_complex_spectrum_witness(gens, horizon, budget.workers);
  } else {
    rep.notes.push_back("criterion 3 skipped: generators are not integral");
  }
  if (!rep.criterion3) {
    rep.searched.push_back(1);
    rep.criterion1 = find_commuting_pair(gens, pair_len, budget.workers);
    if (rep.criterion1 && !rep.integral)
      rep.notes.push_back(rep.criterion1->singular_semisimple_free
                              ? "non-integral input: no singular semisimple element among witness checks"
                              : "non-integral input: singular semisimple element found among witness checks");
  }
  if (!rep.criterion3 && !rep.criterion1 && rep.integral) {
    rep.searched.push_back(2);
    rep.criterion2 = find_sl2z_block(gens, pair_len, budget.workers);
  }

  const bool gate = rep.gate.result == ZariskiReport::Result::Pass;
  if (rep.criterion3)
    rep.witness_criterion = 3;
  else if (rep.criterion1 && (rep.integral || rep.criterion1->singular_semisimple_free))
    rep.witness_criterion = 1;
  else if (rep.criterion2)
    rep.witness_criterion = 2;
  rep.full_limit_set = gate && rep.witness_criterion != 0 && rep.integral;
  if (rep.witness_criterion != 0 && !gate) rep.notes.push_back("witness found but gate did not pass");
  if (rep.witness_criterion != 0 && !rep.integral)
    rep.notes.push_back("full limit set criteria assume an SL(3,Z) subgroup; verdict withheld");
  return rep;
}

}  // namespace limitset
