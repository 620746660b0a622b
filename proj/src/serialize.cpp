#include "limitset/serialize.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "limitset/errors.hpp"

namespace limitset {

namespace {

// "-3", "7/2", "0.125", "1e-3" are exact; anything else is a ParseError.
mpq_class parse_rational(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  const std::size_t slash = s.find('/');
  auto all_digits = [](const std::string& t) {
    return !t.empty() && t.find_first_not_of("0123456789") == std::string::npos;
  };
  if (slash != std::string::npos) {
    const std::string p = s.substr(i, slash - i), q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw ParseError("malformed rational '" + s + "'", 0);
    const mpz_class num(p), den(q);
    if (den == 0) throw ParseError("zero denominator in '" + s + "'", slash + 1);
    mpq_class r(num, den);
    r.canonicalize();
    return neg ? mpq_class(-r) : r;
  }
  std::string mant = s.substr(i);
  long exp10 = 0;
  const std::size_t e = mant.find_first_of("eE");
  if (e != std::string::npos) {
    try {
      std::size_t used = 0;
      exp10 = std::stol(mant.substr(e + 1), &used);
      if (used != mant.size() - e - 1) throw std::invalid_argument("tail");
    } catch (const std::exception&) {
      throw ParseError("malformed exponent in '" + s + "'", i + e);
    }
    if (std::labs(exp10) > 10000) throw ParseError("exponent out of range in '" + s + "'", i + e);
    mant = mant.substr(0, e);
  }
  const std::size_t dot = mant.find('.');
  std::string whole = mant, frac;
  if (dot != std::string::npos) {
    whole = mant.substr(0, dot);
    frac = mant.substr(dot + 1);
  }
  if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
      (!frac.empty() && !all_digits(frac)))
    throw ParseError("malformed number '" + s + "'", 0);
  mpz_class num((whole.empty() ? "0" : whole) + frac);
  mpz_class ten = 10, scale;
  long shift = exp10 - static_cast<long>(frac.size());
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(shift)));
  mpq_class r = shift >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  r.canonicalize();
  return neg ? mpq_class(-r) : r;
}

mpq_class entry_of(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return mpq_class(mpz_class(v.dump()));
  throw ParseError("matrix entries must be strings or integers", 0);
}

Json words_json(const std::vector<Word>& ws, const GeneratorSet& g) {
  Json a = Json::array();
  for (const auto& w : ws) a.push_back(format_word(w, g));
  return a;
}

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

GeneratorSet parse_generators(const Json& j) {
  if (!j.is_object()) throw ParseError("generator file must be a JSON object", 0);
  if (!j.contains("generators") || !j["generators"].is_array())
    throw ParseError("missing \"generators\" array", 0);
  std::vector<std::string> names;
  std::vector<RationalMatrix> mats;
  for (const auto& g : j["generators"]) {
    if (!g.is_object() || !g.contains("rows") || !g["rows"].is_array())
      throw ParseError("generator " + std::to_string(names.size()) + " lacks \"rows\"", 0);
    std::string name = g.contains("name") && g["name"].is_string() ? g["name"].get<std::string>()
                                                                  : std::string(1, static_cast<char>('a' + names.size()));
    std::vector<std::vector<mpq_class>> rows;
    for (const auto& r : g["rows"]) {
      if (!r.is_array()) throw ParseError("generator " + name + ": rows must be arrays", 0);
      std::vector<mpq_class> row;
      for (const auto& v : r) row.push_back(entry_of(v));
      if (row.size() != g["rows"].size())
        throw DimensionError("generator " + name + " is not square");
      rows.push_back(std::move(row));
    }
    names.push_back(std::move(name));
    mats.push_back(RationalMatrix::from_rows(rows));
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) throw ParseError("\"n\" must be an integer", 0);
    return GeneratorSet(j["n"].get<int>(), std::move(names), std::move(mats));
  }
  return GeneratorSet(std::move(names), std::move(mats));
}

GeneratorSet parse_generators_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  return parse_generators(j);
}

GeneratorSet load_generators(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_generators_text(ss.str());
}

Json generators_json(const GeneratorSet& gens) {
  Json g = Json::array();
  for (std::size_t i = 0; i < gens.size(); ++i)
    g.push_back({{"name", gens.name(i)}, {"rows", to_json(gens.matrix(i))}});
  return {{"n", gens.n()}, {"generators", g}};
}

Json to_json(const RationalMatrix& m) { return Json(m.to_strings()); }

Json to_json(const AVector& v) { return doubles(v.values()); }

Json to_json(const Flag& f) {
  Json cols = Json::array();
  for (int k = 0; k < f.n(); ++k) cols.push_back(doubles(f.column(k)));
  return cols;
}

Json to_json(const SpectralClass& c) {
  Json j;
  j["tag"] = to_string(c.tag);
  j["eigenvalue_moduli"] = doubles(c.eigenvalue_moduli);
  j["jordan"] = to_json(c.jordan);
  j["cartan"] = to_json(c.cartan);
  j["walls"] = c.walls;
  j["order"] = {{"kind", to_string(c.order.kind)}, {"order", c.order.order}, {"evidence", c.order.evidence}};
  j["complex_spectrum"] = c.complex_spectrum;
  j["semisimple"] = c.semisimple;
  j["discriminant"] = c.discriminant ? Json(c.discriminant->get_str()) : Json(nullptr);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const EnumerationResult& e, const GeneratorSet& gens, bool list_elements) {
  Json j;
  j["max_len"] = e.max_len;
  j["dedup"] = e.dedup;
  j["complete_len"] = e.complete_len;
  j["partial"] = e.partial;
  j["elements"] = e.elements.size();
  Json counts = Json::array();
  for (int L = 0; L <= e.max_len; ++L) counts.push_back(e.count_at_length(L));
  j["count_by_length"] = counts;
  j["relations_seen"] = e.relations_seen;
  Json rel = Json::array();
  for (const auto& r : e.relations)
    rel.push_back({{"word", format_word(r.word, gens)},
                   {"earlier", format_word(r.earlier, gens)},
                   {"relator", format_word(r.relator, gens)}});
  j["relations"] = rel;
  if (list_elements) {
    Json el = Json::array();
    for (const auto& x : e.elements) el.push_back(format_word(x.word, gens));
    j["words"] = el;
  }
  return j;
}

Json to_json(const ConeEstimate& c, const GeneratorSet& gens) {
  Json j;
  j["n"] = c.n;
  j["max_word_len"] = c.max_word_len;
  j["elements_scanned"] = c.elements_scanned;
  j["loxodromic"] = c.loxodromic;
  j["experimental"] = c.experimental;
  Json rays = Json::array();
  for (const auto& r : c.rays)
    rays.push_back({{"word", format_word(r.word, gens)},
                    {"multiplicity", r.multiplicity},
                    {"lambda", to_json(r.lambda)},
                    {"normalized", to_json(r.normalized)},
                    {"span_normalized", to_json(r.span_normalized)},
                    {"slice", doubles(r.slice)}});
  j["rays"] = rays;
  j["hull"] = c.hull;
  return j;
}

Json to_json(const BoundaryVerdict& b) {
  return {{"on_boundary", b.on_boundary},
          {"distance", number(b.distance)},
          {"supporting_ratio", number(b.supporting_ratio)},
          {"inside", b.inside}};
}

Json to_json(const RatioReport& r, const GeneratorSet& gens) {
  Json j;
  j["max_len"] = r.max_len;
  j["bound"] = number(r.bound);
  j["slack"] = r.slack;
  j["a_ratios"] = doubles(r.a_ratios);
  j["words_checked"] = r.words_checked;
  j["classes"] = r.classes;
  j["skipped"] = r.skipped;
  j["skipped_words"] = words_json(r.skipped_words, gens);
  j["max_ratio"] = number(r.max_ratio);
  j["max_word"] = r.max_word ? Json(format_word(*r.max_word, gens)) : Json(nullptr);
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back({{"word", format_word(x.word, gens)}, {"ratio", number(x.ratio)}});
  j["violations"] = v;
  j["pass"] = r.pass();
  return j;
}

Json to_json(const ThmA1Result& r, const GeneratorSet& seed) {
  const GeneratorSet pair = r.pair();
  Json j;
  j["a1_word"] = format_word(r.a1_word, seed);
  j["a1_squared"] = r.a1_squared;
  j["b1_word"] = format_word(r.b1_word, seed);
  j["a1"] = to_json(r.a1);
  j["b1"] = to_json(r.b1);
  j["l"] = r.l;
  j["k"] = r.k;
  j["pair"] = generators_json(pair);
  j["a_ratios"] = doubles(r.a_ratios);
  j["b1_ratios"] = doubles(r.b1_ratios);
  j["transversality"] = number(r.transversality);
  j["gate"] = to_json(r.gate, pair);
  j["pingpong"] = to_json(r.certificate);
  j["ratio_check"] = to_json(r.ratios, pair);
  j["cone"] = to_json(r.cone, pair);
  j["boundary"] = to_json(r.boundary);
  Json at = Json::array();
  for (const auto& a : r.attempts) at.push_back({{"l", a.l}, {"k", a.k}, {"stage", a.stage}, {"detail", a.detail}});
  j["attempts"] = at;
  return j;
}

Json to_json(const ZariskiReport& z, const GeneratorSet& gens) {
  return {{"result", to_string(z.result)},
          {"max_len", z.max_len},
          {"span_dimension", z.span_dimension},
          {"span_stabilized", z.span_stabilized},
          {"loxodromic", z.loxodromic ? Json(format_word(*z.loxodromic, gens)) : Json(nullptr)},
          {"invariant_forms", z.invariant_forms},
          {"detail", z.detail}};
}

Json to_json(const CriteriaReport& r, const GeneratorSet& gens) {
  Json j;
  j["verdict"] = r.full_limit_set ? "FullLimitSet" : "NoWitnessFound";
  j["witness_criterion"] = r.witness_criterion;
  j["horizon"] = r.horizon;
  j["integral"] = r.integral;
  j["gate"] = to_json(r.gate, gens);
  j["searched"] = r.searched;
  if (r.criterion3) {
    const auto& w = *r.criterion3;
    j["criterion3"] = {{"word", format_word(w.word, gens)},
                       {"length", w.word.size()},
                       {"matrix", to_json(w.matrix)},
                       {"discriminant", w.discriminant.get_str()},
                       {"order", to_string(w.order.kind)},
                       {"order_evidence", w.order.evidence},
                       {"eigenline", doubles(w.invariants.point)},
                       {"invariant_plane", doubles(w.invariants.line)}};
  }
  if (r.criterion1) {
    const auto& w = *r.criterion1;
    j["criterion1"] = {{"u", format_word(w.u, gens)},
                       {"v", format_word(w.v, gens)},
                       {"case", to_string(w.kind)},
                       {"tag_u", to_string(w.tag_u)},
                       {"tag_v", to_string(w.tag_v)},
                       {"power_horizon", w.power_horizon},
                       {"integral", w.integral},
                       {"singular_semisimple_free", w.singular_semisimple_free}};
  }
  if (r.criterion2) {
    const auto& w = *r.criterion2;
    Json basis = Json::array();
    for (int i = 0; i < w.basis.rows(); ++i) {
      Json row = Json::array();
      for (int k = 0; k < w.basis.cols(); ++k) row.push_back(w.basis(i, k).get_str());
      basis.push_back(row);
    }
    j["criterion2"] = {{"s", format_word(w.s, gens)}, {"t", format_word(w.t, gens)}, {"basis", basis}};
  }
  j["notes"] = r.notes;
  return j;
}

Json to_json(const PingPongCertificate& c) {
  Json j;
  j["status"] = to_string(c.status);
  j["r"] = c.r;
  j["m"] = c.m;
  j["len_cap"] = c.len_cap;
  j["k_cap"] = c.k_cap;
  j["seed"] = c.seed;
  j["x_plus"] = to_json(c.x_plus);
  j["x_minus"] = to_json(c.x_minus);
  j["fixed_residual"] = number(c.fixed_residual);
  j["samples_b"] = c.samples_b;
  j["samples_sphere"] = c.samples_sphere;
  j["samples_d"] = c.samples_d;
  j["limit_points"] = c.limit_points;
  j["gammas"] = c.gammas;
  j["precondition_margin"] = number(c.precondition_margin);
  j["gp_margin"] = number(c.gp_margin);
  j["eq32_margin"] = number(c.eq32_margin);
  j["eq33_margin"] = number(c.eq33_margin);
  j["witness"] = c.witness;
  return j;
}

Json to_json(const ExponentEstimate& e) {
  Json j;
  j["max_len"] = e.max_len;
  j["elements"] = e.elements;
  Json roots = Json::array();
  for (const auto& r : e.roots)
    roots.push_back({{"root", r.root},
                     {"slope", number(r.slope)},
                     {"raw_slope", number(r.raw_slope)},
                     {"intercept", number(r.intercept)},
                     {"residual", number(r.residual)},
                     {"r_lo", number(r.r_lo)},
                     {"r_hi", number(r.r_hi)},
                     {"grid", doubles(r.grid)},
                     {"counts", r.counts}});
  j["roots"] = roots;
  j["max_slope"] = number(e.max_slope());
  return j;
}

Json to_json(const AnosovReport& a) {
  Json j;
  j["max_len"] = a.max_len;
  Json roots = Json::array();
  for (const auto& r : a.roots)
    roots.push_back({{"root", r.root},
                     {"l_hat", number(r.l_hat)},
                     {"a_hat", r.a_hat},
                     {"min_value", number(r.min_value)},
                     {"linear_margin", number(r.linear_margin)},
                     {"min_by_length", doubles(r.min_by_length)},
                     {"pass", r.pass}});
  j["roots"] = roots;
  j["pass"] = a.pass();
  return j;
}

Json to_json(const KeyLemmaReport& k) {
  Json j;
  j["max_blocks"] = k.max_blocks;
  j["samples"] = k.samples;
  j["seed"] = k.seed;
  j["words_tested"] = k.words_tested;
  j["census"] = k.census;
  Json roots = Json::array();
  for (const auto& r : k.roots)
    roots.push_back({{"root", r.root},
                     {"max_deviation", number(r.max_deviation)},
                     {"max_by_blocks", doubles(r.max_by_blocks)},
                     {"witness", r.witness}});
  j["roots"] = roots;
  j["constant"] = number(k.constant());
  return j;
}

std::string exponent_csv(const ExponentEstimate& e) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "root,R,count,slope,residual\n";
  for (const auto& r : e.roots)
    for (std::size_t i = 0; i < r.grid.size(); ++i)
      out << r.root << ',' << r.grid[i] << ',' << r.counts[i] << ',' << r.slope << ',' << r.residual << '\n';
  return out.str();
}

}  // namespace limitset
