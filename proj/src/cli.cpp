#include "limitset/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "limitset/config.hpp"
#include "limitset/errors.hpp"
#include "limitset/svg.hpp"

#ifndef LIMITSET_VERSION
#define LIMITSET_VERSION "dev"
#endif

namespace limitset {

namespace {

struct Output {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;

  void write(const std::string& name, const std::string& body) const {
    if (cfg.out_dir.empty()) {
      out << body;
      return;
    }
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << body;
    err << "wrote " << path.string() << "\n";
  }

  void json(const std::string& stem, Json payload) const {
    Json doc;
    doc["tool"] = "limitset";
    doc["version"] = LIMITSET_VERSION;
    doc["command"] = cfg.command;
    doc["seed"] = cfg.seed;
    doc["config"] = config_json(cfg);
    doc["result"] = std::move(payload);
    write(stem + ".json", doc.dump(2) + "\n");
  }

  std::string header(const std::string& comment) const {
    return comment + " limitset " + LIMITSET_VERSION + " command=" + cfg.command +
           " seed=" + std::to_string(cfg.seed) + " config=" + config_json(cfg).dump();
  }
};

bool wants(const RunConfig& cfg, const std::string& fmt) {
  std::stringstream ss(cfg.format);
  std::string item;
  while (std::getline(ss, item, ','))
    if (item == fmt) return true;
  return false;
}

int pick(int value, int fallback) { return value >= 0 ? value : fallback; }

int cmd_classify(const RunConfig& cfg, const GeneratorSet& gens, const Output& o) {
  const Word w = parse_word(cfg.word, gens);
  const RationalMatrix m = evaluate(w, gens);
  Json j;
  j["word"] = format_word(w, gens);
  j["length"] = w.size();
  j["matrix"] = to_json(m);
  j["classification"] = to_json(classify(m));
  o.json("classify", std::move(j));
  return kExitOk;
}

int cmd_enumerate(const RunConfig& cfg, const GeneratorSet& gens, const Output& o) {
  EnumerationOptions eo;
  eo.max_len = pick(cfg.max_len, 6);
  eo.dedup = cfg.dedup;
  eo.workers = cfg.workers;
  const EnumerationResult e = enumerate(gens, eo);
  o.json("enumerate", to_json(e, gens, cfg.list));
  return kExitOk;
}

int cmd_limit_cone(const RunConfig& cfg, const GeneratorSet& gens, const Output& o) {
  const ConeEstimate est = cone_estimate(gens, pick(cfg.max_len, 6), cfg.workers);
  Json j = to_json(est, gens);
  std::optional<AVector> mark;
  if (!cfg.word.empty()) {
    const Word w = parse_word(cfg.word, gens);
    mark = jordan_projection(evaluate(w, gens));
    Json b = {{"word", format_word(w, gens)}, {"lambda", to_json(*mark)}};
    if (!est.hull.empty() && !mark->is_zero()) b["verdict"] = to_json(boundary_test(est, *mark));
    j["marked"] = b;
  }
  o.json("limit_cone", std::move(j));
  if (cfg.plot) {
    if (gens.n() != 3) {
      o.err << "notice: plot skipped (slice plot is drawn for n = 3 only)\n";
    } else {
      std::string svg = cone_svg(est, mark, "limit cone slice, max_len " + std::to_string(est.max_word_len));
      o.write("limit_cone.svg", "<!--" + o.header("") + " -->\n" + svg);
    }
  }
  return kExitOk;
}

int cmd_criteria(const RunConfig& cfg, const GeneratorSet& gens, const Output& o) {
  if (gens.n() != 3) throw DimensionError("criteria requires n = 3");
  CriteriaBudget b;
  b.max_len = pick(cfg.budget, pick(cfg.max_len, b.max_len));
  b.workers = cfg.workers;
  const CriteriaReport r = run_criteria(gens, b);
  o.json("criteria", to_json(r, gens));
  return r.full_limit_set ? kExitOk : kExitNoWitness;
}

int cmd_pingpong(const RunConfig& cfg, const GeneratorSet& gens, const Output& o) {
  if (gens.size() < 2) throw DomainError("pingpong needs a previous group and beta");
  std::size_t bi = gens.size() - 1;
  if (!cfg.beta.empty()) {
    const auto idx = gens.index_of(cfg.beta);
    if (!idx) throw DomainError("unknown generator '" + cfg.beta + "'");
    bi = *idx;
  }
  std::vector<std::string> names;
  std::vector<RationalMatrix> mats;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (i != bi) {
      names.push_back(gens.name(i));
      mats.push_back(gens.matrix(i));
    }
  const GeneratorSet prev(names, mats);
  PingPongOptions po;
  po.seed = cfg.seed;
  po.workers = cfg.workers;
  const PingPongCertificate c = pingpong_certify(prev, gens.matrix(bi), cfg.r, cfg.m, cfg.samples, po);
  Json j;
  j["beta"] = gens.name(bi);
  j["certificate"] = to_json(c);
  bool ok = c.ok();
  if (cfg.anosov) {
    names.push_back(gens.name(bi) + "^" + std::to_string(cfg.m));
    mats.push_back(power(gens.matrix(bi), cfg.m));
    const AnosovReport a = anosov_growth_check(GeneratorSet(names, mats), pick(cfg.max_len, 8), cfg.workers);
    j["anosov"] = to_json(a);
    ok = ok && a.pass();
  }
  o.json("pingpong", std::move(j));
  return ok ? kExitOk : kExitNoWitness;
}

int cmd_exponent(const RunConfig& cfg, const GeneratorSet& gens, const Output& o) {
  const ExponentEstimate e = critical_exponent(gens, pick(cfg.max_len, 12), cfg.workers);
  if (wants(cfg, "json")) o.json("exponent", to_json(e));
  if (wants(cfg, "csv")) o.write("exponent.csv", o.header("#") + "\n" + exponent_csv(e));
  return kExitOk;
}

int cmd_thmA1(const RunConfig& cfg, const GeneratorSet& gens, const Output& o) {
  ThmA1Options opts;
  opts.check_len = pick(cfg.max_len, opts.check_len);
  opts.search_len = pick(cfg.budget, opts.search_len);
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  ThmA1Result r;
  try {
    r = build_thmA1_pair(gens, opts);
  } catch (const BudgetExhausted& e) {
    o.json("thmA1", Json{{"status", "BudgetExhausted"}, {"detail", e.what()}});
    return kExitNoWitness;
  }
  Json j = to_json(r, gens);
  j["status"] = "ok";
  o.json("thmA1", std::move(j));
  if (cfg.plot && gens.n() == 3) {
    std::string svg = cone_svg(r.cone, jordan_projection(r.a), "limit cone of <a, b>, lambda(a) marked");
    o.write("thmA1.svg", "<!--" + o.header("") + " -->\n" + svg);
  }
  return kExitOk;
}

void apply_tolerances(const RunConfig& cfg) {
  if (!cfg.tol_wall && !cfg.tol_gp) return;
  Tolerances t = tolerances();
  if (cfg.tol_wall) t.wall = *cfg.tol_wall;
  if (cfg.tol_gp) t.gp = *cfg.tol_gp;
  if (!(t.wall > 0) || !(t.gp > 0) || !set_tolerances(t))
    throw DomainError("tolerance overrides may only tighten the defaults");
}

}  // namespace

Json config_json(const RunConfig& cfg) {
  Json j;
  j["input"] = cfg.input;
  if (!cfg.word.empty()) j["word"] = cfg.word;
  j["max_len"] = cfg.max_len;
  j["budget"] = cfg.budget;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["format"] = cfg.format;
  j["plot"] = cfg.plot;
  j["dedup"] = cfg.dedup;
  const Tolerances& t = tolerances();
  j["tolerances"] = {{"wall", t.wall}, {"gp", t.gp}, {"hull", t.hull}};
  if (cfg.command == "pingpong") {
    j["beta"] = cfg.beta;
    j["r"] = cfg.r;
    j["m"] = cfg.m;
    j["samples"] = cfg.samples;
    j["anosov"] = cfg.anosov;
  }
  return j;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    apply_tolerances(cfg);
    const GeneratorSet gens = load_generators(cfg.input);
    const Output o{cfg, out, err};
    if (cfg.command == "classify") return cmd_classify(cfg, gens, o);
    if (cfg.command == "enumerate") return cmd_enumerate(cfg, gens, o);
    if (cfg.command == "limit-cone") return cmd_limit_cone(cfg, gens, o);
    if (cfg.command == "criteria") return cmd_criteria(cfg, gens, o);
    if (cfg.command == "pingpong") return cmd_pingpong(cfg, gens, o);
    if (cfg.command == "exponent") return cmd_exponent(cfg, gens, o);
    if (cfg.command == "thmA1") return cmd_thmA1(cfg, gens, o);
    err << "error: unknown command '" << cfg.command << "'\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExhausted& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kExitNoWitness;
  } catch (const InsufficientData& e) {
    err << "insufficient data: " << e.what() << "\n";
    return kExitNoWitness;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"limitset: limit sets, limit cones and growth of discrete subgroups of SL(n,R)"};
  app.set_version_flag("--version", std::string(LIMITSET_VERSION));
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool word_required) {
    sub->add_option("input", cfg.input, "generator JSON file")->required();
    auto* w = sub->add_option("--word", cfg.word, "word in the generators");
    if (word_required) w->required();
    sub->add_option("--max-len", cfg.max_len, "word-length horizon")->check(CLI::NonNegativeNumber);
    sub->add_option("--budget", cfg.budget, "search budget (word length)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--workers", cfg.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out_dir, "output directory (default: stdout)");
    sub->add_option("--format", cfg.format, "json, csv or json,csv");
    sub->add_flag("--plot", cfg.plot, "write an SVG slice plot (n = 3)");
    sub->add_option("--tol-wall", cfg.tol_wall, "chamber-wall tolerance (tighten only)");
    sub->add_option("--tol-gp", cfg.tol_gp, "transversality tolerance (tighten only)");
  };

  auto* classify = app.add_subcommand("classify", "classify one word");
  common(classify, true);
  auto* en = app.add_subcommand("enumerate", "enumerate group elements by word length");
  common(en, false);
  en->add_flag("!--no-dedup", cfg.dedup, "keep words with equal matrices");
  en->add_flag("--list", cfg.list, "list the enumerated words");
  auto* cone = app.add_subcommand("limit-cone", "estimate the limit cone from Jordan projections");
  common(cone, false);
  auto* crit = app.add_subcommand("criteria", "full-limit-set criteria for n = 3");
  common(crit, false);
  auto* pp = app.add_subcommand("pingpong", "ping-pong certificate for <prev, beta>");
  common(pp, false);
  pp->add_option("--beta", cfg.beta, "generator playing beta (default: last)");
  pp->add_option("-r,--radius", cfg.r, "ball radius in (0, 1/2]");
  pp->add_option("-m,--power", cfg.m, "power multiplier m");
  pp->add_option("--samples", cfg.samples, "flag samples (>= 8)");
  pp->add_flag("--anosov", cfg.anosov, "also run the linear-growth check on <prev, beta^m>");
  auto* ex = app.add_subcommand("exponent", "critical exponent estimates per simple root");
  common(ex, false);
  auto* th = app.add_subcommand("thmA1", "build a pair with lambda(a) on the limit cone boundary");
  common(th, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run_command(cfg, out, err);
}

}  // namespace limitset
