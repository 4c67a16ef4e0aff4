// idcubic: properness certificates for F_A(x) = x + (Ax)^k.
//
//   idcubic analyze    --input A.json [--k 3] [--seed 0] [--schedule 10,100,...] [--out cert.json]
//   idcubic druzkowski --input A.json [--seed 0] [--trials 64]
//   idcubic witness    --input A.json [--k 3] [--schedule ...]
//   idcubic probe      --input A.json [--k 3] [--radii 1,2,4] [--trials 8] [--seed 1]
//   idcubic forge      [--kind family] [--seed 0] [--m 3 --r 2]
//   idcubic density    --m 3 --r 2 [--trials 100] [--seed 0] [--no-timing]
//   idcubic signs      --input A.json
//
// Exit codes: 0 decisive, 2 undecided, 1 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "idcubic/certifier.hpp"
#include "idcubic/density.hpp"
#include "idcubic/forge.hpp"
#include "idcubic/json_io.hpp"
#include "idcubic/keller.hpp"
#include "idcubic/probe.hpp"

using namespace idc;

namespace {

constexpr int kDecisive = 0;
constexpr int kInputError = 1;
constexpr int kUndecided = 2;

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 0;
  unsigned k = 3;
  std::string schedule;
  std::string radii;
  std::size_t trials = 0;
  std::size_t m = 3, r = 2;
  std::string kind = "family";
  bool no_timing = false;
};

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(field + ": invalid number '" + item + "'");
    }
  }
  if (out.empty()) throw InputError(field + ": empty list");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) throw InputError(field + ": values must be strictly increasing");
  if (!(out.front() > 0)) throw InputError(field + ": values must be positive");
  return out;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw InputError("out: cannot write '" + cfg.output_path + "'");
  out << text;
}

void emit_json(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

RatMatrix load_matrix(const RunConfig& cfg, Json* whole = nullptr) {
  if (cfg.input_path.empty()) throw InputError("input: required for '" + cfg.command + "'");
  Json j = read_json_file(cfg.input_path);
  // certificates written by analyze carry the matrix under "matrix"
  const RatMatrix a = matrix_from_json(j.is_object() && j.contains("matrix") ? j["matrix"] : j);
  if (whole) *whole = std::move(j);
  return a;
}

CertifyOptions certify_options(const RunConfig& cfg) {
  CertifyOptions opt;
  opt.seed = cfg.seed;
  if (!cfg.schedule.empty()) opt.schedule = parse_list(cfg.schedule, "schedule");
  return opt;
}

int run_analyze(const RunConfig& cfg) {
  const RatMatrix a = load_matrix(cfg);
  const Certificate c = certify_power(a, cfg.k, certify_options(cfg));
  Json j = certificate_json(c);
  j["matrix"] = matrix_json(a);
  j["k"] = cfg.k;
  j["seed"] = cfg.seed;
  emit_json(cfg, j);
  return c.decisive() ? kDecisive : kUndecided;
}

int run_druzkowski(const RunConfig& cfg) {
  const RatMatrix a = load_matrix(cfg);
  DruzkowskiOptions opt;
  opt.seed = cfg.seed;
  opt.k = cfg.k;
  if (cfg.trials) opt.trials = cfg.trials;
  const auto ev = is_druzkowski(a, opt);
  Json j = druzkowski_json(ev);
  j["k"] = cfg.k;
  emit_json(cfg, j);
  return kDecisive;
}

int run_witness(const RunConfig& cfg) {
  Json whole;
  const RatMatrix a = load_matrix(cfg, &whole);
  const auto opt = certify_options(cfg);
  Json out;
  WitnessValidationReport rep;
  const Json* given = nullptr;
  if (whole.contains("recipe")) given = &whole["recipe"];
  else if (whole.contains("evidence") && whole["evidence"].contains("recipe")) given = &whole["evidence"]["recipe"];
  if (given) {
    Json rj = *given;
    if (!rj.contains("k")) rj["k"] = cfg.k;
    const auto r = recipe_from_json<Rational>(rj);
    rep = validate_witness(a, r, opt.schedule);
    out["source"] = "provided";
    out["recipe"] = recipe_json(r);
  } else {
    const Certificate c = certify_power(a, cfg.k, opt);
    out["verdict"] = to_string(c.verdict);
    out["reason"] = c.reason;
    if (c.evidence.recipe) {
      rep = validate_witness(a, *c.evidence.recipe, opt.schedule);
      out["recipe"] = recipe_json(*c.evidence.recipe);
    } else if (c.evidence.numeric_recipe) {
      rep = validate_witness(a, *c.evidence.numeric_recipe, opt.schedule);
      out["recipe"] = recipe_json(*c.evidence.numeric_recipe);
    } else {
      out["source"] = "none";
      out["report"] = nullptr;
      emit_json(cfg, out);
      std::cerr << "no witness recipe: input has none and the certificate is " << to_string(c.verdict) << "\n";
      return kUndecided;
    }
    out["source"] = "certificate";
  }
  out["report"] = witness_report_json(rep);
  emit_json(cfg, out);
  return rep.passed ? kDecisive : kUndecided;
}

int run_probe(const RunConfig& cfg) {
  const RatMatrix a = load_matrix(cfg);
  ProbeOptions opt;
  opt.k = cfg.k;
  opt.seed = cfg.seed;
  if (cfg.trials) opt.restarts = static_cast<unsigned>(cfg.trials);
  if (!cfg.radii.empty()) opt.radii = parse_list(cfg.radii, "radii");
  const auto rep = probe_mu(a, opt);
  Json j = probe_report_json(rep);
  j["k"] = cfg.k;
  emit_json(cfg, j);
  return rep.verdict_hint == ProbeHint::Inconclusive ? kUndecided : kDecisive;
}

RatMatrix forge_smallest_member(Json& meta) {
  const auto p = smallest_family_member([](const RatMatrix& a) {
    const auto c = corank1_decide(a);
    return c.verdict == Verdict::NonProper && !c.numeric_only;
  });
  if (!p) throw DomainError("no family member in the search box");
  meta["params"] = {{"a11", to_string(p->a11)}, {"a12", to_string(p->a12)}, {"a22", to_string(p->a22)},
                    {"lambda", to_string(p->lambda)}};
  return forge_3x3(*p);
}

int run_forge(const RunConfig& cfg) {
  Json meta{{"kind", cfg.kind}};
  RatMatrix a;
  std::mt19937_64 rng(cfg.seed);
  if (cfg.kind == "family") {
    a = forge_smallest_member(meta);
  } else if (cfg.kind == "shift") {
    a = shift_5x5();
  } else if (cfg.kind == "random-family") {
    const auto [p, f] = random_family_member(rng);
    a = f;
    meta["params"] = {{"a11", to_string(p.a11)}, {"a12", to_string(p.a12)}, {"a22", to_string(p.a22)},
                      {"lambda", to_string(p.lambda)}};
  } else if (cfg.kind == "rank") {
    a = sample_rank_r(cfg.m, cfg.r, 3, cfg.seed);
  } else if (cfg.kind == "ones-kernel") {
    a = sample_ones_kernel(cfg.m, rng);
  } else if (cfg.kind == "ones-kernel-nonproper") {
    a = sample_ones_kernel_nonproper(cfg.m, rng);
  } else if (cfg.kind == "ones-kernel-borderline") {
    a = sample_ones_kernel_borderline(cfg.m, rng);
  } else {
    throw InputError("kind: unknown '" + cfg.kind + "'");
  }
  if (cfg.kind != "family" && cfg.kind != "shift") meta["seed"] = cfg.seed;
  Json j = matrix_json(a);
  j["forge"] = meta;
  emit_json(cfg, j);
  return kDecisive;
}

int run_density(const RunConfig& cfg) {
  const auto s = density_experiment(cfg.m, cfg.r, cfg.trials ? cfg.trials : 100, cfg.seed);
  std::ostringstream csv;
  write_density_csv(csv, s, !cfg.no_timing);
  emit(cfg, csv.str());
  std::cerr << density_table(s);
  return kDecisive;
}

int run_signs(const RunConfig& cfg) {
  const RatMatrix a = load_matrix(cfg);
  const auto sp = find_sign_pattern(a);
  Json j = sign_pattern_json(sp);
  if (sp) j["verified"] = satisfies_sign_pattern(a, *sp);
  emit_json(cfg, j);
  return kDecisive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Properness certificates for x + (Ax)^k"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool input) {
    if (input) sub->add_option("--input", cfg.input_path, "matrix JSON")->required();
    sub->add_option("--out", cfg.output_path, "output file (default stdout)");
    sub->add_option("--seed", cfg.seed, "random seed");
  };
  auto* analyze = app.add_subcommand("analyze", "certify properness");
  add_common(analyze, true);
  analyze->add_option("--k", cfg.k, "power k")->check(CLI::PositiveNumber);
  analyze->add_option("--schedule", cfg.schedule, "gamma schedule, comma separated");

  auto* druz = app.add_subcommand("druzkowski", "is det JF_A identically 1");
  add_common(druz, true);
  druz->add_option("--k", cfg.k, "power k")->check(CLI::PositiveNumber);
  druz->add_option("--trials", cfg.trials, "random evaluations above the exact size bound");

  auto* witness = app.add_subcommand("witness", "validate a witness sequence");
  add_common(witness, true);
  witness->add_option("--k", cfg.k, "power k")->check(CLI::PositiveNumber);
  witness->add_option("--schedule", cfg.schedule, "gamma schedule, comma separated");

  auto* probe = app.add_subcommand("probe", "estimate min |F_A| on spheres");
  add_common(probe, true);
  probe->add_option("--k", cfg.k, "power k")->check(CLI::PositiveNumber);
  probe->add_option("--radii", cfg.radii, "sphere radii, comma separated");
  probe->add_option("--trials", cfg.trials, "restarts");

  auto* forge = app.add_subcommand("forge", "generate instances");
  add_common(forge, false);
  forge->add_option("--kind", cfg.kind,
                    "family | shift | random-family | rank | ones-kernel | ones-kernel-nonproper | ones-kernel-borderline");
  forge->add_option("--m", cfg.m, "dimension");
  forge->add_option("--r", cfg.r, "rank");

  auto* density = app.add_subcommand("density", "certify random rank-r samples, CSV");
  add_common(density, false);
  density->add_option("--m", cfg.m, "dimension")->required();
  density->add_option("--r", cfg.r, "rank")->required();
  density->add_option("--trials", cfg.trials, "number of samples (default 100)");
  density->add_flag("--no-timing", cfg.no_timing, "write NA for millis");

  auto* signs = app.add_subcommand("signs", "sign pattern with a_ij = s d_i d_j sign");
  add_common(signs, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (cfg.command == "analyze") return run_analyze(cfg);
    if (cfg.command == "druzkowski") return run_druzkowski(cfg);
    if (cfg.command == "witness") return run_witness(cfg);
    if (cfg.command == "probe") return run_probe(cfg);
    if (cfg.command == "forge") return run_forge(cfg);
    if (cfg.command == "density") return run_density(cfg);
    if (cfg.command == "signs") return run_signs(cfg);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
