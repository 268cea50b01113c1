// gapcert: solve space-time extensions of state-constrained impulsive optimal
// control problems, verify constrained maximum-principle multiplier sets,
// classify extremals, check the no-gap qualification conditions and probe the
// strict-sense restriction empirically.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "gapcert/errors.hpp"
#include "gapcert/extension.hpp"
#include "gapcert/fixtures.hpp"
#include "gapcert/gap_probe.hpp"
#include "gapcert/json_io.hpp"
#include "gapcert/normality.hpp"
#include "gapcert/qualifications.hpp"
#include "gapcert/solver.hpp"
#include "gapcert/svg.hpp"

namespace fs = std::filesystem;
using namespace gapcert;

namespace {

struct RunConfig {
  std::string problem;  // fixture name or JSON path
  std::string out_dir;
  SolveOptions solve;
  NormalityOptions normality;
  QualOptions qual;
  ProbeOptions probe;
  double feasibility_tol = 1e-6;
};

std::string default_out_dir() {
  const char* env = std::getenv("GAPCERT_OUT");
  return env != nullptr ? env : ".";
}

ProblemSpec resolve_problem(const std::string& src) {
  if (is_fixture(src)) return make_fixture(src);
  return load_problem_file(src);
}

void apply_config_json(RunConfig& cfg, const std::string& path) {
  Json j = read_json_file(path);
  static const char* known[] = {"problem", "out",       "grid",  "seed",   "starts",
                                "delta",   "eps_list",  "tol_feas", "tol_delta", "lp_cells"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw Error(ErrorKind::bad_input, "config: unknown key '" + it.key() + "'");
  }
  if (j.contains("problem")) cfg.problem = j["problem"].get<std::string>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("grid")) cfg.solve.cells = j["grid"].get<int>();
  if (j.contains("seed")) cfg.solve.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("starts")) cfg.solve.multistarts = j["starts"].get<int>();
  if (j.contains("delta")) cfg.probe.delta = j["delta"].get<double>();
  if (j.contains("eps_list")) {
    cfg.probe.eps_levels.clear();
    for (const auto& e : j["eps_list"]) cfg.probe.eps_levels.push_back(e.get<double>());
  }
  if (j.contains("tol_feas")) cfg.feasibility_tol = j["tol_feas"].get<double>();
  if (j.contains("tol_delta")) cfg.qual.delta_threshold = j["tol_delta"].get<double>();
  if (j.contains("lp_cells")) cfg.normality.lp_cells = j["lp_cells"].get<int>();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
}

void write_report(const std::string& dir, const std::string& name, const Json& j) {
  ensure_dir(dir);
  write_text_file(dir + "/" + name, j.dump(2) + "\n");
  std::cout << "wrote " << dir << "/" << name << "\n";
}

void write_gap_table_csv(const std::string& path, const GapReport& rep) {
  std::string out = "eps,objective,worst_residual,d_infinity,feasible\n";
  for (const auto& r : rep.rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", r.eps, r.objective,
                  r.feas.worst(), r.d_infinity, r.feasible ? 1 : 0);
    out += buf;
  }
  write_text_file(path, out);
}

int pipeline(const RunConfig& cfg) {
  ProblemSpec prob = resolve_problem(cfg.problem);
  ensure_dir(cfg.out_dir);

  std::cout << "solving " << prob.name << " on " << cfg.solve.cells << " cells...\n";
  SolveResult sr = solve(prob, cfg.solve);
  write_report(cfg.out_dir, "solve.json", solve_result_to_json(sr));
  write_process_csv(cfg.out_dir + "/process.csv", sr.process);
  write_process_svg(cfg.out_dir + "/process.svg", prob, sr.process);

  const ExtendedProcess& proc = sr.process;
  std::cout << "objective " << sr.objective << ", residual " << sr.feas.worst() << "\n";

  std::cout << "classifying (LP cells " << cfg.normality.lp_cells << " and "
            << 2 * cfg.normality.lp_cells << ")...\n";
  NormalityVerdict nv = classify(prob, proc, cfg.normality);
  write_report(cfg.out_dir, "normality.json", to_json(nv));
  std::cout << "normality: " << to_string(nv.verdict) << "\n";

  QualificationReport qr = check_all_qualifications(prob, proc, cfg.qual);
  write_report(cfg.out_dir, "qualifications.json", to_json(qr));

  CompositeVerdict cv = no_gap_verdict(prob, proc, qr, &nv);
  write_report(cfg.out_dir, "verdict.json", to_json(cv));
  std::cout << "verdict: " << to_string(cv.kind) << " via " << cv.route << "\n";

  ProbeOptions popt = cfg.probe;
  popt.solve = cfg.solve;
  popt.solve.multistarts = std::min(cfg.solve.multistarts, 4);
  GapReport gr = probe(prob, proc, popt);
  write_report(cfg.out_dir, "gap_report.json", to_json(gr));
  write_gap_table_csv(cfg.out_dir + "/gap_table.csv", gr);
  std::cout << "gap probe: "
            << (gr.verdict == GapVerdict::no_gap_observed ? "no-gap-observed" : "gap-suspected")
            << "\n";

  if (nv.verdict == NormalityKind::inconclusive) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gap and normality certification for impulsive optimal control"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.out_dir = default_out_dir();
  std::string config_path, process_path, mult_path, anchor_path, strict_path, out_file;
  double invert_threshold = 1e-6;
  double strict_eps = 0.0;

  auto add_common = [&](CLI::App* cmd, bool with_problem = true) {
    if (with_problem)
      cmd->add_option("--problem", cfg.problem,
                      "built-in name (example-4.1/-4.2/-4.3) or problem JSON path")
          ->required();
    cmd->add_option("--out", cfg.out_dir, "output directory (env GAPCERT_OUT)");
    cmd->add_option("--grid", cfg.solve.cells, "transcription cells");
    cmd->add_option("--seed", cfg.solve.seed, "random seed");
    cmd->add_option("--starts", cfg.solve.multistarts, "multi-start count");
    cmd->add_option("--lp-cells", cfg.normality.lp_cells, "normality LP cells");
    cmd->add_option("--delta", cfg.probe.delta, "trust radius for strict solves");
    cmd->add_option("--eps-list", cfg.probe.eps_levels, "gap-probe eps levels");
    cmd->add_option("--tol-feas", cfg.feasibility_tol, "feasibility tolerance");
    cmd->add_option("--tol-delta", cfg.qual.delta_threshold,
                    "qualification margin threshold");
    cmd->add_option("--config", config_path, "RunConfig JSON (unknown keys rejected)");
  };

  auto* c_solve = app.add_subcommand("solve", "solve the extended problem");
  add_common(c_solve);
  c_solve->add_option("--eps-restriction", strict_eps, "restrict omega0 >= eps");
  c_solve->add_option("--anchor", anchor_path, "anchor CSV for the strict restriction");

  auto* c_pmp = app.add_subcommand("check-pmp", "verify a multiplier set");
  add_common(c_pmp);
  c_pmp->add_option("--process", process_path, "process CSV")->required();
  c_pmp->add_option("--multipliers", mult_path, "multiplier JSON")->required();

  auto* c_cls = app.add_subcommand("classify", "normal/abnormal classification");
  add_common(c_cls);
  c_cls->add_option("--process", process_path, "process CSV")->required();

  auto* c_qual = app.add_subcommand("check-qualifications", "CNa/CQn/TQn conditions");
  add_common(c_qual);
  c_qual->add_option("--process", process_path, "process CSV")->required();

  auto* c_probe = app.add_subcommand("probe-gap", "empirical strict-restriction probe");
  add_common(c_probe);
  c_probe->add_option("--anchor", anchor_path, "anchor process CSV")->required();

  auto* c_run = app.add_subcommand("run-example", "full pipeline on a built-in example");
  std::string example_name;
  c_run->add_option("name", example_name, "example-4.1 | example-4.2 | example-4.3")->required();
  add_common(c_run, /*with_problem=*/false);

  auto* c_embed = app.add_subcommand("embed", "strict CSV -> extended CSV");
  add_common(c_embed);
  c_embed->add_option("--strict", strict_path, "strict process CSV")->required();
  c_embed->add_option("--out-file", out_file, "output CSV path")->required();

  auto* c_invert = app.add_subcommand("invert", "extended CSV -> strict CSV");
  add_common(c_invert);
  c_invert->add_option("--process", process_path, "extended process CSV")->required();
  c_invert->add_option("--out-file", out_file, "output CSV path")->required();
  c_invert->add_option("--threshold", invert_threshold, "omega0 positivity threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) apply_config_json(cfg, config_path);

    if (c_run->parsed()) {
      if (!is_fixture(example_name)) {
        std::cerr << "error: unknown example '" << example_name << "'\n";
        return 1;
      }
      cfg.problem = example_name;
      return pipeline(cfg);
    }
    if (c_solve->parsed()) {
      ProblemSpec prob = resolve_problem(cfg.problem);
      SolveResult r;
      if (strict_eps > 0) {
        if (anchor_path.empty())
          throw Error(ErrorKind::bad_input, "solve --eps-restriction needs --anchor");
        ExtendedProcess anchor = read_process_csv(anchor_path);
        r = solve_strict(prob, strict_eps, anchor, cfg.probe.delta, cfg.solve);
      } else {
        r = solve(prob, cfg.solve);
      }
      write_report(cfg.out_dir, "solve.json", solve_result_to_json(r));
      write_process_csv(cfg.out_dir + "/process.csv", r.process);
      write_process_svg(cfg.out_dir + "/process.svg", prob, r.process);
      std::cout << "objective " << r.objective << ", residual " << r.feas.worst() << "\n";
      return r.diag.converged ? 0 : 2;
    }
    if (c_pmp->parsed()) {
      ProblemSpec prob = resolve_problem(cfg.problem);
      ExtendedProcess proc = read_process_csv(process_path);
      MultiplierSet mult = multipliers_from_json(read_json_file(mult_path));
      PmpReport rep = check_pmp(prob, proc, mult);
      write_report(cfg.out_dir, "pmp_report.json", to_json(rep));
      std::cout << "pmp: " << (rep.pass(PmpTolerances{}) ? "pass" : "fail") << "\n";
      return rep.inconclusive ? 2 : 0;
    }
    if (c_cls->parsed()) {
      ProblemSpec prob = resolve_problem(cfg.problem);
      ExtendedProcess proc = read_process_csv(process_path);
      NormalityVerdict v = classify(prob, proc, cfg.normality);
      write_report(cfg.out_dir, "normality.json", to_json(v));
      std::cout << "normality: " << to_string(v.verdict) << "\n";
      return v.verdict == NormalityKind::inconclusive ? 2 : 0;
    }
    if (c_qual->parsed()) {
      ProblemSpec prob = resolve_problem(cfg.problem);
      ExtendedProcess proc = read_process_csv(process_path);
      QualificationReport rep = check_all_qualifications(prob, proc, cfg.qual);
      write_report(cfg.out_dir, "qualifications.json", to_json(rep));
      CompositeVerdict cv = no_gap_verdict(prob, proc, rep, nullptr);
      write_report(cfg.out_dir, "verdict.json", to_json(cv));
      std::cout << "verdict: " << to_string(cv.kind) << "\n";
      return cv.any_inconclusive ? 2 : 0;
    }
    if (c_probe->parsed()) {
      ProblemSpec prob = resolve_problem(cfg.problem);
      ExtendedProcess anchor = read_process_csv(anchor_path);
      ProbeOptions popt = cfg.probe;
      popt.solve = cfg.solve;
      GapReport rep = probe(prob, anchor, popt);
      write_report(cfg.out_dir, "gap_report.json", to_json(rep));
      write_gap_table_csv(cfg.out_dir + "/gap_table.csv", rep);
      std::cout << "gap probe: "
                << (rep.verdict == GapVerdict::no_gap_observed ? "no-gap-observed"
                                                               : "gap-suspected")
                << "\n";
      return 0;
    }
    if (c_embed->parsed()) {
      ProblemSpec prob = resolve_problem(cfg.problem);
      StrictProcess sp = read_strict_csv(strict_path);
      write_process_csv(out_file, embed(prob, sp));
      std::cout << "wrote " << out_file << "\n";
      return 0;
    }
    if (c_invert->parsed()) {
      ProblemSpec prob = resolve_problem(cfg.problem);
      ExtendedProcess proc = read_process_csv(process_path);
      write_strict_csv(out_file, invert(prob, proc, invert_threshold));
      std::cout << "wrote " << out_file << "\n";
      return 0;
    }
  } catch (const FastArcError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
