// Command-line front end: eigenvalue curves, gauge fields and holonomy,
// adiabatic dynamics surveys, exceptional-point charts, sigma-flow tables,
// and the acceptance suite. CSV outputs carry '#' metadata headers and are
// byte-reproducible for a fixed configuration.

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "holo/complex_analysis.hpp"
#include "holo/dynamics.hpp"
#include "holo/holonomy.hpp"
#include "holo/io.hpp"
#include "holo/validation.hpp"

using namespace holo;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = M_PI;

// exit codes: 0 success, 1 validation failure, 2 usage/IO error,
// 3 numerical-reliability failure
enum ExitCode { kOk = 0, kValidationFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

struct ModelOptions {
  std::string family = "two-level";
  double v = 0.0;  // 0 = family default
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c5 = 0.0;
  std::string envelope = "cos-half";
  int levels = 4;  // rank-one only

  ModelSpec build() const {
    const Envelope env = (envelope == "unit") ? Envelope::Unit : Envelope::CosHalf;
    if (family == "two-level")
      return ModelSpec::two_level(v != 0.0 ? v : 1.0 / std::sqrt(3.0), env);
    if (family == "three-level") return ModelSpec::three_level(v != 0.0 ? v : 1.0, env);
    if (family == "sigma") return ModelSpec::sigma_general(c1, c2, c3, c5, v != 0.0 ? v : 1.0);
    if (family == "rank-one")
      return ModelSpec::n_level_rank_one(levels, v != 0.0 ? v : 1.0, {}, env);
    throw CLI::ValidationError("--family must be two-level|three-level|sigma|rank-one");
  }
};

void add_model_options(CLI::App* cmd, ModelOptions& opt) {
  cmd->add_option("--family", opt.family, "two-level|three-level|sigma|rank-one");
  cmd->add_option("--v", opt.v, "coupling strength (default per family)");
  cmd->add_option("--c1", opt.c1, "sigma-family coefficient");
  cmd->add_option("--c2", opt.c2, "sigma-family coefficient");
  cmd->add_option("--c3", opt.c3, "sigma-family coefficient");
  cmd->add_option("--c5", opt.c5, "sigma-family Z perturbation");
  cmd->add_option("--envelope", opt.envelope, "cos-half|unit");
  cmd->add_option("--levels", opt.levels, "level count (rank-one family)");
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

void write_header(CsvWriter& w, const RunConfig& cfg) {
  w.comment("holonomy-lab output");
  std::istringstream is(cfg.to_kv());
  std::string line;
  while (std::getline(is, line)) w.comment(line);
}

void emit_plot_script(const RunConfig& cfg, const std::string& csv,
                      const std::string& title, int ycols) {
  const std::string path = out_path(cfg, cfg.command + "_plot.py");
  std::ofstream f(path);
  f << "#!/usr/bin/env python3\n"
    << "import csv\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "xs, ys = [], None\n"
    << "with open('" << csv << "') as f:\n"
    << "    for row in csv.reader(f):\n"
    << "        if not row or row[0].startswith('#'):\n"
    << "            continue\n"
    << "        try:\n"
    << "            vals = [float(c) for c in row]\n"
    << "        except ValueError:\n"
    << "            continue\n"
    << "        if ys is None:\n"
    << "            ys = [[] for _ in vals[1:]]\n"
    << "        xs.append(vals[0])\n"
    << "        for i, v in enumerate(vals[1:]):\n"
    << "            ys[i].append(v)\n"
    << "for i in range(min(" << ycols << ", len(ys))):\n"
    << "    plt.plot(xs, ys[i], label=f'col{i+1}')\n"
    << "plt.legend()\n"
    << "plt.title('" << title << "')\n"
    << "plt.show()\n";
}

std::string sigma_cycles(const std::vector<int>& sigma) {
  // cycle notation of the 1-based permutation
  std::string s;
  std::vector<bool> seen(sigma.size(), false);
  for (size_t i = 0; i < sigma.size(); ++i) {
    if (seen[i]) continue;
    size_t j = i;
    std::string cyc;
    while (!seen[j]) {
      seen[j] = true;
      cyc += (cyc.empty() ? "" : " ") + std::to_string(j + 1);
      j = static_cast<size_t>(sigma[j] - 1);
    }
    if (cyc.find(' ') != std::string::npos) s += "(" + cyc + ")";
  }
  return s.empty() ? "(identity)" : s;
}

int cmd_eigs(const RunConfig& cfg) {
  const ModelSpec spec = cfg.spec;
  CsvWriter w(out_path(cfg, "eigs.csv"));
  if (!w.ok()) {
    std::fprintf(stderr, "error: cannot write to %s\n", cfg.out_dir.c_str());
    return kUsageError;
  }
  write_header(w, cfg);

  std::vector<std::string> cols = {"theta"};
  for (int n = 1; n <= spec.levels; ++n) cols.push_back("E_" + std::to_string(n));
  for (int n = 1; n <= spec.levels; ++n)
    for (int i = 1; i <= spec.levels; ++i) {
      cols.push_back("psi" + std::to_string(n) + "_" + std::to_string(i) + "_re");
      cols.push_back("psi" + std::to_string(n) + "_" + std::to_string(i) + "_im");
    }
  w.columns(cols);

  if (cfg.theta_max <= cfg.theta_min || cfg.grid < 1) return kOk;  // header-only file

  if (spec.solvable()) {
    for (int k = 0; k <= cfg.grid; ++k) {
      const double th =
          cfg.theta_min + (cfg.theta_max - cfg.theta_min) * k / static_cast<double>(cfg.grid);
      std::vector<double> row = {th};
      for (int n = 1; n <= spec.levels; ++n) row.push_back(energy_branch(spec, n, th));
      for (int n = 1; n <= spec.levels; ++n) {
        const CVec v = eigvec_branch(spec, n, th);
        for (const Cplx& z : v) {
          row.push_back(z.real());
          row.push_back(z.imag());
        }
      }
      w.row(row);
    }
    return kOk;
  }
  const EigenPath path = track(spec, cfg.theta_min, cfg.theta_max,
                               std::max(16, cfg.grid), GridKind::Endpoint, cfg.eps);
  for (size_t k = 0; k < path.grid.size(); ++k) {
    std::vector<double> row = {path.grid[k]};
    for (int n = 0; n < spec.levels; ++n) row.push_back(path.values[n][k]);
    for (int n = 0; n < spec.levels; ++n)
      for (int i = 0; i < spec.levels; ++i) {
        row.push_back(path.frames[k](i, n).real());
        row.push_back(path.frames[k](i, n).imag());
      }
    w.row(row);
  }
  return kOk;
}

int cmd_holonomy(const RunConfig& cfg) {
  const ModelSpec spec = cfg.spec;
  const int samples = std::max(64, cfg.grid);

  // gauge-field CSV
  {
    CsvWriter w(out_path(cfg, "gauge.csv"));
    if (!w.ok()) return kUsageError;
    write_header(w, cfg);
    if (spec.solvable()) {
      if (spec.family == Family::TwoLevel) {
        w.columns({"theta", "f"});
        for (int k = 0; k < samples; ++k) {
          const double th = (k + 0.5) * spec.period() / samples;
          w.row({th, gauge_f(spec, th)});
        }
      } else {
        w.columns({"theta", "g", "g_plus_2pi", "g_minus_2pi"});
        for (int k = 0; k < samples; ++k) {
          const double th = (k + 0.5) * spec.period() / samples;
          w.row({th, gauge_g(spec, th), gauge_g(spec, th + 2.0 * kPi),
                 gauge_g(spec, th - 2.0 * kPi)});
        }
      }
    } else {
      const EigenPath path = track(spec, 0.0, spec.period(), samples, GridKind::Midpoint);
      const GaugeField field = gauge_potential(path, GaugeProvenance::FiniteDifference);
      std::vector<std::string> cols = {"theta"};
      for (int i = 0; i < spec.levels; ++i)
        for (int j = i; j < spec.levels; ++j) {
          cols.push_back("A" + std::to_string(i + 1) + std::to_string(j + 1) + "_re");
          cols.push_back("A" + std::to_string(i + 1) + std::to_string(j + 1) + "_im");
        }
      w.columns(cols);
      for (size_t k = 0; k < field.grid.size(); ++k) {
        std::vector<double> row = {field.grid[k]};
        for (int i = 0; i < spec.levels; ++i)
          for (int j = i; j < spec.levels; ++j) {
            row.push_back(field.a[k](i, j).real());
            row.push_back(field.a[k](i, j).imag());
          }
        w.row(row);
      }
    }
  }
  if (cfg.plot_script) emit_plot_script(cfg, "gauge.csv", "gauge field", 3);

  // holonomy matrix and three-way verdict
  const HolonomyMatrix hm = holonomy_of(spec, std::max(1024, samples));
  std::printf("holonomy matrix M (rows x columns):\n");
  for (int i = 0; i < spec.levels; ++i) {
    for (int j = 0; j < spec.levels; ++j) {
      const Cplx z = hm.m(i, j);
      std::printf("  (%+.6f%+.6fi)", z.real(), z.imag());
    }
    std::printf("\n");
  }
  std::printf("sigma = %s, residual = %.3e, reliable = %s\n",
              sigma_cycles(hm.sigma).c_str(), hm.residual, hm.reliable ? "yes" : "no");
  std::printf("entry phases:");
  for (const Cplx& p : hm.entry_phases) std::printf(" %+.4f%+.4fi", p.real(), p.imag());
  std::printf("\n");

  const CrossValidation cv = cross_validate(spec);
  std::printf("cross-validation: max discrepancy %.3e (grid drift %.3e) -> %s\n",
              cv.max_discrepancy, cv.grid_drift, cv.pass ? "pass" : "FAIL");

  if (!hm.reliable || hm.residual > 0.05) return kNumericalFailure;
  return kOk;
}

int cmd_dynamics(const RunConfig& cfg) {
  if (cfg.taus.empty()) {
    std::fprintf(stderr, "error: dynamics requires at least one --tau\n");
    return kUsageError;
  }
  const ModelSpec spec = cfg.spec;
  try {
    const auto rows = landau_zener_window(spec, cfg.eps, cfg.taus, std::max(1, cfg.jobs));
    CsvWriter w(out_path(cfg, "dynamics.csv"));
    if (!w.ok()) return kUsageError;
    write_header(w, cfg);
    std::vector<std::string> cols = {"tau", "delta", "dgap", "exchange_fidelity"};
    for (int n = 1; n <= spec.levels; ++n)
      cols.push_back("exch_state_" + std::to_string(n));
    w.columns(cols);
    for (const auto& r : rows) {
      std::vector<double> row = {r.tau, r.delta, r.dgap, r.exchange_fidelity};
      for (double x : r.exchange_per_state) row.push_back(x);
      w.row(row);
      std::printf("tau %-10g Delta %.3e D %.3e exchange %.4f\n", r.tau, r.delta, r.dgap,
                  r.exchange_fidelity);
    }
    if (cfg.plot_script) emit_plot_script(cfg, "dynamics.csv", "exchange fidelity", 3);

    // full fidelity matrices for the first tau
    Schedule sch;
    sch.tau = cfg.taus.front();
    const AdiabaticRun run = evolve(spec, cfg.eps, sch, default_steps_for(sch.tau));
    std::printf("fidelity matrix |<fresh_m|psi_n(tau=%g)>|:\n", sch.tau);
    for (int n = 0; n < spec.levels; ++n) {
      for (int m = 0; m < spec.levels; ++m) std::printf("  %.4f", run.fidelities[n][m]);
      std::printf("\n");
    }
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "integration failure: %s\n", e.what());
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_map(const RunConfig& cfg) {
  const ModelSpec spec = cfg.spec;
  const MercatorMap map = mercator_map(spec);

  CsvWriter w(out_path(cfg, "map.csv"));
  if (!w.ok()) return kUsageError;
  write_header(w, cfg);
  w.columns({"re_theta", "gd_im_theta", "kind", "pair_m", "pair_n"});
  for (const auto& p : map.points)
    w.row({p.re, p.gd_im, p.kind == EpKind::PoleOfA ? 1.0 : 0.0,
           static_cast<double>(p.pair.first), static_cast<double>(p.pair.second)});

  int cut_index = 0;
  for (const auto& curve : map.cuts) {
    for (const auto& line : curve.polylines) {
      CsvWriter pw(out_path(cfg, "cut_" + std::to_string(curve.pair.first) +
                                     std::to_string(curve.pair.second) + "_" +
                                     std::to_string(cut_index++) + ".csv"));
      write_header(pw, cfg);
      pw.columns({"re_theta", "gd_im_theta"});
      for (const Cplx& p : line) pw.row({p.real(), gudermannian(p.imag())});
    }
  }

  std::printf("exceptional points (Mercator chart):\n");
  for (const auto& p : map.points)
    std::printf("  re %.6f gd(im) %+.6f %s pair (%d,%d)\n", p.re, p.gd_im,
                p.kind == EpKind::PoleOfA ? "pole     " : "spectator", p.pair.first,
                p.pair.second);

  // residue report
  std::printf("pole residues:\n");
  for (const auto& ep : analytic_exceptional_points(spec)) {
    if (ep.kind != EpKind::PoleOfA || ep.at_infinity) continue;
    const double radius = spec.family == Family::TwoLevel ? 0.3 : 0.12;
    try {
      const Cplx res = pole_residue(spec, ep, radius);
      std::printf("  theta* = %.6f%+.6fi : residue %+.6f%+.6fi\n", ep.theta.real(),
                  ep.theta.imag(), res.real(), res.imag());
    } catch (const std::exception& e) {
      std::printf("  theta* = %.6f%+.6fi : %s\n", ep.theta.real(), ep.theta.imag(), e.what());
    }
  }
  if (cfg.plot_script) emit_plot_script(cfg, "map.csv", "Mercator chart", 2);
  return kOk;
}

int cmd_flows(const RunConfig& cfg) {
  const std::vector<std::array<double, 4>> grid = {
      {1.0, 0.0, 0.0, 0.05}, {0.0, 1.0, 0.0, 0.05}, {0.0, 0.0, 1.0, 0.05},
      {1.0, 1.0, 1.0, 0.05}, {0.7, 0.4, 1.3, 0.05},
      {cfg.spec.c1, cfg.spec.c2, cfg.spec.c3, cfg.spec.c5},
  };
  std::vector<SigmaFlowRow> rows(grid.size());
  const int jobs = std::max(1, cfg.jobs);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
      try {
        rows[i] = classify_sigma_flows({grid[i]}, cfg.spec.v != 0.0 ? cfg.spec.v : 1.0)[0];
      } catch (const std::exception&) {
        rows[i].resolved = false;
        rows[i].c = grid[i];
      }
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  CsvWriter w(out_path(cfg, "flows.csv"));
  if (!w.ok()) return kUsageError;
  write_header(w, cfg);
  w.columns({"c1", "c2", "c3", "c5", "sigma_1", "sigma_2", "sigma_3", "residual"});
  std::printf("%-24s %-12s %s\n", "c = (c1,c2,c3,c5)", "flow", "residual");
  for (const auto& r : rows) {
    std::vector<double> row = {r.c[0], r.c[1], r.c[2], r.c[3]};
    std::string flow = "unresolved";
    if (r.resolved) {
      flow = "{1,2,3} -> {";
      for (size_t i = 0; i < r.flow.sigma.size(); ++i)
        flow += (i ? "," : "") + std::to_string(r.flow.sigma[i]);
      flow += "}";
      for (int s : r.flow.sigma) row.push_back(s);
      row.push_back(r.flow.residual);
    } else {
      row.insert(row.end(), {0.0, 0.0, 0.0, 1.0});
    }
    w.row(row);
    std::printf("(%g,%g,%g,%g)  %-18s %.2e\n", r.c[0], r.c[1], r.c[2], r.c[3], flow.c_str(),
                r.resolved ? r.flow.residual : 1.0);
  }
  return kOk;
}

int cmd_validate(const RunConfig& cfg) {
  std::vector<std::string> only;
  if (!cfg.only.empty()) only.push_back(cfg.only);
  bool all = true;
  const auto results = run_acceptance(only, [&](const CriterionResult& r) {
    std::printf("[%s] criterion %2d: %s  (%s)  [%.1fs]\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    all = all && r.pass;
  });
  if (results.empty()) {
    std::fprintf(stderr, "error: no criteria matched --only %s\n", cfg.only.c_str());
    return kUsageError;
  }
  // machine-readable summary
  CsvWriter w(out_path(cfg, "validate.csv"));
  if (w.ok()) {
    write_header(w, cfg);
    w.columns({"id", "pass", "seconds"});
    for (const auto& r : results)
      w.row({static_cast<double>(r.id), r.pass ? 1.0 : 0.0, r.seconds});
  }
  std::printf("%s\n", all ? "ALL PASS" : "FAILURES PRESENT");
  return all ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomy-lab: solvable level-crossing models, gauge potentials, "
               "cycle holonomy, adiabatic dynamics, and exceptional-point charts"};
  app.require_subcommand(1);

  ModelOptions model;
  RunConfig cfg;

  auto add_common = [&](CLI::App* cmd) {
    add_model_options(cmd, model);
    cmd->add_option("--theta-min", cfg.theta_min, "lower end of the theta grid");
    cmd->add_option("--theta-max", cfg.theta_max, "upper end of the theta grid");
    cmd->add_option("--grid", cfg.grid, "grid / sample count");
    cmd->add_option("--tau", cfg.taus, "sweep duration(s)");
    cmd->add_option("--eps", cfg.eps, "symmetry-breaking coupling");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--jobs", cfg.jobs, "parallel workers for sweeps");
    cmd->add_option("--only", cfg.only, "criterion filter (validate)");
    cmd->add_flag("--plot-script", cfg.plot_script, "emit a python plot script");
  };

  CLI::App* eigs = app.add_subcommand("eigs", "eigenvalue and eigenvector curves");
  CLI::App* holonomy = app.add_subcommand("holonomy", "gauge field and cycle holonomy");
  CLI::App* dynamics = app.add_subcommand("dynamics", "adiabatic crossing survey");
  CLI::App* map = app.add_subcommand("map", "exceptional points on the Mercator chart");
  CLI::App* flows = app.add_subcommand("flows", "sigma-family eigenvalue-flow table");
  CLI::App* validate = app.add_subcommand("validate", "run the acceptance criteria");
  for (CLI::App* c : {eigs, holonomy, dynamics, map, flows, validate}) add_common(c);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.spec = model.build();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  }

  try {
    if (eigs->parsed()) {
      cfg.command = "eigs";
      return cmd_eigs(cfg);
    }
    if (holonomy->parsed()) {
      cfg.command = "holonomy";
      return cmd_holonomy(cfg);
    }
    if (dynamics->parsed()) {
      cfg.command = "dynamics";
      return cmd_dynamics(cfg);
    }
    if (map->parsed()) {
      cfg.command = "map";
      return cmd_map(cfg);
    }
    if (flows->parsed()) {
      cfg.command = "flows";
      return cmd_flows(cfg);
    }
    cfg.command = "validate";
    return cmd_validate(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalFailure;
  }
}
