#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invheat/harness.hpp"

namespace {

using namespace invheat;

std::vector<Index> parse_ns(const std::string& text) {
  std::vector<Index> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    const long v = std::strtol(text.substr(pos, next - pos).c_str(), nullptr, 10);
    if (v < 4) throw CLI::ValidationError("--Ns", "every N must be >= 4");
    out.push_back(static_cast<Index>(v));
    pos = next + 1;
  }
  if (out.empty()) throw CLI::ValidationError("--Ns", "empty N list");
  return out;
}

void print_report(const ConvergenceReport& rep) {
  std::printf("# study=%s scheme=%s grid=%s projection=%s sigma=%g t_final=%g\n",
              rep.study.c_str(), to_string(rep.base.scheme), to_string(rep.base.grid),
              to_string(rep.base.projection), rep.base.sigma, rep.base.t_final);
  std::printf("%6s %12s %12s %8s %14s %10s\n", "N", "h", "dtau", "steps",
              "linf_error", "order");
  for (const auto& r : rep.rows) {
    if (r.ok) {
      std::printf("%6lld %12.5e %12.5e %8ld %14.6e %10.3f\n",
                  static_cast<long long>(r.N), r.h, r.dtau, r.steps, r.linf_error,
                  r.pairwise_order);
    } else {
      std::printf("%6lld %12.5e %12.5e %8ld   FAILED: %s\n",
                  static_cast<long long>(r.N), r.h, r.dtau, r.steps, r.error.c_str());
    }
  }
  if (rep.fit_rows > 0) {
    std::printf("fitted slope over finest %d rows: %.4f\n", rep.fit_rows,
                rep.fitted_slope);
  }
}

void print_report(const InvarianceReport& rep) {
  std::printf("# invariance suite: trials=%d seed=%llu\n", rep.trials,
              static_cast<unsigned long long>(rep.seed));
  for (const auto& c : rep.categories) {
    std::printf("%-34s max_violation=%-12.3e tol=%-9.0e (%s) %s\n", c.name.c_str(),
                c.max_violation, c.tolerance,
                c.require_exceed ? "must exceed" : "must stay below",
                c.pass ? "PASS" : "FAIL");
  }
  std::printf("suite: %s\n", rep.pass ? "PASS" : "FAIL");
}

bool any_failed(const ConvergenceReport& rep) {
  for (const auto& r : rep.rows) {
    if (!r.ok) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry-preserving finite-difference schemes for the 1D heat equation"};
  app.set_version_flag("--version", invheat::kVersion);
  app.require_subcommand(1);

  std::string scheme = "invariant_ftcs";
  std::string grid = "invariantized";
  std::string projection = "none";
  std::string ic_text = "const:2+sin:k=1,shift=1";
  std::string ns_text = "4,8,16,32,64,128,256";
  std::string format = "csv";
  std::string out_path;
  double sigma = 0.25;
  double t_final = 1.0;
  Index n_nodes = 64;
  int trials = 1000;
  std::uint64_t seed = 12345;

  const auto scheme_check = CLI::IsMember({"ftcs", "invariant_ftcs", "invariant_leapfrog"});
  const auto grid_check = CLI::IsMember({"stationary", "invariantized", "dorodnitsyn"});
  const auto projection_check =
      CLI::IsMember({"none", "linear", "quadratic", "invariant_linear",
                     "invariant_quadratic", "joint_invariant"});
  const auto format_check = CLI::IsMember({"csv", "json"});

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "report format")->check(format_check);
    cmd->add_option("--out", out_path, "write the report to this file");
  };
  auto add_physics = [&](CLI::App* cmd) {
    cmd->add_option("--sigma", sigma, "time step factor, dtau = sigma h^2")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--t-final", t_final, "integration end time")
        ->check(CLI::PositiveNumber);
  };
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--scheme", scheme, "time stepping scheme")->check(scheme_check);
    cmd->add_option("--grid", grid, "grid equation")->check(grid_check);
    cmd->add_option("--projection", projection, "projection back to the lattice")
        ->check(projection_check);
    cmd->add_option("--ic", ic_text, "initial condition, e.g. const:2+sin:k=1,shift=1");
  };

  auto* cmd_run = app.add_subcommand("run", "single integration run");
  cmd_run->add_option("--N", n_nodes, "number of grid nodes")->check(CLI::Range(3, 1 << 20));
  add_model(cmd_run);
  add_physics(cmd_run);
  add_output(cmd_run);

  auto* cmd_converge = app.add_subcommand("converge", "convergence study over a grid sequence");
  cmd_converge->add_option("--Ns", ns_text, "comma-separated grid sizes");
  add_model(cmd_converge);
  add_physics(cmd_converge);
  add_output(cmd_converge);

  auto* cmd_linearity =
      app.add_subcommand("linearity", "superposition check with the fully invariant scheme");
  cmd_linearity->add_option("--Ns", ns_text, "comma-separated grid sizes");
  add_physics(cmd_linearity);
  add_output(cmd_linearity);

  auto* cmd_invariance = app.add_subcommand("invariance", "randomized invariance verification");
  cmd_invariance->add_option("--trials", trials, "number of random trials")
      ->check(CLI::PositiveNumber);
  cmd_invariance->add_option("--seed", seed, "random seed");
  add_output(cmd_invariance);

  CLI11_PARSE(app, argc, argv);

  try {
    using invheat::OutputFormat;
    const OutputFormat fmt = invheat::parse_format(format);

    if (*cmd_run) {
      invheat::RunConfig cfg;
      cfg.N = n_nodes;
      cfg.scheme = invheat::parse_scheme(scheme);
      cfg.grid = invheat::parse_grid(grid);
      cfg.projection = invheat::parse_projection(projection);
      cfg.sigma = sigma;
      cfg.t_final = t_final;
      cfg.ic = invheat::parse_ic(ic_text);
      const invheat::RunResult res = invheat::run(cfg);
      invheat::ConvergenceReport rep;
      rep.study = "run";
      rep.base = cfg;
      invheat::ConvergenceRow row;
      row.N = cfg.N;
      row.h = invheat::kDomainLength / static_cast<double>(cfg.N);
      row.dtau = res.dtau;
      row.steps = res.steps_planned;
      row.ok = res.ok();
      if (res.ok()) {
        row.linf_error = invheat::linf_error(res, cfg.ic);
      } else {
        row.error = std::string(invheat::to_string(res.status)) + ": " + res.message;
      }
      rep.rows.push_back(row);
      print_report(rep);
      std::printf("steps=%ld wall=%.3fs status=%s\n", res.steps_taken,
                  res.wall_seconds, invheat::to_string(res.status));
      if (!out_path.empty()) invheat::emit(rep, fmt, out_path);
      return res.ok() ? 0 : 1;
    }

    if (*cmd_converge) {
      invheat::RunConfig base;
      base.scheme = invheat::parse_scheme(scheme);
      base.grid = invheat::parse_grid(grid);
      base.projection = invheat::parse_projection(projection);
      base.sigma = sigma;
      base.t_final = t_final;
      base.ic = invheat::parse_ic(ic_text);
      const auto rep = invheat::convergence_study(base, parse_ns(ns_text));
      print_report(rep);
      if (!out_path.empty()) invheat::emit(rep, fmt, out_path);
      return any_failed(rep) ? 1 : 0;
    }

    if (*cmd_linearity) {
      invheat::RunConfig base;
      base.sigma = sigma;
      base.t_final = t_final;
      const auto rep = invheat::linearity_test(parse_ns(ns_text), base);
      print_report(rep);
      if (!out_path.empty()) invheat::emit(rep, fmt, out_path);
      return any_failed(rep) ? 1 : 0;
    }

    // invariance
    const auto rep = invheat::invariance_suite(trials, seed);
    print_report(rep);
    if (!out_path.empty()) invheat::emit(rep, fmt, out_path);
    return rep.pass ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
