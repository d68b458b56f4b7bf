// Command-line front end: solve built-in or user problems, evaluate
// Wronskian certificates, and sweep fractional orders comparing the
// fitted functional against the plain zeroth-order start.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "glshp/glshp.hpp"
#include "glshp/log.hpp"

namespace {

using glshp::BasisOrder;
using glshp::FracOrders;
using glshp::ProblemSpec;
using glshp::SolveConfig;
using glshp::Unknown;
using ordered_json = nlohmann::ordered_json;

struct CommonArgs {
  int example = 0;
  std::string problem_path;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> wx, wt;
  std::string out;
  std::uint64_t seed = 0x5EED;
};

struct LoadedProblem {
  ProblemSpec spec;
  SolveConfig config;
  std::string name;
};

LoadedProblem load_problem(const CommonArgs& args) {
  LoadedProblem lp;
  if (args.example != 0 && !args.problem_path.empty())
    throw glshp::DomainError("--example and --problem are mutually exclusive");
  if (args.example != 0) {
    double a = args.alpha.value_or(1.0);
    double b = args.beta.value_or(a);
    lp.spec = glshp::builtin_example(args.example, FracOrders(a, b));
    lp.config = glshp::config_for_builtin(args.example);
    lp.name = glshp::builtin_info(args.example).name;
  } else if (!args.problem_path.empty()) {
    lp.spec = glshp::parse_problem_file(args.problem_path);
    double a = args.alpha.value_or(lp.spec.orders.alpha);
    double b = args.beta.value_or(lp.spec.orders.beta);
    lp.spec.orders = FracOrders(a, b);
    lp.name = args.problem_path;
  } else {
    throw glshp::DomainError("one of --example or --problem is required");
  }
  if (args.wx) lp.config.wronskian_x = *args.wx;
  if (args.wt) lp.config.wronskian_t = *args.wt;
  lp.config.minimize.seed = args.seed;
  return lp;
}

std::optional<std::pair<int, int>> parse_grid(const std::string& s) {
  int nx = 0, nt = 0;
  if (std::sscanf(s.c_str(), "%dx%d", &nx, &nt) != 2) return std::nullopt;
  if (nx < 2 || nt < 2) return std::nullopt;
  return std::make_pair(nx, nt);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw glshp::DomainError("cannot open output file '" + path + "'");
  out << text;
}

std::string grid_csv(const glshp::SolveResult& result, const FracOrders& orders,
                     int nx, int nt) {
  std::string csv = "x,t,u";
  if (result.equations.size() > 1) csv += ",v";
  csv += "\n";
  for (int j = 0; j < nt; ++j) {
    double t = static_cast<double>(j) / (nt - 1);
    for (int i = 0; i < nx; ++i) {
      double x = static_cast<double>(i) / (nx - 1);
      csv += glshp::format_double(x) + "," + glshp::format_double(t);
      for (const auto& ef : result.equations)
        csv += "," + glshp::format_double(glshp::eval(ef.fitted, x, t, orders));
      csv += "\n";
    }
  }
  return csv;
}

ordered_json wronskian_json(const glshp::WronskianReport& rep,
                            std::optional<double> closed_form) {
  ordered_json w;
  w["value"] = closed_form ? *closed_form : rep.value;
  w["determinant"] = rep.value;
  if (closed_form) w["closed_form"] = *closed_form;
  w["x"] = rep.x;
  w["t"] = rep.t;
  w["order"] = rep.order;
  w["threshold"] = rep.threshold;
  w["independent"] = rep.independent;
  w["matrix"] = rep.matrix;
  return w;
}

ordered_json solve_report(const LoadedProblem& lp,
                          const glshp::SolveResult& result,
                          std::uint64_t seed, const std::string& grid_file) {
  const auto& orders = lp.spec.orders;
  ordered_json rep;
  rep["problem"] = lp.name;
  rep["alpha"] = orders.alpha;
  if (lp.spec.coupled()) rep["beta"] = orders.beta;
  rep["seed"] = seed;

  ordered_json eqs = ordered_json::array();
  std::size_t offset = 0;
  for (const auto& ef : result.equations) {
    const auto& a = ef.ansatz;
    ordered_json eq;
    eq["unknown"] = glshp::unknown_name(ef.unknown);
    ordered_json basis = ordered_json::array();
    for (const auto& f : a.basis.functions) basis.push_back(f.str());
    eq["basis"] = basis;
    ordered_json fixed;
    for (const auto& [idx, val] : a.fixed)
      fixed[glshp::param_label(ef.unknown, idx)] = val;
    eq["fixed"] = fixed;
    ordered_json fitted;
    ordered_json start;
    for (std::size_t j = 0; j < a.free.size(); ++j) {
      std::string label = glshp::param_label(ef.unknown, a.free[j]);
      fitted[label] = result.fit.params[offset + j];
      start[label] = ef.hpm_start[j];
    }
    offset += a.free.size();
    eq["coefficients"] = fitted;
    eq["hpm_start"] = start;
    auto closed = glshp::closed_form_checkpoint(
        a.basis, orders, ef.unknown, a.basis.certificate->x,
        a.basis.certificate->t);
    eq["wronskian"] = wronskian_json(*a.basis.certificate, closed);
    eqs.push_back(eq);
  }
  rep["equations"] = eqs;

  ordered_json fit;
  fit["jvalue"] = result.fit.jvalue;
  fit["j_hpm"] = result.j_hpm;
  fit["grad_norm"] = result.fit.grad_norm;
  fit["iterations"] = result.fit.iterations;
  fit["converged"] = result.fit.converged;
  fit["start"] = result.fit.start;
  rep["fit"] = fit;

  if (result.epsilon) {
    ordered_json eps;
    eps["pointwise"] = result.epsilon->pointwise;
    eps["weak"] = result.epsilon->weak;
    eps["pointwise_max"] = result.epsilon->pointwise_max;
    eps["weak_integral"] = result.epsilon->weak_integral;
    rep["epsilon"] = eps;
  }
  if (!grid_file.empty()) rep["grid_file"] = grid_file;
  return rep;
}

int cmd_solve(const CommonArgs& args, const std::string& grid_arg,
              const std::string& format_arg, std::optional<double> epsilon) {
  LoadedProblem lp = load_problem(args);
  if (epsilon) lp.config.epsilon = epsilon;

  std::optional<std::pair<int, int>> grid;
  if (!grid_arg.empty()) {
    grid = parse_grid(grid_arg);
    if (!grid) throw glshp::DomainError("--grid expects NxM with N,M >= 2");
  }
  std::string format = format_arg;
  if (format.empty()) format = grid ? "csv" : "json";
  if (format != "csv" && format != "json")
    throw glshp::DomainError("--format must be csv or json");
  if (format == "csv" && !grid) grid = std::make_pair(101, 101);

  glshp::SolveResult result = glshp::solve_problem(lp.spec, lp.config);

  if (format == "csv") {
    write_text(args.out, grid_csv(result, lp.spec.orders, grid->first,
                                  grid->second));
  } else {
    std::string grid_file;
    if (grid) {
      grid_file = args.out.empty() ? "grid.csv" : args.out + ".grid.csv";
      write_text(grid_file, grid_csv(result, lp.spec.orders, grid->first,
                                     grid->second));
    }
    ordered_json rep = solve_report(lp, result, args.seed, grid_file);
    write_text(args.out, rep.dump(2) + "\n");
  }
  if (!result.fit.converged) {
    glshp::log::error("minimization did not reach the gradient tolerance");
    return 2;
  }
  return 0;
}

int cmd_wronskian(const CommonArgs& args) {
  LoadedProblem lp = load_problem(args);
  const auto& orders = lp.spec.orders;
  double x = lp.config.wronskian_x;
  double t = lp.config.wronskian_t;

  ordered_json rep;
  rep["problem"] = lp.name;
  rep["alpha"] = orders.alpha;
  if (lp.spec.coupled()) rep["beta"] = orders.beta;
  rep["x"] = x;
  rep["t"] = t;
  ordered_json checkpoints = ordered_json::array();

  bool all_independent = true;
  for (int eq = 0; eq < lp.spec.equation_count(); ++eq) {
    Unknown w = eq == 0 ? Unknown::u : Unknown::v;
    glshp::InitialGuess guess = glshp::bootstrap(lp.spec, w);
    glshp::BasisSet basis =
        glshp::extract_basis(guess, orders, lp.config.basis_order);
    glshp::WronskianReport wr =
        glshp::wronskian_at(basis.functions, x, t, lp.spec.wronskian_order(w),
                            orders, lp.config.wronskian_threshold);
    auto closed = glshp::closed_form_checkpoint(basis, orders, w, x, t);
    ordered_json cp = wronskian_json(wr, closed);
    cp["unknown"] = glshp::unknown_name(w);
    ordered_json basis_labels = ordered_json::array();
    for (const auto& f : basis.functions) basis_labels.push_back(f.str());
    cp["basis"] = basis_labels;
    checkpoints.push_back(cp);
    all_independent = all_independent && wr.independent;
  }
  rep["checkpoints"] = checkpoints;
  write_text(args.out, rep.dump(2) + "\n");
  return all_independent ? 0 : 3;
}

int cmd_compare(const CommonArgs& args, const std::string& sweep_arg) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  if (std::sscanf(sweep_arg.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    throw glshp::DomainError("--sweep expects start:stop:step");
  if (!(lo > 0.0 && lo <= 1.0 && hi > 0.0 && hi <= 1.0 && hi >= lo))
    throw glshp::DomainError("sweep bounds must lie in (0,1] with stop >= start");
  if (lo < hi && !(step > 0.0))
    throw glshp::DomainError("sweep step must be positive");

  std::string csv = "alpha,J_hpm,J_glshp,ratio\n";
  bool breached = false;
  int steps = lo < hi ? static_cast<int>(std::floor((hi - lo) / step + 1e-9)) : 0;
  for (int i = 0; i <= steps; ++i) {
    double alpha = std::min(lo + i * step, hi);
    CommonArgs row_args = args;
    row_args.alpha = alpha;
    if (!args.beta) row_args.beta = alpha;
    LoadedProblem lp = load_problem(row_args);
    glshp::SolveResult result = glshp::solve_problem(lp.spec, lp.config);
    double jh = result.j_hpm;
    double jg = result.fit.jvalue;
    double ratio = jh > 0.0 ? jg / jh : 0.0;
    csv += glshp::format_double(alpha) + "," + glshp::format_double(jh) + "," +
           glshp::format_double(jg) + "," + glshp::format_double(ratio) + "\n";
    if (jg > jh + 1e-12) {
      glshp::log::error("dominance breached at alpha=" +
                        glshp::format_double(alpha));
      breached = true;
    }
  }
  write_text(args.out, csv);
  return breached ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Least-square homotopy solver for space-fractional nonlinear wave "
      "equations"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string grid_arg, format_arg, sweep_arg;
  std::optional<double> epsilon;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--example", args.example, "built-in problem id {1,2,3}")
        ->check(CLI::Range(1, 3));
    cmd->add_option("--problem", args.problem_path, "problem file path");
    cmd->add_option("--alpha", args.alpha, "fractional order alpha in (0,1]");
    cmd->add_option("--beta", args.beta, "fractional order beta in (0,1]");
    cmd->add_option("--x", args.wx, "Wronskian certificate point, x");
    cmd->add_option("--t", args.wt, "Wronskian certificate point, t");
    cmd->add_option("--out", args.out, "output path (default stdout)");
    cmd->add_option("--seed", args.seed, "random multi-start seed");
  };

  CLI::App* solve = app.add_subcommand("solve", "fit a problem and report");
  add_common(solve);
  solve->add_option("--grid", grid_arg, "emit an NxM solution lattice");
  solve->add_option("--format", format_arg, "output format {csv,json}");
  solve->add_option("--epsilon", epsilon, "epsilon-approximation threshold");

  CLI::App* wron = app.add_subcommand("wronskian", "independence certificate");
  add_common(wron);

  CLI::App* compare =
      app.add_subcommand("compare", "sweep alpha, compare J against the start");
  add_common(compare);
  compare->add_option("--sweep", sweep_arg, "alpha sweep start:stop:step")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(args, grid_arg, format_arg, epsilon);
    if (wron->parsed()) return cmd_wronskian(args);
    if (compare->parsed()) return cmd_compare(args, sweep_arg);
  } catch (const glshp::ParseError& e) {
    std::cerr << "glshp: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "glshp: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
