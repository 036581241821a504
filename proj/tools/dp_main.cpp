// dp: command line front end for the distortion-perception library.
//
// Exit codes: 0 ok, 1 bad input, 2 solver failure, 3 budget exceeded,
// 4 verification failed.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "dp/binary.hpp"
#include "dp/errors.hpp"
#include "dp/io.hpp"
#include "dp/verify.hpp"

namespace {

using namespace dp;

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void echo_tolerances(const Tolerances& tol) {
  std::cout << "tolerances: validation=" << short_num(tol.validation)
            << " stochastic=" << short_num(tol.stochastic)
            << " equality=" << short_num(tol.equality) << "\n";
}

Form parse_form(const std::string& s) {
  if (s == "ot") return Form::ot;
  if (s == "tv") return Form::tv;
  throw InputError("unknown form '" + s + "' (expected ot or tv)");
}

void print_curve(const CurveReport& rep) {
  const PiecewiseLinearDP& c = rep.curve;
  std::cout << "method: " << to_string(rep.method) << "\n";
  std::cout << "D(0) = " << short_num(c(0.0)) << "\n";
  std::cout << "D* = " << short_num(c.d_star()) << "\n";
  std::cout << "P* = " << short_num(c.p_star()) << "\n";
  std::cout << "breakpoints:";
  for (double b : c.breakpoints()) std::cout << ' ' << short_num(b);
  std::cout << "\nslopes:";
  for (const auto& s : c.segments()) std::cout << ' ' << short_num(s.slope);
  std::cout << "\n";
  if (rep.method == CurveMethod::vertex) {
    std::cout << "dual vertices: " << rep.vertices.size()
              << ", hull extremes: " << rep.hull.size() << "\n";
  }
  if (rep.solves > 0) std::cout << "lp solves: " << rep.solves << "\n";
}

void export_curve(const CurveReport& rep, const Tolerances& tol,
                  const std::string& json_path, const std::string& csv_path,
                  const std::string& svg_path, const std::string& s2_path,
                  const std::string& title) {
  if (!json_path.empty()) write_text(json_path, curve_json(rep, tol));
  if (!csv_path.empty()) write_text(csv_path, curve_csv(rep.curve));
  if (!svg_path.empty()) write_text(svg_path, curve_svg(rep.curve, title));
  if (!s2_path.empty()) {
    if (rep.s2.empty()) throw InputError("--out-s2-svg needs projected vertices");
    write_text(s2_path, s2_svg(rep, title + " (S2)"));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distortion-perception tradeoff for finite alphabets"};
  app.require_subcommand(1);

  std::string input, form_name = "ot", method = "vertex";
  std::string out_json, out_csv, out_svg, out_s2;
  std::string p_text, q_text;
  double p_level = 0.0;
  double tol_override = -1.0;
  std::uint64_t seed = 0;
  Index nx = 2, ny = 2, grid_points = 21, sweep_grid = 0;
  bool random_distortion = false, inject_fault = false;

  auto* solve = app.add_subcommand("solve", "D(P) at one perception level");
  solve->add_option("--input", input, "problem JSON")->required();
  solve->add_option("--P", p_level, "perception level")->required();
  solve->add_option("--form", form_name, "ot or tv");
  solve->add_option("--tol", tol_override, "equality tolerance");
  solve->add_option("--out-json", out_json, "write value, estimator and dual");

  auto* curve = app.add_subcommand("curve", "whole D(P) curve");
  curve->add_option("--input", input, "problem JSON")->required();
  curve->add_option("--method", method, "vertex, sweep or closed-form");
  curve->add_option("--form", form_name, "LP form used by sweep and estimators");
  curve->add_option("--grid", sweep_grid, "initial sweep grid points");
  curve->add_option("--tol", tol_override, "equality tolerance");
  curve->add_option("--out-json", out_json);
  curve->add_option("--out-csv", out_csv);
  curve->add_option("--out-svg", out_svg);
  curve->add_option("--out-s2-svg", out_s2, "scatter of projected dual vertices");

  auto* binary = app.add_subcommand("binary", "closed form for |X| = 2");
  binary->add_option("--input", input, "problem JSON")->required();
  binary->add_option("--tol", tol_override, "equality tolerance");
  binary->add_option("--out-json", out_json);
  binary->add_option("--out-csv", out_csv);
  binary->add_option("--out-svg", out_svg);

  auto* gen = app.add_subcommand("gen", "seeded random problem");
  gen->add_option("--seed", seed)->required();
  gen->add_option("--nx", nx);
  gen->add_option("--ny", ny);
  gen->add_flag("--random-distortion", random_distortion);
  gen->add_option("--out-json", out_json, "output path (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "cross-check every method");
  verify->add_option("--input", input, "problem JSON")->required();
  verify->add_option("--grid", grid_points, "perception levels on [0, 1]");
  verify->add_option("--tol", tol_override, "agreement tolerance");
  verify->add_flag("--inject-fault", inject_fault,
                   "perturb the sweep curve slope by 1e-3");

  auto* w1 = app.add_subcommand("w1", "Wasserstein-1 distance");
  w1->add_option("--p", p_text, "comma separated pmf")->required();
  w1->add_option("--q", q_text, "comma separated pmf")->required();
  w1->add_option("--input", input, "problem JSON supplying the metric");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    Tolerances tol;
    if (tol_override > 0.0 && !verify->parsed()) tol.equality = tol_override;

    if (solve->parsed()) {
      const Problem problem = to_problem(load_problem(input), tol);
      const Form form = parse_form(form_name);
      const SolveReport rep = solve_dp_at(problem, p_level, form);
      std::cout << "D(P) = " << short_num(rep.value) << "\n";
      std::cout << "P = " << short_num(p_level) << ", form = " << to_string(form)
                << "\n";
      std::cout << "duality gap = " << short_num(rep.gap) << "\n";
      echo_tolerances(tol);
      if (rep.gap > tol.equality) {
        throw SolverError("duality gap " + short_num(rep.gap) +
                          " exceeds tolerance");
      }
      if (!out_json.empty()) write_text(out_json, solve_json(rep, tol));
    } else if (curve->parsed()) {
      const ProblemFile file = load_problem(input);
      const Problem problem = to_problem(file, tol);
      CurveOptions opts;
      opts.form = parse_form(form_name);
      if (sweep_grid >= 2) opts.grid = uniform_levels(sweep_grid);
      CurveReport rep;
      if (method == "vertex") {
        const HPolyhedron poly = dual_polyhedron(problem);
        if (!vertex_budget_admits(poly, opts.vertex)) {
          throw BudgetExceeded(
              "vertex enumeration over budget for this instance; rerun with "
              "--method sweep");
        }
        rep = curve_by_vertices(problem, opts);
      } else if (method == "sweep") {
        rep = curve_by_sweep(problem, opts);
      } else if (method == "closed-form") {
        if (problem.nx() != 2) throw InputError("closed-form needs |X| = 2");
        rep = closed_form_report(problem);
      } else {
        throw InputError("unknown method '" + method + "'");
      }
      print_curve(rep);
      echo_tolerances(tol);
      export_curve(rep, tol, out_json, out_csv, out_svg, out_s2,
                   file.name.empty() ? "D(P)" : file.name);
    } else if (binary->parsed()) {
      const ProblemFile file = load_problem(input);
      const Problem problem = to_problem(file, tol);
      if (problem.nx() != 2) throw InputError("binary needs |X| = 2");
      const BinaryAnalysis a = analyze(problem);
      std::cout << "case: " << to_string(a.allocation) << "\n";
      std::cout << "u:";
      for (Index y = 0; y < a.u.size(); ++y) std::cout << ' ' << short_num(a.u(y));
      std::cout << "\nP*_i:";
      for (double b : a.breakpoints) std::cout << ' ' << short_num(b);
      std::cout << "\nu_i:";
      for (double u : a.breakpoint_u) std::cout << ' ' << short_num(u);
      std::cout << "\n";
      const CurveReport rep = closed_form_report(problem);
      print_curve(rep);
      echo_tolerances(tol);
      export_curve(rep, tol, out_json, out_csv, out_svg, "",
                   file.name.empty() ? "D(P)" : file.name);
    } else if (gen->parsed()) {
      const std::string text =
          serialize(generate_problem(seed, nx, ny, random_distortion));
      if (out_json.empty()) {
        std::cout << text;
      } else {
        write_text(out_json, text);
      }
    } else if (verify->parsed()) {
      const ProblemFile file = load_problem(input);
      const Problem problem = to_problem(file, tol);
      VerifyOptions opts;
      if (tol_override > 0.0) opts.tolerance = tol_override;
      if (inject_fault) opts.slope_fault = 1e-3;
      opts.name = file.name;
      const auto levels = uniform_levels(grid_points);
      const VerifyReport rep = cross_verify(problem, levels, opts);
      std::cout << render(rep);
      echo_tolerances(tol);
      return rep.pass ? 0 : 4;
    } else if (w1->parsed()) {
      const VectorXd p = parse_vector(p_text);
      const VectorXd q = parse_vector(q_text);
      if (p.size() != q.size()) throw InputError("--p and --q differ in length");
      MatrixXd h = hamming(p.size());
      if (!input.empty()) {
        const ProblemFile file = load_problem(input);
        if (!file.metric) throw InputError("problem file has no metric");
        h = *file.metric;
      }
      if (!is_distribution(p, tol.validation) || !is_distribution(q, tol.validation)) {
        throw InputError("--p and --q must be probability vectors");
      }
      check_metric(h, tol.validation);
      const Transport t = wasserstein1(p, q, h);
      std::cout << "W1 = " << short_num(t.value) << "\n";
      if (p.size() == h.rows() && h.isApprox(hamming(p.size()))) {
        std::cout << "TV = " << short_num(tv_distance(p, q)) << "\n";
      }
      echo_tolerances(tol);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
