#pragma once

// Problem files, curve exports (JSON, CSV, SVG) and the seeded generator.

#include <cstdint>
#include <optional>
#include <string>

#include "dp/core_model.hpp"
#include "dp/curve.hpp"
#include "dp/programs.hpp"

namespace dp {

// On-disk problem. Missing distortion / metric default to Hamming.
struct ProblemFile {
  std::string name;
  std::optional<std::uint64_t> seed;
  MatrixXd p_xy;
  std::optional<MatrixXd> distortion;
  std::optional<MatrixXd> metric;
};

// Throws InputError naming the field (and row) at fault.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

// Deterministic text; parse(serialize(f)) reproduces f bit for bit.
std::string serialize(const ProblemFile& file);

Problem to_problem(const ProblemFile& file, Tolerances tol = {});

// Joint pmf from mt19937_64 uniforms, normalized. Hamming distortion unless
// random_distortion, in which case entries are uniform on [0, 1).
ProblemFile generate_problem(std::uint64_t seed, Index nx, Index ny,
                             bool random_distortion = false);

// %.17g, round-trips every finite double.
std::string format_double(double v);

std::string curve_json(const CurveReport& report, const Tolerances& tol);
std::string solve_json(const SolveReport& report, const Tolerances& tol);

// Header P,D,slope then `samples` evenly spaced rows on [0, 1].
std::string curve_csv(const PiecewiseLinearDP& curve, Index samples = 201);

std::string curve_svg(const PiecewiseLinearDP& curve, const std::string& title);
// Projected dual vertices with hull and active points highlighted.
std::string s2_svg(const CurveReport& report, const std::string& title);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

VectorXd parse_vector(const std::string& text);

}  // namespace dp
