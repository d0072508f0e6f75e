#pragma once

#include <string>

#include "sbvp/model.hpp"

namespace sbvp {

// Problem files are INI-style text:
//
//   # comment
//   [problem]
//   mu = 1.9
//   R = 1.0
//   f = lambda/(1-abs(t)^0.9)^0.9 * (1/x^0.9 - x + R)
//   q = lambda/(1-abs(t)^0.9)^0.9
//   u = 1/x^0.9
//   v = x + R
//   gamma_r = lambda/r^0.9
//   [params]
//   lambda = 1e-16
//
// R is implicitly bound as a parameter for the expressions. Schema errors
// name the offending field.
ProblemSpec parse_problem_text(const std::string& text);
ProblemSpec load_problem_file(const std::string& path);

// Serialization; parse_problem_text(serialize_problem(p)) is equivalent to p.
std::string serialize_problem(const ProblemSpec& p);

// The paper's worked Example with the given lambda (mu=1.9, R=1).
ProblemSpec example_problem(double lambda, double R = 1.0);
std::string example_problem_text(double lambda, double R = 1.0);

}  // namespace sbvp
