#pragma once

#include <string>
#include <vector>

#include "mwdg/ipdg.hpp"

namespace mwdg {

struct ProblemParams {
  std::string name = "example-4.1a";
  int d = 2;
  int k = 1;
  int M = -1;  // k+1
  InterpVariant variant = InterpVariant::Interface;
  int N_max = 8;
  double sigma = -1;  // 10 for d <= 2, 30 for d = 3
  double cfl = -1;    // 0.1 for d <= 2, 0.05 for d = 3
  double T = -1;      // problem default
  // custom problem only
  double a = 1.0;
  double c2 = 1.0;
  std::string bc = "periodic";
};

std::vector<std::string> problem_names();
// Canonical name ("4.2" and "example-4.2" are both accepted).
std::string canonical_problem(const std::string& name);
ProblemSpec make_problem(const ProblemParams& params);

// A 1D factor with its first two derivatives.
struct Factor1D {
  Fn1D f, df, d2f;
};

// f = u_tt - div(c^2 grad u) for u = T(t) prod_m U_m(x_m) and c^2 = sum_a alpha_a prod_m C_{a,m}(x_m).
SeparableSum separable_wave_source(const std::function<double(double)>& T, const std::function<double(double)>& Tdd,
                                   const std::vector<Factor1D>& U, const std::vector<double>& alpha,
                                   const std::vector<std::vector<Factor1D>>& C);

}  // namespace mwdg
