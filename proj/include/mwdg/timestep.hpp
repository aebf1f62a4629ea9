#pragma once

#include <string>

#include "mwdg/ipdg.hpp"

namespace mwdg {

enum class RKScheme { SspRk2, SspRk3, Rk4 };

RKScheme parse_scheme(const std::string& s);
std::string to_string(RKScheme s);
int scheme_order(RKScheme s);
// ssp-rk2 for k = 1, ssp-rk3 for k = 2, rk4 otherwise.
RKScheme default_scheme(int k);

struct StateVector {
  Coeffs u, w;
};

// CFL * 2^-N_max / (sqrt(C^*) (2k + 1)).
double compute_dt(const ProblemSpec& spec);
double max_c2(const ProblemSpec& spec);
// Number of steps to reach T with steps no larger than dt.
int step_count(double T, double dt);

StateVector rk_step(const StateVector& state, RKScheme scheme, double t, double dt, const SpatialOperator& op,
                    const AdaptiveGrid& grid);

}  // namespace mwdg
