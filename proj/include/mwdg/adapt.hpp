#pragma once

#include "mwdg/timestep.hpp"

namespace mwdg {

struct AdaptParams {
  double epsilon = 1e-3;
  double eta = -1;  // negative: epsilon / 10
  int N_max = 8;

  double coarsen_threshold() const { return eta < 0 ? epsilon / 10 : eta; }
  void validate() const;
};

// sqrt(|u block|^2 + |w block|^2) of the element at position pos.
double element_indicator(const StateVector& state, const AdaptiveGrid& grid, std::size_t pos);

// Returns the number of elements added.
std::size_t refine(AdaptiveGrid& grid, StateVector& state, const AdaptParams& params);
// Returns the number of elements removed.
std::size_t coarsen(AdaptiveGrid& grid, StateVector& state, const AdaptParams& params);

// Extends coefficients to a grid whose keys are a superset; missing blocks are zero.
Coeffs remap(const Coeffs& c, const AdaptiveGrid& from, const AdaptiveGrid& to);

}  // namespace mwdg
