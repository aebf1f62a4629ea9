#include "mwdg/timestep.hpp"

#include <cmath>

#include "mwdg/error.hpp"

namespace mwdg {

RKScheme parse_scheme(const std::string& s) {
  if (s == "ssp-rk2") return RKScheme::SspRk2;
  if (s == "ssp-rk3") return RKScheme::SspRk3;
  if (s == "rk4") return RKScheme::Rk4;
  throw Error(ErrorCode::Config, "unknown time scheme '" + s + "'");
}

std::string to_string(RKScheme s) {
  switch (s) {
    case RKScheme::SspRk2: return "ssp-rk2";
    case RKScheme::SspRk3: return "ssp-rk3";
    case RKScheme::Rk4: return "rk4";
  }
  return "?";
}

int scheme_order(RKScheme s) {
  switch (s) {
    case RKScheme::SspRk2: return 2;
    case RKScheme::SspRk3: return 3;
    case RKScheme::Rk4: return 4;
  }
  return 0;
}

RKScheme default_scheme(int k) { return k <= 1 ? RKScheme::SspRk2 : k == 2 ? RKScheme::SspRk3 : RKScheme::Rk4; }

double max_c2(const ProblemSpec& spec) {
  return spec.speed.kind == SpeedKind::Constant ? spec.speed.value : spec.speed.c2_max;
}

double compute_dt(const ProblemSpec& spec) {
  const double dt = spec.cfl * std::ldexp(1.0, -spec.N_max) / (std::sqrt(max_c2(spec)) * (2 * spec.k + 1));
  require(std::isfinite(dt) && dt > 0, ErrorCode::InvalidArgument, "time step must be positive");
  return dt;
}

int step_count(double T, double dt) {
  require(dt > 0, ErrorCode::InvalidArgument, "time step must be positive");
  if (T <= 0) return 0;
  const double n = T / dt;
  const double r = std::round(n);
  return static_cast<int>(std::abs(n - r) < 1e-9 * std::max(1.0, n) ? r : std::ceil(n));
}

namespace {

StateVector rhs(const StateVector& y, double t, const SpatialOperator& op, const AdaptiveGrid& grid) {
  StateVector f;
  f.u = y.w;
  f.w = op.apply(y.u, grid);
  const Coeffs s = op.source(grid, t);
  for (std::size_t i = 0; i < f.w.size(); ++i) f.w[i] += s[i];
  return f;
}

// a*x + b*(y + dt*f)
StateVector combine(double a, const StateVector& x, double b, const StateVector& y, double dt, const StateVector& f) {
  StateVector r;
  r.u.resize(y.u.size());
  r.w.resize(y.w.size());
  for (std::size_t i = 0; i < r.u.size(); ++i) {
    r.u[i] = a * x.u[i] + b * (y.u[i] + dt * f.u[i]);
    r.w[i] = a * x.w[i] + b * (y.w[i] + dt * f.w[i]);
  }
  return r;
}

}  // namespace

StateVector rk_step(const StateVector& state, RKScheme scheme, double t, double dt, const SpatialOperator& op,
                    const AdaptiveGrid& grid) {
  require(state.u.size() == grid.dof() && state.w.size() == grid.dof(), ErrorCode::InvalidArgument,
          "state does not match grid");
  StateVector out;
  switch (scheme) {
    case RKScheme::SspRk2: {
      const StateVector y1 = combine(0.0, state, 1.0, state, dt, rhs(state, t, op, grid));
      out = combine(0.5, state, 0.5, y1, dt, rhs(y1, t + dt, op, grid));
      break;
    }
    case RKScheme::SspRk3: {
      const StateVector y1 = combine(0.0, state, 1.0, state, dt, rhs(state, t, op, grid));
      const StateVector y2 = combine(0.75, state, 0.25, y1, dt, rhs(y1, t + dt, op, grid));
      out = combine(1.0 / 3.0, state, 2.0 / 3.0, y2, dt, rhs(y2, t + 0.5 * dt, op, grid));
      break;
    }
    case RKScheme::Rk4: {
      const StateVector k1 = rhs(state, t, op, grid);
      const StateVector y2 = combine(0.0, state, 1.0, state, 0.5 * dt, k1);
      const StateVector k2 = rhs(y2, t + 0.5 * dt, op, grid);
      const StateVector y3 = combine(0.0, state, 1.0, state, 0.5 * dt, k2);
      const StateVector k3 = rhs(y3, t + 0.5 * dt, op, grid);
      const StateVector y4 = combine(0.0, state, 1.0, state, dt, k3);
      const StateVector k4 = rhs(y4, t + dt, op, grid);
      out = state;
      for (std::size_t i = 0; i < out.u.size(); ++i) {
        out.u[i] += dt / 6.0 * (k1.u[i] + 2 * k2.u[i] + 2 * k3.u[i] + k4.u[i]);
        out.w[i] += dt / 6.0 * (k1.w[i] + 2 * k2.w[i] + 2 * k3.w[i] + k4.w[i]);
      }
      break;
    }
  }
  for (std::size_t i = 0; i < out.u.size(); ++i)
    require(std::isfinite(out.u[i]) && std::isfinite(out.w[i]), ErrorCode::Unstable,
            "non-finite coefficients after time step at t = " + std::to_string(t));
  return out;
}

}  // namespace mwdg
