#include "mwdg/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mwdg/error.hpp"

namespace mwdg {

GridMode parse_mode(const std::string& s) {
  if (s == "sparse") return GridMode::Sparse;
  if (s == "full") return GridMode::Full;
  if (s == "adaptive") return GridMode::Adaptive;
  throw Error(ErrorCode::Config, "unknown mode '" + s + "' (sparse, full or adaptive)");
}

std::string to_string(GridMode m) {
  switch (m) {
    case GridMode::Sparse: return "sparse";
    case GridMode::Full: return "full";
    case GridMode::Adaptive: return "adaptive";
  }
  return "?";
}

RunOptions RunOptions::from_config(const Config& c) {
  RunOptions o;
  ProblemParams& p = o.problem;
  p.name = canonical_problem(c.get_string("problem", p.name));
  p.d = c.get_int("d", p.d);
  p.k = c.get_int("k", p.k);
  p.M = c.get_int("M", p.M);
  p.variant = parse_variant(c.get_string("variant", to_string(p.variant)));
  p.sigma = c.get_double("sigma", p.sigma);
  p.cfl = c.get_double("cfl", p.cfl);
  p.T = c.get_double("T", p.T);
  p.a = c.get_double("a", p.a);
  p.c2 = c.get_double("c2", p.c2);
  p.bc = c.get_string("bc", p.bc);
  o.mode = parse_mode(c.get_string("mode", to_string(o.mode)));
  o.N = c.get_int("N", o.mode == GridMode::Adaptive ? 8 : o.N);
  p.N_max = o.N;
  o.epsilon = c.get_double("epsilon", o.epsilon);
  o.eta = c.get_double("eta", o.eta);
  if (c.has("scheme")) o.scheme = parse_scheme(c.get_string("scheme", ""));
  const std::string init = c.get_string("init", "project");
  require(init == "project" || init == "interpolate", ErrorCode::Config, "init must be project or interpolate");
  o.interpolate_init = init == "interpolate";
  o.init_level = c.get_int("init_level", o.init_level);
  o.snapshot_times = c.get_list("snapshot_times");
  o.slice_points = c.get_int("slice_points", o.slice_points);
  o.slice_x3 = c.get_double("slice_x3", o.slice_x3);
  o.cut_at = c.get_list("cut_at");
  o.linf_points = c.get_int("linf_points", o.linf_points);
  o.memory_cap = static_cast<std::size_t>(c.get_double("memory_cap", static_cast<double>(o.memory_cap)));
  o.sweep_param = c.get_string("sweep_param", "");
  o.sweep_values = c.get_list("sweep_values");
  require(o.N >= 0 && o.N <= 15, ErrorCode::Config, "N must be in 0..15");
  require(o.slice_points > 0, ErrorCode::Config, "slice_points must be positive");
  require(o.init_level >= 0, ErrorCode::Config, "init_level must be non-negative");
  for (double t : o.snapshot_times) require(t >= 0, ErrorCode::Config, "snapshot times must be non-negative");
  return o;
}

std::string RunOptions::echo() const {
  ProblemParams p = problem;
  p.N_max = N;
  const ProblemSpec s = make_problem(p);
  std::ostringstream os;
  auto line = [&](const std::string& k, const std::string& v) { os << "# " << k << " = " << v << '\n'; };
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_g6(v[i]);
    return s;
  };
  line("problem", s.name);
  line("d", std::to_string(s.d));
  line("k", std::to_string(s.k));
  line("M", std::to_string(s.M));
  line("variant", to_string(s.variant));
  line("mode", to_string(mode));
  line("N", std::to_string(N));
  if (mode == GridMode::Adaptive) {
    line("epsilon", format_g6(epsilon));
    line("eta", format_g6(eta < 0 ? epsilon / 10 : eta));
    line("init_level", std::to_string(init_level));
  }
  line("sigma", format_g6(s.sigma));
  line("cfl", format_g6(s.cfl));
  line("T", format_g6(s.T));
  line("scheme", to_string(resolved_scheme()));
  line("init", interpolate_init ? "interpolate" : "project");
  if (s.name == "custom") {
    line("a", format_g6(p.a));
    line("c2", format_g6(p.c2));
    line("bc", p.bc);
  }
  if (!snapshot_times.empty()) line("snapshot_times", list(snapshot_times));
  line("slice_points", std::to_string(slice_points));
  if (s.d == 3) line("slice_x3", format_g6(slice_x3));
  if (!cut_at.empty()) line("cut_at", list(cut_at));
  if (mode == GridMode::Full) line("memory_cap", std::to_string(memory_cap));
  if (!sweep_param.empty()) {
    line("sweep_param", sweep_param);
    line("sweep_values", list(sweep_values));
  }
  return os.str();
}

Solver::Solver(const RunOptions& opts) : opts_(opts) {
  ProblemParams p = opts_.problem;
  p.N_max = opts_.N;
  ProblemSpec spec = make_problem(p);
  lib_ = std::make_shared<const OperatorLibrary>(spec.k, spec.M, spec.variant, spec.N_max);
  op_ = std::make_unique<SpatialOperator>(std::move(spec), lib_);
  dt_ = compute_dt(op_->spec());
  adapt_.epsilon = opts_.epsilon;
  adapt_.eta = opts_.eta;
  adapt_.N_max = opts_.N;
  initialize();
}

Coeffs Solver::initial_field(const SeparableSum& f) const {
  if (f.empty()) return Coeffs(grid_->dof(), 0.0);
  if (!opts_.interpolate_init) return project_separable(f, 0.0, *grid_, lib_->alpert());
  const int d = grid_->d();
  const PointFn g = [&](const double* x, const int*) { return evaluate(f, d, x, 0.0); };
  return surplus_to_alpert(hierarchical_interpolate(g, *grid_, *lib_), *grid_, *lib_);
}

void Solver::initialize() {
  const ProblemSpec& s = op_->spec();
  switch (opts_.mode) {
    case GridMode::Sparse: grid_ = std::make_unique<AdaptiveGrid>(build_sparse_grid(s.d, s.k, opts_.N, s.M)); break;
    case GridMode::Full:
      grid_ = std::make_unique<AdaptiveGrid>(build_full_grid(s.d, s.k, opts_.N, s.M, opts_.memory_cap));
      break;
    case GridMode::Adaptive: {
      adapt_.validate();
      grid_ = std::make_unique<AdaptiveGrid>(s.d, s.k, s.M, opts_.N);
      const AdaptiveGrid seed = build_sparse_grid(s.d, s.k, std::min(opts_.init_level, opts_.N), s.M);
      for (PackedKey key : seed.keys()) grid_->insert_closed(key);
      for (int it = 0; it < 4 * kMaxDim * 16; ++it) {
        state_.u = initial_field(s.u0);
        state_.w = initial_field(s.v0);
        if (refine(*grid_, state_, adapt_) == 0) break;
      }
      state_.u = initial_field(s.u0);
      state_.w = initial_field(s.v0);
      coarsen(*grid_, state_, adapt_);
      return;
    }
  }
  state_.u = initial_field(s.u0);
  state_.w = initial_field(s.v0);
}

void Solver::step(double limit) {
  const double h = std::min(dt_, limit - t_);
  if (h <= 0) return;
  if (opts_.mode == GridMode::Adaptive) refine(*grid_, state_, adapt_);
  state_ = rk_step(state_, opts_.resolved_scheme(), t_, h, *op_, *grid_);
  if (opts_.mode == GridMode::Adaptive) coarsen(*grid_, state_, adapt_);
  ++steps_;
  t_ = limit - t_ <= dt_ ? limit : t_ + h;
}

void Solver::advance_to(double t_target) {
  if (t_target <= t_) return;
  const int n = step_count(t_target - t_, dt_);
  const double t0 = t_;
  for (int i = 0; i < n; ++i) step(i + 1 == n ? t_target : std::min(t_target, t0 + (i + 1) * dt_));
  t_ = t_target;
}

bool Solver::has_l2() const { return !spec().exact.empty() || (spec().exact_point && spec().exact_norm2); }

double Solver::l2_error() const { return mwdg::l2_error(state_.u, spec(), *grid_, *lib_, t_); }

bool Solver::has_point_exact() const { return static_cast<bool>(spec().exact_point); }

double Solver::linf_error(int n) const { return sampled_linf_error(state_.u, spec(), *grid_, *lib_, t_, n); }

double Solver::energy() const { return discrete_energy(state_, *op_, *grid_); }

double Solver::solution_norm() const {
  double s = 0;
  for (double c : state_.u) s += c * c;
  return std::sqrt(s);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path);
  require(f.good(), ErrorCode::Io, "cannot write '" + path.string() + "'");
  f << content;
}

void write_snapshot(const Solver& s, const std::filesystem::path& dir, const std::string& echo) {
  const RunOptions& o = s.options();
  const AdaptiveGrid& g = s.grid();
  const int d = g.d(), n = o.slice_points;
  const std::string tag = format_g6(s.time());
  write_file(dir / ("centers_" + tag + ".txt"), echo + g.dump_centers());

  auto axis = [&](void) {
    std::vector<double> a;
    for (int i = 0; i < n; ++i) a.push_back((i + 0.5) / n);
    return a;
  };
  {
    std::array<std::vector<double>, kMaxDim> axes;
    axes[0] = axis();
    if (d >= 2) axes[1] = axis();
    if (d == 3) axes[2] = {o.slice_x3};
    LatticeEvaluator ev(g, s.lib().alpert(), axes);
    const std::vector<double> v = ev.evaluate(s.state().u);
    std::ostringstream os;
    os << echo << (d == 1 ? "x1,u\n" : "x1,x2,u\n");
    const int ny = d >= 2 ? n : 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < ny; ++j) {
        os << format_g6(axes[0][i]);
        if (d >= 2) os << ',' << format_g6(axes[1][j]);
        os << ',' << format_g6(v[static_cast<std::size_t>(i) * ny + j]) << '\n';
      }
    write_file(dir / ("slice_" + tag + ".csv"), os.str());
  }
  for (int m = 0; m < d; ++m) {
    std::array<std::vector<double>, kMaxDim> axes;
    for (int q = 0; q < d; ++q) {
      const double c = q < static_cast<int>(o.cut_at.size()) ? o.cut_at[q] : 0.5;
      axes[q] = q == m ? axis() : std::vector<double>{c};
    }
    LatticeEvaluator ev(g, s.lib().alpert(), axes);
    const std::vector<double> v = ev.evaluate(s.state().u);
    std::ostringstream os;
    os << echo << "x" << m + 1 << ",u\n";
    for (int i = 0; i < n; ++i) os << format_g6(axes[m][i]) << ',' << format_g6(v[i]) << '\n';
    write_file(dir / ("cut_" + tag + "_x" + std::to_string(m + 1) + ".csv"), os.str());
  }
}

}  // namespace

RunResult run(const RunOptions& opts, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const std::string echo = opts.echo();
  std::filesystem::path dir(out_dir);
  if (!out_dir.empty()) std::filesystem::create_directories(dir);

  RunResult res;
  res.record.config_echo = echo;
  Solver s(opts);
  const double T = s.spec().T;
  const bool l2 = s.has_l2(), linf = s.has_point_exact() || (opts.linf_points > 0 && l2);
  const int linf_n = opts.linf_points > 0 ? opts.linf_points : std::min(1 << (opts.N + 1), 128);

  auto record = [&] {
    RecordRow r;
    r.t = s.time();
    r.dof = s.grid().dof();
    r.l2_error = l2 ? s.l2_error() : -1;
    r.energy = s.energy();
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.record.rows.push_back(r);
  };

  std::vector<double> targets;
  for (double t : opts.snapshot_times)
    if (t <= T) targets.push_back(t);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  record();
  if (!out_dir.empty() && !targets.empty() && targets.front() == 0.0) write_snapshot(s, dir, echo);
  try {
    for (double t : targets) {
      if (t == 0.0) continue;
      s.advance_to(t);
      record();
      if (!out_dir.empty()) write_snapshot(s, dir, echo);
    }
    if (s.time() < T) {
      s.advance_to(T);
      record();
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unstable) throw;
    res.record.aborted = true;
    res.record.abort_reason = e.what();
    res.record.abort_step = s.steps() + 1;
  }

  res.dof = s.grid().dof();
  res.steps = s.steps();
  res.dt = s.dt();
  res.solution_norm = res.record.aborted ? INFINITY : s.solution_norm();
  for (double c : s.state().u) res.record.max_abs_coefficient = std::max(res.record.max_abs_coefficient, std::abs(c));
  if (!res.record.aborted) {
    res.l2_error = res.record.rows.back().l2_error;
    if (linf) res.linf_error = s.linf_error(linf_n);
  }
  if (!out_dir.empty()) {
    std::string csv = res.record.to_csv();
    if (res.record.aborted)
      csv += "# aborted at step " + std::to_string(res.record.abort_step) + ": " + res.record.abort_reason + "\n";
    if (res.linf_error >= 0) csv += "# linf_error = " + format_g6(res.linf_error) + "\n";
    write_file(dir / "record.csv", csv);
    write_file(dir / "timing.txt", res.record.to_csv(true));
    if (!res.record.aborted) write_file(dir / ("centers_" + format_g6(s.time()) + ".txt"), echo + s.grid().dump_centers());
  }
  return res;
}

SweepResult convergence_study(const RunOptions& opts, const std::string& out_dir) {
  const std::string param = opts.sweep_param.empty() ? (opts.mode == GridMode::Adaptive ? "epsilon" : "N")
                                                     : opts.sweep_param;
  require(param == "N" || param == "epsilon", ErrorCode::Config, "sweep_param must be N or epsilon");
  require(!opts.sweep_values.empty(), ErrorCode::Config, "sweep_values must list at least one value");
  SweepResult out;
  out.kind = param == "N" ? TableKind::Mesh : TableKind::Epsilon;
  for (double v : opts.sweep_values) {
    RunOptions o = opts;
    std::string sub;
    if (out.kind == TableKind::Mesh) {
      require(v == std::floor(v) && v >= 0, ErrorCode::Config, "N sweep values must be non-negative integers");
      o.N = static_cast<int>(v);
      sub = "N_" + std::to_string(o.N);
    } else {
      require(o.mode == GridMode::Adaptive, ErrorCode::Config, "epsilon sweeps need mode = adaptive");
      o.epsilon = v;
      sub = "epsilon_" + format_g6(v);
    }
    RunResult r = run(o, out_dir.empty() ? "" : (std::filesystem::path(out_dir) / sub).string());
    require(!r.record.aborted, ErrorCode::Unstable, "sweep run " + sub + " aborted: " + r.record.abort_reason);
    require(r.l2_error >= 0, ErrorCode::Unsupported, "sweep needs a problem with an exact L2 error");
    TableRow row;
    row.param = v;
    row.dof = r.dof;
    row.error = r.l2_error;
    out.rows.push_back(row);
    out.runs.push_back(std::move(r));
  }
  convergence_rates(out.rows, out.kind);
  out.csv = opts.echo() + format_table(out.rows, out.kind);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(std::filesystem::path(out_dir) / "table.csv", out.csv);
  }
  return out;
}

}  // namespace mwdg
