#include "mwdg.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "mwdg/error.hpp"
#include "mwdg/run.hpp"

struct mwdg_config {
  mwdg::Config cfg;
};

struct mwdg_result {
  bool sweep = false;
  mwdg::RunResult run;
  mwdg::SweepResult table;
  std::string csv;
};

struct mwdg_solver {
  std::unique_ptr<mwdg::Solver> solver;
};

namespace {

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return MWDG_OK;
  } catch (const mwdg::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MWDG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MWDG_ERR_INTERNAL;
  }
}

int null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return MWDG_ERR_INVALID_ARGUMENT;
}

int copy_out(const std::string& s, char* buf, size_t size, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf && size > 0) {
    const size_t n = std::min(size - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return MWDG_OK;
}

}  // namespace

extern "C" {

const char* mwdg_version(void) { return "1.0.0"; }

const char* mwdg_last_error(void) { return g_last_error.c_str(); }

int mwdg_config_create(mwdg_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new mwdg_config(); });
}

int mwdg_config_load_file(mwdg_config* cfg, const char* path) {
  if (!cfg || !path) return null_arg("cfg or path");
  return guarded([&] {
    const mwdg::Config loaded = mwdg::Config::load(path);
    for (const auto& [k, v] : loaded.values()) cfg->cfg.set(k, v);
  });
}

int mwdg_config_parse(mwdg_config* cfg, const char* text) {
  if (!cfg || !text) return null_arg("cfg or text");
  return guarded([&] {
    const mwdg::Config parsed = mwdg::Config::parse(text);
    for (const auto& [k, v] : parsed.values()) cfg->cfg.set(k, v);
  });
}

int mwdg_config_set(mwdg_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_arg("cfg, key or value");
  return guarded([&] { cfg->cfg.set(key, value); });
}

int mwdg_config_override(mwdg_config* cfg, const char* assignment) {
  if (!cfg || !assignment) return null_arg("cfg or assignment");
  return guarded([&] { cfg->cfg.set_override(assignment); });
}

int mwdg_config_echo(const mwdg_config* cfg, char* buf, size_t size, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  std::string s;
  const int rc = guarded([&] { s = mwdg::RunOptions::from_config(cfg->cfg).echo(); });
  if (rc != MWDG_OK) return rc;
  return copy_out(s, buf, size, needed);
}

void mwdg_config_destroy(mwdg_config* cfg) { delete cfg; }

int mwdg_run(const mwdg_config* cfg, const char* out_dir, mwdg_result** out) {
  if (!cfg || !out) return null_arg("cfg or out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<mwdg_result>();
    r->run = mwdg::run(mwdg::RunOptions::from_config(cfg->cfg), out_dir ? out_dir : "");
    r->csv = r->run.record.to_csv();
    *out = r.release();
  });
}

int mwdg_sweep(const mwdg_config* cfg, const char* out_dir, mwdg_result** out) {
  if (!cfg || !out) return null_arg("cfg or out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<mwdg_result>();
    r->sweep = true;
    r->table = mwdg::convergence_study(mwdg::RunOptions::from_config(cfg->cfg), out_dir ? out_dir : "");
    r->csv = r->table.csv;
    *out = r.release();
  });
}

size_t mwdg_result_rows(const mwdg_result* res) {
  if (!res) return 0;
  return res->sweep ? res->table.rows.size() : res->run.record.rows.size();
}

int mwdg_result_row(const mwdg_result* res, size_t i, double* param, size_t* dof, double* error, double* rate) {
  if (!res) return null_arg("res");
  if (i >= mwdg_result_rows(res)) {
    g_last_error = "row index out of range";
    return MWDG_ERR_INVALID_ARGUMENT;
  }
  if (res->sweep) {
    const auto& r = res->table.rows[i];
    if (param) *param = r.param;
    if (dof) *dof = r.dof;
    if (error) *error = r.error;
    if (rate) *rate = !r.has_rate ? NAN : res->table.kind == mwdg::TableKind::Mesh ? r.order : r.r_eps;
  } else {
    const auto& r = res->run.record.rows[i];
    if (param) *param = r.t;
    if (dof) *dof = r.dof;
    if (error) *error = r.l2_error;
    if (rate) *rate = r.energy;
  }
  return MWDG_OK;
}

double mwdg_result_l2_error(const mwdg_result* res) { return res ? res->run.l2_error : NAN; }
double mwdg_result_linf_error(const mwdg_result* res) { return res ? res->run.linf_error : NAN; }
size_t mwdg_result_dof(const mwdg_result* res) { return res ? res->run.dof : 0; }
double mwdg_result_solution_norm(const mwdg_result* res) { return res ? res->run.solution_norm : NAN; }
int mwdg_result_aborted(const mwdg_result* res) { return res && res->run.record.aborted ? 1 : 0; }
const char* mwdg_result_csv(const mwdg_result* res) { return res ? res->csv.c_str() : ""; }
void mwdg_result_destroy(mwdg_result* res) { delete res; }

int mwdg_solver_create(const mwdg_config* cfg, mwdg_solver** out) {
  if (!cfg || !out) return null_arg("cfg or out");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<mwdg_solver>();
    s->solver = std::make_unique<mwdg::Solver>(mwdg::RunOptions::from_config(cfg->cfg));
    *out = s.release();
  });
}

int mwdg_solver_step(mwdg_solver* s, int n) {
  if (!s) return null_arg("s");
  if (n < 0) {
    g_last_error = "step count must be non-negative";
    return MWDG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    for (int i = 0; i < n; ++i) s->solver->step(s->solver->time() + s->solver->dt());
  });
}

int mwdg_solver_advance(mwdg_solver* s, double t) {
  if (!s) return null_arg("s");
  return guarded([&] { s->solver->advance_to(t); });
}

double mwdg_solver_time(const mwdg_solver* s) { return s ? s->solver->time() : NAN; }
double mwdg_solver_dt(const mwdg_solver* s) { return s ? s->solver->dt() : NAN; }
size_t mwdg_solver_dof(const mwdg_solver* s) { return s ? s->solver->grid().dof() : 0; }

int mwdg_solver_energy(const mwdg_solver* s, double* out) {
  if (!s || !out) return null_arg("s or out");
  return guarded([&] { *out = s->solver->energy(); });
}

int mwdg_solver_l2_error(const mwdg_solver* s, double* out) {
  if (!s || !out) return null_arg("s or out");
  return guarded([&] {
    mwdg::require(s->solver->has_l2(), mwdg::ErrorCode::Unsupported, "problem has no exact L2 reference");
    *out = s->solver->l2_error();
  });
}

int mwdg_solver_coefficients(const mwdg_solver* s, int which, double* buf, size_t size, size_t* needed) {
  if (!s) return null_arg("s");
  if (which != 0 && which != 1) {
    g_last_error = "which must be 0 (u) or 1 (w)";
    return MWDG_ERR_INVALID_ARGUMENT;
  }
  const auto& c = which == 0 ? s->solver->state().u : s->solver->state().w;
  if (needed) *needed = c.size();
  if (buf) std::memcpy(buf, c.data(), sizeof(double) * std::min(size, c.size()));
  return MWDG_OK;
}

void mwdg_solver_destroy(mwdg_solver* s) { delete s; }

}  // extern "C"
