#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mwdg.h"

namespace {

int fail(const char* what, int rc) {
  std::fprintf(stderr, "mwdg: %s failed (code %d): %s\n", what, rc, mwdg_last_error());
  return rc;
}

void print_run(const mwdg_result* r) {
  const size_t n = mwdg_result_rows(r);
  for (size_t i = 0; i < n; ++i) {
    double t = 0, err = 0, energy = 0;
    size_t dof = 0;
    mwdg_result_row(r, i, &t, &dof, &err, &energy);
    if (err >= 0)
      std::printf("t=%-10.6g DoF=%-8zu l2_error=%-12.6g energy=%.10g\n", t, dof, err, energy);
    else
      std::printf("t=%-10.6g DoF=%-8zu energy=%.10g\n", t, dof, energy);
  }
  if (mwdg_result_linf_error(r) >= 0) std::printf("linf_error=%.6g\n", mwdg_result_linf_error(r));
  if (mwdg_result_aborted(r)) std::printf("run aborted: non-finite solution\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multiresolution IPDG solver for the second-order wave equation"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Configuration file (key = value lines)");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--override", overrides, "Override a config key, e.g. --override N=6")->take_all();
  };
  CLI::App* run = app.add_subcommand("run", "Run one simulation");
  CLI::App* sweep = app.add_subcommand("sweep", "Convergence study over N or epsilon");
  add_common(run);
  add_common(sweep);
  CLI11_PARSE(app, argc, argv);

  mwdg_config* cfg = nullptr;
  int rc = mwdg_config_create(&cfg);
  if (rc != MWDG_OK) return fail("config", rc);
  if (!config_path.empty() && (rc = mwdg_config_load_file(cfg, config_path.c_str())) != MWDG_OK) {
    mwdg_config_destroy(cfg);
    return fail("loading config", rc);
  }
  for (const auto& o : overrides)
    if ((rc = mwdg_config_override(cfg, o.c_str())) != MWDG_OK) {
      mwdg_config_destroy(cfg);
      return fail("override", rc);
    }

  mwdg_result* res = nullptr;
  const bool is_sweep = sweep->parsed();
  rc = is_sweep ? mwdg_sweep(cfg, out_dir.c_str(), &res) : mwdg_run(cfg, out_dir.c_str(), &res);
  mwdg_config_destroy(cfg);
  if (rc != MWDG_OK) return fail(is_sweep ? "sweep" : "run", rc);
  if (is_sweep)
    std::fputs(mwdg_result_csv(res), stdout);
  else
    print_run(res);
  const int code = mwdg_result_aborted(res) ? MWDG_ERR_UNSTABLE : MWDG_OK;
  mwdg_result_destroy(res);
  return code;
}
