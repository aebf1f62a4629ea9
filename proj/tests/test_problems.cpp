#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "mwdg/error.hpp"
#include "mwdg/problems.hpp"

using namespace mwdg;

namespace {

constexpr double kPi = std::numbers::pi;

ProblemSpec problem(const std::string& name, int d, int N = 4) {
  ProblemParams p;
  p.name = name;
  p.d = d;
  p.N_max = N;
  return make_problem(p);
}

double c2_at(const ProblemSpec& s, const double* x) {
  const int sides[3] = {0, 0, 0};
  return s.speed(x, sides);
}

// u_tt - div(c^2 grad u) - f by central differences.
double residual(const ProblemSpec& s, const double* x, double t) {
  const int d = s.d;
  const double h = 1e-4;
  auto u = [&](const double* y, double tt) { return s.exact_at(y, tt); };
  const double utt = (u(x, t + h) - 2 * u(x, t) + u(x, t - h)) / (h * h);
  double div = 0;
  for (int m = 0; m < d; ++m) {
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]}, xpp[3] = {x[0], x[1], x[2]}, xmm[3] = {x[0], x[1], x[2]};
    xp[m] += h / 2;
    xm[m] -= h / 2;
    xpp[m] += h;
    xmm[m] -= h;
    const double fp = c2_at(s, xp) * (u(xpp, t) - u(x, t)) / h;
    const double fm = c2_at(s, xm) * (u(x, t) - u(xmm, t)) / h;
    div += (fp - fm) / h;
  }
  const double f = s.source.empty() ? 0.0 : evaluate(s.source, d, x, t);
  return utt - div - f;
}

}  // namespace

TEST_SUITE("problems") {
  TEST_CASE("names") {
    CHECK(canonical_problem("4.2") == "example-4.2");
    CHECK(canonical_problem("example-4.1b") == "example-4.1b");
    CHECK(canonical_problem("custom") == "custom");
    CHECK(problem_names().size() == 7);
    try {
      canonical_problem("4.9");
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
    }
  }

  TEST_CASE("defaults per dimension") {
    const ProblemSpec a = problem("4.1a", 2), b = problem("4.1a", 3);
    CHECK(a.sigma == 10.0);
    CHECK(a.cfl == 0.1);
    CHECK(b.sigma == 30.0);
    CHECK(b.cfl == 0.05);
    CHECK(a.T == 0.1);
    CHECK(a.M == 2);
    CHECK(problem("4.3", 2).T == 0.01);
  }

  TEST_CASE("manufactured solutions satisfy the wave equation") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (const char* name : {"4.1a", "4.1b", "4.2"})
      for (int d = 2; d <= 3; ++d) {
        const ProblemSpec s = problem(name, d);
        for (int r = 0; r < 20; ++r) {
          const double x[3] = {u(rng), u(rng), u(rng)};
          const double t = u(rng);
          CHECK(std::abs(residual(s, x, t)) < 2e-4 * 40 * kPi * kPi);
        }
      }
    // Away from the jumps of the layered problem.
    for (int d = 2; d <= 3; ++d) {
      const ProblemSpec s = problem("4.3", d);
      for (double x0 : {0.1, 0.4, 0.6, 0.9}) {
        const double x[3] = {x0, u(rng), u(rng)};
        CHECK(std::abs(residual(s, x, 0.003)) < 1e-2);
      }
    }
  }

  TEST_CASE("wave-source builder against finite differences with a custom speed") {
    const std::vector<Factor1D> U{{[](double x) { return std::sin(3 * x); }, [](double x) { return 3 * std::cos(3 * x); },
                                   [](double x) { return -9 * std::sin(3 * x); }},
                                  {[](double y) { return y * y; }, [](double y) { return 2 * y; }, [](double) { return 2.0; }}};
    const std::vector<Factor1D> C{{[](double x) { return 1 + x; }, [](double) { return 1.0; }, [](double) { return 0.0; }},
                                  {[](double y) { return std::exp(y); }, [](double y) { return std::exp(y); },
                                   [](double y) { return std::exp(y); }}};
    ProblemSpec s = problem("4.2", 2);
    s.source = separable_wave_source([](double t) { return std::cos(t); }, [](double t) { return -std::cos(t); }, U,
                                     {0.5, 2.0}, {C, std::vector<Factor1D>(2, Factor1D{[](double) { return 1.0; },
                                                                                        [](double) { return 0.0; },
                                                                                        [](double) { return 0.0; }})});
    s.exact.clear();
    s.exact_point = [](const double* x, double t) { return std::cos(t) * std::sin(3 * x[0]) * x[1] * x[1]; };
    s.speed.c2 = [](const double* x, const int*) { return 0.5 * (1 + x[0]) * std::exp(x[1]) + 2.0; };
    const double x[3] = {0.3, 0.7, 0};
    CHECK(std::abs(residual(s, x, 0.4)) < 1e-5 * 50);
  }

  TEST_CASE("example-specific structure") {
    const ProblemSpec b = problem("4.1b", 2);
    CHECK(b.bc[0].low == BoundaryType::Dirichlet);
    CHECK(b.bc[1].high == BoundaryType::Neumann);
    CHECK_FALSE(b.dirichlet.empty());

    const ProblemSpec c = problem("4.3", 2);
    CHECK(c.speed.kind == SpeedKind::Interface);
    const double in[2] = {0.25, 0.5};
    const int right[2] = {1, 0}, left[2] = {-1, 0};
    CHECK(c.speed(in, right) == 1.0);
    CHECK(c.speed(in, left) == doctest::Approx(5.0 / 37));
    CHECK_THROWS_AS(problem("4.3", 2, 1), Error);

    const ProblemSpec four2 = problem("4.4", 2);
    CHECK_FALSE(four2.has_exact());
    const ProblemSpec four3 = problem("4.4", 3);
    CHECK(four3.has_exact());
    CHECK(four3.exact_norm2(0.5) > 0);
    // Radial solution: (r u)_tt = (r u)_rr.
    const double r = 0.4, h = 1e-4, t = 0.45;
    auto ru = [&](double rr, double tt) {
      const double x[3] = {rr / std::sqrt(3.0), rr / std::sqrt(3.0), rr / std::sqrt(3.0)};
      return rr * four3.exact_at(x, tt);
    };
    const double tt = (ru(r, t + h) - 2 * ru(r, t) + ru(r, t - h)) / (h * h);
    const double rr = (ru(r + h, t) - 2 * ru(r, t) + ru(r - h, t)) / (h * h);
    CHECK(std::abs(tt - rr) < 1e-4 * std::max(1.0, std::abs(tt)));

    CHECK(problem("4.5", 2).speed.kind == SpeedKind::Smooth);
    CHECK_THROWS_AS(problem("4.2", 1), Error);
  }

  TEST_CASE("custom problem rules") {
    ProblemParams p;
    p.name = "custom";
    p.d = 2;
    p.N_max = 4;
    p.a = 2;
    p.c2 = 0.5;
    const ProblemSpec s = make_problem(p);
    CHECK(s.speed.value == 0.5);
    const double x[3] = {0.3, 0.6, 0};
    CHECK(std::abs(residual(s, x, 0.2)) < 1e-3);
    p.a = 1;
    try {
      make_problem(p);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Unsupported);
    }
    p.bc = "neumann";
    CHECK_NOTHROW(make_problem(p));
    p.a = 1.5;
    CHECK_THROWS_AS(make_problem(p), Error);
    p.bc = "dirichlet";
    const ProblemSpec dir = make_problem(p);
    CHECK_FALSE(dir.dirichlet.empty());
    p.c2 = -1;
    CHECK_THROWS_AS(make_problem(p), Error);
    p.c2 = 1;
    p.bc = "robin";
    CHECK_THROWS_AS(make_problem(p), Error);
  }
}
