#include "mwdg/problems.hpp"

#include <cmath>
#include <numbers>

#include "mwdg/error.hpp"

namespace mwdg {

namespace {

constexpr double kPi = std::numbers::pi;

Factor1D cosine(double w) {
  return {[w](double x) { return std::cos(w * x); }, [w](double x) { return -w * std::sin(w * x); },
          [w](double x) { return -w * w * std::cos(w * x); }};
}

Factor1D sine(double w) {
  return {[w](double x) { return std::sin(w * x); }, [w](double x) { return w * std::cos(w * x); },
          [w](double x) { return -w * w * std::sin(w * x); }};
}

Factor1D one() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

SeparableTerm term(std::function<double(double)> time, const std::vector<Fn1D>& f) {
  SeparableTerm t;
  t.time = std::move(time);
  for (std::size_t m = 0; m < f.size(); ++m) t.factor[m] = f[m];
  return t;
}

std::array<Boundary1D, kMaxDim> uniform_bc(BoundaryType b) {
  std::array<Boundary1D, kMaxDim> out{};
  for (auto& x : out) x = {b, b};
  return out;
}

// Standing wave sin(w t) prod cos(a pi x_m).
void standing_wave(ProblemSpec& s, double a, double w) {
  std::vector<Fn1D> f(s.d, cosine(a * kPi).f);
  s.exact = {term([w](double t) { return std::sin(w * t); }, f)};
  s.v0 = {term(nullptr, f)};
  s.v0[0].factor[0] = [w, a](double x) { return w * std::cos(a * kPi * x); };
}

}  // namespace

std::vector<std::string> problem_names() {
  return {"example-4.1a", "example-4.1b", "example-4.2", "example-4.3", "example-4.4", "example-4.5", "custom"};
}

std::string canonical_problem(const std::string& name) {
  for (const auto& n : problem_names())
    if (name == n || "example-" + name == n) return n;
  throw Error(ErrorCode::Config, "unknown problem '" + name + "'");
}

SeparableSum separable_wave_source(const std::function<double(double)>& T, const std::function<double(double)>& Tdd,
                                   const std::vector<Factor1D>& U, const std::vector<double>& alpha,
                                   const std::vector<std::vector<Factor1D>>& C) {
  const int d = static_cast<int>(U.size());
  SeparableSum f;
  std::vector<Fn1D> base(d);
  for (int m = 0; m < d; ++m) base[m] = U[m].f;
  f.push_back(term(Tdd, base));
  for (std::size_t a = 0; a < alpha.size(); ++a) {
    const double al = alpha[a];
    for (int m = 0; m < d; ++m) {
      std::vector<Fn1D> g(d);
      for (int q = 0; q < d; ++q) {
        if (q == m) {
          const Factor1D c = C[a][q], u = U[q];
          g[q] = [c, u](double x) { return c.df(x) * u.df(x) + c.f(x) * u.d2f(x); };
        } else {
          const Factor1D c = C[a][q], u = U[q];
          g[q] = [c, u](double x) { return c.f(x) * u.f(x); };
        }
      }
      f.push_back(term([T, al](double t) { return -al * T(t); }, g));
    }
  }
  return f;
}

ProblemSpec make_problem(const ProblemParams& p) {
  ProblemSpec s;
  s.name = canonical_problem(p.name);
  s.d = p.d;
  s.k = p.k;
  s.M = p.M < 0 ? p.k + 1 : p.M;
  s.variant = p.variant;
  s.N_max = p.N_max;
  s.sigma = p.sigma > 0 ? p.sigma : (p.d == 3 ? 30.0 : 10.0);
  s.cfl = p.cfl > 0 ? p.cfl : (p.d == 3 ? 0.05 : 0.1);
  require(p.d >= 1 && p.d <= kMaxDim, ErrorCode::Config, "dimension must be 1, 2 or 3");
  const int d = p.d;
  double T = 0.1;

  if (s.name == "example-4.1a" || s.name == "example-4.1b") {
    const bool mixed = s.name == "example-4.1b";
    const double a = mixed ? 1.0 : 2.0, w = a * std::sqrt(static_cast<double>(d)) * kPi;
    standing_wave(s, a, w);
    if (mixed) {
      s.bc = uniform_bc(BoundaryType::Neumann);
      s.bc[0] = {BoundaryType::Dirichlet, BoundaryType::Dirichlet};
      s.dirichlet = s.exact;
    } else {
      s.bc = uniform_bc(BoundaryType::Periodic);
    }
  } else if (s.name == "example-4.2") {
    require(d == 2 || d == 3, ErrorCode::Config, "example-4.2 is defined for d = 2 and 3");
    const double w = 2 * kPi;
    std::vector<Factor1D> U{sine(w), cosine(w)}, C0{cosine(w), cosine(w)};
    if (d == 3) {
      U.push_back(cosine(w));
      C0 = {sine(w), sine(w), cosine(w)};
    }
    std::vector<Factor1D> C1(d, one());
    s.source = separable_wave_source([](double t) { return std::sin(kPi * t); },
                                     [](double t) { return -kPi * kPi * std::sin(kPi * t); }, U,
                                     {1.0 / 3.0, 2.0 / 3.0}, {C0, C1});
    std::vector<Fn1D> uf(d);
    for (int m = 0; m < d; ++m) uf[m] = U[m].f;
    s.exact = {term([](double t) { return std::sin(kPi * t); }, uf)};
    s.v0 = {term([](double) { return kPi; }, uf)};
    s.speed.kind = SpeedKind::Smooth;
    s.speed.c2_min = 1.0 / 3.0;
    s.speed.c2_max = 1.0;
    if (d == 2) {
      s.speed.c2 = [](const double* x, const int*) {
        return (std::cos(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]) + 2) / 3;
      };
    } else {
      s.speed.c2 = [](const double* x, const int*) {
        return (std::sin(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]) * std::cos(2 * kPi * x[2]) + 2) / 3;
      };
    }
    s.bc = uniform_bc(BoundaryType::Periodic);
  } else if (s.name == "example-4.3") {
    require(d == 2 || d == 3, ErrorCode::Config, "example-4.3 is defined for d = 2 and 3");
    require(p.N_max >= 2, ErrorCode::Config, "example-4.3 needs N_max >= 2 so the jumps sit on cell faces");
    const double outside = d == 2 ? 5.0 / 37.0 : 3.0 / 19.0;
    const double w = std::sqrt(d == 2 ? 20.0 : 24.0) * kPi;
    auto inside = [](double x, int side) {
      const int sd = resolve_side(x, side);
      if (x == 0.25) return sd > 0;
      if (x == 0.75) return sd < 0;
      return x > 0.25 && x < 0.75;
    };
    s.speed.kind = SpeedKind::Interface;
    s.speed.c2 = [inside, outside](const double* x, const int* sides) {
      return inside(x[0], sides ? sides[0] : 0) ? 1.0 : outside;
    };
    s.speed.c2_min = outside;
    s.speed.c2_max = 1.0;
    s.speed.jumps[0] = {0.25, 0.75};
    std::vector<Fn1D> f(d, cosine(2 * kPi).f);
    f[0] = [](double x) { return x >= 0.25 && x <= 0.75 ? std::cos(4 * kPi * x) : std::cos(12 * kPi * x); };
    s.exact = {term([w](double t) { return std::sin(w * t); }, f)};
    s.v0 = {term([w](double) { return w; }, f)};
    s.bc = uniform_bc(BoundaryType::Periodic);
    T = 0.01;
  } else if (s.name == "example-4.4" || s.name == "example-4.5") {
    const bool heter = s.name == "example-4.5";
    const double c = heter ? 0.5 : 0.0;
    std::vector<Fn1D> g(d, [c](double x) { return std::exp(-500 * (x - c) * (x - c)); });
    s.v0 = {term([](double) { return 100.0; }, g)};
    if (heter) {
      s.speed.kind = SpeedKind::Smooth;
      s.speed.c2 = [](const double* x, const int*) { return x[0] >= 0.35 && x[0] <= 0.65 ? 0.25 : 1.0; };
      s.speed.c2_min = 0.25;
      s.speed.c2_max = 1.0;
      s.bc = uniform_bc(BoundaryType::Dirichlet);
      T = 0.3;
    } else {
      s.bc = uniform_bc(BoundaryType::Neumann);
      T = 0.5;
      if (d == 3) {
        s.exact_point = [](const double* x, double t) {
          const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
          if (r < 1e-8) return 100 * t * std::exp(-500 * t * t);
          return (std::exp(-500 * (t - r) * (t - r)) - std::exp(-500 * (t + r) * (t + r))) / (20 * r);
        };
        // The cube holds one octant of the spherical shell.
        s.exact_norm2 = [](double t) {
          const Quadrature1D q = gauss_legendre(20);
          constexpr int cells = 600;
          const double R = 1.0;
          double sum = 0;
          for (int c = 0; c < cells; ++c)
            for (int i = 0; i < q.size(); ++i) {
              const double r = R * (c + q.nodes[i]) / cells;
              const double u = (std::exp(-500 * (t - r) * (t - r)) - std::exp(-500 * (t + r) * (t + r))) / 20;
              sum += R * q.weights[i] / cells * u * u;
            }
          return kPi / 2 * sum;
        };
      }
    }
  } else {
    require(p.c2 > 0, ErrorCode::Config, "custom problem needs c2 > 0");
    const BoundaryType b = parse_boundary(p.bc);
    s.speed.value = p.c2;
    const double w = std::sqrt(p.c2) * p.a * std::sqrt(static_cast<double>(d)) * kPi;
    standing_wave(s, p.a, w);
    s.bc = uniform_bc(b);
    if (b == BoundaryType::Dirichlet) s.dirichlet = s.exact;
    if (b == BoundaryType::Periodic)
      require(std::abs(std::sin(p.a * kPi / 2)) < 1e-12, ErrorCode::Unsupported,
              "custom periodic runs need an even integer wavenumber a");
    if (b == BoundaryType::Neumann)
      require(std::abs(std::sin(p.a * kPi)) < 1e-12, ErrorCode::Unsupported,
              "custom Neumann runs need an integer wavenumber a (homogeneous normal derivative)");
  }
  s.T = p.T >= 0 ? p.T : T;
  s.validate();
  return s;
}

}  // namespace mwdg
