#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nlprobe/ansatz.hpp"
#include "nlprobe/solver.hpp"
#include "nlprobe/spectral.hpp"

using namespace nlprobe;

TEST_SUITE("properties") {
  TEST_CASE("Wiener norm is submultiplicative and dominates the sup norm") {
    std::mt19937_64 rng(11);
    int violations = 0;
    for (int trial = 0; trial < 120; ++trial) {
      const Grid g(trial % 2 ? 2 : 1, trial % 2 ? 16 : 64, 2.0 + trial % 3);
      const auto u = testing::random_field(g, rng);
      const auto v = testing::random_field(g, rng);
      const double fu = fl1_norm(u), fv = fl1_norm(v);
      if (fl1_norm(multiply(u, v)) > fu * fv * (1.0 + 1e-12)) ++violations;
      if (linf_norm(u) > fu * (1.0 + 1e-12)) ++violations;
    }
    CHECK(violations == 0);
  }

  TEST_CASE("free flow is unitary on coefficients and a group in time") {
    std::mt19937_64 rng(12);
    for (int n : {1, 2}) {
      const Grid g(1, 64, 3.0);
      const auto u = testing::random_field(g, rng);
      const auto a = free_propagate(u, 0.37, n);
      CHECK(fl1_norm(a) == doctest::Approx(fl1_norm(u)).epsilon(1e-12));
      CHECK(coefficient_l2_norm(forward_dft(a)) ==
            doctest::Approx(coefficient_l2_norm(forward_dft(u))).epsilon(1e-12));
      const auto b = free_propagate(free_propagate(u, 0.2, n), 0.17, n);
      CHECK(fl1_norm(a - b) < 1e-12);
    }
  }

  TEST_CASE("Plancherel: lattice mass equals box volume times coefficient energy") {
    std::mt19937_64 rng(13);
    for (int d : {1, 2}) {
      const Grid g(d, 16, 1.7);
      const auto u = testing::random_field(g, rng);
      const double c2 = coefficient_l2_norm(forward_dft(u));
      CHECK(mass(u) == doctest::Approx(std::pow(2.0 * 1.7, d) * c2 * c2).epsilon(1e-12));
    }
  }

  TEST_CASE("gauge invariance of the norm and of the nonlinear flow") {
    std::mt19937_64 rng(14);
    const Grid g(1, 64, 8.0);
    const auto u = 0.02 * testing::random_field(g, rng);
    const cplx phase = std::polar(1.0, 0.9);
    CHECK(fl1_norm(phase * u) == doctest::Approx(fl1_norm(u)).epsilon(1e-13));
    const auto gnl = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(1.0, 1.0);
    SplitStepOptions o;
    o.dt = 1e-2;
    o.node_intervals = 2;
    const auto a = splitstep_solve(u, {1, 1.0}, gnl, beta, o);
    const auto b = splitstep_solve(phase * u, {1, 1.0}, gnl, beta, o);
    CHECK(fl1_norm(b.back() - phase * a.back()) < 1e-13);
  }

  TEST_CASE("split-step conserves mass") {
    std::mt19937_64 rng(15);
    const Grid g(2, 32, 6.0);
    const auto u = 0.05 * testing::random_field(g, rng);
    SplitStepOptions o;
    o.dt = 5e-3;
    o.node_intervals = 4;
    const auto tr = splitstep_solve(u, {2, 0.5}, AnalyticNonlinearity::cubic(1.0),
                                    BumpCoefficient::smooth(2.0, 1.5), o);
    for (const auto& f : tr.fields) CHECK(mass(f) == doctest::Approx(mass(u)).epsilon(1e-12));
  }

  TEST_CASE("ansatz modulus is transported along -xi without change") {
    const auto g = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(3.0, 1.0, {0.2, -0.1});
    ProbeParams pr;
    pr.dim = 2;
    pr.p = 1.5;
    pr.eps = 0.2;
    pr.horizon = 2.0;
    pr.xi = {0.6, 0.8};
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-6.0, 6.0), ut(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
      const Point x{u(rng), u(rng)};
      const double t = ut(rng);
      const double want = std::pow(pr.eps, pr.p) * pr.a0(pr.eps * (x + (t + 2.0 * pr.horizon) * pr.xi));
      CHECK(std::abs(approx_solution_v_at(pr, g, beta, t, x)) == doctest::Approx(want).epsilon(1e-13));
    }
  }
}
