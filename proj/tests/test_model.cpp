#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "nlprobe/ansatz.hpp"
#include "nlprobe/errors.hpp"
#include "nlprobe/nonlinearity.hpp"
#include "nlprobe/quadrature.hpp"
#include "nlprobe/regression.hpp"
#include "nlprobe/spectral.hpp"

using namespace nlprobe;

namespace {

ProbeParams probe_1d(double eps, double p = 1.5) {
  ProbeParams pr;
  pr.p = p;
  pr.eps = eps;
  pr.horizon = 2.0;
  pr.a0.amplitude = 0.5;
  return pr;
}

}  // namespace

TEST_SUITE("nonlinearity") {
  TEST_CASE("G evaluates the Taylor series and guards its disk") {
    const AnalyticNonlinearity g({1.0, 2.0, 6.0}, 2.0);
    for (double m : {0.0, 0.3, 1.9}) CHECK(eval_G(g, m) == doctest::Approx(m + m * m + m * m * m));
    CHECK_THROWS_AS(eval_G(g, 2.0), DomainError);
    CHECK_THROWS_AS(eval_G(g, 5.0), DomainError);
    CHECK(eval_G(AnalyticNonlinearity::cubic(), 0.25) == 0.25);
  }

  TEST_CASE("construction rejects degenerate nonlinearities") {
    CHECK_THROWS_AS(AnalyticNonlinearity({}, 1.0), ValidationError);
    CHECK_THROWS_AS(AnalyticNonlinearity({0.0, 0.0}, 1.0), ValidationError);
    CHECK_THROWS_AS(AnalyticNonlinearity({1.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(AnalyticNonlinearity({NAN}, 1.0), ValidationError);
  }

  TEST_CASE("majorant sums and delta0 by hand") {
    const AnalyticNonlinearity g({1.0, -2.0}, 2.0);
    // q = 1/2: s1 = 1/2 + 2/2 * 1/4, s2 = 3/2 + 5 * 1/4.
    const auto s = majorant_sums(g);
    CHECK(s.s1 == doctest::Approx(0.75));
    CHECK(s.s2 == doctest::Approx(2.75));
    const double want = 0.99 * std::sqrt(2.0) / 4.0 * (1.0 / (2.0 * std::sqrt(3.0 * 0.4 * 2.75)));
    CHECK(delta0(g, 3.0, 0.4) == doctest::Approx(want));
    // Weak coupling saturates at the disk bound.
    CHECK(delta0(g, 1e-4, 1e-4) == doctest::Approx(0.99 * std::sqrt(2.0) / 4.0));
    CHECK_THROWS_AS(delta0(g, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(delta0(g, 1.0, 0.0), DomainError);
  }

  TEST_CASE("bump coefficients") {
    const auto b = BumpCoefficient::smooth(2.0, 0.5, {0.1, 0.0});
    CHECK(b({0.1, 0.0}) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(b({0.6, 0.0}) == 0.0);
    CHECK(b({0.7, 0.3}) == 0.0);
    CHECK(b.max_value() == doctest::Approx(2.0 * std::exp(-1.0)));
    const auto t = BumpCoefficient::truncated_gaussian(1.0, 1.0, 0.3);
    CHECK(t({0.3, 0.0}) == doctest::Approx(std::exp(-0.5)));
    CHECK(t({1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(BumpCoefficient::smooth(-1.0, 1.0).validate(), ValidationError);
    CHECK_THROWS_AS(BumpCoefficient::truncated_gaussian(1.0, 1.0, 0.0).validate(), ValidationError);
  }

  TEST_CASE("rotated frame samples the same bump") {
    const auto b = BumpCoefficient::smooth(1.0, 0.8, {0.3, -0.2});
    const Point xi{0.6, 0.8}, perp{-0.8, 0.6};
    const auto r = in_direction_frame(b, xi);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const Point y{u(rng), u(rng)};
      CHECK(r(y) == doctest::Approx(b(y[0] * xi + y[1] * perp)).epsilon(1e-13));
    }
  }

  TEST_CASE("pointwise nonlinearity and its domain check") {
    const Grid g(1, 16, 2.0);
    const auto g3 = AnalyticNonlinearity({1.0, 2.0}, 1.0);
    const auto beta = BumpCoefficient::smooth(1.5, 1.0);
    const auto u = ComplexField::from_function(g, [](const Point& x) { return cplx(0.3, 0.1 * x[0]); });
    const auto out = apply_nonlinearity(g3, beta, u);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double m = std::norm(u.samples[i]);
      CHECK(std::abs(out.samples[i] - beta(g.point(i)) * (m + m * m) * u.samples[i]) < 1e-15);
    }
    const auto big = ComplexField::from_function(g, [](const Point&) { return cplx(1.2, 0.0); });
    CHECK_THROWS_AS(apply_nonlinearity(g3, beta, big), DomainError);
  }
}

TEST_SUITE("ansatz") {
  TEST_CASE("hypotheses are checked by name") {
    const auto g = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(1.0, 1.0);
    auto pr = probe_1d(0.1);
    CHECK_NOTHROW(pr.validate(g, beta));
    pr.p = 1.0;
    CHECK_THROWS_WITH_AS(pr.validate(g, beta), doctest::Contains("p > n"), ValidationError);
    pr = probe_1d(0.1);
    pr.horizon = 0.9;
    CHECK_THROWS_WITH_AS(pr.validate(g, beta), doctest::Contains("supp(beta)"), ValidationError);
    pr = probe_1d(0.9);
    pr.a0.amplitude = 10.0;
    CHECK_THROWS_WITH_AS(pr.validate(g, beta), doctest::Contains("admissibility"), ValidationError);
    pr = probe_1d(0.1);
    pr.xi = {0.5, 0.0};
    CHECK_THROWS_AS(pr.validate(g, beta), ValidationError);
  }

  TEST_CASE("probe grid rule") {
    for (double eps : {0.2, 0.07}) {
      const auto pr = probe_1d(eps);
      const Grid g = probe_grid(pr);
      const double L = g.half_length();
      CHECK(L >= 3.0 * pr.horizon + 8.0 * pr.a0.width / eps);
      CHECK(std::remainder(L, std::numbers::pi) == doctest::Approx(0.0).scale(1.0));
      CHECK(std::numbers::pi * g.n() / (2.0 * L) >= 8.0);
      CHECK(g.lattice_index(pr.xi) >= 0);
    }
  }

  TEST_CASE("segment integrals against a dense Simpson oracle") {
    const auto beta = BumpCoefficient::smooth(1.3, 0.9, {0.2, 0.1});
    const Point xi{0.6, 0.8};
    for (const Point x : {Point{-2.0, -1.5}, Point{-1.0, 0.5}, Point{0.0, 0.0}}) {
      for (double len : {0.7, 1.6, 4.0}) {
        const double want =
            testing::simpson([&](double s) { return beta(x + s * xi); }, 0.0, len, 20000);
        CHECK(segment_integral(beta, x, xi, len) == doctest::Approx(want).epsilon(1e-10).scale(1e-12));
        CHECK(segment_integral(beta, x + len * xi, xi, -len) ==
              doctest::Approx(-want).epsilon(1e-10).scale(1e-12));
      }
    }
    CHECK(segment_integral(beta, {5.0, 5.0}, xi, 3.0) == 0.0);
  }

  TEST_CASE("beta = 0 ansatz is the transported carrier packet") {
    const auto g = AnalyticNonlinearity::cubic(1.0);
    const auto pr = probe_1d(0.1);
    const Grid grid = probe_grid(pr);
    const auto v = approx_solution_v(pr, g, BumpCoefficient::zero(), 0.3, grid);
    for (std::size_t i = 0; i < grid.size(); i += 37) {
      const double x = grid.point(i)[0];
      const cplx want = std::pow(0.1, 1.5) * pr.a0({0.1 * (x + 4.3), 0.0}) * std::polar(1.0, x + 0.15);
      CHECK(std::abs(v.samples[i] - want) < 1e-15);
    }
  }

  TEST_CASE("ansatz phase satisfies its transport equation to second order") {
    // w = v e^{-i carrier} solves (d/dt - xi . grad) w = -i beta(x) G(eps^{2p}|a0|^2) w.
    const auto g = AnalyticNonlinearity({1.0, 1.0}, 1.0);
    const auto beta = BumpCoefficient::smooth(2.0, 1.0, {0.1, 0.0});
    const auto pr = probe_1d(0.3);
    auto w = [&](double t, double x) {
      return approx_solution_v_at(pr, g, beta, t, {x, 0.0}) * std::polar(1.0, -(x + t / 2.0));
    };
    auto residual = [&](double t, double x, double h) {
      const cplx dt = (w(t + h, x) - w(t - h, x)) / (2.0 * h);
      const cplx dx = (w(t, x + h) - w(t, x - h)) / (2.0 * h);
      const double a = std::pow(pr.eps, pr.p) * pr.a0({pr.eps * (x + (t + 4.0) * 1.0), 0.0});
      return std::abs(dt - dx + cplx(0.0, 1.0) * beta({x, 0.0}) * eval_G(g, a * a) * w(t, x));
    };
    for (auto [t, x] : {std::pair{-0.5, 0.3}, std::pair{0.7, -0.4}, std::pair{1.2, 0.0}}) {
      const double r1 = residual(t, x, 1e-2), r2 = residual(t, x, 5e-3);
      CHECK(r1 < 1e-3);
      CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
    }
  }

  TEST_CASE("initial data below and above the contraction threshold") {
    const auto g = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(1.0, 1.0);
    const auto pr = probe_1d(0.1);
    const Grid grid = probe_grid(pr);
    const auto u0 = initial_data(pr, g, beta, grid);
    CHECK(fl1_norm(u0) == doctest::Approx(std::pow(0.1, 1.5) * 0.5).epsilon(1e-6));
    auto loud = probe_1d(0.5, 1.25);
    loud.a0.amplitude = 0.8;
    CHECK_NOTHROW(loud.validate(g, beta));
    CHECK_THROWS_AS(initial_data(loud, g, beta, probe_grid(loud)), ThresholdError);
    CHECK(delta0_for(g, 2.0, sample(BumpCoefficient::zero(), grid)) ==
          doctest::Approx(0.99 / 4.0));
  }

  TEST_CASE("defect_E lives on the open interval") {
    const auto g = AnalyticNonlinearity::cubic(1.0);
    const auto pr = probe_1d(0.2);
    const Grid grid = probe_grid(pr);
    CHECK_THROWS_AS(defect_E(pr, g, BumpCoefficient::smooth(1.0, 1.0), 2.0, grid), ValidationError);
    CHECK_NOTHROW(defect_E(pr, g, BumpCoefficient::smooth(1.0, 1.0), 1.9, grid));
  }

  TEST_CASE("defect of the beta = 0 packet is the dispersive remainder") {
    // With beta = 0 only the O(eps^2) dispersion of the envelope is left:
    // E = eps^(p+2) (1/2) a0''(.) e^{i carrier} for n = 1.
    const auto g = AnalyticNonlinearity::cubic(1.0);
    const auto pr = probe_1d(0.2);
    const Grid grid = probe_grid(pr);
    const auto e = defect_E(pr, g, BumpCoefficient::zero(), 0.5, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.point(i)[0];
      const double y = pr.eps * (x + 4.5);
      const double a2 = 0.5 * (y * y - 1.0) * std::exp(-y * y / 2.0);
      const cplx want = -0.5 * std::pow(pr.eps, pr.p + 2.0) * a2 * std::polar(1.0, x + 0.25);
      worst = std::max(worst, std::abs(e.samples[i] - want));
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("derivative norms: beta = 0 keeps the envelope peak") {
    const auto g = AnalyticNonlinearity::cubic(1.0);
    const auto pr = probe_1d(0.1);
    CHECK(derivative_norm(pr, g, BumpCoefficient::zero(), 0, probe_grid(pr)) ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(derivative_norm(pr, g, BumpCoefficient::zero(), 3, probe_grid(pr)), ValidationError);
  }
}

TEST_SUITE("regression") {
  TEST_CASE("power-law fit recovers exponents") {
    const std::vector<double> x{0.2, 0.15, 0.1, 0.07};
    std::vector<double> y;
    for (double e : x) y.push_back(3.0 * std::pow(e, 1.75));
    const auto f = fit_power_law(x, y);
    CHECK(f.slope == doctest::Approx(1.75));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(f.points == 4);
    const std::vector<double> bad{1.0, -1.0, 2.0, 3.0};
    CHECK_THROWS(fit_power_law(x, bad));
  }

  TEST_CASE("adaptive quadrature on smooth and vanishing integrands") {
    CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -6.0, 6.0) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(integrate_adaptive([](double x) { return 1e-300 * x; }, 0.0, 1.0) ==
          doctest::Approx(0.5e-300).epsilon(1e-6).scale(1e-300));
    CHECK(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
  }
}
