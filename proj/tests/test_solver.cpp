#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "nlprobe/ansatz.hpp"
#include "nlprobe/errors.hpp"
#include "nlprobe/parallel.hpp"
#include "nlprobe/solver.hpp"
#include "nlprobe/spectral.hpp"

using namespace nlprobe;
namespace fs = std::filesystem;

namespace {

ComplexField small_gaussian(const Grid& g, double amp) {
  return ComplexField::from_function(g, [&](const Point& x) { return cplx(amp * std::exp(-x[0] * x[0] / 2.0), 0.0); });
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlprobe_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("cumulative Simpson weights") {
    const double h = 0.1;
    std::vector<cplx> quad, cubic;
    for (int m = 0; m <= 10; ++m) {
      const double t = m * h;
      quad.push_back({t * t, 0.0});
      cubic.push_back({t * t * t, 0.0});
    }
    const auto q = cumulative_simpson(quad, h);
    const auto c = cumulative_simpson(cubic, h);
    for (int m = 0; m <= 10; ++m) {
      const double t = m * h;
      CHECK(q[m].real() == doctest::Approx(t * t * t / 3.0).epsilon(1e-13));
      if (m % 2 == 0) CHECK(c[m].real() == doctest::Approx(t * t * t * t / 4.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(cumulative_simpson(std::vector<cplx>(4), h), ValidationError);
  }

  TEST_CASE("Picard with beta = 0 returns the free flow at once") {
    const Grid g(1, 64, 8.0);
    const auto u0 = small_gaussian(g, 0.05);
    const auto [tr, rep] = picard_solve(u0, {1, 1.0}, AnalyticNonlinearity::cubic(1.0),
                                        BumpCoefficient::zero(), 64, 1e-12, 10);
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    for (std::size_t m = 0; m < tr.size(); m += 16) {
      CHECK(fl1_norm(tr.fields[m] - free_propagate(u0, tr.times[m] + 1.0, 1)) < 1e-13);
    }
  }

  TEST_CASE("Picard preconditions") {
    const Grid g(1, 64, 8.0);
    const auto gnl = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(1.0, 0.5);
    CHECK_THROWS_AS(picard_solve(small_gaussian(g, 0.01), {1, 1.0}, gnl, beta, 63, 1e-8, 10), ValidationError);
    CHECK_THROWS_AS(picard_solve(small_gaussian(g, 0.01), {1, 1.0}, gnl, beta, 32, 1e-8, 10), ValidationError);
    CHECK_THROWS_AS(picard_solve(small_gaussian(g, 0.3), {1, 1.0}, gnl, beta, 64, 1e-8, 10), ThresholdError);
  }

  TEST_CASE("split-step and Picard agree, and Picard contracts") {
    const Grid g(1, 128, 4.0 * 3.141592653589793);
    const auto gnl = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(1.0, 0.5);
    const double d0 = delta0_for(gnl, 1.0, sample(beta, g));
    const auto u0 = small_gaussian(g, 0.9 * d0);
    const auto [pic, rep] = picard_solve(u0, {1, 1.0}, gnl, beta, 256, 1e-12, 100);
    CHECK(rep.converged);
    for (double r : rep.ratios) CHECK(r < 1.0);
    CHECK(rep.wp_bound_holds);
    SplitStepOptions o;
    o.dt = 2e-3;
    o.node_intervals = 2;
    const auto ss = splitstep_solve(u0, {1, 1.0}, gnl, beta, o);
    CHECK(fl1_norm(ss.back() - pic.back()) < 1e-7);
  }

  TEST_CASE("split-step is second order in the step") {
    const Grid g(1, 64, 8.0);
    const auto gnl = AnalyticNonlinearity({1.0, 4.0}, 1.0);
    const auto beta = BumpCoefficient::smooth(5.0, 1.0);
    const auto u0 = small_gaussian(g, 0.4);
    auto run = [&](double dt) {
      SplitStepOptions o;
      o.dt = dt;
      o.node_intervals = 1;
      return splitstep_solve(u0, {1, 1.0}, gnl, beta, o).back();
    };
    const auto ref = run(1e-3 / 8.0);
    const double e1 = fl1_norm(run(4e-3) - ref), e2 = fl1_norm(run(2e-3) - ref);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("split-step with beta = 0 is the free flow") {
    const Grid g(2, 32, 6.0);
    std::mt19937_64 rng(2);
    const auto u0 = 0.05 * testing::random_field(g, rng);
    SplitStepOptions o;
    o.dt = 0.05;
    o.node_intervals = 3;
    const auto tr = splitstep_solve(u0, {2, 1.5}, AnalyticNonlinearity::cubic(1.0), BumpCoefficient::zero(), o);
    for (std::size_t m = 0; m < tr.size(); ++m) {
      CHECK(fl1_norm(tr.fields[m] - free_propagate(u0, tr.times[m] + 1.5, 2)) < 1e-12);
    }
  }

  TEST_CASE("split-step surfaces the nonlinearity domain") {
    const Grid g(1, 32, 4.0);
    SplitStepOptions o;
    o.node_intervals = 1;
    CHECK_THROWS_AS(splitstep_solve(small_gaussian(g, 1.5), {1, 0.5}, AnalyticNonlinearity::cubic(1.0),
                                    BumpCoefficient::smooth(1.0, 1.0), o),
                    DomainError);
  }

  TEST_CASE("checkpointed solve resumes to identical nodes") {
    const Grid g(1, 64, 8.0);
    const auto u0 = small_gaussian(g, 0.1);
    const auto gnl = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(2.0, 1.0);
    const fs::path dir = scratch_dir("ckpt");
    SplitStepOptions o;
    o.dt = 1e-2;
    o.node_intervals = 8;
    o.checkpoint_dir = dir;
    const auto full = splitstep_solve(u0, {1, 1.0}, gnl, beta, o);
    REQUIRE(fs::exists(dir / "manifest.json"));
    nlohmann::json m;
    std::ifstream(dir / "manifest.json") >> m;
    CHECK(m["completed_nodes"] == 9);

    // Pretend the run died after node 4.
    m["completed_nodes"] = 5;
    m["files"] = std::vector<std::string>(m["files"].begin(), m["files"].begin() + 5);
    std::ofstream(dir / "manifest.json") << m.dump();
    for (int k = 5; k <= 8; ++k) fs::remove(dir / ("node_0000" + std::to_string(k) + ".bin"));
    const auto resumed = splitstep_solve(u0, {1, 1.0}, gnl, beta, o);
    REQUIRE(resumed.size() == full.size());
    for (std::size_t k = 0; k < full.size(); ++k) CHECK(resumed.fields[k].samples == full.fields[k].samples);

    // A different datum must not reuse the checkpoints.
    const auto other = splitstep_solve(small_gaussian(g, 0.2), {1, 1.0}, gnl, beta, o);
    CHECK(fl1_norm(other.back() - full.back()) > 1e-3);
    fs::remove_all(dir);
  }

  TEST_CASE("Duhamel defect: integration by parts and sampled-defect routes agree") {
    const auto gnl = AnalyticNonlinearity::cubic(1.0);
    const auto beta = BumpCoefficient::smooth(1.0, 1.0);
    ProbeParams pr;
    pr.p = 1.25;
    pr.eps = 0.2;
    pr.horizon = 2.0;
    pr.a0.amplitude = 0.5;
    const Grid grid = probe_grid(pr);
    const auto times = uniform_nodes(-2.0, 2.0, 128);
    const auto v = ansatz_trajectory(pr, gnl, beta, grid, times);
    const double ibp = duhamel_defect_norm(v, {1, 2.0}, gnl, beta);
    // defect_E needs the open interval; shrink the end nodes inward.
    std::vector<ComplexField> defects;
    for (double t : times) defects.push_back(defect_E(pr, gnl, beta, std::clamp(t, -1.99, 1.99), grid));
    const double sampled = duhamel_defect_norm_from_samples(defects, times, 1);
    CHECK(ibp > 0.0);
    CHECK(sampled == doctest::Approx(ibp).epsilon(0.05));
  }

  TEST_CASE("compare_solutions") {
    const Grid g(1, 16, 1.0);
    const auto a = small_gaussian(g, 1.0);
    const auto c = ComplexField::from_function(g, [](const Point&) { return cplx(0.0, 0.25); });
    const Trajectory u(g, {0.0, 1.0}, {a, a});
    const Trajectory v(g, {0.0, 1.0}, {a, a + c});
    const auto r = compare_solutions(u, v);
    CHECK(r.sup_fl1 == doctest::Approx(0.25));
    CHECK(r.per_node[0] == 0.0);
    const Trajectory w(g, {0.0, 2.0}, {a, a});
    CHECK_THROWS_AS(compare_solutions(u, w), ValidationError);
  }

  TEST_CASE("parallel_for visits each index once and rethrows") {
    std::vector<int> hits(37, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                      if (i == 7) throw DomainError("boom");
                    }),
                    DomainError);
  }
}
