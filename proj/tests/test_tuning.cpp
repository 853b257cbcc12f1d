#include <doctest.h>

#include <random>

#include "gbvar/error.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/simulator.hpp"
#include "gbvar/sparse.hpp"
#include "gbvar/tuning.hpp"

using namespace gbvar;

namespace {

BinaryPanel dgp1_panel(int d, std::size_t n, std::uint64_t seed) {
  SimConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return simulate(dgp_preset("dgp1", d), cfg);
}

TuneGrid point_grid(double lambda, double bd) {
  TuneGrid g;
  g.lambdas = {lambda};
  g.thresholds = {bd};
  return g;
}

}  // namespace

TEST_SUITE("tuning") {
  TEST_CASE("norms") {
    Matrix m(2, 2);
    m << 1, -2, 3, 4;
    CHECK(matrix_one_norm(m) == 6.0);
    const double exact = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
    CHECK(spectral_norm(m) == doctest::Approx(exact).epsilon(1e-8));
    CHECK(spectral_norm(Matrix::Zero(3, 3)) == 0.0);
  }

  TEST_CASE("default grid brackets the reproduction settings") {
    const auto g = TuneGrid::defaults();
    CHECK(g.lambdas.size() == 15);
    CHECK(g.thresholds.size() == 16);
    CHECK(g.lambdas.front() == doctest::Approx(1e-7));
    CHECK(g.lambdas.back() == doctest::Approx(1e-1));
    CHECK(g.thresholds.front() == 0.0);
    CHECK(g.thresholds.back() == doctest::Approx(0.3));
    CHECK(g.criterion == TuneCriterion::tau2);
    CHECK(g.train_fraction == 0.75);
  }

  TEST_CASE("single point grid") {
    const auto panel = dgp1_panel(10, 400, 1);
    const auto r = tune(panel, point_grid(1e-5, 0.1));
    CHECK(r.lambda == 1e-5);
    CHECK(r.threshold == 0.1);
    REQUIRE(r.table.size() == 1);
    CHECK(r.score == r.table[0].tau2);
  }

  TEST_CASE("chronological split and scores") {
    const auto panel = dgp1_panel(8, 401, 2);
    const auto r = tune(panel, point_grid(1e-5, 0.1));
    const std::size_t n_train = 300;  // floor(0.75 * 401)
    const auto train = sample_moments(panel.slice(0, n_train));
    const auto test = sample_moments(panel.slice(n_train, 401 - n_train));
    LassoConfig cfg;
    cfg.lambda = 1e-5;
    const Matrix a = post_select_fit(train, cfg, 0.1).estimate;
    const Matrix resid = test.sigma1 - a * test.sigma0;
    CHECK(r.table[0].tau1 == doctest::Approx(matrix_one_norm(resid)).epsilon(1e-12));
    CHECK(r.table[0].tau2 == doctest::Approx(spectral_norm(resid)).epsilon(1e-9));
  }

  TEST_CASE("zero model scores the raw test autocovariance") {
    const auto panel = dgp1_panel(8, 400, 3);
    const auto r = tune(panel, point_grid(1e6, 0.0));
    const auto test = sample_moments(panel.slice(300, 100));
    CHECK(r.score == doctest::Approx(spectral_norm(test.sigma1)).epsilon(1e-9));
  }

  TEST_CASE("table covers the grid and ties prefer sparser models") {
    const auto panel = dgp1_panel(8, 400, 4);
    TuneGrid g;
    g.lambdas = {1e-6, 1e3, 1e4};
    g.thresholds = {0.0, 0.05, 5.0, 6.0};
    g.criterion = TuneCriterion::tau1;
    const auto r = tune(panel, g);
    REQUIRE(r.table.size() == 12);
    CHECK(r.table[4].lambda == 1e3);
    CHECK(r.table[4].threshold == 0.0);
    double best = 1e300;
    for (const auto& s : r.table) best = std::min(best, s.tau1);
    CHECK(r.score == best);

    // Every huge-lambda or huge-threshold cell is the same zero model.
    TuneGrid zero = g;
    zero.lambdas = {1e3, 1e4};
    const auto z = tune(panel, zero);
    CHECK(z.lambda == 1e4);
    CHECK(z.threshold == 6.0);
  }

  TEST_CASE("selection is near the reproduction settings") {
    const auto panel = dgp1_panel(20, 1500, 5);
    const auto reference = tune(panel, point_grid(6.14e-6, 0.131));
    const auto selected = tune(panel, TuneGrid::defaults());
    CHECK(selected.score <= 1.1 * reference.score);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(tune(dgp1_panel(4, 4, 1), point_grid(1e-5, 0.1)), PanelTooShort);
    TuneGrid empty;
    CHECK_THROWS_AS(tune(dgp1_panel(4, 100, 1), empty), InvalidArgument);
    auto bad = point_grid(1e-5, 0.1);
    bad.train_fraction = 1.0;
    CHECK_THROWS_AS(tune(dgp1_panel(4, 100, 1), bad), InvalidArgument);
  }
}
