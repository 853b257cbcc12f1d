#include <doctest.h>

#include <random>

#include "gbvar/bootstrap.hpp"
#include "gbvar/error.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/simulator.hpp"
#include "gbvar/sparse.hpp"

using namespace gbvar;

namespace {

struct Fixture {
  BinaryPanel panel;
  LagCovariances cov;
  PostSelectionFit fit;
};

Fixture dgp1_fixture(int d, std::size_t n, std::uint64_t seed) {
  SimConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  Fixture f;
  f.panel = simulate(dgp_preset("dgp1", d), cfg);
  f.cov = sample_moments(f.panel);
  LassoConfig lasso;
  lasso.lambda = 6.14e-6;
  f.fit = post_select_fit(f.cov, lasso, 0.131);
  return f;
}

/// Alternating 0/1 series: y_{t+1} = -y_t, so A = -1 leaves no residual.
Fixture perfect_fixture() {
  Fixture f;
  f.panel = BinaryPanel(40, 1);
  for (std::size_t t = 0; t < 40; ++t) f.panel(t, 0) = t % 2;
  f.cov = sample_moments(f.panel);
  f.fit.lasso = Matrix::Constant(1, 1, -1.0);
  f.fit.estimate = Matrix::Constant(1, 1, -1.0);
  f.fit.supports = {{0}};
  return f;
}

Kernel box_kernel() { return {"box", [](double x) { return std::abs(x) < 1.5 ? 1.0 : 0.0; }}; }

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("gaussian kernel conditions") {
    const auto k = gaussian_kernel();
    CHECK(k(0.0) == 1.0);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int i = 0; i < 100; ++i) {
      const double x = u(gen);
      CHECK(k(x) == k(-x));
    }
    for (double xi = -10; xi <= 10; xi += 0.25) CHECK(kernel_fourier_transform(k, xi) >= -1e-9);
    // Closed form: sqrt(2 pi) exp(-2 pi^2 xi^2).
    CHECK(kernel_fourier_transform(k, 0.0) == doctest::Approx(std::sqrt(2 * M_PI)).epsilon(1e-9));
    CHECK(check_kernel(k).ok);
  }

  TEST_CASE("kernel lookup and rejection") {
    CHECK(kernel_by_name("gaussian").name == "gaussian");
    CHECK_THROWS_AS(kernel_by_name("bartlett"), InvalidArgument);
    const auto check = check_kernel(box_kernel());
    CHECK_FALSE(check.ok);
    CHECK_FALSE(check.failure.empty());
  }
}

TEST_SUITE("bootstrap") {
  TEST_CASE("multipliers: tiny bandwidth is white noise") {
    const MultiplierSampler sampler(2, 1e-6, gaussian_kernel());
    CHECK(sampler.jitter() == 0.0);
    const Matrix e = sampler.draw_batch(5, 0, 100000);
    const double corr = e.row(0).dot(e.row(1)) / std::sqrt(e.row(0).squaredNorm() * e.row(1).squaredNorm());
    CHECK(std::abs(corr) < 0.01);
  }

  TEST_CASE("multipliers: unit bandwidth correlation and variance") {
    const MultiplierSampler sampler(2, 1.0, gaussian_kernel());
    const Matrix e = sampler.draw_batch(6, 0, 100000);
    const double draws = e.cols();
    CHECK(std::abs(e.row(0).squaredNorm() / draws - 1.0) < 0.01);
    CHECK(std::abs(e.row(1).squaredNorm() / draws - 1.0) < 0.01);
    CHECK(std::abs(e.row(0).dot(e.row(1)) / draws - std::exp(-0.5)) < 0.01);

    CounterRng rng(CounterRng::derive_key(6, 3));
    const Vector single = sampler.draw(rng);
    CHECK((single - e.col(3)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("toeplitz cholesky jitter") {
    for (std::size_t n : {50, 300, 1500}) {
      for (double h : {0.5, 1.0, 2.333}) CHECK(MultiplierSampler(n, h, gaussian_kernel()).jitter() == 0.0);
      for (double h : {3.368, std::cbrt(double(n)), double(n)}) {
        const MultiplierSampler s(n, h, gaussian_kernel());
        CHECK(s.jitter() <= 1e-8);
        const Matrix t = kernel_toeplitz(n, h, gaussian_kernel());
        CHECK((s.factor() * s.factor().transpose() - t).cwiseAbs().maxCoeff() <= 1e-8 + 1e-12);
      }
    }
    CHECK_THROWS_AS(MultiplierSampler(20, 1.0, box_kernel()), CovarianceNotPSD);
    CHECK_THROWS_AS(MultiplierSampler(20, 0.0, gaussian_kernel()), InvalidArgument);
  }

  TEST_CASE("second-order residual closed forms") {
    Matrix x(2, 1);
    x << 0, 1;
    const auto zero = second_order_residuals(x, Matrix::Zero(1, 1));
    REQUIRE(zero.size() == 1);
    CHECK(zero.at(0)(0, 0) == -0.25);
    const auto cancel = second_order_residuals(x, Matrix::Constant(1, 1, -1.0));
    CHECK(cancel.at(0)(0, 0) == 0.0);

    SimConfig cfg;
    cfg.n = 50;
    const auto panel = simulate(dgp_preset("dgp1", 4), cfg);
    const auto res = second_order_residuals(panel, Matrix::Zero(4, 4));
    CHECK(res.size() == 49);
    const Matrix y = panel.as_matrix().rowwise() - panel.as_matrix().colwise().mean();
    for (std::size_t t = 0; t + 1 < 50; ++t) {
      const Matrix expected = y.row(t + 1).transpose() * y.row(t);
      CHECK((res.at(t) - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  TEST_CASE("critical value order statistic") {
    const std::vector<double> psi{1, 2, 3, 4};
    CHECK(critical_value(psi, 0.25) == 3);
    CHECK(critical_value(psi, 0.05) == 4);
    CHECK(critical_value(psi, 0.75) == 1);
    CHECK(critical_value(std::vector<double>{7.5}, 0.05) == 7.5);
    double previous = 1e300;
    for (double a = 0.01; a < 1.0; a += 0.01) {
      const double c = critical_value(psi, a);
      CHECK(c <= previous);
      CHECK(c >= 0);
      previous = c;
    }
  }

  TEST_CASE("config validation") {
    BootstrapConfig cfg;
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidLevel);
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidLevel);
    cfg.alpha = 0.05;
    cfg.replicates = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    CHECK(default_bandwidth(1000) == doctest::Approx(10.0));
  }

  TEST_CASE("no residual means no bootstrap spread") {
    const auto f = perfect_fixture();
    BootstrapConfig cfg;
    cfg.replicates = 20;
    cfg.bandwidth = 2.0;
    const auto result = bootstrap_run(f.panel, f.fit, f.cov, cfg);
    for (double psi : result.psi_stars) CHECK(psi == 0.0);
    CHECK(result.critical_value == 0.0);
    const auto region = simultaneous_ci(result, f.fit);
    CHECK(region.lower == f.fit.estimate);
    CHECK(region.upper == f.fit.estimate);
  }

  TEST_CASE("linear projection equals the literal refit") {
    const auto f = dgp1_fixture(12, 300, 3);
    REQUIRE(f.fit.selected_count() > 0);
    const auto res = second_order_residuals(f.panel, f.fit.estimate);
    const auto proj = root_projection(res, f.fit, f.cov);
    CHECK(proj.entries.size() == f.fit.selected_count());
    const MultiplierSampler sampler(300, 2.333, gaussian_kernel());
    const Matrix e = sampler.draw_batch(1, 0, 8);
    const Matrix fast = bootstrap_roots(proj, e);
    const Matrix slow = bootstrap_roots_reference(res, f.fit, f.cov, e, proj.entries);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-9);

    // Every (i, j): unselected entries stay exactly zero in each replicate.
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) all.emplace_back(i, j);
    const Matrix full = bootstrap_roots_reference(res, f.fit, f.cov, e, all);
    for (std::size_t k = 0; k < all.size(); ++k) {
      const auto& s = f.fit.supports[all[k].first];
      if (!std::binary_search(s.begin(), s.end(), all[k].second)) CHECK(full.col(k).isZero(0.0));
    }
  }

  TEST_CASE("roots are centred and match the analytic covariance") {
    const auto f = dgp1_fixture(4, 120, 4);
    const auto res = second_order_residuals(f.panel, f.fit.estimate);
    const auto proj = root_projection(res, f.fit, f.cov);
    const double h = 2.0;
    const MultiplierSampler sampler(120, h, gaussian_kernel());
    const int draws = 20000;
    const Matrix roots = bootstrap_roots(proj, sampler.draw_batch(11, 0, draws));
    const Matrix analytic = analytic_root_covariance(proj, h, gaussian_kernel());
    const Eigen::Index m = roots.cols();
    const Matrix mc = roots.transpose() * roots / draws;
    for (Eigen::Index a = 0; a < m; ++a) {
      const double sd = std::sqrt(analytic(a, a));
      CHECK(std::abs(roots.col(a).mean()) <= 4 * sd / std::sqrt(double(draws)));
      for (Eigen::Index b = a; b < m; ++b) {
        const double se = std::sqrt((analytic(a, a) * analytic(b, b) + analytic(a, b) * analytic(a, b)) / draws);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(mc(a, b) - analytic(a, b)) <= 3 * se);
      }
    }
  }

  TEST_CASE("bootstrap run is deterministic and counted") {
    const auto f = dgp1_fixture(10, 300, 5);
    BootstrapConfig cfg;
    cfg.replicates = 50;
    cfg.seed = 77;
    cfg.bandwidth = 2.333;
    const auto before = bootstrap_replicate_counter();
    const auto a = bootstrap_run(f.panel, f.fit, f.cov, cfg);
    CHECK(bootstrap_replicate_counter() - before == 50);
    const auto b = bootstrap_run(f.panel, f.fit, f.cov, cfg);
    CHECK(a.psi_stars == b.psi_stars);
    CHECK(a.critical_value == b.critical_value);
    CHECK(std::is_sorted(a.psi_stars.begin(), a.psi_stars.end()));
    CHECK(a.ci_halfwidth == doctest::Approx(a.critical_value / std::sqrt(300.0)));
    CHECK(a.ci_halfwidth > 0);

    cfg.seed = 78;
    CHECK(bootstrap_run(f.panel, f.fit, f.cov, cfg).psi_stars != a.psi_stars);

    cfg.bandwidth = 0.0;
    CHECK(bootstrap_run(f.panel, f.fit, f.cov, cfg).bandwidth == doctest::Approx(std::cbrt(300.0)));
  }

  TEST_CASE("confidence region and tests") {
    const auto f = dgp1_fixture(10, 300, 6);
    BootstrapConfig cfg;
    cfg.replicates = 100;
    cfg.bandwidth = 2.333;
    const auto result = bootstrap_run(f.panel, f.fit, f.cov, cfg);
    const auto region = simultaneous_ci(result, f.fit);
    CHECK(((region.upper - region.lower).array() - 2 * result.ci_halfwidth).abs().maxCoeff() < 1e-15);
    CHECK(region.contains(f.fit.estimate));

    const auto same = hypothesis_test(result, f.fit, f.fit.estimate);
    CHECK(same.statistic == 0.0);
    CHECK_FALSE(same.reject);

    Matrix shifted = f.fit.estimate;
    const int i = 0, j = f.fit.supports[0].front();
    shifted(i, j) += 10 * result.critical_value / std::sqrt(300.0);
    const auto far = hypothesis_test(result, f.fit, shifted);
    CHECK(far.reject);
    CHECK(far.statistic == doctest::Approx(10 * result.critical_value));
    CHECK_FALSE(region.contains(shifted));

    CHECK_THROWS_AS(hypothesis_test(result, f.fit, Matrix::Zero(3, 3)), ShapeMismatch);
  }

  TEST_CASE("long-run covariance estimate") {
    CHECK(longrun_cov_estimate(Matrix::Zero(50, 2), 3.0, gaussian_kernel()).isZero());

    std::mt19937_64 gen(9);
    std::normal_distribution<double> z;
    Matrix iid(5000, 2);
    for (Eigen::Index t = 0; t < iid.rows(); ++t) iid.row(t) << z(gen), z(gen);
    const Matrix est = longrun_cov_estimate(iid, 1e-6, gaussian_kernel());
    const Matrix plain = iid.transpose() * iid / 5000.0;
    CHECK((est - plain).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(est == est.transpose());

    const std::size_t n = 20000;
    Matrix ar(n, 1);
    double x = 0;
    for (std::size_t t = 0; t < 1000 + n; ++t) {
      x = 0.5 * x + z(gen);
      if (t >= 1000) ar(t - 1000, 0) = x;
    }
    const double lrv = longrun_cov_estimate(ar, std::cbrt(double(n)), gaussian_kernel())(0, 0);
    CHECK(std::abs(lrv - 4.0) < 0.4);
  }
}
