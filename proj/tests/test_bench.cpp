#include <doctest.h>

#include <omp.h>

#include <sstream>

#include "gbvar/bench.hpp"
#include "gbvar/error.hpp"

using namespace gbvar;

namespace {

BenchConfig small_config(int reps) {
  BenchConfig cfg;
  cfg.dgp = "dgp1";
  cfg.n = 300;
  cfg.d = 10;
  cfg.reps = reps;
  cfg.replicates = 40;
  cfg.seed = 3;
  cfg.burn_in = 200;
  return cfg;
}

std::string csv(const BenchReport& r) {
  std::ostringstream out;
  write_bench_csv(r, out);
  return out.str();
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("reference settings") {
    const auto s1 = reproduction_settings("dgp1");
    CHECK(s1.lambda == 6.14e-6);
    CHECK(s1.threshold == 0.131);
    CHECK(s1.bandwidth == 2.333);
    CHECK(reproduction_settings("dgp2").bandwidth == 3.368);
    CHECK(reproduction_settings("dgp3").threshold == 0.095);
    CHECK_THROWS_AS(reproduction_settings("dgp9"), UnknownPreset);
  }

  TEST_CASE("evaluation count is reps times (B + 1)") {
    const auto report = run_bench(small_config(3));
    CHECK(report.replicates.size() == 3);
    CHECK(report.estimator_evaluations == 3u * (40u + 1u));
    for (const auto& rep : report.replicates) {
      CHECK(rep.lasso_converged);
      CHECK(rep.max_kkt_violation <= 1e-6);
      CHECK(rep.ci_length == doctest::Approx(2 * rep.critical_value / std::sqrt(300.0)));
    }
  }

  TEST_CASE("single replicate report") {
    auto cfg = small_config(1);
    cfg.baselines = false;
    const auto report = run_bench(cfg);
    REQUIRE(report.rows.size() == 1);
    REQUIRE(report.rows[0].coverage.has_value());
    const double c = *report.rows[0].coverage;
    CHECK((c == 0.0 || c == 1.0));
    CHECK(report.rows[0].reps == 1);
    const std::string text = csv(report);
    CHECK(text.rfind("dgp,method,reps,r1,r2,kappa,kappa_zero_share,coverage,ci_length\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  }

  TEST_CASE("baseline rows leave bootstrap columns empty") {
    const auto report = run_bench(small_config(2));
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].method == "post-selection");
    CHECK(report.rows[1].method == "lasso");
    CHECK(report.rows[2].method == "threshold-lasso");
    CHECK_FALSE(report.rows[1].coverage.has_value());
    CHECK(report.rows[1].kappa > report.rows[0].kappa);
  }

  TEST_CASE("output is independent of the thread count") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::string one = csv(run_bench(small_config(4)));
    omp_set_num_threads(4);
    const std::string four = csv(run_bench(small_config(4)));
    omp_set_num_threads(saved);
    CHECK(one == four);
    CHECK(one == csv(run_bench(small_config(4))));
  }
}
