#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <algorithm>

#include "gbvar/moments.hpp"
#include "gbvar/panel_io.hpp"
#include "gbvar/serialize.hpp"

namespace fs = std::filesystem;
using namespace gbvar;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("gbvar_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(GBVAR_CLI) + " " + args + " >" + (dir / "stdout").string() + " 2>" +
                            (dir / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string stderr_text() const { return slurp((dir / "stderr").string()); }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("simulate presets") {
    Sandbox box;
    CHECK(box.run("simulate --preset example1 --n 100 --seed 1 --out " + (box / "p.csv")) == 0);
    const auto panel = load_panel(box / "p.csv");
    CHECK(panel.n == 100);
    CHECK(panel.d == 3);

    CHECK(box.run("simulate --preset dgp1 --n 50 --d 12 --seed 7 --out " + (box / "p.gbvp")) == 0);
    CHECK(Sandbox::slurp(box / "p.gbvp").substr(0, 5) == "GBVP1");
    CHECK(load_panel(box / "p.gbvp").d == 12);

    CHECK(box.run("simulate --preset nope --n 10 --out " + (box / "x.csv")) == 2);
    CHECK(box.stderr_text().find("UnknownPreset") != std::string::npos);
    CHECK(box.run("simulate --n 10 --out " + (box / "x.csv")) == 2);
    CHECK(box.run("simulate --preset dgp1 --n 10") == 2);
    CHECK(box.run("frobnicate") == 2);
  }

  TEST_CASE("parameter files") {
    Sandbox box;
    box.write("params.json", R"({"p":1,"d":1,"coef":[[[0.5]]],"beta":[0.5],"mu_e":[0.5]})");
    CHECK(box.run("simulate --params " + (box / "params.json") + " --n 20 --out " + (box / "a.csv")) == 0);
    box.write("bad.json", R"({"p":1,"d":1,"coef":[[[0.5]]],"beta":[0.6],"mu_e":[0.5]})");
    CHECK(box.run("simulate --params " + (box / "bad.json") + " --n 20 --out " + (box / "b.csv")) == 2);
    CHECK(box.stderr_text().find("ConstraintViolation") != std::string::npos);
    box.write("junk.json", "{not json");
    CHECK(box.run("simulate --params " + (box / "junk.json") + " --n 20 --out " + (box / "c.csv")) == 2);
  }

  TEST_CASE("fit with no penalty matches the dense solve") {
    Sandbox box;
    CHECK(box.run("simulate --preset example1 --n 5000 --seed 2 --out " + (box / "p.csv")) == 0);
    CHECK(box.run("fit --panel " + (box / "p.csv") + " --lambda 0 --bd 0 --tol 1e-14 --out " + (box / "fit.json")) ==
          0);
    const auto fit = fit_from_json(load_json(box / "fit.json"));
    const Matrix ols = yule_walker_ols(sample_moments(load_panel(box / "p.csv")));
    CHECK((fit.estimate - ols).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("fit rejects non-binary panels") {
    Sandbox box;
    box.write("p.csv", "a,b\n0,1\n1,3\n0,0\n");
    CHECK(box.run("fit --panel " + (box / "p.csv") + " --lambda 0 --bd 0 --out " + (box / "f.json")) == 2);
    CHECK(box.stderr_text().find("NotBinary: row 2 column 2") != std::string::npos);
  }

  TEST_CASE("bootstrap levels and single replicate") {
    Sandbox box;
    const std::string panel = box / "p.csv", fit = box / "fit.json";
    CHECK(box.run("simulate --preset dgp1 --d 10 --n 300 --seed 3 --out " + panel) == 0);
    CHECK(box.run("fit --panel " + panel + " --lambda 6.14e-6 --bd 0.131 --out " + fit) == 0);
    CHECK(box.run("bootstrap --panel " + panel + " --fit " + fit + " --alpha 0 --out " + (box / "b.json")) == 2);
    CHECK(box.stderr_text().find("InvalidLevel") != std::string::npos);

    CHECK(box.run("bootstrap --panel " + panel + " --fit " + fit + " --B 1 --h-n 2.333 --out " + (box / "b.json") +
                  " --ci-out " + (box / "ci.csv")) == 0);
    const Json j = load_json(box / "b.json");
    CHECK(j["B"] == 1);
    CHECK(j["critical_value"].get<double>() == j["psi_stars"][0].get<double>());
    CHECK(Sandbox::slurp(box / "ci.csv").rfind("i,j,lower,upper,selected\n", 0) == 0);

    CHECK(box.run("simulate --preset dgp1 --d 11 --n 300 --out " + (box / "q.csv")) == 0);
    CHECK(box.run("bootstrap --panel " + (box / "q.csv") + " --fit " + fit + " --B 5 --out " + (box / "c.json")) == 2);
  }

  TEST_CASE("config file supplies flags and the command line wins") {
    Sandbox box;
    box.write("cfg.json", R"({"preset":"dgp1","d":6,"n":40,"seed":5,"out":")" + (box / "cfg.csv") + R"("})");
    CHECK(box.run("simulate --config " + (box / "cfg.json")) == 0);
    CHECK(box.run("simulate --preset dgp1 --d 6 --n 40 --seed 5 --out " + (box / "flags.csv")) == 0);
    CHECK(Sandbox::slurp(box / "cfg.csv") == Sandbox::slurp(box / "flags.csv"));

    CHECK(box.run("simulate --config " + (box / "cfg.json") + " --seed 6 --out " + (box / "override.csv")) == 0);
    CHECK(box.run("simulate --preset dgp1 --d 6 --n 40 --seed 6 --out " + (box / "flags6.csv")) == 0);
    CHECK(Sandbox::slurp(box / "override.csv") == Sandbox::slurp(box / "flags6.csv"));
    CHECK(Sandbox::slurp(box / "override.csv") != Sandbox::slurp(box / "cfg.csv"));

    box.write("tune.json", R"({"lambdas":[1e-6,1e-4],"thresholds":[0.1,0.2],"criterion":"tau1"})");
    CHECK(box.run("tune --panel " + (box / "cfg.csv") + " --config " + (box / "tune.json") + " --out " +
                  (box / "t.csv")) == 0);
    const std::string table = Sandbox::slurp(box / "t.csv");
    CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  }

  TEST_CASE("ingest modes") {
    Sandbox box;
    box.write("prices.csv", "p\n10\n11\n10.5\n10.5\n");
    CHECK(box.run("ingest --mode advance-decline --input " + (box / "prices.csv") + " --out " + (box / "o.csv")) == 0);
    CHECK(Sandbox::slurp(box / "o.csv") == "p\n1\n0\n0\n");
    box.write("flows.csv", "f\n0\n5\n5.4\n6.1\n");
    CHECK(box.run("ingest --mode growth-threshold --pct 10 --input " + (box / "flows.csv") + " --out " +
                  (box / "g.csv")) == 0);
    CHECK(Sandbox::slurp(box / "g.csv") == "f\n1\n0\n1\n");
    box.write("bad.csv", "f\n1\nx\n");
    CHECK(box.run("ingest --mode advance-decline --input " + (box / "bad.csv") + " --out " + (box / "h.csv")) == 2);
    CHECK(box.stderr_text().find("NonNumericCell") != std::string::npos);
    CHECK(box.run("ingest --mode sideways --input " + (box / "prices.csv") + " --out " + (box / "h.csv")) == 2);
  }

  TEST_CASE("bench csv") {
    Sandbox box;
    CHECK(box.run("bench --dgp dgp3 --n 300 --d 10 --reps 1 --B 20 --seed 1 --no-baselines --out " + (box / "b.csv")) ==
          0);
    const std::string text = Sandbox::slurp(box / "b.csv");
    CHECK(text.rfind("dgp,method,reps,r1,r2,kappa,kappa_zero_share,coverage,ci_length\ndgp3,post-selection,1,", 0) ==
          0);
    CHECK(box.stderr_text().find("21 estimator evaluations") != std::string::npos);
  }
}
