#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "rbfpu/data.hpp"
#include "rbfpu/model_io.hpp"
#include "rbfpu/pu.hpp"

using namespace rbfpu;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = tools::run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path workdir() {
  auto dir = fs::temp_directory_path() / "rbfpu_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

// value column of an eval --output file
std::vector<double> last_column(const std::string& p) {
  std::ifstream in(p);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    v.push_back(std::stod(line.substr(line.rfind(' ') + 1)));
  }
  return v;
}

double metric(const std::string& out, const std::string& name) {
  const auto at = out.find(name + " ");
  REQUIRE(at != std::string::npos);
  return std::stod(out.substr(at + name.size() + 1));
}

// compare rows without the timing column
std::string strip_times(const std::string& table) {
  std::istringstream in(table);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(' ')) + "\n";
  return out;
}

}  // namespace

TEST_CASE("fit writes a model and a report") {
  const auto model = path("fit_model.txt"), report = path("fit_report.csv");
  fs::remove(model);
  fs::remove(report);
  auto r = run({"fit", "--halton", "289", "--dim", "2", "--function", "f1", "--kernel", "imq",
                "--mode", "bloocv", "--model", model, "--report", report});
  CHECK(r.status == 0);
  CHECK(r.out.find("N 289 d 64 mode bloocv") == 0);
  CHECK(fs::exists(model));
  auto text = slurp(report);
  CHECK(text.rfind("centre_1,centre_2,delta_j1,radius,epsilon,local_count,loocv_error", 0) == 0);
  CHECK(load_model(model).subdomains().size() == 64);
}

TEST_CASE("configuration errors exit nonzero and leave no model") {
  const auto model = path("bad_model.txt");
  fs::remove(model);
  auto r = run({"fit", "--halton", "100", "--mode", "classic", "--model", model});
  CHECK(r.status != 0);
  CHECK(r.err.find("epsilon") != std::string::npos);
  CHECK_FALSE(fs::exists(model));

  r = run({"fit", "--input", path("missing.txt"), "--model", model});
  CHECK(r.status != 0);
  CHECK_FALSE(fs::exists(model));

  r = run({"fit", "--halton", "100", "--clustered", "100", "--model", model});
  CHECK(r.status != 0);
  r = run({"fit", "--model", model});
  CHECK(r.status != 0);
  r = run({"fit", "--halton", "100", "--kernel", "gauss", "--model", model});
  CHECK(r.status != 0);
  r = run({"fit", "--halton", "289", "--max-local-points", "5", "--model", model});
  CHECK(r.status != 0);
  CHECK_FALSE(fs::exists(model));
  r = run({"fit", "--halton", "100", "--bogus"});
  CHECK(r.status != 0);
  r = run({});
  CHECK(r.status != 0);
}

TEST_CASE("eval reproduces the nodes and reports metrics") {
  const auto model = path("eval_model.txt"), report = path("eval_report.csv");
  REQUIRE(run({"fit", "--halton", "289", "--model", model, "--report", report}).status == 0);

  auto nodes = halton(289, 2);
  sample(nodes, TestFunction::f1);
  write_points(path("nodes.txt"), nodes);
  auto r = run({"eval", "--model", model, "--points", path("nodes.txt")});
  REQUIRE(r.status == 0);
  CHECK(metric(r.out, "MAE") <= 1e-8 * 2.0);

  const auto out = path("grid_values.txt");
  r = run({"eval", "--model", model, "--grid", "40", "--unit-box", "--function", "f1",
           "--output", out});
  REQUIRE(r.status == 0);
  const auto predicted = last_column(out);
  REQUIRE(predicted.size() == 1600);
  auto grid = uniform_grid(40, std::vector<double>{0, 0}, std::vector<double>{1, 1});
  std::vector<double> truth(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) truth[i] = test_function(TestFunction::f1, grid.point(i));
  const auto m = rmse_mae(predicted, truth);
  CHECK(metric(r.out, "RMSE") == doctest::Approx(m.rmse).epsilon(1e-6));
  CHECK(metric(r.out, "MAE") == doctest::Approx(m.mae).epsilon(1e-6));

  r = run({"eval", "--model", model, "--grid", "1"});
  CHECK(r.status == 0);
  CHECK(r.out.find("points 1") == 0);

  write_points(path("far.txt"), PointSet::from_rows({{5.0, 5.0}}));
  r = run({"eval", "--model", model, "--points", path("far.txt")});
  CHECK(r.status != 0);
  CHECK(r.err.find("(5, 5)") != std::string::npos);
}

TEST_CASE("classic mode equals the single-cell search") {
  const auto a = path("embed_classic.txt"), b = path("embed_bloocv.txt");
  REQUIRE(run({"fit", "--halton", "500", "--mode", "classic", "--epsilon", "3", "--model", a,
               "--report", path("embed_a.csv")})
              .status == 0);
  REQUIRE(run({"fit", "--halton", "500", "--mode", "bloocv", "--radii", "1", "--h", "1",
               "--epsilons", "3", "--no-grow", "--model", b, "--report", path("embed_b.csv")})
              .status == 0);
  REQUIRE(run({"eval", "--model", a, "--unit-box", "--output", path("ea.txt")}).status == 0);
  REQUIRE(run({"eval", "--model", b, "--unit-box", "--output", path("eb.txt")}).status == 0);
  auto va = last_column(path("ea.txt")), vb = last_column(path("eb.txt"));
  REQUIRE(va.size() == vb.size());
  for (std::size_t i = 0; i < va.size(); ++i) CHECK(std::abs(va[i] - vb[i]) <= 1e-12);
}

TEST_CASE("compare prints one row per mode and is deterministic") {
  std::vector<std::string> args{"compare", "--clustered", "289", "--kernel", "wendland_c6",
                                "--epsilon", "0.5", "--threads", "2"};
  auto r1 = run(args);
  REQUIRE(r1.status == 0);
  auto r2 = run(args);
  CHECK(strip_times(r1.out) == strip_times(r2.out));
  CHECK(r1.out.rfind("N mode RMSE MAE time_s\n289 classic ", 0) == 0);
  CHECK(r1.out.find("\n289 bloocv ") != std::string::npos);

  auto h = run({"compare", "--halton", "400", "--epsilon", "0.6", "--holdout", "5"});
  CHECK(h.status == 0);
  CHECK(h.out.find("320 classic") != std::string::npos);

  CHECK(run({"compare", "--halton", "100"}).status != 0);
}

TEST_CASE("generated inputs give identical files across runs") {
  for (int i = 0; i < 2; ++i) {
    REQUIRE(run({"fit", "--clustered", "200", "--kernel", "matern_c2", "--model",
                 path("det" + std::to_string(i) + ".txt"), "--report",
                 path("det" + std::to_string(i) + ".csv"), "--threads", std::to_string(1 + 2 * i)})
                .status == 0);
  }
  CHECK(slurp(path("det0.txt")) == slurp(path("det1.txt")));
  CHECK(slurp(path("det0.csv")) == slurp(path("det1.csv")));
}

TEST_CASE("config file values yield to explicit flags") {
  const auto cfg = path("run.cfg");
  std::ofstream(cfg) << "# defaults\nhalton = 289\nmode=classic\nepsilon=0.6\nno-grow=true\n";
  const auto model = path("cfg_model.txt");
  auto r = run({"fit", "--config", cfg, "--model", model, "--report", path("cfg.csv")});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("mode classic") != std::string::npos);
  CHECK(load_model(model).subdomains()[0].epsilon == 0.6);

  r = run({"fit", "--config", cfg, "--epsilon", "2.5", "--model", model, "--report",
           path("cfg.csv")});
  REQUIRE(r.status == 0);
  CHECK(load_model(model).subdomains()[0].epsilon == 2.5);

  CHECK(run({"fit", "--config", path("nope.cfg")}).status != 0);
}

TEST_CASE("file inputs") {
  auto pts = halton(300, 2);
  write_points(path("novalues.txt"), pts);
  const auto model = path("file_model.txt");
  auto r = run({"fit", "--input", path("novalues.txt"), "--model", model, "--report",
                path("file.csv")});
  CHECK(r.status != 0);
  r = run({"fit", "--input", path("novalues.txt"), "--function", "f2", "--model", model,
           "--report", path("file.csv")});
  CHECK(r.status == 0);
}

TEST_CASE("bench-ips prints timing rows") {
  auto r = run({"bench-ips", "--sizes", "2000,5000", "--repeats", "1"});
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("N t_ips t_sps ratio\n2000 ", 0) == 0);
  CHECK(r.out.find("\n5000 ") != std::string::npos);
  CHECK(run({"bench-ips", "--sizes", "12x"}).status != 0);
}

TEST_CASE("the executable reports failures through its exit status") {
  const char* tool = std::getenv("RBFPU_TOOL");
  if (!tool) return;
  const std::string quiet = " > /dev/null 2>&1";
  CHECK(std::system((std::string(tool) + " --help" + quiet).c_str()) == 0);
  CHECK(std::system((std::string(tool) + " fit --mode classic --halton 50" + quiet).c_str()) != 0);
}
