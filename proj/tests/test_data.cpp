#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "rbfpu/data.hpp"
#include "rbfpu/errors.hpp"

using namespace rbfpu;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rbfpu_test_data";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("Halton points") {
  auto a = halton(1, 1);
  CHECK(a.coord(0, 0) == 0.5);
  auto b = halton(3, 1);
  CHECK(b.coord(0, 0) == 0.5);
  CHECK(b.coord(1, 0) == 0.25);
  CHECK(b.coord(2, 0) == 0.75);
  auto c = halton(2, 2);
  CHECK(c.coord(0, 0) == 0.5);
  CHECK(c.coord(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c.coord(1, 0) == 0.25);
  CHECK(c.coord(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(halton(500, 3).coords() == halton(500, 3).coords());
  CHECK_THROWS_AS(halton(0, 2), InputError);
  CHECK_THROWS_AS(halton(5, 11), InputError);
}

TEST_CASE("clustered points") {
  const std::vector<double> focus{0.5, 0.5};
  auto one = clustered(1, focus);
  REQUIRE(one.size() == 1);
  CHECK(one.coord(0, 0) == 0.5);

  for (std::size_t n : {2u, 17u, 289u, 1000u}) {
    auto p = clustered(n, focus);
    CHECK(p.size() == n);
    for (double v : p.coords()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  auto p1 = clustered(10, std::vector<double>{0.3});
  CHECK(p1.size() == 10);
  auto p3 = clustered(200, std::vector<double>{0.4, 0.5, 0.6});
  CHECK(p3.size() == 200);
  CHECK(clustered(289, focus).coords() == clustered(289, focus).coords());
  CHECK_THROWS_AS(clustered(10, std::vector<double>{0.0, 0.5}), InputError);
  CHECK_THROWS_AS(clustered(10, focus, 1.5), InputError);
}

TEST_CASE("clustered data is far from quasi-uniform, Halton is not") {
  auto c = clustered(289, std::vector<double>{0.5, 0.5});
  auto rc = fill_separation(c);
  MESSAGE("clustered 289: h/q = " << rc.fill / rc.separation);
  CHECK(rc.fill / rc.separation >= 30.0);

  auto h = halton(289, 2);
  auto rh = fill_separation(h);
  CHECK(rh.fill / rh.separation < 12.0);
}

TEST_CASE("test functions") {
  const double mid[] = {0.5, 0.5};
  CHECK(test_function(TestFunction::f1, mid) == 1.0);
  for (double t : {0.0, 0.3, 1.0}) {
    const double e1[] = {t, 0.0}, e2[] = {0.0, t}, e3[] = {1.0, t}, e4[] = {t, 1.0};
    CHECK(test_function(TestFunction::f1, e1) == 0.0);
    CHECK(test_function(TestFunction::f1, e2) == 0.0);
    CHECK(test_function(TestFunction::f1, e3) == 0.0);
    CHECK(test_function(TestFunction::f1, e4) == 0.0);
  }
  const double top[] = {0.5, 1.0};
  CHECK(test_function(TestFunction::f2, top) == doctest::Approx(0.5 * std::pow(std::cos(1.0), 4)));
  CHECK(parse_test_function("f2") == TestFunction::f2);
  CHECK_THROWS(parse_test_function("f3"));
  const double three[] = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(test_function(TestFunction::f1, three), InputError);
}

TEST_CASE("error metrics") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  auto m = rmse_mae(a, a);
  CHECK(m.rmse == 0.0);
  CHECK(m.mae == 0.0);
  m = rmse_mae(std::vector<double>{3, 4}, std::vector<double>{0, 0});
  CHECK(m.rmse == doctest::Approx(std::sqrt(12.5)));
  CHECK(m.mae == 4.0);
  m = rmse_mae(std::vector<double>{0.75}, std::vector<double>{1.0});
  CHECK(m.rmse == 0.25);
  CHECK(m.mae == 0.25);
  CHECK_THROWS_AS(rmse_mae(a, std::vector<double>{1.0}), InputError);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(20), y(20);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng);
    auto r = rmse_mae(x, y);
    CHECK(r.rmse <= r.mae);
  }
}

TEST_CASE("fill distance and separation") {
  auto two = PointSet::from_rows({{0.0, 0.0}, {1.0, 0.0}});
  CHECK(fill_separation(two).separation == 0.5);

  auto g = uniform_grid(5, std::vector<double>{0, 0}, std::vector<double>{1, 1});
  auto r = fill_separation(g, 401);  // probe spacing divides the cell half-width
  CHECK(r.separation == doctest::Approx(0.125));
  CHECK(r.fill == doctest::Approx(0.25 * std::sqrt(2.0) / 2.0).epsilon(1e-9));

  auto h289 = fill_separation(halton(289, 2));
  CHECK(h289.fill == doctest::Approx(7.46e-2).epsilon(0.1));
  CHECK(h289.separation == doctest::Approx(1.03e-2).epsilon(0.1));
}

TEST_CASE("uniform grid layout") {
  auto g = uniform_grid(3, std::vector<double>{0, 10}, std::vector<double>{1, 12});
  REQUIRE(g.size() == 9);
  CHECK(g.coord(0, 0) == 0.0);
  CHECK(g.coord(1, 1) == 11.0);  // last axis fastest
  CHECK(g.coord(3, 0) == 0.5);
  auto one = uniform_grid(1, std::vector<double>{0, 0}, std::vector<double>{1, 1});
  REQUIRE(one.size() == 1);
  CHECK(one.coord(0, 0) == 0.5);
}

TEST_CASE("holdout split") {
  auto p = halton(10, 2);
  sample(p, TestFunction::f1);
  auto s = holdout_every_kth(p, 3);
  CHECK(s.validation.size() == 3);
  CHECK(s.train.size() == 7);
  CHECK(s.validation.coord(0, 0) == p.coord(2, 0));
  CHECK(s.validation.value(1) == p.value(5));
  CHECK_THROWS_AS(holdout_every_kth(p, 1), ConfigError);
}

TEST_CASE("point file round trip") {
  std::mt19937_64 rng(12);
  auto p = oracle::random_points(57, 3, rng, -3.0, 7.0);
  std::vector<double> v(57);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (auto& x : v) x = u(rng) * 1e-9;
  p.set_values(v);
  const auto path = temp_file("round.txt");
  write_points(path, p);
  auto back = read_points(path);
  CHECK(back.dim() == 3);
  CHECK(back.coords() == p.coords());
  CHECK(back.values() == p.values());

  auto bare = oracle::random_points(5, 2, rng);
  write_points(path, bare);
  CHECK_FALSE(read_points(path).has_values());
}

TEST_CASE("point file parsing") {
  const auto path = temp_file("parse.txt");
  write_text(path, "# dim=2 n=1 values=yes\n0.5 0.5 1.0\n");
  auto p = read_points(path);
  REQUIRE(p.size() == 1);
  CHECK(p.value(0) == 1.0);

  write_text(path, "# dim=2 n=2 values=no\n\n0.1, 0.2\n# comment\n0.3,0.4\n");
  CHECK(read_points(path).size() == 2);

  write_text(path, "# dim=2 n=2 values=yes\n0.1 0.2 3\n0.5 abc 1.0\n");
  try {
    read_points(path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  write_text(path, "# dim=2 n=1 values=yes\n0.5 0.5\n");
  CHECK_THROWS_AS(read_points(path), ParseError);
  write_text(path, "# dim=2 n=3 values=no\n0.5 0.5\n");
  CHECK_THROWS_AS(read_points(path), ParseError);
  write_text(path, "0.5 0.5\n");
  CHECK_THROWS_AS(read_points(path), ParseError);
  CHECK_THROWS_AS(read_points(temp_file("does_not_exist.txt")), FileError);
}

TEST_CASE("grid output") {
  auto g = uniform_grid(2, std::vector<double>{0, 0}, std::vector<double>{1, 1});
  const std::vector<double> v{1, 2, 3, 4};
  const auto path = temp_file("grid.txt");
  write_grid(path, g, v, 2);
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  CHECK(all == "0 0 1\n0 1 2\n\n1 0 3\n1 1 4\n\n");
}
