#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "sphereppw/error.hpp"

using sphereppw::cli::parse_grid;
using sphereppw::cli::run;

namespace {
struct Result {
  int code;
  std::string out, err;
};
Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("grid syntax") {
  const auto g = parse_grid("0.1:1.5:50");
  REQUIRE(g.size() == 50);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(parse_grid("2:2:1").size() == 1);
  CHECK_THROWS_AS(parse_grid("0.1:1.5"), sphereppw::InvalidArgument);
  CHECK_THROWS_AS(parse_grid("a:1:3"), sphereppw::InvalidArgument);
  CHECK_THROWS_AS(parse_grid("1:0:3"), sphereppw::InvalidArgument);
}

TEST_CASE("ball on the hemisphere") {
  const auto r = call({"ball", "--n", "2", "--theta1", "1.5707963"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["lambda1"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(j["lambda2"].get<double>() == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(call({"ball", "--n", "1", "--theta1", "1.0"}).code == 2);
  CHECK(call({"ball", "--n", "2"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"scan", "--n", "3", "--grid", "0.1:1.5"}).code == 2);
  CHECK(call({"scan", "--n", "3", "--grid", "0.1:1.5:5", "--check", "ratio-sideways"}).code == 2);
  CHECK(call({"domain", "--kind", "polygon"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("scan checks") {
  CHECK(call({"scan", "--n", "3", "--grid", "0.1:1.5:50", "--check", "ratio-increasing"}).code == 0);
  const auto bad = call({"scan", "--n", "3", "--grid", "0.1:1.5:20", "--check", "ratio-decreasing"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("ratio-decreasing") != std::string::npos);
  const auto csv = call({"scan", "--n", "2", "--grid", "0.5:1:3", "--format", "csv"});
  CHECK(csv.out.rfind("theta1,lambda1,lambda2,ratio", 0) == 0);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"domain", "--kind", "perturbed", "--amplitude", "0.1", "--h", "0.1",
                                      "--seed", "3"};
  const auto a = call(args);
  const auto b = call(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  for (const char* key : {"lambda1", "lambda2", "bound", "ppw_margins", "y0"}) CHECK(j.contains(key));
}

TEST_CASE("other subcommands") {
  CHECK(call({"perturb", "--n", "2", "--theta1", "1.0"}).code == 0);
  CHECK(call({"profile", "--n", "3", "--theta1", "1.2"}).code == 0);
  CHECK(call({"chiti", "--n", "3", "--theta1", "1.0"}).code == 0);
  CHECK(call({"ppw", "--kind", "polygon", "--corners", "0.8,0,0.6;-0.4,0.69,0.6;-0.4,-0.69,0.6", "--h", "0.08"})
            .code == 0);
  CHECK(call({"domain", "--kind", "cap", "--theta1", "1.8", "--h", "0.2", "--exploratory", "--no-estimate"}).code ==
        0);
}
