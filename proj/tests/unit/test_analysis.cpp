#include "doctest.h"
#include "helpers.hpp"

#include "analysis.hpp"
#include "error.hpp"
#include "radonmap.hpp"

using namespace curvnd;
using namespace testutil;

TEST_SUITE("analysis") {

TEST_CASE("config defaults and overrides") {
  auto c = config_from_json("");
  CHECK(c.seed == 1);
  c = config_from_json(R"({"seed": 9, "point": {"x": [1, 2, 3], "t": [0.5]}, "harness": true})");
  CHECK(c.seed == 9);
  REQUIRE(c.point_x);
  CHECK((*c.point_x)(2) == 3);
  CHECK(c.with_harness);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json(R"({"sedd": 1})"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"samples": 0})"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"samples": "many"})"), Error);
  CHECK_THROWS_AS(config_from_json("[1]"), Error);
  CHECK_THROWS_AS(config_from_json("{"), Error);
}

TEST_CASE("config round trip") {
  auto c = config_from_json(R"({"seed": 4, "margin_floor": 0.01, "cutoff": "bump"})");
  auto j = config_to_json(c);
  CHECK(config_to_json(config_from_json(j.dump())) == j);
}

TEST_CASE("degenerate analysis") {
  auto rep = analyze(parse_map(data("degenerate.poly")), config_from_json(R"({"threads": 1})"));
  CHECK(rep.exit_code == 2);
  CHECK(rep.json["schema"] == kReportSchema);
  CHECK(rep.json["verdict"]["status"] == "degenerate");
  CHECK(rep.json["exponents"]["p"] == "5/3");
  CHECK(rep.json["hormander"]["spans"] == true);
}

TEST_CASE("nondegenerate analysis") {
  auto rep = analyze(parse_map(data("nondegenerate.poly")), config_from_json(R"({"threads": 1})"));
  CHECK(rep.exit_code == 0);
  CHECK(rep.json["verdict"]["status"] == "nondegenerate");
  CHECK(rep.json["exponents"]["q"] == "4");
  CHECK(rep.json["verdict"]["certificate"].size() > 0);
}

TEST_CASE("analysis at a critical point fails") {
  CHECK_THROWS_AS(analyze(parse_map(data("zero_jacobian.poly")), {}), Error);
}

TEST_CASE("base point with the wrong length") {
  auto cfg = config_from_json(R"({"point": {"x": [0, 0]}})");
  CHECK_THROWS_AS(analyze(parse_map(data("degenerate.poly")), cfg), Error);
}

TEST_CASE("reports are reproducible and parse back to themselves") {
  auto phi = parse_map(data("degenerate.poly"));
  auto a = analyze(phi, config_from_json(R"({"threads": 1})"));
  auto b = analyze(phi, config_from_json(R"({"threads": 1})"));
  CHECK(a.text() == b.text());
  auto parsed = nlohmann::ordered_json::parse(a.text());
  CHECK(parsed.dump(2) + "\n" == a.text());
}

TEST_CASE("knapp run writes a series") {
  auto rep = run_knapp(parse_map(data("degenerate.poly")),
                       config_from_json(R"({"threads": 1, "harness_samples": 5000, "max_relative_se": 0.5})"));
  REQUIRE(rep.csv.count("knapp"));
  CHECK(rep.csv["knapp"].rfind("tau,value,stderr\n", 0) == 0);
  CHECK(rep.json["harness"]["taus"].size() == 7);
}

TEST_CASE("vfields run on the corpus") {
  auto rep = run_vfields(parse_map(data("vf_circle.poly")), config_from_json(R"({"probes": 300})"));
  CHECK(rep.exit_code == 0);
  CHECK(rep.json["vfields"]["pass"] == true);
  CHECK(rep.json["vfields"]["chebyshev_ratio"].get<double>() >= 0.5);
  CHECK_THROWS_AS(run_vfields(parse_map(data("degenerate.poly")), {}), Error);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(VerdictStatus::Nondegenerate) == 0);
  CHECK(exit_code_for(VerdictStatus::Degenerate) == 2);
  CHECK(exit_code_for(VerdictStatus::Inconclusive) == 3);
}

}
