#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "fewnomial/jobs.hpp"
#include "fewnomial/oracle.hpp"

using namespace fewnomial;
using json = nlohmann::json;

namespace {

json report(const std::string& job, JobStatus expect = JobStatus::Ok) {
  JobOutcome out = run_job_json(job);
  INFO(out.report);
  CHECK(out.status == expect);
  return json::parse(out.report);
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("count job") {
  CHECK(run_job_json(R"({"command":"count","poly":"1,0;-3,1;2,2","interval":"0,3","open":true})").report ==
        R"({"count":2})");
  CHECK(report(R"({"command":"count","poly":"1,0;-3,1;2,2","interval":["1/2",1],"open_left":true})")["count"] == 1);
  CHECK(report(R"({"command":"count","poly":"-1,0;1,2","interval":[-2,2],"backend":"float:64"})")["count"] == 2);
  json s = report(R"({"command":"count","poly":"-1,0;1,2","interval":[0,2],"stats":true})");
  CHECK(s["ops"]["total"].get<std::uint64_t>() > 0);
}

TEST_CASE("solve job") {
  json r = report(R"({"command":"solve","poly":"1,0;-3,37;1,100","interval":"0,2","eps":"1e-9"})");
  CHECK(r["digits"] == 11);
  CHECK(r["residual_check"]["ok"] == true);
  std::vector<mpq_class> Z;
  for (const auto& e : r["roots"]) Z.push_back(parse_rational(e["value"].get<std::string>()));
  auto brackets = isolate_and_refine(expand(parse_poly("1,0;-3,37;1,100")), CountQuery::closed(0, 2),
                                     mpq_class(1, 1) / (mpz_class(1) << 80))
                      .brackets();
  CHECK(bijective_eps_matching(Z, brackets, mpq_class(1, 1000000000)));

  json neg = report(R"({"command":"solve","poly":"-4,0;1,2","interval":[-3,3],"eps":0.001,"digits":3})");
  REQUIRE(neg["roots"].size() == 2);
  CHECK(neg["roots"][0]["value"] == "-2.000");
  CHECK(neg["roots"][1]["value"] == "2.000");
}

TEST_CASE("default digits") {
  CHECK(default_digits(mpq_class(1, 1000000000)) == 11);
  CHECK(default_digits(mpq_class(1, 1000)) == 5);
  CHECK(default_digits(mpq_class(3, 1000)) == 5);
  CHECK(default_digits(mpq_class(1, 1)) == 2);
  CHECK(default_digits(mpq_class(5, 1)) == 2);
}

TEST_CASE("job errors map to statuses") {
  CHECK(report("{not json", JobStatus::BadRequest)["error"] == "ParseError");
  CHECK(report(R"({"command":"count","poly":"1,0;x","interval":"0,1"})", JobStatus::BadRequest)["error"] ==
        "ParseError");
  report(R"({"command":"count","poly":"1,0;1,1","interval":"0,1","bogus":1})", JobStatus::BadRequest);
  report(R"({"command":"solve","poly":"1,0;1,1","interval":"0,1","eps":"2"})", JobStatus::BadRequest);
  report(R"({"command":"frobnicate"})", JobStatus::BadRequest);
  report(R"({"command":"count","poly":"1,0;1,1","interval":"0,1","backend":"float:3"})", JobStatus::BadRequest);
  // trinomials have a proven alpha bound, so strict mode accepts them
  report(R"({"command":"solve","poly":"1,0;-2,1;1,2","interval":"0,2","eps":"1e-3","strict_alpha":true})");
}

TEST_CASE("blowup and verify jobs") {
  json b = report(R"({"command":"blowup","dmin":3,"dmax":8})");
  REQUIRE(b["rows"].size() == 6);
  for (const auto& row : b["rows"]) {
    CHECK(row["p2_matches"] == true);
    CHECK(row["p3_degree"] == row["D"]);
  }
  json v = report(R"({"command":"verify","cases":15,"seed":3,"max_degree":64})");
  CHECK(v["count_fail"] == 0);
  CHECK(v["solve_fail"] == 0);
}

TEST_CASE("bench job is reproducible") {
  const std::string job = R"({"command":"bench","degrees":"1024,4096,16384","trials":5,"seed":7})";
  JobOutcome a = run_job_json(job), b = run_job_json(job);
  CHECK(a.report == b.report);
  json r = json::parse(a.report);
  CHECK(r["rows"].size() == 15);
  CHECK(r["rows"][0].contains("chain_K"));
  CHECK_FALSE(r["rows"][0].contains("wall_time"));
  json t = report(R"({"command":"bench","degrees":[1024],"trials":2,"timing":true,"mode":"count"})");
  CHECK(t["rows"][0].contains("wall_time"));
}

TEST_CASE("batch preserves order and isolates failures") {
  std::ostringstream out;
  std::istringstream in(
      "{\"command\":\"count\",\"poly\":\"1,0;-3,1;2,2\",\"interval\":\"0,3\"}\n"
      "this is not json\n"
      "\n"
      "{\"command\":\"solve\",\"poly\":\"-2,0;1,2\",\"interval\":\"0,2\",\"eps\":\"1e-6\"}\n"
      "{\"command\":\"count\",\"poly\":\"-2,0;1,2\",\"interval\":\"-2,2\"}\n");
  run_batch(in, out, 4);
  auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == R"({"count":2})");
  json err = json::parse(lines[1]);
  CHECK(err["line"] == 2);
  CHECK(err["status"] == 2);
  CHECK(json::parse(lines[2])["count"] == 1);
  CHECK(lines[3] == R"({"count":2})");

  std::ostringstream empty;
  std::istringstream none("");
  run_batch(none, empty, 2);
  CHECK(empty.str().empty());
}

TEST_CASE("batch output does not depend on the thread count") {
  std::string text;
  for (int i = 0; i < 12; ++i) {
    text += "{\"command\":\"solve\",\"poly\":\"-" + std::to_string(i + 2) + ",0;1," + std::to_string(3 + i) +
            "\",\"interval\":\"0,3\",\"eps\":\"1e-8\"}\n";
  }
  std::ostringstream one, many;
  std::istringstream a(text), b(text);
  run_batch(a, one, 1);
  run_batch(b, many, 6);
  CHECK(one.str() == many.str());
  CHECK(lines_of(one.str()).size() == 12);
}

TEST_CASE("job_to_json round trip") {
  JobSpec j = parse_job(R"({"command":"bench","degrees":[1024,2048],"trials":3,"seed":9,"mode":"count"})");
  JobSpec k = parse_job(job_to_json(j));
  CHECK(k.degrees == j.degrees);
  CHECK(k.trials == 3);
  CHECK(k.seed == 9);
  CHECK(k.mode == "count");
  CHECK(k.backend == Backend::Float);
}
