#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + CACHEDOF_CLI + std::string(" ") + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int raw = pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("dof emits the corners of the 2x4 curve") {
  const auto r = run("dof --n 4 --kt 2 --kr 4");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("kind,m_r,m_r_decimal,reciprocal_d,reciprocal_d_decimal,d,d_decimal\n", 0) == 0);
  CHECK(has_line(r.out, "corner,0,0,5/2,2.5,2/5,0.4"));
  CHECK(has_line(r.out, "corner,1,1,9/8,1.125,8/9,0.8888888889"));
  CHECK(has_line(r.out, "corner,2,2,7/12,0.5833333333,12/7,1.714285714"));
  CHECK(has_line(r.out, "corner,3,3,1/4,0.25,4,4"));
  CHECK(has_line(r.out, "corner,4,4,0,0,inf,inf"));
}

TEST_CASE("dof baseline and single point") {
  const auto base = csv(run("dof --n 2 --kt 2 --kr 2").out);
  REQUIRE(base.size() > 1);
  CHECK(base[1][1] == "0");
  CHECK(base[1][3] == "3/2");
  const auto at = run("dof --n 4 --kt 2 --kr 4 --at 0.5");
  CHECK(at.status == 0);
  const auto rows = csv(at.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][1] == "1/2");
  CHECK(rows[1][4] == "1.8125");
}

TEST_CASE("invalid input exits with the usage code") {
  CHECK(run("dof --n 0 --kt 2 --kr 4").status == 2);
  CHECK(run("dof --n 4 --kt 2").status == 2);
  CHECK(run("dof --n 4 --kt 2 --kr 4 --at 5").status == 2);
  CHECK(run("dof --n 4 --kt 2 --kr 4 --bogus").status == 2);
  CHECK(run("bounds --n 4 --kt 2 --kr 4 --format svg").status == 2);
  CHECK(run("nosuch").status == 2);
  CHECK(run("e2e --n 4 --kt 2 --kr 4 --mr 1/2").status == 2);
  CHECK(run("dof --n 4 --kt 2 --kr 4", "CACHEDOF_SEED=abc").status == 2);
}

TEST_CASE("local caching gain does not depend on K_r") {
  const auto rows = csv(run("gains --axis kr --n 20 --kt 2 --mr 10 --from 1 --to 12").out);
  REQUIRE(rows.size() > 3);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][10] == rows[1][10]);
}

TEST_CASE("global caching gain tends to one as K_t grows") {
  const auto rows = csv(run("gains --axis kt --n 10 --kr 10 --mr 5 --from 1 --to 400").out);
  REQUIRE(rows.size() == 401);
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][13]) <= std::stod(rows[i - 1][13]));
  CHECK(std::stod(rows.back()[13]) < 1.03);
}

TEST_CASE("no cache means no caching gains") {
  const auto rows = csv(run("gains --axis mr --n 4 --kt 2 --kr 4").out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1][4] == "0");
  CHECK(rows[1][10] == "1");
  CHECK(rows[1][12] == "1");
}

TEST_CASE("gap scan stays below the gap bound") {
  const auto r = run("gap-scan --max 12 --format json");
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["violations"] == 0);
  CHECK(j["max_ratio"]["decimal"].get<double>() < 13.5);
  CHECK(j["passed"] == true);
}

TEST_CASE("verification suites pass") {
  CHECK(run("verify 2x2").status == 0);
  CHECK(run("verify net --grid small").status == 0);
  CHECK(run("verify phy --kt 2 --kr 3 --sigma 2 --depth 1 --trials 5").status == 0);
  const auto r = run("verify 2x2");
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["improvement"]["ratio"] == "7/6");
}

TEST_CASE("end-to-end runs report their accounting") {
  const auto m13 = run("e2e --corner M13 --demand 1,2 --format json");
  CHECK(m13.status == 0);
  CHECK(nlohmann::json::parse(m13.out)["accounting"]["reciprocal_worst"]["exact"] == "1");
  const auto four = run("e2e --n 4 --kt 2 --kr 4 --mr 1 --demand 4,3,2,1 --format json");
  CHECK(four.status == 0);
  CHECK(nlohmann::json::parse(four.out)["accounting"]["target"]["exact"] == "9/8");
  const auto table = csv(run("e2e --n 2 --kt 2 --kr 2 --depth 8").out);
  REQUIRE(table.size() == 5);
  CHECK(table.back()[6] == "26/17");
}

TEST_CASE("identical configuration gives identical bytes") {
  for (const char* args : {"dof --n 5 --kt 3 --kr 7 --format json", "e2e --n 3 --kt 2 --kr 3 --mr 1 --format json --seed 9",
                           "gap-scan --max 6 --sample 50 --seed 4", "gains --axis mr --n 4 --kt 2 --kr 4 --format svg"}) {
    const auto a = run(args), b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("the seed environment variable overrides --seed") {
  const auto direct = run("gap-scan --max 8 --sample 40 --seed 5 --format json");
  const auto env = run("gap-scan --max 8 --sample 40 --seed 1 --format json", "CACHEDOF_SEED=5");
  const auto other = run("gap-scan --max 8 --sample 40 --seed 1 --format json");
  CHECK(direct.out == env.out);
  CHECK(direct.out != other.out);
}

TEST_CASE("svg output is a standalone document") {
  const auto r = run("dof --n 4 --kt 2 --kr 4 --format svg");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("<svg", 0) == 0);
  CHECK(r.out.find("</svg>") != std::string::npos);
  CHECK(r.out.find("<polyline") != std::string::npos);
}
