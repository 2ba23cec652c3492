#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(JETVIBER_CLI) + " " + args + " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), f)) out.append(buf.data(), n);
  const int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(JETVIBER_DATA_DIR) + "/" + name; }

std::string without_timings(const std::string& s) { return std::regex_replace(s, std::regex(R"(  \([0-9.]+ ms\))"), ""); }

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("verify") {
  Run r = run("verify " + data("wave.jet"));
  CHECK(r.code == 0);
  CHECK(has(r.out, "PASS  [verify] B1"));
  CHECK(has(r.out, "H_p: 1/2*pd(h1,2)*p[x]*p[x,x]"));
  r = run("verify " + data("wave.jet") + " B0 'p[x]'");
  CHECK(r.code == 1);
  CHECK(has(r.out, "FAIL  [verify] p[x]"));
  CHECK(has(r.out, "residual: "));
}

TEST_CASE("input errors exit with 2") {
  const std::string bad = "/tmp/jetviber_bad_session.jet";
  std::ofstream(bad) << "indep x;\nbivector B = p[x,/];\n";
  Run r = run("verify " + bad);
  CHECK(r.code == 2);
  CHECK(has(r.out, ":2:18:"));
  CHECK(run("verify /nonexistent.jet").code == 2);
  CHECK(run("verify " + data("wave.jet") + " --instantiate 'h1 = p'").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("search " + data("wave.jet") + " --coeff-vars 'u[x,y]' --coeff-degree 1").code == 2);
}

TEST_CASE("schouten") {
  Run r = run("schouten " + data("wave.jet") + " B1 B1 --instantiate 'h1 = u[x]'");
  CHECK(r.code == 0);
  CHECK(has(r.out, "bracket: - u[x,x,x]*p[x]*p[x,x] - 2*u[x,x]*p[x]*p[x,x,x] - u[x]*p[x,x]*p[x,x,x]"));
  r = run("schouten " + data("laplace2d.jet") + " B5 B5 --poisson");
  CHECK(r.code == 1);
  CHECK(has(r.out, "is_poisson: false"));
  CHECK(run("schouten " + data("laplace2d.jet") + " B3 --poisson").code == 0);
  r = run("schouten " + data("uxyz.jet") + " B3 B3 --truncate 5 --instantiate gxy");
  CHECK(r.code == 0);
  CHECK(has(r.out, "above order 5: - 2*u[x,y]*p[x,y]*p[x,x,x,x,y,y]"));
}

TEST_CASE("search") {
  Run r = run("search " + data("wave.jet") + " --coeff-degree 0");
  CHECK(r.code == 0);
  CHECK(has(r.out, "dimension: 3"));
  r = run("search " + data("laplace3d.jet") + " --coeff-vars x,y,z --coeff-degree 4 --contains " + data("catalog_laplace3d.jet"));
  CHECK(r.code == 0);
  CHECK(has(r.out, "dimension: 36"));
  CHECK(has(r.out, "contains B31"));
  CHECK_FALSE(has(r.out, "contains B6"));
  CHECK(has(r.out, "B6: fails the bivector check"));
}

TEST_CASE("fixtures") {
  Run r = run("fixtures --only wave");
  CHECK(r.code == 0);
  CHECK(has(r.out, "[wave]"));
  CHECK_FALSE(has(r.out, "[uxyz]"));
  CHECK(run("fixtures --only nosuch").code == 2);
  r = run("fixtures --only laplace3d");
  CHECK(has(r.out, "WARN"));
  CHECK(has(r.out, "B6 is a suspected typo"));
}

TEST_CASE("json report") {
  const Run r = run("--format json fixtures --only wave");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["task"] == "fixtures");
  CHECK(j["exit_code"] == 0);
  REQUIRE(!j["items"].empty());
  for (const auto& key : {"task", "item", "status", "payload", "millis"}) CHECK(j["items"][0].contains(key));
}

TEST_CASE("deterministic output") {
  const std::string a = without_timings(run("fixtures --only laplace2d,poincare").out);
  const std::string b = without_timings(run("fixtures --only laplace2d,poincare").out);
  CHECK(a == b);
}
