#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(GAPCERT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* name) { return std::string(GAPCERT_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("bounds on the off-diagonal identity") {
  auto r = run("bounds " + data("offdiag_identity.txt") + " --method hbinv");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["inv_norm_bound"].get<double>() == doctest::Approx(1.0));
  CHECK(j["verdict"] == "SOUND");
}

TEST_CASE("bounds --method all on the Kirsch example") {
  auto r = run("bounds " + data("kirsch_t1.txt") + " --method all");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  bool found = false;
  for (const auto& c : j["certificates"]) {
    CHECK(c["verdict"] == "SOUND");
    if (c["method"] == "diag_gap") {
      found = true;
      CHECK(c["interval"][0].get<double>() == doctest::Approx(-1.0));
      CHECK(c["interval"][1].get<double>() == doctest::Approx(1.0));
    }
  }
  CHECK(found);
}

TEST_CASE("exit codes") {
  CHECK(run("bounds " + data("malformed.txt")).code == 2);
  CHECK(run("bounds /nonexistent.txt").code == 2);
  CHECK(run("bounds " + data("offdiag_identity.txt") + " --method diag").code == 3);
  CHECK(run("stokes " + data("stokes_nab_fails.txt")).code == 3);
  CHECK(run("model spurious -m 10 -c 1.5").code == 3);
  CHECK(run("model scan --M 1,x").code == 2);
}

TEST_CASE("stokes output") {
  auto r = run("stokes " + data("stokes_scalar.txt") + " --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("index,branch,value\n", 0) == 0);
  auto js = run("stokes " + data("stokes_scalar.txt"));
  REQUIRE(js.code == 0);
  auto j = nlohmann::json::parse(js.out);
  CHECK(j["intervals"][0]["i_plus"][0].get<double>() == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
}

TEST_CASE("model subcommands") {
  auto s = run("model secular -m 2 -c 1");
  REQUIRE(s.code == 0);
  CHECK(s.out.find("0.3819660112501") != std::string::npos);
  CHECK(s.out.find("2.618033988749") != std::string::npos);
  auto sp = run("model spurious -m 50 -c 0.5");
  REQUIRE(sp.code == 0);
  auto j = nlohmann::json::parse(sp.out);
  CHECK(j["log10_lambda_est"].get<double>() == doctest::Approx(std::log10(2.0) - 100.0 * std::log10(2.0)));
  auto scan = run("model scan --M 0.1,3 --delta 0.5 -m 5 --seed 7");
  REQUIRE(scan.code == 0);
  CHECK(std::count(scan.out.begin(), scan.out.end(), '\n') == 1 + 2 * 2 * 10);
  auto v = run("model verify --ms 10 --cs 0.5,2");
  CHECK(v.code == 0);
  CHECK(v.out.find("ALL PASS") != std::string::npos);
}

TEST_CASE("counterexamples report") {
  auto r = run("counterexamples --t-range 5:20:16");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("21.1767") != std::string::npos);
  CHECK(r.out.find("43.7735") != std::string::npos);
  CHECK(r.out.find("# curve kirsch_Bt") != std::string::npos);
}
