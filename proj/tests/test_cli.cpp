// End-to-end checks of the CLI binary: spawned via popen, path injected by
// the build as NSBELL_CLI_PATH.
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nsbell/json_io.hpp>

#include "fixtures.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
  namespace fs = std::filesystem;
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "nsbell-cli-tests";
  fs::create_directories(dir);
  const fs::path in = dir / ("in" + std::to_string(counter++) + ".json");
  std::string cmd = std::string(NSBELL_CLI_PATH) + " " + args;
  if (!stdin_data.empty()) {
    std::ofstream f(in);
    f << stdin_data;
    f.close();
    cmd += " < " + in.string();
  }
  cmd += " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tensor_text(const nsbell::Tensor4& t) { return nsbell::tensor_to_json(t).dump(); }

}  // namespace

TEST_CASE("cli: norm ns of the uniform point is 1") {
  const auto r = run_cli("norm ns", tensor_text(nsbell::uniform_ns_point(nsbell::Dims{2, 2, 2, 2})));
  CHECK(r.exit_code == 0);
  const auto j = nsbell::Json::parse(r.out);
  CHECK(j.at("value") == "1");
  CHECK(j.at("decimal") == "1");
}

TEST_CASE("cli: game pipeline reproduces the n^2 value") {
  const auto gen = run_cli("game gen-perm --n 5 --seed 7");
  REQUIRE(gen.exit_code == 0);
  const auto val = run_cli("game value --kind ns", gen.out);
  CHECK(val.exit_code == 0);
  CHECK(nsbell::Json::parse(val.out).at("value") == "25");
}

TEST_CASE("cli: dns and ns values agree on a nonnegative tensor") {
  const std::string chsh = tensor_text(fixtures::chsh_game());
  const auto dns = run_cli("value dns", chsh);
  const auto ns = run_cli("value ns", chsh);
  REQUIRE(dns.exit_code == 0);
  REQUIRE(ns.exit_code == 0);
  CHECK(nsbell::Json::parse(dns.out).at("value") == "1");
  CHECK(nsbell::Json::parse(ns.out).at("value") == "1");
}

TEST_CASE("cli: identical invocations emit identical bytes") {
  const std::string chsh = tensor_text(fixtures::chsh_game());
  const auto a = run_cli("value classical", chsh);
  const auto b = run_cli("value classical", chsh);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(nsbell::Json::parse(a.out).at("value") == "3/4");
}

TEST_CASE("cli: exit codes distinguish refusal from invalid input") {
  const std::string chsh = tensor_text(fixtures::chsh_game());
  const auto refused = run_cli("--max-strategies 2 value classical", chsh);
  CHECK(refused.exit_code == 2);
  CHECK(refused.out.empty());  // refusal produces no partial output
  const auto garbage = run_cli("norm ns", "this is not json");
  CHECK(garbage.exit_code == 3);
  CHECK(garbage.out.empty());
  const auto unknown = run_cli("norm ns --no-such-flag", chsh);
  CHECK(unknown.exit_code == 3);
}

TEST_CASE("cli: membership and completion compose through pipes") {
  const std::string pr = tensor_text(fixtures::pr_box());
  const auto member = run_cli("member ns", pr);
  CHECK(member.exit_code == 0);
  CHECK(nsbell::Json::parse(member.out).at("member") == true);

  const auto colocal1 = run_cli("member colocal --scale 1", pr);
  CHECK(nsbell::Json::parse(colocal1.out).at("member") == false);
  const auto colocal18 = run_cli("member colocal --scale 18", pr);
  CHECK(nsbell::Json::parse(colocal18.out).at("member") == true);

  // a nonneg tensor with unit norm completes to an NS point
  nsbell::Tensor4 half = fixtures::pr_box();
  half.at(0, 0, 0, 0) = nsbell::Rational(0);  // dent one entry; norm stays 1
  const auto completed = run_cli("complete-snos", tensor_text(half));
  REQUIRE(completed.exit_code == 0);
  const auto check = run_cli("member ns", completed.out);
  CHECK(nsbell::Json::parse(check.out).at("member") == true);
}

TEST_CASE("cli: decompose ans emits an exact split") {
  nsbell::SplitMix64 rng(77);
  const auto r = nsbell::random_ans_point(nsbell::Dims{2, 2, 2, 2}, rng, 3);
  const auto res = run_cli("decompose ans", tensor_text(r));
  REQUIRE(res.exit_code == 0);
  const auto j = nsbell::Json::parse(res.out);
  const auto lam = nsbell::Rational::from_string(j.at("lam").get<std::string>());
  const auto mu = nsbell::Rational::from_string(j.at("mu").get<std::string>());
  const auto pos = nsbell::tensor_from_json(j.at("pos"));
  const auto neg = nsbell::tensor_from_json(j.at("neg"));
  CHECK(lam * pos - mu * neg == r);
}

TEST_CASE("cli: verify passes on a well-behaved input") {
  const auto res = run_cli("verify", tensor_text(fixtures::pr_box()));
  CHECK(res.exit_code == 0);
  const auto j = nsbell::Json::parse(res.out);
  CHECK(j.at("all_pass") == true);
}

TEST_CASE("cli: experiment csv carries the fixed column header") {
  const auto res = run_cli("experiment chernoff --n 3 --trials 3 --seed 5 --format csv");
  CHECK(res.exit_code == 0);
  CHECK(res.out.rfind("trial,seed,omega_L,ratio,below_threshold\n", 0) == 0);
}
