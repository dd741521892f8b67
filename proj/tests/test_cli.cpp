#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#ifndef TOKMC_CLI_PATH
#define TOKMC_CLI_PATH "tokmc"
#endif
#ifndef TOKMC_DATA_DIR
#define TOKMC_DATA_DIR "data"
#endif

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(TOKMC_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 512> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

std::string data(const std::string& f) { return std::string(TOKMC_DATA_DIR) + "/" + f; }

}  // namespace

TEST_CASE("exit code 0 for a holding check, 1 for a failing one") {
  auto r6 = run_cli("check --template shuttle --topology ring:6 --formula-file " +
                    data("adj.itl") + " --fair token");
  CHECK(r6.exit_code == 0);
  CHECK(r6.output.find("RESULT: true") != std::string::npos);

  auto r7 = run_cli("check --template shuttle --topology ring:7 --formula-file " +
                    data("adj.itl") + " --fair token");
  CHECK(r7.exit_code == 1);
  CHECK(r7.output.find("counterexample") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("check --template shuttle").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("check --template bogus --topology ring:3 --formula 'forall i . A F tok@i'")
            .exit_code == 2);
  CHECK(run_cli("check --template shuttle --topology ring:3 --formula 'forall i . A X p@i'")
            .exit_code == 2);
}

TEST_CASE("pmcp cutoff on cliques reports the k+1 cutoff") {
  auto r = run_cli("pmcp --family clique --template mutex --mode cutoff --formula-file " +
                   data("mutex_safety.itl") + " --json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"answer\":\"Yes\"") != std::string::npos);
  CHECK(r.output.find("\"cutoff_or_bound\":3") != std::string::npos);
}

TEST_CASE("pmcp sweep of the adjacency formula exits 1") {
  auto r = run_cli("pmcp --family ring --template shuttle --mode sweep --bound 8 --formula-file " +
                   data("adj.itl"));
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("failing size 7") != std::string::npos);
}

TEST_CASE("pmcp sweep with no failure exits 3 (unknown)") {
  auto r = run_cli(
      "pmcp --family ring --template shuttle --mode sweep --bound 4 --formula 'forall i . A F "
      "tok@i'");
  CHECK(r.exit_code == 3);
}

TEST_CASE("validate accepts builtins and files, rejects broken input") {
  CHECK(run_cli("validate --template mutex").exit_code == 0);
  CHECK(run_cli("validate --template " + data("shuttle.json")).exit_code == 0);
  CHECK(run_cli("validate --topology ring:4").exit_code == 0);
  CHECK(run_cli("validate --topology " + data("biring4.json")).exit_code == 0);
  CHECK(run_cli("validate --template nonexistent.json").exit_code == 2);
}

TEST_CASE("equiv compares contractions") {
  CHECK(run_cli("equiv --topology ring:10 --tuple 1,5 --topology2 ring:12 --tuple2 1,6 --d 2")
            .exit_code == 0);
  CHECK(run_cli("equiv --topology ring:6 --tuple 1,2 --topology2 ring:6 --tuple2 1,4 --d 1")
            .exit_code == 1);
}

TEST_CASE("contract prints classes and writes dot") {
  auto r = run_cli("contract --topology ring:10 --tuple 1,5 --d 2 --dot /tmp/tokmc_con.dot");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("classes: 4") != std::string::npos);
  CliResult dot = run_cli("contract --topology clique:5 --tuple 2,4 --d 1 --json");
  CHECK(dot.exit_code == 0);
  CHECK(dot.output.find("\"classes\":3") != std::string::npos);
}

TEST_CASE("build prints stats and styles tok edges in dot output") {
  auto r = run_cli("build --template shuttle --topology ring:2 --dot /tmp/tokmc_sys.dot");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("states: 2") != std::string::npos);
  auto cat = run_cli("build --template shuttle --topology ring:2 --json");
  CHECK(cat.output.find("\"tok\":2") != std::string::npos);
}

TEST_CASE("demo-cm agrees with its reference run and exits accordingly") {
  auto halt = run_cli("demo-cm --builtin count-two --n 3");
  CHECK(halt.exit_code == 1);
  CHECK(halt.output.find("reaches HALT") != std::string::npos);
  CHECK(halt.output.find("reference run (bound 2): halts") != std::string::npos);

  auto spin = run_cli("demo-cm --builtin count-two --n 2");
  CHECK(spin.exit_code == 0);
  CHECK(spin.output.find("never reaches HALT") != std::string::npos);

  auto file = run_cli("demo-cm --program " + data("count_two.json") + " --n 3 --json");
  CHECK(file.exit_code == 1);
  CHECK(file.output.find("\"never_halts\":false") != std::string::npos);
}

TEST_CASE("gen-formula round-trips through check") {
  auto phi = run_cli("gen-formula phi-k --k 2");
  CHECK(phi.exit_code == 0);
  auto chk = run_cli("check --template shuttle --topology ring:2 --fair none --formula '" +
                     phi.output.substr(0, phi.output.size() - 1) + "'");
  CHECK(chk.exit_code == 0);
}
