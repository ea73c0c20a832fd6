#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "cspimp/error.hpp"
#include "cspimp/oracle.hpp"
#include "doctest.h"
#include "generate.hpp"
#include "support.hpp"

using namespace cspimp;
using namespace cspimp::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* two_sat_json = R"({
  "num_vars": 2,
  "relations": [
    {"name": "or", "arity": 2, "tuples": [[0,1],[1,0],[1,1]]},
    {"name": "imp", "arity": 2, "tuples": [[0,0],[0,1],[1,1]]}
  ],
  "constraints": [{"relation": "or", "scope": [1,2]}, {"relation": "imp", "scope": [1,2]}]
})";

const char* nae_json = R"({
  "num_vars": 3,
  "relations": [{"name": "nae", "arity": 3, "tuples": [[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1]]}],
  "constraints": [{"relation": "nae", "scope": [1,2,3]}]
})";

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "cspimp_test_cli";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"cspimp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void check_schema(const json& r, const std::string& command) {
  CHECK(r.at("schema") == "cspimp-report/1");
  CHECK(r.at("command").at("name") == command);
  CHECK(r.at("command").at("argv").is_array());
  CHECK(r.at("instance").at("num_vars").is_number_unsigned());
  CHECK(r.at("classification").at("tractability").is_string());
  CHECK(r.at("classification").at("polymorphisms").is_array());
  CHECK(r.at("timings").at("total_ms").is_number());
}

}  // namespace

TEST_CASE("json instance parsing") {
  cli::LoadedInstance li = cli::parse_instance_text(two_sat_json, cli::InstanceFormat::json);
  CHECK(li.instance.num_vars == 2);
  CHECK(li.instance.constraints.size() == 2);
  CHECK(li.language.size() == 2);
  CHECK(enumerate_solutions(li.instance, li.language).points == std::vector<Assignment>{{0, 1}, {1, 1}});

  auto bad = [](const std::string& text, const std::string& fragment) {
    try {
      cli::parse_instance_text(text, cli::InstanceFormat::json);
      FAIL("expected a parse error");
    } catch (const InvalidArgument& e) {
      CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
  };
  bad(R"({"num_vars": 1, "relations": [{"name":"u","arity":1,"tuples":[[1]]}],
          "constraints": [{"relation":"u","scope":[0]}]})",
      "constraints[0].scope[0]");
  bad(R"({"num_vars": 2, "relations": [{"name":"u","arity":1,"tuples":[[1]]}],
          "constraints": [{"relation":"u","scope":[1,2]}]})",
      "arity mismatch");
  bad(R"({"num_vars": 2, "relations": [{"name":"u","arity":2,"tuples":[[1]]}], "constraints": []})",
      "relations[0].tuples[0]");
  bad(R"({"relations": [], "constraints": []})", "num_vars");
  bad(R"({"num_vars": 1, "relations": [], "constraints": [{"relation":"v","scope":[1]}]})", "unknown relation");
  bad("{", "malformed json");

  cli::LoadedInstance round =
      cli::parse_instance_text(cli::instance_to_json(li.instance, li.language).dump(), cli::InstanceFormat::json);
  CHECK(enumerate_solutions(round.instance, round.language).points ==
        enumerate_solutions(li.instance, li.language).points);
}

TEST_CASE("dimacs parsing") {
  cli::LoadedInstance li = cli::parse_instance_text("c comment\np cnf 2 2\n1 2 0\n-1 2 0\n", cli::InstanceFormat::dimacs);
  CHECK(li.instance.num_vars == 2);
  CHECK(enumerate_solutions(li.instance, li.language).points == std::vector<Assignment>{{0, 1}, {1, 1}});
  CHECK(li.language.find(gen::clause_relation_name({true, true})) != nullptr);
  CHECK_THROWS_AS(cli::parse_instance_text("1 2 0\n", cli::InstanceFormat::dimacs), InvalidArgument);
  CHECK_THROWS_AS(cli::parse_instance_text("p cnf 2 1\n1 3 0\n", cli::InstanceFormat::dimacs), InvalidArgument);
  CHECK_THROWS_AS(cli::parse_instance_text("p cnf 2 2\n1 2 0\n", cli::InstanceFormat::dimacs), InvalidArgument);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    gen::Generated g = gen::random_clauses(6, 8, ClauseShape::horn, 3, rng);
    cli::LoadedInstance back =
        cli::parse_instance_text(cli::instance_to_json(g.instance, g.language).dump(), cli::InstanceFormat::json);
    CHECK(enumerate_solutions(back.instance, back.language).points == brute_solutions(g.instance, g.language));
  }
}

TEST_CASE("polynomial text") {
  CHECK(format_polynomial(P("x1*x2*x3 - x1*x2")) == "x1*x2*x3 - x1*x2");
  CHECK_THROWS_AS(P("3x1"), InvalidArgument);
  CHECK(P("1/2*x1 + 1/2*x2").terms().front().coeff == Rational(1, 2));
}

TEST_CASE("subcommands emit schema-conforming reports") {
  const std::string path = write_temp("two_sat.json", two_sat_json).string();

  Result c = run_cli({"classify", "-i", path});
  REQUIRE(c.code == 0);
  check_schema(c.report(), "classify");
  CHECK(c.report()["classification"]["tractability"] == "MajorityTract");

  Result g = run_cli({"groebner", "-i", path});
  REQUIRE(g.code == 0);
  check_schema(g.report(), "groebner");
  CHECK(g.report()["basis"]["polynomials"] == json::array({"x2 - 1", "x1^2 - x1"}));

  Result in = run_cli({"imp", "-i", path, "--poly", "x2 - 1"});
  REQUIRE(in.code == 0);
  check_schema(in.report(), "imp");
  CHECK(in.report()["verdict"]["decision"] == "In");
  CHECK(in.report()["verdict"]["evidence"]["verified"] == true);

  Result out = run_cli({"imp", "-i", path, "--poly", "x1"});
  REQUIRE(out.code == 0);
  CHECK(out.report()["verdict"]["decision"] == "NotIn");
  CHECK(out.report()["verdict"]["witness"] == "11");

  Result o = run_cli({"oracle", "-i", path, "--poly", "x1"});
  REQUIRE(o.code == 0);
  check_schema(o.report(), "oracle");
  CHECK(o.report()["solutions"]["count"] == 2);
  CHECK(o.report()["verdict"]["decision"] == "NotIn");

  Result e = run_cli({"eliminate", "-i", path, "--vars", "1"});
  REQUIRE(e.code == 0);
  check_schema(e.report(), "eliminate");

  Result r = run_cli({"reduce", "-i", path, "--poly", "x1*x2 + x2"});
  REQUIRE(r.code == 0);
  check_schema(r.report(), "reduce");
  CHECK(r.report()["reduction"]["remainder"] == "x1 + 1");

  Result gen = run_cli({"--seed", "3", "generate", "--family", "horn", "-n", "5", "-m", "6"});
  REQUIRE(gen.code == 0);
  cli::LoadedInstance li = cli::parse_instance_text(gen.out, cli::InstanceFormat::json);
  CHECK(li.instance.num_vars == 5);
  CHECK(classify_language(li.language).has(Operation::min));
}

TEST_CASE("spec command examples") {
  const std::string nae = write_temp("nae.json", nae_json).string();
  Result c = run_cli({"classify", "-i", nae});
  REQUIRE(c.code == 0);
  CHECK(c.report()["classification"]["tractability"] == "Hard(0)");

  Result chain = run_cli({"generate", "--family", "chain", "-n", "5"});
  REQUIRE(chain.code == 0);
  const std::string chain_path = write_temp("chain5.json", chain.out).string();
  Result g = run_cli({"groebner", "-i", chain_path, "--degree", "4"});
  REQUIRE(g.code == 0);
  CHECK(g.report()["basis"]["max_degree"] == 4);
  CHECK(g.report()["basis"]["truncated_at"] == 4);

  const std::string cnf = write_temp("two_sat.cnf", "p cnf 2 2\n1 2 0\n-1 2 0\n").string();
  Result d = run_cli({"imp", "-i", cnf, "--poly", "x2 - 1"});
  REQUIRE(d.code == 0);
  CHECK(d.report()["verdict"]["decision"] == "In");
}

TEST_CASE("exit codes") {
  const std::string path = write_temp("two_sat.json", two_sat_json).string();
  CHECK(run_cli({"imp", "-i", path}).code == 1);
  CHECK(run_cli({"imp", "-i", path, "--poly", "3x1"}).code == 1);
  CHECK(run_cli({"classify", "-i", "/nonexistent/file.json"}).code == 1);
  CHECK(run_cli({"groebner", "-i", path, "--strategy", "nope"}).code == 1);
  CHECK(run_cli({"bogus"}).code == 1);

  Result chain = run_cli({"generate", "--family", "chain", "-n", "9"});
  const std::string chain_path = write_temp("chain9.json", chain.out).string();
  Result budget = run_cli({"--budget", "10", "groebner", "-i", chain_path, "--degree", "4"});
  CHECK(budget.code == 2);
  CHECK(budget.err.find("budget") != std::string::npos);

  std::string big = R"({"num_vars": 30, "relations": [{"name": "nae", "arity": 3,
      "tuples": [[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1]]}],
      "constraints": [{"relation": "nae", "scope": [1,2,3]}]})";
  const std::string big_path = write_temp("big.json", big).string();
  Result unsupported = run_cli({"imp", "-i", big_path, "--poly", "x1"});
  CHECK(unsupported.code == 3);
  CHECK(unsupported.err.find("class not supported at this size") != std::string::npos);
}

TEST_CASE("binary smoke test") {
  const std::string path = write_temp("two_sat.json", two_sat_json).string();
  const std::string cmd = std::string(CSPIMP_BINARY) + " imp -i " + path + " --poly 'x2 - 1' > /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  const int usage = std::system((std::string(CSPIMP_BINARY) + " imp 2> /dev/null").c_str());
  REQUIRE(WIFEXITED(usage));
  CHECK(WEXITSTATUS(usage) == 1);
}
