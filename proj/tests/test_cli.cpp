#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "nfg/document.hpp"
#include "nfg/evaluate.hpp"
#include "support.hpp"

using namespace nfg;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path kData = NFG_DATA_DIR;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is folded into `out` when
// `merge` is set and discarded otherwise.
Run run(const std::string& args, bool merge = false, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + std::string(NFG_CLI) + "' " + args +
                          (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* name) { return "'" + (kData / name).string() + "'"; }

Complex complex_of(const Json& j) {
  return {j[0].is_null() ? INFINITY : j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> values_of(const Json& j) {
  std::vector<Complex> out;
  for (const auto& v : j) out.push_back(complex_of(v));
  return out;
}

Nfg load(const char* name) { return to_nfg(read_document(kData / name)); }

}  // namespace

TEST_CASE("eval prints the partition tensor") {
  const auto vector_matrix = run("eval " + data("vector_matrix.nfg"));
  REQUIRE(vector_matrix.code == 0);
  const auto j = Json::parse(vector_matrix.out);
  CHECK(j["ports"] == Json::array({"J"}));
  CHECK(j["shape"] == Json::array({4}));
  CHECK(values_of(j["values"]) == std::vector<Complex>{10, 2, 5, 1});
  CHECK(run("eval " + data("vector_matrix.nfg")).out == vector_matrix.out);

  const auto det = Json::parse(run("eval " + data("det3.nfg")).out);
  CHECK(det["shape"] == Json::array());
  CHECK(values_of(det["values"]) == std::vector<Complex>{24});

  const auto trace = Json::parse(run("eval " + data("trace3.nfg")).out);
  CHECK(values_of(trace["values"]) == test::brute_force(load("trace3.nfg")));

  const auto chain = run("eval " + data("chain_minsum.nfg") + " --semiring min_sum");
  REQUIRE(chain.code == 0);
  const auto expected = test::brute_force(load("chain_minsum.nfg"), Semiring::min_sum());
  CHECK(values_of(Json::parse(chain.out)["values"]) == expected);
  CHECK(expected[0] == Complex(2.0));
}

TEST_CASE("sumproduct on a tree") {
  const auto r = run("sumproduct " + data("tree.nfg"));
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  const auto g = load("tree.nfg");
  const Complex z = eval_scalar(g);
  CHECK(test::close(complex_of(j["global_z"]), z));
  CHECK(j["messages"].size() == 2 * g.variables().size());
  for (const auto& m : j["marginals"]) {
    const auto oracle = test::brute_force_marginal(g, m["edge"].get<std::string>());
    CHECK(test::deviation(values_of(m["values"]), oracle) <= 1e-9);
  }

  const auto one = Json::parse(run("sumproduct " + data("tree.nfg") + " --edge b").out);
  CHECK(one["marginals"].size() == 1);
  CHECK(one["marginals"][0]["edge"] == "b");

  const auto cyclic = run("sumproduct " + data("cycle4.nfg"), true);
  CHECK(cyclic.code == 1);
  CHECK(cyclic.out.find("nfg loops") != std::string::npos);
}

TEST_CASE("dual writes a document and prints the scale") {
  const auto out = fs::temp_directory_path() / "nfg_cli_dual.nfg";
  const auto r = run("dual " + data("dual_f2.nfg") + " -o '" + out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out == "scale 8\n");
  const auto g = load("dual_f2.nfg");
  const auto z = eval_external(g);
  auto hat = test::brute_dft(z.table);
  for (auto& x : hat) x *= 8.0;
  const auto d = to_nfg(read_document(out));
  CHECK(test::deviation(eval_external(d).table.values(), hat) <= 1e-9);
  fs::remove(out);

  const auto f3 = run("dual " + data("dual_f3.nfg") + " -o '" + out.string() + "'");
  CHECK(f3.code == 0);
  CHECK(f3.out == "scale 9\n");
  fs::remove(out);

  CHECK(run("dual " + data("det3.nfg") + " -o '" + out.string() + "'").code == 1);
}

TEST_CASE("loops prints every term and reconstructs Z") {
  const auto r = run("loops " + data("cycle4.nfg"));
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t terms = 0, loose = 0;
  double err = 1.0;
  while (std::getline(lines, line)) {
    if (line.rfind("reconstruction_error ", 0) == 0) err = std::stod(line.substr(21));
    if (line.find("_order") != std::string::npos || line.find("loose_end") != std::string::npos ||
        line.find("generalized_loop") != std::string::npos) {
      if (line[0] == '0' || line[0] == '1') ++terms;
      if (line.find("loose_end") != std::string::npos) ++loose;
    }
  }
  CHECK(terms == 16);
  CHECK(loose == 14);
  CHECK(err <= 1e-9);

  const auto budget = run("loops " + data("loopy5.nfg") + " --iters 1", true);
  CHECK(budget.code == 0);
  CHECK(budget.out.find("converged false") != std::string::npos);
  CHECK(run("loops " + data("loopy5.nfg") + " --damping 1.5").code == 1);
}

TEST_CASE("verify-corpus") {
  const auto r = run("verify-corpus");
  CHECK(r.code == 0);
  std::size_t passes = 0;
  for (std::size_t pos = 0; (pos = r.out.find("PASS ", pos)) != std::string::npos; ++pos) ++passes;
  CHECK(passes == 5);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(run("verify-corpus --seed 7 --trials 3").code == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("eval " + data("bad_syntax.nfg")).code == 2);
  CHECK(run("eval " + data("dangling.nfg")).code == 2);
  CHECK(run("eval " + data("levi_arity.nfg")).code == 2);
  CHECK(run("eval " + data("bad_degree.nfg")).code == 1);
  CHECK(run("eval " + data("missing.nfg")).code == 1);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("eval").code == 2);
  CHECK(run("eval " + data("vector_matrix.nfg") + " --semiring max_plus").code == 2);

  const auto dangling = run("eval " + data("dangling.nfg"), true);
  CHECK(dangling.out.find("/factors/0/ports/1") != std::string::npos);
  const auto syntax = run("eval " + data("bad_syntax.nfg"), true);
  CHECK(syntax.out.find("line 8") != std::string::npos);
}

TEST_CASE("NFG_THREADS") {
  const auto base = run("eval " + data("trace3.nfg")).out;
  CHECK(run("eval " + data("trace3.nfg"), false, "NFG_THREADS=1").out == base);
  const auto bad = run("eval " + data("trace3.nfg"), true, "NFG_THREADS=zero");
  CHECK(bad.code == 0);
  CHECK(bad.out.find("NFG_THREADS") != std::string::npos);
}
