#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>

#include "zerocap/quantities.hpp"
#include "zerocap/spec_io.hpp"

using namespace zerocap;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(ZEROCAP_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  res.exit_code = WEXITSTATUS(pclose(pipe));
  return res;
}

std::string spec(const std::string& name) { return std::string(ZEROCAP_SPEC_DIR) + "/" + name; }

}  // namespace

TEST_CASE("spec parsing covers every type") {
  CHECK(parse_spec(R"({"type": "two_state", "alpha_sq": 0.75})").graph.is_cq());
  CHECK(parse_spec(R"({"type": "amplitude_damping", "r": 0.5})").channel.has_value());
  CHECK(parse_spec(R"({"type": "noiseless_classical", "l": 3})").graph.d_A == 3);
  CHECK(parse_spec(R"({"type": "noiseless_quantum", "l": 2})").graph.rank() == 1);
  CHECK(parse_spec(R"({"type": "classical", "transition": [[0.5, 0.5], [0, 1]]})")
            .transition.has_value());
  const ParsedSpec g = parse_spec(R"({"type": "graph", "n": 3, "edges": [[0, 1]]})");
  REQUIRE(g.classical_graph.has_value());
  CHECK(g.classical_graph->has_edge(0, 1));

  const ParsedSpec kr = parse_spec(
      R"({"type": "kraus", "d_in": 2, "d_out": 2,
          "matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]]]})");
  CHECK(kr.graph.rank() == 1);

  const ParsedSpec tn =
      parse_spec(R"({"type": "tensor", "parts": [{"type": "two_state", "alpha_sq": 0.75}],
                     "power": 2})");
  CHECK(tn.graph.d_A == 4);

  CHECK_THROWS_AS(parse_spec("not json"), spec_error);
  CHECK_THROWS_AS(parse_spec(R"({"type": "banana"})"), spec_error);
  CHECK_THROWS_AS(parse_spec(R"({"type": "two_state"})"), spec_error);
}

TEST_CASE("spec serialization round-trips") {
  for (const NCGraph& k : {two_state_graph(std::sqrt(0.8)), amplitude_damping_graph(0.3)}) {
    const ParsedSpec back = parse_spec(spec_to_json(k));
    CHECK((back.graph.P.mat() - k.P.mat()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(back.graph.d_A == k.d_A);
    CHECK(back.graph.is_cq() == k.is_cq());
  }
}

TEST_CASE("matrix JSON round-trips") {
  CMatrix m(2, 2);
  m << Complex(1, 2), Complex(0, -1), Complex(3.5, 0), Complex(0, 0);
  const CMatrix back = matrix_from_json(matrix_to_json(m));
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("csv header is pinned") {
  const std::string csv = to_csv({});
  CHECK(csv == "quantity,value,integer_part,bits,gap,status,seconds\n");
}

TEST_CASE("cli: capacity of the two-state spec") {
  const RunResult r = run("capacity " + spec("two_state_075.json") + " --csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("quantity,value,integer_part,bits,gap,status,seconds") == 0);
  CHECK(r.output.find("upsilon,1.0000") != std::string::npos);
  CHECK(r.output.find("feasible,1") != std::string::npos);
}

TEST_CASE("cli: theta of the pentagon") {
  const RunResult r = run("theta " + spec("c5.json") + " --csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("theta,2.2360679") != std::string::npos);
}

TEST_CASE("cli: alphastar of the typewriter channel") {
  const RunResult r = run("alphastar " + spec("pentagon_typewriter.json") + " --csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("alphastar,2.5") != std::string::npos);
}

TEST_CASE("cli: sweep emits a monotone chain") {
  const RunResult r = run("sweep two_state --points 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("beta_sq,log_aram,cmin_e,log_sigma") == 0);
  // three data rows
  int rows = 0;
  for (char c : r.output)
    if (c == '\n') ++rows;
  CHECK(rows == 4);
}

TEST_CASE("cli: exit codes") {
  CHECK(run("capacity /nonexistent.json").exit_code == 2);
  CHECK(run("verify " + spec("noiseless_bit3.json") + " -M 9").exit_code == 3);
  const RunResult bad = run("capacity /nonexistent.json");
  CHECK(bad.output.find("error: E_SPEC_PARSE") != std::string::npos);
}

TEST_CASE("cli: gap tolerance flag and environment override are accepted") {
  const RunResult r = run("--gap-tol 1e-6 theta " + spec("c5.json") + " --csv");
  CHECK(r.exit_code == 0);
  const std::string cmd = "ZEROCAP_GAP_TOL=1e-6 " + std::string(ZEROCAP_BIN) + " theta " +
                          spec("c5.json") + " --csv 2>&1";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  CHECK(WEXITSTATUS(pclose(pipe)) == 0);
  CHECK(output.find("theta,2.236") != std::string::npos);
}

TEST_CASE("cli: witness dump reparses") {
  const std::string path = "/tmp/zerocap_witness_test.json";
  const RunResult r = run("theta " + spec("c5.json") + " --dump-witness " + path + " --csv");
  CHECK(r.exit_code == 0);
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string text;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), f)) > 0) text.append(buf.data(), got);
  std::fclose(f);
  // the dumped X witness is a 5x5 trace-one matrix
  const auto pos = text.find("\"X\"");
  REQUIRE(pos != std::string::npos);
  CHECK(text.find("\"primal\"") != std::string::npos);
  std::remove(path.c_str());
}
