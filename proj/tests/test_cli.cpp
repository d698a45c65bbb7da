#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "stieltjes/serialize.hpp"

using namespace stieltjes;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CLI_BINARY) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("stieltjes_cli_test_" + name)).string();
}

std::string write_tmp(const std::string& name, const std::string& text) {
  const std::string path = tmp_path(name);
  write_text_file(path, text);
  return path;
}

const char* kIdentityConstruction = R"({"kind": "stieltjes", "origin": {"construction": {
  "A_hat": {"space_dim": 1, "graph": {"ambient_dim": 2, "basis": [[0.6], [0.8]]}},
  "V": [[0.5, 0.5]]}}})";

}  // namespace

TEST_CASE("gen is deterministic") {
  const Run a = run("gen --seed 9 --dim-m 2 --dim-k 3");
  const Run b = run("gen --seed 9 --dim-m 2 --dim-k 3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run("gen --seed 10 --dim-m 2 --dim-k 3").out != a.out);
  const Json j = parse_json(run("gen --seed 1 --dim-m 1 --dim-k 1").out);
  CHECK(j.at("dim_m") == 1);
  CHECK(j.contains("system"));
  CHECK(j.contains("construction"));
}

TEST_CASE("eval") {
  const std::string omega0 = write_tmp("zero.json", R"({"origin": {"closed_form": {"type": "constant", "value": [[0, 0], [0, 0]]}}})");
  const Run r = run("eval --instance " + omega0 + " --grid 'points:-2,0;0,1'");
  REQUIRE(r.code == 0);
  const Json j = parse_json(r.out);
  for (const Json& row : j.at("rows")) {
    CHECK(row.at("type") == "value");
    const Matrix v = matrix_from_json(row.at("value"));
    CHECK(spectral_norm(v - Matrix::Identity(2, 2)) < 1e-14);
  }
  const std::string cons = write_tmp("cons.json", kIdentityConstruction);
  const Json q = parse_json(run("eval --instance " + cons + " --grid points:-1,0").out);
  const Matrix v = matrix_from_json(q.at("rows")[0].at("value"));
  CHECK(v(0, 0) == Complex(1.0, 0.0));
  CHECK(v(1, 0) == Complex(0.0, 0.0));
  const Run csv = run("eval --instance " + cons + " --grid points:-1,0 --format csv");
  CHECK(csv.out.rfind("lambda_re,lambda_im,type,rows,cols,cond,entries\n", 0) == 0);
}

TEST_CASE("check suites") {
  const std::string z2 = write_tmp("z2.json", R"({"origin": {"closed_form": {"type": "scaled_z", "c": [2, 0], "dim": 1}}})");
  const Run bad = run("check rs --instance " + z2);
  CHECK(bad.code == 1);
  CHECK(parse_json(bad.out).at("passed") == false);
  const std::string cons = write_tmp("cons2.json", kIdentityConstruction);
  CHECK(run("check sector --instance " + cons + " --grid points:0,1").code == 0);
  CHECK(run("check kernel --instance " + cons).code == 0);
  CHECK(run("check equiv --instance " + cons).code == 0);
  CHECK(run("check rs --instance " + cons).code == 0);
  CHECK(run("check nonsense --instance " + cons).code == 2);
}

TEST_CASE("rep and limits") {
  const std::string cons = write_tmp("cons3.json", kIdentityConstruction);
  const Run rep = run("rep --instance " + cons);
  CHECK(rep.code == 0);
  CHECK(parse_json(rep.out).contains("representation"));

  const std::string h = write_tmp("h.json", R"({"origin": {"closed_form": {"type": "neg_h_over_lambda", "H": [[1, 0], [0, 2]]}}})");
  const Run lim = run("limits --instance " + h);
  REQUIRE(lim.code == 0);
  const Json j = parse_json(lim.out);
  const LinearRelation at_inf = relation_from_json(j.at("at_minus_infinity"));
  const LinearRelation at_zero = relation_from_json(j.at("at_minus_zero"));
  CHECK(relation_equal(at_inf, LinearRelation::zero_operator(2), 1e-12));
  CHECK(relation_equal(at_zero, LinearRelation::purely_multivalued(2), 1e-12));
}

TEST_CASE("errors map to exit codes") {
  const std::string cons = write_tmp("cons4.json", kIdentityConstruction);
  CHECK(run("eval --instance " + cons + " --grid arcs:3").code == 2);
  CHECK(run("eval --instance " + cons + " --grid points:1,0").code == 2);
  CHECK(run("eval --instance /nonexistent.json").code == 2);
  CHECK(run("eval").code == 2);
  CHECK(run("gen --dim-m -1").code == 2);
  const std::string notpsd = write_tmp("neg.json", R"({"origin": {"construction": {
    "A_hat": {"space_dim": 1, "graph": {"ambient_dim": 2, "basis": [[0.6], [-0.8]]}}, "V": [[0.5]]}}})");
  CHECK(run("eval --instance " + notpsd).code == 2);
}

TEST_CASE("verify-all") {
  const Run a = run("verify-all --seed 5 --dim-m 2 --dim-k 2 --count 2");
  CHECK(a.code == 0);
  CHECK(a.out == run("verify-all --seed 5 --dim-m 2 --dim-k 2 --count 2").out);
  CHECK(parse_json(a.out).at("passed") == true);
}
