#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "ppdef/problem_file.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(PPDEF_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(PPDEF_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("--list-builtins names both bases") {
  RunResult r = run_cli("--list-builtins");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("dense_linear_order") != std::string::npos);
  CHECK(r.out.find("ordered_random_graph") != std::string::npos);
}

TEST_CASE("the suite fixture decides with the expected report") {
  RunResult r = run_cli("--file " + fixture("suite.txt"));
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "QUERY 1: pp Leq from {Lt} => NOT-DEFINABLE\n"
        "QUERY 2: ep Leq from {Lt} => DEFINABLE\n"
        "QUERY 3: ex Leq from {Lt} => DEFINABLE\n"
        "QUERY 4: pp Betw from {Lt} => NOT-DEFINABLE\n"
        "QUERY 5: ep Betw from {Lt} => DEFINABLE\n"
        "QUERY 6: pp Lt from {Chain} => DEFINABLE\n"
        "QUERY 7: ep Neq from {Eq} => NOT-DEFINABLE\n"
        "QUERY 8: ex Neq from {Eq} => DEFINABLE\n"
        "QUERY 9: pp Empty from {Lt} => DEFINABLE\n");
}

TEST_CASE("a custom base block reproduces the builtin behaviour") {
  RunResult r = run_cli("--file " + fixture("custom_base.txt"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("QUERY 1: pp Leq from {Lt} => NOT-DEFINABLE") != std::string::npos);
  CHECK(r.out.find("QUERY 2: identity from {Lt} => NOT-FOUND") != std::string::npos);
}

TEST_CASE("exit codes distinguish failure classes") {
  CHECK(run_cli("--file " + fixture("parse_error.txt")).exit_code == 2);
  CHECK(run_cli("--file " + fixture("bad_base.txt")).exit_code == 3);
  CHECK(run_cli("--file " + fixture("inconclusive.txt")).exit_code == 4);
  CHECK(run_cli("--file /no/such/file").exit_code == 2);
}

TEST_CASE("certificate emission and independent checking") {
  std::string dir = "cli_certs_tmp";
  std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  RunResult r = run_cli("--file " + fixture("one_query.txt") + " --emit-certificates " + dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("NOT-DEFINABLE") != std::string::npos);
  CHECK(r.out.find("(verified)") != std::string::npos);

  std::string cert = dir + "/query1.cert";
  RunResult ok = run_cli("--file " + fixture("one_query.txt") + " --check-certificate " + cert);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("VALID") == 0);

  // wrong problem: digest mismatch
  RunResult bad = run_cli("--file " + fixture("one_query_ep.txt") + " --check-certificate " + cert);
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("INVALID") == 0);

  // tampered certificate body
  {
    std::ifstream in(cert);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    auto pos = text.find("\nrow 32: ");
    REQUIRE(pos != std::string::npos);
    text[pos + 9] = text[pos + 9] == '0' ? '1' : '0';
    std::ofstream out(dir + "/tampered.cert");
    out << text;
  }
  RunResult tam = run_cli("--file " + fixture("one_query.txt") + " --check-certificate " +
                          dir + "/tampered.cert");
  CHECK(tam.exit_code == 1);
}
