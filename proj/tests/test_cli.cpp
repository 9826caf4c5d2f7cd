// The command-line surface: subcommands, output contracts, exit codes, and
// stream handling, driven in-process through run_cli.

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "run_cli.hpp"

#include "fencenat/dsl.hpp"
#include "fencenat/factorization.hpp"
#include "fencenat/fence_map.hpp"
#include "fencenat/generators.hpp"

using namespace fencenat;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args,
              const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = cli::run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check reports fence preservation with matching exit codes") {
  CliResult r = run({"check", "xi"});
  CHECK(r.code == 0);
  CHECK(r.out == "fence-preserving: yes\n");
  CHECK(r.err.empty());

  r = run({"check", "prefix=[] tail(start=1, period=1, drift=1, base=[2])"});
  CHECK(r.code == 1);
  CHECK(r.out == "fence-preserving: no\n");

  r = run({"check", "witness", "--oracle"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "fence-preserving: yes\n"));
  CHECK(contains(r.out, "oracle: agrees (horizon "));

  r = run({"check", "xi", "--emit", "json"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"schema_version\":1,\"fence_preserving\":true}\n");

  // the reported horizon is the effective one, floored at 200
  r = run({"check", "xi", "--emit", "json", "--oracle", "--horizon", "50"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"oracle_checked\":true"));
  CHECK(contains(r.out, "\"horizon\":200"));
}

TEST_CASE("check reads one operand from stdin") {
  CliResult r = run({"check", "-"}, "witness\n");
  CHECK(r.code == 0);
  CHECK(r.out == "fence-preserving: yes\n");

  // JSON maps work on stdin too
  r = run({"check", "-"}, map_to_json(xi()));
  CHECK(r.code == 0);

  // only one operand may come from stdin
  r = run({"compose", "-", "-"}, "xi");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error: "));
}

TEST_CASE("eval prints one line per position") {
  CliResult r = run({"eval", "xi", "1", "2", "5"});
  CHECK(r.code == 0);
  CHECK(r.out == "1 -> 3\n2 -> 4\n5 -> 7\n");

  r = run({"eval", "witness", "6", "9"});
  CHECK(r.code == 0);
  CHECK(r.out == "6 -> 4\n9 -> 5\n");

  r = run({"eval", "xi", "2", "--emit", "json"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "{\"schema_version\":1,\"results\":[{\"x\":2,\"value\":4}]}\n");

  // the domain starts at 1
  r = run({"eval", "xi", "0"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error: "));

  r = run({"eval", "xi", "two"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "positions must be positive integers"));
}

TEST_CASE("compose prints the canonical composite") {
  CliResult r = run({"compose", "xi", "beta:1"});
  CHECK(r.code == 0);
  CHECK(r.out == "prefix=[] tail(start=1, period=1, drift=1, base=[1])\n");

  r = run({"compose", "xi", "xi", "--oracle"});
  CHECK(r.code == 0);
  CHECK(r.out == "prefix=[] tail(start=1, period=1, drift=1, base=[5])\n");

  r = run({"compose", "xi", "xi", "beta:4", "lambda:3", "--emit", "json"});
  CHECK(r.code == 0);
  CHECK(r.out == map_to_json(delta_gen(2)) + "\n");
}

TEST_CASE("classify prints the full membership report") {
  const CliResult r = run({"classify", "beta:4", "--n", "2"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "in_theta: true\n"
        "in_lambda: false\n"
        "in_gamma: true\n"
        "in_delta: false\n"
        "in_B: true\n"
        "in_P: true\n"
        "rank: aleph0\n"
        "nb_size: 2\n"
        "c_value: 3\n"
        "k_class: K_aleph0\n"
        "n: 2\n"
        "in_omega_n: false\n"
        "in_lambda_n: false\n"
        "in_theta_n: false\n"
        "in_delta_n: false\n"
        "in_H_n: true\n"
        "in_G_n: false\n");

  const CliResult j = run({"classify", "witness", "--emit", "json"});
  CHECK(j.code == 0);
  CHECK(contains(j.out, "\"k_class\":{\"kind\":\"k_finite\",\"l\":1}"));
  CHECK(contains(j.out, "\"in_G_n\":true"));

  const CliResult o = run({"classify", "witness", "--oracle"});
  CHECK(o.code == 0);
}

TEST_CASE("blocks prints both tail kinds") {
  CliResult r = run({"blocks", "witness"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "head: (none)\n"
        "tail: periodic(start=1, spatial_period=4, value_drift=2, "
        "shapes=[(offset=0, length=1, base_value=1), "
        "(offset=1, length=3, base_value=2)])\n");

  r = run({"blocks", "alpha:3"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "head: (start=1, length=1, value=1) (start=2, length=1, value=2)\n"
        "tail: infinite_block(start=3, value=3)\n");

  r = run({"blocks", "witness", "--emit", "json", "--oracle"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"kind\":\"periodic\""));
  CHECK(contains(r.out, "\"spatial_period\":4"));
}

TEST_CASE("gen prints canonical generator forms") {
  CliResult r = run({"gen", "delta:2"});
  CHECK(r.code == 0);
  CHECK(r.out == "prefix=[2] tail(start=2, period=1, drift=1, base=[2])\n");

  r = run({"gen", "family:[;1;1]"});
  CHECK(r.code == 0);
  CHECK(r.out == "prefix=[] tail(start=1, period=3, drift=1, base=[1,1,1])\n");

  r = run({"gen", "xi", "--emit", "json"});
  CHECK(r.code == 0);
  CHECK(r.out == map_to_json(xi()) + "\n");

  // even lambda parameters violate the family's precondition
  r = run({"gen", "lambda:2"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error: "));
}

TEST_CASE("factor theta-lambda emits a verified two-factor word") {
  const CliResult r = run({"factor", "xi", "--scheme", "theta-lambda", "--n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "{prefix=[] tail(start=1, period=1, drift=1, base=[3]) : theta}·"
        "{prefix=[5,4] tail(start=3, period=1, drift=1, base=[3]) : "
        "lambda_1}\n");

  // JSON words round-trip through verify reading stdin
  const CliResult j =
      run({"factor", "xi", "--scheme", "theta-lambda", "--n", "1", "--emit",
           "json"});
  CHECK(j.code == 0);
  const CliResult v = run({"verify", "--target", "xi"}, j.out);
  CHECK(v.code == 0);
  CHECK(contains(v.out, "composed_equals_target: yes\n"));
  CHECK(contains(v.out, "factor 1: ok\n"));
  CHECK(contains(v.out, "factor 2: ok\n"));
  CHECK(contains(v.out, "all ok\n"));
}

TEST_CASE("factor h and g emit verified words") {
  const CliResult g = run(
      {"factor", "witness", "--scheme", "g", "--n", "1", "--emit", "json"});
  CHECK(g.code == 0);
  const CliResult gv = run({"verify", "--target", "witness"}, g.out);
  CHECK(gv.code == 0);
  CHECK(contains(gv.out, "all ok\n"));

  const CliResult h = run(
      {"factor", "beta:4", "--scheme", "h", "--n", "2", "--emit", "json"});
  CHECK(h.code == 0);
  const CliResult hv =
      run({"verify", "--target", "beta:4", "--emit", "json"}, h.out);
  CHECK(hv.code == 0);
  CHECK(contains(hv.out, "\"all_ok\":true"));
}

TEST_CASE("factor delta handles the constant-head family only") {
  CliResult r = run({"factor", "identity", "--scheme", "delta", "--n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "xi·beta_1\n");

  r = run({"factor", "delta:2", "--scheme", "delta", "--n", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "xi·xi·beta_4·lambda_3\n");

  r = run({"factor", "xi", "--scheme", "delta", "--n", "1"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "constant-head delta family only"));
}

TEST_CASE("factor ksplit prints both factors and their K-classes") {
  const CliResult r = run({"factor", "witness", "--scheme", "ksplit"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "gamma1: prefix="));
  CHECK(contains(r.out, "gamma2: prefix="));
  CHECK(contains(r.out, "gamma1 k_class: K"));
  CHECK(contains(r.out, "gamma2 k_class: K"));

  const CliResult j =
      run({"factor", "witness", "--scheme", "ksplit", "--emit", "json"});
  CHECK(j.code == 0);
  CHECK(contains(j.out, "\"scheme\":\"ksplit\""));
  CHECK(contains(j.out, "\"gamma1\":{"));
  CHECK(contains(j.out, "\"gamma1_k_class\":{\"kind\":\"k_"));

  // xi lies in no finite K-class
  const CliResult bad = run({"factor", "xi", "--scheme", "ksplit"});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "error: "));
}

TEST_CASE("factor requires --n for the chain schemes") {
  const CliResult r = run({"factor", "xi", "--scheme", "h"});
  CHECK(r.code == 2);
  CHECK(r.err == "usage error: --n is required for scheme \"h\"\n");

  // unknown schemes are rejected by the option itself
  const CliResult bad = run({"factor", "xi", "--scheme", "mystery"});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "usage error: "));
}

TEST_CASE("verify reports mismatches with exit code 1") {
  GeneratorWord w;
  w.target_class = TargetClass{TargetClass::Kind::delta_word, 1};
  w.factors.push_back(GeneratorSymbol::make_xi());
  const CliResult r =
      run({"verify", "--target", "delta:1"}, word_to_json(w));
  CHECK(r.code == 1);
  CHECK(contains(r.out, "composed_equals_target: no\n"));
  CHECK(contains(r.out, "mismatch at x=1: composed=3, target=1\n"));
  CHECK(contains(r.out, "verification failed\n"));
}

TEST_CASE("verify reads a word from a file path") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "fencenat_cli_word.json";
  {
    std::ofstream f(path);
    f << word_to_json(delta_word(2, 1));
  }
  const CliResult r = run({"verify", path.string(), "--target", "delta:2"});
  fs::remove(path);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "all ok\n"));

  const CliResult missing =
      run({"verify", "/nonexistent/word.json", "--target", "xi"});
  CHECK(missing.code == 2);
  CHECK(contains(missing.err, "cannot read word file"));
}

TEST_CASE("usage and parse errors exit with code 2") {
  CliResult r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "usage error: "));

  r = run({});
  CHECK(r.code == 2);

  r = run({"check"});
  CHECK(r.code == 2);

  r = run({"check", "xi", "--bogus"});
  CHECK(r.code == 2);

  r = run({"check", "xi", "--emit", "yaml"});
  CHECK(r.code == 2);

  r = run({"check", "xi", "--horizon", "0"});
  CHECK(r.code == 2);

  r = run({"check", "prefix=[1,2"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "parse error: "));
  CHECK(contains(r.err, "(at offset "));

  r = run({"classify", "xi", "--n", "0"});
  CHECK(r.code == 2);
}

TEST_CASE("help requests exit cleanly") {
  const CliResult top = run({"--help"});
  CHECK(top.code == 0);
  CHECK(!top.out.empty());

  const CliResult sub = run({"factor", "--help"});
  CHECK(sub.code == 0);
  CHECK(contains(sub.out, "--scheme"));
}

}  // TEST_SUITE("cli")
