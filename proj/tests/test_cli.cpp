#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "torsionkit/cli.hpp"
#include "torsionkit/presentation_io.hpp"

using namespace torsionkit;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("torsionkit_cli_" + name);
  write_file(path.string(), text);
  return path.string();
}

}  // namespace

TEST_CASE("word problem exit codes") {
  const auto c2 = temp_file("c2.txt", "gens: 1\nrel: x0^2\n");
  const auto f1 = temp_file("f1.txt", "gens: 1\n");
  auto r = cli({"wp", c2, "x0^4", "--engine", "closure", "--fuel", "10000"});
  CHECK(r.code == kExitProved);
  CHECK(r.out.starts_with("verdict proved\n"));
  CHECK(cli({"wp", c2, "x0", "--engine", "quotient", "--fuel", "100", "--degree", "4"}).code == kExitRefuted);
  CHECK(cli({"wp", c2, "x0^2", "--engine", "tc", "--fuel", "100"}).code == kExitProved);
  CHECK(cli({"wp", c2, "x0", "--engine", "kb", "--fuel", "1000"}).code == kExitRefuted);
  CHECK(cli({"wp", f1, "x0", "--engine", "closure", "--fuel", "1000"}).code == kExitUnknown);
}

TEST_CASE("usage errors") {
  const auto c2 = temp_file("c2u.txt", "gens: 1\nrel: x0^2\n");
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"wp", c2, "x0"}).code == kExitUsage);
  CHECK(cli({"wp", c2, "x0", "--engine", "quotient", "--fuel", "100"}).code == kExitUsage);
  CHECK(cli({"wp", c2, "x0", "--engine", "magic", "--fuel", "1"}).code == kExitUsage);
  CHECK(cli({"wp", c2, "x7", "--engine", "closure", "--fuel", "1"}).code == kExitUsage);
  CHECK(cli({"abel", "/nonexistent/file"}).code == kExitUsage);
  const auto bad = temp_file("bad.txt", "gens: 1\nrel: y\n");
  auto r = cli({"abel", bad});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("small subcommands") {
  CHECK(cli({"pair", "1", "2"}).out == "8\n");
  CHECK(cli({"pair", "--unpair", "8"}).out == "1 2\n");
  const auto xy = temp_file("xy.txt", "gens: 2\nrel: x0^2\nrel: x1^3\nrel: x0 x1 x0^-1 x1^-1\n");
  CHECK(cli({"abel", xy}).out == "invariants 6\n");
  auto tc = cli({"tc", xy, "--max-cosets", "100"});
  CHECK(tc.code == kExitProved);
  CHECK(tc.out.starts_with("index 6\n"));
  CHECK(cli({"kb", xy, "--fuel", "10000"}).out.find("confluent yes") != std::string::npos);
}

TEST_CASE("torsion orders from the command line") {
  const auto c6 = temp_file("c6.txt", "gens: 1\nrel: x0^6\n");
  auto r = cli({"torord", c6, "--bound", "6", "--fuel", "100000"});
  CHECK(r.code == kExitProved);
  CHECK(r.out.find("order 6 word x0 stage 1 refuted 1,2,3") != std::string::npos);
}

TEST_CASE("stream output is deterministic") {
  const auto xy = temp_file("tfin.txt", "gens: 2\nrel: x0^2\nrel: x1^3\n");
  const auto out_path = (std::filesystem::temp_directory_path() / "torsionkit_cli_tf_out.txt").string();
  auto a = cli({"tf", xy, "--emit", "4", "-o", out_path});
  CHECK(a.code == kExitProved);
  const std::string first = read_file(out_path);
  const std::string first_prov = read_file(out_path + ".prov");
  auto b = cli({"tf", xy, "--emit", "4", "-o", out_path});
  CHECK(read_file(out_path) == first);
  CHECK(read_file(out_path + ".prov") == first_prov);
  CHECK(first_prov.starts_with("rel 0: cause "));

  auto c = cli({"construct", "pn", "--prime", "3", "--program", "builtin:halt_on_set:1", "--emit", "10"});
  auto d = cli({"construct", "pn", "--prime", "3", "--program", "builtin:halt_on_set:1", "--emit", "10"});
  CHECK(c.code == kExitProved);
  CHECK(c.out == d.out);
  CHECK(c.out.starts_with("gens: omega\nstream: pn 3 "));
}
