#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cosetlab/cli.hpp"
#include "cosetlab/errors.hpp"
#include "cosetlab/matrix_io.hpp"
#include "cosetlab/random.hpp"
#include "cosetlab/report.hpp"
#include "oracle.hpp"

using namespace cosetlab;
namespace fs = std::filesystem;

namespace {

struct Captured {
  int code = -1;
  std::string out;
};

// Runs the CLI binary through the shell, stdout captured, stderr dropped.
Captured run_binary(const std::string& args) {
  const char* bin = std::getenv("COSETLAB_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "COSETLAB_CLI is not set");
  const std::string cmd = std::string("'") + bin + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Captured c;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) c.out.append(buf, n);
  const int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

Captured run_inprocess(std::vector<std::string> args) {
  args.insert(args.begin(), "cosetlab");
  std::ostringstream out, log;
  Captured c;
  c.code = run(args, out, log);
  c.out = out.str();
  return c;
}

fs::path scratch_dir() {
  const auto p = fs::temp_directory_path() / ("cosetlab_test_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("matrices round trip exactly") {
  Rng rng(4);
  for (std::size_t dim : {1u, 3u, 8u}) {
    const Matrix m = random_ginibre(dim, dim, rng) * 1e-7;
    std::stringstream ss;
    write_matrix(ss, m);
    CHECK(read_matrix(ss) == m);
  }
  std::stringstream bad("matrix 2\n1 0 0 0\n0 0 x 0\n");
  CHECK_THROWS_AS(read_matrix(bad), UsageError);
  std::stringstream short_input("matrix 2\n1 0 0 0\n");
  CHECK_THROWS_AS(read_matrix(short_input), UsageError);
}

TEST_CASE("POVMs round trip exactly") {
  const auto g = make_group(GroupRecipe::symmetric(3));
  const auto fam = candidate_family(g, FamilySpec::parse("kind=prime_order_all p=2"));
  const POVM p = pgm_projective(fam, 1);
  std::stringstream ss;
  write_povm(ss, p);
  const POVM q = read_povm(ss);
  REQUIRE(q.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(q.label(i) == p.label(i));
    CHECK(q.element(i).matrix() == p.element(i).matrix());
  }
  const auto dir = scratch_dir();
  save_matrix((dir / "m.txt").string(), p.element(0).matrix());
  CHECK(load_matrix((dir / "m.txt").string()) == p.element(0).matrix());
  CHECK_THROWS_AS(load_matrix((dir / "missing.txt").string()), UsageError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(2.0 / 3.0) == "0.666666666667");
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) {
    double back = 0;
    const auto s = format_exact(v);
    std::istringstream(s) >> back;
    CHECK(back == v);
  }
}

TEST_CASE("sweep CSV and JSON") {
  const auto g = make_group(GroupRecipe::semidirect({5}, 2, -1));
  const auto fam = candidate_family(g, FamilySpec::parse("kind=sdp"));
  SweepOptions opt;
  opt.measure_tcs = false;
  const auto rows = sweep(fam, 1, 2, opt);
  const auto csv = sweep_csv(rows);
  CHECK(csv.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  // absent measured TCS cells stay empty
  CHECK(csv.find(",,,") != std::string::npos);
  const auto j = sweep_json(fam, rows);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["k"] == 1);
}

TEST_CASE("argument parsing") {
  std::ostringstream sink;
  const auto c = parse_run_config({"cosetlab", "csi-sweep", "--group", "kind=dihedral n=5", "--family", "kind=sdp",
                                   "--k-min", "2", "--k-max", "3", "--tol", "1e-6"},
                                  sink);
  REQUIRE(c);
  CHECK(c->command == "csi-sweep");
  CHECK(c->k_min == 2);
  CHECK(c->tol == 1e-6);
  CHECK_FALSE(c->dense_cap);
  CHECK_FALSE(parse_run_config({"cosetlab", "--help"}, sink));
  CHECK_THROWS_AS(parse_run_config({"cosetlab"}, sink), UsageError);
  CHECK_THROWS_AS(parse_run_config({"cosetlab", "csi-sweep", "--group", "kind=cyclic n=4"}, sink), UsageError);
  CHECK_THROWS_AS(parse_run_config({"cosetlab", "hn-check", "--format", "xml"}, sink), UsageError);
  CHECK_THROWS_AS(parse_run_config({"cosetlab", "frobnicate"}, sink), UsageError);
}

TEST_CASE("config files supply defaults and flags override them") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"group": "kind=symmetric n=4", "family": "kind=sym_involution", "k_max": 2, "seed": 9})";
  std::ostringstream sink;
  const auto c = parse_run_config({"cosetlab", "csi-sweep", "--config", cfg.string(), "--seed", "3"}, sink);
  REQUIRE(c);
  CHECK(c->group == "kind=symmetric n=4");
  CHECK(c->k_max == 2);
  CHECK(c->seed == 3);
  std::ofstream(dir / "bad.json") << R"({"colour": 1})";
  CHECK_THROWS_AS(parse_run_config({"cosetlab", "hn-check", "--config", (dir / "bad.json").string()}, sink), UsageError);
  std::ofstream(dir / "type.json") << R"({"trials": "many"})";
  CHECK_THROWS_AS(parse_run_config({"cosetlab", "hn-check", "--config", (dir / "type.json").string()}, sink), UsageError);
}

TEST_CASE("in-process exit codes") {
  CHECK(run_inprocess({"hn-check", "--trials", "5"}).code == kExitOk);
  CHECK(run_inprocess({"hn-check", "--trials", "0"}).code == kExitUsage);
  CHECK(run_inprocess({"verify", "--group", "kind=symmetric n=3", "--tol", "1e-300"}).code == kExitAssertion);
  CHECK(run_inprocess({"csi-sweep", "--group", "kind=symmetric n=4", "--family", "kind=sym_involution", "--dense-cap", "10"})
            .code == kExitCapacity);
  CHECK(run_inprocess({"csi-sweep", "--group", "kind=semidirect A=Z_5 B=Z_2 action=power:2", "--family", "kind=sdp"})
            .code == kExitUsage);
  const auto v = run_inprocess({"verify", "--group", "kind=dihedral n=4", "--family", "kind=prime_order_all p=2"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("projector_overlap_law") != std::string::npos);
  CHECK(v.out.find(",fail\n") == std::string::npos);
}

TEST_CASE("binary exit codes and byte-identical output") {
  const std::vector<std::string> commands{
      "verify --group 'kind=symmetric n=3'",
      "csi-sweep --group 'kind=dihedral n=5' --family kind=sdp --k-min 1 --k-max 3",
      "tcs-sweep --group 'kind=symmetric n=4' --family kind=sym_involution --k-max 2 --format json",
      "qes-security --n 4 --m 2 --k 0 --seed 5",
      "hn-check --trials 20 --seed 11"};
  for (const auto& cmd : commands) {
    const auto a = run_binary(cmd);
    const auto b = run_binary(cmd);
    CHECK_MESSAGE(a.code == 0, cmd);
    CHECK(!a.out.empty());
    CHECK(a.out == b.out);
  }
  CHECK(run_binary(commands.back()).out == run_inprocess({"hn-check", "--trials", "20", "--seed", "11"}).out);
  const auto dir = scratch_dir();
  const auto file = (dir / "sweep.csv").string();
  CHECK(run_binary("csi-sweep --group 'kind=dihedral n=5' --family kind=sdp --out '" + file + "'").code == 0);
  CHECK(slurp(file).rfind(kSweepCsvHeader, 0) == 0);
  CHECK(run_binary("hn-check --bogus").code == 2);
  CHECK(run_binary("verify --group 'kind=symmetric n=3' --tol 1e-300").code == 1);
  CHECK(run_binary("verify --group 'kind=symmetric n=5' --dense-cap 100").code == 3);
  fs::remove_all(dir);
}
