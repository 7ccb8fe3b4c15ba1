#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// End-to-end tests of the installed command-line binary. The harness passes
// its location through AFM_CLI_PATH; every invocation runs in a scratch
// directory so trace output never touches the source tree.

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("afm_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("AFM_CLI_PATH");
  REQUIRE_MESSAGE(bin != nullptr, "AFM_CLI_PATH must point at the CLI binary");

  static int counter = 0;
  const fs::path out_file = scratch_dir() / ("out" + std::to_string(counter));
  const fs::path err_file = scratch_dir() / ("err" + std::to_string(counter));
  ++counter;

  const std::string cmd = "cd '" + scratch_dir().string() + "' && '" +
                          std::string(bin) + "' " + args + " > '" +
                          out_file.string() + "' 2> '" + err_file.string() + "'";
  const int raw = std::system(cmd.c_str());

  CliResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

size_t line_count(const fs::path& p) { return lines(slurp(p)).size(); }

constexpr const char* kTraceHeader =
    "k,f_y,F_x,grad_norm,restart,gd_gamma,sigma,beta,gamma";

}  // namespace

TEST_CASE("tuned-coefficient table: values, order, and determinism") {
  const CliResult r = run_cli("table3 --q 0.1");
  REQUIRE(r.code == 0);
  const std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "method,alpha_L,beta,gamma,rho");

  const std::vector<std::string> row = fields(ls[1]);
  REQUIRE(row.size() == 5);
  CHECK(row[0] == "ogm-q");
  CHECK(num(row[1]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(num(row[2]) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(num(row[3]) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(num(row[4]) == doctest::Approx(0.6).epsilon(1e-12));

  CHECK(fields(ls[2])[0] == "fgmp-q");
  CHECK(fields(ls[3])[0] == "fgm-q");
  const std::vector<std::string> gm = fields(ls[4]);
  CHECK(gm[0] == "gm-q");
  CHECK(num(gm[1]) == doctest::Approx(2.0 / 1.1).epsilon(1e-12));
  CHECK(num(gm[4]) == doctest::Approx(9.0 / 11.0).epsilon(1e-12));

  // Rates sorted ascending: the tuned pair leads, plain gradient trails.
  CHECK(num(fields(ls[1])[4]) < num(fields(ls[2])[4]));
  CHECK(num(fields(ls[2])[4]) < num(fields(ls[3])[4]));
  CHECK(num(fields(ls[3])[4]) < num(fields(ls[4])[4]));

  CHECK(run_cli("table3 --q 0.1").out == r.out);
}

TEST_CASE("spectrum curve for a custom coefficient pair") {
  const CliResult r = run_cli("rho-curve --q 0.1 --beta 0 --gamma 0 --n 10");
  REQUIRE(r.code == 0);
  const std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 11);
  CHECK(ls[0] == "method,lambda,r1_abs,r2_abs,rho");

  const std::vector<std::string> first = fields(ls[1]);
  CHECK(first[0] == "custom");
  CHECK(num(first[1]) == 0.1);  // 17-digit output round-trips exactly
  CHECK(num(first[4]) == doctest::Approx(0.9).epsilon(1e-15));

  const std::vector<std::string> last = fields(ls[10]);
  CHECK(num(last[1]) == 1.0);  // grid endpoint hit exactly
  CHECK(num(last[4]) == 0.0);

  for (size_t i = 2; i < ls.size(); ++i)
    CHECK(num(fields(ls[i])[4]) < num(fields(ls[i - 1])[4]));
}

TEST_CASE("spectrum curve for the tuned pair is flat-topped at the endpoints") {
  const CliResult r = run_cli("rho-curve --q 0.1 --method ogm-q");
  REQUIRE(r.code == 0);
  const std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 402);  // default 401-point grid

  const std::vector<std::string> first = fields(ls[1]);
  const std::vector<std::string> last = fields(ls[401]);
  CHECK(num(first[4]) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(num(last[4]) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(first[2] == first[3]);  // critically damped at the lower edge

  for (size_t i = 1; i < ls.size(); ++i) {
    CHECK(fields(ls[i])[0] == "ogm-q");
    CHECK(num(fields(ls[i])[4]) <= 0.6 + 1e-12);
  }
}

TEST_CASE("two-mode experiment writes traces and a summary") {
  const CliResult r = run_cli("run case2 --iters 60 --out case2_a");
  REQUIRE(r.code == 0);

  const fs::path dir = scratch_dir() / "case2_a";
  const std::vector<std::string> expected = {
      "case2_gm.csv", "case2_fgm-gr.csv", "case2_ogmp-gr-gd1.0.csv",
      "case2_ogmp-gr-gd0.8.csv", "case2_ogmp-gr-gd0.5.csv"};
  for (const std::string& name : expected) {
    REQUIRE(fs::exists(dir / name));
    const std::vector<std::string> ls = lines(slurp(dir / name));
    CHECK(ls[0] == kTraceHeader);
    CHECK(ls.size() == 62);  // header + rows 0..60
  }

  const fs::path summary = dir / "case2_summary.csv";
  REQUIRE(fs::exists(summary));
  const std::vector<std::string> sl = lines(slurp(summary));
  REQUIRE(sl.size() == 6);
  CHECK(sl[0] ==
        "experiment,variant,solver,status,rows,grad_evals,prox_evals,f_ref,"
        "final_rel_gap,iters_to_1e-5,iters_to_1e-10");

  const std::vector<std::string> gm = fields(sl[1]);
  REQUIRE(gm.size() == 11);
  CHECK(gm[0] == "case2");
  CHECK(gm[1].empty());
  CHECK(gm[2] == "gm");
  CHECK(gm[3] == "maxiters");
  CHECK(gm[4] == "61");
  CHECK(gm[5] == "61");
  CHECK(gm[6] == "0");
  CHECK(gm[7] == "0");  // exact optimum of the fixed instance

  // Determinism: a second run produces byte-identical artifacts.
  REQUIRE(run_cli("run case2 --iters 60 --out case2_b").code == 0);
  for (const std::string& name : expected)
    CHECK(slurp(dir / name) == slurp(scratch_dir() / "case2_b" / name));
  CHECK(slurp(summary) == slurp(scratch_dir() / "case2_b" / "case2_summary.csv"));
}

TEST_CASE("option defaults can come from a config file") {
  std::ofstream(scratch_dir() / "exp.ini") << "[run]\niters=30\n";

  REQUIRE(run_cli("run case2 --config exp.ini --out cfg_a").code == 0);
  CHECK(line_count(scratch_dir() / "cfg_a" / "case2_gm.csv") == 32);

  // An explicit command-line value beats the config file.
  REQUIRE(run_cli("run case2 --config exp.ini --iters 40 --out cfg_b").code == 0);
  CHECK(line_count(scratch_dir() / "cfg_b" / "case2_gm.csv") == 42);

  // The flag also parses before the subcommand name.
  REQUIRE(run_cli("--config exp.ini run case2 --out cfg_c").code == 0);
  CHECK(line_count(scratch_dir() / "cfg_c" / "case2_gm.csv") == 32);
}

TEST_CASE("usage errors: exit codes and messages") {
  const CliResult unknown = run_cli("run nope");
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown experiment") != std::string::npos);

  const CliResult bad_solver = run_cli("run case2 --iters 5 --solvers bogus");
  CHECK(bad_solver.code == 2);
  CHECK(bad_solver.err.find("solver 'bogus'") != std::string::npos);

  CHECK(run_cli("").code != 0);  // a subcommand is required

  const CliResult bad_q = run_cli("table3 --q 1.5");
  CHECK(bad_q.code == 2);
  CHECK(bad_q.err.find("(0, 1)") != std::string::npos);

  const CliResult bad_method = run_cli("rho-curve --q 0.1 --method bogus");
  CHECK(bad_method.code == 2);
  CHECK(bad_method.err.find("unknown method") != std::string::npos);

  const CliResult both = run_cli("rho-curve --q 0.1 --method ogm-q --beta 0.5");
  CHECK(both.code == 2);
  CHECK(both.err.find("either") != std::string::npos);
}
