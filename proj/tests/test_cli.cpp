#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Runs the installed binary with sh-quoted arguments, capturing stdout and
// stderr together; returns the exit status.
int run_cli(const std::string& args, std::string* output) {
  std::string cmd = std::string(DMCAP_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) {
    text.append(buf, got);
  }
  int status = pclose(pipe);
  if (output) *output = text;
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

class TempDir {
 public:
  TempDir() {
    char tmpl[] = "/tmp/dmcap_cli_test_XXXXXX";
    REQUIRE(mkdtemp(tmpl) != nullptr);
    path_ = tmpl;
  }
  ~TempDir() {
    std::string cmd = "rm -rf " + path_;
    int rc = std::system(cmd.c_str());
    static_cast<void>(rc);
  }
  std::string file(const std::string& name) const { return path_ + "/" + name; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// Uniform start converges immediately on symmetric channels, so CLI runs
// that need a multi-iteration trace use this asymmetric channel.
const char* kAsym23 =
    "type matrix\n"
    "row 0.6 0.3 0.1\n"
    "row 0.2 0.3 0.5\n";

// One tiny-lambda accelerated step collapses the prior onto the first
// vertex; iteration 2 then hits a domination failure.
const char* kCollapse =
    "type matrix\n"
    "row 1 0\n"
    "row 0.0001 0.9999\n";

const char* kBg =
    "type bernoulli_gaussian\n"
    "p_impulse 0.3\n"
    "sigma_b 0.01\n"
    "sigma_g 1.0\n";

}  // namespace

TEST_CASE("run converges and the trace matches the printed iteration count") {
  TempDir dir;
  write_file(dir.file("ch.txt"), kAsym23);
  std::string out;
  int rc = run_cli("run " + dir.file("ch.txt") + " classical --output " +
                       dir.file("trace.csv"),
                   &out);
  CHECK(rc == 0);
  CHECK(contains(out, "termination: Converged"));
  CHECK(contains(out, "capacity:"));

  std::string trace = read_file(dir.file("trace.csv"));
  std::size_t rows = count_lines(trace) - 1;
  std::size_t printed = 0;
  std::istringstream ss(out);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("iterations: ", 0) == 0) {
      printed = std::strtoull(line.c_str() + 12, nullptr, 10);
    }
  }
  CHECK(printed > 1);
  CHECK(rows == printed);
}

TEST_CASE("run with a looser tolerance stops earlier") {
  TempDir dir;
  write_file(dir.file("ch.txt"), kAsym23);
  std::string tight_out;
  std::string loose_out;
  CHECK(run_cli("run " + dir.file("ch.txt") + " classical --output " +
                    dir.file("a.csv"),
                &tight_out) == 0);
  CHECK(run_cli("run " + dir.file("ch.txt") +
                    " classical --tolerance 1e-6 --output " + dir.file("b.csv"),
                &loose_out) == 0);
  CHECK(count_lines(read_file(dir.file("b.csv"))) <
        count_lines(read_file(dir.file("a.csv"))));
}

TEST_CASE("run reports numerical failure with exit 3 and a partial trace") {
  TempDir dir;
  write_file(dir.file("ch.txt"), kCollapse);
  std::string out;
  int rc = run_cli("run " + dir.file("ch.txt") +
                       " matz --lambda 1e-7 --output " + dir.file("t.csv"),
                   &out);
  CHECK(rc == 3);
  CHECK(contains(out, "termination: NumericalFailure"));
  CHECK(count_lines(read_file(dir.file("t.csv"))) == 2);  // header + 1 row
}

TEST_CASE("run exits 1 when the iteration cap stops it") {
  TempDir dir;
  write_file(dir.file("ch.txt"), kAsym23);
  std::string out;
  int rc = run_cli("run " + dir.file("ch.txt") +
                       " classical --max-iter 3 --output " + dir.file("t.csv"),
                   &out);
  CHECK(rc == 1);
  CHECK(contains(out, "termination: MaxIterations"));
  CHECK(count_lines(read_file(dir.file("t.csv"))) == 4);
}

TEST_CASE("run rejects bad invocations with exit 2") {
  TempDir dir;
  write_file(dir.file("bad.txt"), "type nonsense\n");
  std::string out;
  CHECK(run_cli("run /nonexistent.txt classical", &out) == 2);
  CHECK(run_cli("run " + dir.file("bad.txt") + " classical", &out) == 2);
  write_file(dir.file("ch.txt"), kAsym23);
  CHECK(run_cli("run " + dir.file("ch.txt") + " sideways", &out) == 2);
  CHECK(run_cli("run " + dir.file("ch.txt") + " matz --lambda -1", &out) == 2);
}

TEST_CASE("compare runs all variants and they agree") {
  TempDir dir;
  write_file(dir.file("ch.txt"), kAsym23);
  std::string out;
  int rc = run_cli("compare " + dir.file("ch.txt") + " --output " + dir.path(),
                   &out);
  CHECK(rc == 0);
  for (const char* name : {"classical.csv", "matz.csv", "proximal.csv"}) {
    CHECK(count_lines(read_file(dir.file(name))) >= 2);
  }
  std::string summary = read_file(dir.file("summary.txt"));
  CHECK(contains(summary, "classical"));
  CHECK(contains(summary, "matz"));
  CHECK(contains(summary, "proximal"));
  CHECK(count_lines(summary) == 4);  // header + one line per variant

  // Capacities in the summary agree pairwise to the printed precision.
  std::vector<double> caps;
  std::istringstream ss(summary);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    std::istringstream cells(line);
    std::string name;
    double cap = 0.0;
    cells >> name >> cap;
    caps.push_back(cap);
  }
  REQUIRE(caps.size() == 3);
  for (double c : caps) CHECK(std::abs(c - caps[0]) <= 1e-9);
}

TEST_CASE("compare exits 4 when truncated runs disagree") {
  TempDir dir;
  write_file(dir.file("ch.txt"), kBg);
  std::string out;
  int rc = run_cli("compare " + dir.file("ch.txt") + " --max-iter 3 --output " +
                       dir.path(),
                   &out);
  CHECK(rc == 4);
}

TEST_CASE("verify runs the identity suite") {
  std::string out;
  int rc = run_cli("verify 50 --seed 42", &out);
  CHECK(rc == 0);
  for (const char* name : {"jensen-penalty", "decomposition", "projection",
                           "improvement-bound", "oracle-agreement"}) {
    CHECK(contains(out, name));
  }
  CHECK(contains(out, "pass"));
  CHECK_FALSE(contains(out, "FAIL"));

  CHECK(run_cli("verify 0", &out) == 2);
}

TEST_CASE("spec-dump round-trips a channel byte for byte") {
  TempDir dir;
  write_file(dir.file("ch.txt"), "type bsc\nepsilon 0.1\n");
  std::string out;
  CHECK(run_cli("spec-dump " + dir.file("ch.txt") + " --output " +
                    dir.file("d1.txt"),
                &out) == 0);
  CHECK(run_cli("spec-dump " + dir.file("d1.txt") + " --output " +
                    dir.file("d2.txt"),
                &out) == 0);
  std::string d1 = read_file(dir.file("d1.txt"));
  CHECK(d1 == read_file(dir.file("d2.txt")));
  CHECK(contains(d1, "type matrix"));
  CHECK(contains(d1, "0.9"));
}

TEST_CASE("help and missing subcommand") {
  std::string out;
  CHECK(run_cli("--help", &out) == 0);
  CHECK(contains(out, "run"));
  CHECK(contains(out, "compare"));
  CHECK(contains(out, "verify"));
  CHECK(run_cli("", &out) == 2);
}
