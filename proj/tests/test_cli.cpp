#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;  // stdout and stderr
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(MSVORTEX_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) o.out += buf.data();
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ScratchDir {
  fs::path path = fs::temp_directory_path() / ("msvortex_test_cli_" + std::to_string(::getpid()));
  ScratchDir() { fs::create_directories(path); }
  ~ScratchDir() {
    std::error_code ignored;
    fs::remove_all(path, ignored);
  }
};

const std::string kSmall = "--n 500 --eps-end 1e-3";

}  // namespace

TEST_CASE("help and usage errors") {
  const Outcome help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("--eps-factor") != std::string::npos);

  const Outcome p2 = run_cli("--p 2");
  CHECK(p2.code == 2);
  CHECK(p2.out.find("--p") != std::string::npos);

  CHECK(run_cli("--bogus").code == 2);
  CHECK(run_cli("--k 0").code == 2);
  CHECK(run_cli("--method newton-only").code == 2);
}

TEST_CASE("runs and exit codes") {
  ScratchDir dir;
  const fs::path a = dir.path / "a.csv", b = dir.path / "b.csv", rep = dir.path / "r.json";

  const Outcome first = run_cli(kSmall + " --profile-out " + a.string() + " --report-out " + rep.string());
  CHECK(first.code == 0);
  CHECK(first.out.find("level") != std::string::npos);
  CHECK(fs::exists(rep));
  CHECK(slurp(rep).find("\"converged\": true") != std::string::npos);

  const Outcome second = run_cli(kSmall + " --profile-out " + b.string());
  CHECK(second.code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("r,u,b,du,db\n0,0,0,", 0) == 0);

  const Outcome seeded = run_cli("--n 500 --eps-start 1e-3 --eps-end 1e-3 --method newton-only --seed-profile " +
                                 a.string());
  CHECK(seeded.code == 0);

  CHECK(run_cli(kSmall + " --profile-out /nonexistent-dir/p.csv").code == 3);
  CHECK(run_cli("--method newton-only --seed-profile " + (dir.path / "missing.csv").string()).code == 3);
  const Outcome stuck = run_cli(kSmall + " --max-iter 1");
  CHECK(stuck.code == 4);
  CHECK(stuck.out.find("msvortex: ") != std::string::npos);

  const Outcome shoot = run_cli("--k 0 --method shooting");
  CHECK(shoot.code == 0);
  CHECK(shoot.out.find("oracle_a") != std::string::npos);
}
