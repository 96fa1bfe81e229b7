// Copyright 2026 The seqmi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the CLI binary end to end: exit codes, output layout and
// byte-for-byte determinism across reruns and thread counts.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* path = std::getenv("SEQMI_CLI");
  REQUIRE_MESSAGE(path != nullptr, "SEQMI_CLI must point at the CLI binary");
  return path;
}

int run_cli(const std::string& args) {
  const std::string command = cli_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Compares data outputs byte for byte. The manifest records the output root,
// which legitimately differs between runs into different directories, so it
// only needs to exist.
bool directories_identical(const fs::path& a, const fs::path& b) {
  if (!fs::exists(a / "manifest.json") || !fs::exists(b / "manifest.json")) {
    return false;
  }
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().filename() == "manifest.json") continue;
    if (slurp(entry.path()) != slurp(b / entry.path().filename())) return false;
  }
  return true;
}

TEST_SUITE_BEGIN("cli");

TEST_CASE("missing subcommand and bad flags exit with a config error") {
  CHECK(run_cli("") != 0);
  CHECK(run_cli("no-such-command") != 0);
  CHECK(run_cli("roc --config /does/not/exist.cfg") != 0);
}

TEST_CASE("invalid config fields exit with code 2") {
  const fs::path dir = fs::temp_directory_path() / "seqmi_cli_bad";
  fs::remove_all(dir);
  CHECK(run_cli("roc --rounds 200 --out " + (dir / "o").string() +
                " --set mean.n=1") == 2);
  CHECK(run_cli("roc --rounds 200 --out " + (dir / "o").string() +
                " --set bogus.key=1") == 2);
  // Nothing was written.
  CHECK(!fs::exists(dir / "o"));
  fs::remove_all(dir);
}

TEST_CASE("numerical failures exit with code 3") {
  const fs::path dir = fs::temp_directory_path() / "seqmi_cli_numeric";
  fs::remove_all(dir);
  // A non-SPD covariance passes field validation (positive entries) but the
  // accountant bracket search cannot: epsilons far beyond double range.
  CHECK(run_cli("dpsgd-audit --rounds 50 --out " + dir.string() +
                " --set audit.epsilons=1e300") == 3);
  fs::remove_all(dir);
}

TEST_CASE("reruns and thread counts are byte-identical") {
  const fs::path base = fs::temp_directory_path() / "seqmi_cli_determinism";
  fs::remove_all(base);
  const std::string common = "lr-trace --rounds 300 --seed 9 --set mean.T=5";
  CHECK(run_cli(common + " --threads 1 --out " + (base / "a").string()) == 0);
  CHECK(run_cli(common + " --threads 1 --out " + (base / "b").string()) == 0);
  CHECK(run_cli(common + " --threads 4 --out " + (base / "c").string()) == 0);

  const fs::path sub = fs::path("lr-trace") / "default";
  CHECK(directories_identical(base / "a" / sub, base / "b" / sub));
  CHECK(directories_identical(base / "a" / sub, base / "c" / sub));
  fs::remove_all(base);
}

TEST_CASE("config file merges with flag overrides") {
  const fs::path base = fs::temp_directory_path() / "seqmi_cli_config";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path cfg = base / "run.cfg";
  {
    std::ofstream os(cfg);
    os << "[experiment]\nrounds = 200\n[mean]\nT = 3\nn = 10\n";
  }
  CHECK(run_cli("lr-trace --config " + cfg.string() + " --out " +
                (base / "out").string() + " --set mean.T=4") == 0);
  const std::string manifest =
      slurp(base / "out" / "lr-trace" / "default" / "manifest.json");
  // The flag override wins over the file value.
  CHECK(manifest.find("mean.T = 4") != std::string::npos);
  fs::remove_all(base);
}

TEST_SUITE_END();

}  // namespace
