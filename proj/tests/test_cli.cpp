// Runs the dandelion executable end to end.

#include <doctest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dandelion/distribution.hpp"
#include "dandelion/oracle.hpp"

namespace fs = std::filesystem;
using namespace dandelion;

namespace {

struct Result {
  int exit_code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " DANDELION_CLI_PATH " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "dandelion_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("calibrate") {
  const Result ok = run("calibrate --p 0.4 --rho 0.26 --n 100");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("q = 0.2224") != std::string::npos);
  CHECK(ok.out.find("rho_interval = (-0.6666666666666667, 1)") != std::string::npos);

  const Result zero = run("calibrate --p 0.4 --rho 0 --n 100 --format json");
  CHECK(zero.exit_code == 0);
  const auto j = nlohmann::json::parse(zero.out);
  CHECK(std::abs(j["data"]["beta"].get<double>()) < 1e-12);
  CHECK(j["manifest"]["command"] == "calibrate");

  const std::string cmd = DANDELION_CLI_PATH " calibrate --p 0.4 --rho -0.7 --n 100 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string err;
  std::array<char, 1024> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) err.append(buf.data(), n);
  CHECK(WEXITSTATUS(pclose(pipe)) == 2);
  CHECK(err.find("(-0.6666666666666667, 1)") != std::string::npos);
}

TEST_CASE("pmf") {
  const Result binom = run("pmf --p 0.4 --rho 0 --n 100");
  CHECK(binom.exit_code == 0);
  std::istringstream in(binom.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "l,mass,log_mass");
  int rows = 0;
  double total = 0.0;
  const LossPmf ref = loss_pmf(make_config(100, 0.4, 0.0));
  while (std::getline(in, line)) {
    const double mass = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(mass - ref[rows]) < 1e-15);
    total += mass;
    ++rows;
  }
  CHECK(rows == 101);
  CHECK(std::abs(total - 1.0) < 1e-12);

  SUBCASE("byte-identical reruns, file output with sidecar manifest") {
    const fs::path dir = scratch_dir();
    CHECK(run("pmf --p 0.4 --rho -0.26 --n 100 --out pmf_neg.csv",
              "DANDELION_OUTPUT_DIR=" + dir.string())
              .exit_code == 0);
    CHECK(run("pmf --p 0.4 --rho -0.26 --n 100 --out " + (dir / "pmf_neg2.csv").string())
              .exit_code == 0);
    CHECK(read_file(dir / "pmf_neg.csv") == read_file(dir / "pmf_neg2.csv"));
    const auto manifest = nlohmann::json::parse(read_file(dir / "pmf_neg.csv.manifest.json"));
    CHECK(manifest["command"] == "pmf");
    CHECK(manifest["parameters"]["rho"] == "-0.26");
  }
  SUBCASE("errors") {
    CHECK(run("pmf --p 0.4 --rho 1.2 --n 100").exit_code == 2);
    CHECK(run("pmf --p 0.4 --rho 0 --n 100 --format xml").exit_code == 2);
    CHECK(run("pmf --p 0.4 --rho 0 --out /nonexistent-dir/x.csv").exit_code == 3);
    CHECK(run("pmf --rho 0").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("").exit_code == 2);
  }
}

TEST_CASE("metrics") {
  const Result r = run("metrics --p 0.4 --rho 0 --n 100");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["data"]["mode"].get<int>() == 40);
  CHECK(j["data"]["var"].get<int>() == 52);

  const auto median = nlohmann::json::parse(run("metrics --p 0.4 --rho 0 --n 100 --level 0.5").out);
  CHECK(median["data"]["var"].get<int>() == 40);

  CHECK(run("metrics --p 0.4 --rho 0 --n 100 --level 1.5").exit_code == 2);
}

TEST_CASE("scan") {
  const fs::path dir = scratch_dir();
  const Result a = run("scan --p 0.4 --n 100 --points 201 --out " + (dir / "scan_a.csv").string());
  const Result b = run("scan --p 0.4 --n 100 --points 201 --out " + (dir / "scan_b.csv").string());
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  const std::string text = read_file(dir / "scan_a.csv");
  CHECK(text == read_file(dir / "scan_b.csv"));
  CHECK(text.find("# rho_star=-0.461745") != std::string::npos);

  const auto j = nlohmann::json::parse(run("scan --p 0.4 --n 100 --format json").out);
  CHECK(j["data"]["points"].size() == 201);
  CHECK(j["data"]["rho_star"].get<double>() == doctest::Approx(-0.461745).epsilon(1e-6));

  CHECK(run("scan --p 0.4 --n 100 --points 2").exit_code == 2);
}

TEST_CASE("sample") {
  const Result a = run("sample --p 0.4 --rho -0.26 --n 100 --count 5000 --seed 11");
  const Result b = run("sample --p 0.4 --rho -0.26 --n 100 --count 5000 --seed 11");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("draw_index,l0,loss\n", 0) == 0);

  const auto j = nlohmann::json::parse(
      run("sample --p 0.4 --rho -0.26 --n 100 --count 10 --seed 11 --format json").out);
  CHECK(j["manifest"]["seed"].get<std::uint64_t>() == 11);
  CHECK(j["manifest"]["generator"].get<std::string>() == kSamplerGenerator);
  CHECK(j["data"]["loss"].size() == 10);

  CHECK(run("sample --p 0.4 --rho -0.26 --n 100 --count 0").exit_code == 2);
}

TEST_CASE("sample histogram against pmf output, 1e6 draws") {
  const fs::path dir = scratch_dir();
  REQUIRE(run("sample --p 0.4 --rho -0.26 --n 100 --count 1000000 --seed 3 --out " +
              (dir / "draws.csv").string())
              .exit_code == 0);
  REQUIRE(run("pmf --p 0.4 --rho -0.26 --n 100 --out " + (dir / "pmf.csv").string()).exit_code == 0);

  std::vector<double> hist(101, 0.0);
  {
    std::ifstream in(dir / "draws.csv");
    std::string line;
    std::getline(in, line);
    double count = 0;
    while (std::getline(in, line)) {
      hist[std::stoi(line.substr(line.rfind(',') + 1))] += 1;
      ++count;
    }
    CHECK(count == 1000000);
    for (auto& h : hist) h /= count;
  }
  double tv = 0.0;
  {
    std::ifstream in(dir / "pmf.csv");
    std::string line;
    std::getline(in, line);
    int l = 0;
    while (std::getline(in, line)) {
      const auto first = line.find(',');
      const double mass = std::stod(line.substr(first + 1, line.find(',', first + 1) - first - 1));
      tv += std::abs(hist[l++] - mass);
    }
  }
  CHECK(0.5 * tv < 0.005);
}
