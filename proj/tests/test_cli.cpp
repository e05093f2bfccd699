#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "csv.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using prcg_cli::parse_spec;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("prcg_cli_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(std::vector<std::string> args, std::string* log = nullptr) {
  args.insert(args.begin(), "prcg_cli");
  std::ostringstream out;
  const int rc = prcg_cli::run(args, out);
  if (log) *log = out.str();
  return rc;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("parse_spec") {
  CHECK(parse_spec("cg:6").kind == PRCG_CHEBYSHEV_GAUSS);
  CHECK(parse_spec("cg:6").cg_points == 6);
  CHECK(parse_spec("be").substeps == 1);
  CHECK(parse_spec("gauss4:6").kind == PRCG_GAUSS4);
  CHECK(parse_spec("trbdf2:2").substeps == 2);
  CHECK(prcg_cli::spec_string(parse_spec("erk4")) == "erk4:1");
  CHECK_THROWS(parse_spec("cg"));
  CHECK_THROWS(parse_spec("be:0"));
  CHECK_THROWS(parse_spec("be:x"));
  CHECK_THROWS(parse_spec("rk45:1"));
}

TEST_CASE("number format keeps at least 15 significant digits") {
  for (double v : {1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.1}) {
    const std::string s = prcg_cli::format_number(v);
    CHECK(s.find('e') != std::string::npos);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(prcg_cli::format_number(INFINITY) == "inf");
}

TEST_CASE("analyze: closed forms at z = 1") {
  TempDir d;
  const fs::path out = d.path / "a.csv";
  REQUIRE(cli({"analyze", "--specs", "cg:0", "--z", "1", "--out", out.string()}) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"z", "abs_R[cg:0]", "K[cg:0]"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("analyze: curves start near 0 and approach 1") {
  TempDir d;
  const fs::path out = d.path / "a.csv";
  REQUIRE(cli({"analyze", "--specs", "cg:0,cg:1,cg:2,cg:4,cg:20", "--z-min", "1e-2", "--z-max", "1e4",
               "--points", "60", "--out", out.string()}) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 61);
  CHECK(std::stod(rows[1][0]) == doctest::Approx(1e-2));
  CHECK(std::stod(rows[60][0]) == 1e4);
  for (size_t c = 2; c < rows[0].size(); c += 2) {
    CHECK(std::stod(rows[1][c]) < 0.01);
    CHECK(std::stod(rows[60][c]) > 0.5);
  }
}

TEST_CASE("analyze: empty spec list fails without writing") {
  TempDir d;
  const fs::path out = d.path / "none.csv";
  std::string log;
  CHECK(cli({"analyze", "--specs", "", "--out", out.string()}, &log) != 0);
  CHECK_FALSE(fs::exists(out));
  CHECK(log.find("no propagator specs") != std::string::npos);
  CHECK(cli({"analyze", "--z", "1", "--out", out.string()}) != 0);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("mmin: branches, boundary and monotone column") {
  TempDir d;
  const fs::path out = d.path / "m.csv";
  REQUIRE(cli({"mmin", "--z", "0.5,1,10", "--out", out.string()}) == 0);
  auto rows = read_csv(out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"z_max", "m_min", "branch", "condition_value", "threshold"});
  CHECK(rows[1][1] == "0");
  CHECK(rows[2][1] == "0");
  CHECK(rows[3][1] == "1");
  CHECK(rows[3][2] == "OneBranch");

  REQUIRE(cli({"mmin", "--z-min", "0.1", "--z-max", "1e4", "--points", "80", "--out", out.string()}) == 0);
  rows = read_csv(out);
  for (size_t i = 2; i < rows.size(); ++i) CHECK(std::stoi(rows[i][1]) >= std::stoi(rows[i - 1][1]));
}

TEST_CASE("manifest file with flag overrides, and atomic overwrite") {
  TempDir d;
  const fs::path cfg = d.path / "run.ini";
  const fs::path out = d.path / "r.csv";
  std::ofstream(cfg) << "# spd run\ncommand = run\nproblem = spd-diag\neigenvalues = 1,10,100\nT = 3\nN = 6\n"
                        "fine = cg:8\ninit = coarse\n";
  std::ofstream(out) << "stale\n";
  REQUIRE(cli({"--config", cfg.string(), "--out", out.string()}) == 0);
  auto rows = read_csv(out);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == std::vector<std::string>{"k", "iter_error", "abs_error", "abs_error_position", "converged"});
  CHECK(rows[1][0] == "1");
  CHECK(rows.back()[4] == "1");
  const size_t full = rows.size();

  // Flag beats the file.
  REQUIRE(cli({"run", "--config", cfg.string(), "--max-k", "2", "--out", out.string()}) == 0);
  rows = read_csv(out);
  CHECK(rows.size() == 3);
  CHECK(rows.back()[4] == "0");
  CHECK(full > 3);

  for (const auto& e : fs::directory_iterator(d.path)) CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("unknown manifest keys and bad values are rejected") {
  TempDir d;
  const fs::path cfg = d.path / "bad.ini";
  std::ofstream(cfg) << "command = run\nbogus = 3\n";
  CHECK(cli({"--config", cfg.string(), "--out", (d.path / "x.csv").string()}) != 0);
  CHECK(cli({"run", "--problem", "nope", "--N", "2", "--out", (d.path / "x.csv").string()}) != 0);
  CHECK(cli({"experiment", "--name", "nope", "--out", (d.path / "x.csv").string()}) != 0);
  CHECK(cli({"mmin", "--z", "1"}) != 0);
  CHECK_FALSE(fs::exists(d.path / "x.csv"));
  CHECK(cli({"--out", (d.path / "x.csv").string()}) != 0);
  CHECK(cli({"run", "--out", (d.path / "missing" / "x.csv").string(), "--N", "2"}) != 0);
}

TEST_CASE("experiment rows: contiguous k from 1, finite nonnegative errors, deterministic") {
  TempDir d;
  const fs::path a = d.path / "a.csv", b = d.path / "b.csv";
  const std::vector<std::string> base{"experiment", "--name", "burgers-m", "--nus", "0.05"};
  auto with = [&](std::vector<std::string> extra) {
    auto v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  REQUIRE(cli(with({"--workers", "1", "--out", a.string()})) == 0);
  REQUIRE(cli(with({"--workers", "4", "--out", b.string()})) == 0);
  CHECK(slurp(a) == slurp(b));

  const auto rows = read_csv(a);
  REQUIRE(rows.size() > 1);
  const auto& h = rows[0];
  const auto col = [&](const std::string& name) { return std::find(h.begin(), h.end(), name) - h.begin(); };
  std::string prev_fine;
  int prev_k = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const int k = std::stoi(r[col("k")]);
    if (r[col("fine")] != prev_fine) {
      CHECK(k == 1);
    } else {
      CHECK(k == prev_k + 1);
    }
    prev_fine = r[col("fine")];
    prev_k = k;
    for (const char* c : {"iter_error", "abs_error"}) {
      const double v = std::stod(r[col(c)]);
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
    }
  }
}
