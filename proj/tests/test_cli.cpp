#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(LAPSTRIP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lapstrip_cli_test_" + std::to_string(getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("ghost check prints f'''(0) and its distance to gamma/2") {
  Run r = run("ghost --check f3");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"quantity", "value_re", "value_im", "target", "abs_diff"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.2886078324507665).epsilon(1e-12));
  CHECK(std::stod(rows[1][4]) < 1e-6);
}

TEST_CASE("zeta row carries representation, oracle and difference") {
  Run r = run("zeta --strip 0,1 --s 0.5");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].front() == "s_re");
  CHECK(rows[0].back() == "abs_diff");
  CHECK(std::stod(rows[1][2]) == doctest::Approx(-1.4603545088095868).epsilon(1e-9));
  CHECK(std::stod(rows[1][6]) < 1e-6);
}

TEST_CASE("empty pole set gives a zero transition") {
  TempDir dir;
  std::string f = dir.write("empty.json", R"({"separatrix": 0, "poles": []})");
  Run r = run("transition --poles " + f + " --t 1.0");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 1; i < rows[1].size(); ++i) CHECK(std::stod(rows[1][i]) == 0.0);
}

TEST_CASE("transition from a pole file") {
  TempDir dir;
  // residue 1 at s = i and s = -i: density 2 cos t
  std::string f = dir.write("pair.json", R"({"separatrix": 0, "poles": [
      {"p": 1, "order": 1, "coeffs": [[1, 0]]}, {"p": -1, "order": 1, "coeffs": [[1, 0]]}]})");
  Run r = run("transition --poles " + f + " --grid 0:3:4");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  for (int i = 1; i <= 4; ++i) {
    double t = std::stod(rows[i][0]);
    CHECK(t == doctest::Approx(i - 1.0));
    CHECK(std::stod(rows[i][3]) == doctest::Approx(2 * std::cos(t)).epsilon(1e-12));
    CHECK(std::stod(rows[i][1]) == doctest::Approx(2 * std::sin(t)).epsilon(1e-12));
  }
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("transition --t 1").code == 2);                   // missing --poles
  CHECK(run("transition --poles /no/such/file --t 1").code == 2);
  CHECK(run("zeta --strip 0,1 --grid 1:2").code == 2);        // malformed grid
  CHECK(run("zeta --strip 2,3 --s 2.5").code == 2);           // unknown strip
  CHECK(run("transform --pair zeta:mu_1_inf --s 0.5").code == 2); // outside the strip
  CHECK(run("heat --x 0 --t 1 --form bogus").code == 2);
  CHECK(run("ghost --t 1 --jobs 0").code == 2);
}

TEST_CASE("numerical errors exit with 3") {
  // s on the contour gamma_1
  Run r = run("ghost --s 1.0471975511965976,1.5");
  CHECK(r.code == 3);
  CHECK(r.out.empty());
}

TEST_CASE("CSV format: header, 17 significant digits, split complex columns") {
  Run r = run("gamma --a 2 --b 3.5 --index 0 --t 0.3");
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  CHECK(r.out.back() == '\n');
  auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"t", "density_re", "density_im"});
  const std::string& v = rows[1][1];
  std::size_t digits = 0;
  for (char c : v.substr(0, v.find('e')))
    if (std::isdigit(static_cast<unsigned char>(c))) ++digits;
  CHECK(digits >= 16);
  CHECK(std::stod(v) > 0);
}

TEST_CASE("parallel sweeps keep row order") {
  Run one = run("ghost --grid -2:2:9 --jobs 1");
  Run four = run("ghost --grid -2:2:9 --jobs 4");
  REQUIRE(one.code == 0);
  REQUIRE(four.code == 0);
  CHECK(one.out == four.out);
  CHECK(parse_csv(one.out).size() == 10);
}

TEST_CASE("output file is written whole or not at all") {
  TempDir dir;
  fs::path out = dir.path / "heat.csv";
  Run ok = run("heat --x 0.5 --grid 0.3:0.9:3 -o " + out.string());
  REQUIRE(ok.code == 0);
  CHECK(ok.out.empty());
  CHECK(parse_csv(slurp(out)).size() == 4);
  CHECK_FALSE(fs::exists(dir.path / "heat.csv.tmp"));

  fs::path bad = dir.path / "bad.csv";
  CHECK(run("ghost --s 1.0471975511965976,1.5 -o " + bad.string()).code == 3);
  CHECK_FALSE(fs::exists(bad));
}

TEST_CASE("config file fills options not given on the command line") {
  TempDir dir;
  std::string cfg = dir.write("cfg.json", R"({"ghost": {"k": 3, "t": "0"}})");
  Run from_config = run("ghost --config " + cfg);
  REQUIRE(from_config.code == 0);
  CHECK(std::stod(parse_csv(from_config.out)[1][1]) == doctest::Approx(0.2886078324507665));
  // flags win over the config
  Run flag = run("ghost --config " + cfg + " --k 0");
  REQUIRE(flag.code == 0);
  CHECK(flag.out == run("ghost --t 0 --k 0").out);
  std::string broken = dir.write("broken.json", "{not json");
  CHECK(run("ghost --t 0 --config " + broken).code == 2);
}

TEST_CASE("remaining verbs produce tables") {
  Run inv = run("invert --pair inv_s --t 0 --target density");
  REQUIRE(inv.code == 0);
  CHECK(std::stod(parse_csv(inv.out)[1][1]) == doctest::Approx(0.5).epsilon(1e-6));

  Run tr = run("transform --pair gamma:2,3.5,0 --s 1,1");
  REQUIRE(tr.code == 0);
  CHECK(std::stod(parse_csv(tr.out)[1].back()) < 1e-8);

  Run per = run("periodic --residues --n-range 3");
  REQUIRE(per.code == 0);
  CHECK(parse_csv(per.out).size() == 5);

  Run pol = run("polarity --pair rational:1.3,3,1");
  REQUIRE(pol.code == 0);
  CHECK(pol.out.find("CoNegative") != std::string::npos);
}
