#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "entroscope/cli.hpp"

using namespace entroscope;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("entroscope_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
             std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

/// Lines after the comment block: header first.
std::vector<std::string> table_of(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& line : lines_of(text)) {
    if (line.empty() || line[0] != '#') out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("configuration errors exit with code 2") {
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {},
           {"bogus"},
           {"entropy"},
           {"entropy", "--source", "fair-coin", "--input", "x.txt"},
           {"entropy", "--source", "coin"},
           {"entropy", "--source", "fair-coin", "--smoothing", "dirichlet"},
           {"entropy", "--source", "fair-coin", "--weights", "zipf"},
           {"entropy", "--source", "uniform", "--rmax", "0"},
           {"entropy", "--source", "uniform", "--rmax", "lots"},
           {"entropy", "--source", "uniform", "--reference", "cauchy"},
           {"entropy", "--source", "fair-coin", "--n", "0"},
           {"entropy", "--source", "fair-coin", "--n", "ten"},
           {"entropy", "--source", "fair-coin", "--alphabet", "2"},
           {"entropy", "--input", "/nonexistent/file"},
           {"predict", "--source", "uniform"},
           {"density", "--source", "fair-coin"},
           {"diagnostic", "--source", "fair-coin", "--replicas", "0"},
           {"sample", "--source", "fair-coin", "--smoothing", "kt"},
           {"entropy", "--source", "fair-coin", "--out", "/nonexistent/dir/out.csv"},
       }) {
    CAPTURE(args.size() ? args[0] : "");
    const auto r = run(args);
    CHECK(r.code == cli::kExitConfig);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("data errors exit with code 3 and name the line") {
  TempDir dir;
  const auto symbols = dir.file("s.txt", "symbol\n0\n1\n# comment\n2\n");
  auto r = run({"entropy", "--input", symbols, "--alphabet", "2"});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("line 5") != std::string::npos);

  const auto reals = dir.file("x.txt", "x\n0.1\n0.5\nabc\n");
  r = run({"entropy", "--input", reals});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("line 4") != std::string::npos);

  const auto outside = dir.file("y.txt", "0.1\n\n1.5\n");
  r = run({"entropy", "--input", outside});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(run({"entropy", "--input", outside, "--reference", "gaussian"}).code == cli::kExitOk);

  const auto empty = dir.file("e.txt", "# nothing\n");
  CHECK(run({"predict", "--input", empty, "--alphabet", "2"}).code == cli::kExitData);
}

TEST_CASE("help and version") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("entropy") != std::string::npos);
  r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("entroscope ", 0) == 0);
}

TEST_CASE("entropy output is a commented csv") {
  const auto r = run({"entropy", "--source", "markov:rows=0.9,0.1;0.2,0.8", "--n", "200", "--seeds", "2"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  CHECK(lines[0].rfind("# entroscope", 0) == 0);
  CHECK(r.out.find("# source = markov:rows=0.9,0.1;0.2,0.8\n") != std::string::npos);
  const auto table = table_of(r.out);
  CHECK(table[0] == "n,estimate_nats,analytic_nats,abs_error,seed");
  // 10 20 50 100 200 for each seed.
  CHECK(table.size() == 1 + 2 * 5);
  CHECK(table[1].rfind("10,", 0) == 0);
  CHECK(table.back().rfind("200,", 0) == 0);
  CHECK(table.back().substr(table.back().size() - 2) == ",2");
  CHECK(table[5].find(",0.38352") != std::string::npos);
}

TEST_CASE("identical configurations give byte-identical output") {
  const std::vector<std::vector<std::string>> commands = {
      {"entropy", "--source", "ar1:rho=0.5", "--n", "300", "--reference", "gaussian", "--seeds", "2"},
      {"density", "--source", "uniform", "--n", "50", "--grid", "9"},
      {"predict", "--source", "fair-coin", "--n", "300"},
      {"diagnostic", "--source", "periodic:01", "--n", "100", "--replicas", "3"},
      {"sample", "--source", "ar1:rho=-0.3", "--n", "20", "--seed", "4"},
  };
  for (const auto& args : commands) {
    CAPTURE(args[0]);
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("--out writes the same bytes to a file") {
  TempDir dir;
  const auto target = dir.path("out.csv");
  const std::vector<std::string> args = {"sample", "--source", "fair-coin", "--n", "30"};
  const auto direct = run(args);
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", target});
  const auto r = run(with_out);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(target, std::ios::binary);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto direct_lines = lines_of(direct.out);
  const auto file_lines = lines_of(written);
  REQUIRE(direct_lines.size() == file_lines.size());
  for (std::size_t i = 0; i < direct_lines.size(); ++i) {
    if (direct_lines[i].rfind("# out", 0) == 0) continue;
    CHECK(direct_lines[i] == file_lines[i]);
  }
}

TEST_CASE("sampled data reads back as input") {
  TempDir dir;
  const auto coin = dir.path("coin.csv");
  REQUIRE(run({"sample", "--source", "markov:rows=0.9,0.1;0.2,0.8", "--n", "500", "--out", coin}).code == 0);
  const auto from_file = run({"entropy", "--input", coin, "--alphabet", "2"});
  const auto from_source = run({"entropy", "--source", "markov:rows=0.9,0.1;0.2,0.8", "--n", "500"});
  REQUIRE(from_file.code == 0);
  REQUIRE(from_source.code == 0);
  // Same estimates; the file version has no analytic column or seed.
  const auto a = table_of(from_file.out);
  const auto b = table_of(from_source.out);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(a[i].substr(0, a[i].find(',', a[i].find(',') + 1)) == b[i].substr(0, b[i].find(',', b[i].find(',') + 1)));
  }

  const auto reals = dir.path("ar.csv");
  REQUIRE(run({"sample", "--source", "ar1:rho=0.5", "--n", "200", "--out", reals}).code == 0);
  const auto f = table_of(run({"entropy", "--input", reals, "--reference", "gaussian"}).out);
  const auto s = table_of(run({"entropy", "--source", "ar1:rho=0.5", "--n", "200", "--reference", "gaussian"}).out);
  REQUIRE(f.size() == s.size());
  CHECK(f.back().substr(0, f.back().find(',', 4)) == s.back().substr(0, s.back().find(',', 4)));
}

TEST_CASE("density with a one-sample history and three levels") {
  TempDir dir;
  const auto empty = dir.file("h.txt", "x\n");
  const auto r = run({"density", "--input", empty, "--rmax", "3", "--grid", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# rmax_resolved = 3\n") != std::string::npos);
  const auto table = table_of(r.out);
  REQUIRE(table.size() == 6);
  CHECK(table[0] == "x,predictive_density");
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i].substr(table[i].find(',')) == ",0.8");
}

TEST_CASE("predict reports mistake and bayes densities") {
  const auto r = run({"predict", "--source", "markov:rows=0.9,0.1;0.2,0.8", "--n", "100"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# max_order = 16\n") != std::string::npos);
  const auto table = table_of(r.out);
  CHECK(table[0] == "n,mistake_density,bayes_density,seed");
  CHECK(table.back().find(",0.133333333333,1") != std::string::npos);
}

TEST_CASE("bits option rescales") {
  const auto nats = table_of(run({"entropy", "--source", "fair-coin", "--n", "10"}).out);
  const auto bits = table_of(run({"entropy", "--source", "fair-coin", "--n", "10", "--bits"}).out);
  CHECK(bits[0] == "n,estimate_bits,analytic_bits,abs_error,seed");
  CHECK(bits[1].find(",1,") != std::string::npos);
  CHECK(nats[1].find(",0.69314718056,") != std::string::npos);
}
