#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct CliResult {
  int code;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(UNITRI_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "unitri_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

json identity_json(int n) { return {{"n", n}, {"entries", json::array()}}; }

}  // namespace

TEST(Cli, OrbitsN4) {
  const CliResult r = run("orbits --n 4 --p 5");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  int regular = 0;
  std::uint64_t total = 0;
  for (const auto& o : j) {
    regular += o.at("kind") == "regular";
    total += o.at("size").get<std::uint64_t>();
  }
  EXPECT_EQ(regular, 20);
  EXPECT_EQ(total, 15625u);
}

TEST(Cli, OrbitsN2AreSingletons) {
  const CliResult r = run("orbits --n 2 --p 5");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  ASSERT_EQ(j.size(), 5u);
  for (const auto& o : j) EXPECT_EQ(o.at("size"), 1);
}

TEST(Cli, CsvOutputAndFileTarget) {
  const fs::path out = fs::temp_directory_path() / "unitri_cli_test" / "t3.csv";
  fs::create_directories(out.parent_path());
  ASSERT_EQ(run("chartable --n 3 --p 5 --format csv --out " + out.string()).code, 0);
  std::ifstream f(out);
  std::string line;
  int lines = 0;
  while (std::getline(f, line)) ++lines;
  EXPECT_EQ(lines, 30);
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("orbits --n 4 --p 3").code, 2);
  EXPECT_EQ(run("orbits --n 4 --p 6").code, 2);
  EXPECT_EQ(run("verify --suite no-such-suite --n 4 --p 5").code, 2);
  EXPECT_EQ(run("orbits --n 4 --p 5 --format xml").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  const fs::path bad = write_temp("bad.json", "{ not json");
  const fs::path id = write_temp("id5.json", identity_json(5).dump());
  EXPECT_EQ(run("charvalue --form " + bad.string() + " --element " + id.string() + " --p 5").code, 2);
  EXPECT_EQ(run("classof --element " + bad.string() + " --p 5").code, 2);
}

TEST(Cli, BudgetExceededExitsThree) {
  EXPECT_EQ(run("orbits --n 4 --p 5 --budget 100").code, 3);
  EXPECT_EQ(run("chartable --n 5 --p 5").code, 3);
}

TEST(Cli, DegreesSuitePasses) {
  const CliResult r = run("verify --suite degrees --n 10 --p 11");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out).at("pass").get<bool>());
}

TEST(Cli, CharvalueAtIdentity) {
  const json reg = {{"n", 4}, {"entries", {{1, 4, 1}, {2, 3, 2}}}};
  const CliResult a = run("charvalue --p 5 --form " + write_temp("reg4.json", reg.dump()).string() + " --element " +
                    write_temp("id4.json", identity_json(4).dump()).string());
  ASSERT_EQ(a.code, 0);
  const json ja = json::parse(a.out);
  EXPECT_TRUE(ja.at("agree").get<bool>());
  for (const char* route : {"kirillov", "regular"})
    EXPECT_EQ(ja.at("routes").at(route).at("num"), json::array({25, 0, 0, 0})) << route;

  const json sub = {{"n", 5}, {"entries", {{1, 4, 1}, {2, 5, 1}, {4, 5, 2}}}};
  const fs::path subp = write_temp("sub5.json", sub.dump());
  const CliResult b = run("charvalue --p 5 --form " + subp.string() + " --element " +
                    write_temp("id5.json", identity_json(5).dump()).string());
  ASSERT_EQ(b.code, 0);
  const json jb = json::parse(b.out);
  EXPECT_TRUE(jb.at("agree").get<bool>());
  for (const char* route : {"kirillov", "subregular", "mackey"})
    EXPECT_EQ(jb.at("routes").at(route).at("num"), json::array({125, 0, 0, 0})) << route;
  EXPECT_TRUE(jb.at("routes").at("regular").contains("unavailable"));

  // 1 + e_21 lies outside the support.
  const json off = {{"n", 5}, {"entries", {{2, 1, 1}}}};
  const CliResult c = run("charvalue --p 5 --form " + subp.string() + " --element " +
                    write_temp("off5.json", off.dump()).string());
  ASSERT_EQ(c.code, 0);
  const json jc = json::parse(c.out);
  EXPECT_TRUE(jc.at("agree").get<bool>());
  EXPECT_EQ(jc.at("routes").at("subregular").at("num"), json::array({0, 0, 0, 0}));
}

TEST(Cli, ClassofReportsSize) {
  const json x = {{"n", 5}, {"entries", {{2, 1, 2}, {5, 4, 3}}}};
  const json D = {{"n", 5}, {"phi", {{2, 1, 2}, {5, 4, 3}}}};
  const CliResult r = run("classof --p 5 --element " + write_temp("x5.json", x.dump()).string() + " --subset " +
                    write_temp("d5.json", D.dump()).string());
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.at("member").get<bool>());
  EXPECT_EQ(j.at("bfs_size"), 625);
  EXPECT_EQ(j.at("class").at("size"), 625);
}

TEST(Cli, OutputIsDeterministic) {
  const CliResult a = run("chartable --n 3 --p 5 --threads 1");
  const CliResult b = run("chartable --n 3 --p 5 --threads 2");
  const CliResult c = run("chartable --n 3 --p 5 --threads 1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(run("verify --suite invariance --n 5 --p 5 --seed 3 --trials 200").out,
            run("verify --suite invariance --n 5 --p 5 --seed 3 --trials 200").out);
}
