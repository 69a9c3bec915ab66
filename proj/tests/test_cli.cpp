#include "support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("rbc_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result cli(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = env + " \"" RBC_CLI_PATH "\" " + args + " > \"" + out.string() +
                          "\" 2> \"" + (scratch() / "stderr.txt").string() + "\"";
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST(Cli, RunWritesRoundsOfGrowingSize) {
  ASSERT_EQ(cli("run --m 2 --rounds 3 --bit 1 --out " + path("a.json")).code, 0);
  auto tr = rbc::parse_transcript(slurp(path("a.json")));
  ASSERT_EQ(tr.rounds.size(), 3u);
  EXPECT_EQ(tr.rounds[0].challenge.pairs.size(), 1u);
  EXPECT_EQ(tr.rounds[1].challenge.pairs.size(), 2u);
  EXPECT_EQ(tr.rounds[2].challenge.pairs.size(), 4u);
}

TEST(Cli, RunIsDeterministic) {
  ASSERT_EQ(cli("run --m 3 --rounds 3 --bit 0 --alice-seed 9 --out " + path("b1.json")).code, 0);
  ASSERT_EQ(cli("run --m 3 --rounds 3 --bit 0 --alice-seed 9 --out " + path("b2.json")).code, 0);
  EXPECT_EQ(slurp(path("b1.json")), slurp(path("b2.json")));
}

TEST(Cli, RunRejectsBadParams) {
  EXPECT_EQ(cli("run --dx 0.01 --dt 0.005").code, 1);
  EXPECT_EQ(cli("run --bit 2").code, 1);
  EXPECT_EQ(cli("run --m 1").code, 1);
  EXPECT_EQ(cli("run --rounds 0").code, 1);
  EXPECT_EQ(cli("").code, 1);
}

TEST(Cli, VerifyAcceptsHonestTranscript) {
  ASSERT_EQ(cli("run --m 2 --rounds 3 --bit 1 --out " + path("c.json")).code, 0);
  auto r = cli("verify " + path("c.json"));
  EXPECT_EQ(r.code, 0);
  auto j = rbc::Json::parse(r.out);
  EXPECT_EQ(j["outcome"], "accept");
  EXPECT_EQ(j["bit"], 1);
}

TEST(Cli, VerifyRejectsMutatedTranscript) {
  ASSERT_EQ(cli("run --m 2 --rounds 3 --bit 1 --out " + path("d.json")).code, 0);
  auto j = rbc::Json::parse(slurp(path("d.json")));
  auto& v = j["rounds"][2]["response"]["values"][0];
  v = (v.get<std::uint64_t>() + 1) % 4;
  std::ofstream(path("d_bad.json")) << j.dump(2);
  auto r = cli("verify " + path("d_bad.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(rbc::Json::parse(r.out)["reason"], "decode_mismatch");
}

TEST(Cli, VerifyRejectsTruncatedFile) {
  ASSERT_EQ(cli("run --out " + path("e.json")).code, 0);
  std::string text = slurp(path("e.json"));
  std::ofstream(path("e_cut.json")) << text.substr(0, text.size() / 3);
  EXPECT_EQ(cli("verify " + path("e_cut.json")).code, 1);
  EXPECT_EQ(cli("verify " + path("missing.json")).code, 1);
}

TEST(Cli, LateUnveilAborts) {
  EXPECT_EQ(cli("run --rounds 2 --unveil-delay 1 --out " + path("g.json")).code, 2);
  auto tr = rbc::parse_transcript(slurp(path("g.json")));
  EXPECT_TRUE(tr.abort);
  EXPECT_EQ(cli("verify " + path("g.json")).code, 3);
}

TEST(Cli, DualUnveilRun) {
  ASSERT_EQ(cli("run --dual-unveil --handshake --rounds 3 --out " + path("f.json")).code, 0);
  EXPECT_EQ(cli("verify " + path("f.json")).code, 0);
  EXPECT_EQ(cli("run --dual-unveil --rounds 1").code, 1);
}

TEST(Cli, Attack) {
  auto r = cli("attack --strategy offset-guess --m 2 --rounds 1 --trials 10000");
  ASSERT_EQ(r.code, 0);
  auto j = rbc::Json::parse(r.out);
  EXPECT_NEAR(j["oracle_rate"].get<double>(), 1.0 / 3, 1e-12);
  EXPECT_NEAR(j["success_rate"].get<double>(), 1.0 / 3, 3 * std::sqrt(2.0 / 9 / 10000));

  r = cli("attack --strategy honest-relabel --m 2 --rounds 2 --trials 200");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(rbc::Json::parse(r.out)["success_rate"].get<double>(), 1.0);

  EXPECT_EQ(cli("attack --strategy unknown").code, 1);
}

TEST(Cli, Capacity) {
  auto r = cli("capacity --m 10 --dx 0.1 --baud 1e11");
  ASSERT_EQ(r.code, 0);
  auto rounds = rbc::Json::parse(r.out)["max_rounds"].get<int>();
  EXPECT_GE(rounds, 8);
  EXPECT_LE(rounds, 12);

  r = cli("capacity --m 2 --dx 1.0 --baud 1e6 --format table");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("max rounds"), std::string::npos);

  EXPECT_EQ(cli("capacity --baud 0").code, 1);
  EXPECT_EQ(cli("capacity --dx 0.0001").code, 1);
}

TEST(Cli, FormatFromEnvironment) {
  auto r = cli("capacity", "RBC_FORMAT=table");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("period T"), std::string::npos);
  EXPECT_EQ(cli("capacity", "RBC_FORMAT=yaml").code, 1);
  r = cli("capacity --format json", "RBC_FORMAT=table");
  EXPECT_NO_THROW(rbc::Json::parse(r.out));
}
