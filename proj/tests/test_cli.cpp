#include <hdnewton/cli.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hdnewton;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hdnewton");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("hdnewton_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
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

Rational result_of(const Run& r) { return parse_rational(Json::parse(r.out)["result"].get<std::string>()); }

}  // namespace

TEST(CliRoot, Quadratic) {
  TempDir d;
  const auto r = run({"root", d.file("p.txt", "1\n-3\n2\n"), "--bound", "4", "--eps", "1/1024"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Rational x = result_of(r);
  EXPECT_GE(x, 2);
  EXPECT_LE(x, 2 + Rational(1, 1024));
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["inputs"]["eps"], "1/1024");
  EXPECT_EQ(j["inputs"]["eps_scaled"], "1/16384");
  EXPECT_TRUE(j["trace_path"].is_null());
  EXPECT_FALSE(j.contains("result_decimal"));
}

TEST(CliRoot, LinearWithTraceAndDecimal) {
  TempDir d;
  const auto trace = d.path("trace.csv");
  const auto r = run({"root", d.file("p.txt", "1\n-1/2\n"), "--bound", "1", "--eps", "1/1024", "--k", "1", "--trace",
                      trace, "--decimal"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Rational x = result_of(r);
  EXPECT_GE(x, Rational(1, 2));
  EXPECT_LE(x, Rational(1, 2) + Rational(1, 1024));
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["trace_path"], trace);
  EXPECT_EQ(j["result_decimal"], to_decimal(x));
  std::ifstream in(trace);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x,u,u_rounded,queries_cumulative,max_query_bits");
}

TEST(CliRoot, SchemaKeysInOrder) {
  TempDir d;
  const auto r = run({"root", d.file("p.txt", "2\n-6\n4\n"), "--bound", "4", "--eps", "1/100", "--auto-k"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "inputs", "result", "queries", "max_query_bits", "iterations",
                                            "trace_path"}));
  EXPECT_GE(result_of(r), 2);  // non-monic input is divided through
}

TEST(CliRoot, Errors) {
  TempDir d;
  const auto good = d.file("p.txt", "1\n-3\n2\n");
  EXPECT_EQ(run({"root", d.file("bad.txt", "1\nabc\n"), "--bound", "4", "--eps", "1/10"}).code, 2);
  EXPECT_EQ(run({"root", good, "--bound", "0", "--eps", "1/10"}).code, 2);
  EXPECT_EQ(run({"root", good, "--bound", "4", "--eps", "-1"}).code, 2);
  EXPECT_EQ(run({"root", good, "--bound", "4", "--eps", "1/10", "--k", "3"}).code, 2);
  EXPECT_EQ(run({"root", good, "--bound", "4", "--eps", "1/10", "--k", "1", "--auto-k"}).code, 2);
  EXPECT_EQ(run({"root", good, "--eps", "1/10"}).code, 2);
  EXPECT_EQ(run({"root", d.path("missing.txt"), "--bound", "4", "--eps", "1/10"}).code, 2);
  EXPECT_EQ(run({"root", d.file("z.txt", "0\n1\n"), "--bound", "4", "--eps", "1/10"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliEig, DiagonalAndCompleteGraph) {
  TempDir d;
  const auto r = run({"eig", d.file("d.txt", "3\n3 0 0\n0 1 0\n0 0 -2\n"), "--eps", "1/100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GE(result_of(r), 3);
  EXPECT_LE(result_of(r), 3 + Rational(1, 100));
  const auto k = run({"eig", d.file("k.txt", "4\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n"), "--eps", "1/100", "--decimal"});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_GE(result_of(k), 3);
  EXPECT_LE(result_of(k), 3 + Rational(1, 100));
  EXPECT_EQ(Json::parse(k.out)["command"], "eig");
}

TEST(CliEig, NonSymmetricIsRejected) {
  TempDir d;
  const auto r = run({"eig", d.file("n.txt", "2\n1 2\n3 1\n"), "--eps", "1/100"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("transpose"), std::string::npos);
}

TEST(CliPsd, ExitCodes) {
  TempDir d;
  const auto yes = run({"psd", d.file("i.txt", "2\n1 0\n0 1\n"), "--eps", "1/10"});
  EXPECT_EQ(yes.code, 0);
  EXPECT_TRUE(Json::parse(yes.out)["result"].get<bool>());
  const auto no = run({"psd", d.file("m.txt", "2\n-1 0\n0 -1\n"), "--eps", "1/10"});
  EXPECT_EQ(no.code, 1);
  EXPECT_FALSE(Json::parse(no.out)["result"].get<bool>());
  EXPECT_EQ(run({"psd", d.file("bad.txt", "2\n1 0\n"), "--eps", "1/10"}).code, 2);
}

TEST(CliBench, DeterministicCsv) {
  TempDir d;
  const auto a = d.path("a.csv"), b = d.path("b.csv"), s = d.path("s.json");
  ASSERT_EQ(run({"bench", "--family", "random-roots", "--n", "16,32", "--k", "1,auto", "--seed", "4", "--out", a,
                 "--summary", s})
                .code,
            0);
  ASSERT_EQ(run({"bench", "--n", "16,32", "--k", "1,auto", "--seed", "4", "--out", b}).code, 0);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(a), slurp(b));
  const std::string csv = slurp(a);
  EXPECT_NE(csv.find(",accel,1,"), std::string::npos);
  EXPECT_NE(csv.find(",accel,5,"), std::string::npos);
  EXPECT_NE(csv.find(",classic,,"), std::string::npos);
  EXPECT_TRUE(Json::parse(slurp(s))["within_eps"].get<bool>());
}

TEST(CliBench, Errors) {
  EXPECT_EQ(run({"bench", "--n", ""}).code, 2);
  EXPECT_EQ(run({"bench"}).code, 2);
  EXPECT_EQ(run({"bench", "--n", "8", "--family", "cubes"}).code, 2);
  EXPECT_EQ(run({"bench", "--n", "8", "--k", "zero"}).code, 2);
  EXPECT_EQ(run({"bench", "--n", "0"}).code, 2);
  EXPECT_EQ(run({"bench", "--n", "8", "--eps", "0"}).code, 2);
}

TEST(CliBench, CsvToStdout) {
  const auto r = run({"bench", "--family", "complete-graph", "--n", "3", "--eps", "1/50", "--power-iterations", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("family,seed,method", 0), 0u);
  EXPECT_NE(r.out.find("complete-graph,1,power,"), std::string::npos);
}
