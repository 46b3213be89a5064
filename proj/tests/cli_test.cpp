#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "maiclass/cli.hpp"
#include "support.hpp"

using maiclass::cli::run_cli;
using testing_support::TempDir;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, Usage) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"eval", "x.jsonl", "--model", "bogus"}).code, 2);
  EXPECT_EQ(run({"eval", "x.jsonl", "--runs", "0"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DomainErrors) {
  const auto r = run({"validate", "/nonexistent/pages.jsonl"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error: IoError:", 0), 0u) << r.err;

  TempDir dir("cli");
  const auto bad = dir.file("bad.jsonl", "{\"id\": 1}\n");
  const auto e = run({"eval", bad.string()});
  EXPECT_EQ(e.code, 1);
  EXPECT_NE(e.err.find("ParseError"), std::string::npos);
}

TEST(Cli, Validate) {
  TempDir dir("cli");
  const auto ok = dir.file("ok.jsonl", testing_support::to_jsonl(testing_support::synthetic_documents(1)));
  const auto r = run({"validate", ok.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  const auto short_docs = testing_support::synthetic_documents(1, 29);
  const auto bad = dir.file("short.jsonl", testing_support::to_jsonl(short_docs));
  const auto f = run({"validate", bad.string()});
  EXPECT_EQ(f.code, 1);
  EXPECT_NE(f.out.find("unbalanced class: rock"), std::string::npos);
}

TEST(Cli, EvalIsByteIdentical) {
  TempDir dir("cli");
  const auto corpus = dir.file("c.jsonl", testing_support::to_jsonl(testing_support::synthetic_documents(2)));
  const auto a = dir.path() / "a.csv", b = dir.path() / "b.csv";
  const std::vector<std::string> base = {"eval", corpus.string(), "--algo", "nb_multinomial", "--runs", "3", "--seed", "17"};
  auto with_out = [&](const std::filesystem::path& p) {
    auto v = base;
    v.insert(v.end(), {"--out", p.string()});
    return v;
  };
  ASSERT_EQ(run(with_out(a)).code, 0);
  ASSERT_EQ(run(with_out(b)).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("spec,model,class,run_1,run_2,run_3,mean\n", 0), 0u);
  EXPECT_EQ(run(base).out, slurp(a));
}

TEST(Cli, Utest) {
  TempDir dir("cli");
  const auto a = dir.file("a.csv", "1\n2\n");
  const auto b = dir.file("b.csv", "3,4\n");
  const auto r = run({"utest", a.string(), b.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("U1=0.0 U2=4.0"), std::string::npos) << r.out;
  EXPECT_EQ(run({"utest", a.string(), dir.file("e.csv", "").string()}).code, 1);
}

TEST(Cli, Agreement) {
  const auto r = run({"agreement", (testing_support::tables_dir() / "table1.csv").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "sample,agreement_percent\nRock,50\nReenactment,100\nFootball,100\nVegetarianism,100\nControl,90\n");
}

TEST(Cli, Reproduce) {
  const auto fixture = (testing_support::tables_dir() / "table2.tsv").string();
  const auto r = run({"reproduce", "--fixture", fixture});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("U=3130.5"), std::string::npos);
  const auto csv = run({"reproduce", "--fixture", fixture, "--format", "csv"});
  EXPECT_EQ(csv.out.rfind("section,item,value\n", 0), 0u);
  EXPECT_EQ(run({"reproduce", "--fixture", fixture, "--knn", "cosine"}).code, 2);
}
