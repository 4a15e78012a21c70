#include "support/cli_harness.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

using namespace racah;
using testcli::run;
using testcli::schema_valid;
using json = nlohmann::json;

TEST(CliVerify, CouplingRunningExamplePasses) {
  const auto r = run({"verify", "--suite", "coupling", "--nu", "1,1,1", "--N", "1", "--backend", "exact"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_EQ(doc["constants"]["d"], "6");
  ASSERT_FALSE(doc["residuals"].empty());
  for (const auto& res : doc["residuals"]) EXPECT_EQ(res["abs_residual"], "0") << res["name"];
  EXPECT_TRUE(schema_valid("verify.schema.json", r.out));
}

TEST(CliVerify, EverySuitePassesOnValidInput) {
  const std::vector<std::vector<std::string>> cases{
      {"--suite", "symmetry", "--k", "1,1,1", "--N", "2"},
      {"--suite", "symmetry", "--k", "1/2,2,1", "--N", "3", "--backend", "float"},
      {"--suite", "irrep", "--roots=-1,0,4,-3", "--sigma=-1", "--N", "1"},
      {"--suite", "irrep", "--nu", "3/4,1,3/2", "--N", "4"},
      {"--suite", "poly", "--racah", "1/2,5/3,-4,2/7", "--N", "3"},
      {"--suite", "difference", "--racah", "1/2,5/3,-4,2/7", "--N", "3"},
      {"--suite", "coupling", "--nu", "0.3,1.25,2", "--N", "4", "--backend", "float"},
  };
  for (auto args : cases) {
    args.insert(args.begin(), "verify");
    const auto r = run(args);
    EXPECT_EQ(r.code, cli::kExitPass) << args[2] << ": " << r.err;
    EXPECT_TRUE(schema_valid("verify.schema.json", r.out)) << args[2];
  }
}

TEST(CliVerify, InjectedOffsetFails) {
  for (const std::string suite : {"coupling", "symmetry", "irrep", "difference"}) {
    std::vector<std::string> args{"verify", "--suite", suite, "--N", "2", "--inject-offset", "1/3"};
    if (suite == "symmetry") {
      args.insert(args.end(), {"--k", "1,1,1"});
    } else if (suite == "difference") {
      args.insert(args.end(), {"--racah", "1/2,5/3,-3,2/7"});
    } else {
      args.insert(args.end(), {"--nu", "1,1,1"});
    }
    const auto r = run(args);
    EXPECT_EQ(r.code, cli::kExitFailure) << suite;
    const auto doc = json::parse(r.out);
    EXPECT_FALSE(doc["passed"].get<bool>());
    EXPECT_EQ(doc["injected_offset"], "1/3");
    EXPECT_TRUE(schema_valid("verify.schema.json", r.out));
  }
  const auto f = run({"verify", "--suite", "coupling", "--nu", "1,1,1", "--N", "2", "--backend", "float",
                      "--inject-offset", "1e-6"});
  EXPECT_EQ(f.code, cli::kExitFailure);
}

TEST(CliVerify, ConfigErrorsExitTwo) {
  const std::vector<std::vector<std::string>> cases{
      {"verify", "--suite", "coupling", "--nu", "1.5x,1,1", "--N", "1", "--backend", "exact"},
      {"verify", "--suite", "coupling", "--nu", "1,1", "--N", "1"},
      {"verify", "--suite", "coupling", "--nu", "1,1,1"},
      {"verify", "--suite", "coupling", "--nu", "1,-1,1", "--N", "1"},
      {"verify", "--suite", "nonsense", "--nu", "1,1,1", "--N", "1"},
      {"verify", "--suite", "coupling", "--nu", "1,1,1", "--N", "1", "--backend", "quad"},
      {"verify", "--suite", "coupling", "--nu", "1,1,1", "--N", "1", "--format", "xml"},
      {"verify", "--suite", "coupling", "--nu", "1,1,1", "--N", "1", "--tol", "-1"},
      {"verify", "--suite", "poly", "--racah", "1,2,3,4", "--N", "2"},
      {"verify", "--unknown-flag"},
      {"spectrum", "--k", "1,-3,1", "--Nmax", "2"},
      {},
  };
  for (const auto& args : cases) {
    const auto r = run(args);
    EXPECT_EQ(r.code, cli::kExitConfig) << (args.empty() ? "<none>" : args.back());
    EXPECT_TRUE(r.out.empty() || args.size() <= 2);
  }
}

TEST(CliConfig, FileSuppliesDefaultsAndFlagsOverride) {
  const auto cfg = testcli::write_file("ok.cfg", "# defaults\nsuite = coupling\nnu = 1,1,1\nN = 2\nbackend = float\n");
  const auto a = run({"verify", "--config", cfg.string()});
  ASSERT_EQ(a.code, cli::kExitPass) << a.err;
  EXPECT_EQ(json::parse(a.out)["backend"], "float");
  const auto b = run({"verify", "--config", cfg.string(), "--backend", "exact", "--N", "1"});
  ASSERT_EQ(b.code, cli::kExitPass) << b.err;
  const auto doc = json::parse(b.out);
  EXPECT_EQ(doc["backend"], "exact");
  EXPECT_EQ(doc["parameters"]["N"], 1);
}

TEST(CliConfig, MalformedFileExitsTwo) {
  for (const std::string text : {"suite = coupling\nnuu = 1,1,1\n", "suite coupling\n", "N = two\n"}) {
    const auto cfg = testcli::write_file("bad.cfg", text);
    EXPECT_EQ(run({"verify", "--config", cfg.string()}).code, cli::kExitConfig) << text;
  }
  EXPECT_EQ(run({"verify", "--config", "/nonexistent/racah.cfg"}).code, cli::kExitConfig);
}

TEST(CliConfig, EnvironmentSelectsDefaultBackend) {
  ::setenv("RACAH_KIT_BACKEND", "float", 1);
  const auto a = run({"spectrum", "--k", "1,1,1", "--Nmax", "1"});
  const auto b = run({"spectrum", "--k", "1,1,1", "--Nmax", "1", "--backend", "exact"});
  ::setenv("RACAH_KIT_BACKEND", "bogus", 1);
  const auto c = run({"spectrum", "--k", "1,1,1", "--Nmax", "1"});
  ::unsetenv("RACAH_KIT_BACKEND");
  EXPECT_EQ(json::parse(a.out)["levels"][0]["energy"], 24.75);
  EXPECT_EQ(json::parse(b.out)["levels"][0]["energy"], "99/4");
  EXPECT_EQ(c.code, cli::kExitConfig);
}

TEST(CliRacahTable, TrivialGrade) {
  const auto r = run({"racah-table", "--nu", "1,1,1", "--N", "0"});
  ASSERT_EQ(r.code, cli::kExitPass);
  EXPECT_EQ(json::parse(r.out)["coeffs"], json::parse("[[1.0]]"));
}

TEST(CliRacahTable, RunningExampleAndSchema) {
  const auto r = run({"racah-table", "--nu", "1,1,1", "--N", "1"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  EXPECT_TRUE(schema_valid("racah_table.schema.json", r.out));
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["sign_convention"], "first-nonzero-positive");
  EXPECT_EQ(doc["signed_squares"], json::parse(R"([["1/4","3/4"],["3/4","-1/4"]])"));
  const auto c = doc["coeffs"].get<std::vector<std::vector<double>>>();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double dot = 0;
      for (int k = 0; k < 2; ++k) dot += c[i][k] * c[j][k];
      EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-12);
    }
}

TEST(CliRacahTable, RoundTripIsBitExact) {
  for (const std::string backend : {"exact", "float"}) {
    const auto r = run({"racah-table", "--nu", "3/4,1,3/2", "--N", "5", "--backend", backend});
    ASSERT_EQ(r.code, cli::kExitPass) << r.err;
    const auto doc = nlohmann::ordered_json::parse(r.out);
    const auto coeffs = doc["coeffs"].get<std::vector<std::vector<double>>>();
    EXPECT_EQ(nlohmann::ordered_json(coeffs), doc["coeffs"]);
    EXPECT_EQ(doc.dump(2) + "\n", r.out);
    EXPECT_TRUE(schema_valid("racah_table.schema.json", r.out)) << backend;
  }
}

TEST(CliRacahTable, CsvHasLabels) {
  const auto r = run({"racah-table", "--nu", "1,1,1", "--N", "1", "--format", "csv"});
  ASSERT_EQ(r.code, cli::kExitPass);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "nu23\\nu12,2,3");
  EXPECT_NE(r.out.find("\n2,0.5,"), std::string::npos);
  EXPECT_NE(r.out.find("\n3,"), std::string::npos);
}

TEST(CliRacahTable, WritesOutputFile) {
  const auto path = testcli::scratch_dir() / "table.json";
  const auto r = run({"racah-table", "--nu", "1,1,1", "--N", "2", "--output", path.string()});
  ASSERT_EQ(r.code, cli::kExitPass);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(json::parse(in)["N"], 2);
}

TEST(CliPoly, GridPropertiesExact) {
  const auto r = run({"poly", "--racah", "1/2,5/3,-4,2/7", "--N", "3"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  EXPECT_TRUE(schema_valid("poly.schema.json", r.out));
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["max_discrepancy"], "0");
  for (const char* method : {"hypergeometric", "recurrence", "difference"}) {
    const auto& v = doc["values"][method];
    for (int i = 0; i <= 3; ++i) {
      EXPECT_EQ(v[0][i], "1") << method;
      EXPECT_EQ(v[i][0], "1") << method;
    }
  }
}

TEST(CliPoly, MonicFloatAndCsv) {
  const auto r = run({"poly", "--racah", "1/2,5/3,-4,2/7", "--N", "3", "--monic", "--backend", "float"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  EXPECT_TRUE(schema_valid("poly.schema.json", r.out));
  const auto csv = run({"poly", "--racah", "1/2,5/3,-3,2/7", "--N", "2", "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "n,x,hypergeometric,recurrence,difference");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 10);
}

TEST(CliPoly, PoleIsNumericFailure) {
  // beta + delta + 1 = 0 puts a zero in the lower parameters of the series.
  const auto r = run({"poly", "--racah", "1/2,1,-3,-2", "--N", "2"});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliSpectrum, UnitWeights) {
  const auto r = run({"spectrum", "--k", "1,1,1", "--Nmax", "1"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  EXPECT_TRUE(schema_valid("spectrum.schema.json", r.out));
  const auto doc = json::parse(r.out);
  ASSERT_EQ(doc["levels"].size(), 2u);
  EXPECT_EQ(doc["levels"][0]["energy"], "99/4");
  EXPECT_EQ(doc["levels"][1]["energy"], "195/4");
  EXPECT_EQ(doc["levels"][0]["degeneracy"], 1);
  EXPECT_EQ(doc["levels"][1]["degeneracy"], 2);
  const auto f = run({"spectrum", "--k", "1,1,1", "--Nmax", "1", "--backend", "float", "--format", "csv"});
  EXPECT_EQ(f.out, "N,energy,degeneracy\n0,24.75,1\n1,48.75,2\n");
}

TEST(CliDeterminism, RepeatedRunsAreIdentical) {
  const std::vector<std::vector<std::string>> cases{
      {"verify", "--suite", "symmetry", "--k", "1/2,1,2", "--N", "3", "--backend", "float"},
      {"racah-table", "--nu", "1/2,3/4,3/2", "--N", "4", "--backend", "float"},
      {"poly", "--racah", "1/2,5/3,-4,2/7", "--N", "3", "--backend", "float"},
      {"spectrum", "--k", "0.3,1,2", "--Nmax", "4", "--backend", "float"},
  };
  for (const auto& args : cases) EXPECT_EQ(run(args).out, run(args).out) << args[0];
}
