#ifndef RACAH_TESTS_CLI_HARNESS_HPP
#define RACAH_TESTS_CLI_HARNESS_HPP

// In-process driver for racah-kit plus schema validation through the
// jsonschema-based checker shipped in tools/.

#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace racah::testcli {

struct Run {
  int code;
  std::string out;
  std::string err;
};

inline Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "racah-kit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

inline std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("racah-kit-tests-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path;
}

// True iff `document` validates against schemas/<schema>. Diagnostics go to stderr.
inline bool schema_valid(const std::string& schema, const std::string& document) {
  static int counter = 0;
  const auto doc = write_file("doc" + std::to_string(counter++) + ".json", document);
  const std::string cmd = std::string(RACAH_PYTHON) + " " + RACAH_VALIDATOR + " " + RACAH_SCHEMA_DIR + "/" + schema +
                          " " + doc.string();
  return std::system(cmd.c_str()) == 0;
}

}  // namespace racah::testcli

#endif  // RACAH_TESTS_CLI_HARNESS_HPP
