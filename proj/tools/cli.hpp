#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace onomast::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitContractViolation = 2,
  kExitUsage = 64,
};

struct PipelineConfig {
  std::string dump_path;
  std::string dump_date;
  std::string labels_language = "en";
  int initials_max_len = 3;
  std::string alpha = "0.005";
  std::string year_range;  // "FROM-TO", inclusive; empty for no filter
  std::string role = "all";
  std::string transform = "none";
  unsigned threads = 1;
  std::filesystem::path out_dir;

  // Stage-level inputs and outputs.
  std::filesystem::path entities_path;
  std::filesystem::path table_path;
  std::filesystem::path authors_path;
  std::filesystem::path out_path;
  std::filesystem::path stats_out;
  std::vector<std::filesystem::path> merged;
};

// Parses "2010-2019". Throws ContractViolation when malformed or reversed.
std::pair<int, int> parse_year_range(std::string_view text);

// Checks alpha, initials_max_len, year_range and transform. Throws
// ContractViolation.
void validate(const PipelineConfig& config);

// Runs one subcommand. `args` excludes the program name. Data goes to `out`
// only in filter modes; progress and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace onomast::cli
