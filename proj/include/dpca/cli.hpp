#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace dpca::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumerical = 3;

struct FitOptions {
  std::string dataset_path;
  std::size_t k = 1;
  bool center = true;
  std::string output_path;  // empty writes to stdout
};

struct CompareOptions {
  std::string dataset_path;
  std::size_t k = 1;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  bool center = true;
  std::string output_path;  // empty writes report + plot table to stdout
};

struct ErrorOptions {
  std::string dataset_path;
  std::string model_path;
};

struct ProjectOptions {
  std::string dataset_path;
  std::string model_path;
  std::string output_path;
};

int run_fit(const FitOptions& opt, std::ostream& out, std::ostream& err);
int run_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);
int run_error(const ErrorOptions& opt, std::ostream& out, std::ostream& err);
int run_project(const ProjectOptions& opt, std::ostream& out, std::ostream& err);

/// The plot table that accompanies a comparison report written to `path`:
/// the final extension is replaced by ".plot.csv".
std::string plot_table_path(const std::string& path);

}  // namespace dpca::cli
