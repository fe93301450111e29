#pragma once

#include "dqm/protocol.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dqm::cli {

enum class Format { Json, Csv };

struct RunConfig {
  double q = 0.99;
  int truncation = 400;
  int buffer = 8;
  std::uint64_t seed = 1;
  Format format = Format::Json;
  std::string out;  // empty: standard output

  Truncation trunc() const { return {truncation, buffer, false}; }
};

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

// Writes to a sibling temporary file and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

// One comparison against a printed value.
struct ReproEntry {
  std::string group;
  std::string label;
  double value = 0.0;
  double printed = 0.0;
  double tolerance = 0.0;
  bool pass() const { return std::abs(value - printed) <= tolerance; }
};

std::vector<ReproEntry> reproduce_peaks(const RunConfig& cfg);
std::vector<ReproEntry> reproduce_rotation_matrices(const RunConfig& cfg);
std::vector<ReproEntry> reproduce_b_examples(const RunConfig& cfg);

std::string render(const std::vector<ReproEntry>& rows, Format f);

// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dqm::cli
