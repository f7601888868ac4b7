#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spdelab {

/// FNV-1a 64-bit hash (provenance tags for configs and artifacts; replay
/// compares full bytes, not hashes).
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

/// Deterministic number formatting shared by every CSV writer (%.17g).
std::string format_number(double v);

/// Accumulates a CSV document in memory; every data row ends with the
/// provenance columns (seed, config hash). write() is atomic per file.
class CsvBuilder {
 public:
  CsvBuilder(std::vector<std::string> columns, std::uint64_t seed,
             const std::string& config_hash);

  /// One row; `cells` must match the non-provenance columns.
  void row(const std::vector<std::string>& cells);
  void row_numbers(const std::vector<double>& cells);

  const std::string& text() const { return text_; }

 private:
  std::size_t n_cols_;
  std::string provenance_;
  std::string text_;
};

/// Gnuplot-ready whitespace table: x y yerr per line, plus a comment header.
std::string plot_data(const std::string& title,
                      const std::vector<double>& x,
                      const std::vector<double>& y,
                      const std::vector<double>& yerr);

struct Artifact {
  std::string path;  // relative to the run directory
  std::uint64_t bytes = 0;
  std::string fnv64;
};

/// Writes `content` under dir/name (refusing to overwrite: run directories
/// are write-once) and records it in the artifact list.
void write_artifact(const std::filesystem::path& dir, const std::string& name,
                    const std::string& content, std::vector<Artifact>& artifacts);

}  // namespace spdelab
