#include "spdelab/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spdelab {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvBuilder::CsvBuilder(std::vector<std::string> columns, std::uint64_t seed,
                       const std::string& config_hash)
    : n_cols_(columns.size()) {
  for (const auto& c : columns) {
    text_ += c;
    text_ += ',';
  }
  text_ += "seed,config_hash\n";
  provenance_ = std::to_string(seed) + "," + config_hash + "\n";
}

void CsvBuilder::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_)
    throw std::invalid_argument("CsvBuilder: cell count mismatch");
  for (const auto& c : cells) {
    text_ += c;
    text_ += ',';
  }
  text_ += provenance_;
}

void CsvBuilder::row_numbers(const std::vector<double>& cells) {
  std::vector<std::string> formatted;
  formatted.reserve(cells.size());
  for (double v : cells) formatted.push_back(format_number(v));
  row(formatted);
}

std::string plot_data(const std::string& title, const std::vector<double>& x,
                      const std::vector<double>& y,
                      const std::vector<double>& yerr) {
  if (x.size() != y.size() || (!yerr.empty() && yerr.size() != x.size()))
    throw std::invalid_argument("plot_data: column length mismatch");
  std::string out = "# " + title + "\n# x y yerr\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out += format_number(x[i]);
    out += ' ';
    out += format_number(y[i]);
    out += ' ';
    out += format_number(yerr.empty() ? 0.0 : yerr[i]);
    out += '\n';
  }
  return out;
}

void write_artifact(const std::filesystem::path& dir, const std::string& name,
                    const std::string& content,
                    std::vector<Artifact>& artifacts) {
  const std::filesystem::path target = dir / name;
  if (std::filesystem::exists(target))
    throw std::runtime_error("write_artifact: refusing to overwrite " +
                             target.string());
  std::ofstream os(target, std::ios::binary);
  if (!os) throw std::runtime_error("write_artifact: cannot open " + target.string());
  os << content;
  os.close();
  if (!os) throw std::runtime_error("write_artifact: write failed for " + target.string());
  artifacts.push_back({name, content.size(), fnv1a64_hex(content)});
}

}  // namespace spdelab
