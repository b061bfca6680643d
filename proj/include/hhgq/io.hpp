#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace hhgq {

// Deterministic CSV emission: fixed column order, %.17g doubles (exact
// round-trip), empty cells for undefined statistics.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<std::optional<double>>& values);
    long undefined_cells() const { return undefined_; }

    static std::string format(double v);

  private:
    std::ofstream out_;
    size_t n_cols_;
    long undefined_ = 0;
};

std::uint64_t fnv1a64(const std::string& data);

std::string version_string();

}  // namespace hhgq
