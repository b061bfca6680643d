#include "hhgq/io.hpp"

#include <cstdio>

#include "hhgq/errors.hpp"

namespace hhgq {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
    if (!out_) throw ConfigError("CsvWriter: cannot open " + path);
    for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<std::optional<double>>& values) {
    if (values.size() != n_cols_) throw ConfigError("CsvWriter: column count mismatch");
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ",";
        if (values[i])
            out_ << format(*values[i]);
        else
            ++undefined_;
    }
    out_ << "\n";
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string version_string() { return "0.1.0"; }

}  // namespace hhgq
