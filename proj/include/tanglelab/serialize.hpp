#pragma once

// Output helpers shared by the CLI and tests: 17-significant-digit floats
// (round-trip exact), CSV writing, and a schema-versioned JSON wrapper.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace tanglelab {

inline constexpr const char* kSchemaVersion = "1";

inline std::string fp17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != header_.size())
            throw std::invalid_argument("CsvWriter: row width does not match header");
        rows_.push_back(cells);
    }

    void write(std::ostream& os) const {
        os << join(header_) << '\n';
        for (const auto& r : rows_) os << join(r) << '\n';
    }

    void write_file(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("CsvWriter: cannot open " + path);
        write(os);
    }

  private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        return out;
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline nlohmann::ordered_json make_json_object() {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    return j;
}

inline void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::fputs(content.c_str(), stdout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file " + path);
    os << content;
}

}  // namespace tanglelab
