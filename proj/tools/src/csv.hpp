#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>

#include "run_config.hpp"

namespace mvdrift::app {

/// Comma-separated output with a header row, shortest round-trip doubles and
/// '\n' line endings regardless of platform or locale.
class CsvWriter {
public:
    using Cell = std::variant<double, std::uint64_t, std::string_view>;

    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
        write_cells(header);
    }

    void row(std::initializer_list<Cell> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) out_ << ',';
            first = false;
            if (const auto* d = std::get_if<double>(&c)) {
                out_ << format_double(*d);
            } else if (const auto* u = std::get_if<std::uint64_t>(&c)) {
                out_ << *u;
            } else {
                out_ << std::get<std::string_view>(c);
            }
        }
        out_ << '\n';
    }

private:
    void write_cells(std::initializer_list<std::string_view> cells) {
        bool first = true;
        for (auto c : cells) {
            if (!first) out_ << ',';
            first = false;
            out_ << c;
        }
        out_ << '\n';
    }

    std::ofstream out_;
};

}  // namespace mvdrift::app
