#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mvdrift/model.hpp"

namespace mvdrift::app {

enum class Experiment { simulate, example, compare, converge, validate };

[[nodiscard]] std::string_view to_string(Experiment e) noexcept;
/// Throws ConfigError for names outside the enumeration.
[[nodiscard]] Experiment parse_experiment(std::string_view name);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams model;  ///< model.horizon is the grid horizon
    std::size_t n = 100;
    std::size_t m = 200;
    std::uint64_t seed = 1;
    std::size_t stride = 10;
    std::size_t moment_paths = 20000;
    std::size_t coarse_split = 10;  ///< fine steps per coarse step of the double-partition scheme
    Experiment experiment = Experiment::simulate;
    std::string out = "mvdrift_out";
    std::size_t replications = 20;
    unsigned threads = 1;

    /// Throws ConfigError when a field is out of range.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// Reads INI text on top of `base`. Unknown sections or keys, duplicate keys
/// and malformed values are errors.
[[nodiscard]] RunConfig parse_config(std::string_view text, RunConfig base = {});
[[nodiscard]] RunConfig load_config(const std::string& path, RunConfig base = {});

/// Every field, in the format parse_config reads back exactly.
[[nodiscard]] std::string to_ini(const RunConfig& cfg);

/// Shortest decimal string that round-trips to the same double.
[[nodiscard]] std::string format_double(double x);

}  // namespace mvdrift::app
