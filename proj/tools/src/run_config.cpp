#include "run_config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace mvdrift::app {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 5> kExperiments{{
    {Experiment::simulate, "simulate"},
    {Experiment::example, "example"},
    {Experiment::compare, "compare"},
    {Experiment::converge, "converge"},
    {Experiment::validate, "validate"},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(const std::string& key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a finite number, got '" + std::string(text) + "'");
    }
    return v;
}

template <class UInt>
UInt parse_unsigned(const std::string& key, std::string_view text) {
    text = trim(text);
    UInt v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

Setter set_double(double ModelParams::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.model.*field = parse_double(k, v); };
}

template <class UInt>
Setter set_unsigned(UInt RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_unsigned<UInt>(k, v); };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"model.r", set_double(&ModelParams::r)},
        {"model.a", set_double(&ModelParams::a)},
        {"model.b", set_double(&ModelParams::b)},
        {"model.pi0", set_double(&ModelParams::pi0)},
        {"model.y0", set_double(&ModelParams::y0)},
        {"model.z", set_double(&ModelParams::z)},
        {"grid.n", set_unsigned(&RunConfig::n)},
        {"grid.horizon", set_double(&ModelParams::horizon)},
        {"ensemble.m", set_unsigned(&RunConfig::m)},
        {"ensemble.seed", set_unsigned(&RunConfig::seed)},
        {"ensemble.stride", set_unsigned(&RunConfig::stride)},
        {"ensemble.moment_paths", set_unsigned(&RunConfig::moment_paths)},
        {"ensemble.coarse_split", set_unsigned(&RunConfig::coarse_split)},
        {"run.experiment",
         [](RunConfig& c, const std::string&, const std::string& v) { c.experiment = parse_experiment(trim(v)); }},
        {"run.out",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.out = std::string(trim(v));
             if (c.out.empty()) throw ConfigError(k + ": empty output directory");
         }},
        {"run.replications", set_unsigned(&RunConfig::replications)},
        {"run.threads", set_unsigned(&RunConfig::threads)},
    };
    return table;
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
    for (const auto& [k, name] : kExperiments) {
        if (k == e) return name;
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (const auto& [k, n] : kExperiments) {
        if (n == name) return k;
    }
    throw ConfigError("unknown experiment '" + std::string(name) +
                      "' (expected simulate, example, compare, converge or validate)");
}

void RunConfig::validate() const {
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (n < 1) throw ConfigError("grid.n must be at least 1");
    if (m < 1) throw ConfigError("ensemble.m must be at least 1");
    if (stride < 1) throw ConfigError("ensemble.stride must be at least 1");
    if (moment_paths < 2) throw ConfigError("ensemble.moment_paths must be at least 2");
    if (replications < 1) throw ConfigError("run.replications must be at least 1");
    if (experiment == Experiment::compare && (coarse_split < 1 || n % coarse_split != 0 || n / coarse_split < 2)) {
        throw ConfigError("ensemble.coarse_split must divide grid.n with at least two coarse steps");
    }
    if (experiment == Experiment::validate && replications < 2) {
        throw ConfigError("run.replications must be at least 2 for validate");
    }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    boost::property_tree::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end()) throw ConfigError("config: unknown key '" + full + "'");
            it->second(base, full, value.data());
        }
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::string to_ini(const RunConfig& c) {
    std::ostringstream o;
    o << "[model]\n"
      << "r = " << format_double(c.model.r) << "\n"
      << "a = " << format_double(c.model.a) << "\n"
      << "b = " << format_double(c.model.b) << "\n"
      << "pi0 = " << format_double(c.model.pi0) << "\n"
      << "y0 = " << format_double(c.model.y0) << "\n"
      << "z = " << format_double(c.model.z) << "\n"
      << "\n[grid]\n"
      << "n = " << c.n << "\n"
      << "horizon = " << format_double(c.model.horizon) << "\n"
      << "\n[ensemble]\n"
      << "m = " << c.m << "\n"
      << "seed = " << c.seed << "\n"
      << "stride = " << c.stride << "\n"
      << "moment_paths = " << c.moment_paths << "\n"
      << "coarse_split = " << c.coarse_split << "\n"
      << "\n[run]\n"
      << "experiment = " << to_string(c.experiment) << "\n"
      << "out = " << c.out << "\n"
      << "replications = " << c.replications << "\n"
      << "threads = " << c.threads << "\n";
    return o.str();
}

}  // namespace mvdrift::app
