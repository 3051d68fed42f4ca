#pragma once

// Batch experiments behind the lmr command line tool. Each experiment takes a
// JSON config, validates it completely before any work starts, and produces a
// JSON summary, a CSV detail table and optional SVG plots.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lmr/limits.hpp"
#include "lmr/stable.hpp"

namespace lmr {

/// Schema violation; field() is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct ExperimentOutput {
    std::string name;
    nlohmann::json summary;
    std::string csv;
    std::vector<std::pair<std::string, std::string>> svgs;  // file suffix, SVG text
};

const std::vector<std::string>& experiment_names();

std::string library_version();

/// `config` is embedded verbatim in the summary together with its hash. The
/// "seed" entry (default 1) drives every random stream.
ExperimentOutput run_experiment(const std::string& name, const nlohmann::json& config, int workers = 1);

/// Parsers shared with the experiments; errors name the field.
LinearProcessSpec process_from_json(const nlohmann::json& j, const std::string& field = "process");
RenewalLaw law_from_json(const nlohmann::json& j, const std::string& field = "law");

/// Mean of f(L) over `draws` stable draws with standard error, in fixed
/// chunks so the result does not depend on the worker count.
Estimate stable_mc(const StableSpec& spec, std::size_t draws, std::uint64_t seed,
                   const std::function<double(double)>& f, int workers = 1);

}  // namespace lmr
