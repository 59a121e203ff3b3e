#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace chreduct {

using OrderedJson = nlohmann::ordered_json;

/// Max/mean residual over a sample set with a pass verdict.
struct ResidualReport {
    std::string check;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    int n_samples = 0;
    double tolerance = 0.0;
    bool pass = true;

    /// Folds one residual into the running max/mean.
    void add(double residual);
    /// Sets pass = (max_residual < tolerance). Call after the last add().
    void finish();

    OrderedJson to_json() const;
};

/// Serializes with a fixed key order and every float at 17 significant
/// digits ("%.17g"); integers and booleans verbatim. indent < 0 means compact.
std::string dump_json(const OrderedJson& doc, int indent = 2);

/// {"tool","version","config","checks":[...],"pass": conjunction of checks}.
OrderedJson assemble_report(const OrderedJson& config, const std::vector<OrderedJson>& checks);

inline constexpr const char* kToolName = "chreduct";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace chreduct
