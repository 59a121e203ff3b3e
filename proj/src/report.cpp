#include "chreduct/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chreduct/errors.hpp"
#include "chreduct/trajectory.hpp"

namespace chreduct {

void ResidualReport::add(double residual) {
    if (!std::isfinite(residual)) {
        residual = std::numeric_limits<double>::infinity();
    }
    mean_residual = (mean_residual * n_samples + residual) / (n_samples + 1);
    max_residual = std::max(max_residual, residual);
    ++n_samples;
}

void ResidualReport::finish() { pass = max_residual < tolerance; }

OrderedJson ResidualReport::to_json() const {
    OrderedJson j;
    j["check"] = check;
    j["max_residual"] = max_residual;
    j["mean_residual"] = mean_residual;
    j["n_samples"] = n_samples;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j;
}

namespace {

void write_string(std::ostream& out, const std::string& s) {
    // reuse nlohmann's escaping
    out << nlohmann::json(s).dump();
}

void write(std::ostream& out, const OrderedJson& j, int indent, int depth) {
    const bool pretty = indent >= 0;
    auto newline = [&](int d) {
        if (pretty) {
            out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case OrderedJson::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out << ',';
                }
                first = false;
                newline(depth + 1);
                write_string(out, it.key());
                out << (pretty ? ": " : ":");
                write(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out << '}';
            return;
        }
        case OrderedJson::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) {
                    out << ',';
                }
                first = false;
                newline(depth + 1);
                write(out, v, indent, depth + 1);
            }
            newline(depth);
            out << ']';
            return;
        }
        case OrderedJson::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                out << format_real(v);
            } else {
                // JSON has no inf/nan
                write_string(out, std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
            }
            return;
        }
        case OrderedJson::value_t::string:
            write_string(out, j.get<std::string>());
            return;
        default:
            out << j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const OrderedJson& doc, int indent) {
    std::ostringstream out;
    write(out, doc, indent, 0);
    return out.str();
}

OrderedJson assemble_report(const OrderedJson& config, const std::vector<OrderedJson>& checks) {
    OrderedJson doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["config"] = config.is_null() ? OrderedJson::object() : config;
    doc["checks"] = OrderedJson::array();
    bool pass = true;
    for (const auto& c : checks) {
        doc["checks"].push_back(c);
        pass = pass && c.value("pass", false);
    }
    doc["pass"] = pass;
    return doc;
}

}  // namespace chreduct
