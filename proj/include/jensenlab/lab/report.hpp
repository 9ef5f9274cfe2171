#ifndef JENSENLAB_LAB_REPORT_HPP
#define JENSENLAB_LAB_REPORT_HPP

#include "jensenlab/lab/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace jensenlab::lab {

/// deviation / (bound + slack); 0/0 = 0 and x/0 = ∞ for x > 0.
inline double bound_ratio(double deviation, double bound, double slack = 0.0) {
    const double denom = bound + slack;
    if (denom > 0.0) return deviation / denom;
    return deviation > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

struct SampleRow {
    Vector x;
    double deviation = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
};

/// One inequality checked over a set of samples. Informational checks are
/// reported but do not affect the verdict.
struct CheckResult {
    std::string name;
    int count = 0;
    int failures = 0;
    double max_deviation = 0.0;
    double max_bound = 0.0;
    double max_ratio = 0.0;
    bool pass = true;
    bool informational = false;

    void add(double deviation, double bound, double slack, double report_tol) {
        const double ratio = bound_ratio(deviation, bound, slack);
        ++count;
        max_deviation = std::max(max_deviation, deviation);
        max_bound = std::max(max_bound, bound);
        max_ratio = std::max(max_ratio, ratio);
        if (!(ratio <= 1.0 + report_tol)) {
            ++failures;
            pass = false;
        }
    }
};

struct LimitSummary {
    bool all_converged = true;
    int max_iterations = 0;
    double max_last_gap = 0.0;
};

/// max_ratio is the worst conclusion ratio over the evaluation points; pass
/// additionally requires every non-informational auxiliary check to hold.
struct StabilityReport {
    std::string theorem;
    json config;
    double epsilon_effective = 0.0;
    int hypothesis_samples = 0;
    double bound_value = 0.0;
    double max_deviation = 0.0;
    double max_ratio = 0.0;
    bool pass = true;
    std::string reason;
    std::vector<CheckResult> checks;
    std::vector<SampleRow> rows;
    std::vector<SampleRow> witnesses;
    LimitSummary limits;
    json extra = json::object();
    double runtime_seconds = 0.0;
};

namespace detail {

inline json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double number_from(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("bad number '" + s + "'");
    }
    return j.get<double>();
}

inline json row_to_json(const SampleRow& r) {
    json j;
    j["x"] = vector_to_json(r.x);
    j["deviation"] = number(r.deviation);
    j["bound"] = number(r.bound);
    j["ratio"] = number(r.ratio);
    return j;
}

inline SampleRow row_from_json(const json& j) {
    return {vector_from_json(j.at("x")), number_from(j.at("deviation")), number_from(j.at("bound")),
            number_from(j.at("ratio"))};
}

}  // namespace detail

/// Fields in a fixed order. Runtime lives in its own block and is left out
/// when include_runtime is false.
inline json to_json(const StabilityReport& r, bool include_runtime = true) {
    using detail::number;
    json j;
    j["theorem"] = r.theorem;
    j["pass"] = r.pass;
    j["reason"] = r.reason;
    j["epsilon_effective"] = number(r.epsilon_effective);
    j["hypothesis_samples"] = r.hypothesis_samples;
    j["bound_value"] = number(r.bound_value);
    j["max_deviation"] = number(r.max_deviation);
    j["max_ratio"] = number(r.max_ratio);
    auto checks = json::array();
    for (const auto& c : r.checks) {
        json cj;
        cj["name"] = c.name;
        cj["count"] = c.count;
        cj["failures"] = c.failures;
        cj["max_deviation"] = number(c.max_deviation);
        cj["max_bound"] = number(c.max_bound);
        cj["max_ratio"] = number(c.max_ratio);
        cj["pass"] = c.pass;
        cj["informational"] = c.informational;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["limits"] = {{"all_converged", r.limits.all_converged},
                   {"max_iterations", r.limits.max_iterations},
                   {"max_last_gap", number(r.limits.max_last_gap)}};
    auto wit = json::array();
    for (const auto& w : r.witnesses) wit.push_back(detail::row_to_json(w));
    j["witnesses"] = wit;
    auto rows = json::array();
    for (const auto& s : r.rows) rows.push_back(detail::row_to_json(s));
    j["samples"] = rows;
    j["extra"] = r.extra;
    j["config"] = r.config;
    if (include_runtime) j["runtime"] = {{"seconds", r.runtime_seconds}};
    return j;
}

inline StabilityReport report_from_json(const json& j) {
    using detail::number_from;
    StabilityReport r;
    r.theorem = j.at("theorem").get<std::string>();
    r.pass = j.at("pass").get<bool>();
    r.reason = j.at("reason").get<std::string>();
    r.epsilon_effective = number_from(j.at("epsilon_effective"));
    r.hypothesis_samples = j.at("hypothesis_samples").get<int>();
    r.bound_value = number_from(j.at("bound_value"));
    r.max_deviation = number_from(j.at("max_deviation"));
    r.max_ratio = number_from(j.at("max_ratio"));
    for (const auto& cj : j.at("checks")) {
        CheckResult c;
        c.name = cj.at("name").get<std::string>();
        c.count = cj.at("count").get<int>();
        c.failures = cj.at("failures").get<int>();
        c.max_deviation = number_from(cj.at("max_deviation"));
        c.max_bound = number_from(cj.at("max_bound"));
        c.max_ratio = number_from(cj.at("max_ratio"));
        c.pass = cj.at("pass").get<bool>();
        c.informational = cj.at("informational").get<bool>();
        r.checks.push_back(c);
    }
    const auto& lj = j.at("limits");
    r.limits = {lj.at("all_converged").get<bool>(), lj.at("max_iterations").get<int>(), number_from(lj.at("max_last_gap"))};
    for (const auto& w : j.at("witnesses")) r.witnesses.push_back(detail::row_from_json(w));
    for (const auto& s : j.at("samples")) r.rows.push_back(detail::row_from_json(s));
    r.extra = j.at("extra");
    r.config = j.at("config");
    if (j.contains("runtime")) r.runtime_seconds = j["runtime"].at("seconds").get<double>();
    return r;
}

inline std::string emit_json(const StabilityReport& r, bool include_runtime = true) {
    return to_json(r, include_runtime).dump(2) + "\n";
}

/// One line per sample: index, coordinates x0..x{d-1}, deviation, bound, ratio.
inline void emit_csv(std::ostream& os, const StabilityReport& r) {
    const Eigen::Index dim = r.rows.empty() ? 0 : r.rows.front().x.size();
    os << "index";
    for (Eigen::Index i = 0; i < dim; ++i) os << ",x" << i;
    os << ",deviation,bound,ratio\n";
    const auto old = os.precision(17);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        const auto& row = r.rows[k];
        os << k;
        for (Eigen::Index i = 0; i < row.x.size(); ++i) os << ',' << row.x[i];
        os << ',' << row.deviation << ',' << row.bound << ',' << row.ratio << '\n';
    }
    os.precision(old);
}

}  // namespace jensenlab::lab

#endif  // JENSENLAB_LAB_REPORT_HPP
