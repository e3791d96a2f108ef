#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specgap/analysis.hpp"
#include "specgap/flow.hpp"
#include "specgap/potentials.hpp"

namespace specgap {

// 17 significant digits round-trip a double exactly.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline nlohmann::json gap_report_json(const GapReport& r) {
    return nlohmann::json{
        {"lambda1", r.lambda1},
        {"lambda2", r.lambda2},
        {"gap", r.gap},
        {"bound", r.bound},
        {"margin", r.margin},
        {"node_position", r.node_position},
        {"sign_regions", {{"m", r.sign_regions.m}, {"n", r.sign_regions.n}}},
        {"ground_state_monotone", r.ground_state_monotone},
    };
}

inline const char* flow_termination_name(FlowTermination t) {
    switch (t) {
        case FlowTermination::converged_to_linear: return "converged_to_linear";
        case FlowTermination::max_steps: return "max_steps";
        case FlowTermination::step_failure: return "step_failure";
    }
    return "unknown";
}

inline nlohmann::json flow_state_json(const FlowState& s) {
    return nlohmann::json{
        {"alpha", s.alpha},
        {"potential", s.potential},
        {"gap", s.gap},
        {"m", s.m},
        {"n", s.n},
        {"linearity_residual", s.linearity_residual},
        {"degenerate_regions", s.degenerate_regions},
    };
}

// One flow state per line; a trailer line carries the termination reason.
inline void write_flow_trace_jsonl(std::ostream& os, const FlowTrace& t) {
    for (const FlowState& s : t.states) os << flow_state_json(s).dump() << "\n";
    os << nlohmann::json{{"terminated_reason", flow_termination_name(t.terminated_reason)}}.dump()
       << "\n";
}

inline std::string sweep_csv_header() {
    return "N,alpha_or_seed,lambda1,lambda2,gap,bound,margin,node_x,m,n,status";
}

struct SweepRow {
    std::size_t N = 0;
    double alpha_or_seed = 0.0;
    GapReport report;
    std::string status = "ok";   // ok | violation | error
};

inline std::string sweep_csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << row.N << ',' << fmt17(row.alpha_or_seed) << ',' << fmt17(row.report.lambda1) << ','
       << fmt17(row.report.lambda2) << ',' << fmt17(row.report.gap) << ','
       << fmt17(row.report.bound) << ',' << fmt17(row.report.margin) << ','
       << fmt17(row.report.node_position) << ',' << row.report.sign_regions.m << ','
       << row.report.sign_regions.n << ',' << row.status;
    return os.str();
}

inline nlohmann::json sweep_row_json(const SweepRow& row) {
    nlohmann::json j = gap_report_json(row.report);
    j["N"] = row.N;
    j["alpha_or_seed"] = row.alpha_or_seed;
    j["status"] = row.status;
    return j;
}

// Potential request from the command line: either a bare generator name or a
// JSON object {"kind": ..., "values": [...]} / {"generator": ..., "params": {...}}.
struct PotentialSpec {
    std::string generator;               // flat | unit-linear | quadratic | random-convex | values
    std::vector<double> values;          // generator == "values"
    std::optional<double> alpha;
    std::optional<double> scale;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> kind;     // "path" | "hamming" when the JSON named it
};

inline PotentialSpec parse_potential_spec(const std::string& text) {
    PotentialSpec spec;
    const auto is_generator = [](const std::string& g) {
        return g == "flat" || g == "unit-linear" || g == "quadratic" || g == "random-convex";
    };
    if (text.empty())
        throw std::invalid_argument("potential spec is empty");
    if (text.front() != '{') {
        if (!is_generator(text))
            throw std::invalid_argument("unknown potential generator '" + text + "'");
        spec.generator = text;
        return spec;
    }
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("kind")) {
        spec.kind = j.at("kind").get<std::string>();
        if (*spec.kind != "path" && *spec.kind != "hamming")
            throw std::invalid_argument("potential kind must be 'path' or 'hamming'");
    }
    if (j.contains("values")) {
        spec.generator = "values";
        spec.values = j.at("values").get<std::vector<double>>();
        if (spec.values.empty())
            throw std::invalid_argument("potential values must be nonempty");
        return spec;
    }
    if (!j.contains("generator"))
        throw std::invalid_argument("potential spec needs 'values' or 'generator'");
    spec.generator = j.at("generator").get<std::string>();
    if (!is_generator(spec.generator))
        throw std::invalid_argument("unknown potential generator '" + spec.generator + "'");
    if (j.contains("params")) {
        const nlohmann::json& p = j.at("params");
        if (p.contains("alpha")) spec.alpha = p.at("alpha").get<double>();
        if (p.contains("scale")) spec.scale = p.at("scale").get<double>();
        if (p.contains("seed")) spec.seed = p.at("seed").get<std::uint64_t>();
    }
    return spec;
}

// Materialize the requested potential as raw values. count is N for paths and
// N+1 for Hamming potentials; seed_base offsets every seeded draw.
inline std::vector<double> realize_potential(const PotentialSpec& spec, std::size_t count,
                                             bool hamming, std::uint64_t seed_base) {
    if (spec.kind && ((*spec.kind == "hamming") != hamming))
        throw std::invalid_argument("potential kind does not match the requested graph");
    const double alpha = spec.alpha.value_or(1.0);
    const double scale = spec.scale.value_or(1.0);
    const std::uint64_t seed = seed_base + spec.seed.value_or(0);
    if (spec.generator == "values") {
        if (spec.values.size() != count)
            throw std::invalid_argument("potential has " + std::to_string(spec.values.size()) +
                                        " values, operator needs " + std::to_string(count));
        return spec.values;
    }
    if (spec.generator == "flat") return std::vector<double>(count, 0.0);
    if (spec.generator == "unit-linear") {
        if (hamming) return linear_hamming(static_cast<int>(count) - 1, alpha).values;
        return unit_linear_path(count, alpha).values;
    }
    if (spec.generator == "quadratic") {
        if (hamming) return quadratic_hamming(static_cast<int>(count) - 1, scale).values;
        return quadratic_path(count, scale).values;
    }
    if (spec.generator == "random-convex") return random_convex_values(count, seed, scale);
    throw std::invalid_argument("unknown potential generator '" + spec.generator + "'");
}

} // namespace specgap
