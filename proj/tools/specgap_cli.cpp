// specgap: compute fundamental gaps of discrete Schrodinger operators on
// path and hypercube graphs, sweep invariant families over parameter grids,
// run the convexifying potential flow, and verify the full structural suite.
//
// Exit codes: 0 success/pass, 1 violation(s) found, 2 invalid input,
// 3 solver failure. The flow command maps budget exhaustion to 2 and a
// failed step to 3 so scripts can tell the outcomes apart.

#include <specgap/specgap.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using nlohmann::json;
using namespace specgap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t env_seed_base() {
    const char* s = std::getenv("SPECGAP_SEED_BASE");
    if (!s || !*s) return 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0')
        throw std::invalid_argument("SPECGAP_SEED_BASE must be a nonnegative integer");
    return v;
}

// "lo:hi" inclusive or a single "k".
std::vector<std::size_t> parse_index_range(const std::string& text) {
    const auto colon = text.find(':');
    std::size_t lo = 0, hi = 0;
    try {
        if (colon == std::string::npos) {
            lo = hi = std::stoull(text);
        } else {
            lo = std::stoull(text.substr(0, colon));
            hi = std::stoull(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad range '" + text + "', expected lo:hi");
    }
    if (hi < lo) throw std::invalid_argument("bad range '" + text + "', expected lo <= hi");
    std::vector<std::size_t> out;
    out.reserve(hi - lo + 1);
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
}

// "lo:hi:count" linspace, "lo:hi" with 11 points, or a single value.
std::vector<double> parse_real_range(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    try {
        if (parts.size() == 1) return {std::stod(parts[0])};
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const std::size_t count = parts.size() >= 3 ? std::stoull(parts[2]) : 11;
        if (count < 1) throw std::invalid_argument("count");
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i)
            out[i] = count == 1 ? lo
                                : lo + (hi - lo) * static_cast<double>(i) /
                                           static_cast<double>(count - 1);
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad range '" + text + "', expected lo:hi:count");
    }
}

enum class GraphKind { path, hypercube };

GraphKind parse_graph(const std::string& g) {
    if (g == "path") return GraphKind::path;
    if (g == "hypercube") return GraphKind::hypercube;
    throw std::invalid_argument("unknown graph '" + g + "' (path or hypercube)");
}

// Paths carry N potential values; a dimension-N hypercube carries N+1, one
// per Hamming weight.
std::size_t value_count(GraphKind g, std::size_t n) {
    return g == GraphKind::path ? n : n + 1;
}

double flat_bound(GraphKind g, std::size_t n) {
    if (g == GraphKind::path) {
        if (n < 2) throw std::invalid_argument("path needs n >= 2");
        return 2.0 * (1.0 - std::cos(3.14159265358979323846 / static_cast<double>(n)));
    }
    if (n < 1) throw std::invalid_argument("hypercube needs n >= 1");
    return 2.0;
}

JacobiMatrix build_operator(GraphKind g, const std::vector<double>& values) {
    if (g == GraphKind::path) return build_path(PathPotential(values));
    return build_hypercube_reduced(HammingPotential(values), false);
}

// Writes to the file when a path is set, stdout otherwise.
class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    json cfg = json::parse(in);
    if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    return cfg;
}

// Flags beat config values, config values beat defaults.
template <typename T>
void merge_config(const CLI::Option* opt, const json& cfg, const char* key, T& slot) {
    if (opt && opt->count() > 0) return;
    if (const auto it = cfg.find(key); it != cfg.end()) slot = it->get<T>();
}

struct PotentialRequest {
    std::string text = "flat";
    std::optional<double> alpha;
    std::optional<double> scale;
    std::optional<std::uint64_t> seed;
};

std::vector<double> realize(const PotentialRequest& req, GraphKind g, std::size_t n,
                            std::uint64_t seed_base) {
    PotentialSpec spec = parse_potential_spec(req.text);
    if (req.alpha) spec.alpha = req.alpha;
    if (req.scale) spec.scale = req.scale;
    if (req.seed) spec.seed = req.seed;
    return realize_potential(spec, value_count(g, n), g == GraphKind::hypercube, seed_base);
}

// ---------------------------------------------------------------- gap ----

struct GapArgs {
    std::string graph = "path";
    std::size_t n = 0;
    PotentialRequest pot;
    double tol = 1e-9;
    std::string output;
    std::string format = "json";
    bool require_convex = false;
};

int cmd_gap(const GapArgs& a) {
    const GraphKind g = parse_graph(a.graph);
    if (a.n == 0) throw std::invalid_argument("gap needs --n (flag or config)");
    if (!(a.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
    const std::vector<double> values = realize(a.pot, g, a.n, env_seed_base());
    if (a.require_convex && !certify_convex(values))
        throw std::invalid_argument("potential is not convex and --require-convex is set");

    const JacobiMatrix J = build_operator(g, values);
    const GapReport rep = gap_report(J, flat_bound(g, a.n), 1e-12);

    OutputSink sink(a.output);
    if (a.format == "csv") {
        sink.stream() << sweep_csv_header() << "\n"
                      << sweep_csv_row(SweepRow{a.n, 0.0, rep, "ok"}) << "\n";
    } else if (a.format == "json") {
        json j = gap_report_json(rep);
        j["graph"] = a.graph;
        j["N"] = a.n;
        j["timestamp"] = iso_timestamp();
        sink.stream() << j.dump(2) << "\n";
    } else {
        throw std::invalid_argument("unknown format '" + a.format + "' (json or csv)");
    }
    return rep.margin >= -a.tol ? kExitOk : kExitViolation;
}

// -------------------------------------------------------------- sweep ----

struct SweepArgs {
    std::string graph = "path";
    std::string family = "bound";
    std::string n_range;
    std::string alpha_range;
    std::string seeds;
    std::string potential;   // generator override for grid cases
    double scale = 1.0;
    double tol = 1e-9;
    std::size_t jobs = 1;
    std::string output;
    std::string format = "csv";
    bool require_convex = false;
};

struct SweepCase {
    std::size_t n = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    bool seeded = false;
};

// One grid case per row; margin holds the family slack, nonnegative when the
// invariant holds cleanly. Solver and structure errors mark the row instead
// of aborting the sweep.
SweepRow run_sweep_case(const SweepArgs& a, GraphKind g, const SweepCase& c,
                        std::uint64_t seed_base) {
    SweepRow row;
    row.N = c.n;
    row.alpha_or_seed = c.seeded ? static_cast<double>(c.seed) : c.alpha;
    const std::size_t count = value_count(g, c.n);
    const double solver_tol = 1e-12;

    std::vector<double> values;
    if (!a.potential.empty()) {
        PotentialRequest req{a.potential, c.alpha, a.scale, c.seeded ? std::optional(c.seed) : std::nullopt};
        values = realize(req, g, c.n, seed_base);
    } else if (c.seeded) {
        values = random_convex_values(count, seed_base + c.seed, a.scale);
    } else if (g == GraphKind::path) {
        values = unit_linear_path(count, c.alpha).values;
    } else {
        values = linear_hamming(static_cast<int>(c.n), c.alpha).values;
    }
    if (a.require_convex && !certify_convex(values)) {
        row.status = "error";
        return row;
    }

    const JacobiMatrix J = build_operator(g, values);
    const std::string& fam = a.family;

    if (fam == "bound") {
        row.report = gap_report(J, flat_bound(g, c.n), solver_tol);
        if (row.report.margin < -a.tol) row.status = "violation";
        return row;
    }
    if (fam == "node") {
        row.report = gap_report(J, flat_bound(g, c.n), solver_tol);
        const double center = 0.5 * static_cast<double>(J.dim() + 1);
        row.report.margin = center + 1e-9 - row.report.node_position;
        row.report.bound = center;
        if (row.report.margin < 0.0) row.status = "violation";
        return row;
    }
    if (fam == "casoratian") {
        const SpectrumSlice s = lowest_eigenpairs(J, 2, solver_tol);
        row.report = gap_report(J, flat_bound(g, c.n), solver_tol);
        const double gap = s.pairs[1].value - s.pairs[0].value;
        CasoratianSeq w;
        if (g == GraphKind::path) {
            w = casoratian(s.pairs[1].vector, s.pairs[0].vector, gap);
        } else {
            const VPrimeTransform T = vprime_transform(static_cast<int>(c.n));
            const std::vector<double> v2 = apply_vprime(T, s.pairs[1].vector);
            const std::vector<double> v1 = apply_vprime(T, s.pairs[0].vector);
            w = casoratian(v2, v1, gap, T.c);
        }
        double worst = -std::numeric_limits<double>::infinity();
        for (double x : w.w) worst = std::max(worst, x);
        const double amax = detail::max_abs(s.pairs[0].vector) * detail::max_abs(s.pairs[1].vector);
        row.report.margin = 1e-10 * amax - worst;
        row.report.bound = 0.0;
        if (row.report.margin < 0.0) row.status = "violation";
        return row;
    }
    if (fam == "hf") {
        std::vector<double> dw(count);
        for (std::size_t i = 0; i < count; ++i) dw[i] = static_cast<double>(i);
        const double hf = hf_derivative(J, dw, 1, solver_tol) - hf_derivative(J, dw, 0, solver_tol);
        const double h = 1e-5 * (1.0 + std::fabs(c.alpha));
        const auto gap_at = [&](double da) {
            std::vector<double> v = values;
            for (std::size_t i = 0; i < count; ++i) v[i] += da * dw[i];
            const SpectrumSlice s = lowest_eigenpairs(build_operator(g, v), 2, solver_tol);
            return s.pairs[1].value - s.pairs[0].value;
        };
        const double fd = (gap_at(h) - gap_at(-h)) / (2.0 * h);
        row.report = gap_report(J, flat_bound(g, c.n), solver_tol);
        row.report.margin = 1e-5 * std::max({1.0, std::fabs(hf), std::fabs(fd)}) - std::fabs(hf - fd);
        row.report.bound = hf;
        if (row.report.margin < 0.0) row.status = "violation";
        return row;
    }
    if (fam == "interlacing") {
        row.report = gap_report(J, flat_bound(g, c.n), solver_tol);
        const JacobiMatrix B = J.leading_principal_submatrix(J.dim() - 1);
        const std::vector<double> lam = eigenvalues_lowest(J, J.dim(), 1e-13);
        const std::vector<double> mu = eigenvalues_lowest(B, J.dim() - 1, 1e-13);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < J.dim(); ++i)
            worst = std::min({worst, mu[i] - lam[i], lam[i + 1] - mu[i]});
        row.report.margin = worst;
        row.report.bound = 0.0;
        if (worst < -1e-9) row.status = "violation";
        return row;
    }
    if (fam == "ordering") {
        row.report = gap_report(J, flat_bound(g, c.n), solver_tol);
        const EigenPair p = eigenpair(J, 1, solver_tol);
        const bool ok = check_node_left_of_center(p.vector) &&
                        check_ordering(p.vector, row.report.node_position);
        row.report.margin = ok ? 0.0 : -1.0;
        row.report.bound = 0.0;
        if (!ok) row.status = "violation";
        return row;
    }
    if (fam == "exact") {
        if (g != GraphKind::hypercube)
            throw std::invalid_argument("family 'exact' needs --graph hypercube");
        const JacobiMatrix S =
            build_hypercube_reduced(HammingPotential(linear_hamming(static_cast<int>(c.n), c.alpha)), true);
        const std::vector<double> lam = eigenvalues_lowest(S, S.dim(), 1e-13);
        const double step = std::sqrt(4.0 + c.alpha * c.alpha);
        double dev = 0.0;
        for (std::size_t k = 0; k < lam.size(); ++k) {
            const double want = (static_cast<double>(k) - 0.5 * static_cast<double>(c.n)) * step;
            dev = std::max(dev, std::fabs(lam[k] - want));
        }
        row.report = gap_report(J, flat_bound(g, c.n), solver_tol);
        row.report.margin = 1e-8 * (1.0 + std::fabs(c.alpha)) - dev;
        row.report.bound = step;
        if (row.report.margin < 0.0) row.status = "violation";
        return row;
    }
    throw std::invalid_argument("unknown family '" + fam +
                                "' (bound, node, casoratian, hf, interlacing, ordering, exact)");
}

int cmd_sweep(const SweepArgs& a) {
    const GraphKind g = parse_graph(a.graph);
    // argument errors must surface as usage failures, not per-row errors
    static const char* kFamilies[] = {"bound",       "node",     "casoratian", "hf",
                                      "interlacing", "ordering", "exact"};
    if (std::find_if(std::begin(kFamilies), std::end(kFamilies),
                     [&](const char* f) { return a.family == f; }) == std::end(kFamilies))
        throw std::invalid_argument("unknown family '" + a.family +
                                    "' (bound, node, casoratian, hf, interlacing, ordering, exact)");
    if (a.family == "exact" && g != GraphKind::hypercube)
        throw std::invalid_argument("family 'exact' needs --graph hypercube");
    if (!(a.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
    if (a.n_range.empty()) throw std::invalid_argument("sweep needs --n-range");
    if (!a.alpha_range.empty() && !a.seeds.empty())
        throw std::invalid_argument("give --alpha-range or --seeds, not both");

    const std::vector<std::size_t> ns = parse_index_range(a.n_range);
    std::vector<SweepCase> grid;
    if (!a.seeds.empty()) {
        for (std::size_t n : ns)
            for (std::size_t s : parse_index_range(a.seeds))
                grid.push_back({n, 0.0, static_cast<std::uint64_t>(s), true});
    } else {
        const std::vector<double> alphas =
            a.alpha_range.empty() ? std::vector<double>{1.0} : parse_real_range(a.alpha_range);
        for (std::size_t n : ns)
            for (double al : alphas) grid.push_back({n, al, 0, false});
    }
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");

    const std::uint64_t seed_base = env_seed_base();
    std::vector<SweepRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    const std::size_t jobs = std::clamp<std::size_t>(a.jobs, 1, 64);
    const auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) {
            try {
                rows[i] = run_sweep_case(a, g, grid[i], seed_base);
            } catch (const std::exception&) {
                rows[i].N = grid[i].n;
                rows[i].alpha_or_seed =
                    grid[i].seeded ? static_cast<double>(grid[i].seed) : grid[i].alpha;
                rows[i].status = "error";
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // The node family also demands nonincreasing positions along the alpha
    // axis within each N group, so fold that slack in after the fact.
    if (a.family == "node") {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (grid[i].n != grid[i - 1].n || grid[i].seeded) continue;
            if (rows[i].status == "error" || rows[i - 1].status == "error") continue;
            const double slack =
                rows[i - 1].report.node_position - rows[i].report.node_position + 1e-9;
            rows[i].report.margin = std::min(rows[i].report.margin, slack);
            if (rows[i].report.margin < 0.0) rows[i].status = "violation";
        }
    }

    OutputSink sink(a.output);
    std::size_t bad = 0;
    if (a.format == "csv") {
        sink.stream() << sweep_csv_header() << "\n";
        for (const SweepRow& r : rows) sink.stream() << sweep_csv_row(r) << "\n";
    } else if (a.format == "json") {
        for (const SweepRow& r : rows) sink.stream() << sweep_row_json(r).dump() << "\n";
    } else {
        throw std::invalid_argument("unknown format '" + a.format + "' (json or csv)");
    }
    for (const SweepRow& r : rows)
        if (r.status != "ok") ++bad;
    std::cerr << "sweep: " << rows.size() << " cases, " << bad << " flagged\n";
    return bad == 0 ? kExitOk : kExitViolation;
}

// --------------------------------------------------------------- flow ----

struct FlowArgs {
    std::string graph = "path";
    std::size_t n = 8;
    PotentialRequest pot = PotentialRequest{"quadratic", std::nullopt, std::nullopt, std::nullopt};
    double dalpha = 0.05;
    std::size_t max_steps = 2000;
    double lin_tol = 1e-6;
    std::string output;
    std::size_t progress_every = 0;
    bool require_convex = false;
};

int cmd_flow(const FlowArgs& a) {
    const GraphKind g = parse_graph(a.graph);
    std::vector<double> w0 = realize(a.pot, g, a.n, env_seed_base());
    if (a.require_convex && !certify_convex(w0))
        throw std::invalid_argument("potential is not convex and --require-convex is set");
    const OperatorBuilder build = g == GraphKind::path ? path_builder() : hypercube_builder();
    const double solver_tol = 1e-12;
    if (!(a.lin_tol > 0.0)) throw std::invalid_argument("--lin-tol must be positive");

    // Same loop as flow_to_linear, unrolled here for progress reporting.
    FlowTrace trace;
    trace.states.push_back(flow_eval(build, std::move(w0), 0.0, solver_tol));
    trace.terminated_reason = FlowTermination::max_steps;
    bool stopped = false;
    for (std::size_t k = 0; k < a.max_steps && !stopped; ++k) {
        if (trace.states.back().linearity_residual <= a.lin_tol) {
            trace.terminated_reason = FlowTermination::converged_to_linear;
            stopped = true;
            break;
        }
        try {
            trace.states.push_back(flow_step(build, trace.states.back(), a.dalpha, solver_tol));
        } catch (const std::exception& e) {
            std::cerr << "flow: step failed: " << e.what() << "\n";
            trace.terminated_reason = FlowTermination::step_failure;
            stopped = true;
            break;
        }
        if (a.progress_every > 0 && (k + 1) % a.progress_every == 0) {
            const FlowState& s = trace.states.back();
            std::cerr << "flow: step " << k + 1 << " alpha=" << s.alpha << " gap=" << s.gap
                      << " residual=" << s.linearity_residual << "\n";
        }
    }
    if (!stopped && trace.states.back().linearity_residual <= a.lin_tol)
        trace.terminated_reason = FlowTermination::converged_to_linear;

    if (!a.output.empty()) {
        OutputSink sink(a.output);
        write_flow_trace_jsonl(sink.stream(), trace);
    }
    const FlowState& fin = trace.states.back();
    json summary{{"steps", trace.states.size() - 1},
                 {"terminated_reason", flow_termination_name(trace.terminated_reason)},
                 {"final_gap", fin.gap},
                 {"final_alpha", fin.alpha},
                 {"final_linearity_residual", fin.linearity_residual},
                 {"timestamp", iso_timestamp()}};
    std::cout << summary.dump(2) << "\n";

    switch (trace.terminated_reason) {
        case FlowTermination::converged_to_linear: return kExitOk;
        case FlowTermination::max_steps: return kExitInvalid;
        case FlowTermination::step_failure: return kExitSolver;
    }
    return kExitSolver;
}

// ------------------------------------------------------------- verify ----

struct VerifyArgs {
    bool quick = false;
    bool adversarial = false;
    std::string output;
};

struct VerifyRow {
    std::string name;
    bool pass = false;
    double margin = 0.0;   // worst slack seen, nonnegative when clean
    std::size_t cases = 0;
    double seconds = 0.0;
};

struct VerifyCtx {
    bool quick;
    bool adversarial;
    std::uint64_t seed_base;
};

// Concave potentials for --adversarial: dome shaped, so the bound rows get
// genuine counterexamples while the universal rows keep holding.
std::vector<double> adversarial_values(std::size_t count, std::uint64_t seed, double scale) {
    std::vector<double> w = random_convex_values(count, seed, scale);
    const double mid = 0.5 * static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = static_cast<double>(i) - mid;
        w[i] -= 2.0 * scale * x * x / std::max(1.0, mid);
    }
    return w;
}

std::vector<double> draw_values(const VerifyCtx& ctx, std::size_t count, std::uint64_t seed,
                                double scale) {
    if (ctx.adversarial) return adversarial_values(count, ctx.seed_base + seed, scale);
    return random_convex_values(count, ctx.seed_base + seed, scale);
}

template <typename Fn>
VerifyRow run_row(const std::string& name, Fn&& fn) {
    VerifyRow row;
    row.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    row.margin = std::numeric_limits<double>::infinity();
    try {
        row.pass = fn(row);
    } catch (const std::exception& e) {
        row.pass = false;
        row.margin = -std::numeric_limits<double>::infinity();
        std::cerr << "verify: " << name << ": " << e.what() << "\n";
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (row.cases == 0 && row.margin == std::numeric_limits<double>::infinity()) row.margin = 0.0;
    return row;
}

void track(VerifyRow& row, double slack) {
    row.margin = std::min(row.margin, slack);
    ++row.cases;
}

std::vector<VerifyRow> verify_rows(const VerifyCtx& ctx) {
    std::vector<VerifyRow> rows;
    const double solver_tol = 1e-12;
    const std::size_t seeds_big = ctx.quick ? 10 : 60;
    const std::size_t seeds_small = ctx.quick ? 5 : 25;

    rows.push_back(run_row("solver-oracle-agreement", [&](VerifyRow& r) {
        SplitMix64 rng(ctx.seed_base + 0xa11ce);
        const std::size_t trials = ctx.quick ? 60 : 250;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t n = 1 + rng.next() % 12;
            std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
            for (auto& x : d) x = rng.uniform(-5.0, 5.0);
            for (auto& x : e) x = 5.0 * (1.0 - rng.uniform01());
            const JacobiMatrix J(d, e);
            const std::vector<double> lam = eigenvalues_lowest(J, n, 1e-13);
            const SpectrumSlice oracle = dense_oracle_spectrum(J);
            for (std::size_t k = 0; k < n; ++k)
                track(r, 1e-9 - std::fabs(lam[k] - oracle.pairs[k].value));
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("path-flat-equality", [&](VerifyRow& r) {
        const std::size_t nmax = ctx.quick ? 60 : 200;
        for (std::size_t n = 2; n <= nmax; ++n) {
            const GapReport rep =
                gap_report(build_path(flat_path(n)), flat_bound(GraphKind::path, n), solver_tol);
            track(r, 1e-10 - std::fabs(rep.margin));
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("path-gap-bound", [&](VerifyRow& r) {
        for (std::size_t n : {std::size_t{3}, std::size_t{10}, std::size_t{25}, std::size_t{50}})
            for (std::size_t s = 0; s < seeds_big; ++s) {
                const std::vector<double> w = draw_values(ctx, n, 1000 + s, 1.0);
                const GapReport rep =
                    gap_report(build_path(PathPotential(w)), flat_bound(GraphKind::path, n), solver_tol);
                track(r, rep.margin + 1e-9);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("hypercube-linear-spectrum", [&](VerifyRow& r) {
        for (double alpha : {0.0, 0.5, 1.0, 3.0})
            for (int n = 1; n <= (ctx.quick ? 16 : 40); ++n) {
                const JacobiMatrix S = build_hypercube_reduced(linear_hamming(n, alpha), true);
                const std::vector<double> lam = eigenvalues_lowest(S, S.dim(), 1e-13);
                const double step = std::sqrt(4.0 + alpha * alpha);
                double dev = 0.0;
                for (std::size_t k = 0; k < lam.size(); ++k)
                    dev = std::max(dev, std::fabs(lam[k] - (static_cast<double>(k) - 0.5 * n) * step));
                track(r, 1e-8 * (1.0 + alpha) - dev);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("hypercube-gap-bound", [&](VerifyRow& r) {
        for (int n : {2, 8, 20, 40})
            for (std::size_t s = 0; s < seeds_big; ++s) {
                const std::vector<double> w =
                    draw_values(ctx, static_cast<std::size_t>(n) + 1, 2000 + s, 1.0);
                const GapReport rep = gap_report(build_operator(GraphKind::hypercube, w), 2.0, solver_tol);
                track(r, rep.margin + 1e-9);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("hypercube-embedding", [&](VerifyRow& r) {
        // Lift each reduced eigenpair to the full operator; the two-norm
        // residual bounds the distance to the nearest true eigenvalue.
        for (int n = 1; n <= (ctx.quick ? 8 : 10); ++n) {
            const std::vector<double> w = draw_values(ctx, static_cast<std::size_t>(n) + 1, 3000, 1.0);
            const HammingPotential W(w);
            const JacobiMatrix S = build_hypercube_reduced(W, false);
            const SpectrumSlice sl = lowest_eigenpairs(S, S.dim(), solver_tol);
            const HypercubeOperator H = build_hypercube_full(W);
            std::vector<double> binom(static_cast<std::size_t>(n) + 1, 1.0);
            for (std::size_t m = 1; m < binom.size(); ++m)
                binom[m] = binom[m - 1] * static_cast<double>(n - m + 1) / static_cast<double>(m);
            for (const EigenPair& p : sl.pairs) {
                std::vector<double> full(H.dim());
                for (std::size_t b = 0; b < H.dim(); ++b) {
                    const auto m = static_cast<std::size_t>(std::popcount(b));
                    full[b] = p.vector[m] / std::sqrt(binom[m]);
                }
                track(r, 1e-8 - H.residual_two(full, p.value));
            }
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("hypercube-transform", [&](VerifyRow& r) {
        // Transformed second state satisfies the unit-coupling recurrence
        // v'_{m-1} - 2 v'_m + v'_{m+1} = c_m (W_m - q_m - lambda) v'_m.
        for (int n = 1; n <= 10; ++n)
            for (std::size_t s = 0; s < 3; ++s) {
                const std::vector<double> w = draw_values(ctx, static_cast<std::size_t>(n) + 1, 3100 + s, 1.0);
                const JacobiMatrix S = build_hypercube_reduced(HammingPotential(w), true);
                const SpectrumSlice sl = lowest_eigenpairs(S, std::min<std::size_t>(2, S.dim()), solver_tol);
                const VPrimeTransform T = vprime_transform(n);
                for (const EigenPair& p : sl.pairs) {
                    const std::vector<double> vp = apply_vprime(T, p.vector);
                    double scale = 1.0;
                    for (double x : vp) scale = std::max(scale, std::fabs(x));
                    double worst = 0.0;
                    for (int m = 0; m <= n; ++m) {
                        const double left = m > 0 ? vp[static_cast<std::size_t>(m - 1)] : 0.0;
                        const double right = m < n ? vp[static_cast<std::size_t>(m + 1)] : 0.0;
                        const double lhs = left - 2.0 * vp[static_cast<std::size_t>(m)] + right;
                        const double rhs = T.c[static_cast<std::size_t>(m)] *
                                           (w[static_cast<std::size_t>(m)] - T.q[static_cast<std::size_t>(m)] -
                                            p.value) *
                                           vp[static_cast<std::size_t>(m)];
                        worst = std::max(worst, std::fabs(lhs - rhs));
                    }
                    track(r, 1e-9 * scale * S.inf_norm() - worst);
                }
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("ratio-monotone", [&](VerifyRow& r) {
        // Holds for arbitrary potentials, convex or not.
        SplitMix64 rng(ctx.seed_base + 0xbeef);
        for (std::size_t t = 0; t < seeds_big; ++t) {
            const std::size_t n = 3 + rng.next() % 14;
            std::vector<double> w(n);
            for (auto& x : w) x = rng.uniform(-3.0, 3.0);
            const SpectrumSlice s = lowest_eigenpairs(build_path(PathPotential(w)), 2, solver_tol);
            const auto& u1 = s.pairs[0].vector;
            const auto& u2 = s.pairs[1].vector;
            const double amax = detail::max_abs(u1) * detail::max_abs(u2);
            for (std::size_t i = 0; i + 1 < n; ++i)
                track(r, 1e-10 * amax - (u2[i + 1] * u1[i] - u2[i] * u1[i + 1]));
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("sign-regions", [&](VerifyRow& r) {
        for (std::size_t s = 0; s < seeds_big; ++s) {
            const std::size_t n = 3 + (s % 14);
            const std::vector<double> w = draw_values(ctx, n, 4000 + s, 1.0);
            const SpectrumSlice sp = lowest_eigenpairs(build_path(PathPotential(w)), 2, solver_tol);
            const SignRegions reg = find_sign_regions(sp.pairs[1].vector, sp.pairs[0].vector);
            track(r, reg.m >= 1 && reg.m < reg.n && reg.n <= n ? 0.0 : -1.0);
            const double gap = sp.pairs[1].value - sp.pairs[0].value;
            const CasoratianSeq cw = casoratian(sp.pairs[1].vector, sp.pairs[0].vector, gap);
            const double amax =
                detail::max_abs(sp.pairs[0].vector) * detail::max_abs(sp.pairs[1].vector);
            for (double x : cw.w) track(r, 1e-10 * amax - x);
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("gap-slope-derivative", [&](VerifyRow& r) {
        for (std::size_t n : {std::size_t{4}, std::size_t{9}, std::size_t{16}})
            for (double alpha : {0.0, 0.3, 1.0, 2.5})
                for (std::size_t s = 0; s < (ctx.quick ? 2u : 4u); ++s) {
                    std::vector<double> base = random_convex_values(n, ctx.seed_base + 5000 + s, 0.5);
                    std::vector<double> dw(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        dw[i] = static_cast<double>(i);
                        base[i] += alpha * dw[i];
                    }
                    const JacobiMatrix J = build_path(PathPotential(base));
                    const double hf =
                        hf_derivative(J, dw, 1, solver_tol) - hf_derivative(J, dw, 0, solver_tol);
                    const double h = 1e-5 * (1.0 + alpha);
                    const auto gap_at = [&](double da) {
                        std::vector<double> v = base;
                        for (std::size_t i = 0; i < n; ++i) v[i] += da * dw[i];
                        const SpectrumSlice sp = lowest_eigenpairs(build_path(PathPotential(v)), 2, solver_tol);
                        return sp.pairs[1].value - sp.pairs[0].value;
                    };
                    const double fd = (gap_at(h) - gap_at(-h)) / (2.0 * h);
                    track(r, 1e-5 * std::max({1.0, std::fabs(hf), std::fabs(fd)}) - std::fabs(hf - fd));
                }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("ground-state-decreasing", [&](VerifyRow& r) {
        for (std::size_t n : {std::size_t{3}, std::size_t{8}, std::size_t{17}})
            for (double alpha : {0.0, 0.2, 1.0, 4.0, 12.0}) {
                const EigenPair p = eigenpair(build_path(unit_linear_path(n, alpha)), 0, solver_tol);
                track(r, check_ground_monotone(p.vector, alpha) ? 0.0 : -1.0);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("second-state-decreasing", [&](VerifyRow& r) {
        // Decreasing on the symmetric window about the node.
        for (std::size_t n : {std::size_t{4}, std::size_t{9}, std::size_t{14}})
            for (double alpha : {0.0, 0.3, 1.0, 3.0, 9.0}) {
                const EigenPair p = eigenpair(build_path(unit_linear_path(n, alpha)), 1, solver_tol);
                const NodeList nl = nodes(p.vector);
                if (nl.positions.empty()) {
                    track(r, -1.0);
                    continue;
                }
                const auto mwin = static_cast<std::size_t>(
                    std::max(1.0, std::floor(2.0 * nl.positions.front() - 1.0 + 1e-9)));
                const std::span<const double> head(p.vector.data(), std::min(mwin, n));
                track(r, detail::nonincreasing(head, 1e-10) ? 0.0 : -1.0);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("node-left-of-center", [&](VerifyRow& r) {
        for (std::size_t n : {std::size_t{3}, std::size_t{8}, std::size_t{13}})
            for (double alpha : {0.0, 0.1, 0.7, 2.0, 30.0}) {
                const EigenPair p = eigenpair(build_path(unit_linear_path(n, alpha)), 1, solver_tol);
                track(r, check_node_left_of_center(p.vector) ? 0.0 : -1.0);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("node-shift-left", [&](VerifyRow& r) {
        const std::vector<double> alphas = parse_real_range(ctx.quick ? "0:4:9" : "0:8:33");
        for (std::size_t n : {std::size_t{4}, std::size_t{7}, std::size_t{12}}) {
            const std::vector<double> xs = node_trajectory(n, alphas, solver_tol);
            for (std::size_t k = 0; k + 1 < xs.size(); ++k) track(r, xs[k] - xs[k + 1] + 1e-9);
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("node-ordering-integer", [&](VerifyRow& r) {
        for (std::size_t n : {std::size_t{4}, std::size_t{9}, std::size_t{14}})
            for (double alpha : {0.05, 0.4, 1.3, 5.0}) {
                const EigenPair p = eigenpair(build_path(unit_linear_path(n, alpha)), 1, solver_tol);
                const NodeList nl = nodes(p.vector);
                if (nl.positions.empty()) {
                    track(r, -1.0);
                    continue;
                }
                track(r, check_ordering(p.vector, nl.positions.front()) ? 0.0 : -1.0);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("node-ordering-eps", [&](VerifyRow& r) {
        // Fractional recurrence: the effective index stays inside [i, i+1].
        for (std::size_t n : {std::size_t{6}, std::size_t{11}})
            for (double alpha : {0.2, 1.0, 3.0}) {
                const JacobiMatrix J = build_path(unit_linear_path(n, alpha));
                const SpectrumSlice s = lowest_eigenpairs(J, 2, solver_tol);
                const EigenPair& p = s.pairs[1];
                const double floor = kTailFloor * detail::max_abs(p.vector);
                for (std::size_t i = 1; i < n; ++i) {
                    if (std::fabs(p.vector[i - 1]) <= floor || std::fabs(p.vector[i]) <= floor ||
                        p.vector[i - 1] * p.vector[i] <= 0.0)
                        continue;
                    for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                        const double j =
                            convex_combination_recurrence_check(p.vector, alpha, p.value, i, eps);
                        track(r, std::min(j - static_cast<double>(i),
                                          static_cast<double>(i) + 1.0 - j));
                    }
                }
            }
        return r.margin >= -1e-9;
    }));

    rows.push_back(run_row("submatrix-upper-bound", [&](VerifyRow& r) {
        for (double alpha : {0.0, 0.3, 1.0, 4.0})
            for (double delta : {0.1, 0.4, 0.8}) {
                const UpperCheckResult u = lemma_upper_check(alpha, delta);
                track(r, u.value_ok ? 0.0 : -1.0);
                track(r, u.slope_ok ? 0.0 : -1.0);
                track(r, u.mu2_at_zero - u.mu2_at_delta + 1e-9);
            }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("eigenvalue-interlacing", [&](VerifyRow& r) {
        SplitMix64 rng(ctx.seed_base + 0xcafe);
        for (std::size_t t = 0; t < seeds_big; ++t) {
            const std::size_t n = 2 + rng.next() % 11;
            std::vector<double> d(n), e(n - 1);
            for (auto& x : d) x = rng.uniform(-5.0, 5.0);
            for (auto& x : e) x = 5.0 * (1.0 - rng.uniform01());
            track(r, verify_interlacing(JacobiMatrix(d, e), 1e-9) ? 0.0 : -1.0);
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("node-separation", [&](VerifyRow& r) {
        // Theta-valid pairs built from the same flat operator's consecutive
        // states: the higher state must place a node strictly inside the
        // window bracketed by the lower state's nodes.
        for (std::size_t n : {std::size_t{7}, std::size_t{9}, std::size_t{12}}) {
            const SpectrumSlice s = lowest_eigenpairs(build_path(flat_path(n)), 3, solver_tol);
            const std::vector<double> zero(n, 0.0);
            const ThetaSeq t21 = make_theta(zero, zero, s.pairs[1].value, s.pairs[0].value);
            track(r, verify_node_separation(s.pairs[1].vector, s.pairs[0].vector, t21, 1, n)
                         ? 0.0
                         : -1.0);
            const ThetaSeq t32 = make_theta(zero, zero, s.pairs[2].value, s.pairs[1].value);
            const NodeList nl = nodes(s.pairs[1].vector);
            const auto win = static_cast<std::size_t>(std::floor(nl.positions.front()));
            track(r, verify_node_separation(s.pairs[2].vector, s.pairs[1].vector, t32, 1, win)
                         ? 0.0
                         : -1.0);
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("secant-flow-descent", [&](VerifyRow& r) {
        for (std::size_t s = 0; s < seeds_small; ++s) {
            const std::size_t n = 5 + (s % 8);
            const std::vector<double> w = draw_values(ctx, n, 6000 + s, 1.0);
            if (!certify_convex(w)) continue;
            const SpectrumSlice sp = lowest_eigenpairs(build_path(PathPotential(w)), 2, solver_tol);
            const SignRegions reg = find_sign_regions(sp.pairs[1].vector, sp.pairs[0].vector);
            const std::vector<double> line = secant_line_values(w, reg.m, reg.n);
            std::vector<double> rel(n);
            for (std::size_t i = 0; i < n; ++i) rel[i] = w[i] - line[i];
            const double lhs =
                expectation(rel, sp.pairs[1].vector) - expectation(rel, sp.pairs[0].vector);
            track(r, lhs + 1e-10);
        }
        return r.margin >= 0.0;
    }));

    rows.push_back(run_row("flow-convergence", [&](VerifyRow& r) {
        const std::size_t seeds = ctx.quick ? 4 : 20;
        for (std::size_t s = 0; s < seeds; ++s) {
            const FlowTrace t = flow_to_linear_path(
                PathPotential(random_convex_values(8, ctx.seed_base + 7000 + s, 1.0)), 0.05, 4000,
                1e-6, solver_tol);
            track(r, t.terminated_reason == FlowTermination::converged_to_linear ? 0.0 : -1.0);
            track(r, t.states.back().gap - flat_bound(GraphKind::path, 8) + 1e-9);
            for (std::size_t k = 0; k + 1 < t.states.size(); ++k)
                track(r, t.states[k].gap - t.states[k + 1].gap + 1e-10);
        }
        for (std::size_t s = 0; s < seeds / 2; ++s) {
            const FlowTrace t = flow_to_linear_hamming(
                HammingPotential(random_convex_values(9, ctx.seed_base + 7500 + s, 1.0)), 0.05,
                4000, 1e-6, solver_tol);
            track(r, t.terminated_reason == FlowTermination::converged_to_linear ? 0.0 : -1.0);
            track(r, t.states.back().gap - 2.0 + 1e-9);
        }
        return r.margin >= 0.0;
    }));

    return rows;
}

int cmd_verify(const VerifyArgs& a) {
    const VerifyCtx ctx{a.quick, a.adversarial, env_seed_base()};
    const std::vector<VerifyRow> rows = verify_rows(ctx);

    std::size_t passed = 0;
    std::printf("%-28s %8s %14s %9s  %s\n", "check", "cases", "worst margin", "time", "result");
    for (const VerifyRow& r : rows) {
        if (r.pass) ++passed;
        std::printf("%-28s %8zu %14.3e %8.2fs  %s\n", r.name.c_str(), r.cases, r.margin,
                    r.seconds, r.pass ? "pass" : "FAIL");
    }
    std::printf("%zu/%zu checks pass\n", passed, rows.size());

    if (!a.output.empty()) {
        json jrows = json::array();
        for (const VerifyRow& r : rows)
            jrows.push_back({{"name", r.name},
                             {"pass", r.pass},
                             {"worst_margin", r.margin},
                             {"cases", r.cases},
                             {"seconds", r.seconds}});
        OutputSink sink(a.output);
        sink.stream() << json{{"rows", jrows},
                              {"passed", passed},
                              {"total", rows.size()},
                              {"quick", a.quick},
                              {"adversarial", a.adversarial},
                              {"timestamp", iso_timestamp()}}
                             .dump(2)
                      << "\n";
    }
    return passed == rows.size() ? kExitOk : kExitViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral gaps of discrete Schrodinger operators on paths and hypercubes"};
    app.require_subcommand(1);

    GapArgs gap;
    SweepArgs sweep;
    FlowArgs flow;
    VerifyArgs verify;
    std::string cfg_gap, cfg_sweep, cfg_flow, cfg_verify;
    double gap_alpha = 0.0, gap_scale = 0.0, flow_alpha = 0.0, flow_scale = 0.0;
    std::string gap_seeds, flow_seeds;

    CLI::App* g = app.add_subcommand("gap", "gap of one operator against its flat-potential bound");
    auto* g_n = g->add_option("--n", gap.n, "path length, or hypercube dimension");
    auto* g_graph = g->add_option("--graph", gap.graph, "path or hypercube");
    auto* g_pot = g->add_option("--potential", gap.pot.text,
                                "generator name (flat, unit-linear, quadratic, random-convex) or JSON spec");
    auto* g_alpha = g->add_option("--alpha", gap_alpha, "slope parameter for generator potentials");
    auto* g_scale = g->add_option("--scale", gap_scale, "scale parameter for generator potentials");
    auto* g_seeds = g->add_option("--seeds", gap_seeds, "seed for random-convex (first value of lo:hi)");
    auto* g_tol = g->add_option("--tol", gap.tol, "margin tolerance for the exit status");
    auto* g_out = g->add_option("--output", gap.output, "write the report here instead of stdout");
    auto* g_fmt = g->add_option("--format", gap.format, "json or csv");
    auto* g_rc = g->add_flag("--require-convex", gap.require_convex, "reject non-convex potentials");
    g->add_option("--config", cfg_gap, "JSON config file; flags override its values");

    CLI::App* s = app.add_subcommand("sweep", "run one invariant family over an (N, alpha-or-seed) grid");
    auto* s_graph = s->add_option("--graph", sweep.graph, "path or hypercube");
    auto* s_family = s->add_option("--family", sweep.family,
                                   "bound, node, casoratian, hf, interlacing, ordering, or exact");
    auto* s_nr = s->add_option("--n-range", sweep.n_range, "sizes to sweep, lo:hi");
    auto* s_ar = s->add_option("--alpha-range", sweep.alpha_range, "slope grid lo:hi:count");
    auto* s_seeds = s->add_option("--seeds", sweep.seeds, "seed grid lo:hi (random-convex potentials)");
    auto* s_pot = s->add_option("--potential", sweep.potential, "generator override for every grid case");
    auto* s_scale = s->add_option("--scale", sweep.scale, "scale for random-convex draws");
    auto* s_tol = s->add_option("--tol", sweep.tol, "violation tolerance for margins");
    auto* s_jobs = s->add_option("--jobs", sweep.jobs, "worker threads; output order stays deterministic");
    auto* s_out = s->add_option("--output", sweep.output, "write rows here instead of stdout");
    auto* s_fmt = s->add_option("--format", sweep.format, "csv or json (JSON lines)");
    auto* s_rc = s->add_flag("--require-convex", sweep.require_convex,
                             "mark non-convex grid cases as errors");
    s->add_option("--config", cfg_sweep, "JSON config file; flags override its values");
    s->footer("CSV columns: " + sweep_csv_header() +
              "\nmargin holds the family slack (nonnegative = invariant holds);"
              "\nbound holds the family reference value. Values print with 17"
              "\nsignificant digits.");

    CLI::App* f = app.add_subcommand("flow", "drive a convex potential toward its secant line");
    auto* f_graph = f->add_option("--graph", flow.graph, "path or hypercube");
    auto* f_n = f->add_option("--n", flow.n, "path length, or hypercube dimension");
    auto* f_pot = f->add_option("--potential", flow.pot.text, "starting potential (generator or JSON)");
    auto* f_alpha = f->add_option("--alpha", flow_alpha, "slope parameter for generator potentials");
    auto* f_scale = f->add_option("--scale", flow_scale, "scale parameter for generator potentials");
    auto* f_seeds = f->add_option("--seeds", flow_seeds, "seed for random-convex (first value of lo:hi)");
    auto* f_da = f->add_option("--dalpha", flow.dalpha, "Euler step size");
    auto* f_ms = f->add_option("--max-steps", flow.max_steps, "step budget");
    auto* f_lt = f->add_option("--lin-tol", flow.lin_tol, "linearity residual target");
    auto* f_out = f->add_option("--output", flow.output, "write the JSON-lines trace here");
    auto* f_pe = f->add_option("--progress-every", flow.progress_every,
                               "print progress to stderr every k steps (0 = off)");
    auto* f_rc = f->add_flag("--require-convex", flow.require_convex, "reject non-convex starts");
    f->add_option("--config", cfg_flow, "JSON config file; flags override its values");
    f->footer("Exit 0 when converged, 2 when the step budget ran out, 3 when a step failed.");

    CLI::App* v = app.add_subcommand("verify", "run every structural check and print a result table");
    auto* v_quick = v->add_flag("--quick", verify.quick, "reduced grids, finishes in seconds");
    auto* v_adv = v->add_flag("--adversarial", verify.adversarial,
                              "feed concave potentials to the bound checks; they should fail");
    auto* v_out = v->add_option("--output", verify.output, "also write the table as JSON");
    v->add_option("--config", cfg_verify, "JSON config file; flags override its values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (g->parsed()) {
            const json cfg = load_config(cfg_gap);
            merge_config(g_graph, cfg, "graph", gap.graph);
            merge_config(g_n, cfg, "n", gap.n);
            merge_config(g_pot, cfg, "potential", gap.pot.text);
            merge_config(g_alpha, cfg, "alpha", gap_alpha);
            merge_config(g_scale, cfg, "scale", gap_scale);
            merge_config(g_seeds, cfg, "seeds", gap_seeds);
            merge_config(g_tol, cfg, "tol", gap.tol);
            merge_config(g_out, cfg, "output", gap.output);
            merge_config(g_fmt, cfg, "format", gap.format);
            merge_config(g_rc, cfg, "require-convex", gap.require_convex);
            if (g_alpha->count() || cfg.contains("alpha")) gap.pot.alpha = gap_alpha;
            if (g_scale->count() || cfg.contains("scale")) gap.pot.scale = gap_scale;
            if (!gap_seeds.empty()) gap.pot.seed = parse_index_range(gap_seeds).front();
            return cmd_gap(gap);
        }
        if (s->parsed()) {
            const json cfg = load_config(cfg_sweep);
            merge_config(s_graph, cfg, "graph", sweep.graph);
            merge_config(s_family, cfg, "family", sweep.family);
            merge_config(s_nr, cfg, "n-range", sweep.n_range);
            merge_config(s_ar, cfg, "alpha-range", sweep.alpha_range);
            merge_config(s_seeds, cfg, "seeds", sweep.seeds);
            merge_config(s_pot, cfg, "potential", sweep.potential);
            merge_config(s_scale, cfg, "scale", sweep.scale);
            merge_config(s_tol, cfg, "tol", sweep.tol);
            merge_config(s_jobs, cfg, "jobs", sweep.jobs);
            merge_config(s_out, cfg, "output", sweep.output);
            merge_config(s_fmt, cfg, "format", sweep.format);
            merge_config(s_rc, cfg, "require-convex", sweep.require_convex);
            return cmd_sweep(sweep);
        }
        if (f->parsed()) {
            const json cfg = load_config(cfg_flow);
            merge_config(f_graph, cfg, "graph", flow.graph);
            merge_config(f_n, cfg, "n", flow.n);
            merge_config(f_pot, cfg, "potential", flow.pot.text);
            merge_config(f_alpha, cfg, "alpha", flow_alpha);
            merge_config(f_scale, cfg, "scale", flow_scale);
            merge_config(f_seeds, cfg, "seeds", flow_seeds);
            merge_config(f_da, cfg, "dalpha", flow.dalpha);
            merge_config(f_ms, cfg, "max-steps", flow.max_steps);
            merge_config(f_lt, cfg, "lin-tol", flow.lin_tol);
            merge_config(f_out, cfg, "output", flow.output);
            merge_config(f_pe, cfg, "progress-every", flow.progress_every);
            merge_config(f_rc, cfg, "require-convex", flow.require_convex);
            if (f_alpha->count() || cfg.contains("alpha")) flow.pot.alpha = flow_alpha;
            if (f_scale->count() || cfg.contains("scale")) flow.pot.scale = flow_scale;
            if (!flow_seeds.empty()) flow.pot.seed = parse_index_range(flow_seeds).front();
            return cmd_flow(flow);
        }
        const json cfg = load_config(cfg_verify);
        merge_config(v_quick, cfg, "quick", verify.quick);
        merge_config(v_adv, cfg, "adversarial", verify.adversarial);
        merge_config(v_out, cfg, "output", verify.output);
        return cmd_verify(verify);
    } catch (const SolverError& e) {
        std::cerr << "specgap: solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const json::exception& e) {
        std::cerr << "specgap: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "specgap: " << e.what() << "\n";
        return kExitInvalid;
    }
}
