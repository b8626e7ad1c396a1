#pragma once

// Job-file driven front end: parse a JSON job, run the series path and the
// Fock oracle side by side, report entanglement diagnostics plus the analytic
// verdict, sweep parameters into CSV, and drive the randomized verification
// suite. All numeric output uses 12 significant digits and fixed ordering so
// identical jobs produce byte-identical reports.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bfock/entangle.hpp"
#include "bfock/focksim.hpp"
#include "bfock/network.hpp"
#include "bfock/series.hpp"
#include "bfock/states.hpp"
#include "bfock/theorem.hpp"

namespace bfock {

using json = nlohmann::json;

struct JobError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double product_tol = 0.0;   // 0 selects the deficit-aware default
    double lambda_tol = 1e-10;
    double phase_tol = 1e-8;
    double zero_threshold = kDefaultZeroThreshold;
    double vacuum_floor = kDefaultVacuumFloor;
    double separability_tol = 0.0;  // 0 selects max(1e-7, 100 * deficit)
};

struct BeamsplitterNet {
    double theta = 0.0, phi = 0.0;
};
struct HaarNet {
    int dim = 2;
    std::uint64_t seed = 0;
};
struct MatrixNet {
    Mat entries;
};

struct JobSpec {
    int schema = 1;
    std::vector<ModeStateSpec> modes;
    std::variant<BeamsplitterNet, HaarNet, MatrixNet> network;
    int cutoff = 20;
    Tolerances tol;
    std::string dump_series_path;  // empty = no dump
    std::string dump_fock_path;
    bool want_report = true;
};

namespace detail {

inline double env_override(const char* name, double fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const double parsed = std::strtod(v, &end);
    if (end == v) throw JobError(std::string("bad value in environment variable ") + name);
    return parsed;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline cx parse_complex(const json& j, const std::string& field) {
    if (j.is_number()) return cx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cx(j[0].get<double>(), j[1].get<double>());
    throw JobError("field '" + field + "' must be a number or [re, im] pair");
}

inline double require_number(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number())
        throw JobError("missing or non-numeric field '" + field + "'");
    return j[field].get<double>();
}

}  // namespace detail

// Environment variables override the job file's tolerance block.
inline void apply_env_overrides(Tolerances& t) {
    t.product_tol = detail::env_override("BFOCK_PRODUCT_TOL", t.product_tol);
    t.lambda_tol = detail::env_override("BFOCK_LAMBDA_TOL", t.lambda_tol);
    t.phase_tol = detail::env_override("BFOCK_PHASE_TOL", t.phase_tol);
    t.zero_threshold = detail::env_override("BFOCK_ZERO_THRESHOLD", t.zero_threshold);
    t.vacuum_floor = detail::env_override("BFOCK_VACUUM_FLOOR", t.vacuum_floor);
    t.separability_tol = detail::env_override("BFOCK_SEPARABILITY_TOL", t.separability_tol);
}

inline ModeStateSpec parse_mode(const json& m, int index) {
    const std::string where = "modes[" + std::to_string(index) + "]";
    if (!m.is_object() || !m.contains("type") || !m["type"].is_string())
        throw JobError(where + ": each mode needs a string 'type'");
    const std::string type = m["type"].get<std::string>();
    if (type == "coherent") {
        if (!m.contains("alpha")) throw JobError(where + ": coherent needs 'alpha'");
        return Coherent{detail::parse_complex(m["alpha"], where + ".alpha")};
    }
    if (type == "squeezed") {
        SqueezedVacuum s;
        s.gamma = detail::require_number(m, "gamma");
        s.axis_phase = m.value("axis_phase", 0.0);
        return s;
    }
    if (type == "displaced_squeezed") {
        DisplacedSqueezed d;
        if (!m.contains("y")) throw JobError(where + ": displaced_squeezed needs 'y'");
        d.y = detail::parse_complex(m["y"], where + ".y");
        d.gamma = detail::require_number(m, "gamma");
        d.axis_phase = m.value("axis_phase", 0.0);
        return d;
    }
    if (type == "fock") {
        if (!m.contains("n") || !m["n"].is_number_integer())
            throw JobError(where + ": fock needs integer 'n'");
        return Fock{m["n"].get<int>()};
    }
    if (type == "cat") {
        if (!m.contains("alpha")) throw JobError(where + ": cat needs 'alpha'");
        Cat c{detail::parse_complex(m["alpha"], where + ".alpha"), m.value("parity", 1)};
        if (c.parity != 1 && c.parity != -1) throw JobError(where + ": parity must be +1 or -1");
        return c;
    }
    throw JobError(where + ": unknown mode type '" + type + "'");
}

inline JobSpec parse_job(const json& j) {
    if (!j.is_object()) throw JobError("job must be a JSON object");
    JobSpec job;
    job.schema = j.value("schema", 1);
    if (job.schema != 1) throw JobError("unsupported schema version");

    if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty())
        throw JobError("job needs a nonempty 'modes' array");
    for (std::size_t i = 0; i < j["modes"].size(); ++i)
        job.modes.push_back(parse_mode(j["modes"][i], static_cast<int>(i)));

    if (!j.contains("network") || !j["network"].is_object())
        throw JobError("job needs a 'network' object");
    const json& net = j["network"];
    if (net.contains("beamsplitter")) {
        BeamsplitterNet b;
        b.theta = detail::require_number(net["beamsplitter"], "theta");
        b.phi = net["beamsplitter"].value("phi", 0.0);
        job.network = b;
    } else if (net.contains("haar")) {
        HaarNet h;
        h.dim = static_cast<int>(detail::require_number(net["haar"], "dim"));
        h.seed = static_cast<std::uint64_t>(detail::require_number(net["haar"], "seed"));
        job.network = h;
    } else if (net.contains("matrix")) {
        const json& mj = net["matrix"];
        const int dim = static_cast<int>(detail::require_number(mj, "dim"));
        if (!mj.contains("entries") || !mj["entries"].is_array() ||
            mj["entries"].size() != static_cast<std::size_t>(dim) * dim)
            throw JobError("network.matrix.entries must hold dim*dim [re, im] pairs, row-major");
        Mat m(dim, dim);
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l)
                m(k, l) = detail::parse_complex(mj["entries"][k * dim + l], "network.matrix.entries");
        job.network = MatrixNet{std::move(m)};
    } else {
        throw JobError("network must contain 'beamsplitter', 'haar', or 'matrix'");
    }

    job.cutoff = j.value("cutoff", 20);
    if (job.cutoff < 1 || job.cutoff > kMaxCutoff)
        throw JobError("cutoff must lie in 1..34");

    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        job.tol.product_tol = t.value("product_tol", job.tol.product_tol);
        job.tol.lambda_tol = t.value("lambda_tol", job.tol.lambda_tol);
        job.tol.phase_tol = t.value("phase_tol", job.tol.phase_tol);
        job.tol.zero_threshold = t.value("zero_threshold", job.tol.zero_threshold);
        job.tol.vacuum_floor = t.value("vacuum_floor", job.tol.vacuum_floor);
        job.tol.separability_tol = t.value("separability_tol", job.tol.separability_tol);
    }
    apply_env_overrides(job.tol);

    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        job.dump_series_path = o.value("dump_series", "");
        job.dump_fock_path = o.value("dump_fock", "");
        job.want_report = o.value("report", true);
    }
    return job;
}

inline JobSpec parse_job_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JobError("cannot open job file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw JobError("job file " + path + ": " + e.what());
    }
    return parse_job(j);
}

inline NetworkUnitary build_network(const JobSpec& job) {
    if (const auto* b = std::get_if<BeamsplitterNet>(&job.network))
        return make_beamsplitter(b->theta, b->phi);
    if (const auto* h = std::get_if<HaarNet>(&job.network))
        return haar_random_unitary(h->dim, h->seed);
    return NetworkUnitary(std::get<MatrixNet>(job.network).entries);
}

struct DualProductTest {
    bool applicable = false;  // output had (or was displaced to) usable vacuum overlap
    bool separable = false;
    double max_cross_term = 0.0;
};

// Second, independent product criterion: additive separability of the log of
// the output BF series. When the output lacks vacuum overlap it is first
// displaced locally (which cannot change a product into an entangled state).
inline DualProductTest log_separability_test(const MultivariateSeries& b_out, double vacuum_floor,
                                             double separability_tol, double deficit) {
    DualProductTest res;
    MultivariateSeries b = b_out;
    if (std::abs(b.constant_term()) <= vacuum_floor) {
        // joint displacement with golden-angle spacing between the mode
        // directions, which keeps the shift away from the symmetric zero
        // cones that photon-number outputs carry
        for (double scale : {1.0, 1.5, 2.0}) {
            std::vector<cx> y(b.num_modes);
            for (int j = 0; j < b.num_modes; ++j)
                y[j] = std::polar(0.55 * scale, 0.7 + 2.399963 * j);
            MultivariateSeries moved = apply_displacement(b_out, y);
            if (std::abs(moved.constant_term()) > vacuum_floor) {
                b = std::move(moved);
                break;
            }
        }
        if (std::abs(b.constant_term()) <= vacuum_floor) return res;  // not applicable
    }
    res.applicable = true;
    const MultivariateSeries g = series_log(b, vacuum_floor);
    const double tol = separability_tol > 0.0 ? separability_tol
                                              : std::max(1e-7, 100.0 * deficit);
    const SeparabilityReport rep = is_additively_separable(g, tol);
    res.separable = rep.separable;
    res.max_cross_term = rep.max_cross_term;
    return res;
}

struct RunResult {
    int exit_code = 0;  // 0 agreement, 2 disagreement
    bool agree = false;
    double bf_oracle_max_diff = 0.0;
    EntanglementReport entanglement;
    TheoremVerdict verdict;
    DualProductTest dual;
    std::string report_text;
    std::string series_dump;
    std::string fock_dump;
};

inline RunResult run_job(const JobSpec& job) {
    const NetworkUnitary u = build_network(job);
    if (static_cast<int>(job.modes.size()) != u.dim())
        throw JobError("modes count (" + std::to_string(job.modes.size()) +
                       ") must equal the network dimension (" + std::to_string(u.dim()) + ")");

    std::vector<SingleModeSeries> modes;
    for (const auto& s : job.modes) modes.push_back(mode_series(s, job.cutoff));
    const MultivariateSeries b_in = product_series(modes);
    const MultivariateSeries b_out = substitute_linear(b_in, u);
    const FockVector psi_series = from_bf(b_out);
    const FockVector psi_oracle = apply_network_oracle(from_bf(b_in), u);

    RunResult res;
    for (const auto& [n, a] : psi_series.amplitudes)
        res.bf_oracle_max_diff =
            std::max(res.bf_oracle_max_diff, std::abs(a - psi_oracle.amplitude(n)));
    for (const auto& [n, a] : psi_oracle.amplitudes)
        res.bf_oracle_max_diff =
            std::max(res.bf_oracle_max_diff, std::abs(a - psi_series.amplitude(n)));

    res.entanglement = product_test(psi_oracle, job.tol.product_tol);
    ClassifyOptions opt;
    opt.cutoff = job.cutoff;
    opt.lambda_tol = job.tol.lambda_tol;
    opt.phase_tol = job.tol.phase_tol;
    opt.zero_threshold = job.tol.zero_threshold;
    opt.vacuum_floor = job.tol.vacuum_floor;
    res.verdict = classify(job.modes, u, opt);
    res.dual = log_separability_test(b_out, job.tol.vacuum_floor, job.tol.separability_tol,
                                     res.entanglement.truncation_deficit);

    res.agree =
        (res.verdict.prediction == Prediction::Product) == res.entanglement.is_product;
    res.exit_code = res.agree ? 0 : 2;

    std::ostringstream rep;
    rep << "schema 1\n";
    rep << "modes " << job.modes.size() << "\n";
    rep << "cutoff " << job.cutoff << "\n";
    rep << "bf_oracle_max_diff " << detail::fmt(res.bf_oracle_max_diff) << "\n";
    rep << "deficit " << detail::fmt(res.entanglement.truncation_deficit) << "\n";
    rep << "tolerance_used " << detail::fmt(res.entanglement.tolerance_used) << "\n";
    rep << "min_purity " << detail::fmt(res.entanglement.min_purity) << "\n";
    rep << "per_mode_purity";
    for (double p : res.entanglement.per_mode_purity) rep << " " << detail::fmt(p);
    rep << "\nper_mode_entropy_bits";
    for (double e : res.entanglement.per_mode_entropy) rep << " " << detail::fmt(e);
    double max_entropy = 0.0;
    for (double e : res.entanglement.per_mode_entropy) max_entropy = std::max(max_entropy, e);
    rep << "\nmax_entropy_bits " << detail::fmt(max_entropy) << "\n";
    rep << "is_product " << (res.entanglement.is_product ? "true" : "false") << "\n";
    rep << "log_separability_applicable " << (res.dual.applicable ? "true" : "false") << "\n";
    if (res.dual.applicable) {
        rep << "log_separable " << (res.dual.separable ? "true" : "false") << "\n";
        rep << "log_max_cross_term " << detail::fmt(res.dual.max_cross_term) << "\n";
    }
    rep << "verdict " << res.verdict.to_line() << "\n";
    rep << "agreement " << (res.agree ? "OK" : "MISMATCH") << "\n";
    res.report_text = rep.str();

    if (!job.dump_series_path.empty()) res.series_dump = dump_series(b_out, "bf_output");
    if (!job.dump_fock_path.empty()) res.fock_dump = dump_fock(psi_oracle);
    return res;
}

// --- parameter scan ---------------------------------------------------------

namespace detail {

// Resolves dotted paths with [i] indexing into a JSON tree. A segment that is
// missing on an object with a single object-valued child descends through it,
// so "network.theta" reaches network.beamsplitter.theta.
inline json* resolve_path(json& root, const std::string& path) {
    json* at = &root;
    std::size_t pos = 0;
    while (pos < path.size()) {
        std::size_t dot = path.find('.', pos);
        std::string seg = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        pos = dot == std::string::npos ? path.size() : dot + 1;
        std::optional<int> index;
        if (const std::size_t br = seg.find('['); br != std::string::npos) {
            if (seg.back() != ']') return nullptr;
            index = std::stoi(seg.substr(br + 1, seg.size() - br - 2));
            seg = seg.substr(0, br);
        }
        if (!at->is_object()) return nullptr;
        if (!at->contains(seg)) {
            if (at->size() == 1 && at->begin()->is_object() && at->begin()->contains(seg)) {
                at = &(*at->begin());
            } else {
                return nullptr;
            }
        }
        at = &(*at)[seg];
        if (index) {
            if (!at->is_array() || *index < 0 || static_cast<std::size_t>(*index) >= at->size())
                return nullptr;
            at = &(*at)[*index];
        }
    }
    return at;
}

}  // namespace detail

struct ScanResult {
    int exit_code = 0;
    std::string csv;
};

inline ScanResult scan(const json& base_job, const std::string& param_path,
                       const std::vector<double>& grid) {
    ScanResult out;
    out.csv = "param,value,min_purity,max_entropy_bits,deficit,verdict,reason,agree\n";
    for (double value : grid) {
        json j = base_job;
        json* slot = detail::resolve_path(j, param_path);
        if (!slot) throw JobError("scan: unknown parameter path '" + param_path + "'");
        *slot = value;
        const RunResult r = run_job(parse_job(j));
        double max_entropy = 0.0;
        for (double e : r.entanglement.per_mode_entropy) max_entropy = std::max(max_entropy, e);
        out.csv += param_path + "," + detail::fmt(value) + "," +
                   detail::fmt(r.entanglement.min_purity) + "," + detail::fmt(max_entropy) + "," +
                   detail::fmt(r.entanglement.truncation_deficit) + "," +
                   to_string(r.verdict.prediction) + "," + to_string(r.verdict.reason) + "," +
                   (r.agree ? "true" : "false") + "\n";
        if (!r.agree) out.exit_code = 2;
    }
    return out;
}

// --- randomized verification suite ------------------------------------------

struct SuiteCase {
    std::uint64_t case_seed = 0;
    std::string description;
    bool agree = false;
    bool dual_checked = false;
    bool dual_agree = true;
};

struct SuiteResult {
    int exit_code = 0;
    int total = 0;
    int matched = 0;
    int dual_checked = 0;
    int dual_matched = 0;
    std::vector<SuiteCase> mismatches;
    std::string summary;
};

namespace detail {

// Randomized (specs, network) cases spanning the classification: coherent
// products, equal/unequal squeezing, Fock and cat inputs, through real and
// complex beamsplitters and Haar networks. Beamsplitter angles stay away from
// the trivial and real-network boundary sets so that predicted entanglement
// is resolvable above the truncation noise at desk-scale cutoffs.
inline std::pair<std::vector<ModeStateSpec>, NetworkUnitary> random_case(Rng& rng,
                                                                         const std::vector<int>& dims) {
    const double pi = std::numbers::pi;
    const int n = dims[rng.uniform_int(0, static_cast<int>(dims.size()) - 1)];

    NetworkUnitary u = make_identity(1);
    if (n == 2) {
        switch (rng.uniform_int(0, 2)) {
            case 0: u = make_beamsplitter(rng.uniform(0.15 * pi, 0.35 * pi), 0.0); break;
            case 1: {
                const double side = rng.uniform_int(0, 1) ? 0.0 : pi;
                u = make_beamsplitter(rng.uniform(0.15 * pi, 0.35 * pi),
                                      side + rng.uniform(0.3, pi - 0.3));
                break;
            }
            default: u = haar_random_unitary(2, rng.next_u64());
        }
    } else {
        u = haar_random_unitary(n, rng.next_u64());
    }

    std::vector<ModeStateSpec> specs;
    switch (rng.uniform_int(0, 5)) {
        case 0:  // all coherent
            for (int j = 0; j < n; ++j)
                specs.push_back(Coherent{cx(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))});
            break;
        case 1: {  // equal squeezing, same axis
            const double gamma = rng.uniform(0.15, 0.45);
            for (int j = 0; j < n; ++j) specs.push_back(SqueezedVacuum{gamma, 0.0});
            break;
        }
        case 2: {  // unequal squeezing
            const double gamma = rng.uniform(0.15, 0.3);
            specs.push_back(SqueezedVacuum{gamma, 0.0});
            for (int j = 1; j < n; ++j)
                specs.push_back(SqueezedVacuum{gamma + rng.uniform(0.12, 0.25), 0.0});
            break;
        }
        case 3:  // Fock states
            for (int j = 0; j < n; ++j) specs.push_back(Fock{rng.uniform_int(1, 2)});
            break;
        case 4:  // cat states
            for (int j = 0; j < n; ++j)
                specs.push_back(Cat{cx(rng.uniform(0.4, 0.8), 0.0),
                                    rng.uniform_int(0, 1) ? 1 : -1});
            break;
        default:  // mixed bag
            for (int j = 0; j < n; ++j) {
                switch (rng.uniform_int(0, 2)) {
                    case 0:
                        specs.push_back(Coherent{cx(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))});
                        break;
                    case 1: specs.push_back(SqueezedVacuum{rng.uniform(0.15, 0.4), 0.0}); break;
                    default: specs.push_back(Fock{1});
                }
            }
    }
    return {std::move(specs), std::move(u)};
}

}  // namespace detail

inline SuiteResult random_suite(std::uint64_t seed, int count, const std::vector<int>& dims,
                                int cutoff) {
    if (count < 1) throw JobError("suite: count must be >= 1");
    for (int d : dims)
        if (d < 2 || d > 6) throw JobError("suite: dims must lie in 2..6");
    if (dims.empty()) throw JobError("suite: dims must be nonempty");

    SuiteResult res;
    Rng master(seed);
    for (int i = 0; i < count; ++i) {
        const std::uint64_t case_seed = master.next_u64();
        Rng rng(case_seed);
        auto [specs, u] = detail::random_case(rng, dims);

        std::vector<SingleModeSeries> modes;
        for (const auto& s : specs) modes.push_back(mode_series(s, cutoff));
        const MultivariateSeries b_in = product_series(modes);
        const MultivariateSeries b_out = substitute_linear(b_in, u);
        const FockVector psi = from_bf(b_out);

        const EntanglementReport numeric = product_test(psi);
        ClassifyOptions opt;
        opt.cutoff = std::max(cutoff, 16);
        const TheoremVerdict verdict = classify(specs, u, opt);

        SuiteCase c;
        c.case_seed = case_seed;
        c.agree = (verdict.prediction == Prediction::Product) == numeric.is_product;
        {
            std::ostringstream d;
            d << "case " << i << " seed " << case_seed << " dim " << u.dim() << " [";
            for (std::size_t j = 0; j < specs.size(); ++j)
                d << (j ? " " : "") << spec_name(specs[j]);
            d << "] verdict " << verdict.to_line() << " min_purity "
              << detail::fmt(numeric.min_purity);
            c.description = d.str();
        }

        const DualProductTest dual =
            log_separability_test(b_out, kDefaultVacuumFloor, 0.0, numeric.truncation_deficit);
        if (dual.applicable) {
            c.dual_checked = true;
            c.dual_agree = dual.separable == numeric.is_product;
            ++res.dual_checked;
            if (c.dual_agree) ++res.dual_matched;
        }

        ++res.total;
        if (c.agree && (!c.dual_checked || c.dual_agree))
            ++res.matched;
        else
            res.mismatches.push_back(c);
    }

    std::ostringstream sum;
    sum << res.matched << "/" << res.total << " agree";
    sum << " (dual product test applicable on " << res.dual_checked << ", agreeing on "
        << res.dual_matched << ")";
    for (const auto& m : res.mismatches) sum << "\nMISMATCH " << m.description;
    res.summary = sum.str();
    res.exit_code = res.mismatches.empty() ? 0 : 2;
    return res;
}

}  // namespace bfock
