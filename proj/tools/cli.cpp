#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "permbound/bethe.hpp"
#include "permbound/dimer.hpp"
#include "permbound/ensembles.hpp"
#include "permbound/error.hpp"
#include "permbound/exact.hpp"
#include "permbound/matrix_io.hpp"
#include "permbound/numeric.hpp"
#include "permbound/orlicz.hpp"
#include "permbound/psi.hpp"
#include "permbound/random.hpp"
#include "permbound/report_json.hpp"
#include "permbound/scaling.hpp"
#include "permbound/scans.hpp"

namespace permbound::cli {

namespace {

using Json = nlohmann::ordered_json;

// A bound report that contradicts an exact value.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

struct Output {
    Json doc = Json::object();
    std::vector<Json> rows;  // tabular commands
    std::string trailer;     // extra last line (verify-psi verdict)
};

Json ordered(const nlohmann::json& j) { return Json::parse(j.dump()); }

// Slack on the Bethe sandwich from a finite scaling residual.
double sandwich_slack(std::size_t n, double residual, double exact) {
    return 10.0 * static_cast<double>(n) * residual + 1e-9 * std::max(1.0, std::abs(exact));
}

std::size_t worker_count(const RunConfig& c, std::size_t jobs) {
    std::size_t t = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(t, jobs));
}

// Runs fn(i) for i < count on a pool. Results are written by index, so the
// output order never depends on scheduling; the lowest-index exception wins.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Matrix load(const RunConfig& c) {
    if (!c.input_path) throw DomainError(c.command + ": an input matrix file is required");
    return read_matrix_file(*c.input_path);
}

PsiFunction psi_from(const std::string& a) {
    if (a == "auto") return PsiFunction::canonical();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
    if (ec != std::errc() || ptr != a.data() + a.size())
        throw DomainError("--a expects 'auto' or a number, got '" + a + "'");
    return PsiFunction::psi_a(v);
}

// ---------------------------------------------------------------- commands

Output cmd_exact(const RunConfig& c) {
    const Matrix a = load(c);
    require_square(a, "exact");
    const auto per = permanent_ryser(a);
    if (a.rows() <= kBruteForceMaxN) {
        const auto brute = permanent_bruteforce(a);
        const bool agree = brute.is_zero() == per.is_zero() &&
                           (per.is_zero() || std::abs(brute.log_value() - per.log_value()) <= 1e-9);
        if (!agree) throw InvariantViolation("exact: Ryser and brute force disagree");
    }
    Output o;
    o.doc["command"] = "exact";
    o.doc["n"] = a.rows();
    o.doc["method"] = "ryser";
    o.doc["log_permanent"] = per.log_value();
    o.doc["permanent"] = per.value();
    return o;
}

Output cmd_approx(const RunConfig& c) {
    const Matrix a = load(c);
    const auto r = approximate_permanent(a, c.tol, c.max_iter);
    Output o;
    o.doc["command"] = "approx";
    o.doc["n"] = r.n;
    o.doc["log_lower"] = r.log_lower;
    o.doc["log_estimate"] = r.log_estimate;
    o.doc["log_upper"] = r.log_upper;
    o.doc["log_exact"] = nullptr;
    o.doc["scaling_residual"] = r.scaling_residual;
    o.doc["degraded"] = r.degraded;
    o.doc["log2_lower"] = r.log_lower / std::log(2.0);
    o.doc["log2_upper"] = r.log_upper / std::log(2.0);
    return o;
}

Output cmd_bounds(const RunConfig& c) {
    const Matrix a = load(c);
    auto r = approximate_permanent(a, c.tol, c.max_iter);
    const std::size_t n = a.rows();
    const double orlicz = upper_bound_orlicz(a, PsiFunction::canonical());
    std::optional<BregmanBound> bregman;
    if (a.is_zero_one()) bregman = bregman_bound(a);
    if (n <= kRyserMaxN) r.log_exact = permanent_ryser(a).log_value();

    Output o;
    o.doc["command"] = "bounds";
    o.doc["n"] = n;
    o.doc["log_lower"] = r.log_lower;
    o.doc["log_estimate"] = r.log_estimate;
    o.doc["log_upper"] = r.log_upper;
    o.doc["log_orlicz_upper"] = orlicz;
    o.doc["log_bregman_upper"] = bregman ? Json(bregman->log_bound) : Json(nullptr);
    o.doc["log_exact"] = r.log_exact ? Json(*r.log_exact) : Json(nullptr);
    o.doc["scaling_residual"] = r.scaling_residual;
    o.doc["degraded"] = r.degraded;
    o.doc["log2_lower"] = r.log_lower / std::log(2.0);
    o.doc["log2_upper"] = r.log_upper / std::log(2.0);

    if (r.log_exact) {
        const double ex = *r.log_exact;
        const double slack = sandwich_slack(n, r.scaling_residual, ex);
        const double tiny = 1e-9 * std::max(1.0, std::abs(ex));
        if (r.log_lower > ex + slack) throw InvariantViolation("bounds: lower bound exceeds the exact value");
        if (ex > r.log_upper + slack) throw InvariantViolation("bounds: exact value exceeds the Bethe upper bound");
        if (ex > orlicz + tiny) throw InvariantViolation("bounds: exact value exceeds the Orlicz upper bound");
        if (bregman && ex > bregman->log_bound + tiny)
            throw InvariantViolation("bounds: exact value exceeds the Bregman bound");
    }
    return o;
}

Output cmd_bethe_opt(const RunConfig& c) {
    const Matrix a = load(c);
    const auto sol = maximize_bethe(a, c.max_iter, c.tol);
    Output o;
    o.doc["command"] = "bethe-opt";
    o.doc["n"] = a.rows();
    o.doc.update(ordered(to_json(sol)));
    o.doc["start_objective"] = sol.trace.front();
    o.doc["improvement"] = sol.objective - sol.trace.front();
    if (a.rows() <= kRyserMaxN) {
        const double ex = permanent_ryser(a).log_value();
        o.doc["log_exact"] = ex;
        if (sol.objective > ex + 1e-6) throw InvariantViolation("bethe-opt: objective exceeds the exact value");
    }
    return o;
}

Output cmd_scale(const RunConfig& c, std::ostream& err) {
    const Matrix a = load(c);
    Output o;
    o.doc["command"] = "scale";
    try {
        o.doc.update(ordered(to_json(sinkhorn_scale(a, c.tol, c.max_iter))));
        o.doc["converged"] = true;
    } catch (const ScalingNonConvergence& e) {
        err << "warning: " << e.what() << "\n";
        o.doc.update(ordered(to_json(e.partial())));
        o.doc["converged"] = false;
    }
    return o;
}

Output cmd_perm_m(const RunConfig& c) {
    const Matrix a = load(c);
    if (!c.m) throw DomainError("perm-m: --m is required");
    require_square(a, "perm-m");
    const std::size_t m = *c.m;
    const auto v = per_m(a, m);
    Output o;
    o.doc["command"] = "perm-m";
    o.doc["n"] = a.rows();
    o.doc["m"] = m;
    o.doc["route"] = per_m_prefers_direct(a.rows(), m) ? "direct" : "block";
    o.doc["log_per_m"] = v.log_value();
    o.doc["per_m"] = v.value();
    return o;
}

Output cmd_friedland(const RunConfig& c) {
    const std::size_t n = c.n.value_or(6);
    const std::size_t k = c.k;
    const std::size_t samples = c.samples.value_or(100);
    if (n == 0 || k == 0 || samples == 0) throw DomainError("friedland: --n, --k and --samples must be positive");
    std::vector<std::size_t> ms;
    if (c.m) {
        if (*c.m == 0 || *c.m > n) throw DomainError("friedland: --m must lie in [1, n]");
        ms.push_back(*c.m);
    } else {
        for (std::size_t m = 1; m <= n; ++m) ms.push_back(m);
    }
    // Fail fast on the size cap before sampling.
    for (std::size_t m : ms)
        if (!per_m_prefers_direct(n, m) && 2 * n - m > kRyserMaxN)
            throw SizeLimitError("friedland: Per_m for n = " + std::to_string(n) + ", m = " +
                                 std::to_string(m) + " exceeds the exact budget");

    // logs[i][j]: ln Per_{ms[j]} of sample i.
    std::vector<std::vector<double>> logs(samples, std::vector<double>(ms.size()));
    parallel_for(samples, worker_count(c, samples), [&](std::size_t i) {
        Rng rng(derive_seed(c.seed, i));
        const Matrix a = sample_lambda(k, n, rng);
        for (std::size_t j = 0; j < ms.size(); ++j) logs[i][j] = per_m(a, ms[j]).log_value();
    });

    Output o;
    o.doc["command"] = "friedland";
    double worst_margin = kInf;
    for (std::size_t j = 0; j < ms.size(); ++j) {
        const std::size_t m = ms[j];
        const double p = static_cast<double>(m) / static_cast<double>(n);
        const double pa1 = friedland_lower_pa1(n, m, k);
        std::vector<double> col(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            col[i] = logs[i][j];
            worst_margin = std::min(worst_margin, col[i] - pa1);
        }
        Json row;
        row["n"] = n;
        row["k"] = k;
        row["m"] = m;
        row["p"] = p;
        row["log_per_m_mean"] = log_mean_exp(col);
        row["pa1_lower"] = pa1;
        row["beta_limit"] = friedland_limit_beta(p, k);
        row["samples"] = samples;
        row["seed"] = c.seed;
        o.rows.push_back(std::move(row));
    }
    o.doc["min_margin"] = worst_margin;
    o.doc["rows"] = o.rows;
    if (worst_margin < -1e-8) throw InvariantViolation("friedland: a sample falls below the pa1 lower bound");
    return o;
}

Output cmd_verify_psi(const RunConfig& c) {
    const auto f = psi_from(c.a);
    const std::size_t grid = c.samples.value_or(100'000);
    const auto r = verify_psi_conditions(f, grid);
    Output o;
    o.doc["command"] = "verify-psi";
    o.doc["a"] = f.parameter();
    o.doc["certified_family"] = f.in_certified_family();
    o.doc.update(ordered(to_json(r)));
    o.doc["passed"] = r.passed();
    o.trailer = std::string(r.passed() ? "PASS" : "FAIL") + " verify-psi: all margins >= -1e-12";
    return o;
}

Output cmd_scan(const RunConfig& c) {
    const std::size_t n = c.n.value_or(8);
    const std::size_t samples = c.samples.value_or(1000);
    if (n == 0 || samples == 0) throw DomainError("scan-conjectures: --n and --samples must be positive");
    if (n > kRyserMaxN) throw SizeLimitError("scan-conjectures: n exceeds the exact budget");
    const auto ens = Ensemble::parse(c.ensemble, c.k);

    // Doubly stochastic image for the first scan, row-normalized copy for the
    // second; members with zero permanent are skipped.
    std::vector<std::optional<Matrix>> ds(samples), rs(samples);
    parallel_for(samples, worker_count(c, samples), [&](std::size_t i) {
        Rng rng(derive_seed(c.seed, i));
        const Matrix a = ens.make(n, rng);
        if (!support_has_perfect_matching(a)) return;
        if (classify(a).is_doubly_stochastic) {
            ds[i] = a;
        } else {
            try {
                ds[i] = sinkhorn_scale(a, 1e-12, 1'000'000).scaled;
            } catch (const ScalingNonConvergence&) {
            }
        }
        rs[i] = Matrix::generate(n, n, [&](std::size_t r, std::size_t col) {
            double s = 0.0;
            for (double v : a.row(r)) s += v;
            return a(r, col) / s;
        });
    });
    std::vector<Matrix> ds_list, rs_list;
    for (auto& m : ds)
        if (m) ds_list.push_back(std::move(*m));
    for (auto& m : rs)
        if (m) rs_list.push_back(std::move(*m));

    Output o;
    o.doc["command"] = "scan-conjectures";
    o.doc["ensemble"] = ens.name();
    o.doc["n"] = n;
    o.doc["samples"] = samples;
    o.doc["seed"] = c.seed;
    o.doc["skipped"] = samples - ds_list.size();
    Json scans = Json::array();
    std::size_t found = 0;
    for (const auto* list : {&ds_list, &rs_list}) {
        if (list->empty()) continue;
        const auto s = list == &ds_list ? scan_half_exponent_conjecture(*list) : scan_phi0_conjecture(*list);
        found += s.counterexample_count;
        Json js = ordered(to_json(s));
        scans.push_back(js);
        Json row;
        for (const char* key : {"conjecture", "instances", "min_log_ratio", "max_log_ratio", "max_ratio",
                                "counterexample_count"})
            row[key] = js[key];
        o.rows.push_back(std::move(row));
    }
    o.doc["scans"] = scans;
    o.doc["noteworthy"] = found > 0;
    if (found > 0) o.trailer = "NOTEWORTHY: counterexample candidates found (see dump)";
    return o;
}

Output cmd_bench(const RunConfig& c) {
    const std::size_t n = c.n.value_or(8);
    const std::size_t samples = c.samples.value_or(20);
    if (n == 0 || samples == 0) throw DomainError("bench: --n and --samples must be positive");
    const auto ens = Ensemble::parse(c.ensemble, c.k);
    const bool with_exact = n <= kRyserMaxN;
    const auto psi = PsiFunction::canonical();

    std::vector<Json> rows(samples);
    std::vector<std::string> violations(samples);
    parallel_for(samples, worker_count(c, samples), [&](std::size_t i) {
        Rng rng(derive_seed(c.seed, i));
        const Matrix a = ens.make(n, rng);
        Json row;
        row["index"] = i;
        row["n"] = n;
        row["ensemble"] = ens.name();
        if (!support_has_perfect_matching(a)) {
            row["status"] = "zero_permanent";
            for (const char* key : {"log_exact", "log_lower", "log_estimate", "log_upper", "log_orlicz_upper",
                                    "scaling_residual"})
                row[key] = nullptr;
            rows[i] = std::move(row);
            return;
        }
        const auto r = approximate_permanent(a, c.tol, c.max_iter);
        const double orlicz = upper_bound_orlicz(a, psi);
        std::optional<double> ex;
        if (with_exact) ex = permanent_ryser(a).log_value();
        row["status"] = r.degraded ? "degraded" : "ok";
        row["log_exact"] = ex ? Json(*ex) : Json(nullptr);
        row["log_lower"] = r.log_lower;
        row["log_estimate"] = r.log_estimate;
        row["log_upper"] = r.log_upper;
        row["log_orlicz_upper"] = orlicz;
        row["scaling_residual"] = r.scaling_residual;
        if (ex) {
            const double slack = sandwich_slack(n, r.scaling_residual, *ex);
            if (r.log_lower > *ex + slack || *ex > r.log_upper + slack ||
                *ex > orlicz + 1e-9 * std::max(1.0, std::abs(*ex)))
                violations[i] = "bench: bound ordering violated at index " + std::to_string(i);
        }
        rows[i] = std::move(row);
    });

    Output o;
    o.doc["command"] = "bench";
    o.doc["ensemble"] = ens.name();
    o.doc["n"] = n;
    o.doc["samples"] = samples;
    o.doc["seed"] = c.seed;
    o.rows = std::move(rows);
    o.doc["rows"] = o.rows;
    for (const auto& v : violations)
        if (!v.empty()) throw InvariantViolation(v);
    return o;
}

// ---------------------------------------------------------------- rendering

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

void render(const Output& o, Format f, std::ostream& out) {
    switch (f) {
        case Format::json:
            out << o.doc.dump(2) << "\n";
            break;
        case Format::csv: {
            std::vector<Json> rows = o.rows;
            if (rows.empty()) {
                Json flat = Json::object();
                for (const auto& [key, value] : o.doc.items())
                    if (!value.is_structured()) flat[key] = value;
                rows.push_back(std::move(flat));
            }
            bool first = true;
            for (const auto& [key, value] : rows.front().items()) {
                out << (first ? "" : ",") << key;
                first = false;
            }
            out << "\n";
            for (const auto& row : rows) {
                first = true;
                for (const auto& [key, value] : row.items()) {
                    out << (first ? "" : ",") << scalar_text(value);
                    first = false;
                }
                out << "\n";
            }
            break;
        }
        case Format::human: {
            std::size_t width = 0;
            for (const auto& [key, value] : o.doc.items())
                if (key != "rows") width = std::max(width, key.size());
            for (const auto& [key, value] : o.doc.items()) {
                // tables below carry the structured fields
                if (key == "rows" || (!o.rows.empty() && value.is_structured())) continue;
                out << std::left << std::setw(static_cast<int>(width) + 2) << key
                    << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
            }
            if (!o.rows.empty()) {
                std::vector<std::string> keys;
                for (const auto& [key, value] : o.rows.front().items()) keys.push_back(key);
                std::vector<std::size_t> w(keys.size());
                for (std::size_t j = 0; j < keys.size(); ++j) {
                    w[j] = keys[j].size();
                    for (const auto& row : o.rows) w[j] = std::max(w[j], scalar_text(row[keys[j]]).size());
                }
                out << "\n";
                for (std::size_t j = 0; j < keys.size(); ++j)
                    out << std::left << std::setw(static_cast<int>(w[j]) + 2) << keys[j];
                out << "\n";
                for (const auto& row : o.rows) {
                    for (std::size_t j = 0; j < keys.size(); ++j)
                        out << std::left << std::setw(static_cast<int>(w[j]) + 2) << scalar_text(row[keys[j]]);
                    out << "\n";
                }
            }
            break;
        }
    }
    if (!o.trailer.empty()) out << o.trailer << "\n";
}

Format default_format(const std::string& command) {
    return command == "friedland" || command == "bench" ? Format::csv : Format::json;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"exact",     "approx",     "bounds",           "bethe-opt", "scale",
                                                "perm-m",    "friedland",  "verify-psi", "scan-conjectures",
                                                "bench"};
    return names;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (!(c.tol > 0.0)) throw DomainError("--tol must be positive");
        if (c.max_iter < 1) throw DomainError("--max-iter must be at least 1");
        Output o;
        const auto& cmd = c.command;
        if (cmd == "exact") o = cmd_exact(c);
        else if (cmd == "approx") o = cmd_approx(c);
        else if (cmd == "bounds") o = cmd_bounds(c);
        else if (cmd == "bethe-opt") o = cmd_bethe_opt(c);
        else if (cmd == "scale") o = cmd_scale(c, err);
        else if (cmd == "perm-m") o = cmd_perm_m(c);
        else if (cmd == "friedland") o = cmd_friedland(c);
        else if (cmd == "verify-psi") o = cmd_verify_psi(c);
        else if (cmd == "scan-conjectures") o = cmd_scan(c);
        else if (cmd == "bench") o = cmd_bench(c);
        else throw DomainError("unknown command '" + cmd + "'");
        render(o, c.format.value_or(default_format(cmd)), out);
        return kExitOk;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const SizeLimitError& e) {
        err << "size limit: " << e.what() << "\n";
        return kExitSize;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Permanent bounds and approximations for nonnegative matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig c;
    std::string format;
    app.add_option("--tol", c.tol, "Tolerance (scaling residual, duality gap)")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", c.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--seed", c.seed, "Random seed");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "human"}));
    app.add_option("--m", c.m, "Matching size for perm-m and friedland");
    app.add_option("--k", c.k, "Line sum of Lambda(k, n) samples");
    app.add_option("--n", c.n, "Dimension for generated instances");
    app.add_option("--samples", c.samples, "Sample count (grid size for verify-psi)");
    app.add_option("--ensemble", c.ensemble, "ds-random, lambda-k, block-a1, cycle-a2, zero-one-density(q), "
                                             "positive-random, row-stochastic");
    app.add_option("--a", c.a, "psi_a parameter, or 'auto' for the canonical root");
    app.add_option("--threads", c.threads, "Worker threads (0 = hardware)");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"exact", "Exact permanent by Ryser"},
        {"approx", "Scale-then-Bethe estimate with its 2^n interval"},
        {"bounds", "All bounds on one matrix, with the exact value when n <= 24"},
        {"bethe-opt", "Maximize the CW functional over doubly stochastic matrices"},
        {"scale", "Sinkhorn scaling"},
        {"perm-m", "Sum of all m x m subpermanents"},
        {"friedland", "Per_m statistics over Lambda(k, n) samples"},
        {"verify-psi", "Grid certificate for the psi conditions"},
        {"scan-conjectures", "Falsification scans over an ensemble"},
        {"bench", "Bounds against exact values over an ensemble"}};
    std::string input;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        if (name != "friedland" && name != "verify-psi" && name != "scan-conjectures" && name != "bench")
            sub->add_option("input", input, "Matrix file")->required();
    }

    std::ostringstream cli_out, cli_err;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitDomain;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (!input.empty()) c.input_path = input;
    if (format == "json") c.format = Format::json;
    else if (format == "csv") c.format = Format::csv;
    else if (format == "human") c.format = Format::human;
    return run(c, out, err);
}

}  // namespace permbound::cli
