#pragma once

// Exponent sweeps with warm-start continuation, the logarithmic fit behind
// the p = 1 asymptotics, and CSV/JSON export. Everything is deterministic:
// fixed iteration orders, no randomness, rows keyed by q.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lanemden/core.hpp"
#include "lanemden/diagnostics.hpp"
#include "lanemden/planar.hpp"
#include "lanemden/radial.hpp"
#include "lanemden/spectral.hpp"

namespace lanemden {

enum class SweepMode { FixedP, Diagonal, Ray };

struct SweepPlan {
    SweepMode mode = SweepMode::FixedP;
    double p = 1.0;      // FixedP: the fixed first exponent
    double ratio = 1.0;  // Ray: p = ratio * q
    std::vector<double> q_values;
    DomainSpec domain = DomainSpec::disk(1.0);
    int grid_n = 1024;
    double tol = 1e-10;
    int max_iter = 200;
    bool diagnostics = true;
    double bm_delta = 2.0 * pi;

    ExponentPair exponents_at(double q) const {
        switch (mode) {
            case SweepMode::FixedP: return {p, q};
            case SweepMode::Diagonal: return {q, q};
            case SweepMode::Ray: return {ratio * q, q};
        }
        throw std::logic_error("SweepPlan: bad mode");
    }

    void validate() const {
        if (q_values.empty()) throw std::invalid_argument("SweepPlan: empty q list");
        for (std::size_t i = 1; i < q_values.size(); ++i)
            if (!(q_values[i] > q_values[i - 1]))
                throw std::invalid_argument("SweepPlan: q list must be strictly increasing");
        for (double q : q_values) (void)exponents_at(q);  // throws on invalid pairs
        if (grid_n < 16) throw std::invalid_argument("SweepPlan: grid_n >= 16");
    }
};

struct SweepRow {
    double p = 0, q = 0, M = 0, N = 0, energy = 0, p_energy = 0;
    double l1_u = 0, l1_v = 0, l1_uq = 0, l1_uq1 = 0;
    double pohozaev_rel = 0, energy_id_rel = 0;
    bool converged = false;
    std::string failure;
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

namespace detail {

inline double grid_spacing(const RadialGrid& g) { return g.h(); }
inline double grid_spacing(const PlanarGrid& g) { return std::max(g.hx(), g.hy()); }

// Concentration scales R1 = sqrt(M/(q N^p)), R2 = sqrt(N/(p M^q)) in units of
// the grid spacing. When the smaller one falls under ~2h the grid cannot
// represent the solution's bubble and the converged discrete object is a
// different (unresolved) branch; sweeps refuse to report such rows as
// converged.
template <class Grid>
double resolution_margin(const SolutionPair<Grid>& s) {
    const double M = s.u.max(), N = s.v.max();
    const double r1 = std::sqrt(M / (s.exponents.q() * stable_pow(N, s.exponents.p()).value));
    const double r2 = std::sqrt(N / (s.exponents.p() * stable_pow(M, s.exponents.q()).value));
    return std::min(r1, r2) / grid_spacing(s.u.grid());
}

inline constexpr double resolution_floor = 2.0;

template <class Grid>
SweepRow make_row(const ExponentPair& target, const SolutionPair<Grid>& s,
                  const Eigenpair<Grid>& ep, bool diagnostics, double bm_delta) {
    SweepRow row;
    row.p = target.p();
    row.q = target.q();
    row.M = s.u.max();
    row.N = s.v.max();
    row.converged = s.converged;
    if (!s.converged) row.failure = to_string(s.status);
    if (s.converged && resolution_margin(s) < resolution_floor) {
        row.converged = false;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "under-resolved: concentration scale %.2fh < %.0fh",
                      resolution_margin(s), resolution_floor);
        row.failure = buf;
        return row;
    }
    if (s.converged && diagnostics) {
        const auto rep = compute_report(s, ep, bm_delta);
        row.energy = rep.energy;
        row.p_energy = row.p * rep.energy;
        row.l1_u = rep.L1_u;
        row.l1_v = rep.L1_v;
        row.l1_uq = rep.L1_uq;
        row.l1_uq1 = rep.L1_uq1;
        row.pohozaev_rel = rep.pohozaev_residual_rel;
        row.energy_id_rel = std::max(rep.energy_identity_rel[0], rep.energy_identity_rel[1]);
    }
    return row;
}

}  // namespace detail

/// Runs the plan. jobs == 1 (the default) solves rows in increasing q with
/// warm starts -- sequential by construction. jobs > 1 solves every row cold
/// (eigenfunction init) in parallel; the table is assembled by row index, so
/// output does not depend on the worker count. When `reports` is given it
/// receives the full diagnostics report of every converged (and resolved)
/// row, aligned with the table rows.
inline SweepTable run_sweep(const SweepPlan& plan, int jobs = 1,
                            std::vector<std::optional<DiagnosticsReport>>* reports = nullptr) {
    plan.validate();
    SweepTable table;
    table.rows.resize(plan.q_values.size());
    if (reports) {
        reports->clear();
        reports->resize(plan.q_values.size());
    }

    auto drive = [&](auto grid, auto cold_solve, auto warm_solve) {
        const auto ep = first_dirichlet_eigenpair(grid);
        auto finish_row = [&](std::size_t k, const ExponentPair& e, const auto& s) {
            SweepRow row = detail::make_row(e, s, ep, plan.diagnostics, plan.bm_delta);
            if (reports && row.converged)
                (*reports)[k] = compute_report(s, ep, plan.bm_delta);
            return row;
        };
        if (jobs <= 1) {
            std::optional<SolutionPair<decltype(grid)>> anchor;
            for (std::size_t k = 0; k < plan.q_values.size(); ++k) {
                const auto e = plan.exponents_at(plan.q_values[k]);
                auto s = anchor ? warm_solve(e, *anchor) : cold_solve(e);
                table.rows[k] = finish_row(k, e, s);
                if (table.rows[k].converged) anchor = std::move(s);
            }
        } else {
            std::vector<std::future<SweepRow>> futures(plan.q_values.size());
            for (std::size_t k = 0; k < plan.q_values.size(); ++k) {
                futures[k] = std::async(std::launch::async, [&, k] {
                    const auto e = plan.exponents_at(plan.q_values[k]);
                    auto s = cold_solve(e);
                    return finish_row(k, e, s);
                });
            }
            for (std::size_t k = 0; k < futures.size(); ++k) table.rows[k] = futures[k].get();
        }
    };

    if (plan.domain.shape() == Shape::Disk) {
        RadialGrid grid(plan.domain.radius(), plan.grid_n);
        RadialSolveConfig base{plan.tol, plan.max_iter, std::nullopt};
        drive(
            grid, [&](const ExponentPair& e) { return solve_newton(e, grid, base); },
            [&](const ExponentPair& e, const SolutionPair<RadialGrid>& anchor) {
                RadialSolveConfig c = base;
                c.warm_start = anchor;
                return solve_newton_continued(e, grid, c);
            });
    } else {
        PlanarGrid grid(plan.domain, plan.grid_n, plan.grid_n);
        PlanarSolveConfig base;
        base.tol = plan.tol;
        base.max_iter = plan.max_iter;
        drive(
            grid, [&](const ExponentPair& e) { return solve_planar(e, grid, base); },
            [&](const ExponentPair& e, const SolutionPair<PlanarGrid>& anchor) {
                PlanarSolveConfig c = base;
                c.warm_start = anchor;
                return solve_planar_continued(e, grid, c);
            });
    }
    return table;
}

// ---------------------------------------------------------------------------
// Fits

struct LogFit {
    double slope = 0, intercept = 0, correlation = 0;
    double ratio_max = 0, ratio_min = 0;                 // N / log q over the fit rows
    std::vector<std::array<double, 2>> fd_growth;        // (q_mid, ΔN/Δlog q)
};

/// Least squares of N against log q over converged rows with q >= q_min
/// (preasymptotic rows are excluded by default). Also reports the ratio
/// column N/log q and the finite-difference growth ΔN/Δlog q, the discrete
/// stand-in for q ∂N/∂q.
inline LogFit fit_logarithmic(const SweepTable& table, double q_min = 16.0) {
    std::vector<double> lq, N, qs;
    for (const auto& row : table.rows) {
        if (!row.converged || row.q < q_min) continue;
        lq.push_back(std::log(row.q));
        N.push_back(row.N);
        qs.push_back(row.q);
    }
    if (lq.size() < 4) throw std::invalid_argument("fit_logarithmic: need >= 4 converged rows");
    const auto f = linear_fit(lq, N);
    LogFit out;
    out.slope = f.slope;
    out.intercept = f.intercept;
    out.correlation = f.correlation;
    out.ratio_max = -std::numeric_limits<double>::infinity();
    out.ratio_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lq.size(); ++i) {
        const double ratio = N[i] / lq[i];
        out.ratio_max = std::max(out.ratio_max, ratio);
        out.ratio_min = std::min(out.ratio_min, ratio);
    }
    for (std::size_t i = 0; i + 1 < lq.size(); ++i)
        out.fd_growth.push_back(
            {std::sqrt(qs[i] * qs[i + 1]), (N[i + 1] - N[i]) / (lq[i + 1] - lq[i])});
    return out;
}

/// Converged rows as (q, M, N) triples for asymptotic_trends.
inline std::vector<TrendPoint> trend_points(const SweepTable& table, double q_min = 16.0) {
    std::vector<TrendPoint> pts;
    for (const auto& row : table.rows)
        if (row.converged && row.q >= q_min) pts.push_back({row.q, row.M, row.N});
    return pts;
}

// ---------------------------------------------------------------------------
// Export

namespace detail {

inline std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline std::string to_csv(const SweepTable& table) {
    std::string out =
        "p,q,M,N,energy,p_energy,L1_u,L1_v,L1_uq,L1_uq1,pohozaev_rel,energy_id_rel,converged\n";
    for (const auto& r : table.rows) {
        const double cols[] = {r.p,    r.q,    r.M,     r.N,      r.energy,       r.p_energy,
                               r.l1_u, r.l1_v, r.l1_uq, r.l1_uq1, r.pohozaev_rel, r.energy_id_rel};
        for (double c : cols) {
            out += detail::format_g17(c);
            out += ',';
        }
        out += r.converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json to_json(const SweepTable& table, const std::string& provenance = "") {
    nlohmann::ordered_json j;
    j["schema"] = "1";
    if (!provenance.empty()) j["provenance"] = provenance;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
        nlohmann::ordered_json row;
        row["p"] = r.p;
        row["q"] = r.q;
        row["M"] = r.M;
        row["N"] = r.N;
        row["energy"] = r.energy;
        row["p_energy"] = r.p_energy;
        row["L1_u"] = r.l1_u;
        row["L1_v"] = r.l1_v;
        row["L1_uq"] = r.l1_uq;
        row["L1_uq1"] = r.l1_uq1;
        row["pohozaev_rel"] = r.pohozaev_rel;
        row["energy_id_rel"] = r.energy_id_rel;
        row["converged"] = r.converged;
        row["failure"] = r.failure;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline SweepTable table_from_json(const nlohmann::json& j) {
    if (j.at("schema").get<std::string>() != "1")
        throw std::invalid_argument("sweep table: unknown schema version");
    SweepTable table;
    for (const auto& row : j.at("rows")) {
        SweepRow r;
        r.p = row.at("p").get<double>();
        r.q = row.at("q").get<double>();
        r.M = row.at("M").get<double>();
        r.N = row.at("N").get<double>();
        r.energy = row.at("energy").get<double>();
        r.p_energy = row.at("p_energy").get<double>();
        r.l1_u = row.at("L1_u").get<double>();
        r.l1_v = row.at("L1_v").get<double>();
        r.l1_uq = row.at("L1_uq").get<double>();
        r.l1_uq1 = row.at("L1_uq1").get<double>();
        r.pohozaev_rel = row.at("pohozaev_rel").get<double>();
        r.energy_id_rel = row.at("energy_id_rel").get<double>();
        r.converged = row.at("converged").get<bool>();
        r.failure = row.value("failure", "");
        table.rows.push_back(std::move(r));
    }
    return table;
}

enum class ExportFormat { CSV, JSON };

/// Writes the table to `path`. I/O failures surface with the path attached.
inline void export_table(const SweepTable& table, ExportFormat format, const std::string& path,
                         const std::string& provenance = "") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export: cannot open " + path);
    if (format == ExportFormat::CSV)
        out << to_csv(table);
    else
        out << to_json(table, provenance).dump(2) << '\n';
    if (!out) throw std::runtime_error("export: write failed for " + path);
}

inline SweepTable import_table_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return table_from_json(j);
}

}  // namespace lanemden
