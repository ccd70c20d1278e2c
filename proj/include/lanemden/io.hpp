#pragma once

// JSON files for solutions and reports. Schema "1":
//
//   solution.json: { schema, provenance, p, q,
//                    domain: {shape, radius | a, b},
//                    grid:   {type: "radial"|"planar", n | nx, ny},
//                    u: [...], v: [...], residual_norm, iterations, converged }
//
// Planar fields are the full row-major node arrays, boundary included.
// report.json mirrors the DiagnosticsReport field names.

#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "lanemden/core.hpp"
#include "lanemden/diagnostics.hpp"

namespace lanemden {

using LoadedSolution = std::variant<SolutionPair<RadialGrid>, SolutionPair<PlanarGrid>>;

inline nlohmann::ordered_json domain_to_json(const DomainSpec& d) {
    nlohmann::ordered_json j;
    if (d.shape() == Shape::Disk) {
        j["shape"] = "disk";
        j["radius"] = d.radius();
    } else {
        j["shape"] = "rectangle";
        j["a"] = d.side_a();
        j["b"] = d.side_b();
    }
    return j;
}

template <class Grid>
nlohmann::ordered_json solution_to_json(const SolutionPair<Grid>& s,
                                        const std::string& provenance = "") {
    nlohmann::ordered_json j;
    j["schema"] = "1";
    if (!provenance.empty()) j["provenance"] = provenance;
    j["p"] = s.exponents.p();
    j["q"] = s.exponents.q();
    j["domain"] = domain_to_json(s.u.grid().domain());
    nlohmann::ordered_json grid;
    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        grid["type"] = "radial";
        grid["n"] = s.u.grid().n();
    } else {
        grid["type"] = "planar";
        grid["nx"] = s.u.grid().nx();
        grid["ny"] = s.u.grid().ny();
    }
    j["grid"] = std::move(grid);
    j["u"] = s.u.values();
    j["v"] = s.v.values();
    j["residual_norm"] = s.residual_norm;
    j["iterations"] = s.newton_iterations;
    j["converged"] = s.converged;
    j["status"] = to_string(s.status);
    return j;
}

template <class Grid>
void save_solution(const SolutionPair<Grid>& s, const std::string& path,
                   const std::string& provenance = "") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_solution: cannot open " + path);
    out << solution_to_json(s, provenance).dump() << '\n';
    if (!out) throw std::runtime_error("save_solution: write failed for " + path);
}

inline LoadedSolution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_solution: cannot open " + path);
    nlohmann::json j;
    in >> j;
    const ExponentPair e(j.at("p").get<double>(), j.at("q").get<double>());
    const auto& jd = j.at("domain");
    const auto& jg = j.at("grid");

    auto fill = [&](auto grid) -> LoadedSolution {
        using G = decltype(grid);
        SolutionPair<G> s{e, Field<G>(grid, j.at("u").get<std::vector<double>>()),
                          Field<G>(grid, j.at("v").get<std::vector<double>>())};
        s.residual_norm = j.at("residual_norm").get<double>();
        s.newton_iterations = j.at("iterations").get<int>();
        s.converged = j.at("converged").get<bool>();
        s.status = s.converged ? SolveStatus::Converged : SolveStatus::NonConvergence;
        return s;
    };

    if (jg.at("type") == "radial") {
        return fill(RadialGrid(jd.at("radius").get<double>(), jg.at("n").get<int>()));
    }
    const DomainSpec rect = DomainSpec::rectangle(jd.at("a").get<double>(), jd.at("b").get<double>());
    return fill(PlanarGrid(rect, jg.at("nx").get<int>(), jg.at("ny").get<int>()));
}

inline nlohmann::ordered_json report_to_json(const DiagnosticsReport& r,
                                             const std::string& provenance = "") {
    nlohmann::ordered_json j;
    j["schema"] = "1";
    if (!provenance.empty()) j["provenance"] = provenance;
    j["p"] = r.p;
    j["q"] = r.q;
    j["M"] = r.M;
    j["N"] = r.N;
    j["x_u"] = r.x_u;
    j["x_v"] = r.x_v;
    j["L1_u"] = r.L1_u;
    j["L1_v"] = r.L1_v;
    j["L1_uq"] = r.L1_uq;
    j["L1_vp"] = r.L1_vp;
    j["L1_uq1"] = r.L1_uq1;
    j["energy"] = r.energy;
    j["pohozaev_residual_rel"] = r.pohozaev_residual_rel;
    j["energy_identity_rel"] = r.energy_identity_rel;
    j["flux_residual_rel"] = r.flux_residual_rel;
    j["eigen_moment_rel"] = r.eigen_moment_rel;
    j["jensen_gaps"] = r.jensen_gaps;
    j["jensen_pass"] = r.jensen_pass;
    j["uphi_l1"] = r.uphi_l1;
    j["vphi_l1"] = r.vphi_l1;
    j["uphi_bound"] = r.uphi_bound;
    j["comparison_margins"] = r.comparison_margins;
    j["comparison_pass"] = r.comparison_pass;
    j["harnack_limit_u"] = r.harnack_limit_u;
    j["harnack_limit_v"] = r.harnack_limit_v;
    j["harnack_ratio_profile"] = r.harnack_ratio_profile;
    j["mass_concentration_value"] = r.mass_concentration_value;
    j["mass_level"] = r.mass_level;
    j["mass_area"] = r.mass_area;
    j["mass_floor"] = r.mass_floor;
    j["mass_pass"] = r.mass_pass;
    j["brezis_merle_value"] = r.brezis_merle_value;
    j["brezis_merle_bound"] = r.brezis_merle_bound;
    j["brezis_merle_pass"] = r.brezis_merle_pass;
    j["lower_bound_check"] = r.lower_bound_check;
    j["mq1"] = r.mq1;
    j["lambda_sq"] = r.lambda_sq;
    j["upper_envelope"] = r.upper_envelope;
    j["pointwise_floor_radius"] = r.pointwise_floor_radius;
    j["pointwise_floor_r1"] = r.pointwise_floor_r1;
    j["pointwise_floor_ratio"] = r.pointwise_floor_ratio;
    j["pointwise_floor_clipped"] = r.pointwise_floor_clipped;
    // NaN marks the planar case, where the center kernel is not available.
    if (std::isnan(r.green_center_rel_u)) {
        j["green_center_rel_u"] = nullptr;
        j["green_center_rel_v"] = nullptr;
    } else {
        j["green_center_rel_u"] = r.green_center_rel_u;
        j["green_center_rel_v"] = r.green_center_rel_v;
    }
    return j;
}

inline void save_report(const DiagnosticsReport& r, const std::string& path,
                        const std::string& provenance = "") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_report: cannot open " + path);
    out << report_to_json(r, provenance).dump(2) << '\n';
    if (!out) throw std::runtime_error("save_report: write failed for " + path);
}

}  // namespace lanemden
