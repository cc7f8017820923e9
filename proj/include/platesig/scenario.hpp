#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "platesig/io.hpp"
#include "platesig/plate_solver.hpp"
#include "platesig/poisson.hpp"
#include "platesig/postprocess.hpp"

namespace platesig {

/// Schema violation; `key` is the offending section.key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error("config error at '" + key + "': " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class ProblemKind { plate_signorini, plate_bilateral, poisson_dirichlet, poisson_signorini };

inline const char* problem_name(ProblemKind k) {
    switch (k) {
    case ProblemKind::plate_signorini: return "plate_signorini";
    case ProblemKind::plate_bilateral: return "plate_bilateral";
    case ProblemKind::poisson_dirichlet: return "poisson_dirichlet";
    case ProblemKind::poisson_signorini: return "poisson_signorini";
    }
    return "?";
}

/// A fully described solve: problem kind, mesh, material, boundary tags,
/// loads, penalty and solver knobs, output options. Defaults reproduce the
/// unit-square plate with E=100, nu=0.5, t=0.1, g=0 and gamma0 = 1e4 D.
struct Scenario {
    ProblemKind problem = ProblemKind::plate_signorini;

    Vec2 origin{0.0, 0.0};
    Vec2 extents{1.0, 1.0};
    int nx = 32;
    int ny = 32;

    double E = 100.0;
    double nu = 0.5;
    double t = 0.1;

    /// Side tags as written in the config; "default" resolves per problem.
    std::array<std::string, 4> side_tags{"default", "default", "default", "default"};
    double gap = 0.0;
    double dirichlet_value = 0.0;

    Loads loads;

    double gamma0_scale_D = 1e4;          ///< plate: gamma0 = scale * D
    std::optional<double> gamma0_abs;     ///< absolute override (plate and poisson)
    static constexpr double kPoissonGamma0Default = 10.0;

    NewtonOptions newton;
    int contact_subdivisions = 4;
    int contact_points = 4;

    std::string out_dir = "out";
    int grid_samples = 65;
    int sweep_levels = 0;

    bool is_plate() const {
        return problem == ProblemKind::plate_signorini || problem == ProblemKind::plate_bilateral;
    }

    MaterialParams material() const { return make_material(E, nu, t); }

    double plate_gamma0() const {
        return gamma0_abs.value_or(gamma0_scale_D * material().D);
    }
    double poisson_gamma0() const { return gamma0_abs.value_or(kPoissonGamma0Default); }

    BoundarySpec plate_boundary() const {
        BoundarySpec bc;
        bc.gap = gap;
        for (int s = 0; s < 4; ++s) {
            const std::string& tag = side_tags[s];
            const std::string key = std::string("boundary.") + side_name(static_cast<Side>(s));
            if (tag == "default") {
                bc.side[s] = (problem == ProblemKind::plate_bilateral)
                                 ? SideBC::simply_supported
                                 : SideBC::signorini;
            } else if (tag == "signorini") {
                bc.side[s] = SideBC::signorini;
            } else if (tag == "simply_supported") {
                bc.side[s] = SideBC::simply_supported;
            } else if (tag == "clamped") {
                bc.side[s] = SideBC::clamped;
            } else if (tag == "free") {
                bc.side[s] = SideBC::free_edge;
            } else {
                throw ConfigError(key, "unknown plate side tag '" + tag + "'");
            }
            if (problem == ProblemKind::plate_bilateral && bc.side[s] == SideBC::signorini)
                throw ConfigError(key, "plate_bilateral does not allow signorini sides");
        }
        return bc;
    }

    PoissonBoundarySpec poisson_boundary() const {
        PoissonBoundarySpec bc;
        bc.gap = gap;
        bc.dirichlet_value = dirichlet_value;
        for (int s = 0; s < 4; ++s) {
            const std::string& tag = side_tags[s];
            const std::string key = std::string("boundary.") + side_name(static_cast<Side>(s));
            if (tag == "default") {
                bc.side[s] = (problem == ProblemKind::poisson_signorini) ? PoissonBC::signorini
                                                                         : PoissonBC::dirichlet;
            } else if (tag == "dirichlet") {
                bc.side[s] = PoissonBC::dirichlet;
            } else if (tag == "signorini") {
                bc.side[s] = PoissonBC::signorini;
            } else if (tag == "neumann") {
                bc.side[s] = PoissonBC::neumann;
            } else {
                throw ConfigError(key, "unknown poisson side tag '" + tag + "'");
            }
            if (problem == ProblemKind::poisson_dirichlet && bc.side[s] == PoissonBC::signorini)
                throw ConfigError(key, "poisson_dirichlet does not allow signorini sides");
        }
        return bc;
    }

    void validate() const {
        if (nx < 1) throw ConfigError("domain.nx", "must be >= 1");
        if (ny < 1) throw ConfigError("domain.ny", "must be >= 1");
        if (!(extents.x() > 0.0)) throw ConfigError("domain.length_x", "must be positive");
        if (!(extents.y() > 0.0)) throw ConfigError("domain.length_y", "must be positive");
        if (!(E > 0.0)) throw ConfigError("material.E", "must be positive");
        if (!(t > 0.0)) throw ConfigError("material.t", "must be positive");
        if (!(nu >= 0.0 && nu < 1.0)) throw ConfigError("material.nu", "must satisfy 0 <= nu < 1");
        if (!std::isfinite(gap)) throw ConfigError("boundary.gap", "must be finite");
        if (gamma0_abs && !(*gamma0_abs > 0.0))
            throw ConfigError("penalty.gamma0_abs", "must be positive");
        if (!(gamma0_scale_D > 0.0))
            throw ConfigError("penalty.gamma0_scale_D", "must be positive");
        if (!(newton.tol_rel > 0.0)) throw ConfigError("solver.tol_rel", "must be positive");
        if (newton.max_iters < 1) throw ConfigError("solver.max_iters", "must be >= 1");
        if (grid_samples < 2) throw ConfigError("output.grid_samples", "must be >= 2");
        if (sweep_levels < 0) throw ConfigError("output.sweep_levels", "must be >= 0");
        if (contact_subdivisions < 1)
            throw ConfigError("solver.contact_subdivisions", "must be >= 1");
        if (contact_points < 2 || contact_points > 4)
            throw ConfigError("solver.contact_points", "must be in {2,3,4}");
        for (const auto& pl : loads.points) {
            if (!std::isfinite(pl.strength) || !pl.position.allFinite())
                throw ConfigError("loads.point", "load entries must be finite");
        }
        // Resolve the side tags now so bad tags are reported before any solve.
        if (is_plate()) {
            plate_boundary();
        } else {
            poisson_boundary();
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

} // namespace detail

/// Apply one key to the scenario; `path` is "section.key" (top-level keys
/// have no dot). Unknown keys raise ConfigError.
inline void scenario_set(Scenario& sc, const std::string& path, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    const auto dot = path.find('.');
    const std::string section = dot == std::string::npos ? "" : path.substr(0, dot);
    const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);

    if (section.empty()) {
        if (key == "problem") {
            if (value == "plate_signorini") sc.problem = ProblemKind::plate_signorini;
            else if (value == "plate_bilateral") sc.problem = ProblemKind::plate_bilateral;
            else if (value == "poisson_dirichlet") sc.problem = ProblemKind::poisson_dirichlet;
            else if (value == "poisson_signorini") sc.problem = ProblemKind::poisson_signorini;
            else throw ConfigError(path, "unknown problem '" + value + "'");
            return;
        }
        throw ConfigError(path, "unknown key");
    }
    if (section == "domain") {
        if (key == "origin_x") sc.origin.x() = parse_double(path, value);
        else if (key == "origin_y") sc.origin.y() = parse_double(path, value);
        else if (key == "length_x") sc.extents.x() = parse_double(path, value);
        else if (key == "length_y") sc.extents.y() = parse_double(path, value);
        else if (key == "nx") sc.nx = parse_int(path, value);
        else if (key == "ny") sc.ny = parse_int(path, value);
        else throw ConfigError(path, "unknown key");
        return;
    }
    if (section == "material") {
        if (key == "E") sc.E = parse_double(path, value);
        else if (key == "nu") sc.nu = parse_double(path, value);
        else if (key == "t") sc.t = parse_double(path, value);
        else throw ConfigError(path, "unknown key");
        return;
    }
    if (section == "boundary") {
        if (key == "bottom" || key == "right" || key == "top" || key == "left") {
            const int idx = key == "bottom" ? 0 : key == "right" ? 1 : key == "top" ? 2 : 3;
            sc.side_tags[idx] = value;
        } else if (key == "gap") {
            sc.gap = parse_double(path, value);
        } else if (key == "dirichlet_value") {
            sc.dirichlet_value = parse_double(path, value);
        } else {
            throw ConfigError(path, "unknown key");
        }
        return;
    }
    if (section == "loads") {
        if (key == "point") {
            std::stringstream ss(value);
            double x, y, p;
            if (!(ss >> x >> y >> p) || !(ss >> std::ws).eof())
                throw ConfigError(path, "expected 'x y P', got '" + value + "'");
            sc.loads.points.push_back({Vec2(x, y), p});
        } else if (key == "uniform") {
            sc.loads.uniform = parse_double(path, value);
        } else {
            throw ConfigError(path, "unknown key");
        }
        return;
    }
    if (section == "penalty") {
        if (key == "gamma0_scale_D") sc.gamma0_scale_D = parse_double(path, value);
        else if (key == "gamma0_abs") sc.gamma0_abs = parse_double(path, value);
        else throw ConfigError(path, "unknown key");
        return;
    }
    if (section == "solver") {
        if (key == "tol_rel") sc.newton.tol_rel = parse_double(path, value);
        else if (key == "max_iters") sc.newton.max_iters = parse_int(path, value);
        else if (key == "damping") sc.newton.damping = parse_bool(path, value);
        else if (key == "contact_subdivisions") sc.contact_subdivisions = parse_int(path, value);
        else if (key == "contact_points") sc.contact_points = parse_int(path, value);
        else throw ConfigError(path, "unknown key");
        return;
    }
    if (section == "output") {
        if (key == "dir") sc.out_dir = value;
        else if (key == "grid_samples") sc.grid_samples = parse_int(path, value);
        else if (key == "sweep_levels") sc.sweep_levels = parse_int(path, value);
        else throw ConfigError(path, "unknown key");
        return;
    }
    throw ConfigError(path, "unknown section");
}

/// Parse the flat key/value config text. Unknown keys, malformed lines and
/// bad values raise ConfigError; parsing never crashes on hostile input.
inline Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno), "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
        scenario_set(sc, section.empty() ? key : section + "." + key, value);
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_scenario(f);
}

/// Everything a finished run wrote, for callers that want the numbers too.
struct RunResult {
    int exit_code = 0;
    std::optional<PlateSolution> plate;
    std::optional<PoissonSolution> poisson;
    std::optional<Eigen::VectorXd> poisson_linear_u;
    std::optional<ConvergenceTable> sweep;
};

/// Execute a scenario end to end: solve, write exports and report into
/// out_dir. Returns exit code 0 (ok) or 3 (solver failure); configuration
/// problems throw ConfigError (CLI exit 2).
inline RunResult run_scenario(const Scenario& sc, std::ostream& log, int verbosity = 1) {
    sc.validate();
    RunResult result;
    const std::filesystem::path out(sc.out_dir);
    std::filesystem::create_directories(out);

    const StructuredMesh mesh(sc.origin, sc.extents, sc.nx, sc.ny);

    const auto log_report = [&](const SolveReport& rep) {
        if (verbosity >= 1) {
            log << "status: " << solve_status_name(rep.status) << ", iterations: "
                << rep.iterations;
            if (!rep.residual_norms.empty()) log << ", final residual: " << rep.residual_norms.back();
            if (!rep.active_set_sizes.empty()) log << ", active points: " << rep.active_set_sizes.back();
            log << '\n';
        }
        if (verbosity >= 2) {
            for (std::size_t i = 0; i < rep.residual_norms.size(); ++i) {
                log << "  it " << i + 1 << ": |r| = " << rep.residual_norms[i];
                if (i < rep.active_set_sizes.size())
                    log << ", active = " << rep.active_set_sizes[i];
                log << '\n';
            }
        }
    };

    if (sc.sweep_levels > 0) {
        const SweepKind kind = sc.is_plate() ? SweepKind::plate_bilateral_sine
                                             : SweepKind::poisson_dirichlet_sine;
        const ConvergenceTable table =
            convergence_sweep(kind, sc.nx, sc.sweep_levels, sc.material(), sc.poisson_gamma0());
        write_convergence_csv((out / "convergence.csv").string(), table);
        if (verbosity >= 1) {
            log << "h,error_l2,error_energy,rate_l2,rate_energy\n";
            for (const auto& r : table.rows) {
                log << r.h << ',' << r.error_l2 << ',' << r.error_energy << ',' << r.rate_l2
                    << ',' << r.rate_energy << '\n';
            }
        }
        result.sweep = table;
        return result;
    }

    if (sc.is_plate()) {
        const MaterialParams mat = sc.material();
        const BoundarySpec bc = sc.plate_boundary();
        const PenaltyRule penalty{sc.plate_gamma0(), 3};
        PlateSolveOptions opts;
        opts.newton = sc.newton;
        opts.contact_subdivisions = sc.contact_subdivisions;
        opts.contact_points_per_interval = sc.contact_points;
        PlateSolution sol = solve_plate_signorini(mesh, mat, bc, penalty, sc.loads, opts);
        log_report(sol.report);

        nlohmann::json j = report_to_json(sol.report);
        j["problem"] = problem_name(sc.problem);
        j["gamma0"] = penalty.gamma0;
        write_report_json((out / "report.json").string(), j);
        write_nodal_csv((out / "displacement.csv").string(), mesh, sol.u);
        const ShearProfile profile = extract_shear_profile(mesh, mat, bc, penalty, sol.u);
        write_shear_csv((out / "shear_profile.csv").string(), profile);
        write_vtk_grid((out / "displacement.vtk").string(), mesh, sol.u, sc.grid_samples);
        if (bc.any_signorini())
            write_contact_csv((out / "contact.csv").string(), sol.state);
        result.exit_code = sol.report.converged() ? 0 : 3;
        result.plate = std::move(sol);
        return result;
    }

    // Poisson problems: uniform load only (point loads are outside H^-1 for
    // the scalar problem and are not offered).
    if (!sc.loads.points.empty())
        throw ConfigError("loads.point", "poisson problems accept only loads.uniform");
    const double q = sc.loads.uniform;
    const ScalarField f = [q](Vec2) { return q; };
    const PoissonBoundarySpec bc = sc.poisson_boundary();
    if (sc.problem == ProblemKind::poisson_dirichlet) {
        const PoissonLinearResult res =
            solve_poisson_dirichlet_nitsche(mesh, f, sc.dirichlet_value, sc.poisson_gamma0(), bc);
        nlohmann::json j;
        j["problem"] = problem_name(sc.problem);
        j["ok"] = res.ok;
        j["positive_definite"] = res.positive_definite;
        j["linear_residual"] = res.stats.residual_rel;
        write_report_json((out / "report.json").string(), j);
        if (verbosity >= 1)
            log << "poisson dirichlet: ok=" << res.ok << " spd=" << res.positive_definite
                << " linear residual=" << res.stats.residual_rel << '\n';
        if (res.ok) write_poisson_csv((out / "solution.csv").string(), mesh, res.u);
        result.exit_code = res.ok ? 0 : 3;
        result.poisson_linear_u = res.u;
        return result;
    }

    PoissonSolveOptions popts;
    popts.newton = sc.newton;
    popts.subdivisions = sc.contact_subdivisions;
    popts.points_per_interval = sc.contact_points;
    PoissonSolution sol =
        solve_poisson_signorini_nitsche(mesh, f, bc, sc.poisson_gamma0(), popts);
    log_report(sol.report);
    nlohmann::json j = report_to_json(sol.report);
    j["problem"] = problem_name(sc.problem);
    j["gamma0"] = sc.poisson_gamma0();
    write_report_json((out / "report.json").string(), j);
    write_poisson_csv((out / "solution.csv").string(), mesh, sol.u);
    write_contact_csv((out / "contact.csv").string(), sol.state);
    result.exit_code = sol.report.converged() ? 0 : 3;
    result.poisson = std::move(sol);
    return result;
}

} // namespace platesig
