#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "platesig/bfs.hpp"
#include "platesig/mesh.hpp"
#include "platesig/newton.hpp"
#include "platesig/postprocess.hpp"

namespace platesig {

/// Shortest round-trippable decimal form: 17 significant digits.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

} // namespace detail

/// Nodal CSV: x, y, u, u_x, u_y, u_xy, one row per mesh node in node order.
inline void write_nodal_csv(const std::string& path, const StructuredMesh& mesh,
                            const Eigen::VectorXd& u) {
    auto f = detail::open_out(path);
    f << "x,y,u,u_x,u_y,u_xy\n";
    for (int n = 0; n < mesh.node_count(); ++n) {
        const Vec2 p = mesh.node_coord(n);
        f << fmt17(p.x()) << ',' << fmt17(p.y());
        for (int t = 0; t < kDofsPerNode; ++t)
            f << ',' << fmt17(u[dof_index(n, static_cast<DofType>(t))]);
        f << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

/// Parse a nodal CSV back into a full DOF vector (row order must match the
/// mesh node order).
inline Eigen::VectorXd read_nodal_csv(const std::string& path, const StructuredMesh& mesh) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    std::getline(f, line); // header
    Eigen::VectorXd u(kDofsPerNode * mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (!std::getline(f, line)) throw std::runtime_error("truncated nodal csv: " + path);
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 6) throw std::runtime_error("bad nodal csv row: " + path);
        for (int t = 0; t < kDofsPerNode; ++t)
            u[dof_index(n, static_cast<DofType>(t))] = vals[2 + t];
    }
    return u;
}

/// Shear-profile CSV: s, x, y, T, lambda, active, one row per boundary edge
/// midpoint in counterclockwise order.
inline void write_shear_csv(const std::string& path, const ShearProfile& profile) {
    auto f = detail::open_out(path);
    f << "s,x,y,T,lambda,active\n";
    for (const auto& smp : profile.samples) {
        f << fmt17(smp.s) << ',' << fmt17(smp.position.x()) << ',' << fmt17(smp.position.y())
          << ',' << fmt17(smp.shear) << ',' << fmt17(smp.lambda) << ',' << (smp.active ? 1 : 0)
          << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

/// Legacy VTK STRUCTURED_POINTS export of the displacement sampled on an
/// n x n lattice covering the domain (see README for the header layout).
inline void write_vtk_grid(const std::string& path, const StructuredMesh& mesh,
                           const Eigen::VectorXd& u, int n) {
    if (n < 2) throw std::invalid_argument("grid export: need at least 2 samples per axis");
    auto f = detail::open_out(path);
    const Vec2 o = mesh.origin();
    const double dx = mesh.extents().x() / (n - 1);
    const double dy = mesh.extents().y() / (n - 1);
    f << "# vtk DataFile Version 3.0\n";
    f << "plate deflection\n";
    f << "ASCII\n";
    f << "DATASET STRUCTURED_POINTS\n";
    f << "DIMENSIONS " << n << ' ' << n << " 1\n";
    f << "ORIGIN " << fmt17(o.x()) << ' ' << fmt17(o.y()) << " 0\n";
    f << "SPACING " << fmt17(dx) << ' ' << fmt17(dy) << " 1\n";
    f << "POINT_DATA " << n * n << '\n';
    f << "SCALARS deflection double 1\n";
    f << "LOOKUP_TABLE default\n";
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Vec2 p{o.x() + i * dx, o.y() + j * dy};
            f << fmt17(eval_field(mesh, u, p).value) << '\n';
        }
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

/// Poisson nodal CSV: x, y, u.
inline void write_poisson_csv(const std::string& path, const StructuredMesh& mesh,
                              const Eigen::VectorXd& u) {
    auto f = detail::open_out(path);
    f << "x,y,u\n";
    for (int n = 0; n < mesh.node_count(); ++n) {
        const Vec2 p = mesh.node_coord(n);
        f << fmt17(p.x()) << ',' << fmt17(p.y()) << ',' << fmt17(u[n]) << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

/// Contact-state CSV at boundary quadrature points: x, y, lambda, u_minus_g,
/// active.
inline void write_contact_csv(const std::string& path, const ContactState& st) {
    auto f = detail::open_out(path);
    f << "x,y,lambda,u_minus_g,active\n";
    for (int i = 0; i < st.lambda.size(); ++i) {
        f << fmt17(st.positions_x[i]) << ',' << fmt17(st.positions_y[i]) << ','
          << fmt17(st.lambda[i]) << ',' << fmt17(st.constraint_values[i]) << ','
          << (st.active[i] ? 1 : 0) << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json report_to_json(const SolveReport& rep) {
    nlohmann::json j;
    j["status"] = solve_status_name(rep.status);
    j["converged"] = rep.converged();
    j["iterations"] = rep.iterations;
    j["tol_abs"] = rep.tol_abs;
    j["residual_norms"] = rep.residual_norms;
    j["active_set_sizes"] = rep.active_set_sizes;
    j["linear_residuals"] = rep.linear_residuals;
    j["damping_halvings"] = rep.halvings;
    return j;
}

inline void write_report_json(const std::string& path, const nlohmann::json& j) {
    auto f = detail::open_out(path);
    f << j.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
    auto f = detail::open_out(path);
    f << "h,error_l2,error_energy,rate_l2,rate_energy\n";
    for (const auto& r : table.rows) {
        f << fmt17(r.h) << ',' << fmt17(r.error_l2) << ',' << fmt17(r.error_energy) << ','
          << fmt17(r.rate_l2) << ',' << fmt17(r.rate_energy) << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

} // namespace platesig
