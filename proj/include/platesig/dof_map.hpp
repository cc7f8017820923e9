#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "platesig/mesh.hpp"

namespace platesig {

/// Nodal degrees of freedom of the BFS element: value, both first
/// derivatives, and the mixed second derivative.
enum class DofType : int { value = 0, d_x = 1, d_y = 2, d_xy = 3 };

inline constexpr int kDofsPerNode = 4;
inline constexpr int kElemDofs = 16;

inline int dof_index(int node, DofType t) {
    return kDofsPerNode * node + static_cast<int>(t);
}

/// Node -> global DOF indices plus the constrained set for strongly imposed
/// boundary conditions. Free DOFs are numbered consecutively in ascending
/// global order.
class DofMap {
public:
    explicit DofMap(const StructuredMesh& mesh)
        : total_(kDofsPerNode * mesh.node_count()), constrained_(total_, false) {}

    int total_dofs() const { return total_; }

    void constrain(int node, DofType t) { constrained_[dof_index(node, t)] = true; }
    bool is_constrained(int dof) const { return constrained_[dof]; }

    /// Number the free DOFs; call after all constraints are set.
    void finalize() {
        free_of_global_.assign(total_, -1);
        global_of_free_.clear();
        for (int d = 0; d < total_; ++d) {
            if (!constrained_[d]) {
                free_of_global_[d] = static_cast<int>(global_of_free_.size());
                global_of_free_.push_back(d);
            }
        }
        finalized_ = true;
    }

    int free_count() const {
        require_finalized();
        return static_cast<int>(global_of_free_.size());
    }
    /// -1 for constrained DOFs.
    int free_index(int global_dof) const {
        require_finalized();
        return free_of_global_[global_dof];
    }
    int global_index(int free_dof) const {
        require_finalized();
        return global_of_free_[free_dof];
    }

    int constrained_count() const { return total_ - free_count(); }

    /// Scatter a free-DOF vector into a full vector (constrained entries 0).
    Eigen::VectorXd expand(const Eigen::VectorXd& free_values) const {
        require_finalized();
        Eigen::VectorXd full = Eigen::VectorXd::Zero(total_);
        for (int k = 0; k < free_count(); ++k) full[global_of_free_[k]] = free_values[k];
        return full;
    }

    /// Gather the free entries of a full vector.
    Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& full) const {
        require_finalized();
        Eigen::VectorXd out(free_count());
        for (int k = 0; k < free_count(); ++k) out[k] = full[global_of_free_[k]];
        return out;
    }

private:
    void require_finalized() const {
        if (!finalized_) throw std::logic_error("DofMap::finalize() has not been called");
    }

    int total_;
    std::vector<bool> constrained_;
    std::vector<int> free_of_global_;
    std::vector<int> global_of_free_;
    bool finalized_ = false;
};

/// Strong boundary conditions per side tag.
///
/// simply_supported constrains the deflection and the tangential derivative
/// along the side (M_nn = 0 stays natural, nothing is assembled for it);
/// clamped constrains all four nodal DOFs. Signorini and free sides leave
/// every DOF free.
inline DofMap apply_strong_bcs(const StructuredMesh& mesh, const BoundarySpec& spec) {
    DofMap dofs(mesh);
    for (int s = 0; s < 4; ++s) {
        const Side side = static_cast<Side>(s);
        const SideBC bc = spec.tag(side);
        if (bc != SideBC::simply_supported && bc != SideBC::clamped) continue;
        const bool horizontal = (side == Side::bottom || side == Side::top);
        const DofType tangential = horizontal ? DofType::d_x : DofType::d_y;
        const DofType normal = horizontal ? DofType::d_y : DofType::d_x;
        for (int node : mesh.side_nodes(side)) {
            dofs.constrain(node, DofType::value);
            dofs.constrain(node, tangential);
            if (bc == SideBC::clamped) {
                dofs.constrain(node, normal);
                dofs.constrain(node, DofType::d_xy);
            }
        }
    }
    dofs.finalize();
    return dofs;
}

} // namespace platesig
