#pragma once

#include <vector>

#include "flni/graph.hpp"

namespace flni {

/// Grouping tolerance, relative to max(1, max|beta|). The dual solver pools
/// approximately, so exact equality never fires; group counts (and hence df)
/// depend on this value, which is why it is a visible parameter.
inline constexpr double kDefaultGroupTolerance = 1e-6;

/// Partition of the vertices into fused groups: connected components of the
/// subgraph keeping exactly the edges with |beta_source - beta_target| below
/// the scaled tolerance. Groups are listed by smallest member, members
/// ascending; a group is flagged zero when every member is below the scaled
/// tolerance in absolute value.
struct GroupPartition {
    std::vector<std::vector<int>> groups;
    std::vector<bool> is_zero;  // parallel to groups
    double equality_tolerance = kDefaultGroupTolerance;

    int n_groups() const { return static_cast<int>(groups.size()); }
    int n_nonzero_groups() const;
};

GroupPartition fused_groups(const std::vector<double>& beta, const OrderGraph& g,
                            double tol = kDefaultGroupTolerance);

}  // namespace flni
