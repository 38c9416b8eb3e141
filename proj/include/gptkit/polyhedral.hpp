#pragma once

// Double-description enumeration of extreme rays of polyhedral cones, and
// the vertex/facet conversions built on it.

#include <Eigen/Dense>

#include <vector>

namespace gptkit::polyhedral {

/// Sup-norm distance under which two enumerated points are the same.
inline constexpr double kDedupTolerance = 1e-8;

/// Extreme rays of the pointed cone {x : A x >= 0}, one per row constraint
/// set. A must have full column rank (otherwise the cone has a lineality
/// space and InvalidArgument is thrown). Rays are scaled to unit sup-norm.
std::vector<Eigen::VectorXd> extreme_rays(const Eigen::MatrixXd& constraints);

/// Vertices of {x : A x >= 0, u . x = 1}. Every extreme ray of the cone must
/// have u . r > 0 (bounded section), else InvalidArgument.
std::vector<Eigen::VectorXd> section_vertices(const Eigen::MatrixXd& constraints,
                                              const Eigen::VectorXd& unit);

/// Extreme rays of the dual of cone(columns of generators), i.e. the facet
/// normals of that cone.
std::vector<Eigen::VectorXd> dual_cone_rays(const Eigen::MatrixXd& generators);

/// Removes points within kDedupTolerance (sup-norm) of an earlier point.
std::vector<Eigen::VectorXd> deduplicate(const std::vector<Eigen::VectorXd>& points);

Eigen::MatrixXd to_columns(const std::vector<Eigen::VectorXd>& points);

}  // namespace gptkit::polyhedral
