#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mvd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using CVec = Eigen::Ref<const Eigen::VectorXd>;
using Vec = Eigen::Ref<Eigen::VectorXd>;

namespace tol {
inline constexpr double membership = 1e-10;
inline constexpr double cut_locus = 1e-12;
inline constexpr double conjugate_sin = 1e-8;
inline constexpr double spd_log_floor = 1e-14;
inline constexpr double spd_project_shift = 1e-10;
}  // namespace tol

enum class ManifoldKind { Circle, Sphere, Rotations, Spd };

// Identifies a manifold geometry; param is d for spheres and r for SPD(r).
struct ManifoldKey {
  ManifoldKind kind{ManifoldKind::Circle};
  int param{0};
  friend bool operator==(const ManifoldKey&, const ManifoldKey&) = default;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ManifoldMismatchError final : GeometryError {
  using GeometryError::GeometryError;
};
struct CutLocusError final : GeometryError {
  using GeometryError::GeometryError;
};
struct ConjugatePointError final : GeometryError {
  using GeometryError::GeometryError;
};
struct AmbiguousMidpointError final : GeometryError {
  using GeometryError::GeometryError;
};
struct MembershipError final : GeometryError {
  using GeometryError::GeometryError;
};
struct NotLieGroupError final : GeometryError {
  using GeometryError::GeometryError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point on a manifold in its storage representation (angle, unit vector,
// unit quaternion, packed symmetric matrix).
struct ManifoldPoint {
  VectorXd coords;
  ManifoldKey manifold;
};

// Tangent vector carrying its base point, same storage layout as coords.
struct TangentVector {
  ManifoldPoint base;
  VectorXd vec;
};

}  // namespace mvd
