#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace adsflow {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Small dense tensors with runtime dimension n <= 4 stay on the stack.
using MatN = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using VecN = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

// Precondition or tag violations on module boundaries.
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// T1, T2 (together with the base point) do not span a rank-3 subspace.
struct DegenerateFrame : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Orthogonal complement of the frame carries no timelike direction.
struct NoTimelikeCompletion : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Vector cannot be scaled onto the quadric <V,V> = -1/kappa.
struct NotProjectable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Variance { Covariant, Contravariant, Mixed };

// Symmetric 2-tensor in dimension n <= 4 with an explicit variance tag.
struct SymTensor2 {
  MatN m;
  Variance var = Variance::Covariant;

  int n() const { return static_cast<int>(m.rows()); }
};

inline bool is_symmetric(const MatN& m, double tol = 1e-14) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <=
         tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

inline bool is_positive_definite(const MatN& m) {
  Eigen::LLT<MatN> llt(m);
  return llt.info() == Eigen::Success;
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace adsflow
