#pragma once
// Dense symmetric eigen-decomposition plus the small derived kit the rest of
// the library leans on: PSD square roots, pseudoinverses, numeric rank, and
// Gram factor extraction. Everything funnels through Eigen.

#include <Eigen/Dense>
#include <stdexcept>

namespace rankshadow {

inline constexpr double kDefaultTol = 1e-8;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool is_symmetric(const Matrix& m, double tol = 1e-9) {
  if (m.rows() != m.cols()) return false;
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

struct EigSym {
  Vector values;   // ascending
  Matrix vectors;  // columns, orthonormal, values(i) belongs to vectors.col(i)
};

inline EigSym eig_sym(const Matrix& m) {
  if (!is_symmetric(m)) throw std::invalid_argument("eig_sym: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_sym: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Numeric rank: singular values above tol * max(1, sigma_max).
inline int rank_eps(const Matrix& m, double tol = kDefaultTol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cut = tol * std::max(1.0, sv(0));
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

// Symmetric PSD square root. Eigenvalues in [-tol*scale, tol*scale] are
// clamped to zero so rounding noise cannot leak sqrt(eps)-sized directions
// into the result; anything more negative is a hard failure.
inline Matrix psd_sqrt(const Matrix& m, double tol = kDefaultTol) {
  auto eig = eig_sym(m);
  const double scale = 1.0 + (eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0);
  Vector roots = eig.values;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (roots(i) < -tol * scale)
      throw std::invalid_argument("psd_sqrt: matrix not positive semidefinite");
    roots(i) = roots(i) > tol * scale ? std::sqrt(roots(i)) : 0.0;
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
}

// Moore-Penrose pseudoinverse of a symmetric matrix: invert eigenvalues with
// |lambda| > tol * max(1, |lambda|_max), zero the rest.
inline Matrix pinv_sym(const Matrix& m, double tol = kDefaultTol) {
  auto eig = eig_sym(m);
  const double top = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double cut = tol * std::max(1.0, top);
  Vector inv = eig.values;
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv(i) = std::abs(inv(i)) > cut ? 1.0 / inv(i) : 0.0;
  return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

// Gram factor of a PSD matrix: W with m = W * W^T and cols(W) = rank_eps(m).
// Small negative eigenvalues are clamped; genuinely negative ones reject.
inline Matrix full_rank_decompose(const Matrix& m, double tol = kDefaultTol) {
  auto eig = eig_sym(m);
  const double top = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double scale = 1.0 + top;
  const double cut = tol * std::max(1.0, top);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) < -tol * scale)
      throw std::invalid_argument("full_rank_decompose: matrix not positive semidefinite");
    if (eig.values(i) > cut) keep.push_back(i);
  }
  Matrix w(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c)
    w.col(static_cast<Eigen::Index>(c)) =
        eig.vectors.col(keep[keep.size() - 1 - c]) * std::sqrt(eig.values(keep[keep.size() - 1 - c]));
  return w;
}

inline bool is_psd(const Matrix& m, double tol = kDefaultTol) {
  if (!is_symmetric(m)) return false;
  auto eig = eig_sym(m);
  if (eig.values.size() == 0) return true;
  const double scale = 1.0 + eig.values.cwiseAbs().maxCoeff();
  return eig.values(0) >= -tol * scale;
}

// Nearest PSD matrix of rank <= r (clamp negatives, keep the top r eigenvalues).
inline Matrix psd_truncate(const Matrix& m, int r) {
  auto eig = eig_sym(m);
  const Eigen::Index n = eig.values.size();
  Vector kept = Vector::Zero(n);
  // values are ascending; walk the largest r entries.
  for (Eigen::Index i = n - 1; i >= 0 && (n - 1 - i) < r; --i)
    kept(i) = std::max(0.0, eig.values(i));
  return eig.vectors * kept.asDiagonal() * eig.vectors.transpose();
}

}  // namespace rankshadow
