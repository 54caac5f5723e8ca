#include "metatomo/errors.hpp"
#include "metatomo/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <functional>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace metatomo {

namespace {

// Eigenvalues at rounding level are zeros of a rank-deficient matrix;
// their square roots would otherwise leak ~1e-8 into fidelities.
Eigen::VectorXd rounding_clipped(const Eigen::VectorXd& lambda) {
  const double floor = 1e-14 * std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
  return lambda.unaryExpr([floor](double x) { return x > floor ? x : 0.0; });
}

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::VectorXd root = rounding_clipped(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

void require_unit_trace(const DensityMatrix& rho, const char* what) {
  if (std::abs(rho.trace() - 1.0) > 1e-8) {
    throw InvalidArgument(std::string(what) + " requires a trace-normalized density matrix");
  }
}

}  // namespace

double purity(const DensityMatrix& rho) {
  const double tr = rho.trace();
  if (!(std::abs(tr) > 0.0)) throw InvalidArgument("purity is undefined for zero trace");
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().squaredNorm() / (tr * tr);
}

double concurrence(const DensityMatrix& rho) {
  if (rho.n_photons() != 2) throw InvalidArgument("concurrence is defined for two-photon states");
  require_unit_trace(rho, "concurrence");
  const Eigen::Matrix4cd yy = Eigen::kroneckerProduct(pauli(3), pauli(3));
  const Eigen::Matrix4cd r = rho.matrix();
  const Eigen::Matrix4cd flipped = yy * r.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r * flipped, false);
  std::array<double, 4> lambda{};
  for (int i = 0; i < 4; ++i) lambda[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dimension() != sigma.dimension()) {
    throw DimensionMismatch("fidelity needs density matrices of equal dimension");
  }
  require_unit_trace(rho, "fidelity");
  require_unit_trace(sigma, "fidelity");
  const Eigen::MatrixXcd root = psd_sqrt(rho.matrix());
  Eigen::MatrixXcd inner = root * sigma.matrix() * root;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  const double tr = rounding_clipped(es.eigenvalues()).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace metatomo
