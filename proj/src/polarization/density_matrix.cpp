#include "metatomo/errors.hpp"
#include "metatomo/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>
#include <unsupported/Eigen/KroneckerProduct>

namespace metatomo {

namespace {

Eigen::Index slot_dimension(int n_photons) {
  if (n_photons < 1 || n_photons > 12) {
    throw InvalidArgument("photon number must be in 1..12, got " + std::to_string(n_photons));
  }
  return Eigen::Index{1} << n_photons;
}

// Index of the basis state obtained by moving slot perm[k] of `idx` into
// slot k. Slot 0 is the most significant bit.
Eigen::Index permuted_index(Eigen::Index idx, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Eigen::Index out = 0;
  for (int k = 0; k < n; ++k) {
    const Eigen::Index bit = (idx >> (n - 1 - perm[static_cast<std::size_t>(k)])) & 1;
    out |= bit << (n - 1 - k);
  }
  return out;
}

Eigen::MatrixXcd conjugate_by_permutation(const Eigen::MatrixXcd& rho, const std::vector<int>& perm) {
  const Eigen::Index d = rho.rows();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) map[static_cast<std::size_t>(i)] = permuted_index(i, perm);
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = rho(i, j);
    }
  }
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(int n_photons, Eigen::MatrixXcd entries)
    : n_photons_(n_photons), entries_(std::move(entries)) {
  const Eigen::Index d = slot_dimension(n_photons);
  if (entries_.rows() != d || entries_.cols() != d) {
    throw DimensionMismatch("density matrix for " + std::to_string(n_photons) + " photon(s) must be " +
                            std::to_string(d) + "x" + std::to_string(d) + ", got " +
                            std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * scale) {
    throw InvalidArgument("density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  // Remove rounding asymmetry so downstream eigen-solvers see an exact Hermitian matrix.
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
}

DensityMatrix DensityMatrix::projector(const JonesVector& psi) {
  const Eigen::Vector2cd u = psi.normalized().amplitudes();
  return DensityMatrix(1, u * u.adjoint());
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const Eigen::Index d = psi.size();
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  if (n < 1 || (Eigen::Index{1} << n) != d) {
    throw DimensionMismatch("state vector length must be a power of two >= 2");
  }
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidArgument("zero state vector");
  const Eigen::VectorXcd u = psi / norm;
  return DensityMatrix(n, u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_photons) {
  const Eigen::Index d = slot_dimension(n_photons);
  return DensityMatrix(n_photons, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

bool DensityMatrix::trace_normalized(double tol) const { return std::abs(trace() - 1.0) < tol; }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues()(0); }

bool DensityMatrix::is_physical(double tol) const {
  const double tr = trace();
  return tr > 0.0 && min_eigenvalue() >= -tol * tr;
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw InvalidArgument("cannot normalize a density matrix with nonpositive trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_ / tr);
  Eigen::VectorXd lambda = es.eigenvalues();
  if (lambda(0) < -kPsdTolerance) {
    throw InvalidArgument("density matrix has a negative eigenvalue " + std::to_string(lambda(0)));
  }
  lambda = lambda.cwiseMax(0.0);
  lambda /= lambda.sum();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  return DensityMatrix(n_photons_, v * lambda.asDiagonal() * v.adjoint());
}

DensityMatrix DensityMatrix::projected_to_physical() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_);
  Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  const double total = lambda.sum();
  if (!(total > 0.0)) return maximally_mixed(n_photons_);
  lambda /= total;
  const Eigen::MatrixXcd& v = es.eigenvectors();
  return DensityMatrix(n_photons_, v * lambda.asDiagonal() * v.adjoint());
}

StokesVector stokes_from_density(const DensityMatrix& rho) {
  if (rho.n_photons() != 1) {
    throw InvalidArgument("Stokes decomposition needs a single-photon density matrix");
  }
  Eigen::Vector4d s;
  for (int k = 0; k < 4; ++k) s(k) = 0.5 * (rho.matrix() * pauli(k)).trace().real();
  return StokesVector::from_vector(s);
}

DensityMatrix density_from_stokes(const StokesVector& s) {
  if (!s.is_physical()) {
    spdlog::warn("unphysical Stokes vector: |S123| = {:.6g} exceeds S0 = {:.6g}", s.polarized_norm(), s.s0);
  }
  const Eigen::Matrix2cd m = s.s0 * pauli(0) + s.s1 * pauli(1) + s.s2 * pauli(2) + s.s3 * pauli(3);
  return DensityMatrix(1, m);
}

Eigen::MatrixXcd tensor_power(const Eigen::MatrixXcd& t, int n, Eigen::Index max_rows) {
  if (n < 1) throw InvalidArgument("tensor power needs N >= 1");
  double rows = 1.0;
  for (int i = 0; i < n; ++i) rows *= static_cast<double>(t.rows());
  if (rows > static_cast<double>(max_rows)) {
    throw InvalidArgument("tensor power would have " + std::to_string(static_cast<long long>(rows)) +
                          " rows, above the cap of " + std::to_string(max_rows));
  }
  Eigen::MatrixXcd out = t;
  for (int i = 1; i < n; ++i) {
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(out, t);
    out = std::move(next);
  }
  return out;
}

std::vector<std::vector<int>> slot_permutations(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return all;
}

Eigen::MatrixXcd slot_permutation_operator(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  const Eigen::Index d = slot_dimension(n);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) p(permuted_index(i, perm), i) = 1.0;
  return p;
}

Eigen::MatrixXcd symmetrize_slots(const Eigen::MatrixXcd& rho, int n_photons) {
  if (n_photons > 8) throw InvalidArgument("slot symmetrization is limited to N <= 8");
  if (n_photons == 1) return rho;
  const auto perms = slot_permutations(n_photons);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& perm : perms) acc += conjugate_by_permutation(rho, perm);
  return acc / static_cast<double>(perms.size());
}

SymmetryCheck symmetric_support_check(const DensityMatrix& rho, double tol) {
  SymmetryCheck check;
  const int n = rho.n_photons();
  // Adjacent transpositions generate the symmetric group.
  for (int k = 0; k + 1 < n; ++k) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(k + 1)]);
    const double v = (conjugate_by_permutation(rho.matrix(), perm) - rho.matrix()).cwiseAbs().maxCoeff();
    check.max_violation = std::max(check.max_violation, v);
  }
  check.symmetric = check.max_violation <= tol;
  return check;
}

DensityMatrix cross_polarized_pair(double eta) {
  if (!(std::abs(eta) <= 1.0)) throw InvalidArgument("spectral overlap must satisfy |eta| <= 1");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(1, 1) = m(2, 2) = 0.5;
  m(1, 2) = m(2, 1) = 0.5 * eta;
  return DensityMatrix(2, std::move(m));
}

}  // namespace metatomo
