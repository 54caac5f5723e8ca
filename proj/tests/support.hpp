#pragma once

// Random generators and independent reference computations shared by the
// test binaries. Oracles here deliberately avoid the library's own helpers
// so that a shared bug cannot cancel out.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "metatomo/polarization.hpp"
#include "metatomo/simulator.hpp"
#include "metatomo/transfer_matrix.hpp"

namespace testing_support {

using metatomo::Complex;
using metatomo::DensityMatrix;
using metatomo::JonesVector;
using metatomo::kPi;
using metatomo::TransferMatrix;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  Complex cnormal() { return {normal(), normal()}; }
  std::uint64_t bits() { return eng_(); }

  Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd g(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) g(r, c) = cnormal();
    return g;
  }

  JonesVector jones() { return JonesVector(cnormal(), cnormal()); }
  JonesVector unit_jones() { return jones().normalized(); }

  Eigen::Matrix2cd unitary2() {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre(2, 2));
    return qr.householderQ() * Eigen::Matrix2cd::Identity();
  }

  /// Random physical state of the given rank (0 means full rank).
  DensityMatrix state(int n_photons, int rank = 0) {
    const Eigen::Index d = Eigen::Index{1} << n_photons;
    const Eigen::Index k = rank > 0 ? rank : d;
    const Eigen::MatrixXcd g = ginibre(d, k);
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(n_photons, rho);
  }

  /// Random physical state commuting with every slot permutation.
  DensityMatrix symmetric_state(int n_photons, int rank = 0) {
    const DensityMatrix raw = state(n_photons, rank);
    return DensityMatrix(n_photons, metatomo::symmetrize_slots(raw.matrix(), n_photons));
  }

  TransferMatrix transfer(int ports) { return TransferMatrix(ginibre(ports, 2)); }

  Eigen::Vector3d direction() {
    Eigen::Vector3d v(normal(), normal(), normal());
    return v.normalized();
  }

 private:
  std::mt19937_64 eng_;
};

/// Stokes 3-vector straight from the amplitudes: |h|^2 - |v|^2, 2 Re(h* v),
/// 2 Im(h* v), divided by the intensity.
inline Eigen::Vector3d stokes_by_hand(const JonesVector& u) {
  const Complex h = u.h();
  const Complex v = u.v();
  const double s0 = std::norm(h) + std::norm(v);
  const Complex x = std::conj(h) * v;
  return Eigen::Vector3d(std::norm(h) - std::norm(v), 2.0 * x.real(), 2.0 * x.imag()) / s0;
}

inline double purity_by_hand(const Eigen::MatrixXcd& rho) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j) s += std::norm(rho(i, j));
  const double tr = rho.trace().real();
  return s / (tr * tr);
}

inline Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const double floor = 1e-14 * es.eigenvalues().cwiseAbs().maxCoeff();
  const Eigen::VectorXd s = es.eigenvalues().unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

/// Fidelity as the squared nuclear norm of sqrt(rho) sqrt(sigma).
inline double fidelity_by_svd(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  const Eigen::MatrixXcd m = psd_sqrt(rho) * psd_sqrt(sigma);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const double s = svd.singularValues().sum();
  return s * s;
}

/// Concurrence of an X-shaped two-qubit state in closed form.
inline double x_state_concurrence(const Eigen::Matrix4cd& r) {
  const double a = std::abs(r(1, 2)) - std::sqrt(r(0, 0).real() * r(3, 3).real());
  const double b = std::abs(r(0, 3)) - std::sqrt(r(1, 1).real() * r(2, 2).real());
  return 2.0 * std::max({0.0, a, b});
}

/// Amplitude of the product outcome where slot i leaves through port
/// ports[i]: prod_i row_{ports[i]}[bit_i], slot 0 the most significant bit.
inline Complex outcome_amplitude(const TransferMatrix& t, const std::vector<int>& ports, Eigen::Index index) {
  const int n = static_cast<int>(ports.size());
  Complex amp = 1.0;
  for (int i = 0; i < n; ++i) {
    const int bit = static_cast<int>((index >> (n - 1 - i)) & 1);
    amp *= t.row(ports[static_cast<std::size_t>(i)])(bit);
  }
  return amp;
}

/// Click coincidence as a sum over the photon orderings of the per-ordering
/// detection probability <outcome_sigma| rho |outcome_sigma>.
inline double coincidence_by_orderings(const TransferMatrix& t, const Eigen::MatrixXcd& rho, std::vector<int> ports) {
  std::sort(ports.begin(), ports.end());
  const Eigen::Index d = rho.rows();
  double total = 0.0;
  do {
    Eigen::VectorXcd phi(d);
    for (Eigen::Index k = 0; k < d; ++k) phi(k) = std::conj(outcome_amplitude(t, ports, k));
    total += (phi.adjoint() * rho * phi)(0, 0).real();
  } while (std::next_permutation(ports.begin(), ports.end()));
  return total;
}

/// SWAP rho SWAP for two photons.
inline Eigen::MatrixXcd swap_conjugate(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(0, 0) = p(1, 2) = p(2, 1) = p(3, 3) = 1.0;
  return p * rho * p;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace testing_support
