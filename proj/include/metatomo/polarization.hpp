#pragma once

// Polarization algebra: Jones vectors and matrices, Stokes decomposition,
// N-photon density matrices and the usual state-quality metrics.
//
// Pauli ordering used throughout (index k of a Stokes vector):
//   0 -> I, 1 -> sigma_z, 2 -> sigma_x, 3 -> sigma_y
// so that rho = S0 I + S1 sigma_z + S2 sigma_x + S3 sigma_y.
//
// Multi-photon operators live in the ordered-slot basis; for two photons the
// basis order is |HH>, |HV>, |VH>, |VV> (slot 0 is the most significant bit).

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace metatomo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Eigenvalues above -kPsdTolerance are treated as rounding noise.
inline constexpr double kPsdTolerance = 1e-10;

/// Default cap on the row count produced by tensor_power.
inline constexpr Eigen::Index kDefaultTensorRowCap = 4096;

class JonesVector {
 public:
  JonesVector() = default;
  JonesVector(Complex h, Complex v) : amp_(h, v) {}
  explicit JonesVector(const Eigen::Vector2cd& amp) : amp_(amp) {}

  static JonesVector horizontal() { return {1.0, 0.0}; }
  static JonesVector vertical() { return {0.0, 1.0}; }
  static JonesVector diagonal();
  static JonesVector antidiagonal();
  /// Eigenvector of sigma_y with eigenvalue +1: (|H> + i|V>)/sqrt(2).
  static JonesVector circular_plus();
  static JonesVector circular_minus();

  /// Pure state whose Poincare 3-vector (S1, S2, S3 in the ordering above)
  /// points along `direction`. The direction need not be normalized.
  static JonesVector from_poincare(const Eigen::Vector3d& direction);

  Complex h() const { return amp_(0); }
  Complex v() const { return amp_(1); }
  const Eigen::Vector2cd& amplitudes() const { return amp_; }

  double norm_squared() const { return amp_.squaredNorm(); }
  JonesVector normalized() const;

  /// Unit Poincare 3-vector (S1, S2, S3)/S0.
  Eigen::Vector3d poincare() const;

 private:
  Eigen::Vector2cd amp_ = Eigen::Vector2cd::Zero();
};

/// <a|b>
Complex inner(const JonesVector& a, const JonesVector& b);

/// |<a|b>| / (||a|| ||b||); equals 1 iff a and b differ by a global phase.
double overlap_modulus(const JonesVector& a, const JonesVector& b);

/// Equality up to a unit-modulus scalar.
bool same_ray(const JonesVector& a, const JonesVector& b, double tol = 1e-12);

class JonesMatrix {
 public:
  JonesMatrix() : m_(Eigen::Matrix2cd::Identity()) {}
  explicit JonesMatrix(const Eigen::Matrix2cd& m) : m_(m) {}

  const Eigen::Matrix2cd& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  JonesVector operator*(const JonesVector& v) const { return JonesVector(m_ * v.amplitudes()); }
  JonesMatrix operator*(const JonesMatrix& o) const { return JonesMatrix(m_ * o.m_); }
  JonesMatrix adjoint() const { return JonesMatrix(m_.adjoint()); }

  /// max-abs entry of U^dagger U - I
  double unitarity_defect() const;
  bool is_unitary(double tol = 1e-12) const { return unitarity_defect() < tol; }

 private:
  Eigen::Matrix2cd m_;
};

/// R(theta) diag(e^{i phi1}, e^{i phi2}) R(-theta): a birefringent element
/// with fast axis at angle `theta` from horizontal.
JonesMatrix meta_atom_matrix(double theta, double phi1, double phi2);

/// Orthogonal elliptical pair parameterized by (alpha, beta).
struct EllipticalPair {
  JonesVector state;       ///< [cos a, e^{ib} sin a]
  JonesVector orthogonal;  ///< [-sin a, e^{ib} cos a]
};

EllipticalPair elliptical_pair(double alpha, double beta);

struct StokesVector {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;

  Eigen::Vector4d as_vector() const { return {s0, s1, s2, s3}; }
  static StokesVector from_vector(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

  /// sqrt(S1^2 + S2^2 + S3^2)
  double polarized_norm() const;
  bool is_physical(double tol = 1e-12) const { return polarized_norm() <= s0 + tol; }
};

/// Pauli matrix in the ordering described at the top of this header.
const Eigen::Matrix2cd& pauli(int k);

class DensityMatrix {
 public:
  /// Validates the 2^N x 2^N shape and Hermiticity (relative tolerance 1e-12
  /// of the largest entry). Positivity is not required here; see is_physical.
  DensityMatrix(int n_photons, Eigen::MatrixXcd entries);

  static DensityMatrix projector(const JonesVector& psi);
  /// |psi><psi| for an N-photon state vector of length 2^N.
  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(int n_photons);

  int n_photons() const { return n_photons_; }
  Eigen::Index dimension() const { return entries_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  double trace() const { return entries_.trace().real(); }
  bool trace_normalized(double tol = 1e-12) const;

  /// Ascending real eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  bool is_physical(double tol = kPsdTolerance) const;

  /// Unit-trace copy with eigenvalues in [-kPsdTolerance, 0) clipped to 0.
  /// Throws InvalidArgument for zero trace or clearly negative eigenvalues.
  DensityMatrix normalized() const;

  /// Nearest-in-spectrum physical state: all negative eigenvalues clipped,
  /// then renormalized. Used to turn a linear-inversion estimate into a
  /// starting point. Falls back to the maximally mixed state if nothing
  /// positive survives.
  DensityMatrix projected_to_physical() const;

 private:
  int n_photons_;
  Eigen::MatrixXcd entries_;
};

/// Unique (S0..S3) with rho = sum_k S_k pauli(k); requires N = 1.
StokesVector stokes_from_density(const DensityMatrix& rho);

/// Exact inverse of stokes_from_density. Emits a warning (not an error) when
/// the Stokes vector is unphysical.
DensityMatrix density_from_stokes(const StokesVector& s);

/// T (x) ... (x) T with N factors. Throws InvalidArgument for N < 1 or when
/// the result would exceed `max_rows` rows.
Eigen::MatrixXcd tensor_power(const Eigen::MatrixXcd& t, int n,
                              Eigen::Index max_rows = kDefaultTensorRowCap);

/// Tr(rho^2) / Tr(rho)^2
double purity(const DensityMatrix& rho);

/// Wootters concurrence of a two-photon state.
double concurrence(const DensityMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct SymmetryCheck {
  bool symmetric = true;
  double max_violation = 0.0;
};

/// Checks that rho commutes with every permutation of photon slots.
SymmetryCheck symmetric_support_check(const DensityMatrix& rho, double tol = 1e-10);

/// Cross-polarized photon pair with real spectral overlap eta:
/// (1/2)[[0,0,0,0],[0,1,eta,0],[0,eta,1,0],[0,0,0,0]].
DensityMatrix cross_polarized_pair(double eta);

// Slot-permutation utilities shared by the simulator and reconstruction.

/// All permutations of {0..n-1}, lexicographic.
std::vector<std::vector<int>> slot_permutations(int n);

/// Permutation matrix acting on (C^2)^{(x)n}: slot k of the output holds
/// slot perm[k] of the input.
Eigen::MatrixXcd slot_permutation_operator(const std::vector<int>& perm);

/// Average of P rho P^dagger over all slot permutations P.
Eigen::MatrixXcd symmetrize_slots(const Eigen::MatrixXcd& rho, int n_photons);

}  // namespace metatomo
