#include "metatomo/errors.hpp"
#include "metatomo/polarization.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace metatomo {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

JonesVector JonesVector::diagonal() { return {kInvSqrt2, kInvSqrt2}; }
JonesVector JonesVector::antidiagonal() { return {kInvSqrt2, -kInvSqrt2}; }
JonesVector JonesVector::circular_plus() { return {kInvSqrt2, Complex(0.0, kInvSqrt2)}; }
JonesVector JonesVector::circular_minus() { return {kInvSqrt2, Complex(0.0, -kInvSqrt2)}; }

JonesVector JonesVector::from_poincare(const Eigen::Vector3d& direction) {
  const double len = direction.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw InvalidArgument("Poincare direction must be finite and nonzero");
  }
  const Eigen::Vector3d s = direction / len;
  // s1 = cos(chi), s2 = sin(chi) cos(phi), s3 = sin(chi) sin(phi)
  const double chi = std::acos(std::clamp(s(0), -1.0, 1.0));
  const double phi = std::atan2(s(2), s(1));
  return {std::cos(chi / 2.0), std::polar(std::sin(chi / 2.0), phi)};
}

JonesVector JonesVector::normalized() const {
  const double n = amp_.norm();
  if (!(n > 0.0)) throw InvalidArgument("cannot normalize a zero Jones vector");
  return JonesVector(amp_ / n);
}

Eigen::Vector3d JonesVector::poincare() const {
  const double s0 = norm_squared();
  if (!(s0 > 0.0)) throw InvalidArgument("zero Jones vector has no Poincare direction");
  const Complex hv = std::conj(h()) * v();
  return Eigen::Vector3d(std::norm(h()) - std::norm(v()), 2.0 * hv.real(), 2.0 * hv.imag()) / s0;
}

Complex inner(const JonesVector& a, const JonesVector& b) {
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

double overlap_modulus(const JonesVector& a, const JonesVector& b) {
  const double na = std::sqrt(a.norm_squared());
  const double nb = std::sqrt(b.norm_squared());
  if (!(na > 0.0) || !(nb > 0.0)) throw InvalidArgument("overlap of a zero Jones vector");
  return std::abs(inner(a, b)) / (na * nb);
}

bool same_ray(const JonesVector& a, const JonesVector& b, double tol) {
  return std::abs(1.0 - overlap_modulus(a, b)) < tol;
}

double JonesMatrix::unitarity_defect() const {
  return (m_.adjoint() * m_ - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

JonesMatrix meta_atom_matrix(double theta, double phi1, double phi2) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd rot;
  rot << c, -s, s, c;
  Eigen::Matrix2cd retard = Eigen::Matrix2cd::Zero();
  retard(0, 0) = std::polar(1.0, phi1);
  retard(1, 1) = std::polar(1.0, phi2);
  return JonesMatrix(rot * retard * rot.transpose());
}

EllipticalPair elliptical_pair(double alpha, double beta) {
  const Complex phase = std::polar(1.0, beta);
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  return {JonesVector(ca, phase * sa), JonesVector(-sa, phase * ca)};
}

double StokesVector::polarized_norm() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }

const Eigen::Matrix2cd& pauli(int k) {
  static const auto table = [] {
    std::array<Eigen::Matrix2cd, 4> p;
    const Complex i(0.0, 1.0);
    p[0] << 1.0, 0.0, 0.0, 1.0;
    p[1] << 1.0, 0.0, 0.0, -1.0;
    p[2] << 0.0, 1.0, 1.0, 0.0;
    p[3] << 0.0, -i, i, 0.0;
    return p;
  }();
  if (k < 0 || k > 3) throw InvalidArgument("Pauli index must be in 0..3");
  return table[static_cast<std::size_t>(k)];
}

}  // namespace metatomo
