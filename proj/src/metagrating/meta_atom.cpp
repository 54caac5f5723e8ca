#include "metatomo/errors.hpp"
#include "metatomo/metagrating.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace metatomo {

JonesVector PairAngles::reversed_state() const { return elliptical_pair(alpha, -beta).state; }

JonesVector PairAngles::reversed_orthogonal() const { return elliptical_pair(alpha, -beta).orthogonal; }

bool PairAngles::is_linear(double tol) const { return std::abs(std::sin(beta) * std::sin(2.0 * alpha)) < tol; }

PairAngles pair_from_poincare(const Eigen::Vector3d& direction) {
  const double len = direction.norm();
  if (!(len > 0.0)) throw InvalidArgument("Poincare direction must be nonzero");
  const Eigen::Vector3d s = direction / len;
  // s1 = cos 2a, s2 = sin 2a cos b, s3 = sin 2a sin b
  return {0.5 * std::acos(std::clamp(s(0), -1.0, 1.0)), std::atan2(s(2), s(1))};
}

AtomSolution solve_meta_atom(const PairAngles& pair, double theta) {
  if (!std::isfinite(theta) || !std::isfinite(pair.alpha) || !std::isfinite(pair.beta)) {
    throw InvalidArgument("meta-atom parameters must be finite");
  }
  if (pair.is_linear()) {
    std::ostringstream msg;
    msg << "degenerate pair (alpha=" << pair.alpha << ", beta=" << pair.beta
        << "): linear polarizations keep their handedness, no geometric phase ramp exists";
    throw DegeneratePair(msg.str());
  }
  const JonesVector psi = pair.states().state;
  const JonesVector target = pair.reversed_state();

  // In the phi1 = -phi2 = -phi gauge, U = cos(phi) I - i sin(phi) K with K the
  // reflection about the fast axis, so
  //   |<psi'|U|psi>|^2 = (A+B)/2 + (A-B)/2 cos(2 phi) + C sin(2 phi)
  // with A = |<psi'|psi>|^2, B = |<psi'|K|psi>|^2, C = Im(conj(<psi'|psi>) <psi'|K|psi>).
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  Eigen::Matrix2cd k;
  k << c2, s2, s2, -c2;
  const Complex p = inner(target, psi);
  const Complex q = target.amplitudes().dot(k * psi.amplitudes());
  const double a = std::norm(p);
  const double b = std::norm(q);
  const double c = (std::conj(p) * q).imag();
  double two_phi = std::atan2(2.0 * c, a - b);
  if (two_phi < 0.0) two_phi += 2.0 * kPi;
  const double phi = 0.5 * two_phi;

  AtomSolution out;
  out.atom = MetaAtom{theta, -phi, phi};
  const Complex overlap = inner(target, out.atom.matrix() * psi);
  out.phase = std::arg(overlap);
  out.residual = std::abs(1.0 - std::abs(overlap));
  if (!(out.residual < 1e-10)) {
    std::ostringstream msg;
    msg << "no retardance maps the pair onto its reversed-handedness partner at theta=" << theta
        << " (residual " << out.residual << ")";
    throw NoSolution(msg.str());
  }
  return out;
}

}  // namespace metatomo
