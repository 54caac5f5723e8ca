#include "metatomo/errors.hpp"
#include "metatomo/metagrating.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/tools/roots.hpp>

namespace metatomo {

namespace {

constexpr int kThetaScanPoints = 2048;
constexpr double kPhaseTolerance = 1e-8;

// Wraps into (-pi, pi].
double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct ThetaScan {
  std::vector<double> theta;
  std::vector<double> phase;
};

ThetaScan scan_phases(const PairAngles& pair) {
  ThetaScan scan;
  scan.theta.reserve(kThetaScanPoints + 1);
  scan.phase.reserve(kThetaScanPoints + 1);
  for (int j = 0; j <= kThetaScanPoints; ++j) {
    const double theta = kPi * j / kThetaScanPoints;
    scan.theta.push_back(theta);
    scan.phase.push_back(solve_meta_atom(pair, theta).phase);
  }
  return scan;
}

// Smallest theta in [0, pi) with gamma(theta) == target (mod 2 pi).
double invert_phase(const PairAngles& pair, const ThetaScan& scan, double target) {
  auto mismatch = [&](double theta) { return wrap_phase(solve_meta_atom(pair, theta).phase - target); };
  for (int j = 0; j < kThetaScanPoints; ++j) {
    const double lo = wrap_phase(scan.phase[static_cast<std::size_t>(j)] - target);
    const double hi = wrap_phase(scan.phase[static_cast<std::size_t>(j) + 1] - target);
    if (lo == 0.0) return scan.theta[static_cast<std::size_t>(j)];
    // A sign change across the +-pi branch cut is not a root.
    if ((lo < 0.0) == (hi < 0.0) || std::abs(hi - lo) > kPi) continue;
    if (hi == 0.0) {
      const double t = scan.theta[static_cast<std::size_t>(j) + 1];
      return t >= kPi ? 0.0 : t;
    }
    boost::math::tools::eps_tolerance<double> tol(50);
    const auto [a, b] = boost::math::tools::bisect(mismatch, scan.theta[static_cast<std::size_t>(j)],
                                                   scan.theta[static_cast<std::size_t>(j) + 1], tol);
    const double theta = std::abs(mismatch(a)) <= std::abs(mismatch(b)) ? a : b;
    return theta >= kPi ? theta - kPi : theta;
  }
  std::ostringstream msg;
  msg << "target phase " << target << " is not reached by any orientation in [0, pi)";
  throw UnreachablePhase(msg.str());
}

}  // namespace

GratingDesign synthesize_grating(const PairAngles& pair, int atoms_per_cell, const GratingOptions& options) {
  if (atoms_per_cell < kMinAtomsPerCell) {
    throw InvalidArgument("a super-cell needs at least " + std::to_string(kMinAtomsPerCell) + " meta-atoms, got " +
                          std::to_string(atoms_per_cell));
  }
  if (!(options.lattice_constant_nm > 0.0)) throw InvalidArgument("lattice constant must be positive");

  GratingDesign design;
  design.pair = pair;
  design.atoms_per_cell = atoms_per_cell;
  design.phase_offset = options.phase_offset.value_or(pair.beta);
  design.lattice_constant_nm = options.lattice_constant_nm;

  const ThetaScan scan = scan_phases(pair);  // throws DegeneratePair first
  for (int n = 0; n < atoms_per_cell; ++n) {
    const double target = wrap_phase(-2.0 * kPi * n / atoms_per_cell + design.phase_offset);
    const double theta = invert_phase(pair, scan, target);
    const AtomSolution sol = solve_meta_atom(pair, theta);
    if (std::abs(wrap_phase(sol.phase - target)) > kPhaseTolerance) {
      std::ostringstream msg;
      msg << "atom " << n << " misses its target phase by " << wrap_phase(sol.phase - target);
      throw UnreachablePhase(msg.str());
    }
    design.atoms.push_back(sol.atom);
    design.phases.push_back(sol.phase);
  }
  return design;
}

std::vector<DiffractionOrder> diffraction_spectrum(const GratingDesign& design, const JonesVector& input) {
  const int m = static_cast<int>(design.atoms.size());
  if (m == 0) throw InvalidArgument("grating design has no atoms");
  std::vector<Eigen::Vector2cd> field;
  field.reserve(static_cast<std::size_t>(m));
  double total = 0.0;
  for (const auto& atom : design.atoms) {
    field.push_back((atom.matrix() * input).amplitudes());
    total += field.back().squaredNorm();
  }
  total /= m;
  if (!(total > 0.0)) throw InvalidArgument("zero input field");

  std::vector<DiffractionOrder> spectrum;
  for (int q = -((m - 1) / 2); q <= m / 2; ++q) {
    Eigen::Vector2cd c = Eigen::Vector2cd::Zero();
    for (int n = 0; n < m; ++n) c += field[static_cast<std::size_t>(n)] * std::polar(1.0, -2.0 * kPi * q * n / m);
    c /= static_cast<double>(m);
    spectrum.push_back({q, c.squaredNorm() / total});
  }
  return spectrum;
}

double order_efficiency(const std::vector<DiffractionOrder>& spectrum, int order) {
  for (const auto& o : spectrum) {
    if (o.order == order) return o.efficiency;
  }
  return 0.0;
}

}  // namespace metatomo
