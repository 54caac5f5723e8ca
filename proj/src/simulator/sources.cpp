#include "metatomo/errors.hpp"
#include "metatomo/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace metatomo {

double SourceModel::overlap_at(double delay) const {
  if (!(std::abs(peak_overlap) <= 1.0)) throw InvalidArgument("peak overlap must satisfy |eta0| <= 1");
  if (!(delay_width > 0.0)) throw InvalidArgument("delay width must be positive");
  return peak_overlap * std::exp(-delay * delay / (2.0 * delay_width * delay_width));
}

DensityMatrix SourceModel::state_at(double delay) const { return cross_polarized_pair(overlap_at(delay)); }

std::vector<HomPoint> hom_scan(const TransferMatrix& t, std::pair<int, int> ports, const SourceModel& source,
                               std::span<const double> delays) {
  const auto [a, b] = ports;
  if (a == b) throw InvalidArgument("HOM scan needs two distinct ports");
  if (a < 0 || b < 0 || a >= t.port_count() || b >= t.port_count()) {
    throw InvalidArgument("HOM port index out of range");
  }
  const int tuple[2] = {std::min(a, b), std::max(a, b)};
  std::vector<HomPoint> out;
  out.reserve(delays.size());
  for (double tau : delays) out.push_back({tau, coincidence(t, source.state_at(tau), tuple)});
  return out;
}

HomContrast hom_contrast(const TransferMatrix& t, std::pair<int, int> ports, double peak_overlap) {
  const SourceModel matched{peak_overlap, 1.0};
  const SourceModel distinguishable{0.0, 1.0};
  const double zero[1] = {0.0};
  HomContrast c;
  c.matched = hom_scan(t, ports, matched, zero).front().expected;
  c.mismatched = hom_scan(t, ports, distinguishable, zero).front().expected;
  return c;
}

JonesMatrix quarter_wave_plate(double theta) { return meta_atom_matrix(theta, 0.0, kPi / 2.0); }

DensityMatrix qwp_state(double theta, const DensityMatrix& base) {
  const Eigen::Matrix2cd q = quarter_wave_plate(theta).matrix();
  switch (base.n_photons()) {
    case 1:
      return DensityMatrix(1, q * base.matrix() * q.adjoint());
    case 2: {
      const Eigen::Matrix4cd qq = Eigen::kroneckerProduct(q, q);
      return DensityMatrix(2, qq * base.matrix() * qq.adjoint());
    }
    default:
      throw InvalidArgument("quarter-wave-plate states are modeled for N = 1 and N = 2 only");
  }
}

DensityMatrix qwp_state(double theta, const JonesVector& base) {
  return qwp_state(theta, DensityMatrix::projector(base));
}

DensityMatrix qwp_state(double theta, int n_photons) {
  switch (n_photons) {
    case 1:
      return qwp_state(theta, JonesVector::vertical());
    case 2:
      return qwp_state(theta, cross_polarized_pair(0.58));
    default:
      throw InvalidArgument("quarter-wave-plate states are modeled for N = 1 and N = 2 only");
  }
}

}  // namespace metatomo
