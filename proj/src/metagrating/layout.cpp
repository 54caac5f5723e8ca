#include "metatomo/errors.hpp"
#include "metatomo/metagrating.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace metatomo {

namespace {

// Largest integer strictly below `ratio`.
long strict_floor(double ratio) {
  const double k = std::floor(ratio);
  const bool integral = ratio - k < 1e-9 * std::max(1.0, ratio);
  return static_cast<long>(integral ? k - 1.0 : k);
}

}  // namespace

InterleaveCapacity interleave_capacity(const InterleaveGeometry& g) {
  if (!(g.aperture_x_mm > 0.0) || !(g.aperture_y_mm > 0.0) || g.min_atoms_per_period <= 0 ||
      g.vertical_repeats <= 0 || g.group_repeats <= 0 || !(g.lattice_constant_nm > 0.0)) {
    throw InvalidArgument("interleaving dimensions must all be positive");
  }
  constexpr double kNmPerMm = 1e6;
  InterleaveCapacity out;
  out.x_limit = strict_floor(g.aperture_x_mm * kNmPerMm / (g.min_atoms_per_period * g.lattice_constant_nm));
  out.y_limit = strict_floor(g.aperture_y_mm * kNmPerMm /
                             (static_cast<double>(g.vertical_repeats) * g.group_repeats * g.lattice_constant_nm));
  out.capacity = std::min(out.x_limit, out.y_limit);
  return out;
}

void validate_layout(const MetasurfaceLayout& layout) {
  const InterleaveCapacity cap = interleave_capacity(layout.geometry);
  if (static_cast<long>(layout.gratings.size()) > cap.capacity) {
    throw InvalidArgument("layout holds " + std::to_string(layout.gratings.size()) +
                          " gratings but the aperture interleaves at most " + std::to_string(cap.capacity));
  }
}

TransferMatrix ideal_transfer_matrix(std::span<const PairAngles> pairs) {
  if (pairs.empty()) throw InvalidArgument("ideal transfer matrix needs at least one grating");
  const double weight = 1.0 / std::sqrt(static_cast<double>(pairs.size()));
  Eigen::MatrixX2cd rows(2 * static_cast<Eigen::Index>(pairs.size()), 2);
  Eigen::Index r = 0;
  for (const auto& pair : pairs) {
    const EllipticalPair states = pair.states();
    rows.row(r++) = weight * states.state.amplitudes().adjoint();
    rows.row(r++) = weight * states.orthogonal.amplitudes().adjoint();
  }
  return TransferMatrix(std::move(rows));
}

TransferMatrix ideal_transfer_matrix(const MetasurfaceLayout& layout) {
  validate_layout(layout);
  std::vector<PairAngles> pairs;
  pairs.reserve(layout.gratings.size());
  for (const auto& g : layout.gratings) pairs.push_back(g.pair);
  return ideal_transfer_matrix(std::span<const PairAngles>(pairs));
}

}  // namespace metatomo
