#pragma once

#include "metatomo/polarization.hpp"

namespace metatomo {

/// M x 2 map from input polarization amplitudes to output-port amplitudes.
/// Row a is the covector u_a^dagger of port a, including its efficiency
/// scale. Each row is defined only up to a phase. Ports are 0-based here;
/// file formats and the CLI use 1-based labels.
class TransferMatrix {
 public:
  /// Throws InvalidArgument for fewer than two ports, an all-zero row or
  /// non-finite entries. `scale` is the overall factor xi.
  explicit TransferMatrix(Eigen::MatrixX2cd rows, double scale = 1.0);

  Eigen::Index port_count() const { return rows_.rows(); }
  double scale() const { return scale_; }

  /// xi * rows
  Eigen::MatrixX2cd matrix() const { return scale_ * rows_; }
  /// Unscaled rows as supplied.
  const Eigen::MatrixX2cd& rows() const { return rows_; }

  /// xi * u_a^dagger
  Eigen::RowVector2cd row(Eigen::Index port) const;
  /// Projective basis vector u_a (conjugate transpose of the scaled row).
  JonesVector basis(Eigen::Index port) const;

  TransferMatrix scaled(double factor) const { return TransferMatrix(rows_, scale_ * factor); }

 private:
  Eigen::MatrixX2cd rows_;
  double scale_;
};

/// The on-site calibrated transfer matrix of the fabricated six-port
/// metasurface (columns H, V; scale 1).
TransferMatrix six_port_metasurface();

}  // namespace metatomo
