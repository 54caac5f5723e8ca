#include "metatomo/transfer_matrix.hpp"

#include "metatomo/errors.hpp"

#include <cmath>
#include <string>

namespace metatomo {

TransferMatrix::TransferMatrix(Eigen::MatrixX2cd rows, double scale) : rows_(std::move(rows)), scale_(scale) {
  if (rows_.rows() < 2) throw InvalidArgument("a transfer matrix needs at least two ports");
  if (!rows_.allFinite() || !std::isfinite(scale_)) throw InvalidArgument("transfer matrix has non-finite entries");
  if (scale_ == 0.0) throw InvalidArgument("transfer matrix scale must be nonzero");
  for (Eigen::Index a = 0; a < rows_.rows(); ++a) {
    if (rows_.row(a).squaredNorm() == 0.0) {
      throw InvalidArgument("transfer matrix row " + std::to_string(a + 1) + " is all zero");
    }
  }
}

Eigen::RowVector2cd TransferMatrix::row(Eigen::Index port) const {
  if (port < 0 || port >= port_count()) throw InvalidArgument("port index out of range");
  return scale_ * rows_.row(port);
}

JonesVector TransferMatrix::basis(Eigen::Index port) const {
  return JonesVector(Eigen::Vector2cd(row(port).adjoint()));
}

TransferMatrix six_port_metasurface() {
  using C = Complex;
  Eigen::MatrixX2cd t(6, 2);
  t << C(1.000, 0.0), C(-0.3227, -0.7070),
       C(1.2022, 0.2874), C(0.6484, 0.0),
       C(0.1781, 0.1282), C(0.7935, 0.0),
       C(-0.2692, -0.8502), C(0.2683, 0.0),
       C(-0.6830, 0.0063), C(0.8625, 0.0),
       C(0.1971, -0.5392), C(1.1189, 0.0);
  return TransferMatrix(std::move(t));
}

}  // namespace metatomo
