#include "metatomo/errors.hpp"
#include "metatomo/reconstruction.hpp"

#include <string>

#include <Eigen/SVD>

namespace metatomo {

LinearEstimate linear_reconstruct(const TransferMatrix& t, const CorrelationSet& data) {
  const int n = data.n_photons();
  if (n > t.port_count()) throw DimensionMismatch("more photons than transfer-matrix ports");
  if (data.port_span() > t.port_count()) {
    throw DimensionMismatch("correlation data reference port " + std::to_string(data.port_span()) +
                            " but the transfer matrix has " + std::to_string(t.port_count()) + " ports");
  }
  const SymmetricOperatorBasis basis(n);
  std::vector<PortTuple> tuples;
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (const auto& [ports, value] : data.entries()) {
    y(static_cast<Eigen::Index>(tuples.size())) = value;
    tuples.push_back(ports);
  }
  const Eigen::MatrixXd d = correlation_design_matrix(t, basis, tuples);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? 1e-12 * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > cutoff ? 1 : 0;
  if (rank < static_cast<Eigen::Index>(basis.size())) {
    throw UnderdeterminedSystem("design matrix rank " + std::to_string(rank) + " is below the " +
                                std::to_string(basis.size()) + " free parameters of an " + std::to_string(n) +
                                "-photon symmetric state");
  }
  const Eigen::VectorXd inv_s = sv.cwiseInverse();
  const Eigen::VectorXd c = svd.matrixV() * inv_s.asDiagonal() * (svd.matrixU().transpose() * y);

  Eigen::MatrixXcd raw = basis.compose(c);
  raw = 0.5 * (raw + raw.adjoint()).eval();
  LinearEstimate est{DensityMatrix(n, raw)};
  est.scale = raw.trace().real();
  if (est.scale > 0.0) est.rho = DensityMatrix(n, raw / est.scale);
  est.min_eigenvalue = est.rho.min_eigenvalue();
  est.physical = est.scale > 0.0 && est.rho.is_physical();
  return est;
}

}  // namespace metatomo
