#include "metatomo/errors.hpp"
#include "metatomo/frames.hpp"
#include "metatomo/reconstruction.hpp"

#include <algorithm>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace metatomo {

namespace {

void collect_multisets(int n, int start, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n) {
    out.push_back(current);
    return;
  }
  for (int k = start; k < 4; ++k) {
    current.push_back(k);
    collect_multisets(n, k, current, out);
    current.pop_back();
  }
}

Eigen::MatrixXcd pauli_string(const std::vector<int>& ks) {
  Eigen::MatrixXcd out = pauli(ks.front());
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const Eigen::MatrixXcd next = Eigen::kroneckerProduct(out, pauli(ks[i])).eval();
    out = next;
  }
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

SymmetricOperatorBasis::SymmetricOperatorBasis(int n_photons) : n_photons_(n_photons) {
  if (n_photons < 1 || n_photons > 6) throw InvalidArgument("symmetric basis supports 1 <= N <= 6");
  std::vector<int> current;
  collect_multisets(n_photons, 0, current, multisets_);
  const Eigen::Index dim = Eigen::Index{1} << n_photons;
  elements_.reserve(multisets_.size());
  for (const auto& ms : multisets_) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<int> arrangement = ms;
    do {
      b += pauli_string(arrangement);
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    elements_.push_back(std::move(b));
  }
}

Eigen::MatrixXcd SymmetricOperatorBasis::compose(const Eigen::VectorXd& coefficients) const {
  if (static_cast<std::size_t>(coefficients.size()) != size()) {
    throw DimensionMismatch("expected " + std::to_string(size()) + " coefficients");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(elements_.front().rows(), elements_.front().cols());
  for (std::size_t i = 0; i < size(); ++i) out += coefficients(static_cast<Eigen::Index>(i)) * elements_[i];
  return out;
}

Eigen::VectorXd SymmetricOperatorBasis::decompose(const Eigen::MatrixXcd& op) const {
  const Eigen::Index dim = elements_.front().rows();
  if (op.rows() != dim || op.cols() != dim) throw DimensionMismatch("operator dimension does not match the basis");
  Eigen::VectorXd c(static_cast<Eigen::Index>(size()));
  // The elements are mutually orthogonal: distinct multisets share no Pauli string.
  for (std::size_t i = 0; i < size(); ++i) {
    const Eigen::MatrixXcd& b = elements_[i];
    c(static_cast<Eigen::Index>(i)) = (b.adjoint() * op).trace().real() / b.squaredNorm();
  }
  return c;
}

Eigen::MatrixXd correlation_design_matrix(const TransferMatrix& t, const SymmetricOperatorBasis& basis,
                                          const std::vector<PortTuple>& tuples) {
  const int n = basis.n_photons();
  const Eigen::MatrixX4d a = instrument_matrix(t).entries();
  const double nfact = factorial(n);
  Eigen::MatrixXd d(static_cast<Eigen::Index>(tuples.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < tuples.size(); ++r) {
    const PortTuple& ports = tuples[r];
    if (static_cast<int>(ports.size()) != n) throw DimensionMismatch("tuple length does not match the basis");
    for (int p : ports) {
      if (p < 0 || p >= t.port_count()) throw InvalidArgument("port index out of range for the transfer matrix");
    }
    for (std::size_t m = 0; m < basis.size(); ++m) {
      std::vector<int> arrangement = basis.multisets()[m];
      double sum = 0.0;
      do {
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= a(ports[static_cast<std::size_t>(i)], arrangement[static_cast<std::size_t>(i)]);
        sum += prod;
      } while (std::next_permutation(arrangement.begin(), arrangement.end()));
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = nfact * sum;
    }
  }
  return d;
}

}  // namespace metatomo
