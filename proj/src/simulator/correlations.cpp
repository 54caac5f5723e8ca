#include "metatomo/errors.hpp"
#include "metatomo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

namespace metatomo {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void collect_tuples(int ports, int n, int start, PortTuple& current, std::vector<PortTuple>& out) {
  if (static_cast<int>(current.size()) == n) {
    out.push_back(current);
    return;
  }
  for (int a = start; a < ports; ++a) {
    current.push_back(a);
    collect_tuples(ports, n, a + 1, current, out);
    current.pop_back();
  }
}

Eigen::RowVectorXcd product_row(const TransferMatrix& t, std::span<const int> ports) {
  Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Ones(1);
  for (int a : ports) {
    const Eigen::RowVector2cd ua = t.row(a);
    Eigen::RowVectorXcd next(r.size() * 2);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      next(2 * i) = r(i) * ua(0);
      next(2 * i + 1) = r(i) * ua(1);
    }
    r = std::move(next);
  }
  return r;
}

}  // namespace

std::vector<PortTuple> increasing_tuples(int ports, int n_photons) {
  if (n_photons < 1) throw InvalidArgument("photon number must be >= 1");
  if (n_photons > ports) throw InvalidArgument("photon number exceeds the port count");
  std::vector<PortTuple> out;
  PortTuple current;
  collect_tuples(ports, n_photons, 0, current, out);
  return out;
}

CorrelationSet::CorrelationSet(int n_photons, CorrelationUnits units) : n_photons_(n_photons), units_(units) {
  if (n_photons < 1) throw InvalidArgument("photon number must be >= 1");
}

void CorrelationSet::set(const PortTuple& ports, double value) {
  if (static_cast<int>(ports.size()) != n_photons_) {
    throw InvalidArgument("correlation tuple has " + std::to_string(ports.size()) + " ports, expected " +
                          std::to_string(n_photons_));
  }
  for (std::size_t i = 0; i < ports.size(); ++i) {
    if (ports[i] < 0 || (i > 0 && ports[i] <= ports[i - 1])) {
      throw InvalidArgument("correlation tuple must hold strictly increasing, nonnegative port indices");
    }
  }
  if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidArgument("correlation values must be finite and >= 0");
  entries_[ports] = value;
}

double CorrelationSet::at(const PortTuple& ports) const {
  const auto it = entries_.find(ports);
  if (it == entries_.end()) throw InvalidArgument("correlation tuple not present");
  return it->second;
}

double CorrelationSet::total() const {
  double s = 0.0;
  for (const auto& [k, v] : entries_) s += v;
  return s;
}

int CorrelationSet::port_span() const {
  int span = 0;
  for (const auto& [k, v] : entries_) span = std::max(span, k.back() + 1);
  return span;
}

std::vector<double> port_probabilities(const TransferMatrix& t, const DensityMatrix& rho) {
  if (rho.n_photons() != 1) throw InvalidArgument("port probabilities need a single-photon state");
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(t.port_count()));
  for (Eigen::Index a = 0; a < t.port_count(); ++a) {
    const Eigen::RowVector2cd r = t.row(a);
    p.push_back((r * rho.matrix() * r.adjoint())(0, 0).real());
  }
  return p;
}

double coincidence(const TransferMatrix& t, const DensityMatrix& rho, std::span<const int> ports) {
  if (static_cast<int>(ports.size()) != rho.n_photons()) {
    throw DimensionMismatch("tuple length " + std::to_string(ports.size()) + " does not match the " +
                            std::to_string(rho.n_photons()) + "-photon state");
  }
  for (std::size_t i = 0; i < ports.size(); ++i) {
    if (ports[i] < 0 || ports[i] >= t.port_count()) throw InvalidArgument("port index out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (ports[i] == ports[j]) throw InvalidArgument("coincidence ports must be distinct");
    }
  }
  const Eigen::RowVectorXcd r = product_row(t, ports);
  return factorial(static_cast<int>(ports.size())) * (r * rho.matrix() * r.adjoint())(0, 0).real();
}

CorrelationSet correlation_tensor(const TransferMatrix& t, const DensityMatrix& rho, int n_photons,
                                  const CorrelationOptions& options) {
  if (rho.n_photons() != n_photons) {
    throw DimensionMismatch("state has " + std::to_string(rho.n_photons()) + " photon(s), requested N = " +
                            std::to_string(n_photons));
  }
  if (n_photons > t.port_count()) throw DimensionMismatch("more photons than ports");
  if (n_photons > 1) {
    const SymmetryCheck sym = symmetric_support_check(rho);
    if (!sym.symmetric) {
      spdlog::warn("state is not symmetric under photon-slot permutations (max violation {:.3g}); "
                   "click-detector correlations only see its symmetrized part",
                   sym.max_violation);
    }
  }
  CorrelationSet out(n_photons, CorrelationUnits::Expected);
  for (const auto& tuple : increasing_tuples(static_cast<int>(t.port_count()), n_photons)) {
    double v = coincidence(t, rho, tuple);
    if (v < -1e-12) {
      spdlog::warn("negative expected correlation {:.3g} clipped to 0 (unphysical state?)", v);
    }
    out.set(tuple, std::max(v, 0.0));
  }
  if (options.normalize) {
    const double total = out.total();
    if (!(total > 0.0)) throw InvalidArgument("cannot normalize correlations that sum to zero");
    CorrelationSet scaled(n_photons, CorrelationUnits::Expected);
    for (const auto& [k, v] : out.entries()) scaled.set(k, v / total);
    return scaled;
  }
  return out;
}

}  // namespace metatomo
