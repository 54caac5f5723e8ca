#include "metatomo/errors.hpp"
#include "metatomo/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <ceres/ceres.h>
#include <spdlog/spdlog.h>

namespace metatomo {

namespace {

// Kronecker product of the rows of `ports`, in the given slot order.
Eigen::RowVectorXcd product_row(const TransferMatrix& t, const std::vector<int>& ports) {
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

// W = sum over slot orderings of r^dagger r, so that Tr(W rho) is the click
// coincidence of the slot-symmetrized rho.
Eigen::MatrixXcd measurement_operator(const TransferMatrix& t, PortTuple ports) {
  const Eigen::Index dim = Eigen::Index{1} << ports.size();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(dim, dim);
  std::sort(ports.begin(), ports.end());
  do {
    const Eigen::RowVectorXcd r = product_row(t, ports);
    w += r.adjoint() * r;
  } while (std::next_permutation(ports.begin(), ports.end()));
  return w;
}

struct Observations {
  std::vector<Eigen::MatrixXcd> conj_ops;  // conj(W_i): mu_i = Re sum conj(W_i) .* rho
  std::vector<double> counts;
  double total = 0.0;
};

Observations collect(const TransferMatrix& t, const CorrelationSet& data) {
  if (data.n_photons() > t.port_count()) throw DimensionMismatch("more photons than transfer-matrix ports");
  if (data.port_span() > t.port_count()) {
    throw DimensionMismatch("correlation data reference ports beyond the transfer matrix");
  }
  Observations obs;
  for (const auto& [ports, value] : data.entries()) {
    obs.conj_ops.push_back(measurement_operator(t, ports).conjugate());
    obs.counts.push_back(value);
    obs.total += value;
  }
  return obs;
}

double expectation(const Eigen::MatrixXcd& conj_w, const Eigen::MatrixXcd& rho) {
  return conj_w.cwiseProduct(rho).sum().real();
}

// Negative multinomial log-likelihood; the Poisson brightness has been
// profiled out, which leaves only the normalized expectations.
double negative_log_likelihood(const Observations& obs, const Eigen::MatrixXcd& rho) {
  std::vector<double> mu(obs.counts.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] = expectation(obs.conj_ops[i], rho);
    sum += mu[i];
  }
  if (!(sum > 0.0)) return std::numeric_limits<double>::max();
  double cost = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (obs.counts[i] == 0.0) continue;
    cost -= obs.counts[i] * std::log(std::max(mu[i] / sum, 1e-300));
  }
  return cost;
}

double profile_offset(double total) { return total > 0.0 ? total * std::log(total) - total : 0.0; }

// x = [diag(T) (d reals), then Re/Im of the strictly lower entries row by row].
Eigen::MatrixXcd lower_from_parameters(const double* x, Eigen::Index d) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) t(i, i) = x[i];
  Eigen::Index k = d;
  for (Eigen::Index i = 1; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      t(i, j) = Complex(x[k], x[k + 1]);
      k += 2;
    }
  }
  return t;
}

std::vector<double> parameters_from_lower(const Eigen::MatrixXcd& t) {
  const Eigen::Index d = t.rows();
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i) x.push_back(t(i, i).real());
  for (Eigen::Index i = 1; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      x.push_back(t(i, j).real());
      x.push_back(t(i, j).imag());
    }
  }
  return x;
}

Eigen::MatrixXcd density_from_parameters(const double* x, Eigen::Index d) {
  const Eigen::MatrixXcd t = lower_from_parameters(x, d);
  const Eigen::MatrixXcd rho = t.adjoint() * t;
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) return Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  return rho / tr;
}

class NegLogLikelihood final : public ceres::FirstOrderFunction {
 public:
  NegLogLikelihood(const Observations& obs, Eigen::Index dim, double relative_step)
      : obs_(obs), dim_(dim), step_(relative_step) {}

  int NumParameters() const override { return static_cast<int>(dim_ * dim_); }

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    *cost = value(parameters);
    if (!std::isfinite(*cost)) return false;
    if (gradient == nullptr) return true;
    const int n = NumParameters();
    std::vector<double> x(parameters, parameters + n);
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < n; ++i) {
      const double h = step_ * std::max(std::abs(x[static_cast<std::size_t>(i)]), scale);
      const double xi = x[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(i)] = xi + h;
      const double up = value(x.data());
      x[static_cast<std::size_t>(i)] = xi - h;
      const double down = value(x.data());
      x[static_cast<std::size_t>(i)] = xi;
      gradient[i] = (up - down) / (2.0 * h);
    }
    return true;
  }

 private:
  double value(const double* x) const { return negative_log_likelihood(obs_, density_from_parameters(x, dim_)); }

  const Observations& obs_;
  Eigen::Index dim_;
  double step_;
};

// T lower triangular with T^dagger T = rho, via the Cholesky factor of the
// index-reversed matrix (J rho J = C C^dagger gives T = J C^dagger J).
Eigen::MatrixXcd lower_factor(const Eigen::MatrixXcd& rho) {
  const Eigen::Index d = rho.rows();
  const Eigen::MatrixXcd flipped = rho.reverse();
  Eigen::LLT<Eigen::MatrixXcd> llt(flipped);
  if (llt.info() != Eigen::Success) return Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd c = llt.matrixL();
  return c.adjoint().reverse();
}

DensityMatrix finalize(int n, const Eigen::MatrixXcd& rho_hat) {
  Eigen::MatrixXcd rho = symmetrize_slots(rho_hat, n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(n, rho).normalized();
}

}  // namespace

double poisson_log_likelihood(const TransferMatrix& t, const DensityMatrix& rho, const CorrelationSet& data) {
  if (rho.n_photons() != data.n_photons()) throw DimensionMismatch("state and data photon numbers differ");
  const Observations obs = collect(t, data);
  return -negative_log_likelihood(obs, rho.matrix()) + profile_offset(obs.total);
}

ReconstructionReport mle_reconstruct(const TransferMatrix& t, const CorrelationSet& data, const MleOptions& options) {
  if (options.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(options.function_tolerance > 0.0)) throw InvalidArgument("function tolerance must be positive");
  if (!(options.gradient_step > 0.0)) throw InvalidArgument("gradient step must be positive");
  const int n = data.n_photons();
  const Observations obs = collect(t, data);

  ReconstructionReport rep;
  rep.method = Method::Mle;
  if (!(obs.total > 0.0)) {
    rep.rho = DensityMatrix::maximally_mixed(n);
    rep.log_likelihood = 0.0;
    rep.converged = true;
    attach_metrics(rep, std::nullopt);
    return rep;
  }

  // The linear solve also enforces the rank condition.
  const LinearEstimate lin = linear_reconstruct(t, data);
  const Eigen::Index d = Eigen::Index{1} << n;
  constexpr double kMixing = 1e-6;
  const Eigen::MatrixXcd start = (1.0 - kMixing) * lin.rho.projected_to_physical().matrix() +
                                 kMixing * Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  std::vector<double> x = parameters_from_lower(lower_factor(start));

  ceres::GradientProblem problem(new NegLogLikelihood(obs, d, options.gradient_step));
  ceres::GradientProblemSolver::Options solver_options;
  solver_options.line_search_direction_type = ceres::BFGS;
  solver_options.max_num_iterations = options.max_iterations;
  solver_options.function_tolerance = options.function_tolerance;
  solver_options.gradient_tolerance = 1e-12;
  solver_options.parameter_tolerance = 1e-14;
  solver_options.logging_type = ceres::SILENT;
  solver_options.minimizer_progress_to_stdout = false;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(solver_options, problem, x.data(), &summary);

  const double offset = profile_offset(obs.total);
  for (const auto& it : summary.iterations) rep.log_likelihood_trace.push_back(-it.cost + offset);
  rep.iterations = std::max(0, static_cast<int>(summary.iterations.size()) - 1);

  switch (summary.termination_type) {
    case ceres::CONVERGENCE:
    case ceres::USER_SUCCESS:
      rep.converged = true;
      break;
    case ceres::FAILURE: {
      // A failed line search at a point whose gradient is already at the
      // finite-difference noise floor is a converged optimum.
      const double gnorm = summary.iterations.empty() ? 0.0 : summary.iterations.back().gradient_max_norm;
      rep.converged = gnorm <= 1e-6 * (1.0 + std::abs(summary.final_cost));
      if (!rep.converged) spdlog::debug("MLE line search failed: {}", summary.message);
      break;
    }
    default:
      rep.converged = false;
      break;
  }
  rep.rho = finalize(n, density_from_parameters(x.data(), d));
  rep.log_likelihood = poisson_log_likelihood(t, rep.rho, data);
  rep.physical = rep.rho.is_physical();
  attach_metrics(rep, std::nullopt);
  return rep;
}

}  // namespace metatomo
