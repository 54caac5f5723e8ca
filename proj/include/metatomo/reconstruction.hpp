#pragma once

// Inverse problem: Gaussian fitting of coincidence histograms, linear
// inversion and maximum-likelihood estimation of N-photon density matrices,
// and the metrics bundle reported for each estimate.

#include <optional>
#include <string>
#include <vector>

#include "metatomo/polarization.hpp"
#include "metatomo/simulator.hpp"
#include "metatomo/transfer_matrix.hpp"

namespace metatomo {

// ---------------------------------------------------------------------------
// Histogram preprocessing

struct HistogramData {
  std::vector<double> bin_centers;  ///< ns, uniformly spaced
  std::vector<double> counts;       ///< nonnegative
};

enum class CountExtraction {
  Area,       ///< A w sqrt(2 pi) / bin_width, the background-free peak area
  Amplitude,  ///< A
};

struct HistogramFit {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 0.0;
  double offset = 0.0;
  double extracted_counts = 0.0;
  /// 1-sigma errors of (amplitude, center, width, offset) from the
  /// Gauss-Newton covariance scaled by the residual variance.
  Eigen::Vector4d standard_errors = Eigen::Vector4d::Zero();
  double residual_norm = 0.0;  ///< sqrt of the residual sum of squares
  int iterations = 0;
};

/// Least-squares fit of A exp(-(t - t0)^2 / (2 w^2)) + B with A, w > 0 and
/// B >= 0. Throws InvalidArgument for malformed input, DegenerateHistogram
/// when the peak does not rise 2 sigma above the background, and
/// FitDiverged when 500 iterations are not enough.
HistogramFit fit_histogram(const HistogramData& hist, CountExtraction extraction = CountExtraction::Area);

// ---------------------------------------------------------------------------
// Permutation-symmetric operator basis

/// Real basis of the Hermitian operators on N photon slots that commute with
/// every slot permutation: one element per multiset {k1 <= ... <= kN} of
/// Pauli indices, B = sum over distinct arrangements of P_k1 (x) ... (x) P_kN.
/// Its dimension C(N+3, 3) is the number of free parameters a click-detector
/// measurement has to pin down.
class SymmetricOperatorBasis {
 public:
  explicit SymmetricOperatorBasis(int n_photons);

  int n_photons() const { return n_photons_; }
  std::size_t size() const { return multisets_.size(); }
  const std::vector<std::vector<int>>& multisets() const { return multisets_; }

  const Eigen::MatrixXcd& element(std::size_t i) const { return elements_.at(i); }
  Eigen::MatrixXcd compose(const Eigen::VectorXd& coefficients) const;
  /// Coefficients of the orthogonal projection onto the basis span.
  Eigen::VectorXd decompose(const Eigen::MatrixXcd& op) const;

 private:
  int n_photons_;
  std::vector<std::vector<int>> multisets_;
  std::vector<Eigen::MatrixXcd> elements_;
};

/// Row t, column m: expected coincidence of tuple t for the operator B_m,
/// N! sum over arrangements prod_i A[a_i][k_i] with A the instrument matrix.
Eigen::MatrixXd correlation_design_matrix(const TransferMatrix& t, const SymmetricOperatorBasis& basis,
                                          const std::vector<PortTuple>& tuples);

// ---------------------------------------------------------------------------
// Estimators

struct LinearEstimate {
  DensityMatrix rho;       ///< unit trace (when the raw trace is positive), not necessarily PSD
  double scale = 0.0;      ///< trace of the raw solution: brightness in the data's units
  double min_eigenvalue = 0.0;
  bool physical = false;
};

/// Pseudo-inverse solution over the symmetric parameter space. Needs every
/// strictly increasing tuple of the M ports. Throws UnderdeterminedSystem
/// when the design matrix rank is below the parameter count.
LinearEstimate linear_reconstruct(const TransferMatrix& t, const CorrelationSet& data);

enum class Method { Linear, Mle };

struct MleOptions {
  int max_iterations = 10000;
  double function_tolerance = 1e-10;  ///< relative log-likelihood change
  double gradient_step = 1e-6;        ///< relative central-difference step
};

struct ReconstructionReport {
  DensityMatrix rho = DensityMatrix::maximally_mixed(1);
  Method method = Method::Mle;
  std::optional<double> fidelity;  ///< vs reference, when given
  double purity = 0.0;
  std::optional<double> concurrence;  ///< two-photon estimates only
  std::optional<double> log_likelihood;
  int iterations = 0;
  bool converged = true;
  bool physical = true;
  /// Log-likelihood after each accepted optimizer step.
  std::vector<double> log_likelihood_trace;
};

/// Poisson log-likelihood sum k (log(s mu) - s mu) of `data` under `rho`
/// with the brightness s fitted in closed form (s = sum k / sum mu).
double poisson_log_likelihood(const TransferMatrix& t, const DensityMatrix& rho, const CorrelationSet& data);

/// Physical rho = twirl(T^dagger T / Tr) maximizing the Poisson likelihood,
/// T lower triangular. Starts from the positivity-projected linear estimate.
/// When the iteration budget runs out the best iterate is returned with
/// converged = false. All-zero data yield the maximally mixed state.
ReconstructionReport mle_reconstruct(const TransferMatrix& t, const CorrelationSet& data,
                                     const MleOptions& options = {});

/// Purity, concurrence (N = 2) and fidelity against `reference`.
ReconstructionReport report(const DensityMatrix& estimate, const std::optional<DensityMatrix>& reference = std::nullopt);

/// Fills fidelity/purity/concurrence of an existing report in place.
void attach_metrics(ReconstructionReport& rep, const std::optional<DensityMatrix>& reference);

std::string to_string(Method m);

}  // namespace metatomo
