#include "metatomo/errors.hpp"
#include "metatomo/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <ceres/ceres.h>

namespace metatomo {

namespace {

struct GaussianResidual {
  GaussianResidual(double t, double y) : t_(t), y_(y) {}

  template <typename T>
  bool operator()(const T* const amplitude, const T* const center, const T* const width, const T* const offset,
                  T* residual) const {
    const T z = (T(t_) - center[0]) / width[0];
    residual[0] = amplitude[0] * exp(-0.5 * z * z) + offset[0] - T(y_);
    return true;
  }

 private:
  double t_;
  double y_;
};

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  return m;
}

}  // namespace

HistogramFit fit_histogram(const HistogramData& hist, CountExtraction extraction) {
  const std::size_t n = hist.bin_centers.size();
  if (n != hist.counts.size()) throw InvalidArgument("histogram times and counts differ in length");
  if (n < 8) throw InvalidArgument("histogram fitting needs at least 8 bins");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(hist.bin_centers[i])) throw InvalidArgument("histogram times must be finite");
    if (!(hist.counts[i] >= 0.0) || !std::isfinite(hist.counts[i])) {
      throw InvalidArgument("histogram counts must be finite and nonnegative");
    }
    if (i > 0 && !(hist.bin_centers[i] > hist.bin_centers[i - 1])) {
      throw InvalidArgument("histogram times must be strictly increasing");
    }
  }
  const double bin_width = (hist.bin_centers.back() - hist.bin_centers.front()) / static_cast<double>(n - 1);

  const double background = median(hist.counts);
  const auto peak_it = std::max_element(hist.counts.begin(), hist.counts.end());
  const double peak = *peak_it;
  if (peak - background < 2.0 * std::sqrt(std::max(background, 1.0))) {
    throw DegenerateHistogram("no peak rises 2 sigma above the background of the histogram");
  }

  // Starting width from the half-maximum crossing count.
  const double half = background + 0.5 * (peak - background);
  const auto above = std::count_if(hist.counts.begin(), hist.counts.end(), [half](double c) { return c >= half; });
  double amplitude = peak - background;
  double center = hist.bin_centers[static_cast<std::size_t>(peak_it - hist.counts.begin())];
  double width = std::max(static_cast<double>(above) * bin_width / 2.3548, 0.5 * bin_width);
  double offset = background;

  ceres::Problem problem;
  for (std::size_t i = 0; i < n; ++i) {
    problem.AddResidualBlock(new ceres::AutoDiffCostFunction<GaussianResidual, 1, 1, 1, 1, 1>(
                                 new GaussianResidual(hist.bin_centers[i], hist.counts[i])),
                             nullptr, &amplitude, &center, &width, &offset);
  }
  const double tiny = 1e-12 * std::max(peak, 1.0);
  problem.SetParameterLowerBound(&amplitude, 0, tiny);
  problem.SetParameterLowerBound(&width, 0, 1e-9 * bin_width);
  problem.SetParameterLowerBound(&offset, 0, 0.0);

  ceres::Solver::Options options;
  options.linear_solver_type = ceres::DENSE_QR;
  options.max_num_iterations = 500;
  options.function_tolerance = 1e-16;
  options.gradient_tolerance = 1e-16;
  options.parameter_tolerance = 1e-14;
  options.logging_type = ceres::SILENT;
  ceres::Solver::Summary summary;
  ceres::Solve(options, &problem, &summary);
  if (summary.termination_type == ceres::NO_CONVERGENCE || summary.termination_type == ceres::FAILURE ||
      !std::isfinite(summary.final_cost)) {
    throw FitDiverged("Gaussian histogram fit did not converge within 500 iterations: " + summary.message);
  }

  HistogramFit fit;
  fit.amplitude = amplitude;
  fit.center = center;
  fit.width = width;
  fit.offset = offset;
  fit.iterations = static_cast<int>(summary.iterations.size());

  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 4);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (hist.bin_centers[i] - center) / width;
    const double g = std::exp(-0.5 * z * z);
    const double r = amplitude * g + offset - hist.counts[i];
    rss += r * r;
    const auto row = static_cast<Eigen::Index>(i);
    jac(row, 0) = g;
    jac(row, 1) = amplitude * g * z / width;
    jac(row, 2) = amplitude * g * z * z / width;
    jac(row, 3) = 1.0;
  }
  fit.residual_norm = std::sqrt(rss);
  const double s2 = rss / static_cast<double>(n - 4);
  const Eigen::Matrix4d jtj = jac.transpose() * jac;
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(jtj);
  if (lu.isInvertible()) fit.standard_errors = (s2 * lu.inverse()).diagonal().cwiseMax(0.0).cwiseSqrt();

  fit.extracted_counts = extraction == CountExtraction::Area ? amplitude * width * std::sqrt(2.0 * kPi) / bin_width
                                                              : amplitude;
  return fit;
}

}  // namespace metatomo
