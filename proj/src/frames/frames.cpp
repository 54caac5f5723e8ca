#include "metatomo/frames.hpp"

#include "metatomo/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace metatomo {

Frame::Frame(std::vector<JonesVector> ports) : ports_(std::move(ports)) {
  if (ports_.size() < 2) throw InvalidArgument("a frame needs at least two ports");
  for (const auto& u : ports_) {
    const double n = u.norm_squared();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("frame vectors must have finite nonzero norm");
  }
}

Frame Frame::transformed(const JonesMatrix& u) const {
  std::vector<JonesVector> out;
  out.reserve(ports_.size());
  for (const auto& p : ports_) out.push_back(u * p);
  return Frame(std::move(out));
}

TransferMatrix Frame::to_transfer_matrix() const {
  Eigen::MatrixX2cd rows(static_cast<Eigen::Index>(ports_.size()), 2);
  for (std::size_t a = 0; a < ports_.size(); ++a) {
    rows.row(static_cast<Eigen::Index>(a)) = ports_[a].amplitudes().adjoint();
  }
  return TransferMatrix(std::move(rows));
}

namespace {

// One representative per antipodal pair; the frame lists each followed by
// its negation.
std::vector<Eigen::Vector3d> platonic_representatives(int ports) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  switch (ports) {
    case 6:
      return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    case 8:
      return {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
    case 12:
      return {{0, 1, phi}, {0, 1, -phi}, {1, phi, 0}, {1, -phi, 0}, {phi, 0, 1}, {phi, 0, -1}};
    case 20:
      return {{1, 1, 1},          {1, 1, -1},         {1, -1, 1},        {1, -1, -1},
              {0, 1 / phi, phi},  {0, 1 / phi, -phi}, {1 / phi, phi, 0}, {1 / phi, -phi, 0},
              {phi, 0, 1 / phi},  {phi, 0, -1 / phi}};
    default:
      throw InvalidArgument("unsupported platonic frame size " + std::to_string(ports) +
                            " (supported: 6, 8, 12, 20)");
  }
}

Eigen::RowVector4d projector_row(const JonesVector& u) {
  const Complex h = u.h();
  const Complex v = u.v();
  const Complex hv = std::conj(h) * v;
  return {std::norm(h) + std::norm(v), std::norm(h) - std::norm(v), 2.0 * hv.real(), 2.0 * hv.imag()};
}

}  // namespace

bool is_supported_platonic_size(int ports) { return ports == 6 || ports == 8 || ports == 12 || ports == 20; }

Frame platonic_frame(int ports, const Eigen::Quaterniond& rotation) {
  const Eigen::Quaterniond q = rotation.normalized();
  std::vector<JonesVector> out;
  for (const auto& rep : platonic_representatives(ports)) {
    const Eigen::Vector3d s = q * rep.normalized();
    out.push_back(JonesVector::from_poincare(s));
    out.push_back(JonesVector::from_poincare(-s));
  }
  return Frame(std::move(out));
}

InstrumentMatrix instrument_matrix(const Frame& frame) {
  Eigen::MatrixX4d a(static_cast<Eigen::Index>(frame.size()), 4);
  for (std::size_t i = 0; i < frame.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = projector_row(frame.port(i));
  return InstrumentMatrix(std::move(a));
}

InstrumentMatrix instrument_matrix(const TransferMatrix& t) {
  Eigen::MatrixX4d a(t.port_count(), 4);
  for (Eigen::Index i = 0; i < t.port_count(); ++i) a.row(i) = projector_row(t.basis(i));
  return InstrumentMatrix(std::move(a));
}

double condition_number(const InstrumentMatrix& a) {
  if (a.rows() < 4) throw InvalidArgument("condition number needs at least 4 ports");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.entries());
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin < 1e-14 * smax) return kSingularConditionNumber;
  return smax / smin;
}

std::vector<std::pair<int, int>> match_orthogonal_pairs(const TransferMatrix& t) {
  const int m = static_cast<int>(t.port_count());
  if (m % 2 != 0) throw InvalidArgument("orthogonal pairing needs an even port count");
  struct Candidate {
    double overlap;
    int a;
    int b;
  };
  std::vector<Candidate> candidates;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) candidates.push_back({overlap_modulus(t.basis(a), t.basis(b)), a, b});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.overlap < y.overlap; });
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& c : candidates) {
    if (used[static_cast<std::size_t>(c.a)] || used[static_cast<std::size_t>(c.b)]) continue;
    used[static_cast<std::size_t>(c.a)] = used[static_cast<std::size_t>(c.b)] = true;
    pairs.emplace_back(c.a, c.b);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

ConditionSummary condition_summary(const TransferMatrix& t) {
  ConditionSummary out;
  out.raw = condition_number(instrument_matrix(t));

  Eigen::MatrixX2cd unit = t.matrix();
  for (Eigen::Index a = 0; a < unit.rows(); ++a) unit.row(a).normalize();
  out.port_normalized = condition_number(instrument_matrix(TransferMatrix(unit)));

  if (t.port_count() % 2 == 0) {
    out.pairs = match_orthogonal_pairs(t);
    Eigen::MatrixX2cd paired = t.matrix();
    for (const auto& [a, b] : out.pairs) {
      const double power = paired.row(a).squaredNorm() + paired.row(b).squaredNorm();
      paired.row(a) /= std::sqrt(power);
      paired.row(b) /= std::sqrt(power);
    }
    out.pair_normalized = condition_number(instrument_matrix(TransferMatrix(paired)));
  } else {
    out.pair_normalized = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double multiphoton_condition_bound(int n_photons) {
  if (n_photons < 1) throw InvalidArgument("photon number must be >= 1");
  return std::pow(std::sqrt(3.0), n_photons);
}

}  // namespace metatomo
