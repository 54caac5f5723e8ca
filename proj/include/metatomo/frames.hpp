#pragma once

// Measurement frames: sets of projective bases, their instrument matrices,
// condition numbers and the port-count combinatorics for N-photon
// tomography with click detectors.

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "metatomo/polarization.hpp"
#include "metatomo/transfer_matrix.hpp"

namespace metatomo {

class Frame {
 public:
  /// Requires at least two ports, each with finite nonzero norm.
  explicit Frame(std::vector<JonesVector> ports);

  std::size_t size() const { return ports_.size(); }
  const JonesVector& port(std::size_t a) const { return ports_.at(a); }
  const std::vector<JonesVector>& ports() const { return ports_; }

  /// Applies the same Jones matrix to every basis vector.
  Frame transformed(const JonesMatrix& u) const;

  /// Transfer matrix whose row a is u_a^dagger.
  TransferMatrix to_transfer_matrix() const;

 private:
  std::vector<JonesVector> ports_;
};

/// Optimal frame whose Poincare vectors are the vertices of the octahedron
/// (6), cube (8), icosahedron (12) or dodecahedron (20). Ports 2k and 2k+1
/// are antipodal, i.e. orthogonal Jones vectors. `rotation` rotates the whole
/// solid on the Poincare sphere.
Frame platonic_frame(int ports, const Eigen::Quaterniond& rotation = Eigen::Quaterniond::Identity());

bool is_supported_platonic_size(int ports);

/// M x 4 real matrix with row a = [u_a^dagger P_k u_a]_k, so that the
/// expected power in port a is row_a . S for a state with Stokes vector S.
class InstrumentMatrix {
 public:
  explicit InstrumentMatrix(Eigen::MatrixX4d entries) : entries_(std::move(entries)) {}
  const Eigen::MatrixX4d& entries() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }

 private:
  Eigen::MatrixX4d entries_;
};

InstrumentMatrix instrument_matrix(const Frame& frame);
InstrumentMatrix instrument_matrix(const TransferMatrix& t);

inline constexpr double kSingularConditionNumber = std::numeric_limits<double>::infinity();

/// sigma_max / sigma_min of the instrument matrix (spectral norm). Returns
/// kSingularConditionNumber when sigma_min < 1e-14 sigma_max. Needs >= 4 rows.
double condition_number(const InstrumentMatrix& a);

/// Condition numbers of a transfer matrix under the three row conventions.
struct ConditionSummary {
  double raw = 0.0;              ///< rows as measured
  double port_normalized = 0.0;  ///< every row scaled to unit norm
  double pair_normalized = 0.0;  ///< each orthogonal port pair scaled to unit total power
  std::vector<std::pair<int, int>> pairs;  ///< 0-based port pairs used for pair_normalized
};

/// Greedy pairing of ports by smallest normalized overlap |<u_a|u_b>|.
/// Requires an even port count.
std::vector<std::pair<int, int>> match_orthogonal_pairs(const TransferMatrix& t);

ConditionSummary condition_summary(const TransferMatrix& t);

/// (sqrt 3)^N, the smallest achievable N-photon condition number.
double multiphoton_condition_bound(int n_photons);

enum class DetectionScheme { Indistinguishable, Distinguishable };

/// Smallest port count that can reconstruct an N-photon state.
/// Indistinguishable: N + 3. Distinguishable: smallest M >= N with
/// M!/(M-N)! >= 4^N (exact integer arithmetic).
int min_ports(int n_photons, DetectionScheme scheme);

/// Largest N with min_ports(N, scheme) <= ports.
int max_photons(int ports, DetectionScheme scheme);

/// Number of distinct N-fold correlations out of M ports:
/// C(M, N) for indistinguishable detection, M!/(M-N)! otherwise.
/// Throws InvalidArgument when N > M or the count overflows 64 bits.
std::uint64_t correlation_element_count(int ports, int n_photons, DetectionScheme scheme);

}  // namespace metatomo
