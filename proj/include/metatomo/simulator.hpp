#pragma once

// Forward model: port probabilities, N-fold coincidence expectations for
// click detectors that cannot tell photons apart, HOM delay scans, the
// quarter-wave-plate state families and Poisson shot noise.

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "metatomo/polarization.hpp"
#include "metatomo/transfer_matrix.hpp"

namespace metatomo {

/// Strictly increasing 0-based port indices.
using PortTuple = std::vector<int>;

enum class CorrelationUnits { Expected, Counts };

/// All strictly increasing N-tuples out of M ports, lexicographic.
std::vector<PortTuple> increasing_tuples(int ports, int n_photons);

class CorrelationSet {
 public:
  CorrelationSet(int n_photons, CorrelationUnits units);

  int n_photons() const { return n_photons_; }
  CorrelationUnits units() const { return units_; }
  const std::map<PortTuple, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Inserts or replaces. Throws InvalidArgument for a tuple of the wrong
  /// length, non-increasing or negative indices, or a negative value.
  void set(const PortTuple& ports, double value);
  /// Throws InvalidArgument when the tuple is absent.
  double at(const PortTuple& ports) const;
  bool contains(const PortTuple& ports) const { return entries_.count(ports) != 0; }

  double total() const;
  /// Largest port index + 1 across entries (0 when empty).
  int port_span() const;

 private:
  int n_photons_;
  CorrelationUnits units_;
  std::map<PortTuple, double> entries_;
};

/// p_a = u_a^dagger rho u_a for a single photon.
std::vector<double> port_probabilities(const TransferMatrix& t, const DensityMatrix& rho);

/// N! [u_a1 (x) ... (x) u_aN]^dagger rho [u_a1 (x) ... (x) u_aN] for one
/// tuple of distinct ports, without clipping.
double coincidence(const TransferMatrix& t, const DensityMatrix& rho, std::span<const int> ports);

struct CorrelationOptions {
  /// Rescale so the entries sum to 1.
  bool normalize = false;
};

/// Expected coincidences for every strictly increasing N-tuple of ports.
/// Values in [-1e-12, 0) are clipped to 0; a permutation-asymmetric rho
/// triggers a warning with the violation magnitude.
CorrelationSet correlation_tensor(const TransferMatrix& t, const DensityMatrix& rho, int n_photons,
                                  const CorrelationOptions& options = {});

/// Cross-polarized H/V photon pair with a Gaussian overlap-vs-delay profile.
struct SourceModel {
  double peak_overlap = 0.58;  ///< eta at zero delay
  double delay_width = 1.0;    ///< sigma_tau

  double overlap_at(double delay) const;
  DensityMatrix state_at(double delay) const;
};

struct HomPoint {
  double delay = 0.0;
  double expected = 0.0;
};

/// Coincidence between two distinct 0-based ports versus photon delay.
std::vector<HomPoint> hom_scan(const TransferMatrix& t, std::pair<int, int> ports, const SourceModel& source,
                               std::span<const double> delays);

struct HomContrast {
  double matched = 0.0;     ///< C at zero delay
  double mismatched = 0.0;  ///< C for fully distinguishable photons
  /// (C_matched - C_mismatched) / C_mismatched: negative for a dip,
  /// positive for a peak.
  double relative_change() const { return (matched - mismatched) / mismatched; }
};

HomContrast hom_contrast(const TransferMatrix& t, std::pair<int, int> ports, double peak_overlap);

/// Quarter-wave plate with fast axis at theta: meta_atom_matrix(theta, 0, pi/2).
JonesMatrix quarter_wave_plate(double theta);

/// Single photon: Q(theta)|V> projector. Two photons: (Q (x) Q) rho(0.58) (Q (x) Q)^dagger.
DensityMatrix qwp_state(double theta, int n_photons);
/// (Q (x) ... (x) Q) base (Q (x) ... (x) Q)^dagger for N in {1, 2}.
DensityMatrix qwp_state(double theta, const DensityMatrix& base);
DensityMatrix qwp_state(double theta, const JonesVector& base);

/// Independent Poisson(shots * value) draws per tuple, keyed by
/// (seed, tuple) through a counter-based generator so results do not depend
/// on evaluation order.
CorrelationSet sample_counts(const CorrelationSet& expected, double shots, std::uint64_t seed);

}  // namespace metatomo
