#pragma once

// Geometric-phase metagratings that split an arbitrary orthogonal pair of
// elliptical polarizations into diffraction orders -1 and +1, and the
// bookkeeping for interleaving several gratings on one aperture.

#include <optional>
#include <span>
#include <vector>

#include "metatomo/polarization.hpp"
#include "metatomo/transfer_matrix.hpp"

namespace metatomo {

/// Target pair |psi(alpha, beta)>, |psi~(alpha, beta)>; angles in radians.
struct PairAngles {
  double alpha = 0.0;
  double beta = 0.0;

  EllipticalPair states() const { return elliptical_pair(alpha, beta); }
  /// psi with beta -> -beta: the same ellipse with reversed handedness.
  JonesVector reversed_state() const;
  JonesVector reversed_orthogonal() const;
  /// sin(beta) sin(2 alpha) == 0 within `tol`.
  bool is_linear(double tol = 1e-12) const;
};

/// Pair whose first state points along `direction` on the Poincare sphere.
PairAngles pair_from_poincare(const Eigen::Vector3d& direction);

/// Birefringent meta-atom with fast axis at `theta`; phases picked up along
/// the fast and slow axes are phi1 <= phi2.
struct MetaAtom {
  double theta = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;

  JonesMatrix matrix() const { return meta_atom_matrix(theta, phi1, phi2); }
};

struct AtomSolution {
  MetaAtom atom;
  double phase = 0.0;  ///< gamma = arg <psi'|U|psi>, in (-pi, pi]
  double residual = 0.0;  ///< |1 - |<psi'|U|psi>||
};

/// Retardance (gauge phi1 = -phi2, phi2 in [0, pi]) that maps psi onto
/// psi' for an atom at orientation `theta`, plus the phase it imprints.
/// Throws DegeneratePair for linear pairs and NoSolution if the residual
/// exceeds 1e-10.
AtomSolution solve_meta_atom(const PairAngles& pair, double theta);

struct GratingOptions {
  double lattice_constant_nm = 800.0;
  /// Constant C1 of the phase ramp gamma(n) = -2 pi n / m + C1. Defaults to
  /// beta, for which the orthogonal state's ramp is +2 pi n / m + C1 with
  /// the same constant.
  std::optional<double> phase_offset;
};

struct GratingDesign {
  PairAngles pair;
  int atoms_per_cell = 0;
  std::vector<MetaAtom> atoms;
  std::vector<double> phases;  ///< imprinted gamma(n) per atom
  double phase_offset = 0.0;   ///< C1
  double lattice_constant_nm = 800.0;
};

inline constexpr int kMinAtomsPerCell = 8;

/// Super-cell of m atoms with gamma(n) = -2 pi n / m + C1 (mod 2 pi).
/// For each n the smallest theta in [0, pi) reaching the target phase is
/// used. Throws InvalidArgument for m < 8, DegeneratePair for linear pairs,
/// UnreachablePhase if some target phase cannot be met within 1e-8.
GratingDesign synthesize_grating(const PairAngles& pair, int atoms_per_cell, const GratingOptions& options = {});

struct DiffractionOrder {
  int order = 0;
  double efficiency = 0.0;
};

/// Power fraction per diffraction order of one super-cell illuminated by
/// `input`. Orders run over the m values -floor((m-1)/2) .. floor(m/2);
/// an imprinted ramp exp(2 pi i q n / m) lands in order q.
std::vector<DiffractionOrder> diffraction_spectrum(const GratingDesign& design, const JonesVector& input);

/// Efficiency of a single order (0 when absent).
double order_efficiency(const std::vector<DiffractionOrder>& spectrum, int order);

struct InterleaveGeometry {
  double aperture_x_mm = 2.0;
  double aperture_y_mm = 2.0;
  int min_atoms_per_period = 8;  ///< Q_g
  int vertical_repeats = 100;    ///< Q_i1
  int group_repeats = 6;         ///< Q_i2
  double lattice_constant_nm = 800.0;
};

/// Largest grating counts strictly below Lx/(Qg dr) and Ly/(Qi1 Qi2 dr).
struct InterleaveCapacity {
  long x_limit = 0;
  long y_limit = 0;
  long capacity = 0;
};

InterleaveCapacity interleave_capacity(const InterleaveGeometry& geometry);

struct MetasurfaceLayout {
  std::vector<GratingDesign> gratings;
  InterleaveGeometry geometry;
};

/// Throws InvalidArgument when the layout holds more gratings than the
/// aperture can interleave.
void validate_layout(const MetasurfaceLayout& layout);

/// 2G x 2 matrix with rows psi_k^dagger / sqrt(G), psi~_k^dagger / sqrt(G)
/// for grating k (equal-area interleaving, lossless gratings).
TransferMatrix ideal_transfer_matrix(const MetasurfaceLayout& layout);
TransferMatrix ideal_transfer_matrix(std::span<const PairAngles> pairs);

}  // namespace metatomo
