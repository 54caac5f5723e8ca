#pragma once

// File formats. Complex numbers are [re, im] pairs, matrices are row-major
// nested arrays, and every port label is 1-based. Malformed documents raise
// InvalidArgument with the offending field named.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metatomo/frames.hpp"
#include "metatomo/metagrating.hpp"
#include "metatomo/reconstruction.hpp"
#include "metatomo/simulator.hpp"

namespace metatomo::io {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const Json& j);

/// {"h": [re, im], "v": [re, im]}
Json jones_to_json(const JonesVector& v);
JonesVector jones_from_json(const Json& j);

/// {"n_photons": N, "matrix": [[...]]}
Json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

/// {"rows": [[h, v], ...], "scale": xi}
Json transfer_to_json(const TransferMatrix& t);
TransferMatrix transfer_from_json(const Json& j);

/// {"n_photons", "units", "entries": [{"ports": [...], "value"}]}
Json correlations_to_json(const CorrelationSet& c);
CorrelationSet correlations_from_json(const Json& j);

/// Ports with their Poincare vectors, plus the condition numbers.
Json frame_to_json(const Frame& frame);
Frame frame_from_json(const Json& j);

/// Pair, atoms, phases and the diffraction efficiencies of both states.
Json grating_to_json(const GratingDesign& design);

Json report_to_json(const ReconstructionReport& rep);

/// Parses a file; throws InvalidArgument when unreadable or not JSON.
Json read_json_file(const std::string& path);
/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

/// n,theta_deg,phi1_deg,phi2_deg,gamma_deg
std::string grating_csv(const GratingDesign& design);
/// delay,expected
std::string hom_csv(const std::vector<HomPoint>& points);
/// ports,value with ports written as 1-based labels joined by '-'
std::string correlations_csv(const CorrelationSet& c);
/// Reads "time_ns,counts" with a header line.
HistogramData read_histogram_csv(std::istream& in);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> input_digests;  ///< path -> SHA-256 hex
  std::optional<std::uint64_t> seed;
  std::string version;
  std::string timestamp;  ///< ISO-8601 UTC
};

std::string sha256_hex(const std::string& bytes);
/// Digest of a file's contents; throws InvalidArgument when unreadable.
std::string sha256_file(const std::string& path);
std::string utc_timestamp();
std::string tool_version();

Json manifest_to_json(const RunManifest& m);

}  // namespace metatomo::io
