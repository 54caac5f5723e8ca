#include "metatomo/errors.hpp"
#include "metatomo/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace metatomo::io {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InvalidArgument(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InvalidArgument(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InvalidArgument(std::string(what) + " must be an integer");
  return j.get<int>();
}

Json vector3(const Eigen::Vector3d& v) { return Json::array({v(0), v(1), v(2)}); }

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("complex numbers are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("matrix must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InvalidArgument("matrix rows must be nonempty arrays");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InvalidArgument("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

Json jones_to_json(const JonesVector& v) {
  Json j;
  j["h"] = complex_to_json(v.h());
  j["v"] = complex_to_json(v.v());
  return j;
}

JonesVector jones_from_json(const Json& j) {
  return {complex_from_json(field(j, "h")), complex_from_json(field(j, "v"))};
}

Json density_to_json(const DensityMatrix& rho) {
  Json j;
  j["n_photons"] = rho.n_photons();
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

DensityMatrix density_from_json(const Json& j) {
  const Eigen::MatrixXcd m = matrix_from_json(field(j, "matrix"));
  int n = 0;
  if (j.contains("n_photons")) {
    n = integer(j.at("n_photons"), "n_photons");
  } else {
    while ((Eigen::Index{1} << n) < m.rows() && n < 16) ++n;
  }
  return DensityMatrix(n, m);
}

Json transfer_to_json(const TransferMatrix& t) {
  Json j;
  j["rows"] = matrix_to_json(t.rows());
  j["scale"] = t.scale();
  return j;
}

TransferMatrix transfer_from_json(const Json& j) {
  const Eigen::MatrixXcd rows = matrix_from_json(field(j, "rows"));
  if (rows.cols() != 2) throw DimensionMismatch("transfer-matrix rows must have two entries (H, V)");
  const double scale = j.contains("scale") ? number(j.at("scale"), "scale") : 1.0;
  return TransferMatrix(rows, scale);
}

Json correlations_to_json(const CorrelationSet& c) {
  Json j;
  j["n_photons"] = c.n_photons();
  j["units"] = c.units() == CorrelationUnits::Expected ? "expected" : "counts";
  Json entries = Json::array();
  for (const auto& [ports, value] : c.entries()) {
    Json labels = Json::array();
    for (int p : ports) labels.push_back(p + 1);
    Json e;
    e["ports"] = std::move(labels);
    if (c.units() == CorrelationUnits::Counts) {
      e["value"] = static_cast<long long>(std::llround(value));
    } else {
      e["value"] = value;
    }
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

CorrelationSet correlations_from_json(const Json& j) {
  const int n = integer(field(j, "n_photons"), "n_photons");
  CorrelationUnits units = CorrelationUnits::Expected;
  if (j.contains("units")) {
    const Json& u = j.at("units");
    if (u == "expected") {
      units = CorrelationUnits::Expected;
    } else if (u == "counts") {
      units = CorrelationUnits::Counts;
    } else {
      throw InvalidArgument("units must be \"expected\" or \"counts\"");
    }
  }
  CorrelationSet c(n, units);
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) throw InvalidArgument("entries must be an array");
  for (const Json& e : entries) {
    const Json& labels = field(e, "ports");
    if (!labels.is_array()) throw InvalidArgument("ports must be an array of 1-based labels");
    PortTuple ports;
    for (const Json& p : labels) {
      const int label = integer(p, "port label");
      if (label < 1) throw InvalidArgument("port labels are 1-based");
      ports.push_back(label - 1);
    }
    const double value = number(field(e, "value"), "value");
    if (units == CorrelationUnits::Counts && value != std::floor(value)) {
      throw InvalidArgument("counts must be integers");
    }
    c.set(ports, value);
  }
  return c;
}

Json frame_to_json(const Frame& frame) {
  Json ports = Json::array();
  for (std::size_t a = 0; a < frame.size(); ++a) {
    Json p;
    p["port"] = a + 1;
    p["jones"] = jones_to_json(frame.port(a));
    p["poincare"] = vector3(frame.port(a).poincare());
    ports.push_back(std::move(p));
  }
  Json j;
  j["n_ports"] = frame.size();
  j["ports"] = std::move(ports);
  if (frame.size() >= 4) {
    const double kappa = condition_number(instrument_matrix(frame));
    if (std::isfinite(kappa)) {
      j["condition_number"] = kappa;
    } else {
      j["condition_number"] = nullptr;
    }
  }
  return j;
}

Frame frame_from_json(const Json& j) {
  const Json& ports = field(j, "ports");
  if (!ports.is_array()) throw InvalidArgument("ports must be an array");
  std::vector<JonesVector> v;
  for (const Json& p : ports) v.push_back(jones_from_json(field(p, "jones")));
  return Frame(std::move(v));
}

Json grating_to_json(const GratingDesign& design) {
  Json j;
  j["alpha_rad"] = design.pair.alpha;
  j["beta_rad"] = design.pair.beta;
  j["atoms_per_cell"] = design.atoms_per_cell;
  j["lattice_constant_nm"] = design.lattice_constant_nm;
  j["phase_offset_rad"] = design.phase_offset;
  Json atoms = Json::array();
  for (std::size_t n = 0; n < design.atoms.size(); ++n) {
    Json a;
    a["n"] = n;
    a["theta_rad"] = design.atoms[n].theta;
    a["phi1_rad"] = design.atoms[n].phi1;
    a["phi2_rad"] = design.atoms[n].phi2;
    a["gamma_rad"] = design.phases.at(n);
    atoms.push_back(std::move(a));
  }
  j["atoms"] = std::move(atoms);
  const EllipticalPair states = design.pair.states();
  const auto psi = diffraction_spectrum(design, states.state);
  const auto psi_t = diffraction_spectrum(design, states.orthogonal);
  Json eff;
  eff["state_order_minus1"] = order_efficiency(psi, -1);
  eff["orthogonal_order_plus1"] = order_efficiency(psi_t, +1);
  j["efficiency"] = std::move(eff);
  return j;
}

Json report_to_json(const ReconstructionReport& rep) {
  Json j;
  j["method"] = to_string(rep.method);
  j["n_photons"] = rep.rho.n_photons();
  j["matrix"] = matrix_to_json(rep.rho.matrix());
  j["purity"] = rep.purity;
  if (rep.concurrence) j["concurrence"] = *rep.concurrence;
  if (rep.fidelity) j["fidelity"] = *rep.fidelity;
  if (rep.log_likelihood) j["log_likelihood"] = *rep.log_likelihood;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["physical"] = rep.physical;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + " is not valid JSON: " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace metatomo::io
