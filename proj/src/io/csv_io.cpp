#include "metatomo/errors.hpp"
#include "metatomo/io.hpp"

#include <istream>
#include <sstream>

#include <spdlog/fmt/fmt.h>

namespace metatomo::io {

namespace {

double to_degrees(double rad) { return rad * 180.0 / kPi; }

}  // namespace

std::string grating_csv(const GratingDesign& design) {
  std::string out = "n,theta_deg,phi1_deg,phi2_deg,gamma_deg\n";
  for (std::size_t n = 0; n < design.atoms.size(); ++n) {
    const MetaAtom& a = design.atoms[n];
    out += fmt::format("{},{:.10g},{:.10g},{:.10g},{:.10g}\n", n, to_degrees(a.theta), to_degrees(a.phi1),
                       to_degrees(a.phi2), to_degrees(design.phases.at(n)));
  }
  return out;
}

std::string hom_csv(const std::vector<HomPoint>& points) {
  std::string out = "delay,expected\n";
  for (const HomPoint& p : points) out += fmt::format("{:.10g},{:.12g}\n", p.delay, p.expected);
  return out;
}

std::string correlations_csv(const CorrelationSet& c) {
  std::string out = "ports,value\n";
  for (const auto& [ports, value] : c.entries()) {
    std::string label;
    for (std::size_t i = 0; i < ports.size(); ++i) label += (i ? "-" : "") + std::to_string(ports[i] + 1);
    out += fmt::format("{},{:.12g}\n", label, value);
  }
  return out;
}

HistogramData read_histogram_csv(std::istream& in) {
  HistogramData h;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("histogram CSV is empty");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument(fmt::format("histogram CSV line {} lacks a comma", line_no));
    try {
      std::size_t used = 0;
      const std::string t = line.substr(0, comma);
      const std::string c = line.substr(comma + 1);
      const double tv = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      const double cv = std::stod(c, &used);
      if (used != c.size()) throw std::invalid_argument(c);
      h.bin_centers.push_back(tv);
      h.counts.push_back(cv);
    } catch (const std::logic_error&) {
      throw InvalidArgument(fmt::format("histogram CSV line {} is not numeric", line_no));
    }
  }
  return h;
}

}  // namespace metatomo::io
