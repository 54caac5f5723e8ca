#include "metatomo/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "metatomo/errors.hpp"
#include "metatomo/io.hpp"

namespace metatomo::cli {

namespace {

using io::Json;

double deg2rad(double deg) { return deg * kPi / 180.0; }

struct GlobalOptions {
  std::string out_path;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool quiet = false;
};

struct Context {
  const GlobalOptions& global;
  std::string command_line;
  std::ostream& out;
  std::ostream& err;
  std::map<std::string, std::string> digests;
  std::optional<std::uint64_t> seed;

  /// Reads an input file once (pipes included) and remembers its digest
  /// for the manifest.
  Json read_json(const std::string& path) {
    const std::string text = read_text(path);
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InvalidArgument(path + ": " + e.what());
    }
  }

  std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    digests[path] = io::sha256_hex(s.str());
    return s.str();
  }

  /// Human-readable summary: stdout when the document goes to a file,
  /// stderr when stdout carries the document itself.
  std::ostream& summary() { return global.out_path.empty() ? err : out; }

  void emit(const std::string& document) {
    if (global.out_path.empty()) {
      out << document;
      return;
    }
    write_file(global.out_path, document);
    io::RunManifest m;
    m.command = command_line;
    m.input_digests = digests;
    m.seed = seed;
    m.version = io::tool_version();
    m.timestamp = io::utc_timestamp();
    write_file(global.out_path + ".manifest.json", io::dump(io::manifest_to_json(m)));
  }

  static void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot write " + path);
    f << content;
    if (!f) throw InvalidArgument("failed while writing " + path);
  }
};

bool want_csv(const GlobalOptions& g) { return g.format == "csv"; }

// ---------------------------------------------------------------------------

struct FrameArgs {
  int ports = 6;
};

int cmd_frame(Context& ctx, const FrameArgs& args) {
  if (!is_supported_platonic_size(args.ports)) {
    throw InvalidArgument(fmt::format("unsupported port count {}; supported: 6, 8, 12, 20", args.ports));
  }
  const Frame frame = platonic_frame(args.ports);
  const double kappa = condition_number(instrument_matrix(frame));
  if (!ctx.global.quiet) {
    ctx.summary() << fmt::format("ports = {}\nkappa = {:.7f}\nsqrt(3) = {:.7f}\n", args.ports, kappa, std::sqrt(3.0));
  }
  if (want_csv(ctx.global)) {
    std::string csv = "port,h_re,h_im,v_re,v_im,s1,s2,s3\n";
    for (std::size_t a = 0; a < frame.size(); ++a) {
      const JonesVector& u = frame.port(a);
      const Eigen::Vector3d p = u.poincare();
      csv += fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", a + 1, u.h().real(),
                         u.h().imag(), u.v().real(), u.v().imag(), p(0), p(1), p(2));
    }
    ctx.emit(csv);
  } else {
    ctx.emit(io::dump(io::frame_to_json(frame)));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DesignArgs {
  double alpha_deg = 45.0;
  double beta_deg = 90.0;
  int atoms = 8;
  double lattice_nm = 800.0;
};

int cmd_design(Context& ctx, const DesignArgs& args) {
  const PairAngles pair{deg2rad(args.alpha_deg), deg2rad(args.beta_deg)};
  if (pair.is_linear()) {
    throw DegeneratePair("degenerate pair: a linear polarization pair cannot be split by a geometric-phase grating");
  }
  GratingOptions opts;
  opts.lattice_constant_nm = args.lattice_nm;
  const GratingDesign design = synthesize_grating(pair, args.atoms, opts);
  if (!ctx.global.quiet) {
    const EllipticalPair states = pair.states();
    const auto psi = diffraction_spectrum(design, states.state);
    const auto psi_t = diffraction_spectrum(design, states.orthogonal);
    std::ostream& s = ctx.summary();
    s << fmt::format("{:>6} {:>12} {:>12}\n", "order", "state", "orthogonal");
    for (std::size_t i = 0; i < psi.size(); ++i) {
      s << fmt::format("{:>6} {:>12.6f} {:>12.6f}\n", psi[i].order, psi[i].efficiency, psi_t[i].efficiency);
    }
  }
  ctx.emit(want_csv(ctx.global) ? io::grating_csv(design) : io::dump(io::grating_to_json(design)));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string transfer;
  std::string state;
  std::optional<int> photons;
  std::vector<int> hom;
  double eta = 0.58;
  double sigma = 1.0;
  int delay_points = 161;
  std::optional<double> qwp_deg;
  std::optional<double> shots;
  bool normalize = false;
};

TransferMatrix load_transfer(Context& ctx, const std::string& path) {
  const Json j = ctx.read_json(path);
  if (j.contains("rows")) return io::transfer_from_json(j);
  if (j.contains("ports")) return io::frame_from_json(j).to_transfer_matrix();
  throw InvalidArgument(path + " holds neither a transfer matrix nor a frame");
}

int cmd_simulate(Context& ctx, const SimulateArgs& args) {
  const TransferMatrix t = load_transfer(ctx, args.transfer);
  if (!args.hom.empty()) {
    if (args.hom.size() != 2) throw InvalidArgument("--hom takes two port labels");
    if (!(args.sigma > 0.0)) throw InvalidArgument("--sigma must be positive");
    if (args.delay_points < 2) throw InvalidArgument("--delay-points must be >= 2");
    const SourceModel source{args.eta, args.sigma};
    std::vector<double> delays;
    for (int i = 0; i < args.delay_points; ++i) {
      delays.push_back(-8.0 * args.sigma + 16.0 * args.sigma * i / (args.delay_points - 1));
    }
    const auto points = hom_scan(t, {args.hom[0] - 1, args.hom[1] - 1}, source, delays);
    if (!ctx.global.quiet) {
      const double zero = hom_scan(t, {args.hom[0] - 1, args.hom[1] - 1}, source, std::vector<double>{0.0}).front().expected;
      const double far = points.front().expected;
      ctx.summary() << fmt::format("C(0) = {:.6f}\nC(far) = {:.6f}\nrelative change = {:+.4f} %\n", zero, far,
                                   100.0 * (zero - far) / far);
    }
    ctx.emit(io::hom_csv(points));
    return kExitOk;
  }

  if (args.state.empty()) throw InvalidArgument("--state is required unless --hom is given");
  DensityMatrix rho = io::density_from_json(ctx.read_json(args.state));
  if (args.qwp_deg) rho = qwp_state(deg2rad(*args.qwp_deg), rho);
  const int n = args.photons.value_or(rho.n_photons());
  CorrelationOptions copts;
  copts.normalize = args.normalize;
  CorrelationSet result = correlation_tensor(t, rho, n, copts);
  if (args.shots) {
    ctx.seed = ctx.global.seed;
    result = sample_counts(result, *args.shots, ctx.global.seed);
  }
  if (!ctx.global.quiet) {
    ctx.summary() << fmt::format("{} tuples, total {:.6g} ({})\n", result.size(), result.total(),
                                 result.units() == CorrelationUnits::Counts ? "counts" : "expected");
  }
  ctx.emit(want_csv(ctx.global) ? io::correlations_csv(result) : io::dump(io::correlations_to_json(result)));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReconstructArgs {
  std::string transfer;
  std::string counts;
  std::string method = "mle";
  std::string reference;
  int max_iterations = 10000;
};

std::string metrics_table(const ReconstructionReport& rep) {
  std::string s = fmt::format("method = {}\npurity = {:.6f}\n", to_string(rep.method), rep.purity);
  if (rep.concurrence) s += fmt::format("concurrence = {:.6f}\n", *rep.concurrence);
  if (rep.fidelity) s += fmt::format("fidelity = {:.6f}\n", *rep.fidelity);
  if (rep.log_likelihood) s += fmt::format("log_likelihood = {:.6f}\n", *rep.log_likelihood);
  s += fmt::format("physical = {}\n", rep.physical ? "yes" : "no");
  return s;
}

int cmd_reconstruct(Context& ctx, const ReconstructArgs& args) {
  const TransferMatrix t = load_transfer(ctx, args.transfer);
  const CorrelationSet data = io::correlations_from_json(ctx.read_json(args.counts));
  std::optional<DensityMatrix> reference;
  if (!args.reference.empty()) reference = io::density_from_json(ctx.read_json(args.reference));

  ReconstructionReport rep;
  if (args.method == "linear") {
    const LinearEstimate lin = linear_reconstruct(t, data);
    rep = report(lin.rho, std::nullopt);
    rep.method = Method::Linear;
    rep.physical = lin.physical;
  } else {
    MleOptions opts;
    opts.max_iterations = args.max_iterations;
    rep = mle_reconstruct(t, data, opts);
  }
  attach_metrics(rep, reference);
  if (!ctx.global.quiet) ctx.summary() << metrics_table(rep);
  ctx.emit(io::dump(io::report_to_json(rep)));
  if (!rep.converged) {
    ctx.err << fmt::format("error: maximum-likelihood search did not converge in {} iterations\n", rep.iterations);
    return kExitNumerical;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string rho;
  std::string reference;
  std::string histogram;
  std::string extraction = "area";
};

int cmd_analyze(Context& ctx, const AnalyzeArgs& args) {
  if (!args.histogram.empty()) {
    std::istringstream in(ctx.read_text(args.histogram));
    const HistogramData hist = io::read_histogram_csv(in);
    const HistogramFit fit =
        fit_histogram(hist, args.extraction == "amplitude" ? CountExtraction::Amplitude : CountExtraction::Area);
    Json j;
    j["amplitude"] = fit.amplitude;
    j["center_ns"] = fit.center;
    j["width_ns"] = fit.width;
    j["offset"] = fit.offset;
    j["extracted_counts"] = fit.extracted_counts;
    j["standard_errors"] = {fit.standard_errors(0), fit.standard_errors(1), fit.standard_errors(2),
                            fit.standard_errors(3)};
    j["residual_norm"] = fit.residual_norm;
    if (!ctx.global.quiet) {
      ctx.summary() << fmt::format("amplitude = {:.6g}\ncenter = {:.6g} ns\nwidth = {:.6g} ns\noffset = {:.6g}\n"
                                   "extracted counts = {:.6g}\n",
                                   fit.amplitude, fit.center, fit.width, fit.offset, fit.extracted_counts);
    }
    ctx.emit(io::dump(j));
    return kExitOk;
  }
  if (args.rho.empty()) throw InvalidArgument("analyze needs --rho or --histogram");
  const DensityMatrix rho = io::density_from_json(ctx.read_json(args.rho));
  std::optional<DensityMatrix> reference;
  if (!args.reference.empty()) reference = io::density_from_json(ctx.read_json(args.reference));
  const ReconstructionReport rep = report(rho, reference);
  Json j;
  j["n_photons"] = rho.n_photons();
  j["trace"] = rho.trace();
  j["min_eigenvalue"] = rho.min_eigenvalue();
  j["physical"] = rep.physical;
  j["purity"] = rep.purity;
  if (rep.concurrence) j["concurrence"] = *rep.concurrence;
  if (rep.fidelity) j["fidelity"] = *rep.fidelity;
  if (!ctx.global.quiet) {
    std::string s = fmt::format("purity = {:.6f}\n", rep.purity);
    if (rep.concurrence) s += fmt::format("concurrence = {:.6f}\n", *rep.concurrence);
    if (rep.fidelity) s += fmt::format("fidelity = {:.6f}\n", *rep.fidelity);
    s += fmt::format("min eigenvalue = {:.3g}\n", rho.min_eigenvalue());
    ctx.summary() << s;
  }
  if (want_csv(ctx.global)) {
    std::string csv = "metric,value\n";
    for (const auto& [k, v] : j.items()) csv += k + "," + v.dump() + "\n";
    ctx.emit(csv);
  } else {
    ctx.emit(io::dump(j));
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  GlobalOptions global;
  CLI::App app{"Polarization tomography with metasurface frames", "metatomo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", METATOMO_VERSION);
  app.add_option("--out", global.out_path, "Output file (a <out>.manifest.json is written next to it)");
  app.add_option("--seed", global.seed, "Seed for shot-noise sampling");
  app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", global.quiet, "Suppress summaries and warnings");

  FrameArgs frame_args;
  auto* frame = app.add_subcommand("frame", "Optimal Platonic measurement frame and its condition number");
  frame->add_option("--ports", frame_args.ports, "Port count (6, 8, 12 or 20)")->required();

  DesignArgs design_args;
  auto* design = app.add_subcommand("design", "Synthesize a metagrating super-cell for an elliptical pair");
  design->add_option("--alpha", design_args.alpha_deg, "Ellipse angle alpha in degrees")->required();
  design->add_option("--beta", design_args.beta_deg, "Relative phase beta in degrees")->required();
  design->add_option("--atoms", design_args.atoms, "Meta-atoms per super-cell (>= 8)")->required();
  design->add_option("--lattice", design_args.lattice_nm, "Lattice constant in nm");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Expected or sampled correlations, or a HOM delay scan");
  simulate->add_option("--transfer", sim_args.transfer, "Transfer-matrix or frame JSON")->required();
  simulate->add_option("--state", sim_args.state, "Density-matrix JSON");
  simulate->add_option("--photons", sim_args.photons, "Photon number N");
  simulate->add_option("--hom", sim_args.hom, "Two 1-based port labels for a HOM scan")->expected(2);
  simulate->add_option("--eta", sim_args.eta, "Peak spectral overlap for --hom");
  simulate->add_option("--sigma", sim_args.sigma, "Delay width for --hom");
  simulate->add_option("--delay-points", sim_args.delay_points, "Samples over +-8 sigma for --hom");
  simulate->add_option("--qwp", sim_args.qwp_deg, "Rotate the state with a quarter-wave plate at this angle (deg)");
  simulate->add_option("--shots", sim_args.shots, "Poisson-sample counts with this shot scale");
  simulate->add_flag("--normalize", sim_args.normalize, "Rescale expected values to sum to 1");

  ReconstructArgs rec_args;
  auto* reconstruct = app.add_subcommand("reconstruct", "Estimate the density matrix from correlations");
  reconstruct->add_option("--transfer", rec_args.transfer, "Transfer-matrix or frame JSON")->required();
  reconstruct->add_option("--counts", rec_args.counts, "Correlation-set JSON")->required();
  reconstruct->add_option("--method", rec_args.method, "Estimator")->check(CLI::IsMember({"linear", "mle"}));
  reconstruct->add_option("--reference", rec_args.reference, "Reference density-matrix JSON");
  reconstruct->add_option("--max-iterations", rec_args.max_iterations, "MLE iteration budget");

  AnalyzeArgs an_args;
  auto* analyze = app.add_subcommand("analyze", "Metrics of a density matrix, or a histogram peak fit");
  analyze->add_option("--rho", an_args.rho, "Density-matrix JSON");
  analyze->add_option("--reference", an_args.reference, "Reference density-matrix JSON");
  analyze->add_option("--histogram", an_args.histogram, "Coincidence histogram CSV (time_ns,counts)");
  analyze->add_option("--extraction", an_args.extraction, "Counts from the peak")
      ->check(CLI::IsMember({"area", "amplitude"}));

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidInput;
  }

  const auto previous_level = spdlog::get_level();
  spdlog::set_level(global.quiet ? spdlog::level::err : spdlog::level::warn);
  std::string command_line = "metatomo";
  for (int i = 1; i < argc; ++i) command_line += std::string(" ") + argv[i];
  Context ctx{global, command_line, out, err, {}, std::nullopt};

  int code = kExitOk;
  try {
    if (*frame) {
      code = cmd_frame(ctx, frame_args);
    } else if (*design) {
      code = cmd_design(ctx, design_args);
    } else if (*simulate) {
      code = cmd_simulate(ctx, sim_args);
    } else if (*reconstruct) {
      code = cmd_reconstruct(ctx, rec_args);
    } else if (*analyze) {
      code = cmd_analyze(ctx, an_args);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    code = kExitInvalidInput;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kExitFailure;
  }
  spdlog::set_level(previous_level);
  return code;
}

}  // namespace metatomo::cli
