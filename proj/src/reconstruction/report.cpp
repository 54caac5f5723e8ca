#include "metatomo/errors.hpp"
#include "metatomo/reconstruction.hpp"

namespace metatomo {

void attach_metrics(ReconstructionReport& rep, const std::optional<DensityMatrix>& reference) {
  rep.purity = purity(rep.rho);
  rep.concurrence.reset();
  if (rep.rho.n_photons() == 2) rep.concurrence = concurrence(rep.rho);
  rep.fidelity.reset();
  if (reference) {
    if (reference->n_photons() != rep.rho.n_photons()) {
      throw DimensionMismatch("reference state has a different photon number");
    }
    rep.fidelity = fidelity(rep.rho, *reference);
  }
}

ReconstructionReport report(const DensityMatrix& estimate, const std::optional<DensityMatrix>& reference) {
  ReconstructionReport rep;
  rep.rho = estimate;
  rep.physical = estimate.is_physical();
  rep.iterations = 0;
  attach_metrics(rep, reference);
  return rep;
}

std::string to_string(Method m) { return m == Method::Linear ? "linear" : "mle"; }

}  // namespace metatomo
