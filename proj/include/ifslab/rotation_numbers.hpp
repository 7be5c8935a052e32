#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ifslab/circle.hpp"
#include "ifslab/circle_map.hpp"

namespace ifslab {

struct TranslationEstimate {
  double value = 0.0;
  // Rigorous for the chosen lift: |value - rho| <= error_bound = 1/n.
  double error_bound = 0.0;
  std::size_t iterations = 0;
};

// Finite-orbit translation number estimate lift^n(0)/n of the map's lift.
TranslationEstimate translation_number(const CircleMap& f, std::size_t n);

// A word whose epsilon-pseudo-orbits starting from a single point can end
// more than a full turn apart: the lower orbit subtracts epsilon after every
// generator application, the upper one adds it.
struct GapWitness {
  Word word;
  double lower = 0.0;
  double upper = 0.0;
  double spread() const { return upper - lower; }
};

// Beam search over words, scored by pseudo-orbit spread; a witness is
// returned once the spread exceeds one full turn and survives independent
// re-threading. Returns nullopt if no such word of length <= max_len was
// found at the given beam width.
std::optional<GapWitness> gap_word_search(const Ifs& F, double epsilon,
                                          std::size_t max_len,
                                          std::size_t beam = 64);

// Bisection over the common lift shift delta applied to every generator:
// brackets a delta where the translation number of the shifted f_w crosses
// `target`, narrowing to an interval of width < 1e-10. Returns nullopt when
// the estimates at both ends of delta_range lie strictly on the same side
// of the target (beyond their error bounds).
std::optional<std::pair<double, double>> rho_crossing_search(
    const Ifs& F, const Word& w, double target,
    std::pair<double, double> delta_range, std::size_t n = 20000);

// Mean lifted backward-stationary mass of the epsilon-fattened random image
// interval after n steps, for n = 1..horizon, averaged over `trials` random
// words. Growth of this series past 1 is the measure-theoretic shadow of a
// rotation-number gap.
std::vector<double> measure_growth_diagnostic(const Ifs& F, double epsilon,
                                              std::size_t trials,
                                              std::size_t horizon,
                                              std::uint64_t rng_seed);

}  // namespace ifslab
