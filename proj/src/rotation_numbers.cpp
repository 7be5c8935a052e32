#include "ifslab/rotation_numbers.hpp"

#include <algorithm>
#include <cmath>

#include "ifslab/random_dynamics.hpp"

namespace ifslab {

TranslationEstimate translation_number(const CircleMap& f, std::size_t n) {
  if (n == 0) throw DomainError("translation number needs at least one step");
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t = f.lift(t);
  TranslationEstimate est;
  est.value = t / static_cast<double>(n);
  est.error_bound = 1.0 / static_cast<double>(n);
  est.iterations = n;
  return est;
}

namespace {

struct BeamState {
  std::vector<int> word;
  double lower = 0.0;
  double upper = 0.0;
  double spread() const { return upper - lower; }
};

}  // namespace

std::optional<GapWitness> gap_word_search(const Ifs& F, double epsilon,
                                          std::size_t max_len,
                                          std::size_t beam) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (beam == 0) throw DomainError("beam width must be positive");

  std::vector<BeamState> frontier(1);
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<BeamState> next;
    next.reserve(frontier.size() * static_cast<std::size_t>(F.size()));
    for (const BeamState& st : frontier) {
      for (int sym = 1; sym <= F.size(); ++sym) {
        const CircleMap& f = F.at(sym);
        BeamState child;
        child.word = st.word;
        child.word.push_back(sym);
        child.lower = f.lift(st.lower) - epsilon;
        child.upper = f.lift(st.upper) + epsilon;
        next.push_back(std::move(child));
      }
    }
    std::sort(next.begin(), next.end(), [](const BeamState& a, const BeamState& b) {
      return a.spread() > b.spread();
    });
    if (next.size() > beam) next.resize(beam);
    frontier = std::move(next);

    const BeamState& best = frontier.front();
    if (best.spread() > 1.0) {
      GapWitness w;
      w.word = Word(best.word, F.size());
      // Independent re-threading of both pseudo-orbits.
      double lo = 0.0, up = 0.0;
      for (int sym : best.word) {
        lo = F.at(sym).lift(lo) - epsilon;
        up = F.at(sym).lift(up) + epsilon;
      }
      if (std::abs(lo - best.lower) > 1e-9 || std::abs(up - best.upper) > 1e-9)
        throw InconsistencyError("gap witness failed re-validation");
      w.lower = lo;
      w.upper = up;
      return w;
    }
  }
  return std::nullopt;
}

std::optional<std::pair<double, double>> rho_crossing_search(
    const Ifs& F, const Word& w, double target,
    std::pair<double, double> delta_range, std::size_t n) {
  if (w.size() == 0) throw DomainError("crossing search needs a nonempty word");
  if (!(delta_range.first < delta_range.second))
    throw DomainError("invalid delta range");

  auto rho = [&](double delta) {
    Ifs shifted = translate_ifs(F, delta);
    CircleMap g = compose_word(shifted, w);
    return translation_number(g, n);
  };

  TranslationEstimate lo = rho(delta_range.first);
  TranslationEstimate hi = rho(delta_range.second);
  // The shifted translation number is nondecreasing in delta. If the target
  // lies outside [rho(lo), rho(hi)] beyond the estimation error, there is no
  // crossing to bracket.
  if (lo.value - lo.error_bound > target || hi.value + hi.error_bound < target)
    return std::nullopt;

  double a = delta_range.first, b = delta_range.second;
  while (b - a >= 1e-10) {
    double mid = 0.5 * (a + b);
    if (rho(mid).value < target)
      a = mid;
    else
      b = mid;
  }
  return std::make_pair(a, b);
}

std::vector<double> measure_growth_diagnostic(const Ifs& F, double epsilon,
                                              std::size_t trials,
                                              std::size_t horizon,
                                              std::uint64_t rng_seed) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (trials == 0 || horizon == 0)
    throw DomainError("need at least one trial and one step");

  // Backward stationary estimate used as the reference mass. The sample size
  // trades accuracy for runtime; 2e4 keeps the CDF error near 1e-2.
  const std::size_t kMeasureSamples = 20000;
  EmpiricalMeasure mu_minus =
      empirical_stationary(inverse_ifs(F), CirclePoint(0.0), kMeasureSamples,
                           kMeasureSamples / 10, split_seed(rng_seed, 1ull << 32));

  std::vector<double> mean_mass(horizon, 0.0);
  std::vector<double> probs = F.effective_probs();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(split_seed(rng_seed, trial));
    double lo = 0.0, up = 0.0;
    for (std::size_t step = 0; step < horizon; ++step) {
      const CircleMap& f = F.at(rng.next_symbol(probs));
      lo = f.lift(lo) - epsilon;
      up = f.lift(up) + epsilon;
      mean_mass[step] += mu_minus.cdf_lift(up) - mu_minus.cdf_lift(lo);
    }
  }
  for (double& v : mean_mass) v /= static_cast<double>(trials);
  return mean_mass;
}

}  // namespace ifslab
