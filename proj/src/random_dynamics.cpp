#include "ifslab/random_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ifslab {

double SynchronizationStats::mean_span() const {
  if (final_spans.empty()) return 0.0;
  return std::accumulate(final_spans.begin(), final_spans.end(), 0.0) /
     static_cast<double>(final_spans.size());
}

double SynchronizationStats::mean_collapse() const {
  if (collapse_fractions.empty()) return 0.0;
  return std::accumulate(collapse_fractions.begin(), collapse_fractions.end(), 0.0) /
     static_cast<double>(collapse_fractions.size());
}

Word sample_word(int s, const std::vector<double>& probabilities, std::size_t n,
        std::uint64_t rng_seed) {
  if (s < 1) throw ConstructionError("alphabet size must be positive");
  if (probabilities.size() != static_cast<std::size_t>(s))
    throw ConstructionError("probability count does not match alphabet size");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0)) throw ConstructionError("probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConstructionError("probabilities must sum to 1");

  Rng rng(rng_seed);
  std::vector<int> symbols(n);
  for (std::size_t i = 0; i < n; ++i) symbols[i] = rng.next_symbol(probabilities);
  return Word(std::move(symbols), s);
}

EmpiricalMeasure empirical_stationary(const Ifs& F, CirclePoint x0, std::size_t N,
                   std::size_t burn_in, std::uint64_t rng_seed) {
  if (N <= burn_in) throw DomainError("need more samples than burn-in steps");
  std::vector<double> probs = F.effective_probs();
  Rng rng(rng_seed);

  double x = x0.x;
  std::vector<double> atoms;
  atoms.reserve(N - burn_in);
  for (std::size_t i = 0; i < N; ++i) {
    if (i >= burn_in) atoms.push_back(x);
    x = F.at(rng.next_symbol(probs)).apply(x);
  }
  std::vector<double> weights(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  return EmpiricalMeasure(std::move(atoms), std::move(weights));
}

double stationarity_residual(const Ifs& F, const EmpiricalMeasure& mu) {
  std::vector<double> probs = F.effective_probs();
  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve(mu.size() * probs.size());
  weights.reserve(mu.size() * probs.size());
  for (int j = 1; j <= F.size(); ++j) {
    const CircleMap& f = F.at(j);
    double p = probs[static_cast<std::size_t>(j - 1)];
    for (std::size_t i = 0; i < mu.size(); ++i) {
      atoms.push_back(f.apply(mu.atoms()[i]));
      weights.push_back(p * mu.weights()[i]);
    }
  }
  EmpiricalMeasure pushed(std::move(atoms), std::move(weights));
  return wasserstein_circle(mu, pushed);
}

SynchronizationStats synchronization_test(const Ifs& F, std::size_t cloud_size,
                     std::size_t n, std::size_t trials,
                     std::uint64_t rng_seed, double tol) {
  if (cloud_size < 2) throw DomainError("cloud needs at least two points");
  std::vector<double> probs = F.effective_probs();

  SynchronizationStats stats;
  stats.cloud_size = cloud_size;
  stats.steps = n;
  stats.trials = trials;
  stats.tol = tol;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(split_seed(rng_seed, trial));
    std::vector<double> cloud(cloud_size);
    for (std::size_t i = 0; i < cloud_size; ++i)
      cloud[i] = static_cast<double>(i) / static_cast<double>(cloud_size);
    for (std::size_t step = 0; step < n; ++step) {
      const CircleMap& f = F.at(rng.next_symbol(probs));
      for (double& p : cloud) p = f.apply(p);
    }
    std::vector<double> sorted = cloud;
    std::sort(sorted.begin(), sorted.end());
    double largest_gap = (sorted.front() + 1.0) - sorted.back();
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      largest_gap = std::max(largest_gap, sorted[i + 1] - sorted[i]);
    stats.final_spans.push_back(1.0 - largest_gap);

    std::size_t close_pairs = 0;
    std::size_t total_pairs = cloud_size * (cloud_size - 1) / 2;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (std::size_t j = i + 1; j < sorted.size(); ++j)
        if (circle_dist(sorted[i], sorted[j]) < tol) ++close_pairs;
    stats.collapse_fractions.push_back(static_cast<double>(close_pairs) /
                     static_cast<double>(total_pairs));
  }
  return stats;
}

SyncReport estimate_d(const Ifs& F, std::size_t partition_size, std::size_t n,
           std::size_t trials, double contraction_tol,
           std::uint64_t rng_seed) {
  if (partition_size < 8) throw DomainError("partition too coarse");
  if (trials == 0) throw DomainError("need at least one trial");
  const std::size_t P = partition_size;
  if (contraction_tol <= 0.0) contraction_tol = 4.0 / static_cast<double>(P);

  SyncReport report;
  report.partition_size = P;
  report.steps = n;
  report.trials = trials;
  report.contraction_tol = contraction_tol;
  report.contraction_curve.assign(n, 0.0);

  std::vector<double> probs = F.effective_probs();

  struct TrialOutcome {
    int runs;  // -1: nothing contracted, 0: everything contracted
    std::vector<CirclePoint> midpoints;
  };
  std::vector<TrialOutcome> outcomes(trials);

  std::vector<double> lifts(P), lengths(P), scratch(P);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(split_seed(rng_seed, trial));
    for (std::size_t k = 0; k < P; ++k)
      lifts[k] = static_cast<double>(k) / static_cast<double>(P);

    for (std::size_t step = 0; step < n; ++step) {
      const CircleMap& f = F.at(rng.next_symbol(probs));
      for (std::size_t k = 0; k < P; ++k) lifts[k] = f.lift(lifts[k]);
      for (std::size_t k = 0; k < P; ++k) {
        double next = (k + 1 < P) ? lifts[k + 1] : lifts[0] + 1.0;
        lengths[k] = next - lifts[k];
      }
      scratch = lengths;
      auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(P / 2);
      std::nth_element(scratch.begin(), mid, scratch.end());
      report.contraction_curve[step] += *mid;
    }

    std::vector<char> big(P);
    std::size_t big_count = 0;
    for (std::size_t k = 0; k < P; ++k) {
      big[k] = lengths[k] > contraction_tol;
      big_count += big[k] ? 1 : 0;
    }

    TrialOutcome& out = outcomes[trial];
    if (big_count == P) {
      out.runs = -1;
    } else if (big_count == 0) {
      out.runs = 0;
    } else {
      // Count maximal cyclic runs of non-contracted arcs and record
      // their source-coordinate midpoints.
      out.runs = 0;
      std::size_t k = 0;
      while (big[k]) ++k;  // start inside a contracted stretch
      for (std::size_t seen = 0; seen < P; ++seen) {
        std::size_t idx = (k + seen) % P;
        if (big[idx] && !big[(idx + P - 1) % P]) {
          std::size_t len = 0;
          while (big[(idx + len) % P]) ++len;
          ++out.runs;
          double mid_pos = (static_cast<double>(idx) + static_cast<double>(len) / 2.0) /
                  static_cast<double>(P);
          out.midpoints.push_back(CirclePoint(mid_pos));
        }
      }
    }
  }

  for (double& v : report.contraction_curve) v /= static_cast<double>(trials);

  for (const TrialOutcome& out : outcomes) report.histogram[out.runs] += 1;
  auto mode = std::max_element(report.histogram.begin(), report.histogram.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
  report.mode_fraction = static_cast<double>(mode->second) / static_cast<double>(trials);
  if (mode->first >= 1 && 2 * mode->second > static_cast<int>(trials)) {
    report.conclusive = true;
    report.d_estimate = mode->first;
    for (const TrialOutcome& out : outcomes)
      if (out.runs == report.d_estimate)
        report.repeller_samples.push_back(out.midpoints);
  }
  return report;
}

double repeller_pushforward_check(const Ifs& F, const Word& omega_prefix,
                 const std::vector<CirclePoint>& r_omega,
                 const std::vector<CirclePoint>& r_shifted) {
  if (omega_prefix.size() == 0) throw DomainError("need at least one symbol");
  if (r_omega.empty() || r_shifted.empty()) throw DomainError("empty repeller set");
  const CircleMap& f = F.at(omega_prefix.symbols[0]);

  std::vector<double> image;
  image.reserve(r_omega.size());
  for (CirclePoint p : r_omega) image.push_back(f.apply(p.x));

  double h = 0.0;
  for (double x : image) {
    double best = 1.0;
    for (CirclePoint y : r_shifted) best = std::min(best, circle_dist(x, y.x));
    h = std::max(h, best);
  }
  for (CirclePoint y : r_shifted) {
    double best = 1.0;
    for (double x : image) best = std::min(best, circle_dist(x, y.x));
    h = std::max(h, best);
  }
  return h;
}

}  // namespace ifslab
