#include "hyperwalk/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/parallel.hpp"
#include "hyperwalk/random.hpp"

namespace hyperwalk {

namespace {

constexpr std::size_t kChunk = 4096;

// Step probabilities by letter code; rejects anything but single letters.
std::vector<double> letter_probabilities(const StepDistribution& mu, int k) {
  if (!mu.nearest_neighbor()) {
    throw InvalidArgument("step distribution must be supported on generators and inverses, got " +
                          mu.str());
  }
  if (mu.rank() > k) throw InvalidArgument("step distribution uses generators beyond rank k");
  std::vector<double> p(2 * static_cast<std::size_t>(k), 0.0);
  for (const auto& atom : mu.atoms()) p[atom.element[0].code()] += atom.probability;
  return p;
}

std::vector<Letter> alphabet(int k) {
  std::vector<Letter> out;
  for (int code = 0; code < 2 * k; ++code) out.push_back(Letter::from_code(static_cast<std::uint8_t>(code)));
  return out;
}

}  // namespace

FirstPassageVector first_passage_solve(const StepDistribution& mu, int k, std::size_t max_iterations,
                                       double tolerance) {
  const std::vector<double> p = letter_probabilities(mu, k);
  const std::size_t m = p.size();
  FirstPassageVector out;
  out.k = k;
  out.F.assign(m, 0.0);
  std::vector<double> next(m);
  auto update = [&](const std::vector<double>& F, std::vector<double>& G) {
    double change = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      double back = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        if (t != s) back += p[t] * F[t ^ 1];
      }
      G[s] = p[s] + F[s] * back;
      change = std::max(change, std::abs(G[s] - F[s]));
    }
    return change;
  };
  double best = INFINITY;
  std::size_t since_best = 0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    const double change = update(out.F, next);
    out.F.swap(next);
    out.iterations = it;
    if (change < best) {
      best = change;
      since_best = 0;
    } else {
      ++since_best;
    }
    // The sequence increases monotonically to the minimal solution; stop once
    // the update is at rounding level or has stopped shrinking.
    if (change <= 1e-16 || (change <= tolerance && since_best >= 50)) break;
  }
  out.residual = update(out.F, next);
  if (out.residual > tolerance) {
    std::ostringstream msg;
    msg << "first-passage iteration stalled at residual " << out.residual << " after "
        << out.iterations << " iterations";
    throw NonConvergence(msg.str());
  }
  return out;
}

FirstPassageSample first_passage_mc(const StepDistribution& mu, int k, std::size_t paths,
                                    std::uint64_t seed, unsigned jobs, std::size_t escape) {
  letter_probabilities(mu, k);
  const std::size_t m = 2 * static_cast<std::size_t>(k);
  const std::size_t chunks = (paths + kChunk - 1) / kChunk;
  constexpr std::uint64_t kStepCap = 1u << 22;
  const auto counts = parallel_map(chunks, jobs, [&](std::size_t chunk) {
    std::vector<std::size_t> hits(m, 0);
    const std::size_t end = std::min(paths, (chunk + 1) * kChunk);
    std::vector<char> seen(m);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const CounterStream stream(seed, i);
      ReducedWord w;
      std::fill(seen.begin(), seen.end(), 0);
      for (std::uint64_t step = 0; w.size() < escape && step < kStepCap; ++step) {
        w.append(mu.atoms()[mu.sample(stream.uniform(step))].element[0]);
        if (w.size() == 1) seen[w[0].code()] = 1;
      }
      for (std::size_t s = 0; s < m; ++s) hits[s] += seen[s];
    }
    return hits;
  });
  FirstPassageSample out;
  out.paths = paths;
  out.frequency.assign(m, 0.0);
  out.std_error.assign(m, 0.0);
  for (const auto& c : counts) {
    for (std::size_t s = 0; s < m; ++s) out.frequency[s] += static_cast<double>(c[s]);
  }
  for (std::size_t s = 0; s < m; ++s) {
    const double f = out.frequency[s] / static_cast<double>(paths);
    out.frequency[s] = f;
    out.std_error[s] = std::sqrt(f * (1.0 - f) / static_cast<double>(paths));
  }
  return out;
}

double CylinderMeasure::mass(const ReducedWord& w) const {
  if (w.empty()) return 1.0;
  const auto it = masses.find(w);
  return it == masses.end() ? 0.0 : it->second;
}

double CylinderMeasure::std_error(const ReducedWord& w) const {
  if (samples == 0) return 0.0;
  const double p = mass(w);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

std::vector<ReducedWord> CylinderMeasure::words(std::size_t length) const {
  return reduced_words(k, length);
}

std::vector<ReducedWord> reduced_words(int k, std::size_t length) {
  std::vector<ReducedWord> out{ReducedWord()};
  const std::vector<Letter> letters = alphabet(k);
  for (std::size_t d = 0; d < length; ++d) {
    std::vector<ReducedWord> grown;
    grown.reserve(out.size() * letters.size());
    for (const ReducedWord& w : out) {
      for (Letter x : letters) {
        if (!w.empty() && w.back() == x.inverse()) continue;
        ReducedWord v = w;
        v.append(x);
        grown.push_back(std::move(v));
      }
    }
    out.swap(grown);
  }
  return out;
}

CylinderMeasure harmonic_cylinder_mc(const StepDistribution& mu, int k, std::size_t depth,
                                     std::size_t samples, std::uint64_t seed, unsigned jobs,
                                     std::size_t steps) {
  if (depth == 0) throw InvalidArgument("cylinder depth must be at least 1");
  if (samples == 0) throw InvalidArgument("need at least one sample");
  if (steps == 0) steps = 64 * depth + 256;
  const std::size_t window = steps - steps / 4;
  struct Tally {
    std::map<ReducedWord, std::size_t> counts;
    std::size_t failures = 0;
  };
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  const auto tallies = parallel_map(chunks, jobs, [&](std::size_t chunk) {
    Tally t;
    const std::size_t end = std::min(samples, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const SamplePath path = sample_path(mu, steps, seed, i);
      if (path.stable_depth(window, steps) < depth) {
        ++t.failures;
        continue;
      }
      ReducedWord w = path.stable_prefix(window, steps);
      w.truncate(depth);
      ++t.counts[w];
    }
    return t;
  });
  std::map<ReducedWord, std::size_t> counts;
  std::size_t failures = 0;
  for (const Tally& t : tallies) {
    failures += t.failures;
    for (const auto& [w, c] : t.counts) counts[w] += c;
  }
  if (static_cast<double>(failures) > 0.01 * static_cast<double>(samples)) {
    throw Unstable(std::to_string(failures) + " of " + std::to_string(samples) +
                   " paths did not settle to depth " + std::to_string(depth));
  }
  CylinderMeasure out;
  out.k = k;
  out.depth = depth;
  out.samples = samples - failures;
  const double total = static_cast<double>(out.samples);
  for (const auto& [w, c] : counts) {
    for (std::size_t d = 1; d <= depth; ++d) out.masses[w.prefix(d)] += static_cast<double>(c) / total;
  }
  return out;
}

double HarmonicKernel::cylinder(const ReducedWord& w) const {
  if (w.empty()) return 1.0;
  double mass = entry[w[0].code()];
  for (std::size_t i = 1; i < w.size(); ++i) mass *= q[w[i - 1].code()][w[i].code()];
  return mass;
}

CylinderMeasure HarmonicKernel::predict(std::size_t depth) const {
  CylinderMeasure out;
  out.k = k;
  out.depth = depth;
  for (std::size_t d = 1; d <= depth; ++d) {
    for (const ReducedWord& w : reduced_words(k, d)) out.masses[w] = cylinder(w);
  }
  return out;
}

HarmonicKernel harmonic_kernel(const FirstPassageVector& F, const StepDistribution& mu) {
  const std::vector<double> p = letter_probabilities(mu, F.k);
  const std::size_t m = p.size();
  HarmonicKernel out;
  out.k = F.k;
  out.entry.assign(m, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    const double f = F.F[s], g = F.F[s ^ 1];
    out.entry[s] = f * (1.0 - g) / (1.0 - f * g);
    if (!(out.entry[s] > 0.0) || !std::isfinite(out.entry[s])) {
      throw ValidationFailed("cylinder [" + std::string(1, Letter::from_code(static_cast<std::uint8_t>(s)).to_char()) +
                             "] has no exit mass; the walk must charge every generator and inverse");
    }
  }
  out.q.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t s = 0; s < m; ++s) {
      if (s != (t ^ 1)) out.q[t][s] = F.F[t] * out.entry[s] / out.entry[t];
    }
  }
  return out;
}

StationarityResult stationarity_residual(const CylinderMeasure& nu, const StepDistribution& mu) {
  if (nu.depth < 2) {
    throw DepthInsufficient("stationarity needs cylinders of depth 2, measure has depth " +
                            std::to_string(nu.depth));
  }
  const std::vector<double> p = letter_probabilities(mu, nu.k);
  const std::size_t m = p.size();
  // Mass of s^-1 [w] by cases on whether w starts with s.
  auto pulled = [&](Letter s, const ReducedWord& w) {
    if (w[0] == s) {
      if (w.size() == 1) return 1.0 - nu.mass(ReducedWord(std::vector<Letter>{s.inverse()}));
      return nu.mass(ReducedWord(w.letters().subspan(1)));
    }
    ReducedWord v(std::vector<Letter>{s.inverse()});
    v.append(w);
    return nu.mass(v);
  };

  // Depth-D counts for the Monte Carlo error of each residual term.
  std::vector<std::pair<ReducedWord, double>> leaves;
  if (nu.samples > 0) {
    for (const ReducedWord& u : reduced_words(nu.k, nu.depth)) {
      const double c = nu.mass(u) * static_cast<double>(nu.samples);
      if (c > 0.0) leaves.emplace_back(u, c);
    }
  }
  auto starts_with = [](const ReducedWord& u, const ReducedWord& w) {
    return u.size() >= w.size() && common_prefix_length(u.letters(), w.letters()) == w.size();
  };

  StationarityResult out;
  for (std::size_t d = 1; d < nu.depth; ++d) {
    for (const ReducedWord& w : reduced_words(nu.k, d)) {
      double expected = 0.0;
      for (std::size_t s = 0; s < m; ++s) {
        if (p[s] > 0.0) expected += p[s] * pulled(Letter::from_code(static_cast<std::uint8_t>(s)), w);
      }
      const double r = std::abs(nu.mass(w) - expected);
      double se = 0.0;
      if (!leaves.empty()) {
        const double n = static_cast<double>(nu.samples);
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& [u, c] : leaves) {
          double f = starts_with(u, w) ? 1.0 : 0.0;
          for (std::size_t s = 0; s < m; ++s) {
            if (p[s] == 0.0) continue;
            const Letter x = Letter::from_code(static_cast<std::uint8_t>(s));
            ReducedWord moved(std::vector<Letter>{x});
            moved.append(u);
            if (starts_with(moved, w)) f -= p[s];
          }
          sum += c * f;
          sum_sq += c * f * f;
        }
        const double mean = sum / n;
        se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
      }
      out.max_std_error = std::max(out.max_std_error, se);
      if (out.worst.empty() || r > out.residual) {
        out.residual = r;
        out.worst = w;
        out.std_error_at_worst = se;
      }
    }
  }
  return out;
}

KernelValidation validate_kernel(const HarmonicKernel& kernel, const CylinderMeasure& empirical,
                                 const StepDistribution& mu, double sigmas, double stationarity_gate) {
  if (empirical.samples == 0) throw InvalidArgument("kernel validation needs a Monte Carlo measure");
  KernelValidation out;
  const double n = static_cast<double>(empirical.samples);
  for (std::size_t d = 1; d <= empirical.depth; ++d) {
    for (const ReducedWord& w : reduced_words(kernel.k, d)) {
      const double predicted = kernel.cylinder(w);
      const double se = std::sqrt(std::max(predicted * (1.0 - predicted), 1e-300) / n);
      const double z = std::abs(predicted - empirical.mass(w)) / se;
      if (z > out.worst_sigma) {
        out.worst_sigma = z;
        out.worst = w;
      }
      if (z > sigmas) {
        std::ostringstream msg;
        msg << "cylinder [" << w.str() << "]: predicted " << predicted << ", empirical "
            << empirical.mass(w) << " (" << z << " standard errors)";
        throw ValidationFailed(msg.str());
      }
    }
  }
  const StationarityResult st = stationarity_residual(kernel.predict(std::max<std::size_t>(3, empirical.depth)), mu);
  out.stationarity = st.residual;
  if (st.residual > stationarity_gate) {
    std::ostringstream msg;
    msg << "cylinder [" << st.worst.str() << "]: stationarity residual " << st.residual;
    throw ValidationFailed(msg.str());
  }
  return out;
}

}  // namespace hyperwalk
