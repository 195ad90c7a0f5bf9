#include "nlgate/search.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <random>

#include "nlgate/parallel.hpp"

namespace nlgate {

int SpectralAverage::peak_bin() const {
  if (values.size() == 0) throw std::invalid_argument("empty spectral average");
  Eigen::Index k = 0;
  values.maxCoeff(&k);
  return static_cast<int>(k) + 1;
}

SpectralAverage spectral_average(const std::vector<ControlTrajectory>& trajectories) {
  if (trajectories.empty()) throw std::invalid_argument("spectral average needs at least one trajectory");
  const int n = trajectories.front().size();
  const Real duration = trajectories.front().duration();
  SpectralAverage avg;
  avg.duration = duration;
  for (const auto& t : trajectories) {
    if (t.size() != n || std::abs(t.duration() - duration) > 1e-12)
      throw std::invalid_argument("trajectories use different time meshes");
    const ControlSpectrum s = analyze_trajectory(t);
    if (avg.values.size() == 0) avg.values = RealVector::Zero(s.size());
    avg.values += s.coefficients().cwiseAbs();
  }
  avg.values /= static_cast<Real>(trajectories.size());
  return avg;
}

RealVector band_moduli(const SpectralAverage& average, const FrequencyBand& band) {
  RealVector out = RealVector::Zero(std::max(band.size(), 0));
  for (int b = band.first; b <= band.last; ++b)
    if (b >= 1 && b <= average.values.size()) out[b - band.first] = average.values[b - 1];
  return out;
}

Real relative_cutoff(const SpectralAverage& average, Real fraction) {
  return fraction * average.values.maxCoeff();
}

FrequencyBand select_band(const SpectralAverage& average, Real cutoff) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("band cutoff must be positive");
  FrequencyBand band{1, 0};
  bool any = false;
  for (Eigen::Index k = 0; k < average.values.size(); ++k) {
    if (average.values[k] >= cutoff) {
      const int bin = static_cast<int>(k) + 1;
      if (!any) band.first = bin;
      band.last = bin;
      any = true;
    }
  }
  if (!any) throw std::runtime_error("no frequency bin reaches the band cutoff");
  return band;
}

NelderMeadResult nelder_mead(const std::function<Real(const RealVector&)>& objective, RealVector x0,
                             const RealVector& steps, const NelderMeadOptions& options,
                             const std::function<bool(Real)>& stop) {
  const int d = static_cast<int>(x0.size());
  const Real alpha = 1.0;
  const Real beta = 1.0 + 2.0 / d;
  const Real gamma = 0.75 - 0.5 / d;
  const Real delta = 1.0 - 1.0 / d;

  std::vector<RealVector> simplex(d + 1, x0);
  std::vector<Real> values(d + 1);
  int evals = 0;
  auto eval = [&](const RealVector& x) {
    ++evals;
    return objective(x);
  };
  values[0] = eval(x0);
  for (int i = 0; i < d; ++i) {
    simplex[i + 1][i] += steps[i];
    if (stop && stop(values[0])) break;
    values[i + 1] = eval(simplex[i + 1]);
  }
  std::vector<int> order(d + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  };

  if (!(stop && stop(values[0]))) {
    while (evals < options.max_evaluations) {
      sort_simplex();
      const int best = order.front();
      const int worst = order.back();
      const int second = order[d - 1];
      if (stop && stop(values[best])) break;
      if (std::abs(values[worst] - values[best]) <= options.tolerance) break;

      RealVector centroid = RealVector::Zero(d);
      for (int i = 0; i < d; ++i) centroid += simplex[order[i]];
      centroid /= d;

      const RealVector xr = centroid + alpha * (centroid - simplex[worst]);
      const Real fr = eval(xr);
      if (fr < values[best]) {
        const RealVector xe = centroid + beta * (xr - centroid);
        const Real fe = eval(xe);
        if (fe < fr) {
          simplex[worst] = xe;
          values[worst] = fe;
        } else {
          simplex[worst] = xr;
          values[worst] = fr;
        }
        continue;
      }
      if (fr < values[second]) {
        simplex[worst] = xr;
        values[worst] = fr;
        continue;
      }
      const bool outside = fr < values[worst];
      const RealVector xc = outside ? RealVector(centroid + gamma * (xr - centroid))
                                    : RealVector(centroid - gamma * (centroid - simplex[worst]));
      const Real fc = eval(xc);
      if (fc < (outside ? fr : values[worst])) {
        simplex[worst] = xc;
        values[worst] = fc;
        continue;
      }
      for (int i = 1; i <= d; ++i) {
        const int k = order[i];
        simplex[k] = simplex[best] + delta * (simplex[k] - simplex[best]);
        values[k] = eval(simplex[k]);
      }
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  const int b = static_cast<int>(it - values.begin());
  return {simplex[b], values[b], evals};
}

RealVector halton_point(int index, const RealVector& shift) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
  const int d = static_cast<int>(shift.size());
  if (d > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("Halton dimension too large");
  RealVector u(d);
  for (int k = 0; k < d; ++k) {
    const int base = kPrimes[k];
    Real f = 1.0;
    Real r = 0.0;
    for (int i = index + 1; i > 0; i /= base) {
      f /= base;
      r += f * (i % base);
    }
    u[k] = std::fmod(r + shift[k], 1.0);
  }
  return u;
}

namespace {

/// Search coordinates: real parts then imaginary parts of the band
/// coefficients, with each modulus kept within max_modulus by radial scaling.
struct SpectrumCodec {
  Real duration;
  FrequencyBand band;
  Real max_modulus;

  int dimension() const { return 2 * band.size(); }

  void project(RealVector& x) const {
    const int k = band.size();
    for (int i = 0; i < k; ++i) {
      const Real r = std::hypot(x[i], x[k + i]);
      if (r > max_modulus) {
        x[i] *= max_modulus / r;
        x[k + i] *= max_modulus / r;
      }
    }
  }

  ControlSpectrum decode(RealVector x) const {
    project(x);
    const int k = band.size();
    ComplexVector c(k);
    for (int i = 0; i < k; ++i) c[i] = Complex(x[i], x[k + i]);
    return ControlSpectrum(duration, band.first, std::move(c));
  }

  /// Point of the unit cube mapped to modulus u * max_modulus and phase in [-pi, pi).
  RealVector from_unit(const RealVector& u) const {
    const int k = band.size();
    RealVector x(2 * k);
    for (int i = 0; i < k; ++i) {
      const Real m = u[i] * max_modulus;
      const Real p = -kPi + kTwoPi * u[k + i];
      x[i] = m * std::cos(p);
      x[k + i] = m * std::sin(p);
    }
    return x;
  }
};

Real excursion_penalty(const ControlTrajectory& t, Real bound) {
  const Real over = t.max_excursion() - bound;
  return over > 0.0 ? 10.0 * over : 0.0;
}

}  // namespace

Real average_fidelity_gradient(const ControlSetup& setup, const ControlSpectrum& spectrum, const GateSpec& gate,
                               const std::vector<QubitState>& inputs, RealVector& gradient) {
  const int n = setup.samples;
  const ControlTrajectory trajectory = synthesize_trajectory(spectrum, n);
  std::vector<FidelityGradient> parts(inputs.size());
  parallel_for(static_cast<int>(inputs.size()), setup.threads, [&](int i) {
    parts[i] = fidelity_gradient(setup, trajectory, embed(inputs[i], setup.basis),
                                 gate_target(gate, inputs[i], setup.basis));
  });
  Real mean = 0.0;
  RealVector g = RealVector::Zero(n);
  for (const auto& p : parts) {
    mean += p.fidelity;
    g += p.gradient;
  }
  const Real inv = 1.0 / static_cast<Real>(inputs.size());
  mean *= inv;
  g *= inv;

  // Undo the endpoint pinning: pinned_j = raw_j - raw_0 - (raw_last - raw_0) j / (n - 1).
  RealVector g_raw = g;
  Real to_first = 0.0;
  Real to_last = 0.0;
  for (int j = 0; j < n; ++j) {
    const Real w = static_cast<Real>(j) / (n - 1);
    to_first += g[j] * (1.0 - w);
    to_last += g[j] * w;
  }
  g_raw[0] -= to_first;
  g_raw[n - 1] -= to_last;

  const int k = spectrum.size();
  const int periods = n - 1;
  gradient = RealVector::Zero(2 * k);
  for (int b = 0; b < k; ++b) {
    const long bin = spectrum.first_bin() + b;
    for (int j = 0; j < n; ++j) {
      const Real angle = kTwoPi * static_cast<Real>(bin * j % periods) / periods;
      gradient[b] += g_raw[j] * std::cos(angle);
      gradient[k + b] -= g_raw[j] * std::sin(angle);
    }
  }
  return mean;
}

GlobalSearchResult global_search(const ControlSetup& setup, const FrequencyBand& band, const GateSpec& gate,
                                 const FibonacciLattice& lattice, const GlobalSearchOptions& options) {
  if (band.empty()) throw std::invalid_argument("global search needs a nonempty band");
  if (options.budget <= 0) throw std::invalid_argument("global search budget must be positive");
  if (options.initial_moduli.size() != 0 && options.initial_moduli.size() != band.size())
    throw std::invalid_argument("initial moduli do not match the band");
  if (setup.samples < min_samples_for_band(band.last))
    throw std::invalid_argument("time mesh too coarse for the requested band");

  const SpectrumCodec codec{setup.duration, band, options.max_modulus};
  const int d = codec.dimension();
  int evaluations = 0;

  auto mean_fidelity = [&](const RealVector& x) {
    ++evaluations;
    const ControlSpectrum s = codec.decode(x);
    const ControlTrajectory t = synthesize_trajectory(s, setup.samples);
    const FidelityReport r = average_gate_fidelity(setup, t, gate, lattice.states);
    return r.mean - excursion_penalty(t, setup.max_excursion);
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);
  RealVector shift(d);
  for (int i = 0; i < d; ++i) shift[i] = unif(rng);

  RealVector best_x;
  Real best_value = -1e300;
  int starts = 0;
  bool feasible = false;
  const Real thr = options.threshold;

  for (int s = 0; s < options.budget && !feasible; ++s) {
    ++starts;
    RealVector x0;
    if (s == 0) {
      x0 = RealVector::Zero(d);  // zero phases
      if (options.initial_moduli.size() != 0)
        x0.head(band.size()) = options.initial_moduli.cwiseMax(0.0).cwiseMin(options.max_modulus);
      else
        x0.head(band.size()).setConstant(std::min(options.initial_modulus, options.max_modulus));
    } else {
      x0 = codec.from_unit(halton_point(s - 1, shift));
    }

    RealVector x;
    Real value;
    if (options.method == LocalMethod::NelderMead) {
      RealVector steps(d);
      steps.setConstant(0.1 * options.max_modulus);
      NelderMeadOptions nm;
      nm.max_evaluations = options.local_evaluations;
      const NelderMeadResult r = nelder_mead(
          [&](const RealVector& v) { return -mean_fidelity(v); }, x0, steps, nm,
          [thr](Real f) { return -f >= thr; });
      x = r.x;
      value = -r.value;
    } else {
      auto objective = [&](const RealVector& v, RealVector& grad) {
        ++evaluations;
        const ControlSpectrum sp = codec.decode(v);
        RealVector gfid;
        const Real mean = average_fidelity_gradient(setup, sp, gate, lattice.states, gfid);
        const ControlTrajectory t = synthesize_trajectory(sp, setup.samples);
        grad = -gfid;
        return -(mean - excursion_penalty(t, setup.max_excursion));
      };
      const LbfgsResult r = minimize_lbfgs(
          objective, [&](RealVector& v) { codec.project(v); }, x0, options.local_iterations, 10,
          [thr](Real f) { return -f >= thr; });
      x = r.x;
      value = -r.value;
    }
    codec.project(x);
    if (value > best_value) {
      best_value = value;
      best_x = x;
    }
    feasible = best_value >= thr;
  }

  GlobalSearchResult result{codec.decode(best_x), {}, feasible, starts, evaluations};
  result.report = average_gate_fidelity(setup, result.spectrum, gate, lattice);
  result.feasible = result.report.mean >= thr &&
                    synthesize_trajectory(result.spectrum, setup.samples).max_excursion() <= setup.max_excursion;
  return result;
}

StageOneResult per_state_stage(const ControlSetup& setup, const GateSpec& gate, const FibonacciLattice& lattice,
                               const OptimalControlOptions& options) {
  StageOneResult out;
  const int m = lattice.count;
  std::vector<std::optional<OptimalControlResult>> results(m);
  ControlSetup inner = setup;
  inner.threads = 1;
  parallel_for(m, setup.threads, [&](int i) {
    results[i] = per_state_optimal_control(inner, lattice.states[i], gate,
                                           ControlTrajectory::zero(setup.duration, setup.samples), options);
  });
  out.all_converged = true;
  std::vector<ControlTrajectory> trajectories;
  for (auto& r : results) {
    out.all_converged = out.all_converged && r->converged;
    trajectories.push_back(r->trajectory);
    out.controls.push_back(std::move(*r));
  }
  out.average = spectral_average(trajectories);
  return out;
}

MeshSearchResult alpha_mesh_search(const SpatialGrid& grid, Nonlinearity g, const ControlSetup& time_mesh,
                                   const GateSpec& gate, const MeshDomain& domain,
                                   const MeshSearchOptions& options) {
  if (!(domain.alpha2_min > 0.0) || domain.alpha2_max < domain.alpha2_min || domain.alpha4_min < 0.0 ||
      domain.alpha4_max < domain.alpha4_min || !(domain.step > 0.0))
    throw std::invalid_argument("invalid potential search domain");
  const long n2 = static_cast<long>(std::floor((domain.alpha2_max - domain.alpha2_min) / domain.step + 1e-9)) + 1;
  const long n4 = static_cast<long>(std::floor((domain.alpha4_max - domain.alpha4_min) / domain.step + 1e-9)) + 1;
  const FibonacciLattice lattice = fibonacci_lattice(options.lattice_size);

  MeshSearchResult out;
  Real best_mean = -1.0;
  for (long i2 = 0; i2 < n2; ++i2) {
    for (long i4 = 0; i4 < n4; ++i4) {
      if (options.max_candidates > 0 && out.candidates >= options.max_candidates) return out;
      ++out.candidates;
      const TrapPotential trap(domain.alpha2_min + i2 * domain.step, domain.alpha4_min + i4 * domain.step);
      ControlSetup setup = time_mesh;
      try {
        setup.basis = mode_basis(trap, g, grid, options.modes, options.stationary);
      } catch (const SolverError&) {
        continue;
      }
      OptimalControlOptions control = options.control;
      control.target_fidelity = options.per_state_threshold;
      const StageOneResult stage = per_state_stage(setup, gate, lattice, control);
      if (!stage.all_converged) continue;
      FrequencyBand band;
      try {
        band = select_band(stage.average, relative_cutoff(stage.average, options.band_cutoff_fraction));
      } catch (const std::runtime_error&) {
        continue;
      }
      GlobalSearchOptions search_options = options.search;
      search_options.initial_moduli = band_moduli(stage.average, band);
      GlobalSearchResult search = global_search(setup, band, gate, lattice, search_options);
      if (search.report.mean > best_mean) {
        best_mean = search.report.mean;
        out.trap = trap;
        out.band = band;
        out.search = search;
      }
      if (search.feasible) {
        out.feasible = true;
        out.trap = trap;
        out.band = band;
        out.search = std::move(search);
        return out;
      }
    }
  }
  return out;
}

}  // namespace nlgate
