// Copyright 2026 The hypvol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hypvol/volume.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>
#include <boost/random/sobol.hpp>

#include "hypvol/error.hpp"

namespace hypvol {

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kQMC: return "QMC";
    case Strategy::kMC: return "MC";
    case Strategy::kSubdivision: return "Subdivision";
  }
  return "?";
}

std::vector<KleinSimplex> SimplicesOf(const KleinPolytope& k) {
  std::vector<KleinSimplex> out;
  for (const std::vector<int>& s : k.simplices) {
    KleinSimplex simplex;
    for (std::size_t a = 0; a < s.size(); ++a) {
      const KleinPoint& p = k.points[s[a]];
      std::vector<double> y;
      for (const Real& c : p.y) y.push_back(static_cast<double>(c));
      if (p.kind == KleinPoint::Kind::kIdeal) {
        // Put the cusp exactly on the sphere in double.
        double norm = 0;
        for (double c : y) norm += c * c;
        norm = std::sqrt(norm);
        for (double& c : y) c /= norm;
        simplex.ideal_vertex = static_cast<int>(a);
      }
      simplex.vertices.push_back(std::move(y));
    }
    out.push_back(std::move(simplex));
  }
  return out;
}

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Student t quantile with the one-sided tail mass of 3 normal sigmas.
double CoverageFactor(double dof) {
  if (!(dof < 1e7)) return 3.0;
  const boost::math::students_t dist(std::max(dof, 1.0));
  return boost::math::quantile(boost::math::complement(dist, 0.0013498980316300946));
}

// x^(twice/2) for x > 0.
double PowHalf(double x, int twice) {
  const bool negative = twice < 0;
  int e = negative ? -twice : twice;
  double out = (e % 2) ? std::sqrt(x) : 1.0;
  e /= 2;
  double base = x;
  while (e) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return negative ? 1.0 / out : out;
}

double AbsDeterminant(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  double det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i][k]) > std::abs(m[p][k])) p = i;
    if (m[p][k] == 0) return 0;
    std::swap(m[p], m[k]);
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return std::abs(det);
}

void ParallelFor(std::size_t count, unsigned threads, auto&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

struct SimplexIntegrator::State {
  struct Replicate {
    std::unique_ptr<boost::random::sobol> sobol;
    std::mt19937_64 rng;
    // Linear matrix scramble of the top 32 Sobol bits plus a digital shift:
    // column j of the lower-triangular matrix is scramble[d][j].
    std::vector<std::array<std::uint64_t, 32>> scramble;
    std::vector<std::uint64_t> shift;
    long double sum = 0;
    std::uint64_t count = 0;
  };
  struct Stratum {
    int shell = -1;  // -1: the whole simplex
    std::vector<Replicate> reps;
  };

  int n = 0;
  VolumeOptions options;
  std::uint64_t stream = 0;
  std::vector<std::vector<double>> points;  // cusp first when present
  bool cusp = false;
  double scale = 0;     // n! times the Euclidean volume
  double c_min = 0;     // lower bound of a - b t over the cone
  std::uint64_t target_points = 0;
  // Standard error before the last refinement, scaled by the point ratio.
  double predicted_error = 0;
  std::vector<Stratum> strata;
  std::vector<double> u, lambda;
  std::vector<double> inv_power;  // 1 / (n - k)
  double inv_fact_n = 1, inv_fact_face = 1;  // 1/n!, 1/(n-1)!

  Stratum NewStratum(int shell) const {
    Stratum s;
    s.shell = shell;
    for (int r = 0; r < options.replicates; ++r) {
      const std::uint32_t words[] = {
          static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
          static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(shell + 1)};
      std::seed_seq seq(std::begin(words), std::end(words));
      Replicate rep;
      rep.rng.seed(seq);
      if (options.sampler == Strategy::kQMC) {
        rep.sobol = std::make_unique<boost::random::sobol>(static_cast<std::size_t>(n));
        rep.scramble.resize(n);
        for (int d = 0; d < n; ++d) {
          for (int j = 0; j < 32; ++j) {
            const std::uint64_t diagonal = std::uint64_t{1} << (63 - j);
            rep.scramble[d][j] = diagonal | (rep.rng() & (diagonal - 1));
          }
          rep.shift.push_back(rep.rng());
        }
      }
      s.reps.push_back(std::move(rep));
    }
    return s;
  }

  std::uint64_t PointsFor(const Stratum& s) const {
    if (s.shell < 0) return target_points;
    // Shell k carries roughly 2^(-k (n-1)/2) of the cusp mass.
    const int drop = s.shell * (n - 1) / 2;
    const std::uint64_t floor_points = std::min<std::uint64_t>(target_points, 64);
    if (drop >= 63) return floor_points;
    return std::max(floor_points, target_points >> drop);
  }

  double Density(const double* v, int shell) {
    if (!cusp) {
      // Collapsed coordinates onto all n + 1 vertices, with v_k drawn from
      // density (n - k) v^(n-k-1) so that the points are uniform.
      double prod = 1;
      for (int k = 0; k < n; ++k) {
        const double w = std::pow(v[k], inv_power[k]);
        lambda[k] = prod * (1 - w);
        prod *= w;
      }
      lambda[n] = prod;
      double norm2 = 0;
      for (int c = 0; c < n; ++c) {
        double x = 0;
        for (int i = 0; i <= n; ++i) x += lambda[i] * points[i][c];
        norm2 += x * x;
      }
      const double g = 1 - norm2;
      if (!(g > 0)) throw Error(ErrorCode::kNonConvergent, "sample point outside the ball");
      return scale * inv_fact_n * PowHalf(g, -(n + 1));
    }
    const double t = std::ldexp(std::exp2(-v[0]), -shell);
    // Collapsed coordinates on the face opposite the cusp (n points).
    double prod = 1;
    for (int k = 1; k < n; ++k) {
      const double w = std::pow(v[k], inv_power[k]);
      lambda[k] = prod * (1 - w);
      prod *= w;
    }
    lambda[n] = prod;
    double vy = 0, dist2 = 0;
    for (int c = 0; c < n; ++c) {
      double yc = 0;
      for (int i = 1; i <= n; ++i) yc += lambda[i] * points[i][c];
      vy += points[0][c] * yc;
      const double d = yc - points[0][c];
      dist2 += d * d;
    }
    const double g = 2 * (1 - vy) - dist2 * t;
    return scale * kLn2 * inv_fact_face * PowHalf(t, n - 1) * PowHalf(g, -(n + 1));
  }

  static std::uint64_t Scramble(const Replicate& rep, int d, std::uint64_t x) {
    std::uint64_t y = rep.shift[d];
    for (std::uint32_t top = static_cast<std::uint32_t>(x >> 32); top; top &= top - 1)
      y ^= rep.scramble[d][31 - std::countr_zero(top)];
    return y;
  }

  void Advance(Stratum& s, std::uint64_t target) {
    constexpr double kUnit = 1.0 / 9007199254740992.0;  // 2^-53
    for (Replicate& rep : s.reps) {
      for (; rep.count < target; ++rep.count) {
        for (int d = 0; d < n; ++d) {
          const std::uint64_t bits = rep.sobol ? Scramble(rep, d, (*rep.sobol)()) : rep.rng();
          u[d] = (static_cast<double>(bits >> 11) + 0.5) * kUnit;
        }
        rep.sum += Density(u.data(), s.shell);
      }
    }
  }

  double TailBound(double tau) const {
    // int_0^tau t^((n-3)/2) dt times the face Jacobian mass 1/(n-1)!.
    double inv_fact = 1;
    for (int k = 2; k < n; ++k) inv_fact /= k;
    return scale * inv_fact * PowHalf(c_min, -(n + 1)) * PowHalf(tau, n - 1) / ((n - 1) / 2.0);
  }

  int Shells() const {
    int k = 0;
    for (const Stratum& s : strata) k = std::max(k, s.shell + 1);
    return k;
  }
};

SimplexIntegrator::SimplexIntegrator(KleinSimplex simplex, const VolumeOptions& options,
                                     std::uint64_t stream)
    : state_(std::make_unique<State>()) {
  State& s = *state_;
  s.n = static_cast<int>(simplex.vertices.size()) - 1;
  if (s.n < 2) throw Error(ErrorCode::kInvalidArgument, "simplex dimension must be at least 2");
  if (options.replicates < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 replicates");
  s.options = options;
  s.stream = stream;
  s.points = std::move(simplex.vertices);
  if (simplex.ideal_vertex > 0) std::swap(s.points[0], s.points[simplex.ideal_vertex]);
  s.cusp = simplex.ideal_vertex >= 0;
  std::vector<std::vector<double>> edges;
  for (int i = 1; i <= s.n; ++i) {
    std::vector<double> e(s.n);
    for (int c = 0; c < s.n; ++c) e[c] = s.points[i][c] - s.points[0][c];
    edges.push_back(std::move(e));
  }
  s.scale = AbsDeterminant(edges);
  if (!(s.scale > 0)) throw Error(ErrorCode::kInvalidArgument, "degenerate simplex");
  s.u.resize(s.n);
  s.lambda.resize(s.n + 1);
  for (int k = 0; k < s.n; ++k) s.inv_power.push_back(1.0 / (s.n - k));
  for (int k = 2; k <= s.n; ++k) s.inv_fact_n /= k;
  s.inv_fact_face = s.inv_fact_n * s.n;
  if (s.cusp) {
    s.c_min = INFINITY;
    for (int i = 1; i <= s.n; ++i) {
      double vw = 0, w2 = 0;
      for (int c = 0; c < s.n; ++c) {
        vw += s.points[0][c] * s.points[i][c];
        w2 += s.points[i][c] * s.points[i][c];
      }
      s.c_min = std::min({s.c_min, 2 * (1 - vw), 1 - w2});
    }
    if (!(s.c_min > 0))
      throw Error(ErrorCode::kNonConvergent,
                  "cusp tail bound cannot shrink: a face vertex touches the sphere");
    s.strata.push_back(s.NewStratum(0));
  } else {
    s.strata.push_back(s.NewStratum(-1));
  }
}

SimplexIntegrator::~SimplexIntegrator() = default;
SimplexIntegrator::SimplexIntegrator(SimplexIntegrator&&) noexcept = default;
SimplexIntegrator& SimplexIntegrator::operator=(SimplexIntegrator&&) noexcept = default;

void SimplexIntegrator::Refine(std::uint64_t points) {
  State& s = *state_;
  if (points <= s.target_points) return;
  if (s.target_points > 0)
    s.predicted_error = RawError() * static_cast<double>(s.target_points) / points;
  s.target_points = points;
  for (State::Stratum& stratum : s.strata) s.Advance(stratum, s.PointsFor(stratum));
}

void SimplexIntegrator::EnsureTail(double max_tail) {
  State& s = *state_;
  if (!s.cusp) return;
  constexpr int kMaxShells = 400;
  while (s.TailBound(std::ldexp(1.0, -s.Shells())) > max_tail) {
    const int k = s.Shells();
    if (k >= kMaxShells)
      throw Error(ErrorCode::kNonConvergent, "cusp tail bound did not reach the budget");
    s.strata.push_back(s.NewStratum(k));
    s.Advance(s.strata.back(), s.PointsFor(s.strata.back()));
  }
}

bool SimplexIntegrator::has_cusp() const { return state_->cusp; }
std::uint64_t SimplexIntegrator::points() const { return state_->target_points; }

std::uint64_t SimplexIntegrator::samples() const {
  std::uint64_t total = 0;
  for (const auto& stratum : state_->strata)
    for (const auto& rep : stratum.reps) total += rep.count;
  return total;
}

double SimplexIntegrator::tail_bound() const {
  return state_->cusp ? state_->TailBound(std::ldexp(1.0, -state_->Shells())) : 0.0;
}

double SimplexIntegrator::cusp_bound() const {
  return state_->cusp ? state_->TailBound(1.0) : 0.0;
}

std::vector<double> SimplexIntegrator::ReplicateValues() const {
  const State& s = *state_;
  std::vector<double> out(s.options.replicates, 0.0);
  for (const auto& stratum : s.strata)
    for (int r = 0; r < s.options.replicates; ++r) {
      const auto& rep = stratum.reps[r];
      if (rep.count) out[r] += static_cast<double>(rep.sum / rep.count);
    }
  return out;
}

double SimplexIntegrator::value() const {
  const std::vector<double> v = ReplicateValues();
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size() + tail_bound() / 2;
}

// Stopping once an estimated error is small favours underestimates, so the
// reported error is at least the one predicted from the previous level under
// first-order convergence.
double SimplexIntegrator::standard_error() const {
  return std::max(RawError(), state_->predicted_error);
}

double SimplexIntegrator::RawError() const {
  const std::vector<double> v = ReplicateValues();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= v.size() - 1;
  return std::sqrt(var / v.size());
}

VolumeEstimate SimplexIntegrator::Estimate() const {
  VolumeEstimate e;
  e.value = value();
  e.abs_error = CoverageFactor(state_->options.replicates - 1) * standard_error() + tail_bound() / 2;
  e.rel_error = e.value > 0 ? e.abs_error / e.value : INFINITY;
  e.samples = samples();
  e.strategy = has_cusp() ? Strategy::kSubdivision : state_->options.sampler;
  return e;
}

VolumeEstimate SimplexVolume(const KleinSimplex& simplex, double abs_budget,
                             const VolumeOptions& options, std::uint64_t stream) {
  if (!(abs_budget > 0)) throw Error(ErrorCode::kInvalidArgument, "error budget must be positive");
  SimplexIntegrator integrator(simplex, options, stream);
  integrator.EnsureTail(abs_budget / 5);
  std::uint64_t points = options.initial_points;
  integrator.Refine(points);
  while (integrator.Estimate().abs_error > abs_budget &&
         2 * integrator.samples() <= options.max_samples) {
    points *= 2;
    integrator.Refine(points);
  }
  return integrator.Estimate();
}

VolumeEstimate PolytopeVolume(const KleinPolytope& k, const VolumeOptions& options) {
  if (!(options.target_rel_error > 0))
    throw Error(ErrorCode::kInvalidArgument, "target error must be positive");
  const std::vector<KleinSimplex> simplices = SimplicesOf(k);
  if (simplices.empty()) throw Error(ErrorCode::kTriangulationFailure, "empty triangulation");
  const double target = options.target_rel_error;

  std::vector<SimplexIntegrator> parts;
  for (std::size_t i = 0; i < simplices.size(); ++i) parts.emplace_back(simplices[i], options, i);

  ParallelFor(parts.size(), options.threads, [&](std::size_t i) {
    parts[i].EnsureTail(0.01 * target * parts[i].cusp_bound());
    parts[i].Refine(options.initial_points);
  });

  // Budgets proportional to the first-pass estimates.
  std::vector<double> first(parts.size());
  double total = 0, sum_sq = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    first[i] = std::max(parts[i].value(), 0.0);
    total += first[i];
    sum_sq += first[i] * first[i];
  }
  const double norm = sum_sq > 0 ? std::sqrt(sum_sq) : 1.0;

  auto combined = [&] {
    double value = 0, var = 0, var2 = 0, tail = 0;
    for (const SimplexIntegrator& p : parts) {
      const double v = p.standard_error() * p.standard_error();
      value += p.value();
      var += v;
      var2 += v * v;
      tail += p.tail_bound() / 2;
    }
    // Welch-Satterthwaite degrees of freedom of the summed variance.
    const double dof = var2 > 0 ? var * var / var2 * (options.replicates - 1) : INFINITY;
    const double factor = CoverageFactor(dof);
    return std::tuple{value, factor * std::sqrt(var) + tail, factor};
  };

  while (true) {
    const auto [value, error, factor] = combined();
    if (error <= target * value) break;
    const double goal = target * std::max(value, total);

    std::vector<std::size_t> tails, doubles;
    std::uint64_t used = 0;
    for (const SimplexIntegrator& p : parts) used += p.samples();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].tail_bound() > 0.2 * target * first[i]) tails.push_back(i);
      if (factor * parts[i].standard_error() > 0.9 * goal * first[i] / norm) doubles.push_back(i);
    }
    if (!tails.empty())
      ParallelFor(tails.size(), options.threads, [&](std::size_t j) {
        parts[tails[j]].EnsureTail(0.1 * target * first[tails[j]]);
      });
    // Worst offenders first when the sample cap binds.
    std::stable_sort(doubles.begin(), doubles.end(), [&](std::size_t a, std::size_t b) {
      return parts[a].standard_error() / std::max(first[a], 1e-300) >
             parts[b].standard_error() / std::max(first[b], 1e-300);
    });
    std::vector<std::size_t> chosen;
    for (std::size_t i : doubles) {
      if (used + parts[i].samples() > options.max_samples) continue;
      used += parts[i].samples();
      chosen.push_back(i);
    }
    std::sort(chosen.begin(), chosen.end());
    if (chosen.empty() && tails.empty()) break;
    ParallelFor(chosen.size(), options.threads, [&](std::size_t j) {
      parts[chosen[j]].Refine(2 * parts[chosen[j]].points());
    });
  }

  const auto [value, error, factor] = combined();
  VolumeEstimate e;
  e.value = value;
  e.abs_error = error;
  e.rel_error = value > 0 ? error / value : INFINITY;
  for (const SimplexIntegrator& p : parts) e.samples += p.samples();
  const bool cusped = std::any_of(parts.begin(), parts.end(),
                                  [](const SimplexIntegrator& p) { return p.has_cusp(); });
  e.strategy = cusped ? Strategy::kSubdivision : options.sampler;
  return e;
}

}  // namespace hypvol
