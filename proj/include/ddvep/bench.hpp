#ifndef DDVEP_BENCH_HPP
#define DDVEP_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ddvep/benson.hpp"
#include "ddvep/error.hpp"
#include "ddvep/io.hpp"

namespace ddvep {

/// Seedable 64-bit generator (std::mt19937_64, whose output sequence is fixed
/// by the standard) with its own variate algorithms, so that draws are
/// bit-identical across standard libraries:
///   uniform: top 53 bits of one output scaled to [0, 1);
///   normal:  Marsaglia's polar method, second variate cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double stddev) {
    if (cached_) {
      cached_ = false;
      return mean + stddev * spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    cached_ = true;
    return mean + stddev * u * f;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool cached_ = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random MOLP shape: d objectives, n variables, m = 2n constraints.
/// Entries of C and A ~ N(0, 100), entries of b ~ U[0, 10], all rounded to
/// the nearest integer (halves away from zero).
struct GenSpec {
  int d = 2;
  int n = 1;
  std::uint64_t seed = 0;

  static constexpr double kMean = 0.0;
  static constexpr double kVariance = 100.0;
  static constexpr double kUniformLo = 0.0;
  static constexpr double kUniformHi = 10.0;

  int m() const { return 2 * n; }
};

struct GeneratedData {
  Matrix C, A;
  Vector b;
};

inline GeneratedData draw_data(const GenSpec& spec) {
  if (spec.d < 2 || spec.n < 1) throw Error(ErrorKind::InvalidInput, "generator needs d >= 2 and n >= 1");
  Rng rng(spec.seed);
  const double sd = std::sqrt(GenSpec::kVariance);
  GeneratedData g{Matrix(spec.d, spec.n), Matrix(spec.m(), spec.n), Vector(spec.m())};
  for (int i = 0; i < spec.d; ++i) {
    for (int j = 0; j < spec.n; ++j) g.C(i, j) = std::round(rng.normal(GenSpec::kMean, sd));
  }
  for (int i = 0; i < spec.m(); ++i) {
    for (int j = 0; j < spec.n; ++j) g.A(i, j) = std::round(rng.normal(GenSpec::kMean, sd));
  }
  for (int i = 0; i < spec.m(); ++i) g.b(i) = std::round(rng.uniform(GenSpec::kUniformLo, GenSpec::kUniformHi));
  return g;
}

/// One draw. Returns nullopt (rejected) unless the instance is feasible and
/// its ideal point is finite.
inline std::optional<MolpInstance> generate_instance(const GenSpec& spec) {
  GeneratedData g = draw_data(spec);
  MolpInstance inst = make_instance(std::move(g.C), std::move(g.A), std::move(g.b));
  try {
    if (!ideal_point(inst)) return std::nullopt;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) return std::nullopt;
    throw;
  }
  return inst;
}

struct BenchInstance {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  MolpInstance instance;
};

/// Draws until `count` instances are accepted. Draw i uses seed
/// splitmix64(base_seed + i).
inline std::vector<BenchInstance> draw_sample(int d, int n, std::size_t count, std::uint64_t base_seed,
                                              std::size_t max_draws = 100'000) {
  std::vector<BenchInstance> out;
  for (std::uint64_t i = 0; out.size() < count; ++i) {
    if (i >= max_draws) throw Error(ErrorKind::NumericalFailure, "too many rejected instance draws");
    GenSpec spec{d, n, splitmix64(base_seed + i)};
    if (auto inst = generate_instance(spec)) out.push_back({out.size(), spec.seed, std::move(*inst)});
  }
  return out;
}

struct BenchRecord {
  std::size_t instance = 0;
  std::size_t iteration = 0;
  BackendKind backend = BackendKind::Cone;
  double ve_seconds = 0.0;
  std::size_t actual = 0;
  std::size_t artificial = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // NaN at iteration 0
};

struct InstanceRun {
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;  // number of cuts
  bool excluded = false;
  std::string error;
};

struct BenchConfig {
  double eps = 0.005;
  double M = 1e4;
  std::set<BackendKind> backends{BackendKind::OfflineOracle, BackendKind::Box, BackendKind::Cone};
  int repetitions = 1;  // > 1 reports the median of that many timings
  std::size_t workers = 1;
  std::size_t max_cuts = 100'000;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<InstanceRun> runs;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[v.size() / 2];
}

// Times `op(copy)` on fresh copies of `state`; the last copy becomes the new
// state. Copies are made outside the timed region.
template <typename State, typename Op>
double timed_update(State& state, int repetitions, Op op) {
  std::vector<double> times;
  for (int r = 0; r < std::max(1, repetitions); ++r) {
    State copy = state;
    const auto t0 = std::chrono::steady_clock::now();
    op(copy);
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (r + 1 == std::max(1, repetitions)) state = std::move(copy);
  }
  return median(std::move(times));
}

inline void bench_one(const BenchInstance& bi, const BenchConfig& cfg, std::vector<BenchRecord>& records,
                      InstanceRun& run) {
  run.instance = bi.id;
  run.seed = bi.seed;
  const MolpInstance& inst = bi.instance;
  const auto ideal = ideal_point(inst);
  if (!ideal) throw Error(ErrorKind::Unbounded, "instance is not bounded");

  // The cone backend selects vertices; the others replay its cuts.
  std::vector<BackendKind> kinds{BackendKind::Cone};
  for (BackendKind k : cfg.backends) {
    if (k != BackendKind::Cone) kinds.push_back(k);
  }
  std::vector<std::optional<OuterApproximation>> states(kinds.size());
  for (std::size_t b = 0; b < kinds.size(); ++b) {
    const auto t0 = std::chrono::steady_clock::now();
    states[b].emplace(Backend{kinds[b], cfg.M}, ideal->y, inst.cone);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (kinds[b] == BackendKind::Cone && cfg.backends.count(BackendKind::Cone) == 0) continue;
    records.push_back({bi.id, 0, kinds[b], t, states[b]->actual_count(), states[b]->artificial_count(),
                       std::numeric_limits<double>::quiet_NaN()});
  }

  std::set<std::uint64_t> verified;
  std::size_t cuts = 0;
  for (;;) {
    const std::vector<Candidate> cand = states[0]->candidates();
    auto next = std::find_if(cand.begin(), cand.end(), [&](const Candidate& c) { return verified.count(c.key) == 0; });
    if (next == cand.end()) break;
    const ScalarizationResult res = scalarize(inst, next->coords);
    if (!(res.alpha_v > cfg.eps)) {
      verified.insert(next->key);
      continue;
    }
    const Halfspace H = supporting_halfspace(res);
    ++cuts;
    for (std::size_t b = 0; b < kinds.size(); ++b) {
      CutKind kind = CutKind::Updated;
      const double t = timed_update(*states[b], cfg.repetitions, [&](OuterApproximation& s) { kind = s.cut(H); });
      if (kind != CutKind::Updated) {
        throw Error(ErrorKind::NumericalFailure, std::string(to_string(kinds[b])) +
                                                     " backend: cut did not update the approximation");
      }
      if (kinds[b] == BackendKind::Cone && cfg.backends.count(BackendKind::Cone) == 0) continue;
      records.push_back(
          {bi.id, cuts, kinds[b], t, states[b]->actual_count(), states[b]->artificial_count(), res.alpha_v});
    }
    if (cuts >= cfg.max_cuts) throw Error(ErrorKind::NumericalFailure, "cut limit reached without termination");
  }
  run.iterations = cuts;
}

}  // namespace detail

/// Runs the Benson loop on every instance with one shared cut sequence
/// (selected on the cone backend) and times each enabled backend's vertex
/// enumeration on it. Only the vertex enumeration calls are timed.
inline BenchResult run_benchmark(const std::vector<BenchInstance>& instances, const BenchConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
  std::vector<std::vector<BenchRecord>> per(instances.size());
  std::vector<InstanceRun> runs(instances.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        detail::bench_one(instances[i], cfg, per[i], runs[i]);
      } catch (const Error& e) {
        per[i].clear();
        runs[i].instance = instances[i].id;
        runs[i].seed = instances[i].seed;
        runs[i].excluded = true;
        runs[i].error = e.what();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, instances.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  BenchResult out;
  out.runs = std::move(runs);
  for (auto& r : per) out.records.insert(out.records.end(), r.begin(), r.end());
  return out;
}

/// Indices of the instances kept for averaging: non-excluded runs sorted by
/// iteration count (non-increasing, ties by instance id), the first `size`.
inline std::vector<std::size_t> select_subsample(const std::vector<InstanceRun>& runs,
                                                 std::optional<std::size_t> size = std::nullopt) {
  std::vector<const InstanceRun*> ok;
  for (const InstanceRun& r : runs) {
    if (!r.excluded) ok.push_back(&r);
  }
  std::sort(ok.begin(), ok.end(), [](const InstanceRun* a, const InstanceRun* b) {
    return std::tie(b->iterations, a->instance) < std::tie(a->iterations, b->instance);
  });
  if (size && ok.size() > *size) ok.resize(*size);
  std::vector<std::size_t> out;
  for (const InstanceRun* r : ok) out.push_back(r->instance);
  return out;
}

struct SummaryRow {
  std::size_t iteration = 0;
  BackendKind backend = BackendKind::Cone;
  double mean_ve_seconds = 0.0;
  double mean_actual = 0.0;
  double mean_artificial = 0.0;
  double pct_artificial = 0.0;
  std::size_t samples = 0;
};

namespace detail {

inline std::vector<BenchRecord> sorted_records(std::vector<BenchRecord> records) {
  std::sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return std::make_tuple(a.iteration, static_cast<int>(a.backend), a.instance) <
           std::make_tuple(b.iteration, static_cast<int>(b.backend), b.instance);
  });
  return records;
}

inline double percent(double artificial, double actual) {
  const double total = artificial + actual;
  return total > 0.0 ? 100.0 * artificial / total : 0.0;
}

}  // namespace detail

/// Per-iteration averages over the selected instances, truncated to the
/// smallest iteration count among them.
inline std::vector<SummaryRow> summarize(const BenchResult& result, std::optional<std::size_t> subsample = std::nullopt) {
  const std::vector<std::size_t> keep = select_subsample(result.runs, subsample);
  if (keep.empty()) return {};
  std::size_t horizon = std::numeric_limits<std::size_t>::max();
  for (const InstanceRun& r : result.runs) {
    if (std::find(keep.begin(), keep.end(), r.instance) != keep.end()) horizon = std::min(horizon, r.iterations);
  }
  const std::set<std::size_t> kept(keep.begin(), keep.end());
  std::map<std::pair<std::size_t, int>, SummaryRow> acc;
  for (const BenchRecord& r : detail::sorted_records(result.records)) {
    if (r.iteration > horizon || kept.count(r.instance) == 0) continue;
    SummaryRow& s = acc[{r.iteration, static_cast<int>(r.backend)}];
    s.iteration = r.iteration;
    s.backend = r.backend;
    s.mean_ve_seconds += r.ve_seconds;
    s.mean_actual += static_cast<double>(r.actual);
    s.mean_artificial += static_cast<double>(r.artificial);
    ++s.samples;
  }
  std::vector<SummaryRow> out;
  for (auto& [key, s] : acc) {
    const double n = static_cast<double>(s.samples);
    s.mean_ve_seconds /= n;
    s.mean_actual /= n;
    s.mean_artificial /= n;
    s.pct_artificial = detail::percent(s.mean_artificial, s.mean_actual);
    out.push_back(s);
  }
  return out;
}

struct ArtificialRow {
  std::size_t iteration = 0;
  double avg_actual = 0.0;
  double avg_artificial = 0.0;
  double pct_artificial = 0.0;
  std::size_t samples = 0;
};

/// Box-backend vertex accounting averaged over the records' instances at
/// the requested iterations (all iterations when none are given).
inline std::vector<ArtificialRow> artificial_vertex_table(const std::vector<BenchRecord>& records,
                                                          const std::vector<std::size_t>& iterations = {}) {
  const std::set<std::size_t> wanted(iterations.begin(), iterations.end());
  std::map<std::size_t, ArtificialRow> acc;
  for (const BenchRecord& r : detail::sorted_records(records)) {
    if (r.backend != BackendKind::Box) continue;
    if (!wanted.empty() && wanted.count(r.iteration) == 0) continue;
    ArtificialRow& row = acc[r.iteration];
    row.iteration = r.iteration;
    row.avg_actual += static_cast<double>(r.actual);
    row.avg_artificial += static_cast<double>(r.artificial);
    ++row.samples;
  }
  std::vector<ArtificialRow> out;
  for (auto& [it, row] : acc) {
    row.avg_actual /= static_cast<double>(row.samples);
    row.avg_artificial /= static_cast<double>(row.samples);
    row.pct_artificial = detail::percent(row.avg_artificial, row.avg_actual);
    out.push_back(row);
  }
  return out;
}

inline void write_records_csv(std::ostream& os, const std::vector<BenchRecord>& records, bool with_timing = true) {
  os << "instance,iteration,backend,ve_time_s,actual,artificial,alpha\n";
  for (const BenchRecord& r : records) {
    os << r.instance << ',' << r.iteration << ',' << to_string(r.backend) << ','
       << (with_timing ? io::format_number(r.ve_seconds) : "0") << ',' << r.actual << ',' << r.artificial << ','
       << (std::isnan(r.alpha) ? std::string() : io::format_number(r.alpha)) << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows, bool with_timing = true) {
  os << "iteration,backend,mean_ve_time_s,mean_actual,mean_artificial,pct_artificial,samples\n";
  for (const SummaryRow& s : rows) {
    os << s.iteration << ',' << to_string(s.backend) << ','
       << (with_timing ? io::format_number(s.mean_ve_seconds) : "0") << ',' << io::format_number(s.mean_actual)
       << ',' << io::format_number(s.mean_artificial) << ',' << io::format_number(s.pct_artificial) << ','
       << s.samples << '\n';
  }
}

}  // namespace ddvep

#endif  // DDVEP_BENCH_HPP
