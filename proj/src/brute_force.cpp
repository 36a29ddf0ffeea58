#include "qpr/brute_force.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qpr {
namespace {

constexpr std::size_t kMaxSpins = 24;

std::uint32_t gray(std::uint32_t t) { return t ^ (t >> 1); }

/// Bit pattern read as a left-to-right sequence (bit 0 first): smaller key
/// means lexicographically smaller configuration.
std::uint32_t lex_key(std::uint32_t bits, std::size_t n) {
  std::uint32_t key = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (bits & (1u << i)) key |= 1u << (n - 1 - i);
  return key;
}

// Incremental-energy models over the Gray-code walk. Bit b_i = 0 maps to
// spin +1 / binary 0, so the all-zero pattern is the lexicographic minimum.
struct SpinModel {
  const IsingProblem& p;
  std::vector<double> x, f;

  explicit SpinModel(const IsingProblem& prob) : p(prob) {}

  double init(std::uint32_t bits) {
    const std::size_t n = p.n();
    x.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      if (bits & (1u << i)) x[i] = -1.0;
    f.resize(n);
    p.local_fields(x.data(), f.data());
    return p.energy(x.data());
  }

  double flip_delta(std::size_t k) const { return -2.0 * x[k] * f[k]; }

  void flip(std::size_t k) {
    x[k] = -x[k];
    const double scale = 2.0 * x[k];
    p.couplings().for_each_in_row(
        k, [&](std::size_t j, double v) { f[j] += scale * v; });
  }

  double canonical(std::uint32_t bits) {
    SpinModel tmp(p);
    return tmp.init(bits);
  }
};

struct BinModel {
  const QuboProblem& p;
  std::vector<double> s, qf;

  explicit BinModel(const QuboProblem& prob) : p(prob) {}

  double init(std::uint32_t bits) {
    const std::size_t n = p.n();
    s.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (bits & (1u << i)) s[i] = 1.0;
    qf.resize(n);
    p.row_fields(s.data(), qf.data());
    return p.energy(s.data());
  }

  double flip_delta(std::size_t k) const {
    const double qkk = p.matrix().at(k, k);
    const double off = qf[k] - qkk * s[k];
    return (1.0 - 2.0 * s[k]) * (qkk + 2.0 * off);
  }

  void flip(std::size_t k) {
    const double ds = 1.0 - 2.0 * s[k];
    s[k] += ds;
    p.matrix().for_each_in_row(
        k, [&](std::size_t j, double v) { qf[j] += ds * v; });
  }

  double canonical(std::uint32_t bits) {
    BinModel tmp(p);
    return tmp.init(bits);
  }
};

struct WorkerBest {
  double e = 0.0;
  std::uint32_t z = 0;  // enumeration index; config bits are gray(z)
  std::vector<TracePoint> improvements;
};

template <class Model>
WorkerBest scan_range(Model model, std::uint32_t lo, std::uint32_t hi,
                      std::size_t n) {
  WorkerBest best;
  double e = model.init(gray(lo));
  best.e = e;
  best.z = lo;
  best.improvements.push_back({static_cast<std::int64_t>(lo), e});
  double best_canon = e;
  bool canon_valid = false;  // best.e is incremental after the first flips

  for (std::uint32_t t = lo + 1; t < hi; ++t) {
    const std::size_t k = static_cast<std::size_t>(std::countr_zero(t));
    e += model.flip_delta(k);
    model.flip(k);
    const double tol = 1e-9 * (1.0 + std::fabs(best.e));
    if (e < best.e - tol) {
      best.e = e;
      best.z = t;
      canon_valid = false;
      best.improvements.push_back({static_cast<std::int64_t>(t), e});
    } else if (e <= best.e + tol) {
      const std::uint32_t key_new = lex_key(gray(t), n);
      const std::uint32_t key_old = lex_key(gray(best.z), n);
      if (e == best.e) {
        // exact tie on the incremental value: order by configuration
        if (key_new < key_old) {
          best.z = t;
          canon_valid = false;
        }
        continue;
      }
      // near tie: decide on exactly re-evaluated energies
      if (!canon_valid) {
        best_canon = model.canonical(gray(best.z));
        canon_valid = true;
      }
      const double e_new = model.canonical(gray(t));
      if (e_new < best_canon ||
          (e_new == best_canon && key_new < key_old)) {
        best.e = e;
        best.z = t;
        best_canon = e_new;
        best.improvements.push_back({static_cast<std::int64_t>(t), e});
      }
    }
  }
  return best;
}

template <class Model, class Problem>
SolveResult run(const Problem& p, const BruteForceOptions& opts) {
  const std::size_t n = p.n();
  if (n > kMaxSpins)
    throw std::invalid_argument(
        "brute_force_solve: refusing n > 24 (6+ hours of enumeration); "
        "use a heuristic solver");
  const std::uint64_t total = std::uint64_t{1} << n;
  const unsigned workers = std::max(1u, std::min<unsigned>(
      opts.workers, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<WorkerBest> results(workers);
  if (workers == 1) {
    results[0] = scan_range(Model(p), 0, static_cast<std::uint32_t>(total), n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint32_t lo = static_cast<std::uint32_t>(total * w / workers);
      const std::uint32_t hi =
          static_cast<std::uint32_t>(total * (w + 1) / workers);
      pool.emplace_back([&, w, lo, hi] {
        results[w] = scan_range(Model(p), lo, hi, n);
      });
    }
    for (auto& th : pool) th.join();
  }

  // merge on canonical energies so the winner is worker-count independent
  Model probe(p);
  double best_e = 0.0;
  std::uint32_t best_z = 0;
  bool first = true;
  for (const auto& r : results) {
    const double e = probe.canonical(gray(r.z));
    const std::uint32_t key = lex_key(gray(r.z), n);
    if (first || e < best_e ||
        (e == best_e && key < lex_key(gray(best_z), n))) {
      best_e = e;
      best_z = r.z;
      first = false;
    }
  }

  SolveResult out;
  out.energy = probe.canonical(gray(best_z));
  out.evaluations = total;
  out.solver_id = "brute";
  out.seed = 0;

  std::vector<TracePoint> merged;
  for (const auto& r : results)
    merged.insert(merged.end(), r.improvements.begin(), r.improvements.end());
  std::sort(merged.begin(), merged.end(),
            [](const TracePoint& a, const TracePoint& b) {
              return a.step < b.step;
            });
  for (const auto& tp : merged)
    trace_improvement(out.trace, tp.step, tp.energy);
  // pin the final trace level to the canonical best
  if (out.trace.empty() || out.energy < out.trace.back().energy)
    out.trace.push_back(
        {static_cast<std::int64_t>(total) - 1, out.energy});

  const std::uint32_t bits = gray(best_z);
  if constexpr (std::is_same_v<Model, SpinModel>) {
    SpinConfig cfg;
    cfg.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      cfg.values[i] = (bits & (1u << i)) ? -1 : 1;
    out.config = std::move(cfg);
  } else {
    BinaryConfig cfg;
    cfg.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      cfg.values[i] = (bits & (1u << i)) ? 1 : 0;
    out.config = std::move(cfg);
  }
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace

SolveResult brute_force_solve(const IsingProblem& p,
                              const BruteForceOptions& opts) {
  return run<SpinModel>(p, opts);
}

SolveResult brute_force_solve(const QuboProblem& p,
                              const BruteForceOptions& opts) {
  return run<BinModel>(p, opts);
}

}  // namespace qpr
