#pragma once

// Internal Monte Carlo plumbing shared by the sampling translation units:
// a counter-based generator with per-path substreams, a deterministic
// parallel-for over path units, and fixed-order compensated reductions.
// Results are bit-identical for any worker count because workers only decide
// WHO computes a path value, never WHAT the value is, and the reduction
// always runs in path order on one thread.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "driftwalk/normal.hpp"
#include "driftwalk/simulate.hpp"

namespace driftwalk::mc {

// 64-bit finalizing mix (the SplitMix64 output stage).  Distinct inputs give
// statistically independent-looking outputs, which turns (stream, index)
// pairs into a random-access generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream key for (seed, unit id, tag).  Tag separates draw purposes inside
// one path (0: normal increments, 1: auxiliary uniforms) so consuming one
// kind never shifts the other.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t id,
                               std::uint64_t tag) {
    std::uint64_t s = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    s = mix64(s + (id + 1) * 0xbb67ae8584caa73bULL);
    return mix64(s + (tag + 1) * 0x3c6ef372fe94f82bULL);
}

// i-th raw 64-bit block of a substream (random access, no sequencing).
inline std::uint64_t bits_at(std::uint64_t stream, std::uint64_t i) {
    return mix64(stream + i * 0xa54ff53a5f1d36f1ULL);
}

// Uniform in the open interval (0, 1): 53-bit mantissa centered on the cell,
// so 0 and 1 are unreachable and the quantile transform below is total.
inline double u01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Standard-normal draw by inverse transform.  inv_ccdf is decreasing in its
// argument, which only relabels the uniform; the output is standard normal,
// and mirroring the uniform (u -> 1-u) is exactly a sign flip.
inline double normal_at(std::uint64_t stream, std::uint64_t i) {
    return normal::inv_ccdf(u01(bits_at(stream, i)));
}

// Worker count: DRIFTWALK_THREADS caps it when set, hardware concurrency
// otherwise, never more than the number of units.
inline int worker_count(long units) {
    long t = 0;
    if (const char* env = std::getenv("DRIFTWALK_THREADS")) {
        if (*env) t = std::strtol(env, nullptr, 10);
    }
    if (t <= 0) t = static_cast<long>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    if (units < 1) units = 1;
    return static_cast<int>(t < units ? t : units);
}

// Runs body(unit_begin, unit_end) over a static partition of [0, n_units).
// The partition affects scheduling only; every unit's result must depend
// solely on its index.
inline void parallel_units(long n_units,
                           const std::function<void(long, long)>& body) {
    const int workers = worker_count(n_units);
    if (workers <= 1) {
        body(0, n_units);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long chunk = (n_units + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = static_cast<long>(w) * chunk;
        const long hi = std::min(n_units, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

// Compensated (Neumaier) sum in index order.
inline double neumaier_total(const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

// Mean over all paths plus the standard error of that mean.  With antithetic
// pairing the independent units are the pair averages, so the spread is
// measured over those; the mean itself is always the plain average of the
// per-path values in path order.
McEstimate reduce_paths(const std::vector<double>& path_values,
                        bool antithetic);

// First-passage times of the unit-variance mean-reverting diffusion
// dY = -Y du + sqrt(2) dW from Y(0) = a up to level b, one entry per path in
// path order; never-absorbed paths carry +infinity.  Time step u_cap/steps,
// per-step endpoint test plus a Brownian-bridge sub-step crossing draw.
std::vector<double> ou_passage_times(double a, double b, double u_cap,
                                     const SimConfig& cfg);

}  // namespace driftwalk::mc
