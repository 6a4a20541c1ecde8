#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "biruin/errors.hpp"
#include "biruin/joint.hpp"

namespace biruin {

// Finite-horizon survival probabilities phi_m(u): no ruin within m claim
// pairs starting from integer capital u.
struct DPResult {
    int pairs = 0;
    std::vector<double> phi;  // phi_pairs(u) for u = 0..u_max
};

// Dynamic program over one claim pair per step:
//   phi_m(u) = sum_(k=0)^(u+1) s_k phi_(m-1)(u+2-k) - h(u+1,0) phi_(m-1)(1)
// with phi_0 = 1. Claim pairs falling outside the materialized window are
// treated as ruinous, so the result is a lower bound on survival; it is
// exact whenever the window covers index u_max + 2*pairs, because capital
// after j pairs is at most u + 2j and any larger claim is ruinous anyway.
inline DPResult finite_horizon_survival(const JointMatrix<double>& m, int u_max, int pairs) {
    if (u_max < 0) throw ParameterError("u_max must be >= 0");
    if (pairs < 0) throw ParameterError("pairs must be >= 0");
    const int cap = u_max + 2 * pairs;
    const int s_top = std::min(cap + 1, m.s_complete());
    std::vector<double> s(s_top + 1);
    for (int k = 0; k <= s_top; ++k) s[k] = m.s(k);
    const int h_top = std::min(cap + 1, m.max_i());
    std::vector<double> hcol(h_top + 1);
    for (int k = 0; k <= h_top; ++k) hcol[k] = m.h_col0(k);

    std::vector<double> phi(cap + 3, 1.0), next(cap + 3, 0.0);
    for (int step = 1; step <= pairs; ++step) {
        const int top = u_max + 2 * (pairs - step);
        for (int u = 0; u <= top; ++u) {
            double acc = 0;
            const int k_hi = std::min(u + 1, s_top);
            for (int k = 0; k <= k_hi; ++k) acc += s[k] * phi[u + 2 - k];
            if (u + 1 <= s_top && u + 1 <= h_top) acc -= hcol[u + 1] * phi[1];
            next[u] = acc;
        }
        std::fill(next.begin() + top + 1, next.end(), 0.0);
        phi.swap(next);
    }
    DPResult r;
    r.pairs = pairs;
    r.phi.assign(phi.begin(), phi.begin() + u_max + 1);
    return r;
}

// splitmix64 step; distinct streams come from hashing (seed, stream id)
struct SplitMix64 {
    std::uint64_t state = 0;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDull;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ull;
    z ^= z >> 33;
    return z;
}

struct MCResult {
    double estimate = 0;   // ruin probability within the horizon
    double std_error = 0;  // binomial standard error
    std::uint64_t ruined = 0;
    std::uint64_t paths = 0;
    bool tail_warning = false;  // window tail mass above 1e-6
};

namespace detail {

// inverse-cdf sampler over the flattened window cells plus one virtual
// cell for the off-window tail, which is ruinous by the same convention
// the dynamic program uses
struct PairSampler {
    std::vector<double> cum;
    std::vector<std::int32_t> cx, cy;
    std::vector<std::uint32_t> guide;  // first candidate per uniform bucket
    static constexpr std::int32_t ruin_cell = -1;
    static constexpr std::size_t buckets = 4096;

    explicit PairSampler(const JointMatrix<double>& m) {
        double total = 0;
        for (int i = 0; i <= m.max_i(); ++i)
            for (int j = 0; j <= m.max_j(); ++j) total += m.h(i, j);
        const double tail = std::max(0.0, m.tail_mass());
        const double grand = total + tail;
        if (!(grand > 0)) throw ParameterError("joint matrix has no mass to sample");
        double acc = 0;
        for (int i = 0; i <= m.max_i(); ++i)
            for (int j = 0; j <= m.max_j(); ++j) {
                const double p = m.h(i, j);
                if (p <= 0) continue;
                acc += p / grand;
                cum.push_back(acc);
                cx.push_back(i);
                cy.push_back(j);
            }
        cum.push_back(1.0);
        cx.push_back(ruin_cell);
        cy.push_back(ruin_cell);
        guide.assign(buckets + 1, 0);
        std::size_t at = 0;
        for (std::size_t b = 0; b <= buckets; ++b) {
            const double edge = static_cast<double>(b) / buckets;
            while (at + 1 < cum.size() && cum[at] <= edge) ++at;
            guide[b] = static_cast<std::uint32_t>(at);
        }
        for (std::size_t b = buckets; b-- > 0;) guide[b] = std::min(guide[b], guide[b + 1]);
    }

    std::size_t draw(SplitMix64& g) const {
        const double v = g.uniform();
        std::size_t i = guide[static_cast<std::size_t>(v * buckets)];
        while (cum[i] <= v) ++i;
        return i;
    }
};

}  // namespace detail

// Monte Carlo estimate of the ruin probability within `pairs` claim pairs
// from capital u. Sampling inverts the flattened window cdf with one
// splitmix64 stream per path, so results are identical for a given
// (matrix, u, pairs, n_paths, seed) regardless of thread count.
inline MCResult monte_carlo_ruin(const JointMatrix<double>& m, int u, int pairs,
                                 std::uint64_t n_paths, std::uint64_t seed,
                                 unsigned n_threads = 0) {
    if (u < 0) throw ParameterError("u must be >= 0");
    if (pairs < 0) throw ParameterError("pairs must be >= 0");
    if (n_paths == 0) throw ParameterError("n_paths must be >= 1");
    const detail::PairSampler sampler(m);
    if (n_threads == 0) {
        n_threads = std::thread::hardware_concurrency();
        if (n_threads == 0) n_threads = 1;
    }
    n_threads = static_cast<unsigned>(
        std::min<std::uint64_t>(n_threads, std::max<std::uint64_t>(1, n_paths / 4096)));

    auto run_block = [&](std::uint64_t first, std::uint64_t last) {
        std::uint64_t ruined = 0;
        for (std::uint64_t p = first; p < last; ++p) {
            SplitMix64 g{mix64(seed ^ mix64(p + 1))};
            std::int64_t w = u;
            for (int step = 0; step < pairs; ++step) {
                const std::size_t cell = sampler.draw(g);
                const std::int32_t x = sampler.cx[cell];
                if (x == detail::PairSampler::ruin_cell) {
                    ++ruined;
                    break;
                }
                w += 1 - x;
                if (w <= 0) {
                    ++ruined;
                    break;
                }
                w += 1 - sampler.cy[cell];
                if (w <= 0) {
                    ++ruined;
                    break;
                }
            }
        }
        return ruined;
    };

    std::uint64_t ruined = 0;
    if (n_threads <= 1) {
        ruined = run_block(0, n_paths);
    } else {
        std::vector<std::uint64_t> part(n_threads, 0);
        std::vector<std::thread> pool;
        const std::uint64_t chunk = n_paths / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint64_t first = t * chunk;
            const std::uint64_t last = (t + 1 == n_threads) ? n_paths : first + chunk;
            pool.emplace_back([&, t, first, last] { part[t] = run_block(first, last); });
        }
        for (auto& th : pool) th.join();
        for (std::uint64_t v : part) ruined += v;
    }

    MCResult r;
    r.ruined = ruined;
    r.paths = n_paths;
    r.estimate = static_cast<double>(ruined) / static_cast<double>(n_paths);
    r.std_error = std::sqrt(r.estimate * (1 - r.estimate) / static_cast<double>(n_paths));
    r.tail_warning = m.tail_mass() > 1e-6;
    return r;
}

}  // namespace biruin
