#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "biruin/errors.hpp"
#include "biruin/joint.hpp"
#include "biruin/real.hpp"

namespace biruin {

// Case analysis for the survival computation, driven by the mean pair sum
// ES = E[X+Y], the mass s0 = h(0,0) of a zero pair, the marginal zero
// masses x0, y0, and on the ES = 2 boundary by s2 = P(X+Y = 2) and h(2,0).
enum class ModelClass {
    net_profit_s0_pos,        // ES < 2, h(0,0) > 0
    net_profit_x0_pos,        // ES < 2, h(0,0) = 0, x0 > 0, y0 = 0
    net_profit_y0_pos,        // ES < 2, h(0,0) = 0, x0 = 0, y0 > 0
    net_profit_both_pos,      // ES < 2, h(0,0) = 0, x0 > 0, y0 > 0
    deficit,                  // ES > 2: ruin is certain from every u
    boundary_s2_below_one,    // ES = 2, P(X+Y=2) < 1: ruin certain
    boundary_s2_one_h20_zero, // ES = 2, P(X+Y=2) = 1, h(2,0) = 0
    boundary_s2_one_h20_pos,  // ES = 2, P(X+Y=2) = 1, h(2,0) > 0
};

inline const char* model_class_name(ModelClass c) {
    switch (c) {
        case ModelClass::net_profit_s0_pos: return "net_profit_s0_pos";
        case ModelClass::net_profit_x0_pos: return "net_profit_x0_pos";
        case ModelClass::net_profit_y0_pos: return "net_profit_y0_pos";
        case ModelClass::net_profit_both_pos: return "net_profit_both_pos";
        case ModelClass::deficit: return "deficit";
        case ModelClass::boundary_s2_below_one: return "boundary_s2_below_one";
        case ModelClass::boundary_s2_one_h20_zero: return "boundary_s2_one_h20_zero";
        case ModelClass::boundary_s2_one_h20_pos: return "boundary_s2_one_h20_pos";
    }
    return "unknown";
}

inline bool is_net_profit(ModelClass c) {
    return c == ModelClass::net_profit_s0_pos || c == ModelClass::net_profit_x0_pos ||
           c == ModelClass::net_profit_y0_pos || c == ModelClass::net_profit_both_pos;
}

// es_tol widens the ES = 2 comparison for models whose mean is irrational
// (power-tail marginals); rational-parameter models hit the boundary only
// when ES is exactly 2 in the working type.
template <class Real>
ModelClass classify(const JointMatrix<Real>& m, const Real& es_tol = Real(1e-30)) {
    using std::abs;
    const Real es = m.mean_sum();
    const bool at_boundary = abs(es - 2) <= es_tol;
    if (!at_boundary && es > 2) return ModelClass::deficit;
    if (at_boundary) {
        // rounding guard for s2 accumulated from at most three cells
        const Real one_tol = Real(16) * machine_epsilon<Real>();
        if (m.s(2) < 1 - one_tol) return ModelClass::boundary_s2_below_one;
        if (m.h(2, 0) > 0) return ModelClass::boundary_s2_one_h20_pos;
        return ModelClass::boundary_s2_one_h20_zero;
    }
    if (m.s(0) > 0) return ModelClass::net_profit_s0_pos;
    if (m.x0() > 0 && m.y0() > 0) return ModelClass::net_profit_both_pos;
    if (m.x0() > 0) return ModelClass::net_profit_x0_pos;
    return ModelClass::net_profit_y0_pos;
}

// Companion sequences of the survival recursion when s0 > 0.
// phi(u) = a_u phi(0) + b_u (2 - ES) with a_0 = 1, b_0 = 0,
// a_1 = -1/y0, b_1 = 1/y0, and for n >= 2
//   a_n = (a_(n-2) - sum_(i=1)^(n-1) s_i a_(n-i) + a_1 h(n-1,0)) / s0
// and identically for b.
template <class Real>
struct ABSequences {
    std::vector<Real> a, b;  // indexed 0..n_max
};

template <class Real>
ABSequences<Real> ab_sequences(const JointMatrix<Real>& m, int n_max) {
    if (n_max < 1) throw ParameterError("ab_sequences needs n_max >= 1");
    if (!(m.s(0) > 0)) throw ParameterError("ab_sequences requires s(0) > 0");
    if (!(m.y0() > 0)) throw ParameterError("ab_sequences requires y0 > 0");
    using std::abs;
    // growth beyond half the mantissa means later cancellations leave no
    // correct bits in the limit estimate
    using std::exp;
    using std::log;
    const Real growth_cap = exp(Real(mantissa_bits<Real>() / 2) * log(Real(2)));
    ABSequences<Real> seq;
    seq.a.resize(n_max + 1);
    seq.b.resize(n_max + 1);
    seq.a[0] = 1;
    seq.b[0] = 0;
    seq.a[1] = -1 / m.y0();
    seq.b[1] = 1 / m.y0();
    for (int n = 2; n <= n_max; ++n) {
        Real acc_a = seq.a[n - 2];
        Real acc_b = seq.b[n - 2];
        for (int i = 1; i <= n - 1; ++i) {
            acc_a -= m.s(i) * seq.a[n - i];
            acc_b -= m.s(i) * seq.b[n - i];
        }
        acc_a += seq.a[1] * m.h_col0(n - 1);
        acc_b += seq.b[1] * m.h_col0(n - 1);
        seq.a[n] = acc_a / m.s(0);
        seq.b[n] = acc_b / m.s(0);
        if (abs(seq.a[n]) > growth_cap || abs(seq.b[n]) > growth_cap)
            throw PrecisionError("companion sequences exhausted the mantissa at index " +
                                 std::to_string(n) + "; raise precision_bits");
    }
    return seq;
}

template <class Real>
struct Phi0Estimate {
    Real phi0;   // limit estimate of the survival probability from zero
    Real delta;  // spread of the last two consecutive estimates
    int n;       // index the estimate was taken at
};

namespace detail {

template <class Real>
Real phi0_ratio(const ABSequences<Real>& seq, const Real& two_minus_es, int n) {
    const Real denom = seq.a[n] - seq.a[n + 1];
    if (denom == 0)
        throw PrecisionError("limit estimate degenerate at N = " + std::to_string(n) +
                             "; raise N or precision_bits");
    return two_minus_es * (seq.b[n + 1] - seq.b[n]) / denom;
}

}  // namespace detail

// Limit estimate phi(0) = (2-ES) lim (b_(n+1)-b_n)/(a_n-a_(n+1)), taken at
// the largest n the sequences support together with the spread against the
// next lower n. The sequences must extend to at least index 4.
template <class Real>
Phi0Estimate<Real> phi0_estimate(const ABSequences<Real>& seq, const Real& es) {
    const int top = static_cast<int>(seq.a.size()) - 1;
    if (top < 4) throw ParameterError("phi0_estimate needs sequences through index 4");
    using std::abs;
    const Real two_minus_es = 2 - es;
    Phi0Estimate<Real> est;
    est.n = top - 2;
    est.phi0 = detail::phi0_ratio(seq, two_minus_es, est.n);
    est.delta = abs(est.phi0 - detail::phi0_ratio(seq, two_minus_es, est.n + 1));
    return est;
}

// Survival and ruin table for initial capital u = 0..u_max.
template <class Real>
struct RuinTable {
    std::vector<Real> psi;       // ruin probability at u = 0..u_max
    Real delta = 0;              // error estimate for psi(0) (limit classes only)
    ModelClass klass = ModelClass::deficit;
    int n_used = 0;              // recursion depth behind the limit estimate
    Real es = 0;                 // mean pair sum
    Real max_p1_residual = 0;    // diagnostics, see verify_identities
    Real p5_residual = 0;
    Real max_clamp = 0;          // largest negative psi clamped to 0

    Real phi(int u) const { return 1 - psi[u]; }
};

template <class Real>
struct IdentityResiduals {
    std::vector<Real> p1;  // recursion residual at u = 0..u_max-2
    Real p5 = 0;           // boundary identity residual
};

// Diagnostic residuals of two identities every survival table must satisfy:
//   p1(u):  phi(u) - sum_(k=0)^(u+1) s_k phi(u+2-k) + h(u+1,0) phi(1)
//   p5:     (2 - ES) - y0 phi(1) - phi(0)
// Both vanish in exact arithmetic for net-profit models.
template <class Real>
IdentityResiduals<Real> verify_identities(const JointMatrix<Real>& m,
                                          const std::vector<Real>& phi) {
    if (phi.size() < 2) throw ParameterError("verify_identities needs phi through u = 1");
    IdentityResiduals<Real> r;
    const int u_top = static_cast<int>(phi.size()) - 1;
    for (int u = 0; u + 2 <= u_top; ++u) {
        Real acc = phi[u];
        for (int k = 0; k <= u + 1; ++k) acc -= m.s(k) * phi[u + 2 - k];
        acc += m.h_col0(u + 1) * phi[1];
        r.p1.push_back(acc);
    }
    r.p5 = (2 - m.mean_sum()) - m.y0() * phi[1] - phi[0];
    return r;
}

// Ultimate ruin probabilities psi(u) = 1 - phi(u) for u = 0..u_max.
//
// N controls the depth of the limit estimate used when s0 > 0; the report
// carries delta, the spread between the depth-N and depth-(N+1) estimates.
// The matrix window must provide exact s(k) and h(k,0) through
// max(N+2, u_max + 1); build it with min_index at least u_max + N + 2.
template <class Real>
RuinTable<Real> survival_table(const JointMatrix<Real>& m, int u_max = 12, int N = 20) {
    if (u_max < 0) throw ParameterError("u_max must be >= 0");
    if (N < 2) throw ParameterError("N must be >= 2");
    const int need = std::max(N + 2, u_max + 1);
    if (!m.complete_support() && m.s_complete() < need)
        throw ParameterError("joint window too small: sum pmf exact through " +
                             std::to_string(m.s_complete()) + " but the recursion needs " +
                             std::to_string(need) + "; rebuild with min_index >= u_max + N + 2");

    RuinTable<Real> table;
    table.es = m.mean_sum();
    table.klass = classify(m);
    const Real two_minus_es = 2 - table.es;
    std::vector<Real> phi(static_cast<std::size_t>(u_max) + 1, Real(0));

    switch (table.klass) {
        case ModelClass::deficit:
        case ModelClass::boundary_s2_below_one:
            break;  // ruin certain at every u
        case ModelClass::boundary_s2_one_h20_zero:
            // every pair is (1,1) or (0,2): one unit of capital is enough
            for (int u = 1; u <= u_max; ++u) phi[u] = 1;
            break;
        case ModelClass::boundary_s2_one_h20_pos:
            // pairs (2,0) ruin capital 1 at the odd step; two units suffice
            for (int u = 2; u <= u_max; ++u) phi[u] = 1;
            break;
        case ModelClass::net_profit_s0_pos: {
            const int top = std::max(N + 2, u_max);
            const ABSequences<Real> seq = ab_sequences(m, top);
            ABSequences<Real> head;
            head.a.assign(seq.a.begin(), seq.a.begin() + (N + 3));
            head.b.assign(seq.b.begin(), seq.b.begin() + (N + 3));
            const Phi0Estimate<Real> est = phi0_estimate(head, table.es);
            table.delta = est.delta;
            table.n_used = est.n;
            phi[0] = est.phi0;
            for (int u = 1; u <= u_max; ++u)
                phi[u] = seq.a[u] * est.phi0 + seq.b[u] * two_minus_es;
            break;
        }
        case ModelClass::net_profit_x0_pos:
        case ModelClass::net_profit_y0_pos:
        case ModelClass::net_profit_both_pos: {
            // with s0 = 0 and ES < 2, s1 > 0 and the recursion closes:
            //   phi(1) = (2 - ES) / (y0 + h(0,1)),  phi(0) = h(0,1) phi(1),
            //   phi(u) = (phi(u-1) - sum_(k=2)^(u) s_k phi(u-k+1)
            //             + h(u,0) phi(1)) / s1           for u >= 2
            // and h(0,1) = s1 when y0 = 0, so phi(0) = 2 - ES there.
            const Real h01 = m.h(0, 1);
            const Real denom = m.y0() + h01;
            if (!(m.s(1) > 0) || !(denom > 0))
                throw PrecisionError("degenerate zero-sum structure: s1 = 0 with ES < 2");
            const Real phi1 = two_minus_es / denom;
            phi[0] = h01 * phi1;
            if (u_max >= 1) phi[1] = phi1;
            for (int u = 2; u <= u_max; ++u) {
                Real acc = phi[u - 1];
                for (int k = 2; k <= u; ++k) acc -= m.s(k) * phi[u - k + 1];
                acc += m.h_col0(u) * phi1;
                phi[u] = acc / m.s(1);
            }
            break;
        }
    }

    if (is_net_profit(table.klass) && u_max >= 1) {
        const IdentityResiduals<Real> res = verify_identities(m, phi);
        using std::abs;
        for (const Real& v : res.p1)
            table.max_p1_residual = std::max(table.max_p1_residual, abs(v));
        table.p5_residual = res.p5;
    }

    // clamp rounding spill, abort on violations that indicate real trouble
    table.psi.resize(phi.size());
    const Real slack = Real(1e-10);
    Real prev = 2;
    const Real mono_slack = 4 * table.delta + Real(1024) * machine_epsilon<Real>();
    for (std::size_t u = 0; u < phi.size(); ++u) {
        Real p = 1 - phi[u];
        if (p < 0 || p > 1) {
            const Real spill = p < 0 ? -p : p - 1;
            if (spill > slack) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.3e", to_double<Real>(spill));
                throw PrecisionError("psi(" + std::to_string(u) + ") outside [0,1] by " + buf +
                                     "; window or precision too small");
            }
            table.max_clamp = std::max(table.max_clamp, spill);
            p = p < 0 ? Real(0) : Real(1);
        }
        if (p > prev + mono_slack)
            throw PrecisionError("psi is not nonincreasing at u = " + std::to_string(u) +
                                 "; window or precision too small");
        prev = p;
        table.psi[u] = p;
    }
    return table;
}

}  // namespace biruin
