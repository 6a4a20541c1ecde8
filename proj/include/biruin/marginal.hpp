#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "biruin/errors.hpp"
#include "biruin/real.hpp"
#include "biruin/zeta.hpp"

namespace biruin {

enum class MarginalKind { poisson, shifted_zeta, finite };

// Declarative description of a claim-size distribution on {0, 1, 2, ...}.
// Numeric parameters are decimal strings, converted to the working type
// at construction so a config denotes the same model at every precision.
struct MarginalSpec {
    MarginalKind kind = MarginalKind::poisson;
    std::string rate;                 // poisson: mean
    std::string exponent;             // shifted_zeta: tail exponent s > 1
    std::vector<std::string> pmf;     // finite: masses at 0, 1, 2, ...

    static MarginalSpec poisson(std::string rate) {
        MarginalSpec m;
        m.kind = MarginalKind::poisson;
        m.rate = std::move(rate);
        return m;
    }
    static MarginalSpec shifted_zeta(std::string exponent) {
        MarginalSpec m;
        m.kind = MarginalKind::shifted_zeta;
        m.exponent = std::move(exponent);
        return m;
    }
    static MarginalSpec finite(std::vector<std::string> pmf) {
        MarginalSpec m;
        m.kind = MarginalKind::finite;
        m.pmf = std::move(pmf);
        return m;
    }
};

// A claim-size distribution with closed-form moments.
//
// poisson(rate):       P(k) = e^(-rate) rate^k / k!
// shifted_zeta(s):     P(k) = (k+1)^(-s) / zeta(s), infinite mean for s <= 2,
//                      infinite variance for s <= 3
// finite(p0..pn):      the given masses, which must sum to 1 within 1e-10
template <class Real>
class Marginal {
  public:
    explicit Marginal(const MarginalSpec& spec) : kind_(spec.kind) {
        switch (kind_) {
            case MarginalKind::poisson: {
                rate_ = parse(spec.rate, "poisson rate");
                if (rate_ < 0) throw ParameterError("poisson rate must be >= 0");
                break;
            }
            case MarginalKind::shifted_zeta: {
                exponent_ = parse(spec.exponent, "shifted_zeta exponent");
                if (!(exponent_ > 1)) throw ParameterError("shifted_zeta exponent must be > 1");
                zeta_s_ = riemann_zeta<Real>(exponent_);
                break;
            }
            case MarginalKind::finite: {
                if (spec.pmf.empty()) throw ParameterError("finite marginal needs at least one mass");
                Real total = 0;
                for (const auto& t : spec.pmf) {
                    Real p = parse(t, "finite pmf entry");
                    if (p < 0) throw ParameterError("finite pmf entries must be >= 0");
                    masses_.push_back(p);
                    total += p;
                }
                using std::abs;
                if (abs(total - 1) > Real(1e-10))
                    throw ParameterError("finite pmf must sum to 1 within 1e-10");
                while (masses_.size() > 1 && masses_.back() == 0) masses_.pop_back();
                break;
            }
        }
    }

    MarginalKind kind() const { return kind_; }

    Real pmf(long long k) const {
        if (k < 0) return 0;
        switch (kind_) {
            case MarginalKind::poisson: {
                using std::exp;
                Real p = exp(-rate_);
                for (long long i = 1; i <= k; ++i) p *= rate_ / Real(i);
                return p;
            }
            case MarginalKind::shifted_zeta: {
                using std::exp;
                using std::log;
                return exp(-exponent_ * log(Real(k + 1))) / zeta_s_;
            }
            case MarginalKind::finite:
                return k < static_cast<long long>(masses_.size())
                           ? masses_[static_cast<std::size_t>(k)]
                           : Real(0);
        }
        return 0;
    }

    // pmf at 0..K in one pass
    std::vector<Real> pmf_table(int K) const {
        std::vector<Real> t(K + 1);
        if (kind_ == MarginalKind::poisson) {
            using std::exp;
            t[0] = exp(-rate_);
            for (int k = 1; k <= K; ++k) t[k] = t[k - 1] * rate_ / Real(k);
        } else {
            for (int k = 0; k <= K; ++k) t[k] = pmf(k);
        }
        return t;
    }

    // P(X <= k) at 0..K
    std::vector<Real> cdf_table(int K) const {
        std::vector<Real> t = pmf_table(K);
        for (int k = 1; k <= K; ++k) t[k] += t[k - 1];
        return t;
    }

    Real mean() const {
        switch (kind_) {
            case MarginalKind::poisson:
                return rate_;
            case MarginalKind::shifted_zeta: {
                // E[X] = zeta(s-1)/zeta(s) - 1, infinite when s <= 2
                if (!(exponent_ > 2)) return std::numeric_limits<Real>::infinity();
                return riemann_zeta<Real>(exponent_ - 1) / zeta_s_ - 1;
            }
            case MarginalKind::finite: {
                Real m = 0;
                for (std::size_t k = 1; k < masses_.size(); ++k) m += Real(k) * masses_[k];
                return m;
            }
        }
        return 0;
    }

    bool has_finite_variance() const {
        if (kind_ == MarginalKind::shifted_zeta) return exponent_ > 3;
        return true;
    }

    // Smallest K with P(X > K) <= eps; for the power tail this uses the
    // integral bound sum_{m>K} (m+1)^(-s) <= (K+1)^(1-s)/(s-1).
    long long truncation_index(const Real& eps) const {
        if (!(eps > 0)) throw ParameterError("truncation eps must be > 0");
        switch (kind_) {
            case MarginalKind::poisson: {
                using std::exp;
                Real p = exp(-rate_);
                Real tail = 1 - p;
                long long k = 0;
                while (tail > eps) {
                    ++k;
                    p *= rate_ / Real(k);
                    tail -= p;
                    if (k > 100000000)
                        throw ParameterError("poisson truncation index exceeds 1e8");
                }
                return k;
            }
            case MarginalKind::shifted_zeta: {
                using std::exp;
                using std::log;
                // (K+1)^(1-s)/((s-1) zeta(s)) <= eps
                Real bound = exp(log(eps * (exponent_ - 1) * zeta_s_) / (1 - exponent_));
                if (bound > Real(9e18)) return std::numeric_limits<long long>::max();
                long long k = static_cast<long long>(to_double<Real>(bound)) + 1;
                return k;
            }
            case MarginalKind::finite:
                return static_cast<long long>(masses_.size()) - 1;
        }
        return 0;
    }

    // Exact P(X = 0)
    Real mass_at_zero() const { return pmf(0); }

    Real variance() const {
        switch (kind_) {
            case MarginalKind::poisson:
                return rate_;
            case MarginalKind::shifted_zeta: {
                if (!has_finite_variance()) return std::numeric_limits<Real>::infinity();
                // E[(X+1)^2] = zeta(s-2)/zeta(s), then shift back
                Real ex1 = riemann_zeta<Real>(exponent_ - 1) / zeta_s_;  // E[X+1]
                Real ex2 = riemann_zeta<Real>(exponent_ - 2) / zeta_s_;  // E[(X+1)^2]
                return ex2 - ex1 * ex1;
            }
            case MarginalKind::finite: {
                Real m = mean(), v = 0;
                for (std::size_t k = 0; k < masses_.size(); ++k)
                    v += (Real(k) - m) * (Real(k) - m) * masses_[k];
                return v;
            }
        }
        return 0;
    }

  private:
    static Real parse(const std::string& text, const char* what) {
        if (text.empty()) throw ParameterError(std::string(what) + " is missing");
        try {
            return real_from_string<Real>(text);
        } catch (const std::exception&) {
            throw ParameterError(std::string(what) + " is not a number: " + text);
        }
    }

    MarginalKind kind_;
    Real rate_ = 0;
    Real exponent_ = 0;
    Real zeta_s_ = 0;
    std::vector<Real> masses_;
};

}  // namespace biruin
