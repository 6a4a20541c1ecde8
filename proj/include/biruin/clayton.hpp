#pragma once

#include <algorithm>
#include <cmath>

#include "biruin/errors.hpp"

namespace biruin {

// Clayton copula C(u1, u2) = max(u1^(-theta) + u2^(-theta) - 1, 0)^(-1/theta)
// for theta in [-1, 0) u (0, inf). theta -> 0 approaches independence,
// theta = -1 is the countermonotone bound, large theta approaches min(u1, u2).
//
// For theta > 0 the powers u^(-theta) overflow long before the copula value
// degenerates (u = 1e-12, theta = 100 gives 10^1200), so that branch runs in
// log space: with t_i = -theta log(u_i) and A = max(t1, t2),
//   C = exp(-(A + log(e^(t1-A) + e^(t2-A) - e^(-A))) / theta)
// where the bracket stays in [1, 2] and loses no precision.
template <class Real>
Real clayton_cdf(Real u1, Real u2, const Real& theta) {
    if (!(theta >= -1) || theta == 0)
        throw ParameterError("clayton theta must lie in [-1, 0) or (0, inf)");
    u1 = std::clamp<Real>(u1, 0, 1);
    u2 = std::clamp<Real>(u2, 0, 1);
    if (u1 == 0 || u2 == 0) return 0;
    using std::exp;
    using std::log;
    if (theta > 0) {
        const Real t1 = -theta * log(u1);
        const Real t2 = -theta * log(u2);
        const Real a = std::max(t1, t2);
        const Real inner = exp(t1 - a) + exp(t2 - a) - exp(-a);
        return exp(-(a + log(inner)) / theta);
    }
    const Real base = exp(-theta * log(u1)) + exp(-theta * log(u2)) - 1;
    if (!(base > 0)) return 0;
    return exp(log(base) / (-theta));
}

}  // namespace biruin
