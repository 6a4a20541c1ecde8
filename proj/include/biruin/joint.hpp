#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biruin/clayton.hpp"
#include "biruin/errors.hpp"
#include "biruin/marginal.hpp"
#include "biruin/real.hpp"

namespace biruin {

enum class DependenceKind { explicit_matrix, product, bivariate_poisson, clayton };

// Declarative description of the joint claim-pair distribution h(i,j).
struct JointSpec {
    DependenceKind kind = DependenceKind::product;
    std::vector<std::vector<std::string>> matrix;  // explicit_matrix
    MarginalSpec x, y;                             // product, clayton
    std::string lambda1, lambda2, lambda;          // bivariate_poisson
    std::string theta;                             // clayton

    static JointSpec explicit_matrix(std::vector<std::vector<std::string>> m) {
        JointSpec s;
        s.kind = DependenceKind::explicit_matrix;
        s.matrix = std::move(m);
        return s;
    }
    static JointSpec product(MarginalSpec x, MarginalSpec y) {
        JointSpec s;
        s.kind = DependenceKind::product;
        s.x = std::move(x);
        s.y = std::move(y);
        return s;
    }
    static JointSpec bivariate_poisson(std::string l1, std::string l2, std::string shared) {
        JointSpec s;
        s.kind = DependenceKind::bivariate_poisson;
        s.lambda1 = std::move(l1);
        s.lambda2 = std::move(l2);
        s.lambda = std::move(shared);
        return s;
    }
    static JointSpec clayton(std::string theta, MarginalSpec x, MarginalSpec y) {
        JointSpec s;
        s.kind = DependenceKind::clayton;
        s.theta = std::move(theta);
        s.x = std::move(x);
        s.y = std::move(y);
        return s;
    }
};

// Window sizing for the materialized part of h(i,j).
//
// Light-tailed marginals extend to the truncation index for trunc_eps, so
// the window holds all but trunc_eps of the mass. A marginal whose
// truncation index exceeds window_cap is treated as heavy-tailed: its axis
// extends only to min_index (what the recursions need exactly), and the
// missing mass is reported as tail_mass rather than materialized.
struct WindowOptions {
    double trunc_eps = 1e-15;
    int min_index = 0;
    int window_cap = 4096;
    std::size_t max_cells = 25'000'000;
};

// The joint pmf h(i,j) of one claim pair (X, Y) on a finite window
// [0,KX] x [0,KY], with exact marginal summaries from closed forms.
//
// Cells inside the window are exact up to rounding regardless of tail
// truncation, so the convolution s(k) and the column h(k,0) are exact for
// every index the window covers completely.
template <class Real>
class JointMatrix {
  public:
    DependenceKind kind() const { return kind_; }
    int max_i() const { return kx_; }
    int max_j() const { return ky_; }

    // h(i,j); zero outside the window
    const Real& h(int i, int j) const {
        static const Real zero = 0;
        if (i < 0 || j < 0 || i > kx_ || j > ky_) return zero;
        return h_[static_cast<std::size_t>(i) * (ky_ + 1) + j];
    }

    // pmf of S = X + Y; exact for k <= s_complete(), zero beyond for a
    // distribution whose whole support lies in the window
    Real s(int k) const {
        if (k < 0) return 0;
        if (k <= s_complete_) return s_[k];
        if (complete_support_) return 0;
        throw std::out_of_range("sum pmf requested beyond the exact window");
    }
    int s_complete() const { return s_complete_; }

    // h(k, 0), the joint mass on the axis Y = 0
    Real h_col0(int k) const {
        if (k < 0) return 0;
        if (k <= kx_) return h(k, 0);
        if (complete_support_) return 0;
        throw std::out_of_range("h(k,0) requested beyond the exact window");
    }

    // exact marginals and moments (closed forms where the model has them;
    // means and variances may be +inf)
    Real x0() const { return x_pmf_[0]; }
    Real y0() const { return y_pmf_[0]; }
    Real x_pmf(int k) const { return k >= 0 && k <= kx_ ? x_pmf_[k] : Real(0); }
    Real y_pmf(int k) const { return k >= 0 && k <= ky_ ? y_pmf_[k] : Real(0); }
    Real mean_x() const { return mean_x_; }
    Real mean_y() const { return mean_y_; }
    Real var_x() const { return var_x_; }
    Real var_y() const { return var_y_; }
    Real mean_sum() const { return mean_x_ + mean_y_; }

    // probability mass outside the window
    Real tail_mass() const { return tail_mass_; }
    // largest rounding-negative rectangle value clamped to zero
    Real max_clamp() const { return max_clamp_; }
    // true when the window holds the entire support, so s(k) and h(k,0)
    // are exactly zero beyond it
    bool complete_support() const { return complete_support_; }

    template <class R>
    friend JointMatrix<R> build_joint(const JointSpec&, const WindowOptions&);

  private:
    Real& cell(int i, int j) { return h_[static_cast<std::size_t>(i) * (ky_ + 1) + j]; }

    void allocate(int kx, int ky, std::size_t max_cells) {
        kx_ = kx;
        ky_ = ky;
        const std::size_t cells =
            (static_cast<std::size_t>(kx) + 1) * (static_cast<std::size_t>(ky) + 1);
        if (cells > max_cells)
            throw ParameterError("joint window of " + std::to_string(cells) +
                                 " cells exceeds the cell budget; reduce the window or horizon");
        h_.assign(cells, Real(0));
    }

    // window marginals, sum pmf, tail mass from the filled cells
    void finish(bool complete_support) {
        complete_support_ = complete_support;
        Real total = 0;
        for (const Real& v : h_) total += v;
        tail_mass_ = 1 - total;
        if (tail_mass_ < 0) tail_mass_ = 0;
        s_complete_ = complete_support_ ? kx_ + ky_ : std::min(kx_, ky_);
        s_.assign(s_complete_ + 1, Real(0));
        for (int i = 0; i <= kx_; ++i)
            for (int j = 0; j <= ky_; ++j)
                if (i + j <= s_complete_) s_[i + j] += h(i, j);
    }

    DependenceKind kind_ = DependenceKind::product;
    int kx_ = 0, ky_ = 0;
    std::vector<Real> h_;
    std::vector<Real> s_;
    std::vector<Real> x_pmf_, y_pmf_;
    int s_complete_ = 0;
    bool complete_support_ = false;
    Real mean_x_ = 0, mean_y_ = 0, var_x_ = 0, var_y_ = 0;
    Real tail_mass_ = 0, max_clamp_ = 0;
};

namespace detail {

template <class Real>
int window_index(const Marginal<Real>& m, const WindowOptions& w) {
    const long long t = m.truncation_index(Real(w.trunc_eps));
    long long k = (t <= w.window_cap) ? std::max<long long>(w.min_index, t)
                                      : static_cast<long long>(w.min_index);
    return static_cast<int>(std::max<long long>(k, 2));
}

template <class Real>
Real parse_param(const std::string& text, const char* what) {
    if (text.empty()) throw ParameterError(std::string(what) + " is missing");
    try {
        return real_from_string<Real>(text);
    } catch (const std::exception&) {
        throw ParameterError(std::string(what) + " is not a number: " + text);
    }
}

}  // namespace detail

template <class Real>
JointMatrix<Real> build_joint(const JointSpec& spec, const WindowOptions& w = {}) {
    JointMatrix<Real> m;
    m.kind_ = spec.kind;
    switch (spec.kind) {
        case DependenceKind::explicit_matrix: {
            if (spec.matrix.empty() || spec.matrix.front().empty())
                throw ParameterError("explicit matrix must be nonempty");
            const int kx = static_cast<int>(spec.matrix.size()) - 1;
            const int ky = static_cast<int>(spec.matrix.front().size()) - 1;
            for (const auto& row : spec.matrix)
                if (static_cast<int>(row.size()) != ky + 1)
                    throw ParameterError("explicit matrix must be rectangular");
            m.allocate(kx, ky, w.max_cells);
            Real total = 0;
            for (int i = 0; i <= kx; ++i)
                for (int j = 0; j <= ky; ++j) {
                    Real v = detail::parse_param<Real>(spec.matrix[i][j], "matrix entry");
                    if (v < 0) throw ParameterError("matrix entries must be >= 0");
                    m.cell(i, j) = v;
                    total += v;
                }
            using std::abs;
            if (abs(total - 1) > Real(1e-10))
                throw ParameterError("explicit matrix mass must be 1 within 1e-10");
            m.x_pmf_.assign(kx + 1, Real(0));
            m.y_pmf_.assign(ky + 1, Real(0));
            for (int i = 0; i <= kx; ++i)
                for (int j = 0; j <= ky; ++j) {
                    m.x_pmf_[i] += m.h(i, j);
                    m.y_pmf_[j] += m.h(i, j);
                }
            Real ex = 0, ey = 0, ex2 = 0, ey2 = 0;
            for (int i = 0; i <= kx; ++i) {
                ex += Real(i) * m.x_pmf_[i];
                ex2 += Real(i) * Real(i) * m.x_pmf_[i];
            }
            for (int j = 0; j <= ky; ++j) {
                ey += Real(j) * m.y_pmf_[j];
                ey2 += Real(j) * Real(j) * m.y_pmf_[j];
            }
            m.mean_x_ = ex;
            m.mean_y_ = ey;
            m.var_x_ = ex2 - ex * ex;
            m.var_y_ = ey2 - ey * ey;
            m.finish(true);
            return m;
        }
        case DependenceKind::product: {
            Marginal<Real> mx(spec.x), my(spec.y);
            const int kx = detail::window_index(mx, w);
            const int ky = detail::window_index(my, w);
            m.allocate(kx, ky, w.max_cells);
            m.x_pmf_ = mx.pmf_table(kx);
            m.y_pmf_ = my.pmf_table(ky);
            for (int i = 0; i <= kx; ++i)
                for (int j = 0; j <= ky; ++j) m.cell(i, j) = m.x_pmf_[i] * m.y_pmf_[j];
            m.mean_x_ = mx.mean();
            m.mean_y_ = my.mean();
            m.var_x_ = mx.variance();
            m.var_y_ = my.variance();
            m.finish(spec.x.kind == MarginalKind::finite && spec.y.kind == MarginalKind::finite);
            return m;
        }
        case DependenceKind::bivariate_poisson: {
            const Real l1 = detail::parse_param<Real>(spec.lambda1, "lambda1");
            const Real l2 = detail::parse_param<Real>(spec.lambda2, "lambda2");
            const Real l = detail::parse_param<Real>(spec.lambda, "lambda");
            if (!(l1 > 0) || !(l2 > 0))
                throw ParameterError("bivariate_poisson needs lambda1 > 0 and lambda2 > 0");
            if (l < 0 || !(l < std::min(l1, l2)))
                throw ParameterError("bivariate_poisson needs 0 <= lambda < min(lambda1, lambda2)");
            Marginal<Real> mx(MarginalSpec::poisson(spec.lambda1));
            Marginal<Real> my(MarginalSpec::poisson(spec.lambda2));
            const int kx = detail::window_index(mx, w);
            const int ky = detail::window_index(my, w);
            m.allocate(kx, ky, w.max_cells);
            // h(k,l) = e^(-(l1+l2-l)) sum_i a_(k-i) b_(l-i) c_i with
            // a_n = (l1-l)^n/n!, b_n = (l2-l)^n/n!, c_n = l^n/n!
            const int top = std::max(kx, ky);
            std::vector<Real> a(top + 1), b(top + 1), c(top + 1);
            a[0] = b[0] = c[0] = 1;
            for (int n = 1; n <= top; ++n) {
                a[n] = a[n - 1] * (l1 - l) / Real(n);
                b[n] = b[n - 1] * (l2 - l) / Real(n);
                c[n] = c[n - 1] * l / Real(n);
            }
            // the shared-component weights c decay factorially, so indices
            // whose weight is below 1e-140 of the peak add nothing at any
            // supported precision given the cell magnitudes the recursions use
            Real cmax = 0;
            for (const Real& v : c) cmax = std::max(cmax, v);
            int t_cut = 0;
            for (int n = 0; n <= top; ++n)
                if (c[n] > cmax * Real(1e-140)) t_cut = n;
            using std::exp;
            const Real pref = exp(-(l1 + l2 - l));
            for (int i = 0; i <= kx; ++i)
                for (int j = 0; j <= ky; ++j) {
                    Real acc = 0;
                    for (int t = std::min(std::min(i, j), t_cut); t >= 0; --t)
                        acc += a[i - t] * b[j - t] * c[t];
                    m.cell(i, j) = pref * acc;
                }
            m.x_pmf_ = mx.pmf_table(kx);
            m.y_pmf_ = my.pmf_table(ky);
            m.mean_x_ = l1;
            m.mean_y_ = l2;
            m.var_x_ = l1;
            m.var_y_ = l2;
            m.finish(false);
            return m;
        }
        case DependenceKind::clayton: {
            const Real theta = detail::parse_param<Real>(spec.theta, "theta");
            Marginal<Real> mx(spec.x), my(spec.y);
            const int kx = detail::window_index(mx, w);
            const int ky = detail::window_index(my, w);
            m.allocate(kx, ky, w.max_cells);
            const std::vector<Real> fx = mx.cdf_table(kx);
            const std::vector<Real> fy = my.cdf_table(ky);
            // copula values on the cdf grid, with C(F(-1), .) = C(., F(-1)) = 0
            const std::size_t stride = ky + 2;
            std::vector<Real> cgrid((kx + 2) * stride, Real(0));
            for (int i = 0; i <= kx; ++i)
                for (int j = 0; j <= ky; ++j)
                    cgrid[(i + 1) * stride + (j + 1)] = clayton_cdf<Real>(fx[i], fy[j], theta);
            // rectangle (inclusion-exclusion) mass of each cell; rounding in
            // the copula is amplified by the 1/theta exponent, so negatives
            // up to eps/|theta| are rounding, not structure
            using std::abs;
            using std::min;
            const Real cond = min(abs(theta), Real(1));
            const Real clamp_tol =
                std::max(Real(1e-30), Real(64) * machine_epsilon<Real>() / cond);
            for (int i = 0; i <= kx; ++i)
                for (int j = 0; j <= ky; ++j) {
                    Real v = cgrid[(i + 1) * stride + (j + 1)] - cgrid[i * stride + (j + 1)] -
                             cgrid[(i + 1) * stride + j] + cgrid[i * stride + j];
                    if (v < 0) {
                        if (-v > clamp_tol)
                            throw PrecisionError(
                                "clayton rectangle mass below the clamp tolerance; "
                                "raise precision_bits");
                        m.max_clamp_ = std::max(m.max_clamp_, -v);
                        v = 0;
                    }
                    m.cell(i, j) = v;
                }
            m.x_pmf_ = mx.pmf_table(kx);
            m.y_pmf_ = my.pmf_table(ky);
            m.mean_x_ = mx.mean();
            m.mean_y_ = my.mean();
            m.var_x_ = mx.variance();
            m.var_y_ = my.variance();
            m.finish(spec.x.kind == MarginalKind::finite && spec.y.kind == MarginalKind::finite);
            return m;
        }
    }
    throw ParameterError("unknown dependence kind");
}

// Pearson correlation of (X, Y) from exact marginal moments and the
// windowed cross moment. Returns nothing when either variance is infinite
// (power tails with exponent <= 3) or zero (degenerate marginals); for
// heavy-tailed models with finite variance the window tail still biases
// the cross moment, which tail_mass() quantifies.
template <class Real>
std::optional<Real> pearson_correlation(const JointMatrix<Real>& m) {
    using std::isinf;
    using std::sqrt;
    if (isinf(m.var_x()) || isinf(m.var_y())) return std::nullopt;
    if (!(m.var_x() > 0) || !(m.var_y() > 0)) return std::nullopt;
    Real exy = 0;
    for (int i = 1; i <= m.max_i(); ++i)
        for (int j = 1; j <= m.max_j(); ++j) exy += Real(i) * Real(j) * m.h(i, j);
    const Real cov = exy - m.mean_x() * m.mean_y();
    return cov / sqrt(m.var_x() * m.var_y());
}

inline std::string describe(const MarginalSpec& m) {
    switch (m.kind) {
        case MarginalKind::poisson:
            return "poisson(" + m.rate + ")";
        case MarginalKind::shifted_zeta:
            return "shifted_zeta(" + m.exponent + ")";
        case MarginalKind::finite:
            return "finite[" + std::to_string(m.pmf.size()) + " masses]";
    }
    return "?";
}

inline std::string describe(const JointSpec& s) {
    switch (s.kind) {
        case DependenceKind::explicit_matrix:
            return "explicit " + std::to_string(s.matrix.size()) + "x" +
                   std::to_string(s.matrix.empty() ? 0 : s.matrix.front().size()) + " matrix";
        case DependenceKind::product:
            return "product(x=" + describe(s.x) + ", y=" + describe(s.y) + ")";
        case DependenceKind::bivariate_poisson:
            return "bivariate_poisson(lambda1=" + s.lambda1 + ", lambda2=" + s.lambda2 +
                   ", lambda=" + s.lambda + ")";
        case DependenceKind::clayton:
            return "clayton(theta=" + s.theta + ", x=" + describe(s.x) + ", y=" + describe(s.y) +
                   ")";
    }
    return "?";
}

}  // namespace biruin
