#include <cmath>
#include <stdexcept>

#include <catch2/catch_amalgamated.hpp>

#include "biruin/joint.hpp"
#include "biruin/real.hpp"

using namespace biruin;

namespace {

WindowOptions window_for(int min_index) {
    WindowOptions w;
    w.min_index = min_index;
    return w;
}

}  // namespace

TEST_CASE("bivariate poisson frozen pins at 256 bits", "[joint]") {
    using std::abs;
    const auto m =
        build_joint<Real256>(JointSpec::bivariate_poisson("0.3", "1.4", "0.15"), window_for(12));
    const Real256 tol("1e-25");
    CHECK(abs(m.h(0, 0) - Real256("0.212247973826743057717754997580")) < tol);
    CHECK(abs(m.h(2, 3) - Real256("0.00749293384163746243798519840089")) < tol);
    CHECK(abs(m.h(5, 1) - Real256("0.000000839457318357724007575105215037")) < tol);
}

TEST_CASE("bivariate poisson mass at the origin", "[joint]") {
    using std::abs;
    struct Case {
        const char* l1;
        const char* l2;
        const char* l;
    };
    for (const Case& c : {Case{"0.3", "1.4", "0.15"}, Case{"1.1", "2.2", "0.9"}}) {
        const auto m = build_joint<Real256>(JointSpec::bivariate_poisson(c.l1, c.l2, c.l),
                                            window_for(8));
        using std::exp;
        const Real256 expect =
            exp(-(Real256(c.l1) + Real256(c.l2) - Real256(c.l)));
        INFO(c.l1 << " " << c.l2 << " " << c.l);
        CHECK(abs(m.h(0, 0) - expect) < Real256("1e-70"));
    }
}

TEST_CASE("bivariate poisson with zero shared intensity is the product", "[joint]") {
    using std::abs;
    const auto bp =
        build_joint<Real256>(JointSpec::bivariate_poisson("0.3", "1.4", "0"), window_for(20));
    const auto prod = build_joint<Real256>(
        JointSpec::product(MarginalSpec::poisson("0.3"), MarginalSpec::poisson("1.4")),
        window_for(20));
    Real256 worst = 0;
    for (int i = 0; i <= std::min(bp.max_i(), prod.max_i()); ++i)
        for (int j = 0; j <= std::min(bp.max_j(), prod.max_j()); ++j)
            worst = std::max(worst, abs(bp.h(i, j) - prod.h(i, j)));
    CHECK(worst < Real256("1e-70"));
}

TEST_CASE("bivariate poisson covariance equals the shared intensity", "[joint]") {
    using std::abs;
    const auto m =
        build_joint<Real256>(JointSpec::bivariate_poisson("0.3", "1.4", "0.15"), window_for(30));
    Real256 exy = 0;
    for (int i = 1; i <= m.max_i(); ++i)
        for (int j = 1; j <= m.max_j(); ++j) exy += Real256(i) * Real256(j) * m.h(i, j);
    const Real256 cov = exy - m.mean_x() * m.mean_y();
    CHECK(abs(cov - Real256("0.15")) < Real256("1e-8"));

    const auto corr = pearson_correlation(m);
    REQUIRE(corr.has_value());
    using std::sqrt;
    CHECK(abs(*corr - Real256("0.15") / sqrt(Real256("0.3") * Real256("1.4"))) <
          Real256("1e-8"));
}

TEST_CASE("window marginals and sum pmf are consistent", "[joint]") {
    using std::abs;
    const auto specs = {
        JointSpec::bivariate_poisson("0.3", "1.4", "0.15"),
        JointSpec::clayton("-0.9", MarginalSpec::poisson("0.3"), MarginalSpec::poisson("1.4")),
        JointSpec::product(MarginalSpec::poisson("0.3"), MarginalSpec::poisson("1.4")),
    };
    for (const JointSpec& spec : specs) {
        const auto m = build_joint<double>(spec, window_for(10));
        INFO(describe(spec));

        double total = 0;
        for (int i = 0; i <= m.max_i(); ++i)
            for (int j = 0; j <= m.max_j(); ++j) total += m.h(i, j);
        CHECK(std::abs(total + m.tail_mass() - 1) < 1e-10);

        for (int i = 0; i <= m.max_i(); ++i) {
            double row = 0;
            for (int j = 0; j <= m.max_j(); ++j) row += m.h(i, j);
            CHECK(row <= m.x_pmf(i) + 1e-12);
            CHECK(m.x_pmf(i) - row < 1e-10);
        }
        for (int k = 0; k <= m.s_complete(); ++k) {
            double s = 0;
            for (int i = 0; i <= k; ++i) s += m.h(i, k - i);
            CHECK(std::abs(m.s(k) - s) < 1e-14);
        }
        CHECK(std::abs(to_double(m.mean_sum()) - 1.7) < 1e-12);
    }
}

TEST_CASE("weakly coupled clayton is close to the product", "[joint]") {
    const auto weak = build_joint<double>(
        JointSpec::clayton("0.01", MarginalSpec::poisson("0.3"), MarginalSpec::poisson("1.4")),
        window_for(10));
    const auto prod = build_joint<double>(
        JointSpec::product(MarginalSpec::poisson("0.3"), MarginalSpec::poisson("1.4")),
        window_for(10));
    double worst = 0;
    for (int i = 0; i <= std::min(weak.max_i(), prod.max_i()); ++i)
        for (int j = 0; j <= std::min(weak.max_j(), prod.max_j()); ++j)
            worst = std::max(worst, std::abs(weak.h(i, j) - prod.h(i, j)));
    CHECK(worst < 0.01);
    CHECK(worst > 0);
}

TEST_CASE("independent product has zero correlation", "[joint]") {
    using std::abs;
    // window moments carry the truncated tail, so the rounding floor of the
    // correlation tracks the tail mass; index 40 puts it far below 1e-30
    const auto m = build_joint<Real256>(
        JointSpec::product(MarginalSpec::poisson("0.3"), MarginalSpec::poisson("1.4")),
        window_for(40));
    const auto corr = pearson_correlation(m);
    REQUIRE(corr.has_value());
    CHECK(abs(*corr) < Real256("1e-30"));
}

TEST_CASE("heavy-tailed axis stays at the requested window", "[joint]") {
    const auto spec =
        JointSpec::clayton("0.01", MarginalSpec::poisson("0.2"), MarginalSpec::shifted_zeta("2.3"));
    const auto m = build_joint<double>(spec, window_for(34));
    CHECK(m.max_j() == 34);
    CHECK(m.tail_mass() > 1e-6);
    CHECK_FALSE(m.complete_support());
    CHECK(m.s_complete() == 34);
    CHECK_THROWS_AS(m.s(35), std::out_of_range);
    CHECK_THROWS_AS(m.h_col0(m.max_i() + 1), std::out_of_range);
    CHECK_FALSE(pearson_correlation(m).has_value());
}

TEST_CASE("explicit matrix accessors and complete support", "[joint]") {
    const auto m = build_joint<double>(
        JointSpec::explicit_matrix({{"0.25", "0.25"}, {"0.25", "0.25"}}), WindowOptions{});
    CHECK(m.complete_support());
    CHECK(m.s(0) == 0.25);
    CHECK(m.s(1) == 0.5);
    CHECK(m.s(2) == 0.25);
    CHECK(m.s(7) == 0.0);
    CHECK(m.h_col0(5) == 0.0);
    CHECK(m.tail_mass() == 0.0);
    CHECK(m.mean_x() == 0.5);
    CHECK(m.var_x() == 0.25);
}

TEST_CASE("joint spec validation", "[joint]") {
    CHECK_THROWS_AS(build_joint<double>(JointSpec::explicit_matrix({{"0.5", "0.4"}}),
                                        WindowOptions{}),
                    ParameterError);
    CHECK_THROWS_AS(build_joint<double>(JointSpec::explicit_matrix({{"0.5", "-0.1"}, {"0.6", "0"}}),
                                        WindowOptions{}),
                    ParameterError);
    CHECK_THROWS_AS(build_joint<double>(JointSpec::explicit_matrix({{"0.5"}, {"0.25", "0.25"}}),
                                        WindowOptions{}),
                    ParameterError);
    CHECK_THROWS_AS(
        build_joint<double>(JointSpec::bivariate_poisson("0.3", "1.4", "0.3"), WindowOptions{}),
        ParameterError);
    CHECK_THROWS_AS(
        build_joint<double>(JointSpec::bivariate_poisson("0", "1.4", "0"), WindowOptions{}),
        ParameterError);
    CHECK_THROWS_AS(
        build_joint<double>(JointSpec::bivariate_poisson("0.3", "1.4", "-0.1"), WindowOptions{}),
        ParameterError);

    WindowOptions tiny;
    tiny.min_index = 4000;
    tiny.max_cells = 1000;
    CHECK_THROWS_AS(build_joint<double>(
                        JointSpec::product(MarginalSpec::poisson("1"), MarginalSpec::poisson("1")),
                        tiny),
                    ParameterError);
}

TEST_CASE("spec descriptions name the model", "[joint]") {
    CHECK(describe(JointSpec::bivariate_poisson("0.3", "1.4", "0.15")) ==
          "bivariate_poisson(lambda1=0.3, lambda2=1.4, lambda=0.15)");
    CHECK(describe(JointSpec::clayton("100", MarginalSpec::poisson("0.2"),
                                      MarginalSpec::shifted_zeta("2.3"))) ==
          "clayton(theta=100, x=poisson(0.2), y=shifted_zeta(2.3))");
    CHECK(describe(JointSpec::explicit_matrix({{"1"}})) == "explicit 1x1 matrix");
}
