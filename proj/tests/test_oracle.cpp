#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "biruin/joint.hpp"
#include "biruin/oracle.hpp"

using namespace biruin;

namespace {

JointMatrix<double> window_model(const JointSpec& spec, int min_index) {
    WindowOptions w;
    w.min_index = min_index;
    return build_joint<double>(spec, w);
}

JointMatrix<double> from_rows(std::vector<std::vector<std::string>> rows) {
    return build_joint<double>(JointSpec::explicit_matrix(std::move(rows)), WindowOptions{});
}

// Frozen outputs of an independent high-precision run of the same dynamic
// program, rounded to double.
const double dp50_lam0[13] = {
    0.2054061830358321, 0.4018864432361341, 0.5609732431351473, 0.6821517755513198,
    0.7712616430462442, 0.8359250131171803, 0.8826520813887556, 0.9163377915131798,
    0.9405602157045827, 0.9579269551577325, 0.9703378855585959, 0.9791757298961751,
    0.9854450575143983};

}  // namespace

TEST_CASE("dynamic program matches frozen fifty-pair values", "[oracle]") {
    const auto m = window_model(JointSpec::bivariate_poisson("0.3", "1.4", "0"), 12 + 2 * 50);
    const auto dp = finite_horizon_survival(m, 12, 50);
    REQUIRE(dp.phi.size() == 13);
    CHECK(dp.pairs == 50);
    for (int u = 0; u <= 12; ++u) {
        INFO("u = " << u);
        CHECK(std::abs(dp.phi[u] - dp50_lam0[u]) < 1e-12);
    }
}

TEST_CASE("dynamic program matches frozen four-hundred-pair values", "[oracle]") {
    const auto m = window_model(JointSpec::bivariate_poisson("0.3", "1.4", "0"), 12 + 2 * 400);
    const auto dp = finite_horizon_survival(m, 12, 400);
    CHECK(std::abs(dp.phi[0] - 0.202337921856579) < 1e-12);
    CHECK(std::abs(dp.phi[2] - 0.5531318812739545) < 1e-12);
    CHECK(std::abs(dp.phi[12] - 0.9810878104381332) < 1e-12);
}

TEST_CASE("dynamic program matches a frozen dependent-claims value", "[oracle]") {
    const auto m = window_model(JointSpec::bivariate_poisson("0.3", "1.4", "0.299"), 2 + 2 * 50);
    const auto dp = finite_horizon_survival(m, 2, 50);
    CHECK(std::abs(dp.phi[2] - 0.4911638904053104) < 1e-12);
}

TEST_CASE("dynamic program reproduces exact walk patterns", "[oracle]") {
    SECTION("pairs (2,0)") {
        const auto m = from_rows({{"0"}, {"0"}, {"1"}});
        for (int pairs : {1, 2, 7}) {
            const auto dp = finite_horizon_survival(m, 5, pairs);
            CHECK(dp.phi[0] == 0.0);
            CHECK(dp.phi[1] == 0.0);
            for (int u = 2; u <= 5; ++u) CHECK(dp.phi[u] == 1.0);
        }
    }
    SECTION("pairs (0,0) or (1,1), equally likely") {
        const auto m = from_rows({{"0.5", "0"}, {"0", "0.5"}});
        for (int pairs = 1; pairs <= 5; ++pairs) {
            const auto dp = finite_horizon_survival(m, 3, pairs);
            CHECK(dp.phi[0] == 0.5);
            for (int u = 1; u <= 3; ++u) CHECK(dp.phi[u] == 1.0);
        }
    }
    SECTION("zero pairs means certain survival") {
        const auto m = from_rows({{"0"}, {"0"}, {"1"}});
        const auto dp = finite_horizon_survival(m, 3, 0);
        for (double v : dp.phi) CHECK(v == 1.0);
    }
}

TEST_CASE("a narrower window can only lower the dynamic program", "[oracle]") {
    const auto spec = JointSpec::bivariate_poisson("0.3", "1.4", "0");
    const auto wide = window_model(spec, 4 + 2 * 30);
    const auto narrow = window_model(spec, 20);
    const auto a = finite_horizon_survival(wide, 4, 30);
    const auto b = finite_horizon_survival(narrow, 4, 30);
    for (int u = 0; u <= 4; ++u) {
        INFO("u = " << u);
        CHECK(b.phi[u] <= a.phi[u] + 1e-15);
    }
}

TEST_CASE("monte carlo is deterministic in the seed, not the threads", "[oracle]") {
    const auto m = window_model(JointSpec::bivariate_poisson("0.3", "1.4", "0.15"), 40);
    const auto a = monte_carlo_ruin(m, 2, 30, 20000, 42, 1);
    const auto b = monte_carlo_ruin(m, 2, 30, 20000, 42, 4);
    const auto c = monte_carlo_ruin(m, 2, 30, 20000, 42, 3);
    CHECK(a.ruined == b.ruined);
    CHECK(a.ruined == c.ruined);
    CHECK(a.paths == 20000);

    const auto d = monte_carlo_ruin(m, 2, 30, 20000, 43, 2);
    CHECK(d.ruined != a.ruined);
}

TEST_CASE("monte carlo reproduces exact walk patterns", "[oracle]") {
    const auto m = from_rows({{"0"}, {"0"}, {"1"}});
    const auto ruin = monte_carlo_ruin(m, 1, 10, 5000, 7, 2);
    CHECK(ruin.estimate == 1.0);
    CHECK(ruin.std_error == 0.0);
    const auto safe = monte_carlo_ruin(m, 2, 10, 5000, 7, 2);
    CHECK(safe.estimate == 0.0);
    CHECK_FALSE(safe.tail_warning);
}

TEST_CASE("monte carlo agrees with the dynamic program", "[oracle]") {
    const auto m = window_model(JointSpec::bivariate_poisson("0.3", "1.4", "0"), 2 + 2 * 50);
    const auto dp = finite_horizon_survival(m, 2, 50);
    const double dp_ruin = 1 - dp.phi[2];
    const auto mc = monte_carlo_ruin(m, 2, 50, 1000000, 12345, 0);
    INFO("mc " << mc.estimate << " dp " << dp_ruin << " se " << mc.std_error);
    CHECK(std::abs(mc.estimate - dp_ruin) <= 4 * mc.std_error);
}

TEST_CASE("monte carlo flags a heavy off-window tail", "[oracle]") {
    WindowOptions w;
    w.min_index = 40;
    w.window_cap = 40;
    const auto m = build_joint<double>(
        JointSpec::clayton("0.01", MarginalSpec::poisson("0.2"), MarginalSpec::shifted_zeta("2.3")),
        w);
    REQUIRE(m.tail_mass() > 1e-6);
    const auto mc = monte_carlo_ruin(m, 1, 5, 2000, 9, 2);
    CHECK(mc.tail_warning);
}

TEST_CASE("oracle input validation", "[oracle]") {
    const auto m = from_rows({{"1"}});
    CHECK_THROWS_AS(finite_horizon_survival(m, -1, 5), ParameterError);
    CHECK_THROWS_AS(finite_horizon_survival(m, 3, -1), ParameterError);
    CHECK_THROWS_AS(monte_carlo_ruin(m, -1, 5, 100, 1, 1), ParameterError);
    CHECK_THROWS_AS(monte_carlo_ruin(m, 1, -1, 100, 1, 1), ParameterError);
    CHECK_THROWS_AS(monte_carlo_ruin(m, 1, 5, 0, 1, 1), ParameterError);
}
