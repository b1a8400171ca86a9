#include <catch2/catch_amalgamated.hpp>

#include "liprox/losses.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

using namespace liprox;

namespace {

// Nesterov dual form evaluated by fine grid over w in [-1, 1]; the closed
// forms must agree with the maximized value to grid accuracy.
double hinge_sample_grid(double z, double tau)
{
    double best = -1e300;
    for (int k = 0; k <= 2000000; ++k) {
        const double w = -1.0 + 2.0 * k / 2000000.0;
        best = std::max(best, 0.5 * (z + w * z) - 0.5 * tau * w * w);
    }
    return best;
}

double quantile_sample_grid(double z, double tau, double theta)
{
    double best = -1e300;
    for (int k = 0; k <= 2000000; ++k) {
        const double w = -1.0 + 2.0 * k / 2000000.0;
        best = std::max(best, 0.5 * ((2.0 * theta - 1.0) * z + w * z) - 0.5 * tau * w * w);
    }
    return best;
}

}  // namespace

TEST_CASE("smoothed hinge per-sample closed form")
{
    CHECK(smoothed_hinge_sample(0.0, 0.2) == 0.0);
    CHECK(smoothed_hinge_sample(1.0, 0.2) == Catch::Approx(0.9).epsilon(1e-12));
    CHECK(smoothed_hinge_sample(0.2, 0.2) == Catch::Approx(0.125).epsilon(1e-12));

    // grid-maximization oracle of the dual form
    CHECK(smoothed_hinge_sample(1.0, 0.2) == Catch::Approx(hinge_sample_grid(1.0, 0.2)).margin(1e-6));
    CHECK(smoothed_hinge_sample(0.2, 0.2) == Catch::Approx(hinge_sample_grid(0.2, 0.2)).margin(1e-6));
    CHECK(smoothed_hinge_sample(-0.7, 0.3) ==
          Catch::Approx(hinge_sample_grid(-0.7, 0.3)).margin(1e-6));

    // continuity at the breakpoints z = +-2 tau
    const double tau = 0.17;
    for (double z : {2.0 * tau, -2.0 * tau}) {
        const double inner = 0.5 * z + z * z / (8.0 * tau);
        CHECK(smoothed_hinge_sample(z, tau) == Catch::Approx(inner).margin(1e-15));
    }
}

TEST_CASE("smoothed quantile per-sample closed form")
{
    CHECK(smoothed_quantile_sample(0.0, 0.1, 0.5) == 0.0);
    CHECK(smoothed_quantile_sample(1.0, 0.1, 0.5) == Catch::Approx(0.45).epsilon(1e-12));
    CHECK(smoothed_quantile_sample(1.0, 0.1, 0.5) ==
          Catch::Approx(quantile_sample_grid(1.0, 0.1, 0.5)).margin(1e-6));
    CHECK(smoothed_quantile_sample(-0.4, 0.25, 0.8) ==
          Catch::Approx(quantile_sample_grid(-0.4, 0.25, 0.8)).margin(1e-6));
    CHECK(smoothed_quantile_sample(0.05, 0.25, 0.3) ==
          Catch::Approx(quantile_sample_grid(0.05, 0.25, 0.3)).margin(1e-6));
}

TEST_CASE("smoothed quantile approaches the exact pinball loss as tau -> 0")
{
    SplitMix64 rng(21);
    auto data = testutil::random_regression(rng, 12, 5);
    auto beta = testutil::random_vector(rng, 5);
    for (double theta : {0.25, 0.5, 0.9}) {
        LossSpec spec{LossKind::smoothed_quantile, 1e-6, theta, 0.0};
        const double smoothed = loss_value(data, spec, beta);
        const double exact = exact_loss_value(data, spec, beta);
        CHECK(smoothed == Catch::Approx(exact).margin(1e-4));
    }
}

TEST_CASE("logistic loss values")
{
    DenseMatrix X(2, 2, {1, 0, 0, 1});
    Dataset data(X, {1.0, -1.0});
    LossSpec spec{LossKind::logistic};
    CHECK(loss_value(data, spec, {0.0, 0.0}) == Catch::Approx(std::log(2.0)).epsilon(1e-12));

    // saturated margins: value ~ exp(-50), no overflow
    Dataset data2(DenseMatrix(1, 1, {50.0}), {1.0});
    const double v = loss_value(data2, spec, {1.0});
    CHECK(v == Catch::Approx(std::exp(-50.0)).epsilon(1e-6));
    CHECK(std::isfinite(loss_value(Dataset(DenseMatrix(1, 1, {-5000.0}), {1.0}), spec, {1.0})));
}

TEST_CASE("least squares values")
{
    SplitMix64 rng(22);
    auto X = testutil::random_matrix(rng, 6, 3);
    auto beta0 = testutil::random_vector(rng, 3);
    Dataset interp(X, matvec(X, beta0));
    LossSpec spec{LossKind::least_squares};
    CHECK(loss_value(interp, spec, beta0) == Catch::Approx(0.0).margin(1e-18));
    auto eval = loss_eval(interp, spec, beta0);
    CHECK(norm2(eval.gradient) < 1e-9);

    CHECK(loss_value(interp, spec, std::vector<double>(3, 0.0)) ==
          Catch::Approx(norm2_sq(interp.y) / 6.0).epsilon(1e-12));
}

TEST_CASE("gradients match central finite differences")
{
    SplitMix64 rng(23);
    const std::vector<LossSpec> specs = {
        {LossKind::smoothed_hinge, 0.2, 0.5, 0.0},
        {LossKind::smoothed_hinge, 0.05, 0.5, 0.3},
        {LossKind::logistic, 0.2, 0.5, 0.0},
        {LossKind::smoothed_quantile, 0.2, 0.25, 0.0},
        {LossKind::smoothed_quantile, 0.1, 0.5, 0.0},
        {LossKind::smoothed_quantile, 0.3, 0.9, 0.1},
        {LossKind::least_squares, 0.2, 0.5, 0.0},
        {LossKind::least_squares, 0.2, 0.5, 0.7},
    };
    for (const auto& spec : specs) {
        auto data = spec.is_classification() ? testutil::random_classification(rng, 8, 5)
                                             : testutil::random_regression(rng, 8, 5);
        for (int rep = 0; rep < 100; ++rep) {
            auto beta = testutil::random_vector(rng, 5);
            auto eval = loss_eval(data, spec, beta);
            auto fd = oracle::central_difference(
                [&](const std::vector<double>& b) { return loss_value(data, spec, b); }, beta);
            const double scale = std::max(1.0, norm2(eval.gradient));
            CHECK(testutil::max_abs_diff(eval.gradient, fd) / scale < 1e-5);
        }
    }
}

TEST_CASE("smoothing sandwich g - tau/2 <= g^tau <= g")
{
    SplitMix64 rng(24);
    for (int rep = 0; rep < 500; ++rep) {
        const double tau = 0.05 + rng.uniform();
        LossSpec hinge{LossKind::smoothed_hinge, tau, 0.5, 0.0};
        auto data = testutil::random_classification(rng, 6, 4);
        auto beta = testutil::random_vector(rng, 4, 2.0);
        const double smoothed = loss_value(data, hinge, beta);
        const double exact = exact_loss_value(data, hinge, beta);
        CHECK(smoothed <= exact + 1e-12);
        CHECK(smoothed >= exact - tau / 2.0 - 1e-12);

        LossSpec quant{LossKind::smoothed_quantile, tau, 0.2 + 0.6 * rng.uniform(), 0.0};
        auto rdata = testutil::random_regression(rng, 6, 4);
        const double qs = loss_value(rdata, quant, beta);
        const double qe = exact_loss_value(rdata, quant, beta);
        CHECK(qs <= qe + 1e-12);
        CHECK(qs >= qe - tau / 2.0 - 1e-12);
    }
}

TEST_CASE("convexity probe on random segments")
{
    SplitMix64 rng(25);
    const std::vector<LossSpec> specs = {
        {LossKind::smoothed_hinge, 0.2, 0.5, 0.0},
        {LossKind::logistic, 0.2, 0.5, 0.0},
        {LossKind::smoothed_quantile, 0.15, 0.7, 0.0},
        {LossKind::least_squares, 0.2, 0.5, 0.2},
    };
    for (const auto& spec : specs) {
        auto data = spec.is_classification() ? testutil::random_classification(rng, 7, 4)
                                             : testutil::random_regression(rng, 7, 4);
        for (int rep = 0; rep < 100; ++rep) {
            auto b1 = testutil::random_vector(rng, 4);
            auto b2 = testutil::random_vector(rng, 4);
            const double t = rng.uniform();
            std::vector<double> mid(4);
            for (int j = 0; j < 4; ++j) mid[j] = t * b1[j] + (1.0 - t) * b2[j];
            CHECK(loss_value(data, spec, mid) <=
                  t * loss_value(data, spec, b1) + (1.0 - t) * loss_value(data, spec, b2) + 1e-10);
        }
    }
}

TEST_CASE("lipschitz constants: closed-form cases")
{
    const double s2 = std::sqrt(2.0);
    DenseMatrix X(2, 2, {s2, 0, 0, s2});  // mu_max((1/n) X^T X) = 1
    CHECK(lipschitz_constant({LossKind::smoothed_hinge, 0.25, 0.5, 0.0}, X) ==
          Catch::Approx(1.0).epsilon(1e-9));
    CHECK(lipschitz_constant({LossKind::least_squares, 0.2, 0.5, 0.0}, X) ==
          Catch::Approx(2.0).epsilon(1e-9));
    CHECK(lipschitz_constant({LossKind::logistic, 0.2, 0.5, 0.0}, X) ==
          Catch::Approx(0.25).epsilon(1e-9));
    CHECK(lipschitz_constant({LossKind::least_squares, 0.2, 0.5, 1.5}, X) ==
          Catch::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("gradient differences bounded by the Lipschitz constant")
{
    SplitMix64 rng(26);
    const std::vector<LossSpec> specs = {
        {LossKind::smoothed_hinge, 0.2, 0.5, 0.0},
        {LossKind::smoothed_quantile, 0.15, 0.3, 0.0},
        {LossKind::logistic, 0.2, 0.5, 0.0},
        {LossKind::least_squares, 0.2, 0.5, 0.1},
    };
    for (const auto& spec : specs) {
        auto data = spec.is_classification() ? testutil::random_classification(rng, 10, 6)
                                             : testutil::random_regression(rng, 10, 6);
        const double C = lipschitz_constant(spec, data.X);
        for (int rep = 0; rep < 1000; ++rep) {
            auto b1 = testutil::random_vector(rng, 6, 2.0);
            auto b2 = testutil::random_vector(rng, 6, 2.0);
            auto g1 = loss_eval(data, spec, b1).gradient;
            auto g2 = loss_eval(data, spec, b2).gradient;
            std::vector<double> dg(6), db(6);
            for (int j = 0; j < 6; ++j) {
                dg[j] = g1[j] - g2[j];
                db[j] = b1[j] - b2[j];
            }
            // slack covers the power-iteration tolerance in C itself
            CHECK(norm2(dg) <= C * norm2(db) * (1.0 + 1e-8));
        }
    }
}

TEST_CASE("loss validation errors")
{
    SplitMix64 rng(27);
    auto cls = testutil::random_classification(rng, 4, 3);
    auto reg = testutil::random_regression(rng, 4, 3);
    CHECK_THROWS_AS(validate(LossSpec{LossKind::smoothed_hinge, 0.0, 0.5, 0.0}, cls),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(LossSpec{LossKind::smoothed_quantile, 0.1, 1.0, 0.0}, reg),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(LossSpec{LossKind::smoothed_quantile, 0.1, 0.0, 0.0}, reg),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(LossSpec{LossKind::smoothed_hinge, 0.2, 0.5, -1.0}, cls),
                    std::invalid_argument);
    // classification losses demand +-1 labels
    CHECK_THROWS_AS(validate(LossSpec{LossKind::smoothed_hinge, 0.2, 0.5, 0.0}, reg),
                    std::invalid_argument);
    CHECK_THROWS_AS(loss_eval(reg, LossSpec{LossKind::logistic, 0.2, 0.5, 0.0}, {0, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("ridge term contributes value and gradient")
{
    SplitMix64 rng(28);
    auto data = testutil::random_regression(rng, 5, 3);
    auto beta = testutil::random_vector(rng, 3);
    LossSpec plain{LossKind::least_squares, 0.2, 0.5, 0.0};
    LossSpec ridged{LossKind::least_squares, 0.2, 0.5, 0.4};
    CHECK(loss_value(data, ridged, beta) ==
          Catch::Approx(loss_value(data, plain, beta) + 0.4 * norm2_sq(beta)).epsilon(1e-12));
    auto g0 = loss_eval(data, plain, beta).gradient;
    auto g1 = loss_eval(data, ridged, beta).gradient;
    for (int j = 0; j < 3; ++j)
        CHECK(g1[j] - g0[j] == Catch::Approx(0.8 * beta[j]).epsilon(1e-12));
}
