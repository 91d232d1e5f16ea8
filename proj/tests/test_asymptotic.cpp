#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fieldrec/asymptotic.hpp"

using namespace fieldrec;

namespace {

// Simpson's rule for the integral form nu(x) = int_{-1/2}^{1/2} exp(-(2 pi x u)^2) du,
// the limit of Tr{C}/(2M+1) with u = k/(2M+1).
double nu_quadrature(double x) {
    const int n = 2000;
    const double h = 1.0 / n;
    auto f = [x](double u) {
        const double t = 2.0 * std::numbers::pi * x * u;
        return std::exp(-t * t);
    };
    double s = f(-0.5) + f(0.5);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-0.5 + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("nu") {
    CHECK(nu(0.0) == 1.0);
    CHECK(nu(100.0) < 0.01);
    CHECK(nu(1.0) == doctest::Approx(std::sqrt(std::numbers::pi) / (2.0 * std::numbers::pi) * std::erf(std::numbers::pi)).epsilon(1e-15));
    CHECK(nu(1.0) == doctest::Approx(0.28209).epsilon(1e-5));
    for (double x : {1e-9, 1e-6, 3e-5, 1e-3, 0.05, 0.3, 1.0, 2.5}) {
        CAPTURE(x);
        CHECK(nu(x) == doctest::Approx(nu_quadrature(x)).epsilon(1e-12));
    }
    // continuity across the series switch
    const double edge = 1e-4 / std::numbers::pi;
    CHECK(nu(edge * (1 - 1e-12)) == doctest::Approx(nu(edge * (1 + 1e-12))).epsilon(1e-14));
    CHECK_THROWS_AS(nu(-0.1), std::invalid_argument);
}

TEST_CASE("normalized traces of C powers approach nu") {
    const int m = 400;
    const int r = 2000;
    const double omega = 0.7;
    const CharMatrix c = char_matrix(m, omega / r);
    const double beta = (2.0 * m + 1.0) / r;
    const double n = 2.0 * m + 1.0;
    CHECK(c.trace_power(1) / n == doctest::Approx(nu(beta * omega / std::numbers::sqrt2)).epsilon(1e-4));
    CHECK(c.trace_power(2) / n == doctest::Approx(nu(beta * omega)).epsilon(1e-4));
}

TEST_CASE("lower bounds") {
    CHECK(lower_bound_model_a(ScenarioParams{0.2, 0.5, 0.0}) == doctest::Approx(0.1 / 1.1).epsilon(1e-15));
    CHECK(lower_bound_model_a(ScenarioParams{0.2, 0.0, 0.0}) == 0.0);
    CHECK(lower_bound_model_a(ScenarioParams{0.2, 1e12, 0.0}) == doctest::Approx(1.0));

    for (double beta : {0.1, 0.5, 0.9}) {
        for (double alpha : {0.0, 0.01, 1.0}) {
            const ScenarioParams p{beta, alpha, 0.0};
            CHECK(lower_bound_model_b(p) == doctest::Approx(lower_bound_model_a(p)).epsilon(1e-15));
        }
    }
    CHECK(lower_bound_model_b(ScenarioParams{0.2, 0.5, 1e9}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(lower_bound(Model::B, ScenarioParams{0.2, 0.5, 0.3}) == lower_bound_model_b(ScenarioParams{0.2, 0.5, 0.3}));
}

TEST_CASE("eigenvalue pools") {
    const EigenSample pool = sample_eigenvalues(0.2, 30, 8, 1);
    CHECK(pool.sensors == 305);
    CHECK(pool.values.size() == 8 * 61);
    for (double mean : pool.realization_means) CHECK(std::abs(mean - 1.0) < 1e-10);
    for (double v : pool.values) CHECK(v >= 0.0);
    CHECK(pool.expect([](double v) { return v; }, 1) == doctest::Approx(pool.realization_means.front()));

    // same seed, same pool, any worker count
    const EigenSample again = sample_eigenvalues(0.2, 30, 8, 1, 3);
    CHECK(again.values == pool.values);
    CHECK(sample_eigenvalues(0.2, 30, 8, 2).values != pool.values);

    CHECK_THROWS_AS(sample_eigenvalues(0.2, 0, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_eigenvalues(0.2, 10, 0, 1), std::invalid_argument);
}

TEST_CASE("finite-size second moment is 1 + beta (1 - 1/(2M+1))") {
    // E[Tr{(beta R)^2}]/n over uniform layouts, exact for every M
    const int m = 10;
    const double beta = 0.25;
    const EigenSample pool = sample_eigenvalues(beta, m, 2000, 3);
    const double n = 2.0 * m + 1.0;
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < 2000; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < pool.per_realization(); ++j) s += std::pow(pool.values[i * pool.per_realization() + j], 2);
        s /= n;
        mean += s;
        sq += s * s;
    }
    mean /= 2000.0;
    const double se = std::sqrt((sq / 2000.0 - mean * mean) / 2000.0);
    const double b = pool.effective_beta;
    CHECK(std::abs(mean - (1.0 + b * (1.0 - 1.0 / n))) < 3.0 * se);
}

TEST_CASE("small eigenvalues become more frequent as beta grows") {
    const auto below = [](const EigenSample& s) { return s.expect([](double v) { return v < 0.1 ? 1.0 : 0.0; }); };
    CHECK(below(sample_eigenvalues(0.1, 50, 10, 4)) < below(sample_eigenvalues(0.5, 50, 10, 4)));
}

TEST_CASE("asymptotic closed forms") {
    const ScenarioParams p{0.2, 0.5, 0.0};
    CHECK(asymptotic_mse(Model::A, FilterKind::Matched, p).value == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(asymptotic_mse(Model::B, FilterKind::Matched, p).value == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(asymptotic_mse(Model::B, FilterKind::Matched, ScenarioParams{0.2, 0.5, 1e9}).value ==
          doctest::Approx(1.3).epsilon(1e-8));

    CHECK_THROWS_AS(asymptotic_mse(Model::A, FilterKind::Lmmse, p), std::invalid_argument);

    const EigenSample pool = sample_eigenvalues(0.2, 60, 10, 5);
    const AsymptoticResult zf = asymptotic_mse(Model::A, FilterKind::ZeroForcing, p, &pool);
    REQUIRE(zf.finite());
    CHECK(zf.value == doctest::Approx(0.1 * pool.expect([](double v) { return 1.0 / v; })));
    const AsymptoticResult lm = asymptotic_mse(Model::A, FilterKind::Lmmse, p, &pool);
    CHECK(lm.value < zf.value);
    CHECK(lm.value > lower_bound_model_a(p));

    for (FilterKind kind : {FilterKind::Matched, FilterKind::ZeroForcing, FilterKind::Lmmse}) {
        CHECK(asymptotic_mse(Model::B, kind, p, &pool).value == doctest::Approx(asymptotic_mse(Model::A, kind, p, &pool).value).epsilon(1e-12));
    }

    const ScenarioParams pj{0.2, 0.01, 0.3};
    const AsymptoticResult jit = asymptotic_mse(Model::B, FilterKind::LmmseJitter, pj, &pool);
    CHECK(jit.status == AsymptoticStatus::BoundOnly);
    CHECK(jit.value == lower_bound_model_b(pj));
    CHECK(asymptotic_mse(Model::A, FilterKind::Interp, p).status == AsymptoticStatus::BoundOnly);
    CHECK(to_string(AsymptoticStatus::Divergent) == "divergent");
    CHECK(to_string(AsymptoticStatus::BoundOnly) == "bound_only");
}

TEST_CASE("ZF past the critical ratio") {
    const ScenarioParams low{0.2, 0.5, 0.0}, high{0.5, 0.5, 0.0};
    const EigenSample p_low = sample_eigenvalues(0.2, 100, 10, 6);
    const EigenSample p_high = sample_eigenvalues(0.5, 100, 10, 6);
    CHECK(asymptotic_mse(Model::A, FilterKind::ZeroForcing, low, &p_low).finite());
    CHECK(asymptotic_mse(Model::A, FilterKind::ZeroForcing, high, &p_high).status == AsymptoticStatus::Divergent);
    CHECK(asymptotic_mse(Model::B, FilterKind::ZeroForcing, ScenarioParams{0.5, 0.5, 0.2}, &p_high).status ==
          AsymptoticStatus::Divergent);
    // the raw sample estimate blows up too
    const double inv_low = p_low.expect([](double v) { return 1.0 / v; });
    const double inv_high = p_high.expect([](double v) { return 1.0 / v; });
    CHECK(0.5 * 0.5 * inv_high > 10.0 * 0.5 * 0.2 * inv_low);
}

TEST_CASE("pseudo-analytic jitter LMMSE") {
    const EigenSample plain = sample_jitter_eigenvalues(0.2, 0.0, 40, 6, 7);
    const ScenarioParams p{0.2, 0.05, 0.0};
    // without jitter it is the Model A LMMSE expression on the same spectra
    CHECK(pseudo_analytic_lmmse_jitter(p, plain) ==
          doctest::Approx(asymptotic_mse(Model::A, FilterKind::Lmmse, p, &plain).value).epsilon(1e-12));

    const EigenSample jit = sample_jitter_eigenvalues(0.2, 0.3, 40, 6, 7);
    const ScenarioParams pj{0.2, 0.05, 0.3};
    const double v = pseudo_analytic_lmmse_jitter(pj, jit);
    CHECK(v > p.alpha * p.beta / (1.0 + p.alpha * p.beta));
    CHECK(v < 1.0);
    CHECK(v >= lower_bound_model_b(pj));
}
