#include <doctest.h>

#include <cmath>

#include "fieldrec/design.hpp"

using namespace fieldrec;

TEST_CASE("sensor count for the matched filter has an exact answer") {
    // MSE = beta (1 + alpha) = 0.3 at beta = 0.2, so r = 21 / 0.2 = 105
    DesignQuery q;
    q.kind = FilterKind::Matched;
    q.m = 10;
    q.alpha = 0.5;
    q.target_mse = 0.3;
    const DesignAnswer a = design_query(q);
    CHECK(a.unknown == DesignUnknown::Sensors);
    REQUIRE(a.r);
    CHECK(std::abs(*a.r - 105) <= 1);
    CHECK(a.mse <= 0.3);
    CHECK(a.params.beta == doctest::Approx(0.2).epsilon(0.003));
    REQUIRE(a.curve.size() == 5);
    for (std::size_t i = 1; i < a.curve.size(); ++i) CHECK(a.curve[i].mse > a.curve[i - 1].mse);
}

TEST_CASE("harmonic count for the matched filter has an exact answer") {
    DesignQuery q;
    q.kind = FilterKind::Matched;
    q.r = 1000;
    q.alpha = 0.5;
    q.target_mse = 0.3;
    const DesignAnswer a = design_query(q);
    CHECK(a.unknown == DesignUnknown::Harmonics);
    REQUIRE(a.m);
    CHECK(std::abs(*a.m - 99) <= 1);
}

TEST_CASE("SNR_m for the matched filter") {
    // beta (1 + alpha) = 0.25 at beta = 0.2 needs alpha = 0.25, i.e. 6.02 dB
    DesignQuery q;
    q.kind = FilterKind::Matched;
    q.beta = 0.2;
    q.target_mse = 0.25;
    const DesignAnswer a = design_query(q);
    CHECK(a.unknown == DesignUnknown::SnrM);
    CHECK(a.snr_m_db == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-3));
    REQUIRE(a.floor);
    CHECK(*a.floor == doctest::Approx(0.2));

    // no target: land within the floor tolerance of the floor
    q.target_mse.reset();
    q.floor_tolerance = 0.1;
    const DesignAnswer f = design_query(q);
    CHECK(f.mse == doctest::Approx(0.22).epsilon(1e-3));
    CHECK(f.snr_m_db == doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("LMMSE sizing with a small pool meets the target and is monotone") {
    DesignQuery q;
    q.kind = FilterKind::Lmmse;
    q.m = 20;
    q.alpha = 0.01;
    q.target_mse = 5e-3;
    q.eigen_m = 40;
    q.eigen_realizations = 10;
    const DesignAnswer a = design_query(q);
    CHECK(a.mse <= 5e-3);
    CHECK(a.curve.back().mse > 5e-3);
    CHECK(a.curve.front().mse < a.curve.back().mse);
}

TEST_CASE("design errors") {
    DesignQuery q;
    q.kind = FilterKind::Matched;
    q.m = 10;
    q.alpha = 0.5;
    q.target_mse = 0.001;  // needs beta below the search range
    CHECK_THROWS_AS(design_query(q), InfeasibleTarget);

    q.target_mse = 0.3;
    q.r = 100;  // both M and r known and alpha known: nothing to solve
    CHECK_THROWS_AS(design_query(q), std::invalid_argument);

    DesignQuery interp;
    interp.kind = FilterKind::Interp;
    interp.m = 10;
    interp.alpha = 0.1;
    interp.target_mse = 0.1;
    CHECK_THROWS_AS(design_query(interp), std::invalid_argument);

    DesignQuery floor_too_low;
    floor_too_low.kind = FilterKind::Matched;
    floor_too_low.beta = 0.2;
    floor_too_low.target_mse = 0.1;  // the floor is 0.2
    CHECK_THROWS_AS(design_query(floor_too_low), InfeasibleTarget);

    DesignQuery jitter_a;
    jitter_a.model = Model::A;
    jitter_a.m = 10;
    jitter_a.alpha = 0.1;
    jitter_a.omega = 0.3;
    jitter_a.target_mse = 0.1;
    CHECK_THROWS_AS(design_query(jitter_a), std::invalid_argument);

    DesignQuery sigma_without_r;
    sigma_without_r.model = Model::B;
    sigma_without_r.kind = FilterKind::Matched;
    sigma_without_r.m = 10;
    sigma_without_r.alpha = 0.1;
    sigma_without_r.sigma_delta2 = 1e-7;
    sigma_without_r.target_mse = 0.5;
    CHECK_THROWS_AS(design_query(sigma_without_r), std::invalid_argument);
}

TEST_CASE("jitter-aware LMMSE floor under Model B") {
    DesignQuery q;
    q.model = Model::B;
    q.kind = FilterKind::LmmseJitter;
    q.beta = 0.4;
    q.omega = ScenarioParams::omega_from_snr_db(10.0);
    q.eigen_m = 50;
    q.eigen_realizations = 10;
    const DesignAnswer a = design_query(q);
    REQUIRE(a.floor);
    CHECK(*a.floor > lower_bound_model_b(ScenarioParams{0.4, 0.0, *q.omega}));
    CHECK(a.mse == doctest::Approx(1.05 * *a.floor).epsilon(1e-3));
}
