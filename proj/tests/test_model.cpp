#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fieldrec/model.hpp"

using namespace fieldrec;


TEST_CASE("draw_spectrum: length and per-coefficient variance") {
    RandomStream rng(11);
    CHECK(draw_spectrum(10, 1.0, rng).size() == 21);

    // |a|^2 for a circular complex Gaussian of variance v is exponential: mean v, std v.
    const int n = 100000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(draw_spectrum(0, 1.0, rng).coefficients[0]);
    CHECK(std::abs(s / n - 1.0) < 3.0 * 1.0 / std::sqrt(n));

    const int draws = 10000;
    double s4 = 0.0;
    int count = 0;
    for (int i = 0; i < draws; ++i) {
        const FieldSpectrum a = draw_spectrum(40, 4.0, rng);
        for (Index k = 0; k < a.size(); ++k) s4 += std::norm(a.coefficients[k]);
        count += static_cast<int>(a.size());
    }
    CHECK(std::abs(s4 / count - 4.0) < 3.0 * 4.0 / std::sqrt(count));

    CHECK_THROWS_AS(draw_spectrum(3, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(draw_spectrum(-1, 1.0, rng), std::invalid_argument);
}

TEST_CASE("draw_spectrum: real and imaginary parts carry half the variance each") {
    RandomStream rng(12);
    double re2 = 0.0, im2 = 0.0, mean_re = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const Complex a = draw_spectrum(0, 2.0, rng).coefficients[0];
        re2 += a.real() * a.real();
        im2 += a.imag() * a.imag();
        mean_re += a.real();
    }
    CHECK(re2 / n == doctest::Approx(1.0).epsilon(0.03));
    CHECK(im2 / n == doctest::Approx(1.0).epsilon(0.03));
    CHECK(std::abs(mean_re / n) < 3.0 / std::sqrt(n));
}

TEST_CASE("draw_layout: range, uniform mean, single sensor") {
    RandomStream rng(13);
    const SensorLayout five = draw_layout(5, rng);
    REQUIRE(five.size() == 5);
    for (Index q = 0; q < 5; ++q) {
        CHECK(five.mean_positions[q] >= 0.0);
        CHECK(five.mean_positions[q] < 1.0);
        CHECK(five.actual_positions[q] == five.mean_positions[q]);
    }
    CHECK(five.displacement_std == 0.0);

    const SensorLayout big = draw_layout(10000, rng);
    CHECK(std::abs(big.mean_positions.mean() - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / 10000.0));

    CHECK(draw_layout(1, rng).size() == 1);
    CHECK_THROWS_AS(draw_layout(0, rng), std::invalid_argument);
}

TEST_CASE("regular_layout") {
    const SensorLayout four = regular_layout(4);
    CHECK(four.mean_positions[0] == 0.0);
    CHECK(four.mean_positions[1] == 0.25);
    CHECK(four.mean_positions[2] == 0.5);
    CHECK(four.mean_positions[3] == 0.75);
    CHECK(regular_layout(1).mean_positions[0] == 0.0);
    CHECK_THROWS_AS(regular_layout(0), std::invalid_argument);

    const int m = 10;
    const FourierMatrix g = fourier_matrix(regular_layout(2 * m + 1).mean_positions, m);
    const CMatrix unit = g.beta() * g.gram();
    CHECK((unit - CMatrix::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("regular layouts denser than Nyquist are tight frames") {
    for (int r : {11, 17, 40}) {
        const int m = 5;
        const FourierMatrix g = fourier_matrix(regular_layout(r).mean_positions, m);
        CHECK((g.beta() * g.gram() - CMatrix::Identity(11, 11)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("apply_jitter") {
    RandomStream rng(14);
    const SensorLayout base = draw_layout(50, rng);
    RandomStream a(1), b(1);
    const SensorLayout still = apply_jitter(base, 0.0, a);
    CHECK(still.actual_positions == base.mean_positions);
    // no draws were consumed
    CHECK(a.uniform() == b.uniform());

    SensorLayout edge;
    edge.mean_positions = RVector::Constant(1, 0.99);
    edge.actual_positions = edge.mean_positions;
    CHECK(wrap_unit(0.99 + 0.02) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(1.0) == 0.0);

    const SensorLayout many = draw_layout(1000, rng);
    const SensorLayout moved = apply_jitter(many, 1e-3, rng);
    CHECK(moved.displacement_std == 1e-3);
    CHECK(moved.mean_positions == many.mean_positions);
    double s2 = 0.0;
    for (Index q = 0; q < 1000; ++q) {
        CHECK(moved.actual_positions[q] >= 0.0);
        CHECK(moved.actual_positions[q] < 1.0);
        double d = moved.actual_positions[q] - many.mean_positions[q];
        d -= std::round(d);
        s2 += d * d;
    }
    const double sd = std::sqrt(s2 / 1000.0);
    // standard error of a sample std is about sigma / sqrt(2n)
    CHECK(std::abs(sd - 1e-3) < 3.0 * 1e-3 / std::sqrt(2000.0));
    CHECK_THROWS_AS(apply_jitter(many, -1.0, rng), std::invalid_argument);
}

TEST_CASE("fourier_matrix entries") {
    RVector x0(1);
    x0 << 0.0;
    const FourierMatrix g0 = fourier_matrix(x0, 1);
    for (Index k = 0; k < 3; ++k) CHECK(std::abs(g0.entries()(k, 0) - 1.0 / std::sqrt(3.0)) < 1e-15);

    RVector xq(1);
    xq << 0.25;
    const FourierMatrix g = fourier_matrix(xq, 1);
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(g.entries()(0, 0) - Complex(0.0, s)) < 1e-15);   // k = -1
    CHECK(std::abs(g.entries()(1, 0) - Complex(s, 0.0)) < 1e-15);   // k = 0
    CHECK(std::abs(g.entries()(2, 0) - Complex(0.0, -s)) < 1e-15);  // k = 1

    RVector bad(2);
    bad << 0.5, 1.0;
    CHECK_THROWS_AS(fourier_matrix(bad, 2), std::invalid_argument);
    bad << -0.1, 0.5;
    CHECK_THROWS_AS(fourier_matrix(bad, 2), std::invalid_argument);
}

TEST_CASE("fourier_matrix invariants on random layouts") {
    RandomStream rng(15);
    for (int trial = 0; trial < 5; ++trial) {
        const int m = 3 + 7 * trial;
        const int r = 5 + 13 * trial;
        const FourierMatrix g = fourier_matrix(draw_layout(r, rng).mean_positions, m);
        const double expected = 1.0 / std::sqrt(2.0 * m + 1.0);
        CHECK((g.entries().cwiseAbs().array() - expected).abs().maxCoeff() < 1e-14);
        const CMatrix gram = g.gram();
        CHECK(std::abs(gram.trace() - Complex(r, 0.0)) < 1e-10);
        CHECK(std::abs((g.beta() * gram).trace().real() - (2.0 * m + 1.0)) < 1e-10);
    }
}

TEST_CASE("Toeplitz Gram equals the direct product") {
    RandomStream rng(16);
    for (int m : {0, 1, 7, 30}) {
        const RVector x = draw_layout(3 * m + 4, rng).mean_positions;
        const CMatrix direct = fourier_matrix(x, m).gram();
        CHECK((gram_from_positions(x, m) - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("sample_field") {
    RandomStream rng(17);
    const int m = 3;
    const RVector x = draw_layout(5, rng).mean_positions;
    const FourierMatrix g = fourier_matrix(x, m);

    FieldSpectrum dc;
    dc.m = m;
    dc.coefficients = CVector::Zero(7);
    dc.coefficients[m] = std::sqrt(7.0);
    const CVector ones = sample_field(dc, g);
    CHECK((ones - CVector::Ones(5)).cwiseAbs().maxCoeff() < 1e-12);

    FieldSpectrum zero = dc;
    zero.coefficients.setZero();
    CHECK(sample_field(zero, g).cwiseAbs().maxCoeff() == 0.0);

    // scalar series oracle: s_q = sum_k a_k exp(+j 2 pi k x_q) / sqrt(2M+1)
    const FieldSpectrum a = draw_spectrum(m, 1.0, rng);
    const CVector s = sample_field(a, g);
    for (Index q = 0; q < 5; ++q) {
        Complex acc{0.0, 0.0};
        for (int k = -m; k <= m; ++k) {
            const double phase = 2.0 * std::numbers::pi * k * x[q];
            acc += a.coefficients[k + m] * Complex(std::cos(phase), std::sin(phase));
        }
        acc /= std::sqrt(7.0);
        CHECK(std::abs(s[q] - acc) < 1e-12);
    }

    const FieldSpectrum wrong = draw_spectrum(4, 1.0, rng);
    CHECK_THROWS_AS(sample_field(wrong, g), std::invalid_argument);
}

TEST_CASE("measure") {
    RandomStream rng(18);
    const CVector s = CVector::Constant(4, Complex(1.0, -2.0));
    CHECK(measure(s, 0.0, rng).values == s);
    CHECK_THROWS_AS(measure(s, -1.0, rng), std::invalid_argument);

    const int n = 10000;
    const MeasurementSet p = measure(CVector::Zero(n), 1.0, rng);
    CHECK(p.size() == n);
    const double var = p.values.squaredNorm() / n;
    CHECK(std::abs(var - 1.0) < 3.0 / std::sqrt(n));

    // E[p] = s
    const int reps = 20000;
    CVector acc = CVector::Zero(4);
    for (int i = 0; i < reps; ++i) acc += measure(s, 1.0, rng).values;
    acc /= reps;
    const double se = std::sqrt(1.0 / reps);
    for (Index q = 0; q < 4; ++q) CHECK(std::abs(acc[q] - s[q]) < 3.0 * se);
}

TEST_CASE("scenario parameters") {
    ScenarioParams p{0.2, 0.5, 0.0};
    CHECK_NOTHROW(p.validate());
    CHECK(p.snr_m_db() == doctest::Approx(3.0103).epsilon(1e-4));
    CHECK(std::isinf(p.snr_x_db()));
    CHECK(ScenarioParams::alpha_from_snr_db(30.0) == doctest::Approx(1e-3));
    CHECK(ScenarioParams::omega_from_snr_db(10.0) == doctest::Approx(std::sqrt(0.1)));
    CHECK(ScenarioParams::alpha_from_snr_db(INFINITY) == 0.0);

    CHECK_THROWS_AS((ScenarioParams{0.0, 0.1, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ScenarioParams{0.2, -0.1, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ScenarioParams{0.2, 0.1, NAN}.validate()), std::invalid_argument);

    // Example-1 sizing: r = round((2M+1)/beta)
    CHECK(sensors_for(100, 0.4) == 503);
    CHECK(sensors_for(10, 0.2) == 105);
    CHECK(effective_beta(10, 105) == doctest::Approx(0.2));
}

TEST_CASE("random streams are reproducible and independent per index") {
    RandomStream a = derive_stream(99, 3), b = derive_stream(99, 3), c = derive_stream(99, 4);
    const double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va != c.uniform());
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}
