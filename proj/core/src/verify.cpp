#include "fieldrec/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "fieldrec/asymptotic.hpp"
#include "fieldrec/mse.hpp"
#include "fieldrec/theory.hpp"

namespace fieldrec {

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

int VerifyReport::failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

namespace {

CheckResult absolute_check(std::string name, double measured, double expected, double tolerance) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = expected;
    c.tolerance = tolerance;
    c.passed = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
    return c;
}

CheckResult relative_check(std::string name, double measured, double expected, double rel) {
    CheckResult c = absolute_check(std::move(name), measured, expected, rel * std::abs(expected));
    c.detail = "relative tolerance";
    return c;
}

// Largest |mean - expected| / (3 se) over all entries; <= 1 means every entry passes.
// Entries that are deterministic (se == 0) must match to round-off.
double worst_se_ratio(const CMatrix& mean, const RMatrix& se, const CMatrix& expected, int& outside) {
    double worst = 0.0;
    outside = 0;
    for (Index i = 0; i < mean.rows(); ++i) {
        for (Index j = 0; j < mean.cols(); ++j) {
            const double residual = std::abs(mean(i, j) - expected(i, j));
            const double allowed = 3.0 * se(i, j) + 1e-12;
            worst = std::max(worst, residual / allowed);
            if (residual > allowed) ++outside;
        }
    }
    return worst;
}

void jitter_series_checks(const VerifyOptions& opt, VerifyReport& report) {
    const int m = 10, r = 20;
    RandomStream rng = derive_stream(opt.seed, 0, 0x1e1);
    const SensorLayout layout = draw_layout(r, rng);
    const SensorLayout jittered = apply_jitter(layout, 1e-3, rng);
    RVector delta(r);
    for (Index q = 0; q < r; ++q) {
        double d = jittered.actual_positions[q] - layout.mean_positions[q];
        delta[q] = d - std::round(d);
    }
    const FourierMatrix g_hat = fourier_matrix(layout.mean_positions, m);
    const FourierMatrix direct = fourier_matrix(jittered.actual_positions, m);
    const double err = (jitter_series_truncated(g_hat, delta, 50) - direct.entries()).cwiseAbs().maxCoeff();
    report.checks.push_back(absolute_check("jitter series order 50 vs direct (M=10, r=20, sigma=1e-3)", err, 0.0, 1e-10));

    const double zero = (jitter_series_truncated(g_hat, RVector::Zero(r), 50) - g_hat.entries()).cwiseAbs().maxCoeff();
    report.checks.push_back(absolute_check("jitter series with zero displacement", zero, 0.0, 0.0));
}

void expectation_checks(const VerifyOptions& opt, VerifyReport& report) {
    const int m = 5, r = 10;
    const double sigma = 0.02;
    const int draws = opt.level == VerifyLevel::Full ? 100000 : 20000;
    RandomStream rng = derive_stream(opt.seed, 1, 0x1e1);
    const SensorLayout layout = draw_layout(r, rng);
    const FourierMatrix g_hat = fourier_matrix(layout.mean_positions, m);
    const CharMatrix c = char_matrix(m, sigma);
    const FourierMoments mom = sample_fourier_moments(layout.mean_positions, m, sigma, draws, derive_seed(opt.seed, 2, 0x1e1));

    int outside = 0;
    std::ostringstream d1;
    double ratio = worst_se_ratio(mom.mean_fourier, mom.se_fourier, expected_fourier(g_hat, c), outside);
    d1 << outside << " of " << mom.mean_fourier.size() << " entries outside 3 SE, draws " << draws;
    CheckResult a = absolute_check("E[G_x] = C G_xhat", ratio, 0.0, 1.0);
    a.detail = d1.str();
    report.checks.push_back(a);

    std::ostringstream d2;
    ratio = worst_se_ratio(mom.mean_gram, mom.se_gram, expected_gram(g_hat, c), outside);
    d2 << outside << " of " << mom.mean_gram.size() << " entries outside 3 SE, draws " << draws;
    CheckResult b = absolute_check("E[G_x^H G_x] = G^H C^2 G + (1 - Tr C^2/n) I", ratio, 0.0, 1.0);
    b.detail = d2.str();
    report.checks.push_back(b);
}

void eigen_checks(const VerifyOptions& opt, VerifyReport& report) {
    const bool full = opt.level == VerifyLevel::Full;
    const int m = full ? 200 : 50;
    const int realizations = full ? 50 : 10;
    const std::array<double, 3> betas = {0.1, 0.2, 0.5};

    double worst_mean = 0.0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const EigenSample pool = sample_eigenvalues(betas[i], m, realizations, derive_seed(opt.seed, 10 + i, 0xe1), opt.threads);
        for (double mean : pool.realization_means) worst_mean = std::max(worst_mean, std::abs(mean - 1.0));
        const double second = pool.expect([](double v) { return v * v; });
        std::ostringstream name;
        name << "E[lambda^2] = 1 + beta at beta=" << betas[i] << ", M=" << m;
        report.checks.push_back(relative_check(name.str(), second, 1.0 + betas[i], 0.02));
    }
    report.checks.push_back(absolute_check("per-realization mean eigenvalue = 1", worst_mean, 0.0, 1e-10));

    const double beta = 0.2, alpha = 0.5;
    const std::uint64_t seed = derive_seed(opt.seed, 20, 0xe1);
    const PhiCheck id = phi_functional_check(identity_function(), beta, m, realizations, seed, opt.threads);
    report.checks.push_back(absolute_check("phi(X) trace side", id.matrix_side, 1.0, 1e-10));
    report.checks.push_back(absolute_check("phi(X) eigenvalue side", id.eigen_side, 1.0, 1e-10));

    const PhiCheck sq = phi_functional_check(square_function(), beta, m, realizations, seed, opt.threads);
    report.checks.push_back(relative_check("phi(X^2) trace side vs 1 + beta", sq.matrix_side, 1.0 + beta, 0.02));
    report.checks.push_back(relative_check("phi(X^2) both sides", sq.eigen_side, sq.matrix_side, 1e-8));

    const PhiCheck kern = phi_functional_check(lmmse_kernel(alpha * beta), beta, m, realizations, seed, opt.threads);
    report.checks.push_back(relative_check("phi(ab/(X+ab)) both sides", kern.eigen_side, kern.matrix_side, 0.01));

    const PhiCheck cubic = phi_functional_check(cubic_polynomial(0.5, -1.0, 2.0, 0.25), beta, m, realizations, seed, opt.threads);
    report.checks.push_back(relative_check("phi(cubic) both sides", cubic.eigen_side, cubic.matrix_side, 1e-8));

    const PhiCheck inv = phi_functional_check(inverse_function(), beta, m, realizations, seed, opt.threads);
    report.checks.push_back(relative_check("phi(1/X) both sides", inv.eigen_side, inv.matrix_side, 1e-6));
}

void reduction_checks(const VerifyOptions& opt, VerifyReport& report) {
    const int m = 10;
    const double alpha = 0.5;
    RandomStream rng = derive_stream(opt.seed, 30, 0x1ed);
    const FourierMatrix g = fourier_matrix(draw_layout(harmonic_count(m) * 5, rng).mean_positions, m);
    const CharMatrix c = char_matrix(m, 0.0);
    const double gamma = opt.gamma(m, alpha, c);

    for (FilterKind kind : {FilterKind::Matched, FilterKind::ZeroForcing, FilterKind::Lmmse, FilterKind::LmmseJitter}) {
        const PsiMatrix a = trace_mse_model_a(kind, g, alpha);
        const PsiMatrix b = trace_mse_model_b(kind, g, alpha, c, gamma);
        const double diff = (a.matrix - b.matrix).cwiseAbs().maxCoeff();
        report.checks.push_back(absolute_check("finite Psi model B at sigma=0 equals model A, " + std::string(to_string(kind)),
                                               diff, 0.0, 1e-10));
    }

    const EigenSample pool = sample_eigenvalues(0.2, 50, 5, derive_seed(opt.seed, 31, 0x1ed), opt.threads);
    ScenarioParams p{0.2, alpha, 0.0};
    for (FilterKind kind : {FilterKind::Matched, FilterKind::ZeroForcing, FilterKind::Lmmse}) {
        const AsymptoticResult a = asymptotic_mse(Model::A, kind, p, &pool);
        const AsymptoticResult b = asymptotic_mse(Model::B, kind, p, &pool);
        report.checks.push_back(absolute_check("asymptotic model B at omega=0 equals model A, " + std::string(to_string(kind)),
                                               b.value, a.value, 1e-12));
    }
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
    VerifyReport report;
    jitter_series_checks(options, report);
    expectation_checks(options, report);
    eigen_checks(options, report);
    reduction_checks(options, report);
    return report;
}

}  // namespace fieldrec
