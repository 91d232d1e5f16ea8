#include "fieldrec/mse.hpp"

#include <algorithm>
#include <tuple>
#include <utility>
#include <cctype>
#include <optional>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fieldrec/asymptotic.hpp"
#include "fieldrec/parallel.hpp"

namespace fieldrec {

std::string_view to_string(Model model) { return model == Model::A ? "A" : "B"; }

Model parse_model(std::string_view name) {
    if (name == "A" || name == "a") return Model::A;
    if (name == "B" || name == "b") return Model::B;
    throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected A or B)");
}

namespace {

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

}  // namespace

PsiMatrix trace_mse_model_a(FilterKind kind, const FourierMatrix& g, double alpha, const SolveOptions& opts) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
    const Index n = g.harmonics();
    const double beta = g.beta();
    const CMatrix r = g.gram();
    PsiMatrix psi;
    psi.model = Model::A;
    psi.kind = kind;
    switch (kind) {
        case FilterKind::Matched: {
            const CMatrix d = beta * r - identity(n);
            psi.matrix = d * d + (alpha * beta * beta) * r;
            break;
        }
        case FilterKind::ZeroForcing:
            psi.matrix = alpha * inverse_hpd(r, opts);
            break;
        case FilterKind::Lmmse:
        case FilterKind::LmmseJitter: {
            CMatrix a = r;
            a.diagonal().array() += alpha;
            psi.matrix = alpha * inverse_hpd(a, opts);
            break;
        }
        case FilterKind::Interp:
            throw std::invalid_argument("interpolation has no closed-form Psi; use psi_model_a");
    }
    return psi;
}

PsiMatrix trace_mse_model_b(FilterKind kind, const FourierMatrix& g_hat, double alpha, const CharMatrix& c,
                            double gamma, const SolveOptions& opts) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
    const Index n = g_hat.harmonics();
    if (c.diagonal.size() != n) throw std::invalid_argument("C does not match G");
    const double beta = g_hat.beta();
    const CMatrix r = g_hat.gram();
    const auto cd = c.diagonal.cast<Complex>().asDiagonal();
    const auto c2 = c.diagonal.array().square().matrix().cast<Complex>().asDiagonal();
    const CMatrix eye = identity(n);

    PsiMatrix psi;
    psi.model = Model::B;
    psi.kind = kind;
    switch (kind) {
        case FilterKind::Matched: {
            const CMatrix cr = cd * r;
            psi.matrix = (beta * beta) * (r * (c2 * r)) + (gamma * beta * beta) * r -
                         (2.0 * beta) * hermitian_part(cr) + eye;
            break;
        }
        case FilterKind::ZeroForcing: {
            const RVector cm1 = c.diagonal.array() - 1.0;
            psi.matrix = gamma * inverse_hpd(r, opts);
            psi.matrix.diagonal() += cm1.array().square().matrix().cast<Complex>();
            break;
        }
        case FilterKind::Lmmse: {
            CMatrix a = r;
            a.diagonal().array() += alpha;
            // A^{-1} R is the filter-side product; A and R commute.
            const CMatrix a_inv_r = solve_hpd(a, r, opts);
            CMatrix inner = c2 * r;
            inner.diagonal().array() += gamma;
            const CMatrix a_inv = inverse_hpd(a, opts);
            const CMatrix cra = cd * (r * a_inv);
            psi.matrix = a_inv_r * inner * a_inv - 2.0 * hermitian_part(cra) + eye;
            break;
        }
        case FilterKind::LmmseJitter: {
            if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
            CMatrix k = cd * r * cd;
            k.diagonal().array() += gamma;
            psi.matrix = gamma * inverse_hpd(k, opts);
            break;
        }
        case FilterKind::Interp:
            throw std::invalid_argument("interpolation has no closed-form Psi; use psi_model_b");
    }
    return psi;
}

PsiMatrix psi_model_a(const Filter& filter, const FourierMatrix& g, double alpha) {
    if (filter.harmonics() != g.harmonics() || filter.sensors() != g.sensors()) {
        throw std::invalid_argument("filter and Fourier matrix dimensions differ");
    }
    const Index n = g.harmonics();
    const CMatrix bh_gh = filter.b_adjoint * g.entries().adjoint() - identity(n);
    PsiMatrix psi;
    psi.model = Model::A;
    psi.kind = filter.kind;
    psi.matrix = bh_gh * bh_gh.adjoint() + alpha * (filter.b_adjoint * filter.b_adjoint.adjoint());
    return psi;
}

PsiMatrix psi_model_b(const Filter& filter, const FourierMatrix& g_hat, const CharMatrix& c, double gamma) {
    if (filter.harmonics() != g_hat.harmonics() || filter.sensors() != g_hat.sensors()) {
        throw std::invalid_argument("filter and Fourier matrix dimensions differ");
    }
    const Index n = g_hat.harmonics();
    const auto cd = c.diagonal.cast<Complex>().asDiagonal();
    const CMatrix cg = cd * g_hat.entries();
    CMatrix expected_gram = cg.adjoint() * cg;
    expected_gram.diagonal().array() += gamma;
    const CMatrix& bh = filter.b_adjoint;
    const CMatrix cgb = cg * bh.adjoint();
    PsiMatrix psi;
    psi.model = Model::B;
    psi.kind = filter.kind;
    psi.matrix = bh * expected_gram * bh.adjoint() - 2.0 * hermitian_part(cgb) + identity(n);
    return psi;
}

namespace {

struct TrialOutcome {
    std::vector<double> errors;
    std::vector<double> traces;
};

Filter build_for(FilterKind kind, const FourierMatrix& known, const SensorLayout& layout, int m,
                 const ScenarioParams& params, const CharMatrix& c, double gamma, const SolveOptions& opts) {
    switch (kind) {
        case FilterKind::Matched: return build_mf(known, params);
        case FilterKind::ZeroForcing: return build_zf(known, opts);
        case FilterKind::Lmmse: return build_lmmse(known, params.alpha, opts);
        case FilterKind::LmmseJitter: return build_lmmse_jitter(known, params.alpha, c, gamma, opts);
        case FilterKind::Interp: return build_interp(layout.mean_positions, m);
    }
    throw std::logic_error("unreachable filter kind");
}

// Two passes: the spread can be many orders below the mean (fixed layouts).
std::pair<double, double> mean_and_stderr(const std::vector<double>& v) {
    const double k = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= k;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (k - 1.0) / k)};
}

double sum_or_nan(double value) { return std::isfinite(value) ? value : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

std::vector<MseReport> empirical_mse(const EmpiricalSetup& setup, std::span<const FilterKind> kinds) {
    setup.params.validate();
    if (setup.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (setup.m < 0) throw std::invalid_argument("harmonic half-count must be >= 0");
    if (kinds.empty()) throw std::invalid_argument("no filters requested");

    const int m = setup.m;
    const Index n = harmonic_count(m);
    const int r = sensors_for(m, setup.params.beta);
    ScenarioParams params = setup.params;
    params.beta = effective_beta(m, r);
    const double sigma_a2 = setup.spectrum_variance;
    const double sigma_n2 = params.alpha * sigma_a2;
    const bool jittered = setup.model == Model::B;
    const double sigma_delta = jittered ? params.omega / static_cast<double>(r) : 0.0;
    const CharMatrix c = char_matrix(m, sigma_delta);
    const double gamma = gamma_param(m, params.alpha, c);

    std::optional<SensorLayout> shared_layout;
    if (setup.layout == LayoutMode::Regular) {
        shared_layout = regular_layout(r);
    } else if (setup.layout == LayoutMode::Fixed) {
        RandomStream layout_rng = derive_stream(setup.seed, 0, 0x1a7u);
        shared_layout = draw_layout(r, layout_rng);
    }

    const std::size_t nk = kinds.size();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(setup.trials));

    parallel_for(outcomes.size(), setup.threads, [&](std::size_t t) {
        RandomStream rng = derive_stream(setup.seed, t);
        const SensorLayout base = shared_layout ? *shared_layout : draw_layout(r, rng);
        const SensorLayout layout = jittered ? apply_jitter(base, sigma_delta, rng) : base;
        const FieldSpectrum a = draw_spectrum(m, sigma_a2, rng);
        const FourierMatrix g_actual = fourier_matrix(layout.actual_positions, m);
        const MeasurementSet p = measure(sample_field(a, g_actual), sigma_n2, rng);
        const FourierMatrix g_known = jittered ? fourier_matrix(layout.mean_positions, m) : g_actual;

        TrialOutcome& out = outcomes[t];
        out.errors.assign(nk, std::numeric_limits<double>::quiet_NaN());
        out.traces.assign(nk, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 0; i < nk; ++i) {
            const FilterKind kind = kinds[i];
            try {
                const Filter f = build_for(kind, g_known, layout, m, params, c, gamma, setup.solve);
                const CVector a_hat = estimate(f, p);
                const double err = (a_hat - a.coefficients).squaredNorm() / (static_cast<double>(n) * sigma_a2);
                double trace;
                if (kind == FilterKind::Interp) {
                    trace = jittered ? psi_model_b(f, g_known, c, gamma).normalized_mse()
                                     : psi_model_a(f, g_known, params.alpha).normalized_mse();
                } else {
                    trace = jittered ? trace_mse_model_b(kind, g_known, params.alpha, c, gamma, setup.solve)
                                           .normalized_mse()
                                     : trace_mse_model_a(kind, g_known, params.alpha, setup.solve).normalized_mse();
                }
                out.errors[i] = sum_or_nan(err);
                out.traces[i] = sum_or_nan(trace);
            } catch (const IllConditionedError&) {
                // counted as a reconstruction failure below
            }
        }
    });

    std::vector<MseReport> reports(nk);
    for (std::size_t i = 0; i < nk; ++i) {
        MseReport& rep = reports[i];
        rep.model = setup.model;
        rep.kind = kinds[i];
        rep.params = params;
        rep.m = m;
        rep.sensors = r;
        rep.trials = setup.trials;
        rep.seed = setup.seed;
        rep.lower_bound = lower_bound(setup.model, params);
        rep.trial_errors.reserve(outcomes.size());
        rep.trial_traces.reserve(outcomes.size());

        std::vector<double> errs, traces;
        for (const TrialOutcome& out : outcomes) {
            const double e = out.errors[i];
            const double tr = out.traces[i];
            rep.trial_errors.push_back(e);
            rep.trial_traces.push_back(tr);
            if (std::isnan(e) || std::isnan(tr)) {
                ++rep.failures;
                continue;
            }
            errs.push_back(e);
            traces.push_back(tr);
        }
        if (errs.empty()) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rep.mse_empirical = rep.std_error = rep.mse_trace = rep.trace_std_error = nan;
            continue;
        }
        std::tie(rep.mse_empirical, rep.std_error) = mean_and_stderr(errs);
        std::tie(rep.mse_trace, rep.trace_std_error) = mean_and_stderr(traces);
    }
    return reports;
}

MseReport empirical_mse(const EmpiricalSetup& setup, FilterKind kind) {
    const FilterKind kinds[] = {kind};
    return empirical_mse(setup, kinds).front();
}

}  // namespace fieldrec
