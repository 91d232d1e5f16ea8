#include "fieldrec/asymptotic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fieldrec {

double nu(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("nu: argument must be >= 0");
    if (std::isinf(x)) return 0.0;
    const double y = std::numbers::pi * x;
    // erf(y)/y = (2/sqrt(pi)) (1 - y^2/3 + y^4/10 - ...); the series avoids 0/0.
    if (y < 1e-4) {
        const double y2 = y * y;
        return 1.0 - y2 / 3.0 + y2 * y2 / 10.0;
    }
    return 0.5 * std::sqrt(std::numbers::pi) * std::erf(y) / y;
}

std::string_view to_string(AsymptoticStatus status) {
    switch (status) {
        case AsymptoticStatus::Value: return "value";
        case AsymptoticStatus::Divergent: return "divergent";
        case AsymptoticStatus::BoundOnly: return "bound_only";
        case AsymptoticStatus::Unavailable: return "unavailable";
    }
    return "?";
}

double lower_bound_model_a(const ScenarioParams& params) {
    params.validate();
    const double ab = params.alpha * params.beta;
    return ab / (1.0 + ab);
}

double lower_bound_model_b(const ScenarioParams& params) {
    params.validate();
    const double b = params.beta;
    const double a = params.alpha;
    const double v = nu(b * params.omega);
    return b * (1.0 + a - v) / (b * (1.0 + a) + v * (1.0 - b));
}

double lower_bound(Model model, const ScenarioParams& params) {
    return model == Model::A ? lower_bound_model_a(params) : lower_bound_model_b(params);
}

bool inverse_moment_stable(const EigenSample& eigen) {
    const auto inv = [](double l) { return 1.0 / l; };
    const double full = eigen.expect(inv);
    if (!std::isfinite(full)) return false;
    if (eigen.realizations < 2) return true;
    const double half = eigen.expect(inv, eigen.realizations / 2);
    if (!std::isfinite(half)) return false;
    return std::abs(full - half) <= 0.2 * std::abs(half);
}

namespace {

const EigenSample& need(const EigenSample* eigen, FilterKind kind) {
    if (eigen == nullptr) {
        throw std::invalid_argument(std::string("asymptotic ") + std::string(to_string(kind)) +
                                    " needs an eigenvalue sample");
    }
    if (eigen->omega != 0.0) throw std::invalid_argument("asymptotic formulas need an unjittered eigenvalue pool");
    return *eigen;
}

AsymptoticResult value(double v) { return {AsymptoticStatus::Value, v}; }

AsymptoticResult inverse_moment_formula(const ScenarioParams& params, const EigenSample& eigen,
                                        double scale, double offset) {
    if (params.beta >= kZeroForcingCriticalBeta || !inverse_moment_stable(eigen)) {
        return {AsymptoticStatus::Divergent, std::numeric_limits<double>::infinity()};
    }
    const double inv = eigen.expect([](double l) { return 1.0 / l; });
    return value(scale * inv + offset);
}

}  // namespace

AsymptoticResult asymptotic_mse(Model model, FilterKind kind, const ScenarioParams& params,
                                const EigenSample* eigen) {
    params.validate();
    const double b = params.beta;
    const double a = params.alpha;
    const double ab = a * b;

    if (kind == FilterKind::Interp) {
        return {AsymptoticStatus::BoundOnly, lower_bound(model, params)};
    }

    if (model == Model::A) {
        switch (kind) {
            case FilterKind::Matched:
                return value(b * (a + 1.0));
            case FilterKind::ZeroForcing:
                return inverse_moment_formula(params, need(eigen, kind), ab, 0.0);
            case FilterKind::Lmmse:
            case FilterKind::LmmseJitter: {
                const EigenSample& e = need(eigen, kind);
                return value(e.expect([ab](double l) { return ab / (l + ab); }));
            }
            case FilterKind::Interp: break;
        }
        return {};
    }

    const double v1 = nu(b * params.omega);
    const double v2 = nu(b * params.omega / std::numbers::sqrt2);
    switch (kind) {
        case FilterKind::Matched:
            return value(b * (1.0 + a) + v1 - 2.0 * v2 + 1.0);
        case FilterKind::ZeroForcing:
            return inverse_moment_formula(params, need(eigen, kind), b * (1.0 + a - v1), 1.0 + v1 - 2.0 * v2);
        case FilterKind::Lmmse: {
            const EigenSample& e = need(eigen, kind);
            const double m2 = e.expect([ab](double l) { return l * l / ((l + ab) * (l + ab)); });
            const double m1 = e.expect([ab](double l) { return l / ((l + ab) * (l + ab)); });
            return value(1.0 + (v1 - 2.0 * v2) * m2 + b * (1.0 + a - v1 - 2.0 * a * v2) * m1);
        }
        case FilterKind::LmmseJitter:
            return {AsymptoticStatus::BoundOnly, lower_bound_model_b(params)};
        case FilterKind::Interp: break;
    }
    return {};
}

double pseudo_analytic_lmmse_jitter(const ScenarioParams& params, const EigenSample& jitter_pool) {
    params.validate();
    const int m = jitter_pool.m_used;
    const double sigma_delta = jitter_pool.omega / static_cast<double>(jitter_pool.sensors);
    const CharMatrix c = char_matrix(m, sigma_delta);
    const double gamma = gamma_param(m, params.alpha, c);
    if (!(gamma > 0.0)) {
        // alpha = 0 with no jitter: the error vanishes wherever C R C is nonsingular.
        return 0.0;
    }
    const double bg = jitter_pool.effective_beta * gamma;
    return jitter_pool.expect([bg](double mu) { return bg / (mu + bg); });
}

}  // namespace fieldrec
