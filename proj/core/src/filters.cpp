#include "fieldrec/filters.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldrec {

std::string_view to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::Matched: return "MF";
        case FilterKind::ZeroForcing: return "ZF";
        case FilterKind::Lmmse: return "LMMSE";
        case FilterKind::LmmseJitter: return "LMMSE_JITTER";
        case FilterKind::Interp: return "INTERP";
    }
    return "?";
}

FilterKind parse_filter_kind(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    std::replace(upper.begin(), upper.end(), '-', '_');
    if (upper == "MF") return FilterKind::Matched;
    if (upper == "ZF") return FilterKind::ZeroForcing;
    if (upper == "LMMSE") return FilterKind::Lmmse;
    if (upper == "LMMSE_JITTER") return FilterKind::LmmseJitter;
    if (upper == "INTERP") return FilterKind::Interp;
    throw std::invalid_argument("unknown filter kind '" + std::string(name) + "'");
}

double CharMatrix::trace_power(int p) const {
    double sum = 0.0;
    for (Index k = 0; k < diagonal.size(); ++k) sum += std::pow(diagonal[k], p);
    return sum;
}

CMatrix CharMatrix::as_matrix() const {
    CMatrix c = diagonal.cast<Complex>().asDiagonal();
    return c;
}

CharMatrix char_matrix(int m, double sigma_delta) {
    if (m < 0) throw std::invalid_argument("harmonic half-count must be >= 0");
    if (!(sigma_delta >= 0.0) || !std::isfinite(sigma_delta)) {
        throw std::invalid_argument("displacement std must be finite and >= 0");
    }
    CharMatrix c;
    c.sigma_delta = sigma_delta;
    c.diagonal.resize(harmonic_count(m));
    const double s2 = sigma_delta * sigma_delta;
    for (int k = -m; k <= m; ++k) {
        const double kk = static_cast<double>(k) * k;
        c.diagonal[k + m] = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * kk * s2);
    }
    return c;
}

double gamma_param(int m, double alpha, const CharMatrix& c) {
    if (c.diagonal.size() != harmonic_count(m)) {
        throw std::invalid_argument("gamma_param: C does not match M");
    }
    return 1.0 + alpha - c.trace_power(2) / static_cast<double>(harmonic_count(m));
}

Filter build_mf(const FourierMatrix& g, const ScenarioParams& params) {
    Filter f;
    f.kind = FilterKind::Matched;
    f.params = params;
    f.b_adjoint = params.beta * g.entries();
    return f;
}

Filter build_zf(const FourierMatrix& g, const SolveOptions& opts) {
    Filter f;
    f.kind = FilterKind::ZeroForcing;
    f.params.beta = g.beta();
    f.b_adjoint = solve_hpd(g.gram(), g.entries(), opts);
    return f;
}

Filter build_lmmse(const FourierMatrix& g, double alpha, const SolveOptions& opts) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
    Filter f;
    f.kind = FilterKind::Lmmse;
    f.params.beta = g.beta();
    f.params.alpha = alpha;
    CMatrix a = g.gram();
    a.diagonal().array() += alpha;
    f.b_adjoint = solve_hpd(a, g.entries(), opts);
    return f;
}

Filter build_lmmse_jitter(const FourierMatrix& g_hat, double alpha, const CharMatrix& c,
                          double gamma, const SolveOptions& opts) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite and > 0");
    if (c.diagonal.size() != g_hat.harmonics()) throw std::invalid_argument("C does not match G");
    Filter f;
    f.kind = FilterKind::LmmseJitter;
    f.params.beta = g_hat.beta();
    f.params.alpha = alpha;
    f.params.omega = c.sigma_delta * static_cast<double>(g_hat.sensors());
    const auto cd = c.diagonal.cast<Complex>().asDiagonal();
    CMatrix k = cd * g_hat.gram() * cd;
    k.diagonal().array() += gamma;
    CMatrix cg = cd * g_hat.entries();
    f.b_adjoint = solve_hpd(k, cg, opts);
    return f;
}

RMatrix interpolation_matrix(const RVector& positions) {
    const Index r = positions.size();
    if (r < 2) throw std::invalid_argument("interpolation needs at least 2 sensors");
    for (Index q = 0; q < r; ++q) {
        if (!(positions[q] >= 0.0 && positions[q] < 1.0)) {
            throw std::invalid_argument("sensor position outside [0,1)");
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(r));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return positions[a] < positions[b]; });

    // Distinct nodes; each node averages the sensors sitting on it.
    struct Node {
        double x;
        std::vector<Index> sensors;
    };
    std::vector<Node> nodes;
    for (Index q : order) {
        if (!nodes.empty() && positions[q] == nodes.back().x) {
            nodes.back().sensors.push_back(q);
        } else {
            nodes.push_back({positions[q], {q}});
        }
    }

    RMatrix l = RMatrix::Zero(r, r);
    auto add_node = [&](Index row, const Node& node, double weight) {
        const double share = weight / static_cast<double>(node.sensors.size());
        for (Index q : node.sensors) l(row, q) += share;
    };

    const std::size_t count = nodes.size();
    for (Index row = 0; row < r; ++row) {
        const double grid = static_cast<double>(row) / static_cast<double>(r);
        if (count == 1) {
            add_node(row, nodes.front(), 1.0);
            continue;
        }
        auto it = std::upper_bound(nodes.begin(), nodes.end(), grid,
                                   [](double v, const Node& n) { return v < n.x; });
        const Node* left;
        const Node* right;
        double x_left, x_right;
        if (it == nodes.begin()) {
            left = &nodes.back();
            right = &nodes.front();
            x_left = left->x - 1.0;
            x_right = right->x;
        } else if (it == nodes.end()) {
            left = &nodes.back();
            right = &nodes.front();
            x_left = left->x;
            x_right = right->x + 1.0;
        } else {
            right = &*it;
            left = &*(it - 1);
            x_left = left->x;
            x_right = right->x;
        }
        const double t = (grid - x_left) / (x_right - x_left);
        add_node(row, *left, 1.0 - t);
        add_node(row, *right, t);
    }
    return l;
}

Filter build_interp(const RVector& positions, int m) {
    const RMatrix l = interpolation_matrix(positions);
    const int r = static_cast<int>(positions.size());
    const FourierMatrix grid = fourier_matrix(regular_layout(r).mean_positions, m);
    Filter f;
    f.kind = FilterKind::Interp;
    f.params.beta = grid.beta();
    f.b_adjoint = grid.beta() * (grid.entries() * l.cast<Complex>());
    return f;
}

CVector interp_estimate(const MeasurementSet& p, const SensorLayout& layout, int m) {
    if (p.size() != layout.size()) throw std::invalid_argument("measurement/layout size mismatch");
    const RMatrix l = interpolation_matrix(layout.mean_positions);
    const CVector on_grid = l.cast<Complex>() * p.values;
    const FourierMatrix grid = fourier_matrix(regular_layout(static_cast<int>(layout.size())).mean_positions, m);
    return grid.beta() * (grid.entries() * on_grid);
}

CVector estimate(const Filter& filter, const MeasurementSet& p) {
    if (p.size() != filter.sensors()) throw std::invalid_argument("filter/measurement dimension mismatch");
    return filter.b_adjoint * p.values;
}

}  // namespace fieldrec
