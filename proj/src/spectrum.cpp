#include "rabi/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/error.hpp"
#include "rabi/log.hpp"

namespace rabi {

FockHamiltonian build_hamiltonian(const ModelParams& params, int n_max) {
    ModelParams p = validate_params(params);
    if (n_max < 1) fail(ErrorCode::CutoffTooSmall, "boson cutoff must be at least 1");

    FockHamiltonian h;
    h.n_max = n_max;
    h.dim = 2 * (n_max + 1);
    h.matrix = Eigen::MatrixXd::Zero(h.dim, h.dim);
    for (int n = 0; n <= n_max; ++n) {
        int up = 2 * n;       // sigma_z = +1
        int down = 2 * n + 1; // sigma_z = -1
        h.matrix(up, up) = n * p.omega + p.delta;
        h.matrix(down, down) = n * p.omega - p.delta;
        h.matrix(up, down) = p.epsilon;
        h.matrix(down, up) = p.epsilon;
        if (n < n_max) {
            double hop = p.g * std::sqrt(n + 1.0);
            h.matrix(up, 2 * (n + 1) + 1) = hop;
            h.matrix(2 * (n + 1) + 1, up) = hop;
            h.matrix(down, 2 * (n + 1)) = hop;
            h.matrix(2 * (n + 1), down) = hop;
        }
    }
    return h;
}

std::vector<double> eigen_spectrum(const FockHamiltonian& h, int k) {
    if (k < 1 || k > h.dim) {
        fail(ErrorCode::CutoffTooSmall, "requested level count exceeds the truncated basis");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix, Eigen::EigenvaluesOnly);
    std::vector<double> out(k);
    for (int i = 0; i < k; ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

SpectrumTable sweep_levels(const ModelParams& params, double g_min, double g_max,
                           int steps, int k, int n_max) {
    ModelParams p = validate_params(params);
    if (steps < 2 || !(g_min < g_max)) {
        fail(ErrorCode::CutoffTooSmall, "sweep needs at least two grid points and g_min < g_max");
    }

    SpectrumTable table;
    table.n_max = n_max;
    table.params = p;
    table.params.g = 0.0;
    table.g_grid.reserve(steps);
    table.levels.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        double g = g_min + (g_max - g_min) * i / (steps - 1);
        table.g_grid.push_back(g);
        ModelParams pg = p;
        pg.g = g;
        table.levels.push_back(eigen_spectrum(build_hamiltonian(pg, n_max), k));
    }

    ModelParams last = p;
    last.g = table.g_grid.back();
    std::vector<double> doubled = eigen_spectrum(build_hamiltonian(last, 2 * n_max), k);
    double drift = 0.0;
    for (int j = 0; j < k; ++j) {
        drift = std::max(drift, std::fabs(table.levels.back()[j] - doubled[j]));
    }
    table.convergence_drift = drift;
    log_debug("sweep convergence drift " + std::to_string(drift));
    return table;
}

int degeneracy_at(const ModelParams& params, double e_target, int n_max, double tol) {
    ModelParams p = validate_params(params);
    if (!(tol > 0.0) || !std::isfinite(e_target)) {
        fail(ErrorCode::NonFiniteField, "target energy and tolerance must be finite and positive");
    }

    auto near_target = [&](int cutoff) {
        FockHamiltonian h = build_hamiltonian(p, cutoff);
        std::vector<double> ev = eigen_spectrum(h, h.dim);
        std::vector<double> hits;
        for (double e : ev) {
            if (std::fabs(e - e_target) <= tol) hits.push_back(e);
        }
        return hits;
    };

    std::vector<double> base = near_target(n_max);
    std::vector<double> doubled = near_target(2 * n_max);
    if (base.size() != doubled.size()) {
        fail(ErrorCode::NotConverged, "doubling the cutoff changed the multiplicity");
    }
    for (size_t i = 0; i < base.size(); ++i) {
        if (std::fabs(base[i] - doubled[i]) >= tol / 10.0) {
            fail(ErrorCode::NotConverged, "matched eigenvalues drift too much under cutoff doubling");
        }
    }
    return static_cast<int>(base.size());
}

} // namespace rabi
