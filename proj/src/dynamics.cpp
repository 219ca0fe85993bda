#include "phonon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "phonon/parallel.hpp"

namespace phonon {

namespace {

using Complex = std::complex<double>;

constexpr double kDegeneracyWindowFactor = 1e-10;
constexpr int kKrylovMaxDim = 64;
constexpr int kKrylovCheckStride = 6;
constexpr int kMaxStepHalvings = 40;

void require_normalized(const Eigen::VectorXcd& psi0) {
    const double norm = psi0.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
        throw InputError("initial state is not normalized (norm = " + std::to_string(norm) + ")");
    }
}

// exp(-i h T) e1 for a real symmetric tridiagonal T given by diagonal alpha
// and off-diagonal beta, via dense diagonalization of the small matrix.
Eigen::VectorXcd tridiagonal_propagator_column(const std::vector<double>& alpha,
                                               const std::vector<double>& beta, int m, double h) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
            t(i, i + 1) = beta[static_cast<std::size_t>(i)];
            t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    Eigen::VectorXcd phased(m);
    for (int i = 0; i < m; ++i) {
        phased[i] = std::exp(Complex(0.0, -h * solver.eigenvalues()[i])) *
                    solver.eigenvectors()(0, i);
    }
    // Q exp(-i h D) Q^T e1
    return detail::real_times_complex(solver.eigenvectors(), phased);
}

struct LanczosGround {
    double e0 = 0.0;
    double e1 = 0.0;
    bool have_e1 = false;
    Eigen::VectorXd vector;
};

// Lanczos with full reorthogonalization for the lowest eigenpair, real
// arithmetic (the operator is real symmetric). Deterministic seeded start.
LanczosGround lanczos_lowest(const SparseOperator& op) {
    const auto dim = static_cast<Eigen::Index>(op.dim());
    const int max_iter = static_cast<int>(std::min<std::size_t>(op.dim(), 400));

    std::mt19937 rng(20211u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd q(dim);
    for (Eigen::Index i = 0; i < dim; ++i) q[i] = gauss(rng);
    q.normalize();

    std::vector<Eigen::VectorXd> basis;
    basis.reserve(static_cast<std::size_t>(max_iter));
    std::vector<double> alpha, beta;
    Eigen::VectorXd w;

    double prev_e0 = 0.0;
    bool have_prev = false;
    for (int j = 0; j < max_iter; ++j) {
        basis.push_back(q);
        w = op.apply(q);
        alpha.push_back(q.dot(w));
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : basis) w -= v.dot(w) * v;
        }
        const double b = w.norm();
        const int m = j + 1;

        const bool breakdown = b < 1e-13 * std::max(1.0, op.max_abs_value());
        if (m >= 2 || breakdown || m == max_iter) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                t(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < m) {
                    t(i, i + 1) = beta[static_cast<std::size_t>(i)];
                    t(i + 1, i) = beta[static_cast<std::size_t>(i)];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
            const double e0 = solver.eigenvalues()[0];
            const double scale = std::max(std::abs(e0), std::abs(solver.eigenvalues()[m - 1]));
            const double ritz_residual = (m < static_cast<int>(op.dim()))
                                             ? std::abs(b * solver.eigenvectors()(m - 1, 0))
                                             : 0.0;
            const bool value_settled =
                have_prev && std::abs(e0 - prev_e0) <= 1e-13 * std::max(scale, 1.0);
            const bool converged =
                breakdown || m == static_cast<int>(op.dim()) ||
                (ritz_residual <= 1e-11 * std::max(scale, 1.0) && value_settled);
            if (!converged && m == max_iter) {
                throw ConvergenceError(
                    "lanczos ground-state iteration stalled after " + std::to_string(m) +
                    " steps; ritz residual " + std::to_string(ritz_residual));
            }
            if (converged) {
                LanczosGround result;
                result.e0 = e0;
                if (m >= 2) {
                    result.e1 = solver.eigenvalues()[1];
                    result.have_e1 = true;
                }
                Eigen::VectorXd ground = Eigen::VectorXd::Zero(dim);
                for (int i = 0; i < m; ++i) {
                    ground += solver.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
                }
                ground.normalize();
                result.vector = ground;
                return result;
            }
            prev_e0 = e0;
            have_prev = true;
        }
        beta.push_back(b);
        q = w / b;
    }
    throw ConvergenceError("lanczos ground-state iteration did not converge");
}

}  // namespace

void SpectralDecomposition::attach_initial_state(const Eigen::VectorXcd& psi0) {
    require_normalized(psi0);
    if (psi0.size() != eigenvectors.rows()) {
        throw DimensionError("initial state length " + std::to_string(psi0.size()) +
                             " does not match decomposition dimension " +
                             std::to_string(eigenvectors.rows()));
    }
    overlaps = detail::real_times_complex(eigenvectors.transpose(), psi0);
}

SpectralDecomposition full_diagonalize(const SparseOperator& op, std::size_t dense_cap) {
    if (op.dim() > dense_cap) {
        throw SizingError("dimension " + std::to_string(op.dim()) + " exceeds the dense cap " +
                          std::to_string(dense_cap) +
                          "; use ground_state() and evolve_krylov() instead");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.to_dense());
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("dense eigensolver failed");
    }
    SpectralDecomposition sd;
    sd.energies = solver.eigenvalues();
    sd.eigenvectors = solver.eigenvectors();
    return sd;
}

GroundState ground_state(const SparseOperator& op, std::size_t dense_cap) {
    GroundState result;
    if (op.dim() <= dense_cap) {
        const SpectralDecomposition sd = full_diagonalize(op, dense_cap);
        const auto n = sd.energies.size();
        result.energy = sd.energies[0];
        result.vector = sd.eigenvectors.col(0);
        const double scale = std::max(std::abs(sd.energies[0]), std::abs(sd.energies[n - 1]));
        const double window = kDegeneracyWindowFactor * scale;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (sd.energies[i] - sd.energies[0] <= window) {
                result.degenerate_levels.push_back(static_cast<int>(i));
            }
        }
        result.degenerate = result.degenerate_levels.size() > 1;
        return result;
    }

    const LanczosGround lanczos = lanczos_lowest(op);
    result.energy = lanczos.e0;
    result.vector = lanczos.vector;
    if (lanczos.have_e1) {
        const double scale = std::max(std::abs(lanczos.e0), std::abs(lanczos.e1));
        if (lanczos.e1 - lanczos.e0 <= kDegeneracyWindowFactor * scale) {
            result.degenerate = true;
            result.degenerate_levels = {0, 1};
        } else {
            result.degenerate_levels = {0};
        }
    }
    return result;
}

std::vector<EvolvedState> evolve_spectral(const SpectralDecomposition& sd,
                                          const Eigen::VectorXcd& psi0,
                                          std::span<const double> times, int workers) {
    require_normalized(psi0);
    if (static_cast<std::size_t>(psi0.size()) != sd.dim()) {
        throw DimensionError("state length " + std::to_string(psi0.size()) +
                             " does not match decomposition dimension " + std::to_string(sd.dim()));
    }
    const Eigen::VectorXcd coeffs = detail::real_times_complex(sd.eigenvectors.transpose(), psi0);
    std::vector<EvolvedState> out(times.size());
    parallel_for(times.size(), workers, [&](std::size_t k) {
        const double t = times[k];
        Eigen::VectorXcd phased(coeffs.size());
        for (Eigen::Index a = 0; a < coeffs.size(); ++a) {
            phased[a] = coeffs[a] * std::exp(Complex(0.0, -sd.energies[a] * t));
        }
        out[k].time = t;
        out[k].amplitudes = detail::real_times_complex(sd.eigenvectors, phased);
    });
    return out;
}

std::vector<EvolvedState> evolve_krylov(const SparseOperator& op, const Eigen::VectorXcd& psi0,
                                        std::span<const double> times, double tolerance) {
    require_normalized(psi0);
    if (static_cast<std::size_t>(psi0.size()) != op.dim()) {
        throw DimensionError("state length " + std::to_string(psi0.size()) +
                             " does not match operator dimension " + std::to_string(op.dim()));
    }
    if (tolerance <= 0.0) {
        throw InputError("krylov tolerance must be positive");
    }

    double total_span = 0.0;
    double prev = 0.0;
    for (double t : times) {
        total_span += std::abs(t - prev);
        prev = t;
    }

    const auto dim = static_cast<Eigen::Index>(op.dim());
    const int subspace_cap = static_cast<int>(std::min<std::size_t>(op.dim(), kKrylovMaxDim));

    // One Lanczos sweep from `state`, propagated over substep h. Returns the
    // new state, or nothing when the residual estimate misses `budget`.
    auto try_step = [&](const Eigen::VectorXcd& state, double h, double budget,
                        double* achieved) -> std::optional<Eigen::VectorXcd> {
        std::vector<Eigen::VectorXcd> basis;
        basis.reserve(static_cast<std::size_t>(subspace_cap));
        std::vector<double> alpha, beta;
        Eigen::VectorXcd q = state;
        Eigen::VectorXcd prev_y;

        for (int j = 0; j < subspace_cap; ++j) {
            basis.push_back(q);
            Eigen::VectorXcd w = op.apply(q);
            alpha.push_back(std::real(q.dot(w)));  // Eigen's dot conjugates the left argument
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& v : basis) w -= v.dot(w) * v;
            }
            const double b = w.norm();
            const int m = j + 1;
            const bool breakdown = b <= 1e-14 * std::max(1.0, op.max_abs_value());
            const bool checkpoint = breakdown || m == subspace_cap || (m % kKrylovCheckStride == 0);
            if (checkpoint) {
                Eigen::VectorXcd y = tridiagonal_propagator_column(alpha, beta, m, h);
                double err = breakdown ? 0.0 : std::abs(b * h * y[m - 1]);
                if (prev_y.size() > 0) {
                    double diff2 = 0.0;
                    for (int i = 0; i < m; ++i) {
                        const Complex yi = y[i];
                        const Complex pi = i < prev_y.size() ? prev_y[i] : Complex(0.0);
                        diff2 += std::norm(yi - pi);
                    }
                    err = std::max(err, std::sqrt(diff2));
                }
                *achieved = err;
                if (breakdown || err <= budget) {
                    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
                    for (int i = 0; i < m; ++i) {
                        next += y[i] * basis[static_cast<std::size_t>(i)];
                    }
                    return next;
                }
                prev_y = std::move(y);
            }
            if (breakdown) break;
            beta.push_back(b);
            q = w / b;
        }
        return std::nullopt;
    };

    std::vector<EvolvedState> out(times.size());
    Eigen::VectorXcd state = psi0;
    double current_time = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double target = times[k];
        double remaining = target - current_time;
        double step = remaining;
        while (std::abs(remaining) > 0.0) {
            if (std::abs(step) > std::abs(remaining)) step = remaining;
            const double budget =
                total_span > 0.0 ? tolerance * std::abs(step) / total_span : tolerance;
            double achieved = 0.0;
            int halvings = 0;
            std::optional<Eigen::VectorXcd> next = try_step(state, step, budget, &achieved);
            while (!next) {
                if (++halvings > kMaxStepHalvings) {
                    throw ConvergenceError(
                        "krylov propagator stalled; achieved residual estimate " +
                        std::to_string(achieved) + " over substep " + std::to_string(step));
                }
                step *= 0.5;
                const double smaller_budget =
                    total_span > 0.0 ? tolerance * std::abs(step) / total_span : tolerance;
                next = try_step(state, step, smaller_budget, &achieved);
            }
            state = std::move(*next);
            remaining -= step;
        }
        current_time = target;
        out[k].time = target;
        out[k].amplitudes = state;
    }
    return out;
}

}  // namespace phonon
