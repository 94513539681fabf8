#include "fracqm/quantum_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracqm/errors.hpp"
#include "tridiagonal.hpp"

namespace fracqm {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class T>
std::vector<T> resample_to_xi(const Staircase& chart, std::span<const T> values, double xi0,
                              double dxi, std::size_t n) {
    const auto& s = chart.values();
    std::vector<T> out(n);
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double xi = j + 1 == n ? s.back() : xi0 + static_cast<double>(j) * dxi;
        while (k < s.size() && s[k] < xi) ++k;  // first knot with S_k >= xi
        if (k == s.size()) {
            out[j] = values.back();
        } else if (s[k] == xi || k == 0) {
            out[j] = values[k];
        } else {
            const double w = (xi - s[k - 1]) / (s[k] - s[k - 1]);
            out[j] = values[k - 1] + w * (values[k] - values[k - 1]);
        }
    }
    return out;
}

void require_aligned(const WaveFunction& a, const WaveFunction& b) {
    if (!a.field.aligned_with(b.field)) throw AlignmentError("wave functions use different charts");
}

}  // namespace

void PhysicalConstants::validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0)) throw DomainError("hbar and mass must be positive");
}

WaveFunction make_wave_function(ComplexField field, PhysicalConstants constants, double tau,
                                std::shared_ptr<const Staircase> time_chart) {
    constants.validate();
    return WaveFunction{std::move(field), std::move(time_chart), tau, constants};
}

PlaneWaveParams PlaneWaveParams::from_energy(Complex A, Complex B, double E,
                                             const PhysicalConstants& c) {
    c.validate();
    if (E < 0.0) throw DomainError("plane-wave energy must be non-negative");
    return {A, B, std::sqrt(2.0 * c.mass * E) / c.hbar, E / c.hbar, E};
}

PlaneWaveParams PlaneWaveParams::from_wavenumber(Complex A, Complex B, double k,
                                                 const PhysicalConstants& c) {
    c.validate();
    const double E = (c.hbar * k) * (c.hbar * k) / (2.0 * c.mass);
    return {A, B, k, E / c.hbar, E};
}

WaveFunction plane_wave(const PlaneWaveParams& p, std::shared_ptr<const Staircase> space_chart,
                        std::shared_ptr<const Staircase> time_chart, double tau,
                        const PhysicalConstants& constants) {
    const Complex phase = std::exp(-kI * p.beta * tau);
    auto field = ComplexField::from_function(std::move(space_chart), [&](double, double s) {
        return (p.A * std::exp(kI * p.k * s) + p.B * std::exp(-kI * p.k * s)) * phase;
    });
    return make_wave_function(std::move(field), constants, tau, std::move(time_chart));
}

WaveFunction gaussian_packet(std::shared_ptr<const Staircase> space_chart, double center,
                             double sigma, double k0, const PhysicalConstants& constants) {
    if (!(sigma > 0.0)) throw DomainError("Gaussian width must be positive");
    auto field = ComplexField::from_function(std::move(space_chart), [&](double, double s) {
        const double d = s - center;
        return std::exp(Complex(-d * d / (4.0 * sigma * sigma), k0 * s));
    });
    std::vector<double> rho(field.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(field[i]);
    const double norm = falpha_integral_nodes(RealField(field.chart_ptr(), std::move(rho)), 0,
                                              field.size() - 1);
    if (!(norm > 0.0)) throw DomainError("Gaussian packet has zero norm on this chart");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : field.mutable_values()) v *= scale;
    return make_wave_function(std::move(field), constants);
}

PotentialOnCurve PotentialOnCurve::harmonic(std::shared_ptr<const Staircase> chart, double omega,
                                            double center, const PhysicalConstants& c) {
    auto field = RealField::from_function(std::move(chart), [&](double, double s) {
        const double d = s - center;
        return 0.5 * c.mass * omega * omega * d * d;
    });
    return PotentialOnCurve{std::move(field), {}};
}

ConjugateState conjugate_map(const ComplexField& psi, std::size_t xi_points) {
    const Staircase& chart = psi.chart();
    if (!(chart.span() > 0.0)) throw ConjugacyError("staircase chart is constant; no conjugate map");
    const std::size_t n = xi_points == 0 ? chart.size() : xi_points;
    if (n < 3) throw ConjugacyError("conjugate grid needs at least three points");
    ConjugateState st;
    st.xi0 = chart.front();
    st.dxi = chart.span() / static_cast<double>(n - 1);
    st.theta = resample_to_xi<Complex>(chart, psi.values(), st.xi0, st.dxi, n);
    return st;
}

ComplexField conjugate_inverse(const ConjugateState& state, std::shared_ptr<const Staircase> chart) {
    const std::size_t n = state.size();
    if (n < 2) throw ConjugacyError("conjugate state is empty");
    std::vector<Complex> out(chart->size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double u = (chart->value(i) - state.xi0) / state.dxi;
        if (u <= 0.0) {
            out[i] = state.theta.front();
            continue;
        }
        if (u >= static_cast<double>(n - 1)) {
            out[i] = state.theta.back();
            continue;
        }
        const std::size_t j = static_cast<std::size_t>(u);
        const double w = u - static_cast<double>(j);
        out[i] = w == 0.0 ? state.theta[j] : state.theta[j] + w * (state.theta[j + 1] - state.theta[j]);
    }
    return ComplexField(std::move(chart), std::move(out));
}

Evolver::Evolver(const WaveFunction& psi, const PotentialOnCurve* potential, double d_tau,
                 EvolveOptions options)
    : prototype_(psi), options_(options), d_tau_(d_tau), tau_(psi.tau), potential_(potential) {
    psi.constants.validate();
    if (!(d_tau > 0.0)) throw DomainError("d_tau must be positive");
    state_ = conjugate_map(psi.field, options.xi_points);
    const std::size_t n = state_.size();
    if (options_.boundary == Boundary::periodic && n < 4) {
        throw SolverError("periodic evolution needs at least three independent points");
    }
    potential_xi_.assign(n, 0.0);
    if (potential_) {
        if (!potential_->field.chart().same_knots(psi.space_chart())) {
            throw AlignmentError("potential and wave function use different charts");
        }
        potential_xi_ = resample_to_xi<double>(potential_->field.chart(), potential_->field.values(),
                                               state_.xi0, state_.dxi, n);
    }
    if (options_.boundary == Boundary::dirichlet) {
        state_.theta.front() = 0.0;
        state_.theta.back() = 0.0;
    } else {
        state_.theta.back() = state_.theta.front();
    }
}

void Evolver::step(std::size_t count) {
    for (std::size_t s = 0; s < count; ++s) single_step();
}

void Evolver::single_step() {
    const auto& c = prototype_.constants;
    const std::size_t n = state_.size();
    const double kin = c.hbar * c.hbar / (2.0 * c.mass * state_.dxi * state_.dxi);
    const double mult = potential_ ? potential_->multiplier(tau_ + 0.5 * d_tau_) : 0.0;
    const Complex r = kI * d_tau_ / (2.0 * c.hbar);

    const bool periodic = options_.boundary == Boundary::periodic;
    const std::size_t first = periodic ? 0 : 1;
    const std::size_t count = periodic ? n - 1 : n - 2;
    auto& th = state_.theta;

    std::vector<Complex> lower(count), diag(count), upper(count), rhs(count);
    for (std::size_t m = 0; m < count; ++m) {
        const std::size_t j = first + m;
        const double hdiag = 2.0 * kin + mult * potential_xi_[j];
        const std::size_t jm = (periodic && j == 0) ? n - 2 : j - 1;
        const std::size_t jp = j + 1;  // periodic: th[n-1] == th[0]
        const Complex h_theta = hdiag * th[j] - kin * (th[jm] + th[jp]);
        rhs[m] = th[j] - r * h_theta;
        diag[m] = 1.0 + r * hdiag;
        lower[m] = -r * kin;
        upper[m] = -r * kin;
    }
    const auto x = periodic ? detail::solve_cyclic_tridiagonal(lower, diag, upper, rhs)
                            : detail::solve_tridiagonal(lower, diag, upper, rhs);
    for (std::size_t m = 0; m < count; ++m) th[first + m] = x[m];
    if (periodic) th[n - 1] = th[0];
    tau_ += d_tau_;
}

WaveFunction Evolver::snapshot() const {
    WaveFunction out = prototype_;
    out.field = conjugate_inverse(state_, prototype_.field.chart_ptr());
    out.tau = tau_;
    return out;
}

double Evolver::xi_norm() const {
    const std::size_t n = options_.boundary == Boundary::periodic ? state_.size() - 1 : state_.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += std::norm(state_.theta[j]);
    return sum * state_.dxi;
}

WaveFunction evolve(const WaveFunction& psi, const PotentialOnCurve* potential, double d_tau,
                    std::size_t steps, EvolveOptions options) {
    Evolver ev(psi, potential, d_tau, options);
    ev.step(steps);
    return ev.snapshot();
}

WaveFunction hamiltonian_apply(const WaveFunction& psi, const PotentialOnCurve* potential) {
    const auto& c = psi.constants;
    const auto lap = laplacian(psi.field);
    std::vector<Complex> out(psi.size());
    const double kin = -c.hbar * c.hbar / (2.0 * c.mass);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = kin * lap[i];
    if (potential) {
        if (!potential->field.chart().same_knots(psi.space_chart())) {
            throw AlignmentError("potential and wave function use different charts");
        }
        const double mult = potential->multiplier(psi.tau);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += mult * potential->field[i] * psi.field[i];
    }
    WaveFunction res = psi;
    res.field = ComplexField(psi.field.chart_ptr(), std::move(out));
    return res;
}

ComplexVectorField momentum_apply(const WaveFunction& psi, const CurveGrid& grid) {
    auto g = gradient(psi.field, grid);
    const Complex factor = -kI * psi.constants.hbar;
    for (auto& comp : g.components) {
        for (auto& v : comp.mutable_values()) v *= factor;
    }
    return g;
}

RealField schrodinger_residual(const WaveFunction& prev, const WaveFunction& curr,
                               const WaveFunction& next, const PotentialOnCurve* potential) {
    require_aligned(prev, curr);
    require_aligned(curr, next);
    const double d_tau = 0.5 * (next.tau - prev.tau);
    if (!(d_tau > 0.0)) throw AlignmentError("snapshots must be ordered in tau");
    if (std::abs((curr.tau - prev.tau) - d_tau) > 1e-9 * std::max(1.0, d_tau) ||
        std::abs((next.tau - curr.tau) - d_tau) > 1e-9 * std::max(1.0, d_tau)) {
        throw AlignmentError("snapshots are not equally spaced in tau");
    }
    const auto h = hamiltonian_apply(curr, potential);
    const double hbar = curr.constants.hbar;
    std::vector<double> out(curr.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Complex dt = (next.field[i] - prev.field[i]) / (2.0 * d_tau);
        out[i] = std::abs(kI * hbar * dt - h.field[i]);
    }
    return RealField(curr.field.chart_ptr(), std::move(out));
}

WaveFunction kernel_step(const WaveFunction& psi, const KernelStep& step, std::size_t xi_points) {
    step.validate();
    const auto& c = psi.constants;
    c.validate();
    const ConjugateState st = conjugate_map(psi.field, xi_points);
    const double width = std::sqrt(c.hbar * step.epsilon / c.mass);
    if (width < 4.0 * st.dxi) {
        throw ResolutionError("kernel width sqrt(hbar eps / m) = " + std::to_string(width) +
                              " spans fewer than 4 grid cells (dxi = " + std::to_string(st.dxi) + ")");
    }
    const KernelMoments mom = kernel_moments(step, c);

    // uniform chart in xi so the calculus stencils act on theta directly
    std::vector<double> xs(st.size());
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = st.xi(j);
    xs.back() = psi.space_chart().back();
    auto xi_chart = std::make_shared<const Staircase>(1.0, xs, xs, 0);
    const ComplexField theta(xi_chart, st.theta);
    const auto d1 = falpha_derivative(theta);
    const auto d2 = laplacian(theta);

    ConjugateState next = st;
    for (std::size_t j = 0; j < next.size(); ++j) {
        next.theta[j] = mom.m0 * theta[j] + mom.m1 * d1[j] + mom.m2 * d2[j];
    }
    WaveFunction out = psi;
    out.field = conjugate_inverse(next, psi.field.chart_ptr());
    out.tau = psi.tau + step.epsilon;
    return out;
}

}  // namespace fracqm
