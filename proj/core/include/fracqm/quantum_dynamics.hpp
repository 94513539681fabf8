#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fracqm/falpha_calculus.hpp"

namespace fracqm {

struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const;
};

// State psi(tau, w(v)) sampled on the space chart. `tau` is staircase time
// S_F^alpha(t); the time chart (if any) maps physical time to tau.
struct WaveFunction {
    ComplexField field;
    std::shared_ptr<const Staircase> time_chart;
    double tau = 0.0;
    PhysicalConstants constants;

    const Staircase& space_chart() const { return field.chart(); }
    std::size_t size() const { return field.size(); }
};

WaveFunction make_wave_function(ComplexField field, PhysicalConstants constants = {},
                                double tau = 0.0,
                                std::shared_ptr<const Staircase> time_chart = nullptr);

struct PlaneWaveParams {
    Complex A{1.0, 0.0};
    Complex B{0.0, 0.0};
    double k = 0.0;
    double beta = 0.0;
    double E = 0.0;

    // k = sqrt(2 m E) / hbar, beta = E / hbar.
    static PlaneWaveParams from_energy(Complex A, Complex B, double E, const PhysicalConstants& c);
    // E = (hbar k)^2 / (2 m), beta = E / hbar.
    static PlaneWaveParams from_wavenumber(Complex A, Complex B, double k,
                                           const PhysicalConstants& c);
};

// psi(v) = (A e^{i k S(v)} + B e^{-i k S(v)}) e^{-i beta tau}
WaveFunction plane_wave(const PlaneWaveParams& params, std::shared_ptr<const Staircase> space_chart,
                        std::shared_ptr<const Staircase> time_chart, double tau,
                        const PhysicalConstants& constants = {});

// Normalized Gaussian packet exp(-(S - center)^2 / (4 sigma^2) + i k0 S) on
// the space chart, scaled so that the integral of |psi|^2 dS is one.
WaveFunction gaussian_packet(std::shared_ptr<const Staircase> space_chart, double center,
                             double sigma, double k0 = 0.0, const PhysicalConstants& constants = {});

// Real potential V(tau, w(v)) = field(v) * time_dependence(tau).
struct PotentialOnCurve {
    RealField field;
    std::function<double(double tau)> time_dependence;

    double multiplier(double tau) const { return time_dependence ? time_dependence(tau) : 1.0; }

    // V = 1/2 m omega^2 (S - center)^2
    static PotentialOnCurve harmonic(std::shared_ptr<const Staircase> chart, double omega,
                                     double center, const PhysicalConstants& c = {});
};

enum class Boundary { dirichlet, periodic };

// Samples of theta(xi) = phi[psi] on the uniform grid xi_j = xi0 + j * dxi,
// j = 0..size-1. The last sample sits on the final knot of the chart.
struct ConjugateState {
    double xi0 = 0.0;
    double dxi = 0.0;
    std::vector<Complex> theta;

    double xi(std::size_t j) const { return xi0 + static_cast<double>(j) * dxi; }
    std::size_t size() const { return theta.size(); }
};

// Resample psi onto a uniform xi = S(v) grid by monotone (linear)
// interpolation between knots. xi_points == 0 uses the knot count.
ConjugateState conjugate_map(const ComplexField& psi, std::size_t xi_points = 0);

// Map a uniform-xi state back onto the chart knots.
ComplexField conjugate_inverse(const ConjugateState& state,
                               std::shared_ptr<const Staircase> chart);

struct EvolveOptions {
    Boundary boundary = Boundary::dirichlet;
    std::size_t xi_points = 0;
};

// Crank-Nicolson integrator for i hbar d_tau theta = -hbar^2/2m d_xi^2 theta + V theta
// in conjugate coordinates. Holds the state on the xi grid between steps;
// single writer.
class Evolver {
public:
    Evolver(const WaveFunction& psi, const PotentialOnCurve* potential, double d_tau,
            EvolveOptions options = {});

    void step(std::size_t count = 1);

    double tau() const noexcept { return tau_; }
    const ConjugateState& state() const noexcept { return state_; }
    WaveFunction snapshot() const;

    // sum |theta_j|^2 dxi over the independent unknowns
    double xi_norm() const;

private:
    void single_step();

    WaveFunction prototype_;
    EvolveOptions options_;
    double d_tau_;
    double tau_;
    ConjugateState state_;
    std::vector<double> potential_xi_;  // V on the xi grid (time-independent part)
    const PotentialOnCurve* potential_;
};

WaveFunction evolve(const WaveFunction& psi, const PotentialOnCurve* potential, double d_tau,
                    std::size_t steps, EvolveOptions options = {});

// -hbar^2/(2m) (d/dS)^2 psi + V psi on the space chart.
WaveFunction hamiltonian_apply(const WaveFunction& psi, const PotentialOnCurve* potential);

// -i hbar grad psi
ComplexVectorField momentum_apply(const WaveFunction& psi, const CurveGrid& grid);

// |i hbar (psi_next - psi_prev)/(2 d_tau) - H psi_curr| at every knot.
RealField schrodinger_residual(const WaveFunction& prev, const WaveFunction& curr,
                               const WaveFunction& next, const PotentialOnCurve* potential);

struct KernelStep {
    double epsilon = 1e-3;
    double damping_eta = 1e-4;

    void validate() const;

    // A = sqrt(2 i pi hbar eps / m), principal branch.
    Complex normalization(const PhysicalConstants& c) const;
    // A evaluated at the damped step eps (1 - i eta).
    Complex damped_normalization(const PhysicalConstants& c) const;
};

struct KernelMoments {
    Complex m0;  // integral of K / A
    Complex m1;  // integral of delta K / A
    Complex m2;  // integral of (delta^2 / 2) K / A
    // Raw quadrature at damping eta and eta / 2 ([0] and [1]); the reported
    // moments are their linear extrapolation to eta -> 0.
    std::array<Complex, 2> raw_m0;
    std::array<Complex, 2> raw_m1;
    std::array<Complex, 2> raw_m2;
    double quadrature_step = 0.0;  // in units of sqrt(2 hbar eps / m)
};

KernelMoments kernel_moments(const KernelStep& step, const PhysicalConstants& c = {});

// One infinitesimal propagator step: the kernel integrated against the
// second-order expansion of theta(xi + delta), i.e.
//   theta <- m0 theta + m1 d_xi theta + m2 d_xi^2 theta.
// Requires sqrt(hbar eps / m) >= 4 dxi.
WaveFunction kernel_step(const WaveFunction& psi, const KernelStep& step,
                         std::size_t xi_points = 0);

}  // namespace fracqm
