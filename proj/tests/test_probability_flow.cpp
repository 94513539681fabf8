#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fracqm/errors.hpp"
#include "fracqm/probability_flow.hpp"
#include "fracqm/quantum_dynamics.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace fracqm;
using scenario::koch_chart;
using scenario::line_chart;

namespace {

constexpr Complex I{0.0, 1.0};

WaveFunction scaled(WaveFunction psi, Complex s) {
    for (auto& v : psi.field.mutable_values()) v *= s;
    return psi;
}

// Smooth random state vanishing at both ends of the chart.
WaveFunction random_smooth(const std::shared_ptr<const Staircase>& c, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Complex a[4];
    for (auto& x : a) x = {g(rng), g(rng)};
    const double lo = c->front(), span = c->span();
    return make_wave_function(ComplexField::from_function(c, [&](double, double s) {
        const double u = (s - lo) / span;
        Complex sum = 0.0;
        for (int m = 0; m < 4; ++m) sum += a[m] * std::sin((m + 1) * std::numbers::pi * u);
        return sum;
    }));
}

}  // namespace

TEST(Density, PlaneWaveZeroAndGaussian) {
    const auto c = koch_chart(4);
    const auto pw = plane_wave(PlaneWaveParams::from_wavenumber(1.0, 0.0, 7.0, {}), c, nullptr, 0.3);
    const auto rho = probability_density(pw);
    for (std::size_t i = 0; i < rho.field.size(); ++i) EXPECT_NEAR(rho.field[i], 1.0, 1e-14);

    const auto z = probability_density(make_wave_function(ComplexField::constant(c, 0.0)));
    for (std::size_t i = 0; i < z.field.size(); ++i) EXPECT_EQ(z.field[i], 0.0);

    const auto g = gaussian_packet(line_chart(-8, 8, 1600), 0.5, 0.7, 2.0);
    const auto rg = probability_density(g);
    for (std::size_t i = 0; i < rg.field.size(); ++i) EXPECT_GE(rg.field[i], 0.0);
    EXPECT_NEAR(falpha_integral(rg.field, -8.0, 8.0), 1.0, 1e-8);
}

TEST(TotalProbability, NormalizationScalingAndZero) {
    const auto g = gaussian_packet(koch_chart(5), 0.5, 0.1);
    EXPECT_NEAR(total_probability(g), 1.0, 1e-8);
    EXPECT_NEAR(total_probability(scaled(g, 2.0)), 4.0 * total_probability(g), 1e-14);
    EXPECT_EQ(total_probability(scaled(g, 0.0)), 0.0);
}

TEST(TotalProbability, GaussianMassAgainstSimpson) {
    // independent quadrature of the analytic density on the same knots
    const auto c = line_chart(-6, 6, 1200);
    const double sigma = 0.9;
    const auto g = gaussian_packet(c, 0.0, sigma);
    std::vector<double> rho(c->size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double s = c->value(i);
        rho[i] = std::exp(-s * s / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * std::numbers::pi));
    }
    const double unnormalized = oracle::simpson(rho, 12.0 / 1200.0);
    EXPECT_NEAR(unnormalized, 1.0, 1e-8);
    EXPECT_NEAR(std::norm(g.field[600]), rho[600], 1e-6);
}

TEST(Current, PlaneWaveSecondOrder) {
    const double k = 3.0;
    std::vector<double> err, h;
    for (std::size_t n : {50u, 100u, 200u}) {
        const auto c = line_chart(0, 1, n);
        const auto psi = plane_wave(PlaneWaveParams::from_wavenumber(1.0, 0.0, k, {}), c, nullptr, 0.0);
        const auto j = probability_current(psi);
        EXPECT_EQ(j.form, CurrentForm::first_derivative);
        double e = 0.0;
        for (std::size_t i = 0; i < j.field.size(); ++i) e = std::max(e, std::abs(j.field[i] - k));
        err.push_back(e);
        h.push_back(1.0 / static_cast<double>(n));
    }
    for (double o : oracle::pairwise_orders(err, h)) EXPECT_GE(o, 1.9);
}

TEST(Current, ScalesWithHbarOverMass) {
    const PhysicalConstants pc{2.0, 0.5};
    const auto c = line_chart(0, 1, 400);
    const double k = 3.0;
    auto psi = plane_wave(PlaneWaveParams::from_wavenumber(1.0, 0.0, k, pc), c, nullptr, 0.0, pc);
    const auto j = probability_current(psi);
    EXPECT_NEAR(j.field[200], pc.hbar * k / pc.mass, 1e-3);
}

TEST(Current, RealAndConstantStatesCarryNone) {
    const auto c = koch_chart(4);
    const auto real = make_wave_function(
        ComplexField::from_function(c, [](double, double s) { return Complex(std::cos(3 * s) + s * s, 0.0); }));
    const auto j = probability_current(real);
    for (std::size_t i = 0; i < j.field.size(); ++i) EXPECT_EQ(j.field[i], 0.0);

    const auto cst = make_wave_function(ComplexField::constant(c, Complex(1.0, 2.0)));
    for (auto form : {CurrentForm::first_derivative, CurrentForm::second_derivative}) {
        const auto jc = probability_current(cst, form);
        for (std::size_t i = 0; i < jc.field.size(); ++i) EXPECT_NEAR(jc.field[i], 0.0, 1e-7);
    }
}

TEST(Current, ConjugationFlipsSign) {
    const auto psi = random_smooth(koch_chart(4), 9);
    auto conj = psi;
    for (auto& v : conj.field.mutable_values()) v = std::conj(v);
    const auto a = probability_current(psi);
    const auto b = probability_current(conj);
    for (std::size_t i = 0; i < a.field.size(); ++i) EXPECT_EQ(a.field[i], -b.field[i]);
}

TEST(Current, LiteralFormMissesPlaneWaveFlux) {
    // psi D^2 psi* - psi* D^2 psi vanishes for e^{ikS}; the first-derivative
    // form carries hbar k / m. This is why the literal form cannot close the
    // continuity equation.
    const auto c = line_chart(0, 1, 400);
    const auto psi = plane_wave(PlaneWaveParams::from_wavenumber(1.0, 0.0, 4.0, {}), c, nullptr, 0.0);
    const auto lit = probability_current(psi, CurrentForm::second_derivative);
    EXPECT_EQ(lit.form, CurrentForm::second_derivative);
    for (std::size_t i = 1; i + 1 < lit.field.size(); ++i) EXPECT_NEAR(lit.field[i], 0.0, 1e-8);
    EXPECT_NEAR(lit.field[0], 0.0, 1e-4);  // one-sided end stencil
    EXPECT_NEAR(probability_current(psi).field[200], 4.0, 1e-3);
}

TEST(Continuity, StationaryStateResidualTiny) {
    const auto c = line_chart(-6, 6, 1200);
    const auto g = gaussian_packet(c, 0.0, std::sqrt(0.5));
    auto at = [&](double tau) {
        auto w = g;
        for (auto& x : w.field.mutable_values()) x *= std::exp(-I * 0.5 * tau);
        w.tau = tau;
        return w;
    };
    EXPECT_LT(residual_norms(continuity_residual(at(0.9), at(1.0), at(1.1))).max, 1e-8);
}

TEST(Continuity, PeriodicPlaneWaveInterior) {
    // The calculus stencils are one-sided at the chart ends and do not see
    // the periodic wrap, so the seam knots are excluded.
    for (std::size_t n : {64u, 128u, 256u}) {
        const auto c = line_chart(0, 1, n);
        const auto p = PlaneWaveParams::from_wavenumber(1.0, 0.0, 2 * std::numbers::pi, {});
        const double dt = 1.0 / static_cast<double>(n);
        Evolver ev(plane_wave(p, c, nullptr, 0.0), nullptr, dt, {Boundary::periodic, 0});
        ev.step(5);
        const auto a = ev.snapshot();
        ev.step();
        const auto b = ev.snapshot();
        ev.step();
        const auto d = ev.snapshot();
        const double r = residual_norms(continuity_residual(a, b, d), 2, n - 2).max;
        EXPECT_LT(r, dt * dt);
    }
}

TEST(Continuity, FreeGaussianConvergesAtSecondOrder) {
    const auto r = scenario::continuity_convergence({300, 600, 1200, 2400});
    EXPECT_GE(r.min_pairwise(), 1.9);
}

TEST(Continuity, RejectsMisalignedOrUnorderedSnapshots) {
    const auto a = gaussian_packet(line_chart(-1, 1, 20), 0.0, 0.3);
    const auto b = gaussian_packet(line_chart(-1, 1, 24), 0.0, 0.3);
    EXPECT_THROW(continuity_residual(a, b, a), AlignmentError);
    EXPECT_THROW(continuity_residual(a, a, a), AlignmentError);
}

TEST(Conservation, ThousandStepsAllBoundaries) {
    for (bool harmonic : {false, true}) {
        for (auto b : {Boundary::dirichlet, Boundary::periodic}) {
            EXPECT_LE(scenario::probability_drift(harmonic, b, 1000), 1e-10);
        }
    }
}

TEST(ProductRule, DensityDerivativeFromWaveDerivative) {
    std::vector<double> err, h;
    const auto c = line_chart(-6, 6, 600);
    const auto psi = gaussian_packet(c, -0.5, 0.6, 2.0);
    const auto v = PotentialOnCurve::harmonic(c, 1.0, 0.0);
    for (double dt : {4e-2, 2e-2, 1e-2}) {
        Evolver ev(psi, &v, dt);
        ev.step(static_cast<std::size_t>(std::llround(0.2 / dt)));
        const auto a = ev.snapshot();
        ev.step();
        const auto m = ev.snapshot();
        ev.step();
        const auto z = ev.snapshot();
        double e = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double drho = (std::norm(z.field[i]) - std::norm(a.field[i])) / (2 * dt);
            const Complex dpsi = (z.field[i] - a.field[i]) / (2 * dt);
            const double rule = 2.0 * std::real(std::conj(m.field[i]) * dpsi);
            e = std::max(e, std::abs(drho - rule));
        }
        err.push_back(e);
        h.push_back(dt);
    }
    for (double o : oracle::pairwise_orders(err, h)) EXPECT_GE(o, 1.9);
}

TEST(Hermiticity, ExpectationOfHamiltonianIsReal) {
    for (const auto& c : {koch_chart(5), line_chart(-3, 3, 500)}) {
        auto psi = random_smooth(c, 21);
        const auto v = PotentialOnCurve::harmonic(c, 1.7, 0.5 * (c->front() + c->back()));
        const auto hp = hamiltonian_apply(psi, &v);
        std::vector<Complex> prod(psi.size());
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(psi.field[i]) * hp.field[i];
        const Complex e = falpha_integral_nodes(ComplexField(c, prod), 0, prod.size() - 1);
        EXPECT_LT(std::abs(e.imag()), 1e-10 * std::abs(e.real()));
    }
}

TEST(ResidualNorms, MaxAndL2) {
    const auto c = line_chart(0, 2, 4);
    const RealField r(c, {0.0, 1.0, 3.0, 1.0, 0.0});
    const auto n = residual_norms(r);
    EXPECT_EQ(n.max, 3.0);
    // trapezoid of r^2 with h = 0.5: 0.5 * (0/2 + 1 + 9 + 1 + 0/2)
    EXPECT_NEAR(n.l2, std::sqrt(5.5), 1e-15);
    EXPECT_EQ(residual_norms(r, 0, 1).max, 1.0);
}
