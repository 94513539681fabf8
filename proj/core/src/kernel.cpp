#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <sstream>

#include "compensated_sum.hpp"
#include "fracqm/errors.hpp"
#include "fracqm/quantum_dynamics.hpp"

namespace fracqm {

void KernelStep::validate() const {
    if (!(epsilon > 0.0)) throw DomainError("kernel step epsilon must be positive");
    if (!(damping_eta > 0.0 && damping_eta <= 1e-2)) {
        throw DomainError("kernel damping eta must lie in (0, 1e-2]");
    }
}

Complex KernelStep::normalization(const PhysicalConstants& c) const {
    return std::sqrt(Complex(0.0, 2.0 * std::numbers::pi * c.hbar * epsilon / c.mass));
}

Complex KernelStep::damped_normalization(const PhysicalConstants& c) const {
    const Complex damped_eps = epsilon * Complex(1.0, -damping_eta);
    return std::sqrt(Complex(0.0, 2.0 * std::numbers::pi * c.hbar / c.mass) * damped_eps);
}

namespace {

struct RawMoments {
    Complex i0, i1, i2;
};

// Trapezoid sums of u^p exp(q u^2), q = (i - eta) / (1 + eta^2), over the
// lattice u = k h with h^2 = 2 pi (1 + eta^2) / modulus. The oscillating
// phase is then 2 pi (k^2 mod modulus) / modulus, reduced exactly in integers;
// evaluating q u^2 in floating point loses ~1e-11 rad at |u| ~ 600, which the
// cancellation in the u^2 moment amplifies to ~1e-8.
RawMoments lattice_sums(double eta, std::int64_t modulus, std::int64_t count) {
    const double h = std::sqrt(2.0 * std::numbers::pi * (1.0 + eta * eta) / static_cast<double>(modulus));
    const double decay = eta / (1.0 + eta * eta);
    detail::CompensatedSum<Complex> s0, s1, s2;
    for (std::int64_t k = -count; k <= count; ++k) {
        const double u = static_cast<double>(k) * h;
        const std::int64_t r = (k * k) % modulus;
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(modulus);
        const Complex e = std::exp(-decay * u * u) * Complex(std::cos(phase), std::sin(phase));
        s0.add(e);
        s1.add(u * e);
        s2.add(u * u * e);
    }
    return {s0.value() * h, s1.value() * h, s2.value() * h};
}

RawMoments damped_moment_integrals(double eta, double& step_out) {
    const double decay = eta / (1.0 + eta * eta);
    // truncate where |exp(q u^2)| < e^-40; the lattice aliasing term for a
    // step h is bounded by exp(-eta (2 pi / h)^2 / 4) < e^-40 as well.
    const double cutoff = std::sqrt(40.0 / decay);
    const double target = 2.0 * std::numbers::pi / std::sqrt(160.0 / eta);
    const auto modulus = static_cast<std::int64_t>(
        std::ceil(2.0 * std::numbers::pi * (1.0 + eta * eta) / (target * target)));
    const double coarse = std::sqrt(2.0 * std::numbers::pi * (1.0 + eta * eta) / static_cast<double>(modulus));
    const auto count = static_cast<std::int64_t>(std::ceil(cutoff / coarse));

    // halving the step multiplies the modulus by four
    const RawMoments c = lattice_sums(eta, modulus, count);
    const RawMoments f = lattice_sums(eta, 4 * modulus, 2 * count);
    const double change = std::max(std::abs(c.i0 - f.i0) / std::abs(f.i0), std::abs(c.i2 - f.i2) / std::abs(f.i2));
    if (!(change < 1e-10)) {
        std::ostringstream msg;
        msg << "kernel moment quadrature did not converge at eta = " << eta
            << " (relative change " << change << " between h and h/2)";
        throw QuadratureError(change, msg.str());
    }
    step_out = 0.5 * coarse;
    return f;
}

}  // namespace

KernelMoments kernel_moments(const KernelStep& step, const PhysicalConstants& c) {
    step.validate();
    c.validate();
    // delta = ell * u with ell = sqrt(2 hbar eps / m); A = ell sqrt(i pi).
    const double ell = std::sqrt(2.0 * c.hbar * step.epsilon / c.mass);
    const Complex root_i_pi = std::sqrt(Complex(0.0, std::numbers::pi));

    KernelMoments out;
    const double etas[2] = {step.damping_eta, 0.5 * step.damping_eta};
    for (int j = 0; j < 2; ++j) {
        double h = 0.0;
        const RawMoments r = damped_moment_integrals(etas[j], h);
        out.raw_m0[j] = r.i0 / root_i_pi;
        out.raw_m1[j] = ell * r.i1 / root_i_pi;
        out.raw_m2[j] = ell * ell * r.i2 / (2.0 * root_i_pi);
        if (j == 1) out.quadrature_step = h;
    }
    // linear extrapolation in eta to eta = 0
    out.m0 = 2.0 * out.raw_m0[1] - out.raw_m0[0];
    out.m1 = 2.0 * out.raw_m1[1] - out.raw_m1[0];
    out.m2 = 2.0 * out.raw_m2[1] - out.raw_m2[0];
    return out;
}

}  // namespace fracqm
