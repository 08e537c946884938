#include "cavbranch/model.hpp"
#include "cavbranch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace cavbranch {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Points where the three self-energy terms blow up.
struct SelfEnergyPoles
{
    cplx drive;     // -i Delta
    cplx channel_b; // -k + i d_b
    cplx channel_c; // -k + i d_c
};

SelfEnergyPoles self_energy_poles(const SystemParams& p)
{
    return {-I * p.drive_detuning, cplx(-p.kappa, p.delta_b), cplx(-p.kappa, p.delta_c)};
}

bool coincides(cplx z, cplx pole)
{
    return std::abs(z - pole) <= 8.0 * kEps * std::max({1.0, std::abs(z), std::abs(pole)});
}

using Poly = std::vector<cplx>; // ascending powers

Poly multiply(const Poly& a, const Poly& b)
{
    Poly out(a.size() + b.size() - 1, cplx{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

Poly linear(cplx shift) { return {shift, cplx(1.0)}; } // z + shift

void accumulate(Poly& into, const Poly& term, double weight)
{
    for (std::size_t i = 0; i < term.size(); ++i)
        into[i] += weight * term[i];
}

} // namespace

cplx resolvent_denominator(cplx z, const SystemParams& p)
{
    const auto poles = self_energy_poles(p);
    cplx d = z;
    if (p.drive_g > 0.0) {
        if (coincides(z, poles.drive))
            throw NumericalError("self-energy pole");
        d += p.drive_g * p.drive_g / (z + I * p.drive_detuning);
    }
    if (p.gamma_b > 0.0) {
        if (coincides(z, poles.channel_b))
            throw NumericalError("self-energy pole");
        d += p.kappa * p.gamma_b / (z + p.kappa - I * p.delta_b);
    }
    if (p.gamma_c > 0.0) {
        if (coincides(z, poles.channel_c))
            throw NumericalError("self-energy pole");
        d += p.kappa * p.gamma_c / (z + p.kappa - I * p.delta_c);
    }
    return d;
}

cplx resolvent(cplx z, const SystemParams& p)
{
    const cplx d = resolvent_denominator(z, p);
    if (!(std::abs(d) >= std::numeric_limits<double>::min()))
        throw NumericalError("resolvent pole");
    return 1.0 / d;
}

cplx QuarticPolynomial::operator()(cplx z) const
{
    cplx acc = coeffs[4];
    for (int k = 3; k >= 0; --k)
        acc = acc * z + coeffs[k];
    return acc;
}

cplx QuarticPolynomial::derivative(cplx z) const
{
    cplx acc = 4.0 * coeffs[4];
    for (int k = 3; k >= 1; --k)
        acc = acc * z + static_cast<double>(k) * coeffs[k];
    return acc;
}

double QuarticPolynomial::magnitude_bound(cplx z) const
{
    const double r = std::abs(z);
    double acc = std::abs(coeffs[4]);
    for (int k = 3; k >= 0; --k)
        acc = acc * r + std::abs(coeffs[k]);
    return acc;
}

QuarticPolynomial denominator_polynomial(const SystemParams& params)
{
    const auto& p = validate(params);
    const Poly drive = linear(I * p.drive_detuning);
    const Poly cav_b = linear(p.kappa - I * p.delta_b);
    const Poly cav_c = linear(p.kappa - I * p.delta_c);

    Poly total = multiply(multiply(multiply(Poly{cplx{}, cplx(1.0)}, drive), cav_b), cav_c);
    Poly lower(5, cplx{});
    accumulate(lower, multiply(cav_b, cav_c), p.drive_g * p.drive_g);
    accumulate(lower, multiply(drive, cav_c), p.kappa * p.gamma_b);
    accumulate(lower, multiply(drive, cav_b), p.kappa * p.gamma_c);
    for (std::size_t i = 0; i < lower.size(); ++i)
        total[i] += lower[i];

    QuarticPolynomial q;
    std::copy(total.begin(), total.end(), q.coeffs.begin());
    q.coeffs[4] = 1.0;
    return q;
}

cplx numerator_cubic(cplx z, const SystemParams& p)
{
    return (z + I * p.drive_detuning) * (z + p.kappa - I * p.delta_b) *
           (z + p.kappa - I * p.delta_c);
}

PoleSet find_poles(const SystemParams& params, const RootOptions& opts)
{
    const auto& p = validate(params);
    const QuarticPolynomial poly = denominator_polynomial(p);

    // Aberth-Ehrlich simultaneous iteration from a circle enclosing all roots.
    double radius = 0.0;
    for (int k = 0; k < 4; ++k)
        radius = std::max(radius, std::pow(std::abs(poly.coeffs[k]), 1.0 / (4 - k)));
    radius = 2.0 * std::max(radius, 1e-3 * p.kappa);
    const cplx centre = -poly.coeffs[3] / 4.0;

    std::array<cplx, 4> z;
    for (int k = 0; k < 4; ++k)
        z[k] = centre + std::polar(radius, 0.4 + k * std::numbers::pi / 2.0);

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        double largest_step = 0.0;
        for (int k = 0; k < 4; ++k) {
            const cplx pk = poly(z[k]);
            if (pk == cplx{})
                continue;
            const cplx ratio = pk / poly.derivative(z[k]);
            cplx repulsion{};
            for (int j = 0; j < 4; ++j)
                if (j != k)
                    repulsion += 1.0 / (z[k] - z[j]);
            const cplx step = ratio / (1.0 - ratio * repulsion);
            if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
                z[k] -= step;
                largest_step = std::max(largest_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
            }
        }
        if (largest_step < 4.0 * kEps)
            break;
    }

    // Newton polish, keeping a step only when it lowers the residual.
    for (auto& root : z) {
        for (int iter = 0; iter < 8; ++iter) {
            const cplx value = poly(root);
            const cplx slope = poly.derivative(root);
            if (value == cplx{} || slope == cplx{})
                break;
            const cplx candidate = root - value / slope;
            if (!(std::abs(poly(candidate)) < std::abs(value)))
                break;
            root = candidate;
        }
        const double residual = std::abs(poly(root));
        if (!(residual <= opts.tol_root * std::max(1.0, poly.magnitude_bound(root))))
            throw NumericalError("root refinement failed");
    }

    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });

    PoleSet set;
    set.min_separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            set.min_separation = std::min(set.min_separation, std::abs(z[i] - z[j]));
    const double threshold = opts.separation_factor * std::max(1.0, frequency_scale(p));
    set.degenerate = set.min_separation < threshold;

    for (int k = 0; k < 4; ++k) {
        set.poles[k].root = z[k];
        set.poles[k].residue = numerator_cubic(z[k], p) / poly.derivative(z[k]);
    }
    return set;
}

} // namespace cavbranch
