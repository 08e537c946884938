#pragma once

#include "cavbranch/params.hpp"

#include <array>
#include <functional>

namespace cavbranch {

// Excited-state amplitude in the Laplace domain:
//   alpha(z) = 1 / { z + G^2/(z + i Delta) + k g_b/(z + k - i d_b) + k g_c/(z + k - i d_c) }
// Throws NumericalError("self-energy pole") when z hits the pole of a coupled
// self-energy term and NumericalError("resolvent pole") when the denominator vanishes.
cplx resolvent(cplx z, const SystemParams& params);

// The bracketed denominator of resolvent(), evaluated term by term.
cplx resolvent_denominator(cplx z, const SystemParams& params);

using ResolventFn = std::function<cplx(cplx, const SystemParams&)>;

// Monic quartic c0 + c1 z + c2 z^2 + c3 z^3 + z^4.
struct QuarticPolynomial
{
    std::array<cplx, 5> coeffs{};

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;
    // sum_k |c_k| |z|^k, the roundoff scale of evaluating the polynomial at z
    double magnitude_bound(cplx z) const;
};

// Resolvent denominator multiplied through by (z + i Delta)(z + k - i d_b)(z + k - i d_c).
QuarticPolynomial denominator_polynomial(const SystemParams& params);

// The cubic (z + i Delta)(z + k - i d_b)(z + k - i d_c) that was cleared; the
// resolvent equals numerator_cubic(z) / denominator_polynomial(z).
cplx numerator_cubic(cplx z, const SystemParams& params);

struct Pole
{
    cplx root;
    cplx residue; // residue of the resolvent at this root
};

struct PoleSet
{
    std::array<Pole, 4> poles{};
    bool degenerate = false;
    double min_separation = 0.0;
};

struct RootOptions
{
    double tol_root = 1e-10;
    double separation_factor = 1e-7;
    int max_iterations = 500;
};

// Roots of denominator_polynomial, sorted by decreasing real part (slowest first).
// Spurious roots of cancelled factors (for example z = -i Delta at G = 0) are kept
// and carry a vanishing residue.
PoleSet find_poles(const SystemParams& params, const RootOptions& opts = {});

} // namespace cavbranch
