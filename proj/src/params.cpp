#include "cavbranch/params.hpp"
#include "cavbranch/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cavbranch {

const SystemParams& validate(const SystemParams& p)
{
    struct Field
    {
        const char* name;
        double value;
    };
    const Field fields[] = {
        {"gamma_b", p.gamma_b}, {"gamma_c", p.gamma_c},   {"delta_b", p.delta_b},
        {"delta_c", p.delta_c}, {"drive_g", p.drive_g},   {"drive_detuning", p.drive_detuning},
        {"kappa", p.kappa},
    };
    for (const auto& f : fields) {
        if (!std::isfinite(f.value))
            throw ValidationError(std::string(f.name) + " must be finite");
    }
    if (!(p.kappa > 0.0))
        throw ValidationError("kappa must be > 0");
    if (p.gamma_b < 0.0)
        throw ValidationError("gamma_b must be ≥ 0");
    if (p.gamma_c < 0.0)
        throw ValidationError("gamma_c must be ≥ 0");
    if (p.drive_g < 0.0)
        throw ValidationError("drive_g must be ≥ 0");
    return p;
}

const SystemParams& validate_decaying(const SystemParams& p)
{
    validate(p);
    if (!(p.gamma_b + p.gamma_c > 0.0))
        throw ValidationError("gamma_b + gamma_c must be > 0");
    return p;
}

double channel_coupling(const SystemParams& p, Channel ch)
{
    return std::sqrt(p.kappa * channel_gamma(p, ch));
}

double frequency_scale(const SystemParams& p)
{
    return std::max({p.kappa, std::abs(p.delta_b), std::abs(p.delta_c), p.drive_g,
                     std::abs(p.drive_detuning)});
}

} // namespace cavbranch
