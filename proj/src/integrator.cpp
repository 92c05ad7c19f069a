#include "mdebif/integrator.hpp"

#include <cmath>

#include "mdebif/quadrature.hpp"

namespace mdebif {

Integrator::Integrator(ExprPtr density, std::vector<Jump> jumps, double period)
    : density_(std::move(density)), jumps_(std::move(jumps)), period_(period) {
    if (!(period_ > 0.0)) throw ValidationError("integrator period must be positive");
    if (!density_) throw ValidationError("integrator density expression missing");
    if (uses_state(density_) || uses_lambda(density_))
        throw ValidationError("integrator density may depend on t only");
    double prev = 0.0;
    for (const Jump& j : jumps_) {
        if (!(j.time > 0.0 && j.time < period_))
            throw ValidationError("jump time " + std::to_string(j.time) +
                                  " must lie strictly inside (0, T)");
        if (!(j.time > prev))
            throw ValidationError("jump times must be strictly increasing");
        if (j.size == 0.0) throw ValidationError("zero-size jumps must not be stored");
        prev = j.time;
    }
    has_continuous_part_ = !density_->is_constant(0.0);
}

Integrator Integrator::zero(double period) {
    return Integrator(make_constant(0.0), {}, period);
}

Integrator Integrator::identity(double period) {
    return Integrator(make_constant(1.0), {}, period);
}

double Integrator::density_at(double t) const {
    EvalContext ctx;
    ctx.t = t;
    return evaluate(density_, ctx);
}

double Integrator::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    double v = 0.0;
    if (has_continuous_part_)
        v = integrate([this](double s) { return density_at(s); }, 0.0, t, 1e-12);
    for (const Jump& j : jumps_) {
        if (j.time >= t) break;
        v += j.size;
    }
    return v;
}

double Integrator::variation(double tol) const {
    double v = 0.0;
    if (has_continuous_part_) {
        auto dens = [this](double s) { return density_at(s); };
        const std::vector<double> crossings = find_sign_changes(dens, 0.0, period_);
        v = integrate_split([&dens](double s) { return std::abs(dens(s)); }, 0.0, period_, tol,
                            crossings);
    }
    for (const Jump& j : jumps_) v += std::abs(j.size);
    return v;
}

std::vector<double> Integrator::jump_times() const {
    std::vector<double> ts;
    ts.reserve(jumps_.size());
    for (const Jump& j : jumps_) ts.push_back(j.time);
    return ts;
}

} // namespace mdebif
