#include "specdec/cost_model.hpp"

namespace specdec {

namespace {
constexpr double kGB = 1e9;

void require_k(int k) {
    if (k < 1) throw DomainError("draft length k must be >= 1");
}

void require_alpha(double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw DomainError("alpha must lie in [0, 1]");
}
} // namespace

void CostParams::validate() const {
    if (target_bytes <= 0 || draft_bytes <= 0 || bandwidth <= 0 || c0 <= 0 || c1 <= 0) {
        throw DomainError("cost parameters must be strictly positive");
    }
    if (rewind_surcharge < 0) throw DomainError("rewind_surcharge must be >= 0");
}

CostParams CostParams::m2_pro_defaults() {
    CostParams p;
    p.target_bytes = 11.32 * kGB;
    p.draft_bytes = 0.8 * kGB;
    p.bandwidth = 200.0 * kGB;
    p.c0 = 0.011;
    p.c1 = 0.19 * p.t_base(); // beta() == 0.19 at this operating point
    p.rewind_surcharge = 0.0;
    return p;
}

double t_cycle(const CostParams& params, int k) {
    require_k(k);
    const double kd = static_cast<double>(k);
    return (kd + 1.0) * params.draft_pass_seconds() + params.target_bytes / params.bandwidth +
           params.c0 + params.c1 * kd * kd + params.rewind_surcharge;
}

double speedup(const CostParams& params, double alpha, int k) {
    require_k(k);
    require_alpha(alpha);
    return (1.0 + alpha * static_cast<double>(k)) * params.t_base() / t_cycle(params, k);
}

double speedup_ratio_form(double r, double beta, double alpha, int k) {
    require_k(k);
    require_alpha(alpha);
    const double kd = static_cast<double>(k);
    return (1.0 + alpha * kd) / ((kd + 1.0) * r + 1.0 + beta * kd * kd);
}

Breakeven breakeven_exact(double r, double beta, int k) {
    require_k(k);
    const double kd = static_cast<double>(k);
    Breakeven be;
    be.alpha = ((kd + 1.0) * r + beta * kd * kd) / kd;
    be.reachable = be.alpha <= 1.0;
    return be;
}

Breakeven breakeven_exact(const CostParams& params, int k) {
    require_k(k);
    Breakeven be;
    be.alpha = (t_cycle(params, k) / params.t_base() - 1.0) / static_cast<double>(k);
    be.reachable = be.alpha <= 1.0;
    return be;
}

Breakeven breakeven_approx(double r, double beta, int k) {
    require_k(k);
    Breakeven be;
    be.alpha = r + beta * static_cast<double>(k);
    be.reachable = be.alpha <= 1.0;
    return be;
}

double fit_beta(const std::vector<std::pair<int, double>>& observed, double r) {
    if (observed.empty()) throw DomainError("fit_beta needs at least one observation");
    double num = 0.0;
    double den = 0.0;
    for (const auto& [k, alpha_be] : observed) {
        require_k(k);
        if (alpha_be <= 0.0 || alpha_be > 2.0) {
            throw DomainError("observed break-even must lie in (0, 2]");
        }
        const double kd = static_cast<double>(k);
        num += kd * (alpha_be - r);
        den += kd * kd;
    }
    return num / den;
}

double modeled_tps(const CostParams& params, double alpha, int k) {
    require_alpha(alpha);
    return (1.0 + alpha * static_cast<double>(k)) / t_cycle(params, k);
}

double baseline_tps(const CostParams& params) {
    return 1.0 / params.t_base();
}

double energy_per_token(double power_watts, double tps) {
    if (power_watts <= 0 || tps <= 0) throw DomainError("power and throughput must be positive");
    return power_watts / tps;
}

} // namespace specdec
