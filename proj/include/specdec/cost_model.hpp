#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specdec/errors.hpp"

namespace specdec {

/// Bandwidth-bound cycle cost parameters. A speculative cycle is k+1 draft
/// passes plus one batched verification pass; every pass streams the full
/// weight set, so pass time is size / bandwidth plus fixed overheads.
struct CostParams {
    double target_bytes = 0;     // S_T
    double draft_bytes = 0;      // S_D
    double bandwidth = 0;        // bytes per second
    double c0 = 0;               // seconds, per-token overhead beyond streaming
    double c1 = 0;               // seconds, coefficient of the k^2 overhead term
    double rewind_surcharge = 0; // seconds per cycle; models cache rewinding

    void validate() const;

    /// Autoregressive seconds per token: S_T / BW + c0.
    double t_base() const { return target_bytes / bandwidth + c0; }

    /// Draft-to-target size ratio r = S_D / S_T, the headline ratio reported
    /// alongside fitted coefficients.
    double size_ratio() const { return draft_bytes / target_bytes; }

    /// Seconds to stream the drafter once: S_D / BW.
    double draft_pass_seconds() const { return draft_bytes / bandwidth; }

    /// Drafter pass time relative to one baseline token. Equals size_ratio()
    /// exactly when c0 == 0; this is the ratio under which the timing form
    /// and the normalized form of the speedup agree identically.
    double effective_draft_ratio() const { return draft_pass_seconds() / t_base(); }

    /// Normalized overhead coefficient beta = c1 / t_base.
    double beta() const { return c1 / t_base(); }

    /// M2 Pro operating point: 11.32 GB target, 0.8 GB drafter, 200 GB/s,
    /// 11 ms fixed overhead, c1 chosen so beta is 0.19.
    static CostParams m2_pro_defaults();
};

struct HardwareProfile {
    std::string name = "M2 Pro";
    double bandwidth_gbps = 200.0; // decimal GB/s
    double chip_watts = 30.0;
    double system_watts = 40.0;
};

/// Seconds for one speculative cycle of draft length k:
/// (k+1) * S_D/BW + S_T/BW + c0 + c1 * k^2 + rewind_surcharge.
double t_cycle(const CostParams& params, int k);

/// Timing form of the speedup: (1 + alpha*k) * t_base / t_cycle(k).
double speedup(const CostParams& params, double alpha, int k);

/// Normalized form: (1 + alpha*k) / ((k+1)*r + 1 + beta*k^2).
double speedup_ratio_form(double r, double beta, double alpha, int k);

struct Breakeven {
    double alpha = 0;
    bool reachable = true; // false when alpha > 1: no acceptance rate suffices
};

/// Exact solve of speedup == 1: alpha = ((k+1)*r + beta*k^2) / k.
Breakeven breakeven_exact(double r, double beta, int k);

/// Exact solve in raw-parameter form (covers a nonzero rewind surcharge):
/// alpha = (t_cycle(k) / t_base - 1) / k.
Breakeven breakeven_exact(const CostParams& params, int k);

/// Linear approximation alpha_be ~= r + beta * k.
Breakeven breakeven_approx(double r, double beta, int k);

/// Least-squares fit of beta in alpha_be = r + beta * k over the observed
/// (k, alpha_be) points, with the intercept pinned at r. One observation
/// solves exactly.
double fit_beta(const std::vector<std::pair<int, double>>& observed, double r);

/// Tokens per second for a cycle: (1 + alpha*k) / t_cycle(k).
double modeled_tps(const CostParams& params, double alpha, int k);

/// Autoregressive tokens per second: 1 / t_base.
double baseline_tps(const CostParams& params);

/// Joules per generated token: watts / tps.
double energy_per_token(double power_watts, double tps);

} // namespace specdec
