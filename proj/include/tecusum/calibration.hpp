#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tecusum/fusion.hpp"
#include "tecusum/metrics.hpp"

namespace tecusum {

/// Monte Carlo estimate of the average run length to false alarm.
struct ArlEstimate {
    double mean_run_length = 0.0;
    double standard_error = 0.0;
    std::uint64_t intervals_observed = 0;
};

struct ArlOptions {
    /// Minimum alarms to average over (>= 30).
    std::uint64_t min_intervals = 200;
    /// Longest single inter-alarm wait tolerated before giving up.
    std::uint64_t interval_budget = 3'000'000;
    /// Cap on total samples across the whole estimate; 0 = uncapped.
    std::uint64_t total_budget = 0;
    /// Independent noise streams the intervals are collected from. The
    /// partition of work is fixed by this value, not by the thread count,
    /// so results are identical for any jobs setting.
    std::size_t replicas = 16;
    int jobs = 0;
};

/// Cyclical scheme: stream pure noise through the detector; on each alarm
/// record the inter-alarm interval, reset every local state, and continue.
/// The first interval of each replica is discarded as burn-in; intervals are
/// then i.i.d. fresh-start run lengths and their mean estimates the ARL2FA.
/// Deterministic given (config, h, seed, options). Throws BudgetExceeded
/// (with an ARL lower bound) when a budget runs out first.
ArlEstimate estimate_arl(const DetectorConfig& config, double h, std::uint64_t seed,
                         const ArlOptions& options = {});

struct CalibrationOptions {
    double rel_tol = 0.05;
    std::uint64_t min_intervals = 200;
    std::size_t replicas = 16;
    int jobs = 0;
    std::uint64_t max_iterations = 48;
    double initial_h = 1.0;
    /// 0 = derive from the target (100 x target per interval, and a total
    /// cap that comfortably covers estimates up to a few times the target).
    std::uint64_t interval_budget = 0;
    std::uint64_t total_budget = 0;
};

struct CalibrationResult {
    double threshold = 0.0;
    ArlEstimate achieved;
    double target_arl = 0.0;
    std::uint64_t iterations = 0;
    /// False when the iteration cap was reached first; the best bracket
    /// midpoint seen is returned in that case.
    bool converged = false;
};

/// Finds the detection threshold h whose ARL2FA matches the target within
/// rel_tol: geometric bracket expansion followed by bisection, with common
/// random numbers (the same seed for every ARL estimate) so ARL(h) is a
/// stable, near-monotone function of h along the search.
CalibrationResult calibrate_threshold(const DetectorConfig& config, double target_arl,
                                      std::uint64_t seed, const CalibrationOptions& options = {});

/// Empirical cumulative false-alarm probability: fraction of pure-noise runs
/// alarming at or before sample t, for t in [0, horizon).
CurveSet false_alarm_curve(const DetectorConfig& config, double h, std::size_t horizon,
                           std::uint64_t runs, std::uint64_t seed, int jobs = 0);

/// One grid point of an alpha search.
struct AlphaTuneResult {
    double alpha = 0.0;
    double threshold = 0.0;
    /// Mean delay over runs with a random affected-sensor count;
    /// non-detections are charged the full post-onset horizon.
    double mean_delay = 0.0;
};

/// Grid search over the adaptive-censoring factor: each candidate alpha is
/// calibrated to the target ARL, then scored by mean detection delay over
/// synchronized scenarios whose affected count is drawn uniformly from
/// 1..num_sensors. Returns one entry per candidate, in input order.
std::vector<AlphaTuneResult> tune_alpha(const DetectorConfig& base, std::span<const double> alphas,
                                        double target_arl, const ScenarioSpec& sync_template,
                                        std::uint64_t runs, std::uint64_t seed,
                                        const CalibrationOptions& cal_options = {});

} // namespace tecusum
