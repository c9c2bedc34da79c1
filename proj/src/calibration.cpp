#include "tecusum/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tecusum/parallel.hpp"
#include "tecusum/rng.hpp"

namespace tecusum {

namespace {

struct ReplicaOutcome {
    std::vector<double> intervals; // kept (post burn-in) inter-alarm gaps
    std::uint64_t samples = 0;
    std::uint64_t alarms = 0;
    bool exhausted = false; // a budget ran out before the quota was met
};

ReplicaOutcome run_replica(const DetectorConfig& config, double h, std::uint64_t replica_seed,
                           std::uint64_t quota, std::uint64_t interval_budget,
                           std::uint64_t replica_sample_cap) {
    ReplicaOutcome out;
    out.intervals.reserve(quota);
    NormalRng rng(replica_seed);
    GlobalDetector detector(config, h);
    const std::size_t L = config.num_streams;
    const double mu0 = config.model.mu0;
    const double sigma = config.model.sigma;
    std::vector<double> row(L);

    std::uint64_t wait = 0;
    bool burn_in_done = false;
    while (out.intervals.size() < quota) {
        for (std::size_t l = 0; l < L; ++l) row[l] = mu0 + sigma * rng();
        detector.step(row);
        ++wait;
        ++out.samples;
        if (detector.alarm()) {
            ++out.alarms;
            if (burn_in_done)
                out.intervals.push_back(static_cast<double>(wait));
            else
                burn_in_done = true;
            detector.reset_states();
            wait = 0;
        } else if (wait >= interval_budget) {
            out.exhausted = true;
            return out;
        }
        if (replica_sample_cap != 0 && out.samples >= replica_sample_cap) {
            out.exhausted = true;
            return out;
        }
    }
    return out;
}

} // namespace

ArlEstimate estimate_arl(const DetectorConfig& config, double h, std::uint64_t seed,
                         const ArlOptions& options) {
    config.validate();
    if (!(h >= 0.0) || !std::isfinite(h))
        throw InputError("estimate_arl: threshold must be finite and nonnegative");
    if (options.min_intervals < 30)
        throw InputError("estimate_arl: min_intervals must be >= 30");
    if (options.replicas == 0) throw InputError("estimate_arl: replicas must be >= 1");
    if (options.interval_budget == 0) throw InputError("estimate_arl: interval_budget must be >= 1");

    const std::size_t R = options.replicas;
    const std::uint64_t quota = (options.min_intervals + R - 1) / R;
    const std::uint64_t replica_cap = options.total_budget == 0 ? 0 : options.total_budget / R;

    std::vector<ReplicaOutcome> outcomes(R);
    parallel_for(R, options.jobs, [&](std::size_t r) {
        const std::uint64_t replica_seed = derive_seed(seed, {seed_tag::calibration, r});
        outcomes[r] =
            run_replica(config, h, replica_seed, quota, options.interval_budget, replica_cap);
    });

    std::uint64_t total_samples = 0;
    std::uint64_t total_alarms = 0;
    bool exhausted = false;
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t count = 0;
    for (const ReplicaOutcome& o : outcomes) {
        total_samples += o.samples;
        total_alarms += o.alarms;
        exhausted = exhausted || o.exhausted;
        for (double v : o.intervals) {
            sum += v;
            sumsq += v * v;
            ++count;
        }
    }
    if (exhausted) {
        const double bound =
            static_cast<double>(total_samples) / static_cast<double>(total_alarms + 1);
        std::ostringstream msg;
        msg << "estimate_arl: sample budget exhausted at h = " << h << " (ARL > " << bound << ")";
        throw BudgetExceeded(msg.str(), bound);
    }

    ArlEstimate est;
    est.intervals_observed = count;
    est.mean_run_length = sum / static_cast<double>(count);
    if (count > 1) {
        const double k = static_cast<double>(count);
        const double var = std::max(0.0, (sumsq - k * est.mean_run_length * est.mean_run_length) /
                                             (k - 1.0));
        est.standard_error = std::sqrt(var / k);
    }
    return est;
}

CalibrationResult calibrate_threshold(const DetectorConfig& config, double target_arl,
                                      std::uint64_t seed, const CalibrationOptions& options) {
    if (!(target_arl > 0.0) || !std::isfinite(target_arl))
        throw InputError("calibrate_threshold: target ARL must be positive and finite");
    if (!(options.rel_tol > 0.0 && options.rel_tol < 1.0))
        throw InputError("calibrate_threshold: rel_tol must lie in (0, 1)");

    ArlOptions arl_opts;
    arl_opts.min_intervals = options.min_intervals;
    arl_opts.replicas = options.replicas;
    arl_opts.jobs = options.jobs;
    arl_opts.interval_budget = options.interval_budget != 0
                                   ? options.interval_budget
                                   : static_cast<std::uint64_t>(100.0 * target_arl);
    arl_opts.total_budget =
        options.total_budget != 0
            ? options.total_budget
            : static_cast<std::uint64_t>(4.0 * target_arl *
                                         static_cast<double>(options.min_intervals +
                                                             options.replicas));

    std::uint64_t iterations = 0;
    CalibrationResult best;
    best.target_arl = target_arl;
    best.threshold = std::numeric_limits<double>::quiet_NaN();
    double best_gap = std::numeric_limits<double>::infinity();

    // Evaluates ARL(h) with common random numbers. Budget exhaustion means
    // the run length at this h is far above the target, which is all the
    // bracket logic needs to know.
    const auto eval = [&](double h) -> std::optional<ArlEstimate> {
        ++iterations;
        try {
            const ArlEstimate est = estimate_arl(config, h, seed, arl_opts);
            const double gap = std::abs(est.mean_run_length - target_arl);
            if (gap < best_gap) {
                best_gap = gap;
                best.threshold = h;
                best.achieved = est;
            }
            return est;
        } catch (const BudgetExceeded&) {
            return std::nullopt;
        }
    };
    const auto within_tol = [&](const ArlEstimate& est) {
        return std::abs(est.mean_run_length - target_arl) <= options.rel_tol * target_arl;
    };
    const auto finish = [&](bool converged) {
        best.iterations = iterations;
        best.converged = converged;
        return best;
    };

    // Geometric bracket expansion around the initial guess.
    double lo = options.initial_h, hi = options.initial_h;
    std::optional<ArlEstimate> first = eval(options.initial_h);
    if (first && within_tol(*first)) return finish(true);
    const bool below = first && first->mean_run_length < target_arl;
    constexpr int kExpansionCap = 64;
    if (below) {
        int k = 0;
        for (; k < kExpansionCap; ++k) {
            hi *= 2.0;
            std::optional<ArlEstimate> est = eval(hi);
            if (est && within_tol(*est)) return finish(true);
            if (!est || est->mean_run_length >= target_arl) break;
            lo = hi;
        }
        if (k == kExpansionCap)
            throw CalibrationError("calibrate_threshold: failed to bracket the target from below");
    } else {
        int k = 0;
        for (; k < kExpansionCap; ++k) {
            lo *= 0.5;
            std::optional<ArlEstimate> est = eval(lo);
            if (est && within_tol(*est)) return finish(true);
            if (est && est->mean_run_length < target_arl) break;
            hi = lo;
        }
        if (k == kExpansionCap)
            throw CalibrationError("calibrate_threshold: failed to bracket the target from above");
    }

    // Bisection on [lo, hi].
    while (iterations < options.max_iterations && hi - lo > 1e-9 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        std::optional<ArlEstimate> est = eval(mid);
        if (est && within_tol(*est)) return finish(true);
        if (est && est->mean_run_length < target_arl)
            lo = mid;
        else
            hi = mid;
    }
    return finish(false);
}

CurveSet false_alarm_curve(const DetectorConfig& config, double h, std::size_t horizon,
                           std::uint64_t runs, std::uint64_t seed, int jobs) {
    config.validate();
    if (runs < 100) throw InputError("false_alarm_curve: need at least 100 runs");
    if (horizon == 0) throw InputError("false_alarm_curve: horizon must be >= 1");

    std::vector<RunRecord> records(runs);
    parallel_for(runs, jobs, [&](std::size_t r) {
        NormalRng rng(derive_seed(seed, {seed_tag::fa_curve, r}));
        GlobalDetector detector(config, h);
        const std::size_t L = config.num_streams;
        std::vector<double> row(L);
        RunRecord rec;
        rec.exposure_start = 0;
        rec.exposure_end = 0;
        rec.seed = r;
        for (std::size_t t = 0; t < horizon; ++t) {
            for (std::size_t l = 0; l < L; ++l)
                row[l] = config.model.mu0 + config.model.sigma * rng();
            detector.step(row);
            if (detector.alarm()) {
                rec.alarm_time = *detector.alarm();
                break;
            }
        }
        records[r] = rec;
    });
    CurveSet curve = detection_rate_curve(records, horizon, CurveMode::include_pre_change);
    curve.series.front().name = "false-alarm";
    curve.thresholds.emplace_back("h", h);
    return curve;
}

std::vector<AlphaTuneResult> tune_alpha(const DetectorConfig& base, std::span<const double> alphas,
                                        double target_arl, const ScenarioSpec& sync_template,
                                        std::uint64_t runs, std::uint64_t seed,
                                        const CalibrationOptions& cal_options) {
    if (base.rule.kind != FusionKind::censored_adaptive)
        throw ConfigError("tune_alpha: rule must be censored-adaptive");
    if (sync_template.stagger != 0)
        throw ConfigError("tune_alpha: template must be a synchronized scenario");

    std::vector<AlphaTuneResult> table;
    table.reserve(alphas.size());
    for (double alpha : alphas) {
        DetectorConfig cfg = base;
        cfg.rule.alpha = alpha;
        const CalibrationResult cal = calibrate_threshold(cfg, target_arl, seed, cal_options);

        std::vector<double> delays(runs, 0.0);
        parallel_for(runs, cal_options.jobs, [&](std::size_t r) {
            const std::uint64_t run_seed = derive_seed(seed, {seed_tag::scenario, r});
            // Affected count drawn uniformly in 1..L from the run seed, so
            // every alpha candidate faces the identical case mix.
            const std::uint64_t k = 1 + splitmix64(run_seed) % cfg.num_streams;
            ScenarioSpec spec = sync_template;
            spec.id = "tune";
            spec.affected.resize(k);
            for (std::uint64_t i = 0; i < k; ++i) spec.affected[i] = static_cast<std::uint32_t>(i);
            const ObservationMatrix matrix = generate(spec, run_seed);
            GlobalDetector detector(cfg, cal.threshold);
            for (std::size_t t = 0; t < matrix.horizon; ++t) {
                detector.step(matrix.row(t));
                if (detector.alarm()) break;
            }
            const std::uint64_t start = spec.exposure_start();
            if (detector.alarm() && *detector.alarm() >= start)
                delays[r] = static_cast<double>(*detector.alarm() - start);
            else
                delays[r] = static_cast<double>(spec.horizon - start);
        });
        double mean = 0.0;
        for (double d : delays) mean += d;
        mean /= static_cast<double>(runs);
        table.push_back({alpha, cal.threshold, mean});
    }
    return table;
}

} // namespace tecusum
