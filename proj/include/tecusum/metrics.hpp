#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tecusum/fusion.hpp"
#include "tecusum/scenario.hpp"

namespace tecusum {

/// Outcome of one simulated run of one detector.
struct RunRecord {
    std::optional<SampleIndex> alarm_time;
    SampleIndex exposure_start = 0;
    /// One past the last sample at which any sensor is exposed.
    SampleIndex exposure_end = 0;
    std::optional<SampleIndex> nu_hat;
    std::uint64_t seed = 0;
};

enum class CurveMode { include_pre_change, exclude_pre_change };

CurveMode curve_mode_from_string(const std::string& s);
std::string to_string(CurveMode mode);

struct CurveSeries {
    std::string name;
    std::vector<double> values;
};

/// One or more cumulative-rate series over a shared time axis measured
/// relative to the start of exposure: series value at index i corresponds to
/// t = t_begin + i.
struct CurveSet {
    std::int64_t t_begin = 0;
    std::vector<CurveSeries> series;

    std::string scenario_id;
    std::uint64_t runs = 0;
    double arl_target = 0.0;
    std::vector<std::pair<std::string, double>> thresholds;

    std::size_t length() const { return series.empty() ? 0 : series.front().values.size(); }
    const CurveSeries& find(const std::string& name) const;
    /// Series value at relative time t (clamped to the axis ends).
    double value_at(const std::string& name, std::int64_t t) const;
};

/// Fraction of runs alarming at or before exposure_start + t, for t spanning
/// the whole horizon (the axis starts at -exposure_start). In exclude mode,
/// runs that alarm strictly before the exposure begins are dropped from both
/// numerator and denominator; the include mode counts them as detections the
/// way the headline comparisons do.
CurveSet detection_rate_curve(std::span<const RunRecord> records, std::size_t horizon,
                              CurveMode mode);

/// Mean detection delay over runs alarming at or after exposure_start.
/// Runs that never alarm are censored, not imputed; pre-change alarms are
/// counted separately.
struct DelaySummary {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t detecting = 0;
    std::uint64_t censored = 0;
    std::uint64_t pre_change_alarms = 0;
};

/// Empty when no run alarms at or after exposure_start.
std::optional<DelaySummary> average_delay(std::span<const RunRecord> records);

/// A detector with a threshold already fixed (by calibration or by hand).
struct CalibratedMethod {
    std::string name;
    DetectorConfig config;
    double threshold = 0.0;
};

struct MethodRecords {
    std::string name;
    std::vector<RunRecord> records;
};

struct SpecResult {
    ScenarioSpec spec;
    std::vector<MethodRecords> per_method;
};

struct CompareOptions {
    std::uint64_t runs = 1000;
    std::uint64_t seed = 0;
    int jobs = 0;
};

/// Runs every method over every scenario spec on shared observation
/// matrices: for a given (spec, replica) all methods see the exact same
/// data, so curve differences are attributable to the rules alone.
/// Deterministic given the seed; replica work is farmed out to a worker
/// pool with per-replica sub-seeds.
std::vector<SpecResult> compare_methods(std::span<const ScenarioSpec> specs,
                                        std::span<const CalibratedMethod> methods,
                                        const CompareOptions& options);

/// Multi-series curve set for one spec's results.
CurveSet build_curves(const SpecResult& result, CurveMode mode,
                      std::span<const CalibratedMethod> methods, double arl_target);

} // namespace tecusum
