#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tecusum/local_detectors.hpp"

namespace tecusum {

enum class FusionKind { sum, max, censored_fixed, censored_adaptive };
enum class LocalStatistic { cusum, te_cusum, fma };

std::string to_string(FusionKind kind);
std::string to_string(LocalStatistic stat);
FusionKind fusion_kind_from_string(const std::string& s);
LocalStatistic local_statistic_from_string(const std::string& s);

/// How the per-stream statistics are aggregated into one decision variable.
/// alpha is read only for censored_adaptive (relative censoring at
/// alpha * max), c only for censored_fixed.
struct FusionRule {
    FusionKind kind = FusionKind::sum;
    LocalStatistic statistic = LocalStatistic::cusum;
    double alpha = 0.0;
    double c = 0.0;

    void validate() const;
};

/// One fused value plus the streams that survived censoring. For sum the
/// active set is every stream, for max the argmax.
struct FusedStatistic {
    double value = 0.0;
    std::vector<std::uint32_t> active;
};

/// Mean of all values. Errors on an empty list.
FusedStatistic fuse_sum(std::span<const double> values);
/// Maximum value; active set is the (first) argmax.
FusedStatistic fuse_max(std::span<const double> values);
/// Mean of the values >= c, normalized by their count. If no value passes,
/// falls back to max(values); that can only matter when every value is
/// negative, where no positive threshold can be crossed anyway.
FusedStatistic fuse_censored_fixed(std::span<const double> values, double c);
/// Censored mean with the relative threshold c_n = alpha * max(values).
/// Inclusion is non-strict, so alpha = 1 reduces to max and alpha = 0 to sum.
FusedStatistic fuse_censored_adaptive(std::span<const double> values, double alpha);

/// Dispatch on rule.kind.
FusedStatistic fuse(const FusionRule& rule, std::span<const double> values);

/// Value-only fast path for the per-sample loop; identical arithmetic to
/// fuse() without materializing the active set.
double fuse_value(const FusionRule& rule, std::span<const double> values);

/// Full multistream detector configuration: observation model (shared by
/// all streams), stream count, aggregation rule, and the moving-window
/// length when the local statistic is fma.
struct DetectorConfig {
    GaussianMeanShiftModel model;
    std::size_t num_streams = 1;
    FusionRule rule;
    std::size_t fma_window = 0;

    void validate() const;
};

/// Streams one observation vector at a time through L local detectors,
/// fuses them, and latches the first sample index where the fused value
/// exceeds the threshold. Stepping past the alarm is allowed (the statistic
/// keeps evolving, the alarm stays); reset_states() clears both the local
/// statistics and the latch for cyclical operation.
class GlobalDetector {
public:
    GlobalDetector(const DetectorConfig& config, double threshold);

    /// Consume one time sample (a vector of num_streams observations).
    /// Returns the fused statistic value at this sample.
    double step(std::span<const double> observations);

    void reset_states();

    const std::optional<SampleIndex>& alarm() const { return alarm_; }
    SampleIndex samples_seen() const { return n_; }
    double threshold() const { return threshold_; }
    const DetectorConfig& config() const { return config_; }

    /// Current per-stream statistic values (w, g, or z depending on the
    /// rule's local statistic).
    const std::vector<double>& local_values() const { return values_; }

    /// Fused statistic with active set, recomputed from the current locals.
    FusedStatistic fused() const;

    /// Change-point estimate for one stream.
    ChangePointEstimate stream_estimate(std::size_t stream) const;

    /// Index of the stream with the largest local statistic.
    std::size_t leading_stream() const;

private:
    DetectorConfig config_;
    double threshold_;
    std::vector<CusumState> cusum_;
    std::vector<TeCusumState> te_;
    std::vector<FmaState> fma_;
    std::vector<double> values_;
    std::optional<SampleIndex> alarm_;
    SampleIndex n_ = 0;
};

} // namespace tecusum
