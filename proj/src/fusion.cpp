#include "tecusum/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace tecusum {

std::string to_string(FusionKind kind) {
    switch (kind) {
    case FusionKind::sum: return "sum";
    case FusionKind::max: return "max";
    case FusionKind::censored_fixed: return "censored-fixed";
    case FusionKind::censored_adaptive: return "censored-adaptive";
    }
    return "?";
}

std::string to_string(LocalStatistic stat) {
    switch (stat) {
    case LocalStatistic::cusum: return "cusum";
    case LocalStatistic::te_cusum: return "te-cusum";
    case LocalStatistic::fma: return "fma";
    }
    return "?";
}

FusionKind fusion_kind_from_string(const std::string& s) {
    if (s == "sum") return FusionKind::sum;
    if (s == "max") return FusionKind::max;
    if (s == "censored-fixed") return FusionKind::censored_fixed;
    if (s == "censored-adaptive") return FusionKind::censored_adaptive;
    throw ConfigError("unknown fusion rule '" + s + "'");
}

LocalStatistic local_statistic_from_string(const std::string& s) {
    if (s == "cusum") return LocalStatistic::cusum;
    if (s == "te-cusum") return LocalStatistic::te_cusum;
    if (s == "fma") return LocalStatistic::fma;
    throw ConfigError("unknown local statistic '" + s + "'");
}

void FusionRule::validate() const {
    if (kind == FusionKind::censored_adaptive) {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw ConfigError("fusion rule: alpha must lie in [0, 1]");
    }
    if (kind == FusionKind::censored_fixed && !std::isfinite(c))
        throw ConfigError("fusion rule: c must be finite");
}

namespace {

double max_of(std::span<const double> values) {
    double m = values[0];
    for (double v : values.subspan(1)) m = std::max(m, v);
    return m;
}

// Censored mean over {l : values[l] >= cut}, with the max fallback when
// nothing passes. Shared by the fixed and adaptive rules so both paths do
// the exact same arithmetic.
double censored_mean_value(std::span<const double> values, double cut) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (v >= cut) {
            sum += v;
            ++count;
        }
    }
    if (count == 0) return max_of(values);
    return sum / static_cast<double>(count);
}

FusedStatistic censored_mean(std::span<const double> values, double cut) {
    FusedStatistic out;
    double sum = 0.0;
    for (std::size_t l = 0; l < values.size(); ++l) {
        if (values[l] >= cut) {
            sum += values[l];
            out.active.push_back(static_cast<std::uint32_t>(l));
        }
    }
    if (out.active.empty()) {
        return fuse_max(values);
    }
    out.value = sum / static_cast<double>(out.active.size());
    return out;
}

} // namespace

FusedStatistic fuse_sum(std::span<const double> values) {
    if (values.empty()) throw InputError("fuse_sum: empty value list");
    FusedStatistic out;
    double sum = 0.0;
    out.active.reserve(values.size());
    for (std::size_t l = 0; l < values.size(); ++l) {
        sum += values[l];
        out.active.push_back(static_cast<std::uint32_t>(l));
    }
    out.value = sum / static_cast<double>(values.size());
    return out;
}

FusedStatistic fuse_max(std::span<const double> values) {
    if (values.empty()) throw InputError("fuse_max: empty value list");
    std::size_t arg = 0;
    for (std::size_t l = 1; l < values.size(); ++l)
        if (values[l] > values[arg]) arg = l;
    return {values[arg], {static_cast<std::uint32_t>(arg)}};
}

FusedStatistic fuse_censored_fixed(std::span<const double> values, double c) {
    if (values.empty()) throw InputError("fuse_censored_fixed: empty value list");
    return censored_mean(values, c);
}

FusedStatistic fuse_censored_adaptive(std::span<const double> values, double alpha) {
    if (values.empty()) throw InputError("fuse_censored_adaptive: empty value list");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InputError("fuse_censored_adaptive: alpha must lie in [0, 1]");
    return censored_mean(values, alpha * max_of(values));
}

FusedStatistic fuse(const FusionRule& rule, std::span<const double> values) {
    switch (rule.kind) {
    case FusionKind::sum: return fuse_sum(values);
    case FusionKind::max: return fuse_max(values);
    case FusionKind::censored_fixed: return fuse_censored_fixed(values, rule.c);
    case FusionKind::censored_adaptive: return fuse_censored_adaptive(values, rule.alpha);
    }
    throw InputError("fuse: unknown rule kind");
}

double fuse_value(const FusionRule& rule, std::span<const double> values) {
    if (values.empty()) throw InputError("fuse_value: empty value list");
    switch (rule.kind) {
    case FusionKind::sum: {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum / static_cast<double>(values.size());
    }
    case FusionKind::max:
        return max_of(values);
    case FusionKind::censored_fixed:
        return censored_mean_value(values, rule.c);
    case FusionKind::censored_adaptive:
        return censored_mean_value(values, rule.alpha * max_of(values));
    }
    throw InputError("fuse_value: unknown rule kind");
}

void DetectorConfig::validate() const {
    rule.validate();
    if (num_streams == 0)
        throw ConfigError("detector: num_streams must be >= 1");
    if (rule.statistic == LocalStatistic::fma) {
        if (fma_window == 0)
            throw ConfigError("detector: fma_window required when statistic = fma");
    } else if (fma_window != 0) {
        throw ConfigError("detector: fma_window only valid when statistic = fma");
    }
}

GlobalDetector::GlobalDetector(const DetectorConfig& config, double threshold)
    : config_(config), threshold_(threshold), values_(config.num_streams, 0.0) {
    config_.validate();
    switch (config_.rule.statistic) {
    case LocalStatistic::cusum:
        cusum_.resize(config_.num_streams);
        break;
    case LocalStatistic::te_cusum:
        te_.resize(config_.num_streams);
        break;
    case LocalStatistic::fma:
        fma_.assign(config_.num_streams, FmaState(config_.fma_window));
        break;
    }
}

double GlobalDetector::step(std::span<const double> observations) {
    const std::size_t L = config_.num_streams;
    if (observations.size() != L)
        throw InputError("GlobalDetector::step: observation vector length mismatch");
    const GaussianMeanShiftModel& model = config_.model;
    switch (config_.rule.statistic) {
    case LocalStatistic::cusum:
        for (std::size_t l = 0; l < L; ++l) {
            cusum_[l].update(model.llr(observations[l]));
            values_[l] = cusum_[l].w;
        }
        break;
    case LocalStatistic::te_cusum:
        for (std::size_t l = 0; l < L; ++l) {
            te_[l].update(model.llr(observations[l]));
            values_[l] = te_[l].g;
        }
        break;
    case LocalStatistic::fma:
        for (std::size_t l = 0; l < L; ++l) {
            fma_[l].update(model.llr(observations[l]));
            values_[l] = fma_[l].z();
        }
        break;
    }
    const double fused = fuse_value(config_.rule, values_);
    if (!alarm_ && fused > threshold_) alarm_ = n_;
    ++n_;
    return fused;
}

void GlobalDetector::reset_states() {
    for (auto& s : cusum_) s.reset();
    for (auto& s : te_) s.reset();
    for (auto& s : fma_) s.reset();
    std::fill(values_.begin(), values_.end(), 0.0);
    alarm_.reset();
}

FusedStatistic GlobalDetector::fused() const {
    return fuse(config_.rule, values_);
}

ChangePointEstimate GlobalDetector::stream_estimate(std::size_t stream) const {
    switch (config_.rule.statistic) {
    case LocalStatistic::cusum:
        return estimate_change_point(cusum_.at(stream));
    case LocalStatistic::te_cusum:
        return estimate_change_point(te_.at(stream));
    case LocalStatistic::fma:
        // The moving sum has no cumulative-minimum structure; report the
        // start of the current window.
        if (n_ == 0) throw StateError("stream_estimate: no samples consumed");
        return {n_ > fma_.at(stream).window_len() ? n_ - fma_.at(stream).window_len() : 0,
                std::nullopt};
    }
    throw StateError("stream_estimate: unknown statistic");
}

std::size_t GlobalDetector::leading_stream() const {
    std::size_t arg = 0;
    for (std::size_t l = 1; l < values_.size(); ++l)
        if (values_[l] > values_[arg]) arg = l;
    return arg;
}

} // namespace tecusum
