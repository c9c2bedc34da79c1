#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "tecusum/errors.hpp"
#include "tecusum/llr.hpp"

namespace tecusum {

using SampleIndex = std::uint64_t;

/// Recursive CUSUM statistic for one stream.
///
/// w follows W_n = max(0, W_{n-1}) + inc_n (the clamp applies to the
/// previous value, so w itself may go negative). s is the running cumulative
/// log-likelihood ratio, s_min / s_argmin track its minimum over the prefix
/// S_0..S_{n-1} with ties broken toward the latest index. This makes the
/// identity w == s - s_min hold after every update, and makes s_argmin the
/// change-point estimate.
struct CusumState {
    double w = 0.0;
    double s = 0.0;
    double s_min = 0.0;
    SampleIndex s_argmin = 0;
    SampleIndex n = 0;

    void update(LlrIncrement inc) {
        if (s <= s_min) {
            s_min = s;
            s_argmin = n;
        }
        w = std::max(0.0, w) + inc;
        s += inc;
        ++n;
    }

    void reset() { *this = CusumState{}; }
};

/// CUSUM plus the running maximum G_n = max(G_{n-1}, W_n), which equals the
/// best evidence over every finished or ongoing change window. Unlike w,
/// g never decays once the change ends. g_arg_n / g_arg_nu record the sample
/// index attaining g and the change-point estimate at that moment, giving a
/// (start, end] window estimate on demand.
struct TeCusumState {
    CusumState cusum;
    double g = 0.0;
    SampleIndex g_arg_n = 0;
    SampleIndex g_arg_nu = 0;

    void update(LlrIncrement inc) {
        cusum.update(inc);
        if (cusum.w > g) {
            g = cusum.w;
            g_arg_n = cusum.n;
            g_arg_nu = cusum.s_argmin;
        }
    }

    void reset() { *this = TeCusumState{}; }
};

/// Moving sum of the last `window_len` log-likelihood-ratio increments,
/// maintained in O(1) per update with a ring buffer of exactly window_len
/// slots.
class FmaState {
public:
    explicit FmaState(std::size_t window_len) : buf_(window_len, 0.0) {
        if (window_len == 0)
            throw InputError("FmaState: window length must be >= 1");
    }

    void update(LlrIncrement inc) {
        if (count_ == buf_.size()) {
            z_ -= buf_[head_];
        } else {
            ++count_;
        }
        buf_[head_] = inc;
        z_ += inc;
        head_ = head_ + 1 == buf_.size() ? 0 : head_ + 1;
    }

    void reset() {
        std::fill(buf_.begin(), buf_.end(), 0.0);
        head_ = 0;
        count_ = 0;
        z_ = 0.0;
    }

    double z() const { return z_; }
    std::size_t window_len() const { return buf_.size(); }
    /// Slots held; exactly window_len, independent of samples consumed.
    std::size_t capacity() const { return buf_.capacity(); }
    std::size_t size() const { return count_; }

    /// Direct re-summation of the buffer contents (oracle for the
    /// incrementally maintained z).
    double resum() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < count_; ++i) acc += buf_[i];
        return acc;
    }

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    double z_ = 0.0;
};

/// Estimated change window: nu_hat is the last pre-change sample count
/// (change begins after sample nu_hat), n_hat the estimated end of the
/// change when one can be named.
struct ChangePointEstimate {
    SampleIndex nu_hat = 0;
    std::optional<SampleIndex> n_hat;
};

/// Change-point estimate from a CUSUM state: the latest minimizer of the
/// cumulative sum over S_0..S_{n-1}.
inline ChangePointEstimate estimate_change_point(const CusumState& state) {
    if (state.n == 0)
        throw StateError("estimate_change_point: no samples consumed");
    return {state.s_argmin, std::nullopt};
}

/// Change-window estimate from a TE-CUSUM state: the change-point recorded
/// when g was last raised, paired with the sample index attaining g. Before
/// any positive evidence (g == 0) it falls back to the plain CUSUM estimate.
inline ChangePointEstimate estimate_change_point(const TeCusumState& state) {
    if (state.cusum.n == 0)
        throw StateError("estimate_change_point: no samples consumed");
    if (state.g_arg_n == 0)
        return estimate_change_point(state.cusum);
    return {state.g_arg_nu, state.g_arg_n};
}

} // namespace tecusum
