#include "tecusum/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tecusum/parallel.hpp"
#include "tecusum/rng.hpp"

namespace tecusum {

CurveMode curve_mode_from_string(const std::string& s) {
    if (s == "include-pre-change") return CurveMode::include_pre_change;
    if (s == "exclude-pre-change") return CurveMode::exclude_pre_change;
    throw ConfigError("unknown curve mode '" + s + "'");
}

std::string to_string(CurveMode mode) {
    return mode == CurveMode::include_pre_change ? "include-pre-change" : "exclude-pre-change";
}

const CurveSeries& CurveSet::find(const std::string& name) const {
    for (const auto& s : series)
        if (s.name == name) return s;
    throw InputError("curve set has no series named '" + name + "'");
}

double CurveSet::value_at(const std::string& name, std::int64_t t) const {
    const CurveSeries& s = find(name);
    if (s.values.empty()) throw InputError("empty curve series '" + name + "'");
    std::int64_t i = t - t_begin;
    i = std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(s.values.size()) - 1);
    return s.values[static_cast<std::size_t>(i)];
}

CurveSet detection_rate_curve(std::span<const RunRecord> records, std::size_t horizon,
                              CurveMode mode) {
    if (records.empty()) throw InputError("detection_rate_curve: no records");
    const SampleIndex e0 = records.front().exposure_start;

    std::uint64_t denom = 0;
    // Count alarms by relative time, then accumulate.
    std::vector<std::uint64_t> hits(horizon, 0);
    for (const RunRecord& r : records) {
        const bool pre = r.alarm_time && *r.alarm_time < r.exposure_start;
        if (mode == CurveMode::exclude_pre_change && pre) continue;
        ++denom;
        if (!r.alarm_time) continue;
        // Bucket index on the shared axis t = alarm - exposure_start,
        // shifted so index 0 is t = -e0.
        const std::int64_t t = static_cast<std::int64_t>(*r.alarm_time) -
                               static_cast<std::int64_t>(r.exposure_start);
        const std::int64_t idx = t + static_cast<std::int64_t>(e0);
        if (idx >= 0 && idx < static_cast<std::int64_t>(horizon))
            ++hits[static_cast<std::size_t>(idx)];
    }

    CurveSet out;
    out.t_begin = -static_cast<std::int64_t>(e0);
    out.runs = records.size();
    CurveSeries series;
    series.name = "rate";
    series.values.resize(horizon, 0.0);
    std::uint64_t cum = 0;
    for (std::size_t i = 0; i < horizon; ++i) {
        cum += hits[i];
        series.values[i] = denom == 0 ? 0.0 : static_cast<double>(cum) / static_cast<double>(denom);
    }
    out.series.push_back(std::move(series));
    return out;
}

std::optional<DelaySummary> average_delay(std::span<const RunRecord> records) {
    DelaySummary out;
    double sum = 0.0;
    double sumsq = 0.0;
    for (const RunRecord& r : records) {
        if (!r.alarm_time) {
            ++out.censored;
            continue;
        }
        if (*r.alarm_time < r.exposure_start) {
            ++out.pre_change_alarms;
            continue;
        }
        const double d = static_cast<double>(*r.alarm_time - r.exposure_start);
        sum += d;
        sumsq += d * d;
        ++out.detecting;
    }
    if (out.detecting == 0) return std::nullopt;
    const double k = static_cast<double>(out.detecting);
    out.mean = sum / k;
    if (out.detecting > 1) {
        const double var = std::max(0.0, (sumsq - k * out.mean * out.mean) / (k - 1.0));
        out.standard_error = std::sqrt(var / k);
    }
    return out;
}

std::vector<SpecResult> compare_methods(std::span<const ScenarioSpec> specs,
                                        std::span<const CalibratedMethod> methods,
                                        const CompareOptions& options) {
    if (methods.empty()) throw ConfigError("compare_methods: no methods given");
    if (options.runs == 0) throw ConfigError("compare_methods: runs must be >= 1");
    for (const CalibratedMethod& m : methods) {
        m.config.validate();
        if (!std::isfinite(m.threshold))
            throw ConfigError("method '" + m.name + "' has no calibrated threshold");
    }

    std::vector<SpecResult> results(specs.size());
    for (std::size_t si = 0; si < specs.size(); ++si) {
        const ScenarioSpec& spec = specs[si];
        spec.validate();
        for (const CalibratedMethod& m : methods)
            if (m.config.num_streams != spec.num_sensors)
                throw ConfigError("method '" + m.name + "' stream count does not match scenario '" +
                                  spec.id + "'");

        SpecResult& result = results[si];
        result.spec = spec;
        result.per_method.resize(methods.size());
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            result.per_method[mi].name = methods[mi].name;
            result.per_method[mi].records.resize(options.runs);
        }

        parallel_for(options.runs, options.jobs, [&](std::size_t replica) {
            const std::uint64_t run_seed =
                derive_seed(options.seed, {seed_tag::scenario, si, replica});
            const ObservationMatrix matrix = generate(spec, run_seed);
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                GlobalDetector detector(methods[mi].config, methods[mi].threshold);
                for (std::size_t t = 0; t < matrix.horizon; ++t) {
                    detector.step(matrix.row(t));
                    if (detector.alarm()) break;
                }
                RunRecord rec;
                rec.exposure_start = spec.exposure_start();
                rec.exposure_end = spec.end_of_exposure();
                rec.seed = run_seed;
                rec.alarm_time = detector.alarm();
                if (detector.alarm())
                    rec.nu_hat = detector.stream_estimate(detector.leading_stream()).nu_hat;
                result.per_method[mi].records[replica] = rec;
            }
        });
    }
    return results;
}

CurveSet build_curves(const SpecResult& result, CurveMode mode,
                      std::span<const CalibratedMethod> methods, double arl_target) {
    CurveSet out;
    out.scenario_id = result.spec.id;
    out.runs = result.per_method.empty() ? 0 : result.per_method.front().records.size();
    out.arl_target = arl_target;
    for (const MethodRecords& m : result.per_method) {
        CurveSet single = detection_rate_curve(m.records, result.spec.horizon, mode);
        out.t_begin = single.t_begin;
        CurveSeries series = std::move(single.series.front());
        series.name = m.name;
        out.series.push_back(std::move(series));
    }
    for (const CalibratedMethod& m : methods)
        out.thresholds.emplace_back(m.name, m.threshold);
    return out;
}

} // namespace tecusum
