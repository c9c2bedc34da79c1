#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tecusum/errors.hpp"

namespace tecusum {

/// Half-open exposure window [begin, end) in 0-based sample indices.
/// begin == end means the sensor is never exposed.
struct SensorWindow {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool contains(std::size_t t) const { return t >= begin && t < end; }
    bool empty() const { return begin == end; }
};

/// One simulated experiment: Gaussian noise on every sensor, plus a
/// temporary mean offset of `amplitude` lasting `exposure_len` samples on
/// each affected sensor. Affected sensors start one after another with
/// `stagger` samples between consecutive onsets; the first starts at
/// `onset`.
struct ScenarioSpec {
    std::string id;
    std::size_t num_sensors = 1;
    std::vector<std::uint32_t> affected;
    double amplitude = 0.0;
    double sigma = 1.0;
    std::size_t exposure_len = 0;
    std::size_t onset = 0;
    std::size_t stagger = 0;
    std::size_t horizon = 0;

    void validate() const;

    /// Exposure window of the sensor with the given rank in the affected
    /// list.
    SensorWindow window_for_rank(std::size_t rank) const;

    /// First exposed sample over all sensors (== onset when any sensor is
    /// affected).
    std::size_t exposure_start() const { return onset; }

    /// One past the last exposed sample over all sensors.
    std::size_t end_of_exposure() const;

    /// Total exposed sensor-samples: |affected| * exposure_len regardless of
    /// stagger (the event always injects the same energy).
    std::size_t exposed_samples_total() const { return affected.size() * exposure_len; }

    bool operator==(const ScenarioSpec&) const = default;
};

/// A generated horizon x num_sensors sample grid, time-major, with the
/// ground-truth exposure windows per sensor.
struct ObservationMatrix {
    std::size_t horizon = 0;
    std::size_t num_sensors = 0;
    std::vector<double> data;
    std::vector<SensorWindow> windows;

    std::span<const double> row(std::size_t t) const {
        return {data.data() + t * num_sensors, num_sensors};
    }
    double at(std::size_t t, std::size_t sensor) const { return data[t * num_sensors + sensor]; }
};

/// Draws the scenario deterministically from the seed. Each sensor's sample
/// stream comes from its own sub-seeded generator, keyed by the sensor's
/// role (rank within the affected list, then unaffected sensors in index
/// order) rather than its raw index — relabeling sensors therefore permutes
/// columns without changing the multiset of streams any symmetric fusion
/// rule sees.
ObservationMatrix generate(const ScenarioSpec& spec, std::uint64_t seed);

enum class Preset { scenario1, scenario2 };

Preset preset_from_string(const std::string& s);
std::string to_string(Preset preset);

/// The bundled experiment grid for one preset: 3 affected-subset sizes
/// {3, 5, 7} of 10 sensors x 4 onset staggers {0, e/2, e, 3e/2}, where the
/// exposure length e and amplitude are 100 / 0.4 for scenario-1 and
/// 200 / 0.2 for scenario-2. Twelve specs per preset.
std::vector<ScenarioSpec> scenario_matrix(Preset preset);

} // namespace tecusum
