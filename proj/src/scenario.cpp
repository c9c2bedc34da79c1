#include "tecusum/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "tecusum/rng.hpp"

namespace tecusum {

void ScenarioSpec::validate() const {
    if (num_sensors == 0) throw ConfigError("scenario: num_sensors must be >= 1");
    if (horizon == 0) throw ConfigError("scenario: horizon must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ConfigError("scenario: sigma must be a positive finite real");
    if (!std::isfinite(amplitude)) throw ConfigError("scenario: amplitude must be finite");
    for (std::uint32_t s : affected) {
        if (s >= num_sensors)
            throw ConfigError("scenario: affected sensor index out of range");
    }
    for (std::size_t i = 0; i < affected.size(); ++i)
        for (std::size_t j = i + 1; j < affected.size(); ++j)
            if (affected[i] == affected[j])
                throw ConfigError("scenario: affected list contains a duplicate sensor");
    if (!affected.empty() && exposure_len > 0 && end_of_exposure() > horizon)
        throw ConfigError("scenario: exposure window overflows the horizon");
}

SensorWindow ScenarioSpec::window_for_rank(std::size_t rank) const {
    const std::size_t begin = onset + rank * stagger;
    return {begin, begin + exposure_len};
}

std::size_t ScenarioSpec::end_of_exposure() const {
    if (affected.empty() || exposure_len == 0) return onset;
    return window_for_rank(affected.size() - 1).end;
}

ObservationMatrix generate(const ScenarioSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t L = spec.num_sensors;
    const std::size_t T = spec.horizon;

    ObservationMatrix out;
    out.horizon = T;
    out.num_sensors = L;
    out.data.resize(T * L);
    out.windows.assign(L, SensorWindow{});

    // Role assignment: affected sensors in listed order, then the rest in
    // index order.
    std::vector<std::size_t> role_of(L, 0);
    std::vector<bool> is_affected(L, false);
    std::size_t next_role = 0;
    for (std::size_t rank = 0; rank < spec.affected.size(); ++rank) {
        const std::uint32_t sensor = spec.affected[rank];
        role_of[sensor] = next_role++;
        is_affected[sensor] = true;
        out.windows[sensor] = spec.window_for_rank(rank);
    }
    for (std::size_t l = 0; l < L; ++l)
        if (!is_affected[l]) role_of[l] = next_role++;

    for (std::size_t l = 0; l < L; ++l) {
        NormalRng rng(derive_seed(seed, {seed_tag::sensor, role_of[l]}));
        const SensorWindow& win = out.windows[l];
        for (std::size_t t = 0; t < T; ++t) {
            double x = spec.sigma * rng();
            if (win.contains(t)) x += spec.amplitude;
            out.data[t * L + l] = x;
        }
    }
    return out;
}

Preset preset_from_string(const std::string& s) {
    if (s == "scenario-1") return Preset::scenario1;
    if (s == "scenario-2") return Preset::scenario2;
    throw ConfigError("unknown scenario preset '" + s + "'");
}

std::string to_string(Preset preset) {
    return preset == Preset::scenario1 ? "scenario-1" : "scenario-2";
}

std::vector<ScenarioSpec> scenario_matrix(Preset preset) {
    const double amplitude = preset == Preset::scenario1 ? 0.4 : 0.2;
    const std::size_t exposure = preset == Preset::scenario1 ? 100 : 200;
    const std::size_t affected_counts[] = {3, 5, 7};
    const std::size_t staggers[] = {0, exposure / 2, exposure, 3 * exposure / 2};
    const char* stagger_names[] = {"sync", "half", "full", "gap"};

    std::vector<ScenarioSpec> specs;
    specs.reserve(12);
    for (std::size_t si = 0; si < 4; ++si) {
        for (std::size_t count : affected_counts) {
            ScenarioSpec spec;
            spec.num_sensors = 10;
            spec.affected.resize(count);
            for (std::size_t k = 0; k < count; ++k)
                spec.affected[k] = static_cast<std::uint32_t>(k);
            spec.amplitude = amplitude;
            spec.sigma = 1.0;
            spec.exposure_len = exposure;
            spec.onset = 1500;
            spec.stagger = staggers[si];
            // Room for a detection tail after the last exposure ends.
            spec.horizon = spec.end_of_exposure() + 600;
            spec.id = std::string(stagger_names[si]) + "-" + std::to_string(count);
            spec.validate();
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

} // namespace tecusum
