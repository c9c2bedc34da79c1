#pragma once

#include <cmath>
#include <string>

#include "tecusum/errors.hpp"

namespace tecusum {

/// A log-likelihood-ratio increment for one sample: log f1(x)/f0(x).
using LlrIncrement = double;

/// Observation model for a change of mean in Gaussian noise: pre-change
/// N(mu0, sigma^2), post-change N(mu1, sigma^2). The only density pair the
/// detectors currently instantiate; the llr() contract is what a new model
/// would have to provide.
struct GaussianMeanShiftModel {
    double mu0;
    double mu1;
    double sigma;

    GaussianMeanShiftModel(double mu0_, double mu1_, double sigma_)
        : mu0(mu0_), mu1(mu1_), sigma(sigma_) {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw InputError("GaussianMeanShiftModel: sigma must be a positive finite real");
        if (!std::isfinite(mu0) || !std::isfinite(mu1))
            throw InputError("GaussianMeanShiftModel: means must be finite");
        if (mu1 == mu0)
            throw InputError("GaussianMeanShiftModel: mu1 must differ from mu0");
    }

    double delta() const { return mu1 - mu0; }

    /// Log-likelihood-ratio increment for one observation,
    /// (delta/sigma^2) * (x - mu0 - delta/2). Equal to
    /// log N(x; mu1, sigma^2) - log N(x; mu0, sigma^2).
    LlrIncrement llr(double x) const {
        if (!std::isfinite(x))
            throw InputError("llr: observation must be finite");
        const double d = delta();
        return d / (sigma * sigma) * (x - mu0 - 0.5 * d);
    }
};

inline LlrIncrement llr(const GaussianMeanShiftModel& model, double x) {
    return model.llr(x);
}

/// Signal-to-noise ratio in decibels for a true mean offset of `amplitude`
/// against the model's noise level: 10 log10(A^2 / sigma^2).
inline double snr_db(const GaussianMeanShiftModel& model, double amplitude) {
    if (amplitude == 0.0 || !std::isfinite(amplitude))
        throw InputError("snr_db: amplitude must be finite and nonzero");
    const double r = amplitude / model.sigma;
    return 10.0 * std::log10(r * r);
}

/// Mean offset achieving a given SNR (dB) at noise level sigma.
inline double amplitude_for_snr_db(double snr, double sigma) {
    return sigma * std::pow(10.0, snr / 20.0);
}

} // namespace tecusum
