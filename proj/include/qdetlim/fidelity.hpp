// fidelity.hpp — fidelity stored in log domain.

#pragma once

#include "qdetlim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qdetlim {

// Overlap between the null and alternative detector states, F in [0, 1].
// Kept as ln F so long records do not underflow.
class Fidelity {
public:
    Fidelity() = default;

    static Fidelity from_log(double log_f) {
        // round-off above zero is folded back onto F = 1
        if (std::isnan(log_f) || log_f > 1e-12) {
            throw NumericalError("Fidelity: ln F must be <= 0");
        }
        Fidelity f;
        f.log_ = std::min(log_f, 0.0);
        return f;
    }
    static Fidelity from_value(double f) {
        if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("Fidelity: F must lie in [0, 1]");
        return from_log(std::log(f));
    }
    // From the exponent E in F = exp(-E).
    static Fidelity from_exponent(double e) { return from_log(-e); }

    double log() const noexcept { return log_; }
    double value() const noexcept { return std::exp(log_); }
    double exponent() const noexcept { return -log_; }

private:
    double log_ = 0.0;
};

}  // namespace qdetlim
