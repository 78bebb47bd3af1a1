// options.hpp — numerical tolerances and the warning sink.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qdetlim {

// Every tolerance a module checks against. Defaults are the library's
// contract; scenarios may override individual fields.
struct NumericOptions {
    // Escalate bandwidth warnings to BandwidthError.
    bool strict = false;
    // Outermost fraction of frequency bins inspected for integrand decay.
    double tail_fraction = 0.05;
    // Tail magnitude, relative to the peak, above which a warning is raised.
    double tail_ratio = 1e-6;
    // Relative asymmetry tolerated when a circulant row is asserted symmetric.
    double symmetry_tol = 1e-10;
    // Relative negative-eigenvalue slack for covariance rows and circulants.
    double psd_tol = 1e-9;
    // Allowed relative disagreement between time- and frequency-domain
    // Kennedy photon energies.
    double kennedy_path_tol = 0.01;
    // Warm-up prepended to receiver simulations, in mechanical ring-down
    // times (2 / gamma_m).
    double warmup_decay_times = 5.0;
    // Ternary-search stopping width for the Chernoff tilt.
    double chernoff_s_tol = 1e-8;
    // Points in the unimodality pre-scan of the Chernoff objective.
    int chernoff_prescan = 1001;
};

// Collects non-fatal warnings. Passing nullptr to an operation discards them.
class Diagnostics {
public:
    void warn(std::string message) { warnings_.push_back(std::move(message)); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool empty() const noexcept { return warnings_.empty(); }

private:
    std::vector<std::string> warnings_;
};

}  // namespace qdetlim
