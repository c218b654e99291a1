#pragma once

#include <optional>
#include <random>
#include <vector>

#include "seclend/types.hpp"

namespace seclend {

/// One simulated joint path at daily resolution. Asset increments run to the
/// default day plus the MPR window (or to the horizon when no default);
/// intensity values are the per-step left points used in the compensator.
struct PathSample {
    std::vector<double> log_return_path; // per-step X increments
    std::vector<double> intensity_path;  // lambda at each step start
    std::optional<double> default_time;  // tau, years; quantized to day ends
    std::optional<double> mpr_log_return; // X(tau + u) - X(tau), iff defaulted
};

struct SimulationGrid {
    double horizon = 1.0; // years
    int mpr_days = 3;
    int steps() const {
        return static_cast<int>(std::lround(horizon * kBusinessDaysPerYear));
    }
};

/// Simulates one joint path from the caller's stream. Default arrives when
/// the accumulated intensity integral crosses an exponential(1) threshold
/// drawn up front (doubly-stochastic scheme, no O(dt) Bernoulli bias); on
/// default the asset path continues mpr_days further with the same correlated
/// increments.
PathSample sample_joint_path(const DejdParams& dejd, const CreditParams& credit,
                             const SimulationGrid& grid, std::mt19937_64& rng);

/// Summary of one defaulted path: everything the Eq. 1 loss needs.
struct DefaultRecord {
    double tau = 0.0;       // years
    double growth = 1.0;    // e^{X(tau)}, exposure growth to default
    double mpr_gross = 1.0; // e^{X(tau+u) - X(tau)}
};

/// Default summaries of n_paths joint paths, simulated in fixed-size blocks
/// with deterministically derived substreams. Output is independent of
/// worker count and bit-identical across reruns.
struct JointExposures {
    std::size_t path_count = 0;
    SeedDescriptor seed_descriptor;
    SimulationGrid grid;
    std::vector<DefaultRecord> defaults; // block-then-path order
};

JointExposures simulate_joint_exposures(const DejdParams& dejd, const CreditParams& credit,
                                        const SimulationGrid& grid, std::size_t n_paths,
                                        std::uint64_t seed, int workers = 1);

/// Gross returns e^{X(u)} over one MPR window (the borrower-independent
/// Eq. 2 setting: every path "defaults" at t = 0 with unit growth). The
/// increment over u is drawn in one shot, which is exact for the DEJD.
struct IndependentExposures {
    std::size_t path_count = 0;
    SeedDescriptor seed_descriptor;
    double mpr_years = 0.0;
    std::vector<double> gross_returns;
};

IndependentExposures simulate_mpr_returns(const DejdParams& dejd, int mpr_days,
                                          std::size_t n_paths, std::uint64_t seed,
                                          int workers = 1);

} // namespace seclend
