#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ipf/model.hpp"
#include "ipf/schedule.hpp"

namespace ipf {

/// Monte Carlo estimate of the expected filtering mean squared error of a
/// schedule. per_draw_mse has one entry per draw; a NaN entry marks a draw
/// whose filter run degenerated, and such draws are excluded from value.
struct CostEstimate {
    double value = 0.0;
    int draws = 0;
    std::vector<double> per_draw_mse;
    int degenerate_draws = 0;
};

/// One paired comparison of a reference schedule against a candidate.
struct GainSample {
    double mse_reference = 0.0;
    double mse_candidate = 0.0;
    double gain = 0.0;
};

// Time-averaged squared Euclidean error between two flat output sequences of
// equal length. dim is the per-step vector dimension.
double trajectory_mse(std::span<const double> outputs,
                      std::span<const double> estimates, int dim);

// (mse_reference - mse_candidate) / mse_reference. Requires mse_reference > 0.
double relative_gain(double mse_reference, double mse_candidate);

/// Monte Carlo cost pipeline: per draw, simulate one realisation, filter its
/// observations, and average the per-draw MSEs. Draw k runs on a stream
/// derived from (seed, k), so the draws parallelize deterministically and the
/// result does not depend on the worker count. Throws ScheduleUnevaluable
/// when every draw degenerates.
CostEstimate estimate_expected_mse(const DynamicalSystem& system,
                                   const MeasurementSchedule& schedule, int draws,
                                   int num_particles, std::uint64_t seed,
                                   int workers = 1);

}  // namespace ipf
