#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ipf/model.hpp"
#include "ipf/rng.hpp"
#include "ipf/schedule.hpp"

namespace ipf {

/// Particle states and importance weights at one time step.
struct ParticleEnsemble {
    int state_dim = 1;
    std::vector<double> states;   // size() * state_dim, particle-major
    std::vector<double> weights;  // one per particle

    int size() const { return static_cast<int>(weights.size()); }
    std::span<double> particle(int i);
    std::span<const double> particle(int i) const;

    // count independent draws from the initial distribution, uniform weights.
    static ParticleEnsemble initialize(const DynamicalSystem& system, int count,
                                       RandomStream& rng);
};

/// Output estimates zhat(0..T). When the filter degenerates at time t*,
/// estimates are defined only for t < t* and degenerate_at holds t*.
struct FilterResult {
    int output_dim = 1;
    std::vector<double> estimates;  // defined_steps() * output_dim, flat
    std::optional<int> degenerate_at;

    int defined_steps() const {
        return static_cast<int>(estimates.size()) / output_dim;
    }
    std::span<const double> estimate(int t) const;
    std::span<const double> estimates_flat() const { return estimates; }
};

// Low-variance resampling: one uniform offset, P equally spaced pointers over
// the cumulative weight wheel. Index i appears floor(P*w_i) or ceil(P*w_i)
// times. Weights must be normalized; the returned indices are nondecreasing.
std::vector<int> systematic_resample(std::span<const double> weights,
                                     RandomStream& rng);

// Propagates every particle from time t-1 to time t through the transition,
// with a fresh process-noise draw per particle. Weights are untouched.
void predict(const DynamicalSystem& system, int t, ParticleEnsemble& ensemble,
             RandomStream& rng);

// SIR correction: replaces the (uniform) weights with normalized observation
// likelihoods. Returns false when every likelihood underflows to zero, the
// degeneracy signal; weights are then meaningless and the ensemble is dead.
bool correct(const DynamicalSystem& system, int t, std::span<const double> y,
             ParticleEnsemble& ensemble);

/// Bootstrap SIR particle filter with intermittent corrections.
///
/// Per time step: prediction through the transition (at t = 0, the initial
/// draw); at scheduled times a correction, the weighted output estimate, and
/// a systematic resample back to uniform weights; at unscheduled times the
/// correction is skipped and the estimate is the plain ensemble mean of the
/// outputs. Estimates at measured times use the post-correction,
/// pre-resampling weights. Degeneracy is reported in the result, not thrown.
FilterResult run_filter(const DynamicalSystem& system,
                        const MeasurementSchedule& schedule,
                        const ObservationMap& observations, int num_particles,
                        RandomStream& rng);

/// Posterior means and variances of the scalar intermittent Kalman filter.
/// The update step is skipped at unscheduled times.
struct KalmanTrace {
    std::vector<double> means;
    std::vector<double> variances;
};

KalmanTrace kalman_trace(const LinearGaussianSystem& system,
                         const MeasurementSchedule& schedule,
                         const ObservationMap& observations);

// Exact Bayesian filter for the linear-Gaussian case, packaged like the
// particle filter so tests can compare the two directly. Never degenerate.
FilterResult run_kalman_oracle(const LinearGaussianSystem& system,
                               const MeasurementSchedule& schedule,
                               const ObservationMap& observations);

}  // namespace ipf
