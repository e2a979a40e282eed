#pragma once

#include <map>
#include <span>
#include <vector>

#include "ipf/rng.hpp"
#include "ipf/schedule.hpp"

namespace ipf {

/// Observations keyed by the time step at which they were acquired.
using ObservationMap = std::map<int, std::vector<double>>;

// log N(value; mean, variance). Zero variance is treated as a point mass:
// an exact match has log-density 0, anything else is impossible.
double normal_log_pdf(double value, double mean, double variance);

/// Discrete-time stochastic state-space model on t = 0..horizon().
///
/// The transition x(t+1) = f_t(x(t), w(t)) is defined for t < horizon();
/// the measurement y(t) = g_t(x(t), v(t)) and output z(t) = h_t(x(t)) for
/// t = 0..horizon(). Noise enters through explicit draws supplied by the
/// caller, so a driver can log and replay every random input. Process noise
/// has state dimension, measurement noise has observation dimension.
///
/// Instances are immutable after construction and safe to share across
/// threads; each concurrent task owns its own RandomStream.
class DynamicalSystem {
public:
    virtual ~DynamicalSystem() = default;

    int state_dim() const { return state_dim_; }
    int obs_dim() const { return obs_dim_; }
    int output_dim() const { return output_dim_; }
    int horizon() const { return horizon_; }

    // x(t+1) = f_t(x, w), valid for 0 <= t <= horizon()-1. x_next must not
    // alias x.
    void step(int t, std::span<const double> x, std::span<const double> w,
              std::span<double> x_next) const;

    // y = g_t(x, v), valid for 0 <= t <= horizon().
    void measure(int t, std::span<const double> x, std::span<const double> v,
                 std::span<double> y) const;

    // z = h_t(x), valid for 0 <= t <= horizon().
    void output(int t, std::span<const double> x, std::span<double> z) const;

    // log p(y | x, t), the observation density backing importance weights.
    double measurement_log_likelihood(int t, std::span<const double> x,
                                      std::span<const double> y) const;

    // Independent draw from the initial distribution F.
    void sample_initial(RandomStream& rng, std::span<double> x0) const;

    void sample_process_noise(int t, RandomStream& rng, std::span<double> w) const;
    void sample_measurement_noise(int t, RandomStream& rng, std::span<double> v) const;

protected:
    DynamicalSystem(int state_dim, int obs_dim, int output_dim, int horizon);

private:
    virtual void do_step(int t, std::span<const double> x, std::span<const double> w,
                         std::span<double> x_next) const = 0;
    virtual void do_measure(int t, std::span<const double> x, std::span<const double> v,
                            std::span<double> y) const = 0;
    virtual void do_output(int t, std::span<const double> x,
                           std::span<double> z) const = 0;
    virtual double do_log_likelihood(int t, std::span<const double> x,
                                     std::span<const double> y) const = 0;
    virtual void do_sample_initial(RandomStream& rng, std::span<double> x0) const = 0;
    virtual void do_sample_process_noise(int t, RandomStream& rng,
                                         std::span<double> w) const = 0;
    virtual void do_sample_measurement_noise(int t, RandomStream& rng,
                                             std::span<double> v) const = 0;

    int state_dim_;
    int obs_dim_;
    int output_dim_;
    int horizon_;
};

/// One simulated realisation: full state and output paths plus observations
/// at the times of the generating schedule.
class Trajectory {
public:
    Trajectory(int steps, int state_dim, int output_dim);

    int steps() const { return steps_; }  // horizon + 1
    int state_dim() const { return state_dim_; }
    int output_dim() const { return output_dim_; }

    std::span<double> state(int t);
    std::span<const double> state(int t) const;
    std::span<double> output(int t);
    std::span<const double> output(int t) const;

    std::span<const double> outputs_flat() const { return outputs_; }

    ObservationMap observations;

private:
    int steps_;
    int state_dim_;
    int output_dim_;
    std::vector<double> states_;
    std::vector<double> outputs_;
};

/// Scalar nonlinear growth benchmark:
///   x(t+1) = x/2 + 25 x / (1 + x^2) + 8 cos(1.2 t) + w,   w ~ N(0, 1)
///   y(t)   = x^2 / 20 + v,                    v ~ N(0, (sin(0.25 t) + 2)^2)
///   z(t)   = x(t),                            x(0) ~ N(0, 25)
class BenchmarkSystem final : public DynamicalSystem {
public:
    explicit BenchmarkSystem(int horizon);

    static double measurement_sigma(int t);

private:
    void do_step(int t, std::span<const double> x, std::span<const double> w,
                 std::span<double> x_next) const override;
    void do_measure(int t, std::span<const double> x, std::span<const double> v,
                    std::span<double> y) const override;
    void do_output(int t, std::span<const double> x, std::span<double> z) const override;
    double do_log_likelihood(int t, std::span<const double> x,
                             std::span<const double> y) const override;
    void do_sample_initial(RandomStream& rng, std::span<double> x0) const override;
    void do_sample_process_noise(int t, RandomStream& rng,
                                 std::span<double> w) const override;
    void do_sample_measurement_noise(int t, RandomStream& rng,
                                     std::span<double> v) const override;
};

struct LinearGaussianParams {
    double a = 1.0;                 // transition coefficient
    double c = 1.0;                 // observation coefficient
    double q = 1.0;                 // process noise variance
    double r = 1.0;                 // observation noise variance
    double initial_mean = 0.0;
    double initial_variance = 1.0;
};

/// Scalar linear-Gaussian system x(t+1) = a x + w, y = c x + v, z = x.
/// Exactly filterable by a Kalman recursion, which makes it the verification
/// oracle for the particle filter. Zero variances give the deterministic
/// degenerate limit.
class LinearGaussianSystem final : public DynamicalSystem {
public:
    LinearGaussianSystem(const LinearGaussianParams& params, int horizon);

    const LinearGaussianParams& params() const { return params_; }

private:
    void do_step(int t, std::span<const double> x, std::span<const double> w,
                 std::span<double> x_next) const override;
    void do_measure(int t, std::span<const double> x, std::span<const double> v,
                    std::span<double> y) const override;
    void do_output(int t, std::span<const double> x, std::span<double> z) const override;
    double do_log_likelihood(int t, std::span<const double> x,
                             std::span<const double> y) const override;
    void do_sample_initial(RandomStream& rng, std::span<double> x0) const override;
    void do_sample_process_noise(int t, RandomStream& rng,
                                 std::span<double> w) const override;
    void do_sample_measurement_noise(int t, RandomStream& rng,
                                     std::span<double> v) const override;

    LinearGaussianParams params_;
};

// Draws one realisation of the system and collects observations at the
// scheduled times. Draw order is fixed: x(0) first, then per step the
// measurement noise (if scheduled) followed by the process noise.
Trajectory simulate(const DynamicalSystem& system, const MeasurementSchedule& schedule,
                    RandomStream& rng);

}  // namespace ipf
