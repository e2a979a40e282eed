#include "ipf/model.hpp"

#include <cmath>
#include <limits>

#include "ipf/errors.hpp"

namespace ipf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double sample_normal(RandomStream& rng, double mean, double variance) {
    if (variance == 0.0) return mean;
    std::normal_distribution<double> dist(mean, std::sqrt(variance));
    return dist(rng);
}

}  // namespace

double normal_log_pdf(double value, double mean, double variance) {
    require(variance >= 0.0, "normal_log_pdf: negative variance");
    if (variance == 0.0)
        return value == mean ? 0.0 : -std::numeric_limits<double>::infinity();
    const double d = value - mean;
    return -0.5 * (std::log(kTwoPi * variance) + d * d / variance);
}

DynamicalSystem::DynamicalSystem(int state_dim, int obs_dim, int output_dim, int horizon)
    : state_dim_(state_dim), obs_dim_(obs_dim), output_dim_(output_dim),
      horizon_(horizon) {
    require(state_dim_ >= 1, "system: state_dim must be >= 1");
    require(obs_dim_ >= 1, "system: obs_dim must be >= 1");
    require(output_dim_ >= 1, "system: output_dim must be >= 1");
    require(horizon_ >= 1, "system: horizon must be >= 1");
}

void DynamicalSystem::step(int t, std::span<const double> x, std::span<const double> w,
                           std::span<double> x_next) const {
    require(t >= 0 && t < horizon_, "step: time index out of range");
    require(static_cast<int>(x.size()) == state_dim_ &&
                static_cast<int>(w.size()) == state_dim_ &&
                static_cast<int>(x_next.size()) == state_dim_,
            "step: dimension mismatch");
    do_step(t, x, w, x_next);
}

void DynamicalSystem::measure(int t, std::span<const double> x,
                              std::span<const double> v, std::span<double> y) const {
    require(t >= 0 && t <= horizon_, "measure: time index out of range");
    require(static_cast<int>(x.size()) == state_dim_ &&
                static_cast<int>(v.size()) == obs_dim_ &&
                static_cast<int>(y.size()) == obs_dim_,
            "measure: dimension mismatch");
    do_measure(t, x, v, y);
}

void DynamicalSystem::output(int t, std::span<const double> x,
                             std::span<double> z) const {
    require(t >= 0 && t <= horizon_, "output: time index out of range");
    require(static_cast<int>(x.size()) == state_dim_ &&
                static_cast<int>(z.size()) == output_dim_,
            "output: dimension mismatch");
    do_output(t, x, z);
}

double DynamicalSystem::measurement_log_likelihood(int t, std::span<const double> x,
                                                   std::span<const double> y) const {
    require(t >= 0 && t <= horizon_,
            "measurement_log_likelihood: time index out of range");
    require(static_cast<int>(x.size()) == state_dim_ &&
                static_cast<int>(y.size()) == obs_dim_,
            "measurement_log_likelihood: dimension mismatch");
    return do_log_likelihood(t, x, y);
}

void DynamicalSystem::sample_initial(RandomStream& rng, std::span<double> x0) const {
    require(static_cast<int>(x0.size()) == state_dim_,
            "sample_initial: dimension mismatch");
    do_sample_initial(rng, x0);
}

void DynamicalSystem::sample_process_noise(int t, RandomStream& rng,
                                           std::span<double> w) const {
    require(t >= 0 && t < horizon_, "sample_process_noise: time index out of range");
    require(static_cast<int>(w.size()) == state_dim_,
            "sample_process_noise: dimension mismatch");
    do_sample_process_noise(t, rng, w);
}

void DynamicalSystem::sample_measurement_noise(int t, RandomStream& rng,
                                               std::span<double> v) const {
    require(t >= 0 && t <= horizon_,
            "sample_measurement_noise: time index out of range");
    require(static_cast<int>(v.size()) == obs_dim_,
            "sample_measurement_noise: dimension mismatch");
    do_sample_measurement_noise(t, rng, v);
}

Trajectory::Trajectory(int steps, int state_dim, int output_dim)
    : steps_(steps), state_dim_(state_dim), output_dim_(output_dim),
      states_(static_cast<std::size_t>(steps) * state_dim, 0.0),
      outputs_(static_cast<std::size_t>(steps) * output_dim, 0.0) {
    require(steps >= 2, "trajectory: needs at least two steps");
    require(state_dim >= 1 && output_dim >= 1, "trajectory: bad dimensions");
}

std::span<double> Trajectory::state(int t) {
    require(t >= 0 && t < steps_, "trajectory: state index out of range");
    return {states_.data() + static_cast<std::size_t>(t) * state_dim_,
            static_cast<std::size_t>(state_dim_)};
}

std::span<const double> Trajectory::state(int t) const {
    require(t >= 0 && t < steps_, "trajectory: state index out of range");
    return {states_.data() + static_cast<std::size_t>(t) * state_dim_,
            static_cast<std::size_t>(state_dim_)};
}

std::span<double> Trajectory::output(int t) {
    require(t >= 0 && t < steps_, "trajectory: output index out of range");
    return {outputs_.data() + static_cast<std::size_t>(t) * output_dim_,
            static_cast<std::size_t>(output_dim_)};
}

std::span<const double> Trajectory::output(int t) const {
    require(t >= 0 && t < steps_, "trajectory: output index out of range");
    return {outputs_.data() + static_cast<std::size_t>(t) * output_dim_,
            static_cast<std::size_t>(output_dim_)};
}

BenchmarkSystem::BenchmarkSystem(int horizon) : DynamicalSystem(1, 1, 1, horizon) {}

double BenchmarkSystem::measurement_sigma(int t) {
    return std::sin(0.25 * t) + 2.0;
}

void BenchmarkSystem::do_step(int t, std::span<const double> x,
                              std::span<const double> w,
                              std::span<double> x_next) const {
    const double xv = x[0];
    x_next[0] = 0.5 * xv + 25.0 * xv / (1.0 + xv * xv) + 8.0 * std::cos(1.2 * t) + w[0];
}

void BenchmarkSystem::do_measure(int /*t*/, std::span<const double> x,
                                 std::span<const double> v, std::span<double> y) const {
    y[0] = x[0] * x[0] / 20.0 + v[0];
}

void BenchmarkSystem::do_output(int /*t*/, std::span<const double> x,
                                std::span<double> z) const {
    z[0] = x[0];
}

double BenchmarkSystem::do_log_likelihood(int t, std::span<const double> x,
                                          std::span<const double> y) const {
    const double sigma = measurement_sigma(t);
    return normal_log_pdf(y[0], x[0] * x[0] / 20.0, sigma * sigma);
}

void BenchmarkSystem::do_sample_initial(RandomStream& rng, std::span<double> x0) const {
    x0[0] = sample_normal(rng, 0.0, 25.0);
}

void BenchmarkSystem::do_sample_process_noise(int /*t*/, RandomStream& rng,
                                              std::span<double> w) const {
    w[0] = sample_normal(rng, 0.0, 1.0);
}

void BenchmarkSystem::do_sample_measurement_noise(int t, RandomStream& rng,
                                                  std::span<double> v) const {
    const double sigma = measurement_sigma(t);
    v[0] = sample_normal(rng, 0.0, sigma * sigma);
}

LinearGaussianSystem::LinearGaussianSystem(const LinearGaussianParams& params,
                                           int horizon)
    : DynamicalSystem(1, 1, 1, horizon), params_(params) {
    require(params_.q >= 0.0, "linear-gaussian: q must be >= 0");
    require(params_.r >= 0.0, "linear-gaussian: r must be >= 0");
    require(params_.initial_variance >= 0.0,
            "linear-gaussian: initial variance must be >= 0");
}

void LinearGaussianSystem::do_step(int /*t*/, std::span<const double> x,
                                   std::span<const double> w,
                                   std::span<double> x_next) const {
    x_next[0] = params_.a * x[0] + w[0];
}

void LinearGaussianSystem::do_measure(int /*t*/, std::span<const double> x,
                                      std::span<const double> v,
                                      std::span<double> y) const {
    y[0] = params_.c * x[0] + v[0];
}

void LinearGaussianSystem::do_output(int /*t*/, std::span<const double> x,
                                     std::span<double> z) const {
    z[0] = x[0];
}

double LinearGaussianSystem::do_log_likelihood(int /*t*/, std::span<const double> x,
                                               std::span<const double> y) const {
    return normal_log_pdf(y[0], params_.c * x[0], params_.r);
}

void LinearGaussianSystem::do_sample_initial(RandomStream& rng,
                                             std::span<double> x0) const {
    x0[0] = sample_normal(rng, params_.initial_mean, params_.initial_variance);
}

void LinearGaussianSystem::do_sample_process_noise(int /*t*/, RandomStream& rng,
                                                   std::span<double> w) const {
    w[0] = sample_normal(rng, 0.0, params_.q);
}

void LinearGaussianSystem::do_sample_measurement_noise(int /*t*/, RandomStream& rng,
                                                       std::span<double> v) const {
    v[0] = sample_normal(rng, 0.0, params_.r);
}

Trajectory simulate(const DynamicalSystem& system, const MeasurementSchedule& schedule,
                    RandomStream& rng) {
    require(schedule.horizon() == system.horizon(),
            "simulate: schedule horizon does not match system horizon");
    const int T = system.horizon();
    Trajectory traj(T + 1, system.state_dim(), system.output_dim());

    std::vector<double> w(static_cast<std::size_t>(system.state_dim()));
    std::vector<double> v(static_cast<std::size_t>(system.obs_dim()));

    system.sample_initial(rng, traj.state(0));
    for (int t = 0; t <= T; ++t) {
        system.output(t, traj.state(t), traj.output(t));
        if (schedule.contains(t)) {
            system.sample_measurement_noise(t, rng, v);
            std::vector<double> y(static_cast<std::size_t>(system.obs_dim()));
            system.measure(t, traj.state(t), v, y);
            traj.observations.emplace(t, std::move(y));
        }
        if (t < T) {
            system.sample_process_noise(t, rng, w);
            system.step(t, traj.state(t), w, traj.state(t + 1));
        }
    }
    return traj;
}

}  // namespace ipf
