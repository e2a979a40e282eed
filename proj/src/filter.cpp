#include "ipf/filter.hpp"

#include <algorithm>
#include <cmath>

#include "ipf/errors.hpp"

namespace ipf {

namespace {

void check_observation_keys(const MeasurementSchedule& schedule,
                            const ObservationMap& observations, int obs_dim) {
    require(static_cast<int>(observations.size()) == schedule.cardinality(),
            "filter: observations must be keyed exactly by the schedule times");
    for (const int t : schedule.times()) {
        const auto it = observations.find(t);
        require(it != observations.end(),
                "filter: observation missing for a scheduled time");
        require(static_cast<int>(it->second.size()) == obs_dim,
                "filter: observation dimension mismatch");
    }
}

}  // namespace

std::span<double> ParticleEnsemble::particle(int i) {
    return {states.data() + static_cast<std::size_t>(i) * state_dim,
            static_cast<std::size_t>(state_dim)};
}

std::span<const double> ParticleEnsemble::particle(int i) const {
    return {states.data() + static_cast<std::size_t>(i) * state_dim,
            static_cast<std::size_t>(state_dim)};
}

ParticleEnsemble ParticleEnsemble::initialize(const DynamicalSystem& system, int count,
                                              RandomStream& rng) {
    require(count >= 1, "ensemble: particle count must be >= 1");
    ParticleEnsemble ens;
    ens.state_dim = system.state_dim();
    ens.states.resize(static_cast<std::size_t>(count) * ens.state_dim);
    ens.weights.assign(static_cast<std::size_t>(count), 1.0 / count);
    for (int i = 0; i < count; ++i) system.sample_initial(rng, ens.particle(i));
    return ens;
}

std::span<const double> FilterResult::estimate(int t) const {
    require(t >= 0 && t < defined_steps(), "filter result: estimate out of range");
    return {estimates.data() + static_cast<std::size_t>(t) * output_dim,
            static_cast<std::size_t>(output_dim)};
}

std::vector<int> systematic_resample(std::span<const double> weights,
                                     RandomStream& rng) {
    const int count = static_cast<int>(weights.size());
    require(count >= 1, "systematic_resample: empty weight vector");
    double sum = 0.0;
    for (const double w : weights) {
        require(w >= 0.0, "systematic_resample: negative weight");
        sum += w;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "systematic_resample: weights not normalized");

    // Cumulative wheel over the strictly positive weights only, so that a
    // zero-weight particle can never swallow a pointer through rounding of
    // the running sum.
    std::vector<int> owner;
    std::vector<double> cumulative;
    owner.reserve(weights.size());
    cumulative.reserve(weights.size());
    double running = 0.0;
    for (int i = 0; i < count; ++i) {
        if (weights[i] > 0.0) {
            running += weights[i];
            owner.push_back(i);
            cumulative.push_back(running);
        }
    }

    const double spacing = running / count;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double start = unit(rng) * spacing;

    std::vector<int> indices;
    indices.reserve(weights.size());
    std::size_t slot = 0;
    for (int j = 0; j < count; ++j) {
        const double pointer = start + j * spacing;
        while (pointer >= cumulative[slot] && slot + 1 < cumulative.size()) ++slot;
        indices.push_back(owner[slot]);
    }
    return indices;
}

void predict(const DynamicalSystem& system, int t, ParticleEnsemble& ensemble,
             RandomStream& rng) {
    require(t >= 1 && t <= system.horizon(), "predict: time index out of range");
    const int n = system.state_dim();
    std::vector<double> noise(static_cast<std::size_t>(n));
    std::vector<double> current(static_cast<std::size_t>(n));
    for (int i = 0; i < ensemble.size(); ++i) {
        auto x = ensemble.particle(i);
        std::copy(x.begin(), x.end(), current.begin());
        system.sample_process_noise(t - 1, rng, noise);
        system.step(t - 1, current, noise, x);
    }
}

bool correct(const DynamicalSystem& system, int t, std::span<const double> y,
             ParticleEnsemble& ensemble) {
    double sum = 0.0;
    for (int i = 0; i < ensemble.size(); ++i) {
        const double w =
            std::exp(system.measurement_log_likelihood(t, ensemble.particle(i), y));
        ensemble.weights[static_cast<std::size_t>(i)] = w;
        sum += w;
    }
    // Degeneracy is the literal event that every likelihood underflowed;
    // denormal but nonzero sums still count as alive.
    if (sum == 0.0) return false;
    for (double& w : ensemble.weights) w /= sum;
    return true;
}

FilterResult run_filter(const DynamicalSystem& system,
                        const MeasurementSchedule& schedule,
                        const ObservationMap& observations, int num_particles,
                        RandomStream& rng) {
    require(num_particles >= 1, "run_filter: particle count must be >= 1");
    require(schedule.horizon() == system.horizon(),
            "run_filter: schedule horizon does not match system horizon");
    check_observation_keys(schedule, observations, system.obs_dim());

    const int T = system.horizon();
    const int p = system.output_dim();
    FilterResult result;
    result.output_dim = p;
    result.estimates.reserve(static_cast<std::size_t>(T + 1) * p);

    ParticleEnsemble ens = ParticleEnsemble::initialize(system, num_particles, rng);
    std::vector<double> resampled(ens.states.size());
    std::vector<double> z(static_cast<std::size_t>(p));
    std::vector<double> z_acc(static_cast<std::size_t>(p));

    for (int t = 0; t <= T; ++t) {
        if (t > 0) predict(system, t, ens, rng);

        if (schedule.contains(t)) {
            if (!correct(system, t, observations.at(t), ens)) {
                result.degenerate_at = t;
                return result;
            }
            std::fill(z_acc.begin(), z_acc.end(), 0.0);
            for (int i = 0; i < ens.size(); ++i) {
                system.output(t, ens.particle(i), z);
                const double w = ens.weights[static_cast<std::size_t>(i)];
                for (int d = 0; d < p; ++d) z_acc[static_cast<std::size_t>(d)] += w * z[static_cast<std::size_t>(d)];
            }
            result.estimates.insert(result.estimates.end(), z_acc.begin(), z_acc.end());

            const std::vector<int> picks = systematic_resample(ens.weights, rng);
            for (int i = 0; i < ens.size(); ++i) {
                const auto src = ens.particle(picks[static_cast<std::size_t>(i)]);
                std::copy(src.begin(), src.end(),
                          resampled.begin() + static_cast<std::size_t>(i) * ens.state_dim);
            }
            ens.states.swap(resampled);
            std::fill(ens.weights.begin(), ens.weights.end(), 1.0 / num_particles);
        } else {
            std::fill(z_acc.begin(), z_acc.end(), 0.0);
            for (int i = 0; i < ens.size(); ++i) {
                system.output(t, ens.particle(i), z);
                for (int d = 0; d < p; ++d) z_acc[static_cast<std::size_t>(d)] += z[static_cast<std::size_t>(d)];
            }
            for (double& v : z_acc) v /= num_particles;
            result.estimates.insert(result.estimates.end(), z_acc.begin(), z_acc.end());
        }
    }
    return result;
}

KalmanTrace kalman_trace(const LinearGaussianSystem& system,
                         const MeasurementSchedule& schedule,
                         const ObservationMap& observations) {
    require(schedule.horizon() == system.horizon(),
            "kalman: schedule horizon does not match system horizon");
    check_observation_keys(schedule, observations, 1);

    const auto& prm = system.params();
    const int T = system.horizon();
    KalmanTrace trace;
    trace.means.reserve(static_cast<std::size_t>(T) + 1);
    trace.variances.reserve(static_cast<std::size_t>(T) + 1);

    double mean = prm.initial_mean;
    double var = prm.initial_variance;
    for (int t = 0; t <= T; ++t) {
        if (t > 0) {
            mean = prm.a * mean;
            var = prm.a * prm.a * var + prm.q;
        }
        if (schedule.contains(t)) {
            const double y = observations.at(t)[0];
            const double innovation_var = prm.c * prm.c * var + prm.r;
            // innovation_var = 0 means the prediction is already exact.
            if (innovation_var > 0.0) {
                const double gain = var * prm.c / innovation_var;
                mean += gain * (y - prm.c * mean);
                var = (1.0 - gain * prm.c) * var;
            }
        }
        trace.means.push_back(mean);
        trace.variances.push_back(var);
    }
    return trace;
}

FilterResult run_kalman_oracle(const LinearGaussianSystem& system,
                               const MeasurementSchedule& schedule,
                               const ObservationMap& observations) {
    const KalmanTrace trace = kalman_trace(system, schedule, observations);
    FilterResult result;
    result.output_dim = 1;
    result.estimates = trace.means;  // z = x for this system
    return result;
}

}  // namespace ipf
