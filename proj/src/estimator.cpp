#include "ipf/estimator.hpp"

#include <cmath>
#include <limits>

#include "ipf/errors.hpp"
#include "ipf/filter.hpp"
#include "ipf/parallel.hpp"

namespace ipf {

double trajectory_mse(std::span<const double> outputs,
                      std::span<const double> estimates, int dim) {
    require(dim >= 1, "trajectory_mse: dimension must be >= 1");
    require(outputs.size() == estimates.size(), "trajectory_mse: length mismatch");
    require(outputs.size() % static_cast<std::size_t>(dim) == 0,
            "trajectory_mse: length not a multiple of the dimension");
    const std::size_t steps = outputs.size() / static_cast<std::size_t>(dim);
    require(steps >= 1, "trajectory_mse: empty sequences");

    double total = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const double d = outputs[i] - estimates[i];
        total += d * d;
    }
    return total / static_cast<double>(steps);
}

double relative_gain(double mse_reference, double mse_candidate) {
    require(mse_reference > 0.0, "relative_gain: reference MSE must be positive");
    require(mse_candidate >= 0.0, "relative_gain: candidate MSE must be nonnegative");
    return (mse_reference - mse_candidate) / mse_reference;
}

CostEstimate estimate_expected_mse(const DynamicalSystem& system,
                                   const MeasurementSchedule& schedule, int draws,
                                   int num_particles, std::uint64_t seed,
                                   int workers) {
    require(draws >= 1, "estimate_expected_mse: draw count must be >= 1");
    require(num_particles >= 1, "estimate_expected_mse: particle count must be >= 1");
    require(schedule.horizon() == system.horizon(),
            "estimate_expected_mse: schedule horizon does not match system horizon");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> per_draw(static_cast<std::size_t>(draws), nan);

    parallel_for(draws, workers, [&](long k) {
        RandomStream rng = make_stream(derive_seed(seed, static_cast<std::uint64_t>(k)));
        const Trajectory traj = simulate(system, schedule, rng);
        const FilterResult fr =
            run_filter(system, schedule, traj.observations, num_particles, rng);
        if (!fr.degenerate_at)
            per_draw[static_cast<std::size_t>(k)] = trajectory_mse(
                traj.outputs_flat(), fr.estimates_flat(), system.output_dim());
    });

    CostEstimate est;
    est.draws = draws;
    est.per_draw_mse = std::move(per_draw);
    double sum = 0.0;
    int valid = 0;
    for (const double mse : est.per_draw_mse) {
        if (std::isnan(mse)) {
            ++est.degenerate_draws;
        } else {
            sum += mse;
            ++valid;
        }
    }
    if (valid == 0) throw ScheduleUnevaluable(draws);
    est.value = sum / valid;
    return est;
}

}  // namespace ipf
