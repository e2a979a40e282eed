#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ipf/estimator.hpp"
#include "ipf/rng.hpp"
#include "ipf/schedule.hpp"

namespace ipf {

struct GaParams {
    int population_size = 50;  // must be even, for sequential pairing
    int generations = 25;
    double crossover_probability = 1.0;
    double mutation_probability_per_gene = 0.003;
    double sigma_coefficient = 1.0;
};

struct GenerationStats {
    double min_cost = 0.0;   // over live individuals
    double mean_cost = 0.0;  // over live individuals
    long evaluations = 0;    // cumulative cost-function evaluations
};

/// Snapshot of the GA population after a generation was evaluated. Costs of
/// killed individuals are NaN and their alive flag is 0.
struct GaState {
    int generation = 0;
    std::vector<ScheduleBits> individuals;
    std::vector<double> costs;
    std::vector<std::uint8_t> alive;
    std::vector<GenerationStats> history;
};

struct OptimizationResult {
    MeasurementSchedule best_schedule;
    double best_cost = 0.0;
    std::vector<GenerationStats> history;
    long evaluations_used = 0;
};

/// Cost oracle: expected-MSE estimate of one schedule, evaluated with the
/// given derived seed. A result with degenerate_draws > 0, or a thrown
/// ScheduleUnevaluable, kills the corresponding GA individual.
using CostOracle =
    std::function<CostEstimate(const MeasurementSchedule&, std::uint64_t seed)>;

using GaObserver = std::function<void(const GaState&)>;

// Sigma scaling of live costs into selection expected values. Fitness is the
// negated cost; with population mean fbar and population standard deviation
// sd (divisor = live count), the expected value is
// max(0.1, 1 + (f - fbar) / (sigma_coefficient * sd)), or 1 for all when
// sd = 0.
std::vector<double> sigma_scale(std::span<const double> live_costs,
                                double sigma_coefficient);

// Stochastic universal sampling: one spin, count equally spaced pointers over
// the cumulative expected-value wheel. Index i is selected floor(count*p_i)
// or ceil(count*p_i) times, p_i its share of the total. Zero-valued entries
// are never selected; an all-zero wheel is an error.
std::vector<int> sus_select(std::span<const double> expected_values, int count,
                            RandomStream& rng);

// Count-preserving recombination: agreed positions are copied to both
// children; the positions set in exactly one parent are split uniformly at
// random into two equal halves, one set in each child. Both children keep the
// parents' popcount.
std::pair<ScheduleBits, ScheduleBits> count_preserving_crossover(
    const ScheduleBits& parent1, const ScheduleBits& parent2, RandomStream& rng);

// Flips each gene independently with probability p_gene, then repairs back to
// the input popcount by setting/unsetting uniformly random bits.
ScheduleBits mutate(const ScheduleBits& individual, double p_gene, RandomStream& rng);

/// Genetic algorithm for the budget-constrained schedule selection problem.
/// Returns the best live individual of the LAST generation, not the best
/// ever seen; with a noisy cost oracle the recorded min-cost history is
/// therefore not necessarily monotone. Individual evaluations within a
/// generation run concurrently on derived seeds, so the outcome is
/// independent of the worker count. Throws PopulationExtinct when a whole
/// generation is killed.
OptimizationResult optimize_ga(const CostOracle& cost, int horizon, int budget,
                               const GaParams& params, std::uint64_t seed,
                               int workers = 1, const GaObserver& observer = {});

/// Baseline: budget_evals independent uniform schedules, each evaluated once;
/// returns the cheapest. History records the running minimum and running mean
/// after every evaluation.
OptimizationResult optimize_random_trials(const CostOracle& cost, int horizon,
                                          int budget, int budget_evals,
                                          std::uint64_t seed, int workers = 1);

}  // namespace ipf
