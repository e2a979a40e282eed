#include "ipf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ipf/errors.hpp"
#include "ipf/parallel.hpp"

namespace ipf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sub-stream salts under the optimizer master seed.
constexpr std::uint64_t kGaStreamSalt = 0;
constexpr std::uint64_t kGaEvalSalt = 1;
constexpr std::uint64_t kRtStreamSalt = 2;
constexpr std::uint64_t kRtEvalSalt = 3;

void check_ga_params(const GaParams& p) {
    require(p.population_size >= 2, "ga: population size must be >= 2");
    require(p.population_size % 2 == 0, "ga: population size must be even");
    require(p.generations >= 1, "ga: generation count must be >= 1");
    require(p.crossover_probability >= 0.0 && p.crossover_probability <= 1.0,
            "ga: crossover probability outside [0, 1]");
    require(p.mutation_probability_per_gene >= 0.0 &&
                p.mutation_probability_per_gene <= 1.0,
            "ga: mutation probability outside [0, 1]");
    require(p.sigma_coefficient > 0.0, "ga: sigma coefficient must be positive");
}

// Evaluates one individual; returns its cost, or NaN when the schedule caused
// filter degeneracy and the individual must be killed.
double evaluate_individual(const CostOracle& cost, const ScheduleBits& genome,
                           std::uint64_t seed) {
    try {
        const CostEstimate estimate = cost(decode(genome), seed);
        if (estimate.degenerate_draws > 0) return kNaN;
        return estimate.value;
    } catch (const ScheduleUnevaluable&) {
        return kNaN;
    }
}

int flip_random_bit(ScheduleBits& bits, std::uint8_t wanted, RandomStream& rng) {
    std::vector<int> positions;
    positions.reserve(bits.bits.size());
    for (int i = 0; i < bits.length(); ++i)
        if (bits.bits[static_cast<std::size_t>(i)] == wanted) positions.push_back(i);
    std::uniform_int_distribution<std::size_t> pick(0, positions.size() - 1);
    const int chosen = positions[pick(rng)];
    bits.bits[static_cast<std::size_t>(chosen)] = wanted ? 0 : 1;
    return chosen;
}

}  // namespace

std::vector<double> sigma_scale(std::span<const double> live_costs,
                                double sigma_coefficient) {
    require(!live_costs.empty(), "sigma_scale: no live individuals");
    require(sigma_coefficient > 0.0, "sigma_scale: coefficient must be positive");

    const std::size_t n = live_costs.size();
    double mean_fitness = 0.0;
    for (const double c : live_costs) mean_fitness += -c;
    mean_fitness /= static_cast<double>(n);

    double variance = 0.0;
    for (const double c : live_costs) {
        const double d = -c - mean_fitness;
        variance += d * d;
    }
    variance /= static_cast<double>(n);
    const double sd = std::sqrt(variance);

    std::vector<double> expected(n, 1.0);
    if (sd == 0.0) return expected;
    for (std::size_t i = 0; i < n; ++i) {
        const double raw = 1.0 + (-live_costs[i] - mean_fitness) / (sigma_coefficient * sd);
        expected[i] = std::max(0.1, raw);
    }
    return expected;
}

std::vector<int> sus_select(std::span<const double> expected_values, int count,
                            RandomStream& rng) {
    require(count >= 1, "sus_select: selection count must be >= 1");
    double total = 0.0;
    for (const double v : expected_values) {
        require(v >= 0.0, "sus_select: negative expected value");
        total += v;
    }
    if (total <= 0.0)
        throw std::invalid_argument("sus_select: extinct selection pool");

    std::vector<int> owner;
    std::vector<double> cumulative;
    double running = 0.0;
    for (std::size_t i = 0; i < expected_values.size(); ++i) {
        if (expected_values[i] > 0.0) {
            running += expected_values[i];
            owner.push_back(static_cast<int>(i));
            cumulative.push_back(running);
        }
    }

    const double spacing = running / count;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double start = unit(rng) * spacing;

    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(count));
    std::size_t slot = 0;
    for (int j = 0; j < count; ++j) {
        const double pointer = start + j * spacing;
        while (pointer >= cumulative[slot] && slot + 1 < cumulative.size()) ++slot;
        selected.push_back(owner[slot]);
    }
    return selected;
}

std::pair<ScheduleBits, ScheduleBits> count_preserving_crossover(
    const ScheduleBits& parent1, const ScheduleBits& parent2, RandomStream& rng) {
    require(parent1.length() == parent2.length(), "crossover: length mismatch");
    require(parent1.popcount() == parent2.popcount(), "crossover: popcount mismatch");

    ScheduleBits child1 = parent1;
    ScheduleBits child2 = parent2;

    std::vector<int> disagreement;
    for (int i = 0; i < parent1.length(); ++i)
        if (parent1.bits[static_cast<std::size_t>(i)] !=
            parent2.bits[static_cast<std::size_t>(i)])
            disagreement.push_back(i);

    // Equal popcounts make the disagreement set even-sized; a uniform split
    // into halves keeps both children at the parents' weight.
    std::shuffle(disagreement.begin(), disagreement.end(), rng);
    const std::size_t half = disagreement.size() / 2;
    for (std::size_t j = 0; j < disagreement.size(); ++j) {
        const auto pos = static_cast<std::size_t>(disagreement[j]);
        child1.bits[pos] = j < half ? 1 : 0;
        child2.bits[pos] = j < half ? 0 : 1;
    }
    return {std::move(child1), std::move(child2)};
}

ScheduleBits mutate(const ScheduleBits& individual, double p_gene, RandomStream& rng) {
    require(p_gene >= 0.0 && p_gene <= 1.0, "mutate: probability outside [0, 1]");
    ScheduleBits out = individual;
    const int target = individual.popcount();

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& bit : out.bits)
        if (unit(rng) < p_gene) bit = bit ? 0 : 1;

    int weight = out.popcount();
    while (weight > target) {
        flip_random_bit(out, 1, rng);
        --weight;
    }
    while (weight < target) {
        flip_random_bit(out, 0, rng);
        ++weight;
    }
    return out;
}

OptimizationResult optimize_ga(const CostOracle& cost, int horizon, int budget,
                               const GaParams& params, std::uint64_t seed,
                               int workers, const GaObserver& observer) {
    check_ga_params(params);
    require(budget >= 1 && budget <= horizon + 1, "ga: invalid measurement budget");

    const int pop = params.population_size;
    RandomStream ga_rng = make_stream(derive_seed(seed, kGaStreamSalt));
    const std::uint64_t eval_base = derive_seed(seed, kGaEvalSalt);

    std::vector<ScheduleBits> individuals;
    individuals.reserve(static_cast<std::size_t>(pop));
    for (int i = 0; i < pop; ++i)
        individuals.push_back(encode(random_schedule(horizon, budget, ga_rng)));

    GaState state;
    long evaluations = 0;
    std::uint64_t eval_counter = 0;

    for (int gen = 1; gen <= params.generations; ++gen) {
        std::vector<double> costs(static_cast<std::size_t>(pop), kNaN);
        std::vector<std::uint64_t> seeds(static_cast<std::size_t>(pop));
        for (int i = 0; i < pop; ++i)
            seeds[static_cast<std::size_t>(i)] =
                derive_seed(eval_base, eval_counter + static_cast<std::uint64_t>(i));

        parallel_for(pop, workers, [&](long i) {
            costs[static_cast<std::size_t>(i)] = evaluate_individual(
                cost, individuals[static_cast<std::size_t>(i)],
                seeds[static_cast<std::size_t>(i)]);
        });
        eval_counter += static_cast<std::uint64_t>(pop);
        evaluations += pop;

        std::vector<std::uint8_t> alive(static_cast<std::size_t>(pop), 0);
        double min_cost = std::numeric_limits<double>::infinity();
        double cost_sum = 0.0;
        int live_count = 0;
        for (int i = 0; i < pop; ++i) {
            const double c = costs[static_cast<std::size_t>(i)];
            if (std::isnan(c)) continue;
            alive[static_cast<std::size_t>(i)] = 1;
            ++live_count;
            cost_sum += c;
            min_cost = std::min(min_cost, c);
        }
        if (live_count == 0) throw PopulationExtinct(gen);

        state.generation = gen;
        state.individuals = individuals;
        state.costs = costs;
        state.alive = alive;
        state.history.push_back({min_cost, cost_sum / live_count, evaluations});
        if (observer) observer(state);

        if (gen == params.generations) {
            int best = -1;
            for (int i = 0; i < pop; ++i) {
                if (!alive[static_cast<std::size_t>(i)]) continue;
                if (best < 0 ||
                    costs[static_cast<std::size_t>(i)] < costs[static_cast<std::size_t>(best)])
                    best = i;
            }
            return {decode(individuals[static_cast<std::size_t>(best)]),
                    costs[static_cast<std::size_t>(best)], state.history, evaluations};
        }

        // Selection: live costs are sigma-scaled, killed individuals keep
        // expected value 0 and can never become parents.
        std::vector<double> live_costs;
        live_costs.reserve(static_cast<std::size_t>(live_count));
        for (int i = 0; i < pop; ++i)
            if (alive[static_cast<std::size_t>(i)])
                live_costs.push_back(costs[static_cast<std::size_t>(i)]);
        const std::vector<double> scaled =
            sigma_scale(live_costs, params.sigma_coefficient);

        std::vector<double> expected(static_cast<std::size_t>(pop), 0.0);
        std::size_t next_live = 0;
        for (int i = 0; i < pop; ++i)
            if (alive[static_cast<std::size_t>(i)])
                expected[static_cast<std::size_t>(i)] = scaled[next_live++];

        const std::vector<int> parents = sus_select(expected, pop, ga_rng);

        std::vector<ScheduleBits> next;
        next.reserve(static_cast<std::size_t>(pop));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int pair = 0; pair + 1 < pop; pair += 2) {
            const ScheduleBits& a = individuals[static_cast<std::size_t>(parents[static_cast<std::size_t>(pair)])];
            const ScheduleBits& b = individuals[static_cast<std::size_t>(parents[static_cast<std::size_t>(pair) + 1])];
            ScheduleBits child1 = a;
            ScheduleBits child2 = b;
            if (unit(ga_rng) < params.crossover_probability)
                std::tie(child1, child2) = count_preserving_crossover(a, b, ga_rng);
            next.push_back(mutate(child1, params.mutation_probability_per_gene, ga_rng));
            next.push_back(mutate(child2, params.mutation_probability_per_gene, ga_rng));
        }
        individuals = std::move(next);
    }
    throw std::logic_error("ga: unreachable");
}

OptimizationResult optimize_random_trials(const CostOracle& cost, int horizon,
                                          int budget, int budget_evals,
                                          std::uint64_t seed, int workers) {
    require(budget_evals >= 1, "random trials: evaluation budget must be >= 1");
    require(budget >= 1 && budget <= horizon + 1,
            "random trials: invalid measurement budget");

    RandomStream draw_rng = make_stream(derive_seed(seed, kRtStreamSalt));
    const std::uint64_t eval_base = derive_seed(seed, kRtEvalSalt);

    std::vector<MeasurementSchedule> trials;
    trials.reserve(static_cast<std::size_t>(budget_evals));
    for (int e = 0; e < budget_evals; ++e)
        trials.push_back(random_schedule(horizon, budget, draw_rng));

    std::vector<double> costs(static_cast<std::size_t>(budget_evals), kNaN);
    parallel_for(budget_evals, workers, [&](long e) {
        try {
            costs[static_cast<std::size_t>(e)] =
                cost(trials[static_cast<std::size_t>(e)],
                     derive_seed(eval_base, static_cast<std::uint64_t>(e)))
                    .value;
        } catch (const ScheduleUnevaluable&) {
            // unevaluable trial: keeps NaN, excluded from the running stats
        }
    });

    std::vector<GenerationStats> history;
    history.reserve(static_cast<std::size_t>(budget_evals));
    double running_min = kNaN;
    double running_sum = 0.0;
    int evaluated = 0;
    int best = -1;
    for (int e = 0; e < budget_evals; ++e) {
        const double c = costs[static_cast<std::size_t>(e)];
        if (!std::isnan(c)) {
            running_sum += c;
            ++evaluated;
            if (best < 0 || c < costs[static_cast<std::size_t>(best)]) best = e;
            running_min = costs[static_cast<std::size_t>(best)];
        }
        history.push_back({running_min,
                           evaluated > 0 ? running_sum / evaluated : kNaN,
                           static_cast<long>(e) + 1});
    }
    if (best < 0) throw std::runtime_error("random trials: all trials unevaluable");

    return {trials[static_cast<std::size_t>(best)],
            costs[static_cast<std::size_t>(best)], std::move(history),
            budget_evals};
}

}  // namespace ipf
