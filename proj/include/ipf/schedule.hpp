#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipf/rng.hpp"

namespace ipf {

/// Set of measurement times: a sorted subset of {0, ..., horizon}.
class MeasurementSchedule {
public:
    // Accepts times in any order, sorts them, and validates range and
    // uniqueness.
    MeasurementSchedule(int horizon, std::vector<int> times);

    int horizon() const { return horizon_; }
    const std::vector<int>& times() const { return times_; }
    int cardinality() const { return static_cast<int>(times_.size()); }
    bool contains(int t) const;

    // "0,3,6" style text form, used in CSV output and on the command line.
    std::string to_csv() const;
    static MeasurementSchedule from_csv(const std::string& text, int horizon);

    bool operator==(const MeasurementSchedule&) const = default;

private:
    int horizon_;
    std::vector<int> times_;
};

/// Bitstring genome view of a schedule: bit t is set iff time t is scheduled.
/// Length is always horizon + 1.
struct ScheduleBits {
    std::vector<std::uint8_t> bits;

    int length() const { return static_cast<int>(bits.size()); }
    int popcount() const;

    bool operator==(const ScheduleBits&) const = default;
};

// Equally spaced baseline: { Round[k*T/(N-1)] : k = 0..N-1 } with round half
// away from zero. Requires 2 <= budget <= horizon + 1. A rounding collision
// that drops the cardinality below the budget is reported as an error.
MeasurementSchedule regular_schedule(int horizon, int budget);

// Uniform draw over all (horizon+1 choose budget) subsets of size budget.
MeasurementSchedule random_schedule(int horizon, int budget, RandomStream& rng);

ScheduleBits encode(const MeasurementSchedule& schedule);
MeasurementSchedule decode(const ScheduleBits& bits);

// Stable content hash, used to derive replayable per-schedule seeds.
std::uint64_t schedule_hash(const MeasurementSchedule& schedule);

}  // namespace ipf
