#pragma once

#include <stdexcept>
#include <string>

namespace ipf {

// Raised when every Monte Carlo draw for a schedule ended in filter
// degeneracy, so no cost can be reported for it.
class ScheduleUnevaluable : public std::runtime_error {
public:
    explicit ScheduleUnevaluable(int draws)
        : std::runtime_error("schedule unevaluable: all " + std::to_string(draws) +
                             " draws degenerated"),
          draws_(draws) {}

    int draws() const { return draws_; }

private:
    int draws_;
};

// Raised when an entire GA generation was killed by degeneracy.
class PopulationExtinct : public std::runtime_error {
public:
    explicit PopulationExtinct(int generation)
        : std::runtime_error("population extinct at generation " +
                             std::to_string(generation)),
          generation_(generation) {}

    int generation() const { return generation_; }

private:
    int generation_;
};

inline void require(bool condition, const char* what) {
    if (!condition) throw std::invalid_argument(what);
}

}  // namespace ipf
