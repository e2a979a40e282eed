#include "ipf/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ipf/errors.hpp"

namespace ipf {

MeasurementSchedule::MeasurementSchedule(int horizon, std::vector<int> times)
    : horizon_(horizon), times_(std::move(times)) {
    require(horizon_ >= 1, "schedule: horizon must be >= 1");
    std::sort(times_.begin(), times_.end());
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (times_[i] < 0 || times_[i] > horizon_)
            throw std::invalid_argument("schedule: time " + std::to_string(times_[i]) +
                                        " outside [0, " + std::to_string(horizon_) + "]");
        if (i > 0 && times_[i] == times_[i - 1])
            throw std::invalid_argument("schedule: duplicate time " +
                                        std::to_string(times_[i]));
    }
}

bool MeasurementSchedule::contains(int t) const {
    return std::binary_search(times_.begin(), times_.end(), t);
}

std::string MeasurementSchedule::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(times_[i]);
    }
    return out;
}

MeasurementSchedule MeasurementSchedule::from_csv(const std::string& text, int horizon) {
    std::vector<int> times;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        // trim surrounding blanks
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) continue;
        item = item.substr(first, last - first + 1);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("schedule: cannot parse time '" + item + "'");
        }
        if (used != item.size())
            throw std::invalid_argument("schedule: cannot parse time '" + item + "'");
        times.push_back(value);
    }
    return MeasurementSchedule(horizon, std::move(times));
}

int ScheduleBits::popcount() const {
    int count = 0;
    for (const auto b : bits) count += b ? 1 : 0;
    return count;
}

MeasurementSchedule regular_schedule(int horizon, int budget) {
    require(horizon >= 1, "regular_schedule: horizon must be >= 1");
    require(budget >= 2, "regular_schedule: budget must be >= 2");
    require(budget <= horizon + 1, "regular_schedule: budget exceeds horizon + 1");

    std::vector<int> times;
    times.reserve(static_cast<std::size_t>(budget));
    for (int k = 0; k < budget; ++k) {
        const double value = static_cast<double>(k) * horizon / (budget - 1);
        times.push_back(static_cast<int>(std::llround(value)));
    }
    std::sort(times.begin(), times.end());
    if (std::adjacent_find(times.begin(), times.end()) != times.end())
        throw std::invalid_argument(
            "regular_schedule: rounding collision drops cardinality below budget");
    return MeasurementSchedule(horizon, std::move(times));
}

MeasurementSchedule random_schedule(int horizon, int budget, RandomStream& rng) {
    require(horizon >= 1, "random_schedule: horizon must be >= 1");
    require(budget >= 1, "random_schedule: budget must be >= 1");
    require(budget <= horizon + 1, "random_schedule: budget exceeds horizon + 1");

    std::vector<int> all(static_cast<std::size_t>(horizon) + 1);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> picked;
    picked.reserve(static_cast<std::size_t>(budget));
    std::sample(all.begin(), all.end(), std::back_inserter(picked), budget, rng);
    return MeasurementSchedule(horizon, std::move(picked));
}

ScheduleBits encode(const MeasurementSchedule& schedule) {
    ScheduleBits out;
    out.bits.assign(static_cast<std::size_t>(schedule.horizon()) + 1, 0);
    for (const int t : schedule.times()) out.bits[static_cast<std::size_t>(t)] = 1;
    return out;
}

MeasurementSchedule decode(const ScheduleBits& bits) {
    require(bits.length() >= 2, "decode: bitstring must cover horizon >= 1");
    std::vector<int> times;
    for (int t = 0; t < bits.length(); ++t)
        if (bits.bits[static_cast<std::size_t>(t)]) times.push_back(t);
    return MeasurementSchedule(bits.length() - 1, std::move(times));
}

std::uint64_t schedule_hash(const MeasurementSchedule& schedule) {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(schedule.horizon()));
    for (const int t : schedule.times())
        h = mix64(h ^ static_cast<std::uint64_t>(t + 1));
    return h;
}

}  // namespace ipf
