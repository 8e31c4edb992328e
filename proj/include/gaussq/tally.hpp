#pragma once

#include <map>
#include <string>

namespace gaussq {

// Named query/cost counters. Values are doubles because symbolic counts
// (e.g. fixed-point amplification rounds at tiny amplitudes) can exceed the
// range of any integer type.
struct ResourceTally {
    std::map<std::string, double> counts;

    void add(const std::string& name, double amount) { counts[name] += amount; }
    double get(const std::string& name) const {
        auto it = counts.find(name);
        return it == counts.end() ? 0.0 : it->second;
    }
    ResourceTally& operator+=(const ResourceTally& other) {
        for (const auto& [k, v] : other.counts) counts[k] += v;
        return *this;
    }
    // Every counter multiplied by `times`, as when a routine is invoked
    // repeatedly inside another one.
    ResourceTally scaled(double times) const {
        ResourceTally out;
        for (const auto& [k, v] : counts) out.counts[k] = v * times;
        return out;
    }
    bool operator==(const ResourceTally&) const = default;
};

inline ResourceTally operator+(ResourceTally a, const ResourceTally& b) { return a += b; }

}  // namespace gaussq
