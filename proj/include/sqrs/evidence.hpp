#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "sqrs/phase.hpp"

namespace sqrs {

/// A subset of Bobs, bit b set when Bob b's phase is part of the sum. Identifies one φ_k(m).
using CombinationKey = std::uint32_t;

inline int key_size(CombinationKey k) { return std::popcount(k); }
inline CombinationKey single_bob_key(int b) { return CombinationKey{1} << b; }
inline CombinationKey all_bobs_key(int n_bobs) {
    return n_bobs >= 32 ? ~CombinationKey{0} : (CombinationKey{1} << n_bobs) - 1;
}

/// One ±1 result whose probability is (1 + outcome·cos(φ + encoding + measurement))/2,
/// where φ is the phase sum named by the combination key.
struct PhaseMeasurement {
    int measurement_quarters = 0;  // summed basis phases, in units of π/2
    int encoding_quarters = 0;     // known encoding phase, in units of π/2
    Outcome outcome = Outcome::Plus;

    /// Offset folded into the cosine, with a -1 outcome expressed as an extra π.
    int effective_quarters() const {
        int q = measurement_quarters + encoding_quarters + (outcome == Outcome::Minus ? 2 : 0);
        return ((q % 4) + 4) % 4;
    }
    friend bool operator==(const PhaseMeasurement &, const PhaseMeasurement &) = default;
};

/// Measurements grouped by the phase combination they inform.
class EvidenceSet {
  public:
    void add(CombinationKey key, PhaseMeasurement m) { by_key_[key].push_back(m); }
    void merge(const EvidenceSet &other) {
        for (const auto &[k, v] : other.by_key_) by_key_[k].insert(by_key_[k].end(), v.begin(), v.end());
    }

    const std::map<CombinationKey, std::vector<PhaseMeasurement>> &entries() const { return by_key_; }
    std::size_t count(CombinationKey key) const {
        auto it = by_key_.find(key);
        return it == by_key_.end() ? 0 : it->second.size();
    }
    std::size_t total() const {
        std::size_t n = 0;
        for (const auto &[k, v] : by_key_) n += v.size();
        return n;
    }
    bool empty() const { return total() == 0; }

  private:
    std::map<CombinationKey, std::vector<PhaseMeasurement>> by_key_;
};

}  // namespace sqrs
