#pragma once

#include "sqrs/phase.hpp"

namespace sqrs {

/// What one Bob announces publicly after a round.
struct BobRecord {
    bool applied_phase = false;
    Basis basis = Basis::X;
    Outcome outcome = Outcome::Plus;

    friend bool operator==(const BobRecord &, const BobRecord &) = default;
};

}  // namespace sqrs
