#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sqrs {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

/// Reduces an angle to [0, 2π) by floor division.
inline double canonical_angle(double radians) {
    double r = radians - kTwoPi * std::floor(radians / kTwoPi);
    // floor can leave r == 2π for tiny negative inputs.
    return r >= kTwoPi ? 0.0 : r;
}

/// A phase in radians, always held in [0, 2π).
class PhaseAngle {
  public:
    constexpr PhaseAngle() = default;
    explicit PhaseAngle(double radians) : value_(canonical_angle(radians)) {}

    double value() const { return value_; }

    friend PhaseAngle operator+(PhaseAngle a, PhaseAngle b) { return PhaseAngle(a.value_ + b.value_); }
    friend PhaseAngle operator-(PhaseAngle a, PhaseAngle b) { return PhaseAngle(a.value_ - b.value_); }
    PhaseAngle &operator+=(PhaseAngle o) {
        *this = *this + o;
        return *this;
    }
    friend bool operator==(PhaseAngle a, PhaseAngle b) = default;

  private:
    double value_ = 0.0;
};

/// Alice's encoding phases {0, π/2, π, 3π/2}, stored as quarter turns.
enum class EncodingPhase : std::uint8_t { Zero = 0, HalfPi = 1, Pi = 2, ThreeHalfPi = 3 };

inline int quarter_turns(EncodingPhase e) { return static_cast<int>(e); }
inline EncodingPhase encoding_from_quarter_turns(int q) { return static_cast<EncodingPhase>(((q % 4) + 4) % 4); }
inline double radians(EncodingPhase e) { return kHalfPi * quarter_turns(e); }
inline EncodingPhase operator+(EncodingPhase a, EncodingPhase b) {
    return encoding_from_quarter_turns(quarter_turns(a) + quarter_turns(b));
}

enum class Basis : std::uint8_t { X = 0, Y = 1 };

/// Extra phase a measurement in this basis adds to the cosine argument (X → 0, Y → π/2).
inline double basis_phase(Basis b) { return b == Basis::X ? 0.0 : kHalfPi; }
inline int basis_quarter_turns(Basis b) { return b == Basis::X ? 0 : 1; }
inline std::string_view basis_name(Basis b) { return b == Basis::X ? "X" : "Y"; }
inline Basis parse_basis(std::string_view s) {
    if (s == "X") return Basis::X;
    if (s == "Y") return Basis::Y;
    throw std::invalid_argument("unknown basis '" + std::string(s) + "'");
}

/// Eigenbasis an encoding phase belongs to: {0, π} are X states, {π/2, 3π/2} are Y states.
inline Basis encoding_basis(EncodingPhase e) { return quarter_turns(e) % 2 == 0 ? Basis::X : Basis::Y; }

enum class Outcome : std::int8_t { Plus = 1, Minus = -1 };

inline int sign(Outcome o) { return static_cast<int>(o); }
inline Outcome outcome_from_sign(int s) {
    if (s == 1) return Outcome::Plus;
    if (s == -1) return Outcome::Minus;
    throw std::invalid_argument("outcome must be +1 or -1");
}
inline Outcome operator*(Outcome a, Outcome b) { return outcome_from_sign(sign(a) * sign(b)); }

}  // namespace sqrs
