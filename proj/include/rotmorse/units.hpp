#pragma once

// Atomic units throughout (hbar = m_e = e = 1).

namespace rotmorse::units {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Duration of one atomic unit of time in seconds.
inline constexpr double kAtomicTimeSeconds = 2.418884326e-17;

constexpr double to_picoseconds(double t_au) { return t_au * kAtomicTimeSeconds * 1e12; }
constexpr double from_picoseconds(double t_ps) { return t_ps / (kAtomicTimeSeconds * 1e12); }

}  // namespace rotmorse::units
