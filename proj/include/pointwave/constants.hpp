#pragma once

namespace pointwave {

// Sign sigma in the stationary multiplier m_plus(k) = exp(-i sigma delta(k)),
// m_minus = conj(m_plus). Fixed by comparison with the time-limit operator
// (see the scattering calibration test).
inline constexpr int moller_phase_sign = 1;

} // namespace pointwave
