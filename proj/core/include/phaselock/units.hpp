#pragma once

// Atomic units everywhere inside the library (hbar = m_e = e = 1); values at
// the interfaces are fs / eV / angstrom / u and converted here.
// Constants: CODATA 2018.

namespace phaselock::units {

inline constexpr double hartree_ev     = 27.211386245988;      // 1 Eh in eV
inline constexpr double bohr_angstrom  = 0.529177210903;       // 1 a0 in angstrom
inline constexpr double atomic_time_fs = 2.4188843265857e-2;   // 1 atu in fs
inline constexpr double dalton_me      = 1822.888486209;       // 1 u in electron masses

// hbar in eV*fs and h in eV*fs, derived so all conversion paths agree exactly.
inline constexpr double hbar_ev_fs = hartree_ev * atomic_time_fs;
inline constexpr double planck_ev_fs = 2.0 * 3.141592653589793238462643383279502884 * hbar_ev_fs;

inline constexpr double ev_to_hartree(double ev) { return ev / hartree_ev; }
inline constexpr double hartree_to_ev(double eh) { return eh * hartree_ev; }
inline constexpr double angstrom_to_bohr(double a) { return a / bohr_angstrom; }
inline constexpr double bohr_to_angstrom(double b) { return b * bohr_angstrom; }
inline constexpr double fs_to_au(double fs) { return fs / atomic_time_fs; }
inline constexpr double au_to_fs(double t) { return t * atomic_time_fs; }
inline constexpr double dalton_to_me(double u) { return u * dalton_me; }
inline constexpr double me_to_dalton(double m) { return m / dalton_me; }

}  // namespace phaselock::units
