"""beta-BBO dispersion and the default 390 nm -> 780 nm type-II source.

Sellmeier coefficients are Kato's (IEEE JQE 22, 1013, 1986), wavelength in
micrometres. The e-ray index is evaluated at the collinear type-II
phase-matching angle for degenerate down-conversion.
"""

import math

from scipy.optimize import brentq

from .model import SourceParams

C_MM_PER_FS = 2.99792458e-4
C_NM_PER_FS = 299.792458

PUMP_WAVELENGTH_NM = 390.0
SIGNAL_WAVELENGTH_NM = 780.0
CRYSTAL_LENGTH_MM = 3.0
PUMP_FWHM_FS = 120.0


def n_o(lam_um: float) -> float:
    l2 = lam_um * lam_um
    return math.sqrt(2.7359 + 0.01878 / (l2 - 0.01822) - 0.01354 * l2)


def n_e_principal(lam_um: float) -> float:
    l2 = lam_um * lam_um
    return math.sqrt(2.3753 + 0.01224 / (l2 - 0.01667) - 0.01516 * l2)


def n_e(lam_um: float, theta: float) -> float:
    """Extraordinary index at angle ``theta`` (rad) from the optic axis."""
    no, ne = n_o(lam_um), n_e_principal(lam_um)
    return 1.0 / math.sqrt(math.cos(theta) ** 2 / no ** 2 + math.sin(theta) ** 2 / ne ** 2)


def phase_matching_angle(pump_nm: float = PUMP_WAVELENGTH_NM) -> float:
    """Angle for e(pump) -> o + e at degeneracy, collinear."""
    lp, ls = pump_nm / 1000.0, 2.0 * pump_nm / 1000.0

    def mismatch(theta):
        return 2.0 * n_e(lp, theta) - n_o(ls) - n_e(ls, theta)

    return brentq(mismatch, 0.2, 1.5, xtol=1e-14)


def _dn_dlambda(index, lam_um: float, h: float = 1e-5) -> float:
    # five-point stencil; index is smooth far from the UV pole
    return (-index(lam_um + 2 * h) + 8 * index(lam_um + h)
            - 8 * index(lam_um - h) + index(lam_um - 2 * h)) / (12 * h)


def inverse_group_velocity(index, lam_um: float) -> float:
    """dk/dw = (n - lambda dn/dlambda)/c in fs/mm."""
    return (index(lam_um) - lam_um * _dn_dlambda(index, lam_um)) / C_MM_PER_FS


def sigma_from_fwhm(fwhm_fs: float) -> float:
    """Spectral width parameter of a transform-limited Gaussian pulse.

    A field spectrum exp{-(dw/sigma)^2} has temporal intensity
    exp{-sigma^2 t^2/2}, whose FWHM is 2 sqrt(2 ln 2)/sigma.
    """
    return 2.0 * math.sqrt(2.0 * math.log(2.0)) / fwhm_fs


def mean_frequency(wavelength_nm: float = SIGNAL_WAVELENGTH_NM) -> float:
    return 2.0 * math.pi * C_NM_PER_FS / wavelength_nm


def bbo_group_velocities(pump_nm: float = PUMP_WAVELENGTH_NM):
    """(k'_p, k'_o, k'_e) in fs/mm for the degenerate type-II BBO source."""
    theta = phase_matching_angle(pump_nm)
    lp, ls = pump_nm / 1000.0, 2.0 * pump_nm / 1000.0
    kp = inverse_group_velocity(lambda lam: n_e(lam, theta), lp)
    ko = inverse_group_velocity(n_o, ls)
    ke = inverse_group_velocity(lambda lam: n_e(lam, theta), ls)
    return kp, ko, ke


# Frozen output of bbo_group_velocities(); tests regenerate and compare.
BBO_KP_PRIME = 5710.44563837
BBO_KO_PRIME = 5623.47443131
BBO_KE_PRIME = 5420.40891543


def default_source(pump_phase: float = 0.0) -> SourceParams:
    """3 mm BBO pumped by 120 fs pulses at 390 nm."""
    return SourceParams(
        crystal_length=CRYSTAL_LENGTH_MM,
        kp_prime=BBO_KP_PRIME,
        ko_prime=BBO_KO_PRIME,
        ke_prime=BBO_KE_PRIME,
        mean_frequency=mean_frequency(),
        pump_bandwidth=sigma_from_fwhm(PUMP_FWHM_FS),
        pump_phase=pump_phase,
    )
