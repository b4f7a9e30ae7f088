"""Closed-form zero-temperature two-site solution for the SU(3) chain.

The nearest-neighbour correlation data is carried by a single even function
``sigma`` solving the three-term difference equation

    sigma(lam+1) + sigma(lam) + sigma(lam-1)
        = (lam^2 + 2) / ((lam^2 - 4)(lam^2 - 1)),

with the closed form (digamma differences minus ``1/(lam^2 - 1)``)::

    sigma(lam) = (1/3) [psi0(1 - lam/3) + psi0(1 + lam/3)
                        - psi0(4/3 + lam/3) - psi0(4/3 - lam/3)]
                 - 1/(lam^2 - 1).

Derived objects:

    omega33(lam)     = (lam^2 - 1) sigma(lam)            (evaluated pole-free)
    omega_bar33(lam) = (lam*omega33(lam) - 1)(lam + 3)/(lam^2 - 1)
    alpha33(lam)     = (omega33(lam) - 1/3)/8
    G(lam)           = (omega33(lam) + 1)/(lam^2 - 1)

``omega33`` is computed as ``(lam^2-1)*(digamma part) - 1`` which is regular
everywhere off the digamma poles; in particular ``omega33(+-1) = -1`` (the
explicit ``-1/(lam^2-1)`` term of sigma survives the prefactor).
``omega_bar33`` has a genuine simple pole at ``+1`` and a removable 0/0 point
at ``-1`` where its value is ``1 + omega33'(-1)``.
"""

from __future__ import annotations

import numpy as np

from .specfun import (
    PoleError,
    digamma_array,
    hurwitz_zeta,
    trigamma_array,
    digamma,
)

#: omega33(0,0) = 1 - pi/(3 sqrt 3) - log 3, the ground-state energy per bond
OMEGA33_HOMOGENEOUS = 1 - np.pi / (3 * np.sqrt(3)) - np.log(3)

#: alpha33(0,0) = (2 - pi/sqrt(3) - 3 log 3)/24
ALPHA33_HOMOGENEOUS = (2 - np.pi / np.sqrt(3) - 3 * np.log(3)) / 24


def _asarray(lam):
    return np.atleast_1d(np.asarray(lam, dtype=complex))


class TwoSiteSolution:
    """Evaluators for the two-site correlation functions and their checks.

    All evaluators accept complex scalars or arrays and return matching
    shapes; scalar input gives a python complex.
    """

    # ---- building blocks -------------------------------------------------

    def digamma_part(self, lam):
        lam = _asarray(lam)
        return (
            digamma_array(1 - lam / 3)
            + digamma_array(1 + lam / 3)
            - digamma_array(4 / 3 + lam / 3)
            - digamma_array(4 / 3 - lam / 3)
        ) / 3

    def digamma_part_prime(self, lam):
        lam = _asarray(lam)
        return (
            -trigamma_array(1 - lam / 3)
            + trigamma_array(1 + lam / 3)
            - trigamma_array(4 / 3 + lam / 3)
            + trigamma_array(4 / 3 - lam / 3)
        ) / 9

    # ---- primary functions ----------------------------------------------

    def sigma(self, lam):
        """sigma(lam); simple poles at lam = +-1 from the rational term."""
        lam = _asarray(lam)
        out = self.digamma_part(lam) - 1 / (lam**2 - 1)
        return _maybe_scalar(out)

    def sigma_prime(self, lam):
        lam = _asarray(lam)
        out = self.digamma_part_prime(lam) + 2 * lam / (lam**2 - 1) ** 2
        return _maybe_scalar(out)

    def omega33(self, lam):
        """omega33(lam) = (lam^2 - 1) sigma(lam), evaluated pole-free."""
        lam = _asarray(lam)
        out = (lam**2 - 1) * self.digamma_part(lam) - 1
        return _maybe_scalar(out)

    def omega33_prime(self, lam):
        lam = _asarray(lam)
        out = 2 * lam * self.digamma_part(lam) + (lam**2 - 1) * self.digamma_part_prime(lam)
        return _maybe_scalar(out)

    def omega_bar33(self, lam):
        """omega_bar33 = (lam*omega33(lam) - 1)(lam + 3)/(lam^2 - 1).

        The numerator factors exactly: lam*omega33 - 1
        = lam(lam^2 - 1)*(digamma part) - (lam + 1), so dividing by (lam + 1)
        leaves lam(lam - 1)*(digamma part) - 1 with no cancellation.  The only
        genuine pole is at lam = +1; the point lam = -1 is removable with
        value 1 + omega33'(-1).
        """
        lam = _asarray(lam)
        out = (lam * (lam - 1) * self.digamma_part(lam) - 1) * (lam + 3) / (lam - 1)
        return _maybe_scalar(out)

    def alpha33(self, lam):
        lam = _asarray(lam)
        out = (_asarray(self.omega33(lam)) - 1 / 3) / 8
        return _maybe_scalar(out)

    def generating_function(self, lam):
        """G(lam) = (omega33(lam) + 1)/(lam^2 - 1), regular at lam = +-1."""
        lam = _asarray(lam)
        out = self.digamma_part(lam)
        return _maybe_scalar(out)

    def generating_function_rational_form(self, lam):
        """G via (omega33 + 1)/(lam^2 - 1) literally (for cross-checks)."""
        lam = _asarray(lam)
        out = (_asarray(self.omega33(lam)) + 1) / (lam**2 - 1)
        return _maybe_scalar(out)

    def omega(self, lam):
        """Return the triple (omega33, omega_bar33, alpha33) at ``lam``."""
        return (self.omega33(lam), self.omega_bar33(lam), self.alpha33(lam))

    # ---- expansions and residual checks ----------------------------------

    def zeta_expansion(self, K: int):
        """Taylor coefficients c_0..c_K of G(lam) in powers of lam^2.

        c_0 = (2/3)[psi0(1) - psi0(4/3)];
        c_k = -(2/3)[zeta(2k+1, 1) - zeta(2k+1, 4/3)]/3^(2k) for k >= 1,
        so that G(lam) = sum_k c_k lam^(2k).  The minus sign follows from
        psi_2k(z) = -(2k)! zeta(2k+1, z) applied to the Taylor series of the
        digamma form of G.
        """
        if K < 0 or K > 20:
            raise ValueError("K must be in 0..20 (double-precision limit)")
        coeffs = [
            (2 / 3) * (digamma(1.0).value - digamma(4 / 3).value).real
        ]
        for k in range(1, K + 1):
            z1 = hurwitz_zeta(2 * k + 1, 1.0).value.real
            z2 = hurwitz_zeta(2 * k + 1, 4 / 3).value.real
            coeffs.append(-(2 / 3) * (z1 - z2) / 3 ** (2 * k))
        return coeffs

    def check_difference_equations(self, lam: complex):
        """Residuals (res1, res2) of the two coupled difference equations.

        res1:  omega33(lam) - (lam^2-1)/(lam(lam+3)) * omega_bar33(lam) - 1/lam
        res2:  omega_bar33(lam-1) + (lam-1)/lam * omega33(lam+1)
               + (lam-1)(lam+2)/(lam(lam+3)) * omega_bar33(lam) - (lam-1)/lam
        """
        lam = complex(lam)
        if min(abs(lam), abs(lam - 1), abs(lam + 1)) < 1e-6:
            raise PoleError("difference-equation check too close to lam in {0, +-1}")
        w = complex(self.omega33(lam))
        wb = complex(self.omega_bar33(lam))
        res1 = abs(w - (lam**2 - 1) / (lam * (lam + 3)) * wb - 1 / lam)
        wb_m = complex(self.omega_bar33(lam - 1))
        w_p = complex(self.omega33(lam + 1))
        res2 = abs(
            wb_m
            + (lam - 1) * (lam + 3) / (lam * (lam + 3)) * w_p
            + (lam - 1) * (lam + 2) / (lam * (lam + 3)) * wb
            - (lam - 1) / lam
        )
        return res1, res2

    def check_three_term(self, lam: complex) -> float:
        """Residual of the three-term equation for sigma at ``lam``."""
        lam = complex(lam)
        lhs = (
            complex(self.sigma(lam + 1))
            + complex(self.sigma(lam))
            + complex(self.sigma(lam - 1))
        )
        rhs = (lam**2 + 2) / ((lam**2 - 4) * (lam**2 - 1))
        return abs(lhs - rhs)


def _maybe_scalar(arr):
    return complex(arr[0]) if arr.shape == (1,) else arr
