"""Zero-temperature three-site solution of the discrete functional equations.

The next-to-nearest correlation data is carried by a single function ``G1``
solving the inhomogeneous step-3 recursion

    G1(lam) = G1(lam + 3) + phi(lam),          G1(lam) = O(lam^2) at 0,

where ``phi`` is an explicit combination of the two-site functions.  The
obvious one-sided comb ``sum_j phi(lam + 3j)`` does *not* satisfy the
analyticity normalization (it has poles at 0 and a wrong principal part at
-2); the solver therefore builds

    G1(lam) = phi_c(lam) + sum_{j=1..J} phi_c(lam + 3j) - (lam/3) tau(lam)
              + P3(lam)

with ``tau`` the exact 3-periodic part of ``phi`` (a cotangent difference),
``phi_c = phi - tau`` evaluated in an analytically cancelled form (direct
subtraction loses all digits for large ``|lam|``), and ``P3`` a 3-periodic
correction spanned by ``1, cot(pi lam/3), cot^2(pi lam/3), cot(pi(lam-1)/3),
cot^2(pi(lam-1)/3)``.  The five coefficients are fixed by six linear
analyticity conditions (Laurent coefficients on circles around 0 and -2
computed by discrete Fourier transform); the system is overdetermined by one,
and the least-squares defect is kept as a consistency diagnostic.

The truncation error of the comb scales as ``1/J^2``; correlators are
extrapolated over a geometric ladder of ``J`` values through the model
``c + a/J^2 + b/J^3``.

Physical outputs:  ``<P12 P23> = c2 / 2`` where ``c2`` is the ``lam^2``
Taylor coefficient of ``G1`` at 0, and the boundary values ``F1 = 4 c2``,
``F2 = 4 G1(1)``, ``F3 = G1(2)`` feed the three-site density operator.

An independent construction of the same solution is the convolution
transform ``solve_g``: the decoupled components ``g_l`` are obtained by
integrating ``phi`` against the closed-form kernels ``h_l`` along a vertical
line half a unit to the left of the evaluation point (the kernels pair a
shift by +1 with multiplication by ``w^l e^k`` only under this rotated
contour; on horizontal lines the integral does not even converge because
``phi`` keeps an O(1) oscillating part there).  The transform fixes the
additive constant of the ``l = 0`` zero mode differently from the
normalization ``G1 -> 2`` at imaginary infinity; the constant offset between
the two constructions is itself a strong cross-check that no genuinely
periodic ambiguity is left.

The density operator at the homogeneous point is assembled from the full
11-equation linear system.  On the diagonal of spectral parameters the
single-point system is rank-deficient (rank 9: two pairs of equations
coincide there), so the solver couples three consecutive diagonal points
``lam, lam+1, lam+2`` through the difference-equation matrix ``A3`` into a
55 x 33 full-rank least-squares problem.  The amplitudes are analytic at
``lam = 0``, so their value there is recovered as the mean over a small
circle (the Cauchy integral), which converges geometrically in the number
of circle points.  Trace one, Hermiticity, positivity and the partial-trace
collapse onto the two-site operator are all *emergent* here - none of them
is imposed - and serve as end-to-end validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import GRAM_2, GRAM_3, _solve_exact_rational, reduce_to_physical
from .twosite import OMEGA33_HOMOGENEOUS, TwoSiteSolution
from .specfun import digamma_array, tetragamma_array

_TS = TwoSiteSolution()


def _arr(z):
    return np.atleast_1d(np.asarray(z, dtype=complex))


def _cot(z):
    return 1 / np.tan(z)


# ---------------------------------------------------------------------------
# inhomogeneities and their decompositions
# ---------------------------------------------------------------------------

def phi(lam):
    """Inhomogeneity of the step-3 recursion for G1 (poles at 0, +-1)."""
    l = _arr(lam)
    s = _TS.digamma_part(l) - 1 / (l**2 - 1)
    sp = _TS.digamma_part_prime(l) + 2 * l / (l**2 - 1) ** 2
    om = (l**2 - 1) * s
    omp = 2 * l * s + (l**2 - 1) * sp
    out = (
        -12 / (l**2 - 1) * om
        - 2 / (l**2 - 1) ** 2 * omp
        + 4 * l / (l**2 - 1) ** 2 * OMEGA33_HOMOGENEOUS
        + 2 * (4 * l**4 + 6 * l**3 - l**2 - 6 * l - 1) / (l**2 * (l**2 - 1) ** 2)
    )
    return out if np.ndim(lam) else complex(out[0])


def tau(lam):
    """Exact 3-periodic part of phi: -4 pi [cot(pi lam/3) - cot(pi(lam-1)/3)]."""
    l = _arr(lam)
    out = -4 * np.pi * (_cot(np.pi * l / 3) - _cot(np.pi * (l - 1) / 3))
    return out if np.ndim(lam) else complex(out[0])


def _sigma_decaying(l):
    """sigma with the periodic reflection removed; decays to the right."""
    return (
        digamma_array(l / 3)
        - digamma_array((l - 1) / 3)
        + digamma_array(1 + l / 3)
        - digamma_array(4 / 3 + l / 3)
    ) / 3 - 1 / (l**2 - 1)


def phi_c(lam):
    """phi - tau in analytically cancelled form (no large-argument blowup)."""
    l = _arr(lam)
    s = _TS.digamma_part(l) - 1 / (l**2 - 1)
    sp = _TS.digamma_part_prime(l) + 2 * l / (l**2 - 1) ** 2
    out = (
        -12 * _sigma_decaying(l)
        - 4 * l * s / (l**2 - 1) ** 2
        - 2 * sp / (l**2 - 1)
        + 4 * l * OMEGA33_HOMOGENEOUS / (l**2 - 1) ** 2
        + 2 * (4 * l**4 + 6 * l**3 - l**2 - 6 * l - 1) / (l**2 * (l**2 - 1) ** 2)
    )
    return out if np.ndim(lam) else complex(out[0])


def _r_xy(x, y):
    """Three-point inhomogeneity as a function of the parameter differences."""
    w = _TS.omega33
    wb = _TS.omega_bar33
    return (
        2 * (-1 + 2 * x**2 + 2 * y**2) / ((x**2 - 1) * (y**2 - 1))
        + 2 * (x + y) / ((x**2 - 1) * (y**2 - 1)) * w(x - y)
        + 2
        * (-1 + 3 * x + x**2 - 3 * y - 2 * x * y + y**2 - 3 * x * y**2 + 3 * y**3)
        / (x * (x + 3) * (x - y) * (y**2 - 1))
        * wb(x)
        - 2
        * (-1 - 3 * x + x**2 + 3 * x**3 + 3 * y - 2 * x * y - 3 * x**2 * y + y**2)
        / ((x**2 - 1) * (x - y) * y * (y + 3))
        * wb(y)
    )


def r_inhom(lam1, lam2, lam3):
    """Inhomogeneous three-point combination; phi(lam) is its lam2, lam3 -> 0 limit."""
    return _r_xy(lam1 - lam3, lam1 - lam2)


def _omega_bar_derivatives(l):
    """omega_bar33 and its first two derivatives (vectorized, exact forms).

    Differentiates omega_bar = q * s with q = lam(lam-1) p(lam) - 1 and
    s = (lam+3)/(lam-1), where p is the digamma part of sigma.
    """
    p = _TS.digamma_part(l)
    p1 = _TS.digamma_part_prime(l)
    p2 = (
        tetragamma_array(1 - l / 3)
        + tetragamma_array(1 + l / 3)
        - tetragamma_array(4 / 3 + l / 3)
        - tetragamma_array(4 / 3 - l / 3)
    ) / 27
    q = l * (l - 1) * p - 1
    q1 = (2 * l - 1) * p + l * (l - 1) * p1
    q2 = 2 * p + 2 * (2 * l - 1) * p1 + l * (l - 1) * p2
    s = (l + 3) / (l - 1)
    s1 = -4 / (l - 1) ** 2
    s2 = 8 / (l - 1) ** 3
    return q * s, q1 * s + q * s1, q2 * s + 2 * q1 * s1 + q * s2


def psi(lam):
    """psi(lam) = dr(lam1, lam2, lam3)/d(lam2) at lam2 = lam3 = 0.

    Equal to ``-d/dy r(x, y)`` on the diagonal ``x = y = lam``.  Writing
    ``r = T0 + T1 omega(x-y) + W(y)/(x-y)`` with
    ``W(y) = P(x, y) omega_bar(x) - Q(x, y) omega_bar(y)`` (which vanishes on
    the diagonal, making the pole removable), the diagonal limit of the
    ``y``-derivative is ``dT0/dy + (dT1/dy) omega(0) - W''(x)/2``; the rational
    prefactors are differentiated exactly and ``omega_bar``'s first two
    derivatives come from the closed digamma forms, so the evaluation is
    rounding-accurate at arbitrarily large arguments (needed by the comb).
    """
    x = _arr(lam)
    wb, wb1, wb2 = _omega_bar_derivatives(x)
    # P = 2 N3 / D3 with N3(y), D3(y) at fixed x, evaluated at y = x
    n3 = -1 + 3 * x + x**2 + (-3 - 2 * x) * x + (1 - 3 * x) * x**2 + 3 * x**3
    n3y = (-3 - 2 * x) + 2 * (1 - 3 * x) * x + 9 * x**2
    n3yy = 2 * (1 - 3 * x) + 18 * x
    a3 = x * (x + 3)
    d3 = a3 * (x**2 - 1)
    d3y = a3 * 2 * x
    d3yy = 2 * a3
    pyy = 2 * (
        n3yy / d3
        - 2 * n3y * d3y / d3**2
        - n3 * d3yy / d3**2
        + 2 * n3 * d3y**2 / d3**3
    )
    # Q = 2 N4 / D4
    n4 = -1 - 3 * x + x**2 + 3 * x**3 + (3 - 2 * x - 3 * x**2) * x + x**2
    n4y = (3 - 2 * x - 3 * x**2) + 2 * x
    n4yy = 2.0
    a4 = x**2 - 1
    d4 = a4 * (x**2 + 3 * x)
    d4y = a4 * (2 * x + 3)
    d4yy = 2 * a4
    q = 2 * n4 / d4
    qy = 2 * (n4y * d4 - n4 * d4y) / d4**2
    qyy = 2 * (
        n4yy / d4
        - 2 * n4y * d4y / d4**2
        - n4 * d4yy / d4**2
        + 2 * n4 * d4y**2 / d4**3
    )
    wpp = (pyy - qyy) * wb - 2 * qy * wb1 - q * wb2
    # T0 = 2(-1 + 2x^2 + 2y^2)/((x^2-1)(y^2-1)), T1 = 2(x+y)/((x^2-1)(y^2-1))
    t0y = 2 * (4 * x * (x**2 - 1) - (-1 + 4 * x**2) * 2 * x) / (a4 * (x**2 - 1) ** 2)
    t1y = 2 * ((x**2 - 1) - 2 * x * 2 * x) / (a4 * (x**2 - 1) ** 2)
    out = -(t0y + t1y * OMEGA33_HOMOGENEOUS - wpp / 2)
    return out if np.ndim(lam) else complex(out[0])


def psi_finite_difference(lam, step: float = 2e-3):
    """psi via a fourth-order stencil on r (cross-check for the closed form)."""
    l = _arr(lam)
    d = step
    deriv = (
        _r_xy(l, l - 2 * d)
        - 8 * _r_xy(l, l - d)
        + 8 * _r_xy(l, l + d)
        - _r_xy(l, l + 2 * d)
    ) / (12 * d)
    out = -deriv
    return out if np.ndim(lam) else complex(out[0])


def h_kernel(l: int, z):
    """Closed form of the transform kernels h_l for l in {-1, 0, 1}.

    h_0(z)  = -2 pi i / (e^(2 pi z) - 1)
    h_1(z)  = -2 pi i e^(2 pi z/3) / (e^(2 pi z) - 1)
    h_-1(z) = -2 pi i e^(4 pi z/3) / (e^(2 pi z) - 1)

    Evaluated in two overflow-free branches: for Re z > 0 both numerator and
    denominator are rescaled by e^(-2 pi z); for Re z <= 0 the denominator
    uses expm1 so small |z| keeps full relative accuracy.
    """
    a = {0: 0.0, 1: 2 * np.pi / 3, -1: 4 * np.pi / 3}[(l + 1) % 3 - 1]
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    pos = z.real > 0
    zp = z[pos]
    out[pos] = np.exp((a - 2 * np.pi) * zp) / (1 - np.exp(-2 * np.pi * zp))
    zn = z[~pos]
    out[~pos] = np.exp(a * zn) / np.expm1(2 * np.pi * zn)
    out *= -2j * np.pi
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# periodic-correction solver shared by G1 and its transverse derivative
# ---------------------------------------------------------------------------

@dataclass
class ThreeSiteProblem:
    """Numerical parameters of the three-site solver."""

    comb_terms: int = 12500
    laurent_points: int = 256
    laurent_radius: float = 0.45
    richardson_levels: int = 3
    comb_chunk: int = 2500
    #: vertical-contour convolution transform (solve_g)
    conv_step: float = 0.004
    conv_halfwidth: float = 300.0
    conv_offset: float = 0.5
    #: Cauchy circle average recovering the homogeneous density amplitudes
    circle_radius: float = 0.35
    circle_points: int = 12


def solve_g(l: int, lam: complex, problem: ThreeSiteProblem | None = None) -> complex:
    """Decoupled component g_l by convolution of phi with the kernel h_l.

    Evaluates ``g_l(lam) = (1/2 pi) int h_l(-i(lam - mu)) phi(mu) d nu`` over
    the vertical line ``mu = c + i nu`` with ``c = Re(lam) - conv_offset``.
    Under the rotated argument the kernel turns a shift of ``lam`` by +1 into
    multiplication by ``w^l`` (w = e^(2 pi i/3)), so the result satisfies

        g_l(lam) - w^l g_l(lam + 1) = phi(lam)

    wherever no pole of ``phi`` (the real points 0, +-1, 3, 4, ...) lies
    between the two contours - e.g. throughout ``Re lam in (1.5, 2.5)``.  For
    ``l = 0`` the kernel tends to ``2 pi i`` up the contour, so the truncated
    upper tail ``i int_M^inf phi(c + i nu) d nu`` is restored from a power-law
    fit of ``phi`` on the outer half of the sampled window (phi decays as
    ``1/nu^2`` on vertical lines); for ``l = +-1`` the kernel itself decays
    exponentially in both directions and no correction is needed.

    The transform normalizes the ``l = 0`` zero mode by decay at infinity
    rather than by ``G1 -> 2``, so ``(g_0 + g_1 + g_-1)/3`` differs from the
    comb-constructed ``G1`` by the constant -2 (a useful cross-check).
    """
    problem = problem or ThreeSiteProblem()
    lam = complex(lam)
    c = lam.real - problem.conv_offset
    step = problem.conv_step
    half = problem.conv_halfwidth
    nu = np.arange(-half, half + step / 2, step)
    mu = c + 1j * nu
    vals = h_kernel(l, -1j * (lam - mu)) * phi(mu)
    out = complex(np.trapezoid(vals, nu) / (2 * np.pi))
    if l % 3 == 0:
        nfit = nu[nu >= half / 2]
        pv = phi(c + 1j * nfit)
        powers = np.arange(2, 6)
        design = nfit[:, None] ** (-powers[None, :])
        coef, *_ = np.linalg.lstsq(design, pv, rcond=None)
        tail = np.sum(coef * half ** (1.0 - powers) / (powers - 1))
        out += 1j * complex(tail)
    return out


def solve_g_recursion_residual(
    l: int, lam: complex, problem: ThreeSiteProblem | None = None
) -> float:
    """|g_l(lam) - w^l g_l(lam+1) - phi(lam)| with g_l from the convolution."""
    w = np.exp(2j * np.pi / 3)
    g0 = solve_g(l, lam, problem)
    g1 = solve_g(l, complex(lam) + 1, problem)
    return float(abs(g0 - w**l * g1 - phi(complex(lam))))


def _cot_basis(max_pole_order: int):
    """1 and powers of cot around the 0- and 1-chains up to the given order."""
    fns = [lambda z: np.ones_like(z)]
    for m in range(1, max_pole_order + 1):
        fns.append(lambda z, m=m: _cot(np.pi * z / 3) ** m)
        fns.append(lambda z, m=m: _cot(np.pi * (z - 1) / 3) ** m)
    return fns


_K_MIN, _K_MAX = -4, 6


class _PeriodicCorrectionSolver:
    """Fits the 3-periodic cotangent correction from analyticity conditions.

    Subclasses provide ``k_function`` (a particular solution of the step-3
    recursion), a maximal pole order, and ``_condition_targets`` (required
    Laurent coefficients of the corrected solution at the centers 0 and -2).
    """

    max_pole_order = 2

    def __init__(self, problem: ThreeSiteProblem):
        self.problem = problem
        self.basis_functions = _cot_basis(self.max_pole_order)

    def k_function(self, z):  # pragma: no cover - abstract
        raise NotImplementedError

    def _condition_targets(self):
        """List of (center, order, target coefficient) analyticity conditions."""
        raise NotImplementedError

    def _laurent(self, f, center):
        n = self.problem.laurent_points
        r = self.problem.laurent_radius
        th = 2 * np.pi * np.arange(n) / n
        z = center + r * np.exp(1j * th)
        fv = f(z)
        ks = np.arange(_K_MIN, _K_MAX + 1)
        coef = np.array([(fv * np.exp(-1j * k * th)).mean() / r**k for k in ks])
        return ks, coef

    def _condition_targets(self):
        """List of (center, order, target coefficient) analyticity conditions.

        The corrected solution must be regular at -2, and regular at 0 with
        prescribed low-order Taylor coefficients (zero for G1's double zero;
        the derivative solution has a prescribed slope).
        """
        p = self.max_pole_order
        conds = [(0.0, k, 0.0) for k in range(-p - 1, 1)]
        conds.append((0.0, 1, self._slope_at_zero()))
        conds += [(-2.0, k, 0.0) for k in range(-p - 1, 0)]
        return conds

    def _slope_at_zero(self) -> complex:
        return 0.0

    def _fit_periodic(self):
        centers = sorted({c for c, _, _ in self._condition_targets()})
        k_coef = {c: self._laurent(self.k_function, c) for c in centers}
        b_coef = {
            c: [self._laurent(b, c)[1] for b in self.basis_functions]
            for c in centers
        }
        idx = {c: {int(k): i for i, k in enumerate(k_coef[c][0])} for c in centers}
        rows, rhs = [], []
        for c, k, target in self._condition_targets():
            i = idx[c][k]
            rows.append([b[i] for b in b_coef[c]])
            rhs.append(target - k_coef[c][1][i])
        mat = np.array(rows)
        vec = np.array(rhs)
        x, *_ = np.linalg.lstsq(mat, vec, rcond=None)
        self.periodic_coefficients = x
        self.consistency_residual = float(np.abs(mat @ x - vec).max())
        self._k_at_0 = k_coef[0.0][1]
        self._b_at_0 = b_coef[0.0]
        self._idx0 = idx[0.0]

    def periodic_part(self, z):
        z = _arr(z)
        return sum(
            c * b(z)
            for c, b in zip(self.periodic_coefficients, self.basis_functions)
        )

    def value(self, z):
        """Corrected solution at arbitrary points (vectorized)."""
        scalar = np.ndim(z) == 0
        z = _arr(z)
        out = self.k_function(z) + self.periodic_part(z)
        return complex(out[0]) if scalar else out

    def circle_average(self, center: complex) -> complex:
        """Value at a removable point as the mean over a small circle."""
        n = self.problem.laurent_points
        r = self.problem.laurent_radius
        th = 2 * np.pi * np.arange(n) / n
        return complex(self.value(center + r * np.exp(1j * th)).mean())

    def taylor_coefficient(self, k: int) -> complex:
        """Laurent/Taylor coefficient of the solution around 0 (k in -3..6)."""
        i = self._idx0[k]
        return complex(
            self._k_at_0[i]
            + sum(c * b[i] for c, b in zip(self.periodic_coefficients, self._b_at_0))
        )


class G1Solver(_PeriodicCorrectionSolver):
    """Constructs G1 for a fixed comb truncation and evaluates it anywhere."""

    def __init__(self, problem: ThreeSiteProblem | None = None):
        super().__init__(problem or ThreeSiteProblem())
        self._fit_periodic()

    def comb(self, z):
        """sum_{j=1..J} phi_c(z + 3j), evaluated in chunks."""
        z = _arr(z)
        out = np.zeros(z.shape, dtype=complex)
        terms = self.problem.comb_terms
        chunk = self.problem.comb_chunk
        start = 1
        while start <= terms:
            stop = min(start + chunk, terms + 1)
            jj = 3.0 * np.arange(start, stop)
            out += phi_c(z[..., None] + jj).sum(axis=-1)
            start = stop
        return out

    def k_function(self, z):
        z = _arr(z)
        return phi_c(z) + self.comb(z) - (z / 3) * tau(z)

    # -- public aliases ----------------------------------------------------

    def g1(self, z):
        return self.value(z)

    def g1_circle_average(self, center: complex) -> complex:
        return self.circle_average(center)

    def one_sided_pole_data(self) -> dict[int, complex]:
        """Laurent coefficients k=-2..1 of the bare one-sided construction.

        Without the 3-periodic correction the particular solution violates
        the O(lam^2) normalization at 0; the returned coefficients quantify
        the violation (they all vanish for the corrected G1)."""
        return {k: complex(self._k_at_0[self._idx0[k]]) for k in (-2, -1, 0, 1)}

    # -- derived objects ---------------------------------------------------

    def g_transform(self, l: int, lam):
        """g_l(lam) = G1(lam) + w^l G1(lam+1) + w^(2l) G1(lam+2), w = e^(2 pi i/3)."""
        w = np.exp(2j * np.pi / 3)
        lam = _arr(lam)
        return (
            self.g1(lam) + w**l * self.g1(lam + 1) + w ** (2 * l) * self.g1(lam + 2)
        )

    def g_recursion_residual(self, l: int, lam) -> float:
        """Max residual of g_l(lam) - w^l g_l(lam+1) - phi(lam)."""
        w = np.exp(2j * np.pi / 3)
        lam = _arr(lam)
        res = self.g_transform(l, lam) - w**l * self.g_transform(l, lam + 1) - phi(lam)
        return float(np.abs(res).max())


# ---------------------------------------------------------------------------
# correlators with comb-truncation extrapolation
# ---------------------------------------------------------------------------

@dataclass
class ThreeSiteSolution:
    p12p23: float
    f1: float
    f2: float
    f3: float
    diagnostics: dict = field(default_factory=dict)


def _extrapolate(js, vals):
    """Fit c + a/J^2 + b/J^3 (or fewer terms) through the sample points."""
    js = np.asarray(js, dtype=float)
    vals = np.asarray(vals, dtype=complex)
    k = len(js)
    cols = [np.ones(k), js**-2.0, js**-3.0][:k]
    mat = np.array(cols).T.astype(complex)
    sol = np.linalg.solve(mat, vals)
    return sol[0]


def three_site_correlator(problem: ThreeSiteProblem | None = None) -> ThreeSiteSolution:
    """Solve the recursion on a ladder of comb truncations and extrapolate.

    Returns <P12 P23> together with the three boundary values F1, F2, F3 of
    the symmetric three-point function and convergence diagnostics.
    """
    problem = problem or ThreeSiteProblem()
    levels = max(1, problem.richardson_levels)
    js = [problem.comb_terms // 2 ** (levels - 1 - i) for i in range(levels)]
    c2s, g1s_at_1, g1s_at_2, lsq = [], [], [], []
    for j in js:
        sub = ThreeSiteProblem(
            comb_terms=j,
            laurent_points=problem.laurent_points,
            laurent_radius=problem.laurent_radius,
            comb_chunk=problem.comb_chunk,
        )
        solver = G1Solver(sub)
        c2s.append(solver.taylor_coefficient(2))
        g1s_at_1.append(solver.g1_circle_average(1.0))
        g1s_at_2.append(complex(solver.g1(2.0)))
        lsq.append(solver.consistency_residual)
    c2 = _extrapolate(js, c2s)
    g1_at_1 = _extrapolate(js, g1s_at_1)
    g1_at_2 = _extrapolate(js, g1s_at_2)
    diag = {
        "comb_terms": js,
        "c2_per_level": [complex(c) for c in c2s],
        "lstsq_residuals": lsq,
        "c2_imag": float(abs(c2.imag)),
        "last_level_shift": float(abs(c2s[-1] - c2)),
    }
    return ThreeSiteSolution(
        p12p23=float(c2.real) / 2,
        f1=float((4 * c2).real),
        f2=float((4 * g1_at_1).real),
        f3=float(g1_at_2.real),
        diagnostics=diag,
    )


# ---------------------------------------------------------------------------
# density operators
# ---------------------------------------------------------------------------

def two_site_f_vector(lam: complex) -> np.ndarray:
    """(1, omega(lam), omega_bar(lam - 1)): the two-site singlet amplitudes."""
    return np.array(
        [1.0, complex(_TS.omega33(lam)), complex(_TS.omega_bar33(lam - 1))],
        dtype=complex,
    )


def density_matrix_two_site(lam: complex = 0.0) -> np.ndarray:
    """Two-site reduced density operator D2(lam, 0) as a 9 x 9 matrix."""
    rho = _solve_exact_rational(GRAM_2, two_site_f_vector(lam))
    d2 = reduce_to_physical(2, rho)
    return d2.real if abs(complex(lam).imag) < 1e-14 else d2


def _inter_matrix(x, y) -> np.ndarray:
    """Coefficient matrix of the 11 equations for the singlet amplitudes f."""
    d = x - y
    A = np.zeros((11, 11), dtype=complex)
    A[0, 0] = 1
    A[1, 1] = 1
    A[2, 6] = 1
    A[3, 2] = 1
    A[3, 5] = y
    A[3, 4] = -y
    A[3, 3] = -(y**2)
    A[4, 6] = 1
    A[4, 9] = -(y + 2)
    A[4, 10] = y - 1
    A[4, 8] = -(y - 1) * (y + 2)
    A[5, 2] = 1 - d**2
    A[5, 3] = x * (x - 2 * y)
    A[5, 4] = x * (-1 + x * y - y**2)
    A[5, 5] = x * (1 - x * y + y**2)
    A[5, 1] = x * d * (-2 + x**2 - x * y)
    A[6, 6] = 1 - (-1 + x) * d - (2 + x) * d + (-1 + x) * (2 + x) * d**2
    A[6, 8] = 2 - y - y**2
    A[6, 9] = (2 + y) * (-1 + x**2 + y - x * (1 + y))
    A[6, 10] = (-1 + y) * (1 - x**2 + x * (-2 + y) + 2 * y)
    A[7, 2] = 1
    A[8, 0] = 2 * x * (2 + x) * y * (2 + y)
    A[8, 1] = 2 * x * (2 + x) * (2 + y)
    A[8, 3] = 2 * (2 + x) * y * (2 + y)
    A[8, 4] = 2 * (2 + x) * (2 + y)
    A[9, 0] = 2 * (-2 - y - x * (2 + y) + x * (2 + x) * y * (2 + y))
    A[9, 1] = -2 * (-1 + x + x**2) * (2 + y)
    A[9, 2] = 2 * (1 + x) * (2 + y)
    A[9, 3] = 2 * (1 + x + (2 + x) * y - (2 + x) * y * (2 + y))
    A[9, 4] = -2 * (1 + x + 2 * y + x * y)
    A[9, 5] = 2 * (2 + y)
    A[9, 6] = -2 * (-2 - y + x * y + x**2 * (1 + y))
    A[9, 7] = 2 * (1 + x - y)
    A[9, 8] = -2 * (1 + x) * (-2 + y + y**2)
    A[9, 9] = -2 * (1 + x) * (2 + y)
    A[9, 10] = -2 * x
    A[10, 0] = 2 * (x**2 - 1) * (y**2 - 1)
    A[10, 6] = 2 * (x**2 - 1) * (1 + y)
    A[10, 8] = 2 * (1 + x) * (y**2 - 1)
    A[10, 9] = 2 * (1 + x) * (1 + y)
    return A


def _inter_rhs(x, y, f1_val, f2_val, f3_val) -> np.ndarray:
    """Right side of the 11-equation system (two-site data and F1..F3)."""
    d = x - y
    w = lambda a: complex(_TS.omega33(a))
    wb = lambda a: complex(_TS.omega_bar33(a))
    b = np.zeros(11, dtype=complex)
    b[0] = 1
    b[1] = w(y)
    b[2] = wb(y - 1)
    b[3] = w(x) * (1 - y**2)
    b[4] = wb(x - 1) * (1 - y) * (2 + y)
    b[5] = w(y) * (1 - x**2) * (1 - d**2)
    b[6] = wb(y - 1) * (1 - x) * (2 + x) * (1 - d**2)
    b[7] = w(d)
    b[8] = f1_val
    b[9] = f2_val
    b[10] = f3_val
    return b


def _boundary_values(solver: G1Solver, lam: complex):
    """F1, F2, F3 at the diagonal point (lam, lam): G1 times rational weights."""
    g = solver.g1(np.array([lam, lam + 1, lam + 2]))
    pref = (lam**2 - 1) ** 2 * (lam + 2) ** 2
    return (
        g[0] * pref / lam**2,
        g[1] * pref / (lam + 1) ** 2,
        g[2] * (lam**2 - 1) ** 2,
    )


def _diagonal_chain_solve(solver: G1Solver, lam: complex):
    """Amplitudes rho at a diagonal point by coupling lam, lam+1, lam+2.

    The 11-equation system is rank 9 at a single diagonal point (two pairs
    of equations coincide there).  Stacking the systems at three consecutive
    points and linking neighbours through the difference-equation matrix
    ``f(lam) = M A3(lam, lam) M^(-1) f(lam+1)`` gives a full-rank 55 x 33
    least-squares problem whose residual is a solvability diagnostic.
    """
    from .basis import a3_closed_form

    m_inv = np.linalg.inv(GRAM_3.astype(float))
    mat = np.zeros((55, 33), dtype=complex)
    rhs = np.zeros(55, dtype=complex)
    row = 0
    for k in range(3):
        x = lam + k
        mat[row : row + 11, 11 * k : 11 * k + 11] = _inter_matrix(x, x)
        rhs[row : row + 11] = _inter_rhs(x, x, *_boundary_values(solver, x))
        row += 11
    for k in range(2):
        x = lam + k
        a3 = a3_closed_form(x, x)
        mat[row : row + 11, 11 * k : 11 * k + 11] = m_inv
        mat[row : row + 11, 11 * (k + 1) : 11 * (k + 1) + 11] = -a3 @ m_inv
        row += 11
    sol, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
    residual = float(np.linalg.norm(mat @ sol - rhs))
    return m_inv @ sol[:11], residual


def three_site_density_coefficients(
    solver: G1Solver,
    center: complex = 0.0,
):
    """Singlet amplitudes rho of the homogeneous three-site density operator.

    The chain solve degenerates at ``lam = 0`` (the F-weights have poles
    there), but the amplitudes themselves are analytic, so their value at
    ``center`` is recovered as the mean of ``_diagonal_chain_solve`` over a
    small circle - the Cauchy integral, converging geometrically in the
    number of circle points.  Returns ``(rho, diagnostics)`` with the
    discarded imaginary part and the worst least-squares defect as quality
    measures.
    """
    problem = solver.problem
    n = problem.circle_points
    radius = problem.circle_radius
    angles = 2 * np.pi * (np.arange(n) + 0.5) / n
    rhos, residuals = [], []
    for lam in center + radius * np.exp(1j * angles):
        rho, resid = _diagonal_chain_solve(solver, lam)
        rhos.append(rho)
        residuals.append(resid)
    rho0 = np.mean(rhos, axis=0)
    diagnostics = {
        "max_imag": float(np.abs(rho0.imag).max()),
        "max_lstsq_residual": float(max(residuals)),
        "circle_points": n,
        "circle_radius": radius,
    }
    return rho0.real, diagnostics


def density_matrix_three_site(solver: G1Solver | None = None) -> np.ndarray:
    """Homogeneous three-site reduced density operator (27 x 27)."""
    solver = solver or G1Solver()
    rho, _ = three_site_density_coefficients(solver)
    return reduce_to_physical(3, rho).real


def partial_trace_last_site(d3: np.ndarray) -> np.ndarray:
    """Trace out the third site of a 27 x 27 operator, giving 9 x 9."""
    t = d3.reshape(3, 3, 3, 3, 3, 3)
    return np.einsum("abkcdk->abcd", t).reshape(9, 9)


def partial_trace_first_site(d3: np.ndarray) -> np.ndarray:
    """Trace out the first site of a 27 x 27 operator, giving 9 x 9."""
    t = d3.reshape(3, 3, 3, 3, 3, 3)
    return np.einsum("kabkcd->abcd", t).reshape(9, 9)
