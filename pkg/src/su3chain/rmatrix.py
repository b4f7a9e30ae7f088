"""Rational R-matrices of the SU(n) chain and executable identity checks.

The two-space R-matrices, acting on a pair of local spaces each carrying the
fundamental (F) or anti-fundamental (A) representation, are

    FF / AA :  R(lam) = I + lam * P
    FA / AF :  R(lam) = lam * P - E

with the structural tensors of :mod:`su3chain.tensors` in slot order
``(i, k, j, l)``.  The mixed operator is fixed by requiring that *all* of the
identities below hold simultaneously (special unitarity with its stated scalar
factors, the shifted Yang-Baxter relation, the fusion relations and the
singlet-basis difference-equation matrices); the commonly written ``E + lam*P``
differs from it by the sign convention implicit in the arrow-reversed line of
the graphical notation and satisfies none of them with these component
conventions.

All checks return residuals (and, where applicable, the expected scalar
factor) instead of booleans, so degenerate parameter points remain reportable.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .tensors import (
    ANTIFUND,
    FUND,
    LabeledTensor,
    Leg,
    StructuralKind,
    levi_civita,
    structural_tensor,
)


class RKind(Enum):
    FF = "FF"
    FA = "FA"
    AF = "AF"
    AA = "AA"

    @property
    def types(self) -> tuple[str, str]:
        return (self.value[0], self.value[1])

    @property
    def mixed(self) -> bool:
        return self.value[0] != self.value[1]


def _pie(n: int):
    eye = np.eye(n)
    P = np.einsum("il,jk->ikjl", eye, eye)
    I = np.einsum("ij,kl->ikjl", eye, eye)
    E = np.einsum("ik,jl->ikjl", eye, eye)
    return P, I, E


def r_matrix(kind: RKind, n: int, lam: complex) -> LabeledTensor:
    """Four-leg R-matrix ``(i, k, j, l)`` for the given representation pair.

    FF/AA give ``I + lam*P``; FA/AF give ``lam*P - E``.  Leg orientations
    follow the representation content: on a fundamental line the incoming leg
    is fundamental and the outgoing leg anti-fundamental, and vice versa on an
    anti-fundamental line.
    """
    if n < 2:
        raise ValueError(f"local dimension must be >= 2, got {n}")
    P, I, E = _pie(n)
    if kind.mixed:
        arr = lam * P - E
    else:
        arr = I + lam * P
    t1, t2 = kind.types
    o1_in, o1_out = (FUND, ANTIFUND) if t1 == "F" else (ANTIFUND, FUND)
    o2_in, o2_out = (FUND, ANTIFUND) if t2 == "F" else (ANTIFUND, FUND)
    legs = [
        Leg(n, o1_in, "i"),
        Leg(n, o2_in, "k"),
        Leg(n, o1_out, "j"),
        Leg(n, o2_out, "l"),
    ]
    return LabeledTensor(arr, legs)


def r_operator(kind: RKind, n: int, lam: complex) -> np.ndarray:
    """R-matrix as an ``n^2 x n^2`` operator: row index ``(j, l)``, column ``(i, k)``."""
    t = r_matrix(kind, n, lam).entries
    return np.ascontiguousarray(t.transpose(2, 3, 0, 1)).reshape(n * n, n * n)


_STANDARD_TYPE_TRIPLES = [
    ("F", "F", "F"),
    ("F", "F", "A"),
    ("F", "A", "A"),
    ("A", "A", "A"),
    ("A", "A", "F"),
    ("A", "F", "F"),
]
_SPECIAL_TYPE_TRIPLES = [("F", "A", "F"), ("A", "F", "A")]


def _infer_line_types(r1: RKind, r2: RKind, r3: RKind) -> tuple[str, str, str]:
    """Recover the three line types from the three R-matrix kinds.

    The first matrix intertwines lines (1, 2), the second lines (1, 3), the
    third lines (2, 3); the kinds must be mutually consistent.
    """
    t1, t2 = r1.types
    t1b, t3 = r2.types
    t2b, t3b = r3.types
    if (t1, t2, t3) != (t1b, t2b, t3b):
        raise ValueError(
            f"inconsistent kind triple ({r1.value}, {r2.value}, {r3.value}): "
            f"lines (1,2)/(1,3)/(2,3) must carry consistent representations"
        )
    return (t1, t2, t3)


def standard_kind_triples() -> list[tuple[RKind, RKind, RKind]]:
    """The six kind triples satisfying the unshifted Yang-Baxter equation."""
    out = []
    for t1, t2, t3 in _STANDARD_TYPE_TRIPLES:
        out.append(
            (RKind(t1 + t2), RKind(t1 + t3), RKind(t2 + t3))
        )
    return out


def special_kind_triples() -> list[tuple[RKind, RKind, RKind]]:
    """The two kind triples requiring the +n shift on the intertwiner."""
    return [
        (RKind(t1 + t2), RKind(t1 + t3), RKind(t2 + t3))
        for t1, t2, t3 in _SPECIAL_TYPE_TRIPLES
    ]


def check_yang_baxter(
    r1: RKind,
    r2: RKind,
    r3: RKind,
    lam: complex,
    mu: complex,
    nu: complex,
    n: int = 3,
    shift: complex | None = None,
) -> float:
    """Max-abs residual of the Yang-Baxter equation in braid form.

    The checked relation is::

        R12[r1](a) R23[r2](lam - nu) R12[r3](mu - nu)
          = R23[r3](mu - nu) R12[r2](lam - nu) R23[r1](a)

    with ``a = lam - mu`` for the six standard triples and
    ``a = lam - mu + n`` for the two special triples (where line 3 carries the
    same representation as line 1 but line 2 the opposite one).  ``shift``
    overrides the automatic choice; pass ``shift=0`` to evaluate a special
    triple without the shift (which demonstrably fails).
    """
    types = _infer_line_types(r1, r2, r3)
    if shift is None:
        shift = n if types in _SPECIAL_TYPE_TRIPLES else 0
    a = lam - mu + shift
    eye = np.eye(n)
    m1 = r_operator(r1, n, a)
    m2 = r_operator(r2, n, lam - nu)
    m3 = r_operator(r3, n, mu - nu)
    op12 = lambda m: np.kron(m, eye)
    op23 = lambda m: np.kron(eye, m)
    left = op12(m1) @ op23(m2) @ op12(m3)
    right = op23(m3) @ op12(m2) @ op23(m1)
    return float(np.abs(left - right).max())


def check_unitarity(
    kind: str, n: int, lam: complex, mu: complex
) -> tuple[float, complex]:
    """Residual and expected scalar of a unitarity relation.

    ``standard``   : R[FF](lam-mu) R[FF](mu-lam) = (1 - (lam-mu)^2) I
    ``special-1``  : R[FA](mu-lam) R[AF](lam-mu+n) = (mu-lam)(lam-mu+n) I
    ``special-2``  : R[FA](lam-mu) R[AF](mu-lam+n) = (lam-mu)(mu-lam+n) I

    The scalar is returned, not divided out, so degenerate points where it
    vanishes stay reportable.
    """
    d = lam - mu
    if kind == "standard":
        prod = r_operator(RKind.FF, n, d) @ r_operator(RKind.FF, n, -d)
        scalar = 1 - d**2
    elif kind == "special-1":
        prod = r_operator(RKind.FA, n, -d) @ r_operator(RKind.AF, n, d + n)
        scalar = (-d) * (d + n)
    elif kind == "special-2":
        prod = r_operator(RKind.FA, n, d) @ r_operator(RKind.AF, n, -d + n)
        scalar = d * (-d + n)
    else:
        raise ValueError(f"unknown unitarity kind {kind!r}")
    residual = float(np.abs(prod - scalar * np.eye(n * n)).max())
    return residual, scalar


def check_fusion(
    n: int, lam: complex, mu: complex, direction: str
) -> tuple[float, complex]:
    """Residual and scalar of the fusion (antisymmetrizer sliding) relations.

    A column of three R-matrices with arguments ``lam - mu``, ``lam + 1 - mu``,
    ``lam + 2 - mu`` is contracted against the Levi-Civita tensor; the result
    is the Levi-Civita tensor on the free ends times a scalar:

    ``up``   : mixed R content, scalar (lam + 2 - mu)(1 - (lam - mu)^2)
    ``down`` : FF content,      scalar (mu - lam)(1 - (lam + 2 - mu)^2)
    """
    if n != 3:
        raise ValueError("fusion relations are implemented for n = 3 only")
    P, I, E = _pie(n)
    eps = levi_civita(n)
    eye = np.eye(n)
    args = (lam - mu, lam + 1 - mu, lam + 2 - mu)
    if direction == "up":
        rs = [a * P - E for a in args]
        scalar = (lam + 2 - mu) * (1 - (lam - mu) ** 2)
        rhs_eps = eps
    elif direction == "down":
        rs = [I + a * P for a in args]
        scalar = (mu - lam) * (1 - (lam + 2 - mu) ** 2)
        rhs_eps = eps.transpose(0, 2, 1)
    else:
        raise ValueError(f"unknown fusion direction {direction!r}")
    left = np.einsum("fwxa,gvwb,huvc,cba->fghux", rs[0], rs[1], rs[2], eps)
    right = np.einsum("abc,uv->abcuv", rhs_eps, eye)
    residual = float(np.abs(left - scalar * right).max())
    return residual, scalar


EDGE_POINTS = [0.0, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0]


def sample_parameters(count: int, seed: int = 7) -> list[complex]:
    """Deterministic complex sample points for identity checks."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-3, 3, size=(count, 2))
    return [complex(a, b) for a, b in pts]


def identity_suite(seed: int = 7, samples: int = 50, n: int = 3) -> dict[str, float]:
    """Run every algebraic identity check and return max residuals by name.

    Covers the six standard Yang-Baxter triples, the shifted special triples,
    standard and special unitarity, both fusion directions, and the epsilon /
    delta contraction identities, over ``samples`` fixed-seed complex points
    plus the deterministic edge points 0, +-1, +-2, +-3.
    """
    pts = sample_parameters(3 * samples, seed=seed)
    triples_std = standard_kind_triples()
    triples_special = special_kind_triples()
    res: dict[str, float] = {}

    def record(name, value):
        res[name] = max(res.get(name, 0.0), float(value))

    params = [tuple(pts[3 * i : 3 * i + 3]) for i in range(samples)]
    params += [(e, 0.31 - 0.12j, -1.44 + 0.77j) for e in EDGE_POINTS]
    for lam, mu, nu in params:
        for t in triples_std:
            name = "ybe_" + "".join(k.value for k in t)
            record(name, check_yang_baxter(*t, lam, mu, nu, n=n))
        for t in triples_special:
            name = "ybe_special_" + "".join(k.value for k in t)
            record(name, check_yang_baxter(*t, lam, mu, nu, n=n))

    pairs = [(pts[2 * i], pts[2 * i + 1]) for i in range(samples)]
    pairs += [(e, 0.0) for e in EDGE_POINTS]
    for lam, mu in pairs:
        for kind in ("standard", "special-1", "special-2"):
            record("unitarity_" + kind, check_unitarity(kind, n, lam, mu)[0])
        for direction in ("up", "down"):
            record("fusion_" + direction, check_fusion(3, lam, mu, direction)[0])

    eps = levi_civita(3)
    eye = np.eye(3)
    record("eps_eps_full", abs(np.einsum("ijk,ijk->", eps, eps) - 6))
    record("delta_trace", abs(np.trace(eye) - 3))
    record(
        "eps_eps_two",
        np.abs(np.einsum("ijk,jkl->il", eps, eps) - 2 * eye).max(),
    )
    expected = np.einsum("il,jm->ijlm", eye, eye) - np.einsum(
        "im,jl->ijlm", eye, eye
    )
    record(
        "eps_eps_one",
        np.abs(np.einsum("ijk,klm->ijlm", eps, eps) - expected).max(),
    )
    return res
