"""Askey-Wilson polynomials, weight, orthogonality norms, generating functions.

The polynomial is evaluated through its terminating 4phi3 definition
(ab, ac, ad; q)_n a^{-n} 4phi3(q^{-n}, abcd q^{n-1}, a e^{-i theta},
a e^{i theta}; ab, ac, ad; q, q) with x = cos(theta).  The alternating
terminating sum is delegated to the guarded evaluator in
:mod:`qbeta.hyperseries`, which silently raises its working precision once
double-precision cancellation would spoil the value; without that, degrees
beyond n ~ 8 are unusable at q = 0.5.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .qcore import (
    DomainError,
    ConvergenceError,
    EvalResult,
    check_base,
    h_product,
    h_product_multi,
    aw_constant,
    qpoch,
    qpoch_multi,
)
from .hyperseries import terminating_phi

__all__ = [
    "AWParams",
    "DeltaSeq",
    "AW_DEGREE_CAP",
    "aw_poly",
    "aw_weight",
    "aw_norm",
    "delta_seq",
    "gen_func_rhs",
    "gen_func_series",
]

#: public degree cap: q^{-n} prefactors degrade even extended precision
#: bookkeeping beyond desk scale, and nothing downstream needs more
AW_DEGREE_CAP = 64

_REAL_TOL = 1e-9


@dataclass(frozen=True)
class AWParams:
    """The four Askey-Wilson parameters plus the base."""

    a: complex
    b: complex
    c: complex
    d: complex
    q: float

    def __post_init__(self):
        check_base(self.q)
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))

    def params(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def max_modulus(self) -> float:
        return max(abs(u) for u in self.params())

    def require_polydisc(self, what: str) -> None:
        if self.max_modulus() >= 1.0:
            raise DomainError(f"{what} requires max(|a|,|b|,|c|,|d|) < 1")

    def is_real(self) -> bool:
        return all(u.imag == 0.0 for u in self.params())


def _collapse_real(value: complex, ok: bool, what: str) -> complex:
    if not ok:
        return value
    scale = max(abs(value), 1e-300)
    if abs(value.imag) > _REAL_TOL * scale:
        raise ConvergenceError(
            f"{what}: imaginary residue {value.imag:.3e} too large for real inputs"
        )
    return complex(value.real, 0.0)


def aw_poly(n: int, x: float, p: AWParams,
            target_accuracy: float = 1e-13) -> complex:
    """Askey-Wilson polynomial p_n(x; a, b, c, d | q) at x = cos(theta)."""
    if n < 0:
        raise DomainError("degree must be >= 0")
    if n > AW_DEGREE_CAP:
        raise DomainError(f"degree {n} exceeds the supported cap {AW_DEGREE_CAP}")
    if p.a == 0:
        raise DomainError("aw_poly needs a != 0 (the a^-n prefactor)")
    if abs(x) > 1.0 + 1e-12:
        raise DomainError("x must lie in [-1, 1]")
    if n == 0:
        return 1.0 + 0.0j
    x = min(1.0, max(-1.0, float(x)))
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    e = cmath.exp(1j * math.acos(x))
    abcd = a * b * c * d
    pref = qpoch_multi([a * b, a * c, a * d], q, n).value * a ** (-n)
    # polynomial values stay O(1) on the interval, so |series| ~ 1/|pref|
    phi = terminating_phi(
        n, (abcd * q ** (n - 1), a / e, a * e), (a * b, a * c, a * d), q, q,
        target_accuracy, size_hint=0.1 / max(abs(pref), 1e-300))
    val = pref * phi.value
    return _collapse_real(val, p.is_real(), "aw_poly")


def aw_poly_cos_coeffs(n: int, p: AWParams,
                       target_accuracy: float = 1e-13):
    """Coefficients gamma_k with p_n(cos theta) = sum_k gamma_k cos(k theta).

    The polynomial has exact degree n in cos(theta), so n+1 accurate samples
    at the extrema grid determine it; evaluating the cosine series afterwards
    is numerically stable on any grid, unlike re-summing the alternating
    terminating series per node.
    """
    import numpy as np

    if n == 0:
        return np.ones(1, dtype=complex)
    thetas = np.array([j * math.pi / n for j in range(n + 1)])
    samples = np.array([aw_poly(n, math.cos(th), p, target_accuracy)
                        for th in thetas], dtype=complex)
    matrix = np.cos(np.outer(thetas, np.arange(n + 1)))
    return np.linalg.solve(matrix, samples)


def aw_weight(theta: float, p: AWParams) -> float:
    """Normalized weight h(cos 2 theta; 1|q) / h(cos theta; a, b, c, d|q)."""
    p.require_polydisc("the Askey-Wilson weight")
    theta = float(theta)
    if not (0.0 <= theta <= math.pi + 1e-12):
        raise DomainError("theta must lie in [0, pi]")
    num = h_product(math.cos(2.0 * theta), 1.0, p.q)
    den = h_product_multi(math.cos(theta), p.params(), p.q)
    if abs(den.value) == 0.0:
        raise DomainError("weight denominator vanished (parameter on a pole)")
    val = num.value / den.value
    val = _collapse_real(val, p.is_real(), "aw_weight")
    if p.is_real():
        return val.real
    return val  # type: ignore[return-value]


def aw_norm(n: int, p: AWParams) -> float:
    """Diagonal value of the orthogonality relation (the n-th norm factor).

    K(a,b,c,d|q) (1 - abcd/q) (q, ab, ac, ad, bc, bd, cd; q)_n
    / ((1 - abcd q^{2n-1}) (abcd/q; q)_n).
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    p.require_polydisc("aw_norm")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = a * b * c * d
    low = 1.0 - abcd / q
    high = 1.0 - abcd * q ** (2 * n - 1)
    if abs(high) < 1e-12 or abs(low) < 1e-12:
        raise DomainError("abcd q^{2n-1} = 1 degeneracy in aw_norm")
    K = aw_constant(a, b, c, d, q).value
    num = qpoch_multi([q, a * b, a * c, a * d, b * c, b * d, c * d], q, n).value
    den = qpoch(abcd / q, q, n).value
    val = K * low * num / (high * den)
    val = _collapse_real(val, p.is_real(), "aw_norm")
    return val.real if p.is_real() else val  # type: ignore[return-value]


@dataclass(frozen=True)
class DeltaSeq:
    """Coefficient sequence of the d-form generating function."""

    params: AWParams
    t: complex
    n: int


def delta_seq(ds: DeltaSeq) -> complex:
    """Delta_n(t): the n-th generating-function coefficient.

    (1 - abcd q^{2n-1}) (abcd/q, t^{-1}; q)_n (dt)^n
    / ((1 - abcd/q) (q, ad, bd, cd, abcdt; q)_n)

    The pair (t^{-1}; q)_n t^n is computed as prod_k (t - q^k); that form is
    finite for every t, including t = 0, and is exactly zero at t = 1 for
    n >= 1.
    """
    p, t, n = ds.params, complex(ds.t), ds.n
    if n < 0:
        raise DomainError("n must be >= 0")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = a * b * c * d
    if abs(1.0 - abcd / q) < 1e-12:
        raise DomainError("abcd = q degeneracy in Delta_n")
    den = qpoch_multi([q, a * d, b * d, c * d, abcd * t], q, n).value if n else 1.0
    if abs(den) == 0.0:
        raise DomainError("Delta_n denominator factor vanished")
    tpoch = 1.0 + 0.0j
    qk = 1.0
    for _ in range(n):
        tpoch *= t - qk
        qk *= q
    num = (1.0 - abcd * q ** (2 * n - 1)) * qpoch(abcd / q, q, n).value
    return num * tpoch * d ** n / ((1.0 - abcd / q) * den)


def _delta_a_form(p: AWParams, t: complex, n: int) -> complex:
    """a-form coefficient: (at)^n against denominators (q, ab, ac, ad, abcdt)."""
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    abcd = a * b * c * d
    den = qpoch_multi([q, a * b, a * c, a * d, abcd * t], q, n).value if n else 1.0
    if abs(den) == 0.0:
        raise DomainError("generating coefficient denominator vanished")
    tpoch = 1.0 + 0.0j
    qk = 1.0
    for _ in range(n):
        tpoch *= t - qk
        qk *= q
    num = (1.0 - abcd * q ** (2 * n - 1)) * qpoch(abcd / q, q, n).value
    return num * tpoch * a ** n / ((1.0 - abcd / q) * den)


def gen_func_rhs(theta: float, p: AWParams, t: complex,
                 variant: str = "d") -> complex:
    """Closed product side of the generating function, d-form or a-form."""
    if variant not in ("d", "a"):
        raise DomainError(f"variant must be 'd' or 'a', got {variant!r}")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    t = complex(t)
    x = math.cos(float(theta))
    abcd = a * b * c * d
    if variant == "d":
        lead, others = d, (a, b, c)
    else:
        lead, others = a, (b, c, d)
    if abs(lead * t) >= 1.0:
        raise DomainError(
            f"generating function ({variant}-form) requires |{variant} t| < 1")
    num = qpoch_multi([abcd] + [o * lead * t for o in others], q, math.inf).value
    num *= h_product(x, lead, q).value
    den = qpoch_multi([abcd * t] + [o * lead for o in others], q, math.inf).value
    den *= h_product(x, lead * t, q).value
    if abs(den) == 0.0:
        raise DomainError("generating function denominator product vanished")
    return num / den


def gen_func_series(theta: float, p: AWParams, t: complex, variant: str = "d",
                    target_accuracy: float = 1e-12) -> EvalResult:
    """Partial sum sum_n Delta_n(t) p_n(cos theta) with a geometric tail cut."""
    if variant not in ("d", "a"):
        raise DomainError(f"variant must be 'd' or 'a', got {variant!r}")
    t = complex(t)
    lead = p.d if variant == "d" else p.a
    rho = abs(lead * t)
    if rho >= 1.0:
        raise DomainError(
            f"generating function ({variant}-form) requires |{variant} t| < 1")
    x = math.cos(float(theta))
    s = 0.0 + 0.0j
    below = 0
    slack = (1.0 - rho) / (3.0 * rho + 1e-9)
    for n in range(AW_DEGREE_CAP + 1):
        coef = delta_seq(DeltaSeq(p, t, n)) if variant == "d" \
            else _delta_a_form(p, t, n)
        term = coef * aw_poly(n, x, p, target_accuracy * 1e-2)
        s += term
        tol_abs = target_accuracy * max(abs(s), 1e-300)
        if n > 2 and abs(term) <= tol_abs * min(slack, 1.0):
            below += 1
            if below >= 3:
                err = abs(term) * rho / (1.0 - rho) + 3.0 * tol_abs
                return EvalResult(s, err, n + 1)
        else:
            below = 0
    raise ConvergenceError(
        f"generating-function series not converged within degree cap "
        f"{AW_DEGREE_CAP} (|{variant} t| = {rho:.3f})"
    )
