"""Periodic-trapezoid quadrature over [0, pi] plus vectorized integrands.

Every integrand in this project is even, 2*pi-periodic and analytic in theta
for in-domain parameters, so the equispaced closed trapezoid rule converges
geometrically.  ``integrate`` doubles the node count, reusing previous
samples, until two successive refinements agree within the target.

Integrand callables receive a numpy array of theta values and return a
complex array; the kernels below (weights, the Nassrallah-Rahman integrand,
the twelve-parameter integrand) are all vectorized this way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .qcore import ConvergenceError, DomainError, check_base

__all__ = [
    "Integrand",
    "QuadResult",
    "integrate",
    "h_grid",
    "weight_grid",
    "aw_weight_grid",
    "aw_poly_grid",
    "phi43_grid",
    "nr_integrand",
    "thm18_integrand",
]

MAX_NODES = 2 ** 18
START_NODES = 64
TERM_CAP_GRID = 400
_EPS = 1.2e-16


@dataclass
class Integrand:
    """Callable on a theta grid plus smoothness bookkeeping."""

    func: Callable[[np.ndarray], np.ndarray]
    smoothness: str = "analytic-periodic"
    singularities: tuple = field(default_factory=tuple)

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(theta), dtype=complex)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    err_estimate: float
    nodes_used: int
    converged: bool


def integrate(f, target_accuracy: float, scale_hint: float = 0.0,
              start_nodes: int = START_NODES,
              max_nodes: int = MAX_NODES) -> QuadResult:
    """Integrate f over [0, pi] with the doubling closed trapezoid rule.

    Convergence is declared when the delta between successive refinements
    drops below target_accuracy * max(|I|, scale_hint); scale_hint lets
    callers integrate quantities whose true value is ~0 (orthogonality
    off-diagonals) against an external magnitude.
    """
    if target_accuracy <= 0:
        raise DomainError("target_accuracy must be positive")
    fn = f if isinstance(f, Integrand) else Integrand(f)
    n = start_nodes
    theta = np.linspace(0.0, math.pi, n + 1)
    vals = fn(theta)
    if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
        raise ConvergenceError("integrand returned a non-finite sample")
    h = math.pi / n
    total = complex(vals[0] / 2 + vals[1:-1].sum() + vals[-1] / 2)
    current = h * total
    while n < max_nodes:
        mid = np.linspace(0.0, math.pi, 2 * n + 1)[1::2]
        new_vals = fn(mid)
        if not np.all(np.isfinite(new_vals.real)) or not np.all(np.isfinite(new_vals.imag)):
            raise ConvergenceError("integrand returned a non-finite sample")
        n *= 2
        h = math.pi / n
        total = total + complex(new_vals.sum())
        refined = h * total
        delta = abs(refined - current)
        current = refined
        if n >= 2 * start_nodes and \
                delta <= target_accuracy * max(abs(refined), scale_hint):
            return QuadResult(refined, delta, n + 1, True)
    raise ConvergenceError(
        f"quadrature did not converge within {max_nodes} nodes "
        f"(last delta {abs(delta):.3e})"
    )


# --------------------------------------------------------------------------
# vectorized kernels
# --------------------------------------------------------------------------

def _tail_cutoff(mag: float, q: float, target: float = 1e-16) -> int:
    if mag == 0.0:
        return 0
    bound = target * (1.0 - q) / (10.0 * mag)
    if bound >= 1.0:
        return 0
    return max(int(math.ceil(math.log(bound) / math.log(q))), 0)


def h_grid(x: np.ndarray, a: complex, q: float) -> np.ndarray:
    """h(x; a|q) on an array of x values via the quadratic factor product."""
    check_base(q)
    x = np.asarray(x, dtype=float)
    a = complex(a)
    out = np.ones(x.shape, dtype=complex)
    kmax = _tail_cutoff(2.0 * abs(a) + abs(a) ** 2, q)
    qk = 1.0
    for _ in range(kmax):
        out *= 1.0 - (2.0 * a * qk) * x + (a * a) * (qk * qk)
        qk *= q
    return out


def weight_grid(theta: np.ndarray, params, q: float) -> np.ndarray:
    """h(cos 2 theta; 1|q) / h(cos theta; params|q) on a theta grid."""
    theta = np.asarray(theta, dtype=float)
    num = h_grid(np.cos(2.0 * theta), 1.0, q)
    den = np.ones(theta.shape, dtype=complex)
    for u in params:
        den *= h_grid(np.cos(theta), u, q)
    return num / den


def aw_weight_grid(theta: np.ndarray, a, b, c, d, q: float) -> np.ndarray:
    if max(abs(complex(u)) for u in (a, b, c, d)) >= 1.0:
        raise DomainError("the Askey-Wilson weight requires max moduli < 1")
    return weight_grid(theta, (a, b, c, d), q)


def aw_poly_grid(n: int, x: np.ndarray, a, b, c, d, q: float) -> np.ndarray:
    """Askey-Wilson polynomial on an array of x = cos(theta) values.

    Straight float64 term recursion; fine for the small degrees the
    quadrature checks use (cancellation costs ~ n(n-1)/2 log10(1/q) digits,
    so callers keep n small or go through askey_wilson.aw_poly).
    """
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    if a == 0:
        raise DomainError("aw_poly_grid needs a != 0")
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones(x.shape, dtype=complex)
    abcd = a * b * c * d
    s = np.ones(x.shape, dtype=complex)
    t = np.ones(x.shape, dtype=complex)
    qmn = q ** (-n)
    other = abcd * q ** (n - 1)
    for k in range(n):
        qk = q ** k
        ratio = q * (1.0 - qmn * qk) * (1.0 - other * qk) \
            / ((1.0 - q ** (k + 1)) * (1.0 - a * b * qk) * (1.0 - a * c * qk)
               * (1.0 - a * d * qk))
        t = t * ratio * (1.0 - (2.0 * a * qk) * x + (a * a) * (qk * qk))
        s = s + t
    pref = a ** (-n)
    for params in (a * b, a * c, a * d):
        pp = 1.0
        qk = 1.0
        for _ in range(n):
            pp *= 1.0 - params * qk
            qk *= q
        pref *= pp
    return pref * s


def phi43_grid(theta: np.ndarray, a, beta, delta, s, t, h, q: float,
               argument) -> np.ndarray:
    """4phi3(a e^{i theta}, a e^{-i theta}, beta, delta; s, t, h; q, z) on a grid.

    The conjugate numerator pair is folded into the real quadratic factor
    1 - 2 a q^k x + a^2 q^{2k}.  Requires |z| < 1.
    """
    check_base(q)
    a, beta, delta = complex(a), complex(beta), complex(delta)
    s_, t_, h_ = complex(s), complex(t), complex(h)
    z = complex(argument)
    if abs(z) >= 1.0:
        raise DomainError("phi43_grid requires |argument| < 1")
    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    acc = np.ones(x.shape, dtype=complex)
    term = np.ones(x.shape, dtype=complex)
    for k in range(TERM_CAP_GRID):
        qk = q ** k
        scal = z * (1.0 - beta * qk) * (1.0 - delta * qk) / (
            (1.0 - q ** (k + 1)) * (1.0 - s_ * qk) * (1.0 - t_ * qk)
            * (1.0 - h_ * qk))
        term = term * scal * (1.0 - (2.0 * a * qk) * x + (a * a) * (qk * qk))
        acc = acc + term
        mx = float(np.max(np.abs(term)))
        if mx <= 1e-17 * max(float(np.max(np.abs(acc))), 1e-300):
            return acc
    raise ConvergenceError("grid series for the 4phi3 kernel did not converge")


def nr_integrand(theta, a, b, c, u, v, d, q: float):
    """Nassrallah-Rahman integrand h(cos2t;1) h(cost;d) / h(cost;a,b,c,u,v).

    Scalar theta in, scalar out; array in, array out.  d = 0 gives the
    Ismail-Stanton-Viennot integrand, d = abcuv the Rahman one.
    """
    if max(abs(complex(w)) for w in (a, b, c, u, v)) >= 1.0:
        raise DomainError("Nassrallah-Rahman integrand requires max(|a|,|b|,|c|,|u|,|v|) < 1")
    scalar = np.isscalar(theta)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    out = weight_grid(th, (a, b, c, u, v), q) * h_grid(np.cos(th), d, q)
    return complex(out[0]) if scalar else out


def thm18_integrand(theta, point):
    """Integrand of the twelve-parameter q-beta integral.

    weight over (a, b, c, d, r) times
    4phi3(a e^{i t}, a e^{-i t}, beta, delta; s, t, h; q, bcdrz).
    ``point`` is any object exposing the named slots (a ParameterPoint).
    """
    a, b, c, d, r = point.a, point.b, point.c, point.d, point.r
    if max(abs(complex(w)) for w in (a, b, c, d, r, point.s, point.t, point.h)) >= 1.0 \
            or abs(complex(point.z)) > 1.0:
        raise DomainError("Thm 1.8 requires max modulus < 1 (|z| <= 1)")
    scalar = np.isscalar(theta)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    arg = b * c * d * r * point.z
    out = weight_grid(th, (a, b, c, d, r), point.q) * phi43_grid(
        th, a, point.beta, point.delta, point.s, point.t, point.h, point.q, arg)
    return complex(out[0]) if scalar else out
