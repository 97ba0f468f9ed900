"""Scalar q-product kernels: q-shifted factorials and quadratic h-products.

All functions work on Python complex scalars in double precision and return
an :class:`EvalResult` carrying the value together with an absolute error
estimate, so downstream consumers can reject under-resolved values.

Conventions
-----------
* The base satisfies ``0 < q < 1`` strictly; everything else is rejected.
* ``n`` in the finite products is a nonnegative integer; ``math.inf`` selects
  the infinite product.
* Infinite products are truncated at the index K where the geometric tail
  bound ``|a| q^K / (1 - q)`` drops below a tenth of the accuracy target.
  For ``0 < q < 1`` this bound is rigorous.
* No NaN/Inf escapes a public operation: a non-finite intermediate raises
  ``OverflowError`` instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

__all__ = [
    "DomainError",
    "ConvergenceError",
    "EvalResult",
    "DEFAULT_ACCURACY",
    "check_base",
    "qpoch",
    "qpoch_multi",
    "h_product",
    "h_product_multi",
    "aw_constant",
]

#: default relative accuracy target for infinite products
DEFAULT_ACCURACY = 1e-14

#: unit roundoff with a safety factor, used in error estimates
_EPS = 1.2e-16

#: imaginary parts below this relative threshold are treated as roundoff
REALNESS_TOL = 1e-10


class DomainError(ValueError):
    """An argument violates a stated hypothesis (base, modulus, degree...)."""


class ConvergenceError(RuntimeError):
    """An iteration failed to reach the accuracy target within its budget."""


@dataclass(frozen=True)
class EvalResult:
    """Value of a product/series plus bookkeeping for error control.

    ``err_estimate`` is an absolute bound-style estimate.  ``terminated``
    marks finite (exactly terminating) computations whose error is
    roundoff-only.  ``heuristic_err`` flags estimates that could not be
    backed by a certified tail bound.
    """

    value: complex
    err_estimate: float
    terms_used: int
    terminated: bool = False
    heuristic_err: bool = False

    @property
    def real(self) -> float:
        return self.value.real


def check_base(q: float) -> float:
    """Validate the standing hypothesis 0 < q < 1 and return q as float."""
    q = float(q)
    if not (0.0 < q < 1.0):
        raise DomainError(f"base must satisfy 0 < q < 1, got q={q}")
    return q


def _require_finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"{what} overflowed double precision")
    return value


def _tail_cutoff(mag: float, q: float, target: float) -> int:
    """Smallest K with mag * q**K / (1-q) < target/10 (geometric tail rule)."""
    if mag == 0.0:
        return 0
    bound = target * (1.0 - q) / (10.0 * mag)
    if bound >= 1.0:
        return 0
    k = int(math.ceil(math.log(bound) / math.log(q)))
    if k > 1_000_000:
        raise ConvergenceError(
            f"infinite product needs {k} factors; base q={q} too close to 1"
        )
    return max(k, 0)


def qpoch(a: complex, q: float, n: int | float,
          target_accuracy: float = DEFAULT_ACCURACY) -> EvalResult:
    """q-shifted factorial (a; q)_n = prod_{k<n} (1 - a q^k).

    ``n`` may be a nonnegative integer or ``math.inf``.  The infinite
    product always converges for 0 < q < 1; the reported error combines the
    geometric tail bound with an n-ulp roundoff allowance.
    """
    q = check_base(q)
    a = complex(a)
    if n is math.inf or n == math.inf:
        kmax = _tail_cutoff(abs(a), q, target_accuracy)
        p = 1.0 + 0.0j
        qk = 1.0
        for _ in range(kmax):
            p *= 1.0 - a * qk
            qk *= q
        _require_finite(p, "(a;q)_inf")
        tail = abs(a) * qk / (1.0 - q)
        err = abs(p) * (tail + kmax * _EPS)
        return EvalResult(p, err, kmax)
    if not isinstance(n, (int,)) or isinstance(n, bool):
        if isinstance(n, float) and n.is_integer() and n >= 0:
            n = int(n)
        else:
            raise DomainError(f"order must be a nonnegative integer or inf, got {n!r}")
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    p = 1.0 + 0.0j
    qk = 1.0
    for _ in range(n):
        p *= 1.0 - a * qk
        qk *= q
    _require_finite(p, "(a;q)_n")
    return EvalResult(p, abs(p) * n * _EPS, n, terminated=True)


def qpoch_multi(params: list[complex] | tuple[complex, ...], q: float,
                n: int | float,
                target_accuracy: float = DEFAULT_ACCURACY) -> EvalResult:
    """Multiple q-shifted factorial (a1, ..., am; q)_n.

    Error estimates of the factors combine multiplicatively to first order.
    """
    if len(params) == 0:
        raise DomainError("qpoch_multi requires a nonempty parameter list")
    p = 1.0 + 0.0j
    rel = 0.0
    terms = 0
    terminated = True
    for a in params:
        r = qpoch(a, q, n, target_accuracy)
        p *= r.value
        if abs(r.value) > 0.0:
            rel += r.err_estimate / abs(r.value)
        else:
            rel += r.err_estimate
        terms += r.terms_used
        terminated = terminated and r.terminated
    _require_finite(p, "multiple q-factorial")
    return EvalResult(p, abs(p) * rel + len(params) * _EPS * abs(p), terms,
                      terminated=terminated)


def _maybe_real(value: complex, what: str) -> complex:
    """Collapse a should-be-real result onto the real axis.

    Raises if the imaginary part is larger than roundoff allows; catching
    assembly mistakes early is the point of the check.
    """
    scale = max(abs(value), 1e-300)
    if abs(value.imag) > REALNESS_TOL * scale:
        raise ConvergenceError(
            f"{what}: imaginary residue {value.imag:.3e} exceeds realness "
            f"tolerance for |value|={scale:.3e}"
        )
    return complex(value.real, 0.0)


def h_product(x: float, a: complex, q: float,
              target_accuracy: float = DEFAULT_ACCURACY) -> EvalResult:
    """Quadratic h-product h(x; a|q) = prod_k (1 - 2 q^k a x + q^{2k} a^2).

    Equals (a e^{i theta}, a e^{-i theta}; q)_inf for x = cos(theta).  The
    result is real for real ``a``; a nontrivial imaginary residue raises.
    """
    q = check_base(q)
    x = float(x)
    if abs(x) > 1.0 + 1e-12:
        raise DomainError(f"h-product needs x = cos(theta) in [-1, 1], got {x}")
    x = min(1.0, max(-1.0, x))
    a = complex(a)
    # tail of log-product bounded by (2|a| + |a|^2) q^K / (1-q)
    kmax = _tail_cutoff(2.0 * abs(a) + abs(a) ** 2, q, target_accuracy)
    p = 1.0 + 0.0j
    qk = 1.0
    for _ in range(kmax):
        p *= 1.0 - 2.0 * qk * a * x + qk * qk * a * a
        qk *= q
    _require_finite(p, "h-product")
    tail = (2.0 * abs(a) + abs(a) ** 2) * qk / (1.0 - q)
    err = abs(p) * (tail + kmax * _EPS)
    if a.imag == 0.0:
        p = _maybe_real(p, "h_product")
    return EvalResult(p, err, kmax)


def h_product_multi(x: float, params: list[complex] | tuple[complex, ...],
                    q: float,
                    target_accuracy: float = DEFAULT_ACCURACY) -> EvalResult:
    """h(x; a1, ..., am|q), the product of single h-products; empty list -> 1."""
    p = 1.0 + 0.0j
    rel = 0.0
    terms = 0
    for a in params:
        r = h_product(x, a, q, target_accuracy)
        p *= r.value
        if abs(r.value) > 0.0:
            rel += r.err_estimate / abs(r.value)
        terms += r.terms_used
    _require_finite(p, "multiple h-product")
    return EvalResult(p, abs(p) * rel, terms)


def aw_constant(a: complex, b: complex, c: complex, d: complex, q: float,
                target_accuracy: float = DEFAULT_ACCURACY) -> EvalResult:
    """Askey-Wilson q-beta integral constant K(a, b, c, d|q).

    K = 2 pi (abcd; q)_inf / (q, ab, ac, ad, bc, bd, cd; q)_inf, valid for
    max(|a|, |b|, |c|, |d|) < 1.
    """
    q = check_base(q)
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    if max(abs(a), abs(b), abs(c), abs(d)) >= 1.0:
        raise DomainError(
            "Askey-Wilson integral requires max(|a|,|b|,|c|,|d|) < 1"
        )
    num = qpoch(a * b * c * d, q, math.inf, target_accuracy)
    den = qpoch_multi(
        [q, a * b, a * c, a * d, b * c, b * d, c * d], q, math.inf,
        target_accuracy)
    val = 2.0 * math.pi * num.value / den.value
    _require_finite(val, "aw_constant")
    rel = 0.0
    if abs(num.value) > 0:
        rel += num.err_estimate / abs(num.value)
    rel += den.err_estimate / abs(den.value)
    if a.imag == b.imag == c.imag == d.imag == 0.0:
        val = _maybe_real(val, "aw_constant")
    return EvalResult(val, abs(val) * rel, num.terms_used + den.terms_used)
