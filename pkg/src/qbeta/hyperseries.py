"""Evaluators for basic hypergeometric series (balanced r+1 phi r shape).

Three evaluation strategies live here, chosen by the structure of the sum:

* non-terminating series: term-ratio accumulation with a certified geometric
  tail majorant (the majorant is monotone decreasing in the term index, so a
  single evaluation certifies every later ratio);
* terminating series: direct summation in doubles while the tracked
  cancellation allows it, with an adaptive-precision fallback once the
  alternating (q^{-n}; q)_k terms start eating digits -- the largest term
  grows like q^{-n(n-1)/2} while the sum can stay O(sigma^n), so fixed
  precision is structurally insufficient at large n;
* rescaled terminating series: the regrouped form of q^{n(n-1)/2} times the
  series, whose terms are uniformly bounded.  This is the numerically stable
  citizen to use inside outer sums that carry an explicit q^{n(n-1)/2}.

The very-well-poised compact notation expands q*sqrt(a1), -q*sqrt(a1) into
the numerator and sqrt(a1), -sqrt(a1), q*a1/a_j into the denominator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath as mp

from .qcore import (
    ConvergenceError,
    DomainError,
    EvalResult,
    check_base,
    qpoch,
    qpoch_multi,
)

__all__ = [
    "SeriesSpec",
    "VWPSpec",
    "phi_eval",
    "vwp_eval",
    "term_ratio_bound",
    "prop32_bound",
    "terminating_phi",
    "rescaled_terminating_phi",
    "very_well_poised_sum",
    "detect_termination_order",
]

_EPS = 1.2e-16
TERM_BUDGET = 100_000
_MAX_DPS = 6000
_TERMINATION_REL_TOL = 1e-12
_TERMINATION_MAX_ORDER = 10_000


@dataclass(frozen=True)
class SeriesSpec:
    """Abstract description of a balanced basic hypergeometric series.

    numerator has exactly one more parameter than denominator; the summand is
    (a1,...,a_{r+1}; q)_n z^n / (q, b1,...,b_r; q)_n.
    """

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...]
    q: float
    argument: complex

    def __post_init__(self):
        check_base(self.q)
        if len(self.numerator) != len(self.denominator) + 1:
            raise DomainError(
                "balanced series needs len(numerator) == len(denominator) + 1,"
                f" got {len(self.numerator)} vs {len(self.denominator)}"
            )
        object.__setattr__(self, "numerator", tuple(complex(u) for u in self.numerator))
        object.__setattr__(self, "denominator", tuple(complex(u) for u in self.denominator))
        object.__setattr__(self, "argument", complex(self.argument))


@dataclass(frozen=True)
class VWPSpec:
    """Very-well-poised series in compact notation: head a1 plus tail a4..a_{r+1}."""

    a1: complex
    tail: tuple[complex, ...]
    q: float
    argument: complex

    def expand(self) -> SeriesSpec:
        if self.a1 == 0:
            raise DomainError("very-well-poised head a1 = 0: square-root insertion undefined")
        sa = cmath.sqrt(complex(self.a1))
        numer = (complex(self.a1), self.q * sa, -self.q * sa) + tuple(self.tail)
        denom = (sa, -sa) + tuple(self.q * complex(self.a1) / complex(t) for t in self.tail)
        return SeriesSpec(numer, denom, self.q, self.argument)


def detect_termination_order(u: complex, q: float) -> int | None:
    """Return n if u matches q^{-n} within relative 1e-12, else None."""
    mag = abs(u)
    if mag < 1.0 - 1e-9:
        return None
    est = -math.log(mag) / math.log(q)
    for m in (math.floor(est), math.ceil(est)):
        if 0 <= m <= _TERMINATION_MAX_ORDER:
            ref = q ** (-m)
            if abs(u - ref) <= _TERMINATION_REL_TOL * ref:
                return m
    return None


def _series_termination(spec: SeriesSpec) -> int | None:
    orders = [detect_termination_order(u, spec.q) for u in spec.numerator]
    orders = [n for n in orders if n is not None]
    return min(orders) if orders else None


def _guard_denominator_poles(spec: SeriesSpec, n_term: int | None) -> None:
    for v in spec.denominator:
        m = detect_termination_order(v, spec.q)
        if m is not None and (n_term is None or n_term > m):
            raise DomainError(
                f"denominator parameter {v} is q^-{m}: the series hits a zero "
                "denominator before terminating"
            )


def _ratio_majorant(spec: SeriesSpec, k: int) -> float:
    """Upper bound on |t_{k+1}/t_k| valid for every index >= k.

    |z| prod(1+|a_i| q^k) / ((1 - q^{k+1}) prod(1 - |b_j| q^k)) is monotone
    decreasing in k, so evaluating it once bounds the whole tail.
    """
    q = spec.q
    qk = q ** k
    m = abs(spec.argument)
    for a in spec.numerator:
        m *= 1.0 + abs(a) * qk
    m /= 1.0 - q ** (k + 1)
    for b in spec.denominator:
        d = 1.0 - abs(b) * qk
        if d <= 0.0:
            return math.inf
        m /= d
    return m


def term_ratio_bound(spec: SeriesSpec, from_index: int) -> float:
    """Certified geometric ratio for term magnitudes beyond from_index."""
    if _series_termination(spec) is not None:
        raise DomainError("term_ratio_bound applies to non-terminating series only")
    for k in range(from_index, from_index + 51):
        rho = _ratio_majorant(spec, k)
        if rho < 1.0:
            return rho
    raise ConvergenceError(
        f"no certified ratio < 1 within 50 indices past {from_index}"
    )


def phi_eval(spec: SeriesSpec, target_accuracy: float = 1e-12) -> EvalResult:
    """Sum the series described by ``spec`` to the requested relative accuracy.

    Terminating specs (a numerator parameter equal to q^-n) are summed
    exactly in n+1 terms; otherwise |argument| < 1 is required and terms are
    accumulated until both the next-term magnitude and a certified geometric
    tail bound fall below target.
    """
    if target_accuracy <= 0:
        raise DomainError("target_accuracy must be positive")
    n_term = _series_termination(spec)
    _guard_denominator_poles(spec, n_term)
    if n_term is not None:
        idx = [detect_termination_order(u, spec.q) for u in spec.numerator].index(n_term)
        rest = spec.numerator[:idx] + spec.numerator[idx + 1:]
        return terminating_phi(n_term, rest, spec.denominator, spec.q,
                               spec.argument, target_accuracy)
    if abs(spec.argument) >= 1.0:
        raise DomainError(
            f"non-terminating series diverges: |argument| = {abs(spec.argument):.6g} >= 1"
        )
    q = spec.q
    s = 0.0 + 0.0j
    t = 1.0 + 0.0j
    below = 0
    for k in range(TERM_BUDGET):
        s += t
        rho = _ratio_majorant(spec, k + 1)
        if rho < 1.0:
            tail = abs(t) * rho / (1.0 - rho)
            if tail <= target_accuracy * max(abs(s), 1e-300) and abs(t) <= target_accuracy * max(abs(s), 1e-300):
                return EvalResult(s, tail + (k + 1) * _EPS * abs(s), k + 1)
        elif k > 50:
            # heuristic regime near the convergence boundary: certified
            # majorant unavailable, fall back to last-term magnitude
            if abs(t) <= 0.1 * target_accuracy * max(abs(s), 1e-300):
                below += 1
                if below >= 3:
                    return EvalResult(s, abs(t), k + 1, heuristic_err=True)
            else:
                below = 0
        ratio = complex(spec.argument)
        qk = q ** k
        for a in spec.numerator:
            ratio *= 1.0 - a * qk
        ratio /= 1.0 - q ** (k + 1)
        for b in spec.denominator:
            ratio /= 1.0 - b * qk
        t *= ratio
        if not (math.isfinite(t.real) and math.isfinite(t.imag)):
            raise OverflowError("series term overflowed double precision")
    raise ConvergenceError(
        f"series did not reach accuracy {target_accuracy} within {TERM_BUDGET} terms"
    )


# --------------------------------------------------------------------------
# terminating series
# --------------------------------------------------------------------------

def _terminating_double(n: int, rest: tuple[complex, ...],
                        denom: tuple[complex, ...], q: float,
                        z: complex) -> tuple[complex, float, bool]:
    """Direct float64 sum; returns (sum, max_term, finite_flag)."""
    qmn = q ** (-n) if n * math.log10(1.0 / q) < 290 else math.inf
    if qmn is math.inf:
        return 0.0j, math.inf, False
    s = 0.0 + 0.0j
    t = 1.0 + 0.0j
    mx = 1.0
    for k in range(n + 1):
        s += t
        if k == n:
            break
        qk = q ** k
        ratio = complex(z) * (1.0 - qmn * qk)
        for a in rest:
            ratio *= 1.0 - a * qk
        ratio /= 1.0 - q ** (k + 1)
        for b in denom:
            ratio /= 1.0 - b * qk
        t *= ratio
        if not (math.isfinite(t.real) and math.isfinite(t.imag)):
            return s, math.inf, False
        mx = max(mx, abs(t))
    return s, mx, True


def _terminating_mp(n: int, rest: tuple[complex, ...],
                    denom: tuple[complex, ...], q: float, z: complex,
                    dps: int) -> tuple[complex, float]:
    """Arbitrary-precision sum of the same terminating series."""
    with mp.workdps(dps):
        qm = mp.mpf(q)
        zm = mp.mpc(z)
        restm = [mp.mpc(u) for u in rest]
        denm = [mp.mpc(u) for u in denom]
        s = mp.mpc(0)
        t = mp.mpc(1)
        mx = mp.mpf(1)
        for k in range(n + 1):
            s += t
            if k == n:
                break
            qk = qm ** k
            ratio = zm * (1 - qm ** (k - n))
            for a in restm:
                ratio *= 1 - a * qk
            ratio /= 1 - qm ** (k + 1)
            for b in denm:
                ratio /= 1 - b * qk
            t *= ratio
            mx = max(mx, abs(t))
        return complex(s), float(mp.log10(mx) if mx > 0 else 0)


def terminating_phi(n: int, rest: tuple[complex, ...] | list[complex],
                    denom: tuple[complex, ...] | list[complex], q: float,
                    z: complex, target_accuracy: float = 1e-13,
                    size_hint: float | None = None) -> EvalResult:
    """Terminating series with numerator (q^-n, rest...) and argument z.

    Stays in float64 while the tracked largest-term magnitude shows the
    alternating cancellation is harmless; otherwise re-sums with mpmath at a
    precision sized to the cancellation, escalating geometrically until the
    result is resolved.  ``size_hint`` (an expected |value|) lets callers
    start at the right precision in one jump.  A value whose magnitude keeps
    tracking the roundoff floor across escalations is reported as zero with
    the roundoff floor as its error.
    """
    check_base(q)
    if n < 0:
        raise DomainError("termination order must be >= 0")
    rest = tuple(complex(u) for u in rest)
    denom = tuple(complex(u) for u in denom)
    z = complex(z)
    s, mx, ok = _terminating_double(n, rest, denom, q, z)
    if ok:
        loss = (n + 1) * _EPS * mx
        if loss <= target_accuracy * max(abs(s), 1e-300):
            return EvalResult(s, loss, n + 1, terminated=True)
        log_mx = math.log10(mx) if mx > 0 else 0.0
    else:
        # overflowed: size the first mpmath pass from the q-power growth
        log_mx = 0.5 * n * (n - 1) * math.log10(1.0 / q) + n
    if size_hint is not None and size_hint > 0:
        log_size = math.log10(size_hint)
    elif ok and abs(s) > 0:
        log_size = math.log10(abs(s))
    else:
        log_size = log_mx - 15.0
    dps = 0
    val = 0.0j
    for _ in range(14):
        want = int(math.ceil(log_mx - log_size)) + 30
        # 340 digits below the largest term puts any unresolved value under
        # double precision's subnormal floor: report an exact zero then
        floor_dps = int(math.ceil(log_mx)) + 340
        dps = max(int(dps * 1.6) + 10, min(max(want, 25), _MAX_DPS), 25)
        val, log_mx = _terminating_mp(n, rest, denom, q, z, dps)
        log_val = math.log10(abs(val)) if abs(val) > 0 else -math.inf
        if log_val > log_mx - (dps - 18):
            err = (n + 1) * abs(val) * 10 ** min(log_mx - log_val - dps, 300.0)
            return EvalResult(val, err, n + 1, terminated=True)
        if dps >= min(floor_dps, _MAX_DPS):
            break
        if math.isfinite(log_val):
            log_size = min(log_size, log_val)
    err = (n + 1) * 10 ** max(min(log_mx - dps + 2.0, 300.0), -300.0)
    return EvalResult(0.0j, err, n + 1, terminated=True)


def rescaled_terminating_phi(n: int, rest: tuple[complex, ...] | list[complex],
                             denom: tuple[complex, ...] | list[complex],
                             q: float, x: complex) -> EvalResult:
    """q^{n(n-1)/2} times the terminating series with argument q*x.

    Regrouped so every term is bounded: term k equals
    (-1)^k q^{C(n-k,2)} (q^{n-k+1}; q)_k (rest; q)_k x^k / (q, denom; q)_k.
    Pure float64; the absolute error is (n+1) ulp of the largest term.
    """
    check_base(q)
    rest = tuple(complex(u) for u in rest)
    denom = tuple(complex(u) for u in denom)
    x = complex(x)
    lnq = math.log(q)
    # ln (q;q)_j prefix table
    ln_qq = [0.0]
    acc = 0.0
    for j in range(1, n + 1):
        acc += math.log(1.0 - q ** j)
        ln_qq.append(acc)
    s = 0.0 + 0.0j
    s2 = 1.0 + 0.0j  # (rest; q)_k x^k / (q, denom; q)_k
    mx = 0.0
    for k in range(n + 1):
        m = n - k
        ln_s1 = 0.5 * m * (m - 1) * lnq + ln_qq[n] - ln_qq[m]
        s1 = math.exp(ln_s1) if ln_s1 > -745.0 else 0.0
        term = ((-1) ** k) * s1 * s2
        s += term
        mx = max(mx, abs(term))
        if k == n:
            break
        qk = q ** k
        fac = x
        for a in rest:
            fac *= 1.0 - a * qk
        fac /= 1.0 - q ** (k + 1)
        for b in denom:
            fac /= 1.0 - b * qk
        s2 *= fac
        if not (math.isfinite(s2.real) and math.isfinite(s2.imag)):
            raise OverflowError("rescaled terminating series overflowed")
    return EvalResult(s, (n + 1) * _EPS * max(mx, 1e-300), n + 1, terminated=True)


def prop32_bound(spec: SeriesSpec, lam: float) -> float:
    """Uniform-in-n bound on q^{n(n-1)/2} |series| for the terminating shape.

    Requires numerator ordered as (q^-n, a1 q^n, a2, ..., a_r), denominator
    moduli < 1, 0 < lam < 1, and |argument| <= q*lam.  Returns
    (-|a1 lam|, -q, -|a2|, ..., -|a_r|; q)_inf / (lam, |b1|, ..., |b_r|; q)_inf.
    """
    q = spec.q
    if not (0.0 < lam < 1.0):
        raise DomainError("lambda must lie in (0, 1)")
    n = detect_termination_order(spec.numerator[0], q)
    if n is None:
        raise DomainError("prop32_bound needs numerator[0] = q^-n")
    if abs(spec.argument) > q * lam * (1.0 + 1e-9):
        raise DomainError("bound requires |argument| <= q * lambda")
    mods = [abs(b) for b in spec.denominator]
    if mods and max(mods) >= 1.0:
        raise DomainError("bound requires max |denominator| < 1")
    if n * math.log10(1.0 / q) >= 290:
        raise DomainError(f"termination order n={n} too large to recover a1 from a1 q^n")
    a1 = spec.numerator[1] * q ** (-n)
    num_params = [-abs(a1) * lam, -q] + [-abs(u) for u in spec.numerator[2:]]
    den_params = [lam] + mods
    num = qpoch_multi(num_params, q, math.inf)
    den = qpoch_multi(den_params, q, math.inf)
    return abs(num.value) / abs(den.value)


def very_well_poised_sum(a1: complex, extras: list[complex],
                         denoms: list[complex], q: float, z: complex,
                         target_accuracy: float = 1e-12) -> EvalResult:
    """Very-well-poised series in explicit term form.

    term_n = [(1 - a1 q^{2n})/(1 - a1)] (a1; q)_n prod(extras; q)_n z^n
             / ((q; q)_n prod(denoms; q)_n)

    ``denoms`` are the already-simplified denominator parameters (q a1 / e
    for each extra e); passing them explicitly keeps the stream well defined
    in limits where a1 -> 0 with an extra -> 0 jointly.
    """
    check_base(q)
    a1 = complex(a1)
    extras = [complex(u) for u in extras]
    denoms = [complex(u) for u in denoms]
    z = complex(z)
    if abs(1.0 - a1) < 1e-14:
        raise DomainError("very-well-poised head a1 = 1 is singular")
    s = 0.0 + 0.0j
    core = 1.0 + 0.0j
    below = 0
    vw_cap = (1.0 + abs(a1)) / abs(1.0 - a1)
    for k in range(TERM_BUDGET):
        term = core * (1.0 - a1 * q ** (2 * k)) / (1.0 - a1)
        s += term
        if term == 0:
            return EvalResult(s, (k + 1) * _EPS * abs(s), k + 1, terminated=True)
        qk = q ** k
        rho = abs(z) * (1.0 + abs(a1) * qk)
        for a in extras:
            rho *= 1.0 + abs(a) * qk
        rho /= 1.0 - q ** (k + 1)
        ok = True
        for b in denoms:
            dd = 1.0 - abs(b) * qk
            if dd <= 0.0:
                ok = False
                break
            rho /= dd
        if ok and rho < 1.0:
            tail = abs(core) * rho / (1.0 - rho) * vw_cap
            if tail <= target_accuracy * max(abs(s), 1e-300) and \
                    abs(term) <= target_accuracy * max(abs(s), 1e-300):
                return EvalResult(s, tail + (k + 1) * _EPS * abs(s), k + 1)
        elif k > 50:
            if abs(term) <= 0.1 * target_accuracy * max(abs(s), 1e-300):
                below += 1
                if below >= 3:
                    return EvalResult(s, abs(term), k + 1, heuristic_err=True)
            else:
                below = 0
        fac = complex(z) * (1.0 - a1 * qk)
        for a in extras:
            fac *= 1.0 - a * qk
        fac /= 1.0 - q ** (k + 1)
        for b in denoms:
            fac /= 1.0 - b * qk
        core *= fac
        if not (math.isfinite(core.real) and math.isfinite(core.imag)):
            raise OverflowError("very-well-poised term overflowed")
    raise ConvergenceError("very-well-poised series exhausted its term budget")


def vwp_eval(spec: VWPSpec, target_accuracy: float = 1e-12) -> EvalResult:
    """Evaluate a very-well-poised series through its expanded phi form."""
    return phi_eval(spec.expand(), target_accuracy)
