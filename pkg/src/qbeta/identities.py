"""Registry of verifiable identities: each entry pairs an LHS and an RHS
evaluator with a domain predicate and a deterministic parameter sampler.

Evaluators return :class:`~qbeta.qcore.EvalResult` so every comparison can
weigh the observed difference against the two sides' own error estimates.
Identities indexed by an integer order (the terminating summations) and the
pointwise-in-theta generating functions report the worst pair over their
battery; the report carries the offending label.

Outer sums that pair q^{n(n-1)/2} with a terminating inner series use the
rescaled bounded-term form and truncate once the outer coefficient times the
uniform bound of the inner series drops below a tenth of the tolerance for
three consecutive indices.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable

from .qcore import (
    ConvergenceError,
    DomainError,
    EvalResult,
    aw_constant,
    check_base,
    h_product,
    qpoch,
    qpoch_multi,
)
from .hyperseries import (
    SeriesSpec,
    VWPSpec,
    phi_eval,
    prop32_bound,
    rescaled_terminating_phi,
    terminating_phi,
    very_well_poised_sum,
    vwp_eval,
)
from .askey_wilson import AWParams, aw_norm, gen_func_rhs, gen_func_series
from . import quadrature as quad
from .sampling import SplitMix64

__all__ = [
    "ParameterPoint",
    "IdentitySpec",
    "IdentityReport",
    "PairOutcome",
    "REGISTRY",
    "REDUCTIONS",
    "check",
    "reduce_check",
    "verma_jain_sum",
    "andrews_watson_sum",
    "THETA_GRID",
]

_INF = math.inf
_TIGHT = 0.02          # evaluator accuracy as a fraction of the check tolerance
_FLOOR = 1e-300
_BATTERY_N = range(0, 11)

#: fixed interior theta grid for pointwise-in-theta checks (17 points)
THETA_GRID = tuple(k * math.pi / 18.0 for k in range(1, 18))

_SLOTS = ("a", "b", "c", "d", "r", "s", "t", "h", "u", "v", "z",
          "beta", "gamma", "delta", "lam", "alpha")


@dataclass
class ParameterPoint:
    """Named bag of identity parameters; unused slots stay None."""

    q: float
    a: complex | None = None
    b: complex | None = None
    c: complex | None = None
    d: complex | None = None
    r: complex | None = None
    s: complex | None = None
    t: complex | None = None
    h: complex | None = None
    u: complex | None = None
    v: complex | None = None
    z: complex | None = None
    beta: complex | None = None
    gamma: complex | None = None
    delta: complex | None = None
    lam: complex | None = None
    alpha: complex | None = None

    def __post_init__(self):
        check_base(self.q)
        for name in _SLOTS:
            val = getattr(self, name)
            if val is not None:
                setattr(self, name, complex(val))

    def to_dict(self) -> dict:
        out = {"q": self.q}
        for name in _SLOTS:
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out


@dataclass(frozen=True)
class PairOutcome:
    label: str
    lhs: EvalResult
    rhs: EvalResult


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    citation: str
    kind: str                       # series=series | series=integral | integral=integral
    slots: tuple[str, ...]
    domain_desc: str
    domain: Callable[[ParameterPoint], None]
    evaluate: Callable[[ParameterPoint, float], list[PairOutcome]]
    sample: Callable[[SplitMix64, float, float, bool], ParameterPoint]
    default_tol: float
    scale: Callable[[ParameterPoint], float] | None = None
    derives: Callable[[ParameterPoint], ParameterPoint] | None = None
    experimental: Callable[[ParameterPoint], bool] | None = None


@dataclass
class IdentityReport:
    id: str
    point: dict
    label: str
    lhs_value: complex
    rhs_value: complex
    relative_error: float
    lhs_err_estimate: float
    rhs_err_estimate: float
    passed: bool
    heuristic: bool = False
    error: str | None = None
    wall_time: float = 0.0


# --------------------------------------------------------------------------
# small helpers
# --------------------------------------------------------------------------

def _inf_prod(params, q) -> EvalResult:
    return qpoch_multi(list(params), q, _INF)


def _quad_result_to_eval(res: quad.QuadResult) -> EvalResult:
    return EvalResult(res.value, res.err_estimate, res.nodes_used,
                      heuristic_err=not res.converged)


def _mods(point: ParameterPoint, names) -> float:
    return max(abs(getattr(point, n)) for n in names)


def _need(point: ParameterPoint, names, citation: str) -> None:
    missing = [n for n in names if getattr(point, n) is None]
    if missing:
        raise DomainError(f"{citation}: missing parameter slots {missing}")


def _unit_disc(point: ParameterPoint, names, citation: str, what="max modulus") -> None:
    _need(point, names, citation)
    m = _mods(point, names)
    if m >= 1.0:
        raise DomainError(
            f"{citation} requires {what} < 1 over slots {tuple(names)}, got {m:.4g}")


def _near_q_inverse_power(x: complex, q: float, rel: float = 1e-2) -> bool:
    """True when x sits within rel of some q^-m, m >= 0 (a Pochhammer pole)."""
    mag = abs(x)
    if mag < 1.0 - rel:
        return False
    est = -math.log(mag) / math.log(q)
    for m in (math.floor(est), math.ceil(est)):
        if m >= 0:
            ref = q ** (-m)
            if abs(x - ref) <= rel * ref:
                return True
    return False


def _draw(rng: SplitMix64, lo: float, hi: float, real: bool) -> complex:
    return rng.complex_in_annulus(lo, hi, real)


def _sum_outer(term_fn, bound_fn, target: float, budget: int = 2000,
               tail_safety: float = 3.0) -> EvalResult:
    """Accumulate term_fn(n) until bound_fn(n) certifies a negligible tail.

    bound_fn(n) must bound |term_m| for every m >= n; stopping needs three
    consecutive bounds below target/10 relative to the running sum.
    """
    s = 0.0 + 0.0j
    err = 0.0
    below = 0
    heuristic = False
    for n in range(budget):
        t, term_err = term_fn(n)
        s += t
        err += term_err
        tol_abs = 0.1 * target * max(abs(s), _FLOOR)
        b = bound_fn(n + 1)
        if b is None:
            heuristic = True
            b = abs(t)
        if b <= tol_abs:
            below += 1
            if below >= 3:
                return EvalResult(s, err + tail_safety * b, n + 1,
                                  heuristic_err=heuristic)
        else:
            below = 0
    raise ConvergenceError("outer summation exhausted its budget")


def _coef_stream(numer_params, denom_params, factor, q):
    """Yield (a1..; q)_n prod-style coefficients: c_0 = 1, incremental update.

    c_{n+1} = c_n * factor * prod(1 - u q^n) / prod(1 - w q^n).
    """
    c = 1.0 + 0.0j
    n = 0
    while True:
        yield c
        qn = q ** n
        for u in numer_params:
            c *= 1.0 - u * qn
        c *= factor
        for w in denom_params:
            c /= 1.0 - w * qn
        n += 1


# --------------------------------------------------------------------------
# closed summations used by the section-6 family
# --------------------------------------------------------------------------

def verma_jain_sum(n: int, alpha: complex, q: float) -> complex:
    """Closed value of 3phi2(q^-n, alpha q^n, 0; sqrt(q a), -sqrt(q a); q, q).

    Zero for odd n; (-1)^l q^{l^2} (q; q^2)_l alpha^l / (q alpha; q^2)_l
    for n = 2l.
    """
    check_base(q)
    if n < 0:
        raise DomainError("n must be >= 0")
    if n % 2 == 1:
        return 0.0 + 0.0j
    l = n // 2
    alpha = complex(alpha)
    q2 = q * q
    num = qpoch(q, q2, l).value
    den = qpoch(q * alpha, q2, l).value
    if abs(den) == 0.0:
        raise DomainError("(q alpha; q^2)_l vanished")
    return ((-1) ** l) * (q ** (l * l)) * num * alpha ** l / den


def andrews_watson_sum(n: int, alpha: complex, lam: complex, q: float) -> complex:
    """Closed value of the q-Watson 4phi3 at argument q.

    Zero for odd n; for n = 2m the value is
    (q; q^2)_m prod_{k<m}(lam - alpha q^{2k+1}) / ((q alpha; q^2)_m (q lam; q^2)_m),
    where the product form pairs (alpha q / lam; q^2)_m with lam^m so small
    lam stays harmless.
    """
    check_base(q)
    if n < 0:
        raise DomainError("n must be >= 0")
    if n % 2 == 1:
        return 0.0 + 0.0j
    m = n // 2
    alpha, lam = complex(alpha), complex(lam)
    q2 = q * q
    paired = 1.0 + 0.0j
    qk = q
    for _ in range(m):
        paired *= lam - alpha * qk
        qk *= q2
    den = qpoch(q * alpha, q2, m).value * qpoch(q * lam, q2, m).value
    if abs(den) == 0.0:
        raise DomainError("denominator base-q^2 factorial vanished")
    return qpoch(q, q2, m).value * paired / den


# --------------------------------------------------------------------------
# shared outer sum of the twelve-parameter integral / double transformation
# --------------------------------------------------------------------------

def thm18_rhs_sum(point: ParameterPoint, target: float) -> EvalResult:
    """sum_n [(1-aq^{2n})(alpha, ab, ac, ad, ar; q)_n /
              ((1-alpha)(q, abcd, abcr, abdr, acdr; q)_n)]
       (-bcdr)^n q^{n(n-1)/2} 4phi3(q^-n, alpha q^n, beta, delta; s,t,h; q, qz)

    Shared by the integral form and the double-series form.  The inner
    series enters through its rescaled bounded-term value, and truncation
    multiplies the outer coefficient by the uniform inner bound.
    """
    q = point.q
    a, b, c, d, r = point.a, point.b, point.c, point.d, point.r
    alpha = point.alpha
    w = b * c * d * r
    lam = min(max(abs(point.z), 1e-6), 0.999)
    inner_bound = abs(
        _inf_prod([-abs(alpha) * lam, -q, -abs(point.beta), -abs(point.delta)],
                  q).value) / abs(
        _inf_prod([lam, abs(point.s), abs(point.t), abs(point.h)], q).value)
    coefs = _coef_stream(
        [alpha, a * b, a * c, a * d, a * r],
        [q, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r],
        w, q)
    seen: list[complex] = []

    def term(n):
        cn = next(coefs)
        seen.append(cn)
        vw = (1.0 - alpha * q ** (2 * n)) / (1.0 - alpha)
        inner = rescaled_terminating_phi(
            n, (alpha * q ** n, point.beta, point.delta),
            (point.s, point.t, point.h), q, point.z)
        val = vw * cn * ((-1.0) ** n) * inner.value
        return val, abs(vw * cn) * inner.err_estimate

    def bound(n):
        if n - 1 < len(seen):
            head = abs(seen[n - 1])
            # |coef_m| <= |coef_{n-1}| |w|^{m-n+1} * prod growth, bounded by
            # the observed coefficient times a geometric envelope
            env = abs(w) * (1.0 + abs(alpha)) / (1.0 - q)
            vw_cap = (1.0 + abs(alpha)) / abs(1.0 - alpha)
            return head * max(env, abs(w)) * vw_cap * inner_bound
        return None

    return _sum_outer(term, bound, target)


def thm18_prefactor(point: ParameterPoint) -> EvalResult:
    q = point.q
    a, b, c, d, r = point.a, point.b, point.c, point.d, point.r
    num = _inf_prod([a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r], q)
    den = _inf_prod([q, a * b, a * c, a * d, a * r, b * c, b * d, b * r,
                     c * d, c * r, d * r, q * point.alpha], q)
    val = 2.0 * math.pi * num.value / den.value
    rel = (num.err_estimate / max(abs(num.value), _FLOOR)
           + den.err_estimate / max(abs(den.value), _FLOOR))
    return EvalResult(val, abs(val) * rel, num.terms_used + den.terms_used)


def thm19_prefactor(point: ParameterPoint) -> EvalResult:
    q = point.q
    a, b, c, d, r = point.a, point.b, point.c, point.d, point.r
    num = _inf_prod([a * b * d * r, a * c * d * r], q)
    den = _inf_prod([d * r, q * point.alpha], q)
    val = num.value / den.value
    rel = (num.err_estimate / max(abs(num.value), _FLOOR)
           + den.err_estimate / max(abs(den.value), _FLOOR))
    return EvalResult(val, abs(val) * rel, num.terms_used + den.terms_used)


def _inner_32(point: ParameterPoint, n: int, target: float) -> EvalResult:
    """3phi2(ab q^n, ac q^n, bc; abcd q^n, abcr q^n; q, dr)."""
    q = point.q
    a, b, c, d, r = point.a, point.b, point.c, point.d, point.r
    qn = q ** n
    spec = SeriesSpec(
        (a * b * qn, a * c * qn, b * c),
        (a * b * c * d * qn, a * b * c * r * qn),
        q, d * r)
    return phi_eval(spec, target)


def thm19_lhs_sum(point: ParameterPoint, target: float,
                  extra_numer=(), extra_denom=()) -> EvalResult:
    """Double series: outer coefficients times the inner 3phi2 above.

    extra_numer/extra_denom adapt the same loop to the section-6 variants,
    which differ only in the outer Pochhammer pattern.
    """
    q = point.q
    a, b, c, d, r = point.a, point.b, point.c, point.d, point.r
    arg = b * c * d * r * (point.z if point.z is not None else 1.0)
    numer = list(extra_numer) + [a * b, a * c, a * d, a * r]
    denom = [q] + list(extra_denom) + [a * b * c * d, a * b * c * r]
    coefs = _coef_stream(numer, denom, arg, q)
    inner_cap = 0.0
    state = {"last": 1.0}

    def term(n):
        cn = next(coefs)
        inner = _inner_32(point, n, target * 0.1)
        nonlocal inner_cap
        inner_cap = max(inner_cap, abs(inner.value))
        state["last"] = abs(cn)
        return cn * inner.value, abs(cn) * inner.err_estimate

    def bound(n):
        # outer coefficients decay at least geometrically with ratio ~ |arg|
        # once Pochhammer drift settles; pad with the observed inner sup
        env = abs(arg) * 2.0 ** (len(numer)) if n < 4 else abs(arg) * 1.5
        return state["last"] * env * max(inner_cap, 1.0) * 1.5

    return _sum_outer(term, bound, target)


# --------------------------------------------------------------------------
# registry construction
# --------------------------------------------------------------------------

_REG: dict[str, IdentitySpec] = {}


def _register(spec: IdentitySpec) -> None:
    if spec.id in _REG:
        raise ValueError(f"duplicate identity id {spec.id}")
    _REG[spec.id] = spec


def _single(label, lhs, rhs):
    return [PairOutcome(label, lhs, rhs)]


# ---- Askey-Wilson integral -------------------------------------------------

def _aw_integral_spec() -> IdentitySpec:
    cite = "Prop 1.2 (Askey-Wilson q-beta integral)"

    def domain(pt):
        _unit_disc(pt, "abcd", cite)

    def evaluate(pt, tol):
        p = (pt.a, pt.b, pt.c, pt.d)
        lhs = _quad_result_to_eval(quad.integrate(
            lambda th: quad.aw_weight_grid(th, *p, pt.q), tol * _TIGHT))
        rhs = aw_constant(*p, pt.q)
        return _single("", lhs, rhs)

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, a=_draw(rng, 0.05, cap, real),
                              b=_draw(rng, 0.05, cap, real),
                              c=_draw(rng, 0.05, cap, real),
                              d=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "aw-integral", cite, "series=integral", ("a", "b", "c", "d"),
        "max(|a|,|b|,|c|,|d|) < 1", domain, evaluate, sample, 1e-9)


def _orthogonality_spec(m: int, n: int) -> IdentitySpec:
    cite = "Thm 1.3 (Askey-Wilson orthogonality)"

    def domain(pt):
        _unit_disc(pt, "abcd", cite)

    def scale(pt):
        p = AWParams(pt.a, pt.b, pt.c, pt.d, pt.q)
        return abs(aw_norm(max(m, n), p))

    def evaluate(pt, tol):
        import numpy as np
        from .askey_wilson import aw_poly_cos_coeffs

        p = AWParams(pt.a, pt.b, pt.c, pt.d, pt.q)
        norm_scale = abs(aw_norm(max(m, n), p))
        gm = aw_poly_cos_coeffs(m, p, tol * _TIGHT * 0.1)
        gn = gm if n == m else aw_poly_cos_coeffs(n, p, tol * _TIGHT * 0.1)

        def f(th):
            th = np.asarray(th)
            w = quad.aw_weight_grid(th, pt.a, pt.b, pt.c, pt.d, pt.q)
            pm = sum(gm[k] * np.cos(k * th) for k in range(len(gm)))
            pn = pm if n == m else \
                sum(gn[k] * np.cos(k * th) for k in range(len(gn)))
            return w * pm * pn

        lhs = _quad_result_to_eval(quad.integrate(
            f, tol * _TIGHT, scale_hint=norm_scale))
        rhs_val = aw_norm(n, p) if m == n else 0.0
        rhs = EvalResult(complex(rhs_val), abs(rhs_val) * 1e-13, 0, terminated=True)
        return _single("", lhs, rhs)

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, a=_draw(rng, 0.05, cap, real),
                              b=_draw(rng, 0.05, cap, real),
                              c=_draw(rng, 0.05, cap, real),
                              d=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        f"aw-orthogonality({m},{n})", cite, "series=integral",
        ("a", "b", "c", "d"), "max(|a|,|b|,|c|,|d|) < 1",
        domain, evaluate, sample, 1e-8, scale=scale)


# ---- Rogers 6W5 and the extended form --------------------------------------

def _rogers_spec() -> IdentitySpec:
    cite = "Prop 1.4 (Rogers 6phi5 summation)"

    def derives(pt):
        alpha = pt.b * pt.c * pt.d * pt.z / pt.q
        return replace(pt, alpha=alpha)

    def domain(pt):
        _need(pt, ("b", "c", "d", "z"), cite)
        if abs(pt.q * pt.alpha / (pt.b * pt.c * pt.d)) >= 1.0:
            raise DomainError(f"{cite} requires |q alpha / (b c d)| < 1")

    def evaluate(pt, tol):
        q, b, c, d, z, al = pt.q, pt.b, pt.c, pt.d, pt.z, pt.alpha
        lhs = vwp_eval(VWPSpec(al, (b, c, d), q, z), tol * _TIGHT)
        num = _inf_prod([q * al, d * z, c * z, b * z], q)
        den = _inf_prod([c * d * z, b * d * z, b * c * z, z], q)
        val = num.value / den.value
        rel = (num.err_estimate / max(abs(num.value), _FLOOR)
               + den.err_estimate / max(abs(den.value), _FLOOR))
        return _single("", lhs, EvalResult(val, abs(val) * rel, 0))

    def sample(rng, q, cap, real):
        pt = ParameterPoint(q=q, b=_draw(rng, 0.05, cap, real),
                            c=_draw(rng, 0.05, cap, real),
                            d=_draw(rng, 0.05, cap, real),
                            z=_draw(rng, 0.05, cap, real))
        return derives(pt)

    return IdentitySpec(
        "rogers-6w5", cite, "series=series", ("b", "c", "d", "z"),
        "|q alpha / (b c d)| < 1 with alpha = b c d z / q",
        domain, evaluate, sample, 1e-10, derives=derives)


def _ext_rogers_evaluate(pt, tol, substituted: bool):
    """Common evaluator for the extended Rogers identity and its
    substitution form; ``substituted`` switches parameter wiring."""
    q = pt.q
    al, beta, gamma = pt.alpha, pt.beta, pt.gamma
    if not substituted:
        a, b, c = pt.a, pt.b, pt.c
        x = al * a * b * c / (q * q)
        outer_numer = [al, q / a, q / b, q / c]
        outer_denom = [q, al * a, al * b, al * c]
        inner_rest_tail = (beta, gamma)
        inner_denom = (q / a, q / b, al * beta * gamma * a * b / q)
        norm = 1.0 + 0.0j
        rhs_num = [al, al * a * c / q, al * b * c / q, al * beta * a * b / q,
                   al * gamma * a * b / q, al * beta * gamma * a * b * c / (q * q)]
        rhs_den = [al * a, al * b, al * c, al * beta * a * b * c / (q * q),
                   al * gamma * a * b * c / (q * q), al * beta * gamma * a * b / q]
    else:
        a, b, c, t = pt.a, pt.b, pt.c, pt.t
        A2 = a * a * b * c
        x = al * t * q / A2
        outer_numer = [al, a * b, a * c, 1.0 / t]
        outer_denom = [q, q * al / (a * b), q * al / (a * c), al * t * q]
        inner_rest_tail = (beta, gamma)
        inner_denom = (a * b, a * c, q * al * beta * gamma / A2)
        norm = 1.0 - al
        rhs_num = [q * al, q * al * t / (a * b), q * al * t / (a * c),
                   q * al * beta / A2, q * al * gamma / A2,
                   q * al * beta * gamma * t / A2]
        rhs_den = [q * al / (a * b), q * al / (a * c), q * al * t,
                   q * al * beta * t / A2, q * al * gamma * t / A2,
                   q * al * beta * gamma / A2]
    coefs = _coef_stream(outer_numer, outer_denom, x, q)
    state = {"last": 1.0}
    sigma = max(abs(beta), abs(gamma), 0.05)

    def term(n):
        cn = next(coefs)
        inner = terminating_phi(
            n, (al * q ** n,) + inner_rest_tail, inner_denom, q, q,
            tol * _TIGHT * 0.1, size_hint=sigma ** n)
        val = (1.0 - al * q ** (2 * n)) * cn * inner.value / norm
        state["last"] = max(abs(val), abs(cn))
        return val, abs(cn) * inner.err_estimate / abs(norm)

    def bound(n):
        # terms decay like |x * max(beta, gamma)|^n once settled; use the
        # observed scale with a generous geometric envelope
        env = abs(x) * max(abs(beta), abs(gamma), 0.3) * 4.0
        return state["last"] * max(env, 1e-30)

    lhs = _sum_outer(term, bound, tol)
    num = _inf_prod(rhs_num, q)
    den = _inf_prod(rhs_den, q)
    val = num.value / den.value
    rel = (num.err_estimate / max(abs(num.value), _FLOOR)
           + den.err_estimate / max(abs(den.value), _FLOOR))
    return _single("", lhs, EvalResult(val, abs(val) * rel, 0))


def _ext_rogers_spec() -> IdentitySpec:
    cite = "Thm 1.4 (extended Rogers summation)"

    def domain(pt):
        _need(pt, ("a", "b", "c", "alpha", "beta", "gamma"), cite)
        q = pt.q
        m = max(abs(pt.alpha * pt.beta * pt.a * pt.b * pt.c / (q * q)),
                abs(pt.alpha * pt.gamma * pt.a * pt.b * pt.c / (q * q)))
        if m >= 1.0:
            raise DomainError(
                f"{cite} requires max(|alpha beta a b c / q^2|, "
                f"|alpha gamma a b c / q^2|) < 1")
        for w in (q / pt.a, q / pt.b):
            if _near_q_inverse_power(w, q):
                raise DomainError(f"{cite}: q/a or q/b too close to a q^-m pole")

    def evaluate(pt, tol):
        return _ext_rogers_evaluate(pt, tol, substituted=False)

    def sample(rng, q, cap, real):
        for _ in range(400):
            pt = ParameterPoint(
                q=q,
                a=_draw(rng, cap * 0.5, cap, real),
                b=_draw(rng, cap * 0.5, cap, real),
                c=_draw(rng, cap * 0.5, cap, real),
                alpha=_draw(rng, 0.05, cap, real),
                beta=_draw(rng, 0.05, min(cap, 0.4), real),
                gamma=_draw(rng, 0.05, min(cap, 0.4), real))
            x = pt.alpha * pt.a * pt.b * pt.c / (q * q)
            if abs(x) > 0.35:
                continue
            try:
                domain(pt)
            except DomainError:
                continue
            return pt
        raise ConvergenceError("sampler failed to find an in-domain point")

    return IdentitySpec(
        "ext-rogers", cite, "series=series",
        ("a", "b", "c", "alpha", "beta", "gamma"),
        "max(|alpha beta a b c/q^2|, |alpha gamma a b c/q^2|) < 1; "
        "|alpha a b c/q^2| <= 0.35 for conditioning",
        domain, evaluate, sample, 1e-10)


def _ext_rogers_sub_spec() -> IdentitySpec:
    cite = "Thm 1.4 substitution form (c -> qt, (a,b) -> (q/ab, q/ac))"

    def domain(pt):
        _need(pt, ("a", "b", "c", "t", "alpha", "beta", "gamma"), cite)
        if abs(pt.t) < 1e-6:
            raise DomainError(f"{cite}: t = 0 is singular (t^-1 appears)")
        A2 = pt.a * pt.a * pt.b * pt.c
        rho = abs(pt.alpha * pt.t * pt.q / A2)
        if rho * max(abs(pt.beta), abs(pt.gamma)) >= 1.0:
            raise DomainError(f"{cite}: outer ratio out of the convergence region")
        if rho > 0.45:
            raise DomainError(f"{cite}: |alpha t q / a^2 b c| <= 0.45 required")

    def evaluate(pt, tol):
        return _ext_rogers_evaluate(pt, tol, substituted=True)

    def sample(rng, q, cap, real):
        for _ in range(400):
            a = _draw(rng, cap * 0.5, cap, real)
            b = _draw(rng, cap * 0.5, cap, real)
            c = _draw(rng, cap * 0.5, cap, real)
            t = _draw(rng, 0.2, cap, real)
            rho = rng.uniform(0.03, 0.3)
            alpha = rho * a * a * b * c / (q * t)
            if abs(alpha) > 0.7:
                continue
            pt = ParameterPoint(q=q, a=a, b=b, c=c, t=t, alpha=alpha,
                                beta=_draw(rng, 0.05, min(cap, 0.4), real),
                                gamma=_draw(rng, 0.05, min(cap, 0.4), real))
            try:
                domain(pt)
            except DomainError:
                continue
            return pt
        raise ConvergenceError("sampler failed to find an in-domain point")

    return IdentitySpec(
        "ext-rogers-sub", cite, "series=series",
        ("a", "b", "c", "t", "alpha", "beta", "gamma"),
        "|alpha t q / a^2 b c| <= 0.45, t != 0",
        domain, evaluate, sample, 1e-10)


# ---- generating functions ---------------------------------------------------

def _genfunc_spec(variant: str) -> IdentitySpec:
    cite = "Prop 1.5 (generating function, d-form)" if variant == "d" \
        else "Prop 1.7 (generating function, a-form)"

    def domain(pt):
        _unit_disc(pt, "abcd", cite)
        _need(pt, ("t",), cite)
        lead = pt.d if variant == "d" else pt.a
        if abs(lead * pt.t) >= 1.0:
            raise DomainError(f"{cite} requires |{variant} t| < 1")

    def evaluate(pt, tol):
        p = AWParams(pt.a, pt.b, pt.c, pt.d, pt.q)
        out = []
        for th in THETA_GRID:
            lhs = gen_func_series(th, p, pt.t, variant, tol * _TIGHT)
            val = gen_func_rhs(th, p, pt.t, variant)
            rhs = EvalResult(val, abs(val) * 1e-13, 0)
            out.append(PairOutcome(f"theta={th:.6f}", lhs, rhs))
        return out

    def sample(rng, q, cap, real):
        a = _draw(rng, 0.05, cap, real)
        b = _draw(rng, 0.05, cap, real)
        c = _draw(rng, 0.05, cap, real)
        d = _draw(rng, 0.05, cap, real)
        lead = abs(d if variant == "d" else a)
        t = _draw(rng, 0.05, min(0.5 / lead, 0.95), real)
        return ParameterPoint(q=q, a=a, b=b, c=c, d=d, t=t)

    return IdentitySpec(
        f"genfunc-{variant}", cite, "series=series",
        ("a", "b", "c", "d", "t"),
        f"max moduli < 1 and |{variant} t| < 1 (sampled |{variant} t| <= 0.5)",
        domain, evaluate, sample, 1e-9)


# ---- Nassrallah-Rahman family ----------------------------------------------

def _nr_rhs(pt: ParameterPoint, target: float) -> EvalResult:
    q = pt.q
    a, b, c, u, v, d = pt.a, pt.b, pt.c, pt.u, pt.v, pt.d
    num = _inf_prod([a * b * c * u, a * b * c * v, a * d, b * d, c * d], q)
    den = _inf_prod([q, a * b * c * d, a * b, a * c, a * u, a * v,
                     b * c, b * u, b * v, c * u, c * v], q)
    w = very_well_poised_sum(
        a * b * c * d / q,
        [a * b, a * c, b * c, d / u, d / v],
        [c * d, b * d, a * d, a * b * c * u, a * b * c * v],
        q, u * v, target)
    pref = 2.0 * math.pi * num.value / den.value
    val = pref * w.value
    rel = (num.err_estimate / max(abs(num.value), _FLOOR)
           + den.err_estimate / max(abs(den.value), _FLOOR))
    return EvalResult(val, abs(pref) * w.err_estimate + abs(val) * rel,
                      w.terms_used, heuristic_err=w.heuristic_err)


def _nr_spec() -> IdentitySpec:
    cite = "Thm 2.1 (Nassrallah-Rahman integral)"

    def domain(pt):
        _unit_disc(pt, "abcuv", cite)
        _need(pt, ("d",), cite)
        if abs(pt.d) >= 1.0:
            raise DomainError(f"{cite}: harness keeps |d| < 1")
        if min(abs(pt.u), abs(pt.v)) < 1e-6 and abs(pt.d) > 0:
            raise DomainError(f"{cite}: d/u, d/v undefined for u or v = 0")

    def evaluate(pt, tol):
        lhs = _quad_result_to_eval(quad.integrate(
            lambda th: quad.nr_integrand(th, pt.a, pt.b, pt.c, pt.u, pt.v,
                                         pt.d, pt.q), tol * _TIGHT))
        return _single("", lhs, _nr_rhs(pt, tol * _TIGHT))

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, a=_draw(rng, 0.05, cap, real),
                              b=_draw(rng, 0.05, cap, real),
                              c=_draw(rng, 0.05, cap, real),
                              u=_draw(rng, 0.05, cap, real),
                              v=_draw(rng, 0.05, cap, real),
                              d=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "nassrallah-rahman", cite, "series=integral",
        ("a", "b", "c", "u", "v", "d"),
        "max(|a|,|b|,|c|,|u|,|v|) < 1 (|d| < 1 in the harness)",
        domain, evaluate, sample, 1e-7)


def _rahman_spec() -> IdentitySpec:
    cite = "Thm 2.2 (Rahman integral)"

    def domain(pt):
        _unit_disc(pt, "abcuv", cite)

    def evaluate(pt, tol):
        q = pt.q
        a, b, c, u, v = pt.a, pt.b, pt.c, pt.u, pt.v
        d = a * b * c * u * v
        lhs = _quad_result_to_eval(quad.integrate(
            lambda th: quad.nr_integrand(th, a, b, c, u, v, d, q), tol * _TIGHT))
        num = _inf_prod([a * b * c * u, a * b * c * v, a * b * u * v,
                         a * c * u * v, b * c * u * v], q)
        den = _inf_prod([q, a * b, a * c, a * u, a * v, b * c, b * u, b * v,
                         c * u, c * v, u * v], q)
        val = 2.0 * math.pi * num.value / den.value
        rel = (num.err_estimate / max(abs(num.value), _FLOOR)
               + den.err_estimate / max(abs(den.value), _FLOOR))
        return _single("", lhs, EvalResult(val, abs(val) * rel, 0))

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, a=_draw(rng, 0.05, cap, real),
                              b=_draw(rng, 0.05, cap, real),
                              c=_draw(rng, 0.05, cap, real),
                              u=_draw(rng, 0.05, cap, real),
                              v=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "rahman", cite, "series=integral", ("a", "b", "c", "u", "v"),
        "max(|a|,|b|,|c|,|u|,|v|) < 1",
        domain, evaluate, sample, 1e-7)


def _isv_spec() -> IdentitySpec:
    cite = "Thm 2.3 (Ismail-Stanton-Viennot integral)"

    def domain(pt):
        _unit_disc(pt, "abcuv", cite)

    def evaluate(pt, tol):
        q = pt.q
        a, b, c, u, v = pt.a, pt.b, pt.c, pt.u, pt.v
        lhs = _quad_result_to_eval(quad.integrate(
            lambda th: quad.nr_integrand(th, a, b, c, u, v, 0.0, q), tol * _TIGHT))
        num = _inf_prod([a * b * c * u, a * b * c * v], q)
        den = _inf_prod([q, a * b, a * c, a * u, a * v, b * c, b * u, b * v,
                         c * u, c * v], q)
        series = phi_eval(SeriesSpec((a * b, a * c, b * c),
                                     (a * b * c * u, a * b * c * v), q, u * v),
                          tol * _TIGHT)
        pref = 2.0 * math.pi * num.value / den.value
        val = pref * series.value
        rel = (num.err_estimate / max(abs(num.value), _FLOOR)
               + den.err_estimate / max(abs(den.value), _FLOOR))
        rhs = EvalResult(val, abs(pref) * series.err_estimate + abs(val) * rel,
                         series.terms_used)
        return _single("", lhs, rhs)

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, a=_draw(rng, 0.05, cap, real),
                              b=_draw(rng, 0.05, cap, real),
                              c=_draw(rng, 0.05, cap, real),
                              u=_draw(rng, 0.05, cap, real),
                              v=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "isv", cite, "series=integral", ("a", "b", "c", "u", "v"),
        "max(|a|,|b|,|c|,|u|,|v|) < 1",
        domain, evaluate, sample, 1e-7)


# ---- the twelve-parameter integral and the double transformation ------------

_T18_SLOTS = ("a", "b", "c", "d", "r", "s", "t", "h", "z", "beta", "delta")


def _derive_alpha(pt: ParameterPoint) -> ParameterPoint:
    alpha = pt.a * pt.a * pt.b * pt.c * pt.d * pt.r / pt.q
    return replace(pt, alpha=alpha)


def _thm18_domain(pt: ParameterPoint, cite: str) -> None:
    _unit_disc(pt, ("a", "b", "c", "d", "r", "s", "t", "h"), cite)
    _need(pt, ("z", "beta", "delta"), cite)
    if abs(pt.z) > 1.0:
        raise DomainError(f"{cite} requires |z| <= 1")


def _thm18_sample(rng, q, cap, real):
    kw = {}
    for name in ("a", "b", "c", "d", "r", "s", "t", "h", "beta", "delta"):
        kw[name] = _draw(rng, 0.05, cap, real)
    kw["z"] = _draw(rng, 0.05, min(cap, 0.95), real)
    return _derive_alpha(ParameterPoint(q=q, **kw))


def _thm18_spec() -> IdentitySpec:
    cite = "Thm 1.8 (twelve-parameter q-beta integral)"

    def evaluate(pt, tol):
        lhs = _quad_result_to_eval(quad.integrate(
            lambda th: quad.thm18_integrand(th, pt), tol * _TIGHT))
        pref = thm18_prefactor(pt)
        ssum = thm18_rhs_sum(pt, tol * _TIGHT)
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        rhs = EvalResult(val, err, ssum.terms_used,
                         heuristic_err=ssum.heuristic_err)
        return _single("", lhs, rhs)

    return IdentitySpec(
        "thm18", cite, "series=integral", _T18_SLOTS,
        "max(|a|,...,|h|) < 1, |z| <= 1 (|z| > 0.95 experimental); "
        "alpha = a^2 b c d r / q derived",
        lambda pt: _thm18_domain(pt, cite), evaluate, _thm18_sample, 1e-7,
        derives=_derive_alpha,
        experimental=lambda pt: abs(pt.z) > 0.95)


def _thm19_spec() -> IdentitySpec:
    cite = "Thm 1.9 (double q-series transformation)"

    def evaluate(pt, tol):
        lhs = thm19_lhs_sum(pt, tol * _TIGHT,
                            extra_numer=(pt.beta, pt.delta),
                            extra_denom=(pt.s, pt.t, pt.h))
        pref = thm19_prefactor(pt)
        ssum = thm18_rhs_sum(pt, tol * _TIGHT)
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        return _single("", lhs, EvalResult(val, err, ssum.terms_used,
                                           heuristic_err=ssum.heuristic_err))

    return IdentitySpec(
        "thm19", cite, "series=series", _T18_SLOTS,
        "max(|a|,...,|h|) < 1, |z| <= 1 (|z| > 0.95 experimental); "
        "alpha derived as in Thm 1.8",
        lambda pt: _thm18_domain(pt, cite), evaluate, _thm18_sample, 1e-8,
        derives=_derive_alpha,
        experimental=lambda pt: abs(pt.z) > 0.95)


# ---- the general transformation pair (section 4) ----------------------------

def _prop41_spec() -> IdentitySpec:
    cite = "Prop 4.1 (general transformation, arbitrary sequence)"

    def domain(pt):
        _need(pt, ("alpha", "u", "v", "z"), cite)
        if min(abs(pt.u), abs(pt.v)) < 0.05:
            raise DomainError(f"{cite}: u, v bounded away from 0 (q/u, q/v appear)")
        if max(abs(pt.alpha * pt.u), abs(pt.alpha * pt.v)) >= 1.0:
            raise DomainError(f"{cite} requires |alpha u|, |alpha v| < 1")
        if abs(pt.alpha * pt.u * pt.z) >= 1.0:
            raise DomainError(f"{cite}: LHS series requires |alpha u z| < 1")

    def _lhs(pt, A, tol):
        q, al, u = pt.q, pt.alpha, pt.u
        s = 0.0 + 0.0j
        poch = 1.0 + 0.0j
        fac = 1.0 + 0.0j
        below = 0
        for n in range(5000):
            s += A(n) * poch * fac
            tol_abs = 0.1 * tol * max(abs(s), _FLOOR)
            if abs(A(n) * poch * fac) <= tol_abs:
                below += 1
                if below >= 3:
                    pre_num = _inf_prod([al * q, al * u * pt.v / q], q)
                    pre_den = _inf_prod([al * u, al * pt.v], q)
                    pre = pre_num.value / pre_den.value
                    return EvalResult(pre * s, abs(pre) * 6.0 * tol_abs, n + 1)
            else:
                below = 0
            poch *= 1.0 - (q / u) * q ** n
            fac *= al * u
        raise ConvergenceError("prop41 LHS exhausted its budget")

    def _rhs(pt, A, tol):
        q, al, u, v = pt.q, pt.alpha, pt.u, pt.v
        lnq = math.log(q)
        coefs = _coef_stream([al, q / u, q / v], [q, al * u, al * v],
                             -al * u * v / q, q)
        state = {"last": 1.0}

        def term(n):
            cn = next(coefs)
            # rescaled inner sum: q^{C(n,2)} sum_k (q^-n, al q^n; q)_k
            # (q^2/v)^k A_k / (q/v; q)_k with bounded per-k magnitudes
            ln_qq = 0.0
            inner = 0.0 + 0.0j
            s2 = 1.0 + 0.0j
            aln = al * q ** n
            for k in range(n + 1):
                mrem = n - k
                ln_s1 = (0.5 * mrem * (mrem - 1)) * lnq
                # (q^{n-k+1}; q)_k = (q; q)_n / (q; q)_{n-k}
                ln_s1 += _ln_qq_prefix(q, n) - _ln_qq_prefix(q, mrem)
                s1 = math.exp(ln_s1) if ln_s1 > -745.0 else 0.0
                inner += ((-1) ** k) * s1 * s2
                if k == n:
                    break
                qk = q ** k
                s2 *= (1.0 - aln * qk) * (q / v) / (1.0 - (q / v) * qk)
                s2 *= A(k + 1) / A(k) if abs(A(k)) > 0 else 0.0
            vw = (1.0 - al * q ** (2 * n)) / (1.0 - al)
            val = vw * cn * inner
            state["last"] = max(abs(val), state["last"] * 0.5)
            return val, abs(vw * cn) * (n + 1) * 1.2e-16 * max(abs(inner), 1.0)

        def bound(n):
            return state["last"] * abs(al * u * v / q) * q ** (n - 1) * 8.0 \
                if n >= 1 else None

        return _sum_outer(term, bound, tol)

    def evaluate(pt, tol):
        out = []
        qq = [1.0]
        for k in range(1, 60):
            qq.append(qq[-1] * (1.0 - pt.q ** k))
        seqs = [
            ("A_n = z^n", lambda n: pt.z ** n),
            ("A_n = 1/(q;q)_n", lambda n: 1.0 / qq[n] if n < len(qq)
             else 1.0 / qq[-1]),
        ]
        for label, A in seqs:
            out.append(PairOutcome(label, _lhs(pt, A, tol * _TIGHT),
                                   _rhs(pt, A, tol * _TIGHT)))
        return out

    def sample(rng, q, cap, real):
        lo = max(0.25, cap * 0.5)
        return ParameterPoint(q=q, alpha=_draw(rng, 0.05, cap, real),
                              u=_draw(rng, lo, cap, real),
                              v=_draw(rng, lo, cap, real),
                              z=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "prop41", cite, "series=series", ("alpha", "u", "v", "z"),
        "|alpha u|, |alpha v|, |alpha u z| < 1; u, v away from 0",
        domain, evaluate, sample, 1e-8)


_LN_QQ_CACHE: dict[float, list[float]] = {}


def _ln_qq_prefix(q: float, j: int) -> float:
    tab = _LN_QQ_CACHE.setdefault(q, [0.0])
    while len(tab) <= j:
        k = len(tab)
        tab.append(tab[-1] + math.log(1.0 - q ** k))
    return tab[j]


def _prop42_spec() -> IdentitySpec:
    cite = "Prop 4.2 (transformation into terminating 4phi3 pieces)"

    def domain(pt):
        _need(pt, ("alpha", "u", "v", "z", "beta", "delta", "s", "t", "h"), cite)
        if min(abs(pt.u), abs(pt.v)) < 0.05:
            raise DomainError(f"{cite}: u, v bounded away from 0")
        if abs(pt.alpha * pt.u * pt.v * pt.z / pt.q) >= 1.0:
            raise DomainError(f"{cite} requires |alpha u v z / q| < 1")
        _unit_disc(pt, ("s", "t", "h"), cite, "max denominator modulus")

    def evaluate(pt, tol):
        q, al, u, v = pt.q, pt.alpha, pt.u, pt.v
        arg = al * u * v * pt.z / q
        series = phi_eval(SeriesSpec((q / u, q / v, pt.beta, pt.delta),
                                     (pt.s, pt.t, pt.h), q, arg), tol * _TIGHT)
        pre_num = _inf_prod([al * q, al * u * v / q], q)
        pre_den = _inf_prod([al * u, al * v], q)
        pre = pre_num.value / pre_den.value
        lhs = EvalResult(pre * series.value, abs(pre) * series.err_estimate,
                         series.terms_used)
        lam = min(max(abs(pt.z), 1e-6), 0.999)
        inner_bound = abs(_inf_prod(
            [-abs(al) * lam, -q, -abs(pt.beta), -abs(pt.delta)], q).value) / abs(
            _inf_prod([lam, abs(pt.s), abs(pt.t), abs(pt.h)], q).value)
        coefs = _coef_stream([al, q / u, q / v], [q, al * u, al * v],
                             -al * u * v / q, q)
        seen = []

        def term(n):
            cn = next(coefs)
            seen.append(cn)
            vw = (1.0 - al * q ** (2 * n)) / (1.0 - al)
            inner = rescaled_terminating_phi(
                n, (al * q ** n, pt.beta, pt.delta), (pt.s, pt.t, pt.h), q, pt.z)
            return vw * cn * inner.value, abs(vw * cn) * inner.err_estimate

        def bound(n):
            if n - 1 < len(seen):
                vw_cap = (1.0 + abs(al)) / abs(1.0 - al)
                env = abs(al * u * v / q) * (1.0 + abs(q / u)) * (1.0 + abs(q / v))
                return abs(seen[n - 1]) * env * vw_cap * inner_bound
            return None

        rhs = _sum_outer(term, bound, tol * _TIGHT)
        return _single("", lhs, rhs)

    def sample(rng, q, cap, real):
        lo = max(0.25, cap * 0.5)
        return ParameterPoint(q=q, alpha=_draw(rng, 0.05, cap, real),
                              u=_draw(rng, lo, cap, real),
                              v=_draw(rng, lo, cap, real),
                              z=_draw(rng, 0.05, cap, real),
                              beta=_draw(rng, 0.05, cap, real),
                              delta=_draw(rng, 0.05, cap, real),
                              s=_draw(rng, 0.05, cap, real),
                              t=_draw(rng, 0.05, cap, real),
                              h=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "prop42", cite, "series=series",
        ("alpha", "u", "v", "z", "beta", "delta", "s", "t", "h"),
        "|alpha u v z / q| < 1, max(|s|,|t|,|h|) < 1, u, v away from 0",
        domain, evaluate, sample, 1e-8)


# ---- section 6: special cases ------------------------------------------------

_S6_SLOTS = ("a", "b", "c", "d", "r")


def _s6_domain(pt, cite, extra=()):
    _unit_disc(pt, _S6_SLOTS, cite)
    _need(pt, extra, cite)


def _s6_sample(rng, q, cap, real, **extra_draws):
    kw = {n: _draw(rng, 0.05, cap, real) for n in _S6_SLOTS}
    for name, (lo, hi) in extra_draws.items():
        kw[name] = _draw(rng, lo, hi, real)
    return _derive_alpha(ParameterPoint(q=q, **kw))


def _pref12(pt: ParameterPoint) -> EvalResult:
    """2 pi (abcd, abcr, abdr, acdr; q)_inf over the twelve-product denominator."""
    return thm18_prefactor(pt)


def _thm61_w(pt: ParameterPoint, target: float) -> EvalResult:
    q = pt.q
    a, b, c, d, r, z = pt.a, pt.b, pt.c, pt.d, pt.r, pt.z
    al = pt.alpha
    return very_well_poised_sum(
        al, [a * b, a * c, a * d, a * r, 1.0 / z],
        [a * c * d * r, a * b * d * r, a * b * c * r, a * b * c * d,
         a * a * b * c * d * r * z],
        q, b * c * d * r * z, target)


def _thm61_spec() -> IdentitySpec:
    cite = "Thm 6.1 (integral with h(cos t; abcdrz) numerator)"

    def domain(pt):
        _s6_domain(pt, cite, extra=("z",))
        if abs(pt.z) < 0.02:
            raise DomainError(f"{cite}: 1/z appears; |z| >= 0.02 required")

    def evaluate(pt, tol):
        q = pt.q
        a, b, c, d, r, z = pt.a, pt.b, pt.c, pt.d, pt.r, pt.z
        w = a * b * c * d * r * z

        def f(th):
            import numpy as np
            return quad.weight_grid(th, (a, b, c, d, r), q) * \
                quad.h_grid(np.cos(np.asarray(th)), w, q)

        lhs = _quad_result_to_eval(quad.integrate(f, tol * _TIGHT))
        num = _inf_prod([a * b * c * d, a * b * c * r, a * b * d * r,
                         a * c * d * r, a * w, b * c * d * r * z], q)
        den = _inf_prod([q, a * b, a * c, a * d, a * r, b * c, b * d, b * r,
                         c * d, c * r, d * r, q * pt.alpha], q)
        series = _thm61_w(pt, tol * _TIGHT)
        pref = 2.0 * math.pi * num.value / den.value
        val = pref * series.value
        rel = (num.err_estimate / max(abs(num.value), _FLOOR)
               + den.err_estimate / max(abs(den.value), _FLOOR))
        rhs = EvalResult(val, abs(pref) * series.err_estimate + abs(val) * rel,
                         series.terms_used, heuristic_err=series.heuristic_err)
        return _single("", lhs, rhs)

    def sample(rng, q, cap, real):
        return _s6_sample(rng, q, cap, real, z=(0.05, min(cap * 2, 1.0)))

    return IdentitySpec(
        "thm61", cite, "series=integral", _S6_SLOTS + ("z",),
        "max(|a|,...,|r|) < 1; |z| in [0.02, 1]; alpha derived",
        domain, evaluate, sample, 1e-7, derives=_derive_alpha)


def _thm62_spec() -> IdentitySpec:
    cite = "Thm 6.2 (series form; Al-Salam--Ismail type)"

    def domain(pt):
        _s6_domain(pt, cite, extra=("z",))
        if abs(pt.z) < 0.02:
            raise DomainError(f"{cite}: 1/z appears; |z| >= 0.02 required")

    def evaluate(pt, tol):
        q = pt.q
        a = pt.a
        s_extra = a * a * pt.b * pt.c * pt.d * pt.r * pt.z
        lhs = thm19_lhs_sum(pt, tol * _TIGHT, extra_numer=(),
                            extra_denom=(s_extra,))
        num = _inf_prod([a * pt.b * pt.d * pt.r, a * pt.c * pt.d * pt.r], q)
        den = _inf_prod([pt.d * pt.r, q * pt.alpha], q)
        series = _thm61_w(pt, tol * _TIGHT)
        pref = num.value / den.value
        val = pref * series.value
        rhs = EvalResult(val, abs(pref) * series.err_estimate
                         + abs(val) * 1e-13, series.terms_used)
        return _single("", lhs, rhs)

    def sample(rng, q, cap, real):
        return _s6_sample(rng, q, cap, real, z=(0.05, min(cap * 2, 1.0)))

    return IdentitySpec(
        "thm62", cite, "series=series", _S6_SLOTS + ("z",),
        "max(|a|,...,|r|) < 1; |z| in [0.02, 1]; alpha derived",
        domain, evaluate, sample, 1e-8, derives=_derive_alpha)


def _s6_pure_sum(pt: ParameterPoint, target: float, variant: str) -> EvalResult:
    """The closed outer sums of the section-6 integrals.

    variant 'saalschutz': sum over n of the q-Pfaff-Saalschutz collapse;
    'verma-jain' and 'andrews-watson': sums over even orders only.
    """
    q = pt.q
    a, b, c, d, r = pt.a, pt.b, pt.c, pt.d, pt.r
    al = pt.alpha
    w = b * c * d * r
    if variant == "saalschutz":
        u, v = pt.u, pt.v
        coefs = _coef_stream(
            [al, a * b, a * c, a * d, a * r, q / u, q / v],
            [q, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r,
             al * u, al * v],
            -al * w * u * v / q, q)
        state = {"qpow": 1.0, "n": 0}

        def term(n):
            cn = next(coefs)
            vw = (1.0 - al * q ** (2 * n)) / (1.0 - al)
            val = vw * cn * state["qpow"]
            state["qpow"] *= q ** n
            return val, abs(val) * (n + 1) * 1.2e-16

        def bound(n):
            # super-geometric: |coef| q^{C(n,2)} with coef geometric
            base = abs(al * w * pt.u * pt.v / q)
            env = (base ** n) * (q ** (0.5 * n * (n - 1))) * 40.0
            return env * (1.0 + abs(al)) / abs(1.0 - al)

        return _sum_outer(term, bound, target)
    # even-order families
    q2 = q * q
    lam = pt.lam if variant == "andrews-watson" else None
    s = 0.0 + 0.0j
    err = 0.0
    poch_big = 1.0 + 0.0j      # (alpha, ab, ac, ad, ar; q)_{2n}
    den_big = 1.0 + 0.0j       # (q, abcd, abcr, abdr, acdr; q)_{2n}
    num_q2 = 1.0 + 0.0j        # (q; q^2)_n, times prod(lam - alpha q^{2k+1}) for Watson
    den_q2 = 1.0 + 0.0j        # (q alpha; q^2)_n, times (q lam; q^2)_n for Watson
    big_numer = [al, a * b, a * c, a * d, a * r]
    big_denom = [q, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r]
    for n in range(400):
        if variant == "verma-jain":
            core = ((-al) ** n) * (w ** (2 * n)) * q ** (3 * n * n - n)
        else:
            core = (w ** (2 * n)) * q ** (2 * n * n - n)
        t = (1.0 - al * q ** (4 * n)) * poch_big * num_q2 * core \
            / ((1.0 - al) * den_big * den_q2)
        s += t
        err += abs(t) * (2 * n + 1) * 1.2e-16
        if n >= 2 and abs(t) <= 0.05 * target * max(abs(s), _FLOOR):
            return EvalResult(s, err + 3.0 * abs(t), n + 1)
        for step in (2 * n, 2 * n + 1):
            qs = q ** step
            for uu in big_numer:
                poch_big *= 1.0 - uu * qs
            for ww in big_denom:
                den_big *= 1.0 - ww * qs
        q2n = q2 ** n
        num_q2 *= 1.0 - q * q2n
        den_q2 *= 1.0 - q * al * q2n
        if variant == "andrews-watson":
            num_q2 *= lam - al * q * q2n
            den_q2 *= 1.0 - q * lam * q2n
    raise ConvergenceError("section-6 even-order sum exhausted its budget")


def _thm63_spec() -> IdentitySpec:
    cite = "Thm 6.3 (q-Pfaff-Saalschutz collapse, integral form)"

    def domain(pt):
        _s6_domain(pt, cite, extra=("u", "v"))
        if min(abs(pt.u), abs(pt.v)) < 0.05:
            raise DomainError(f"{cite}: u, v bounded away from 0 (q/u, q/v appear)")
        if max(abs(pt.alpha * pt.u), abs(pt.alpha * pt.v)) >= 1.0:
            raise DomainError(f"{cite} requires |alpha u|, |alpha v| < 1")

    def evaluate(pt, tol):
        q = pt.q
        a, b, c, d, r = pt.a, pt.b, pt.c, pt.d, pt.r
        al = pt.alpha
        arg = b * c * d * r

        def f(th):
            return quad.weight_grid(th, (a, b, c, d, r), q) * quad.phi43_grid(
                th, a, al * pt.u * pt.v / q, 0.0, al * pt.u, al * pt.v, 0.0,
                q, arg)

        lhs = _quad_result_to_eval(quad.integrate(f, tol * _TIGHT))
        pref = _pref12(pt)
        ssum = _s6_pure_sum(pt, tol * _TIGHT, "saalschutz")
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        return _single("", lhs, EvalResult(val, err, ssum.terms_used))

    def sample(rng, q, cap, real):
        lo = max(0.25, cap * 0.5)
        return _s6_sample(rng, q, cap, real, u=(lo, cap), v=(lo, cap))

    return IdentitySpec(
        "thm63", cite, "series=integral", _S6_SLOTS + ("u", "v"),
        "max(|a|,...,|r|) < 1; |alpha u|, |alpha v| < 1; u, v away from 0",
        domain, evaluate, sample, 1e-7, derives=_derive_alpha)


def _thm64_spec() -> IdentitySpec:
    cite = "Thm 6.4 (q-Pfaff-Saalschutz collapse, series form)"

    def domain(pt):
        _s6_domain(pt, cite, extra=("u", "v"))
        if min(abs(pt.u), abs(pt.v)) < 0.05:
            raise DomainError(f"{cite}: u, v bounded away from 0")
        if max(abs(pt.alpha * pt.u), abs(pt.alpha * pt.v)) >= 1.0:
            raise DomainError(f"{cite} requires |alpha u|, |alpha v| < 1")

    def evaluate(pt, tol):
        q = pt.q
        al = pt.alpha
        lhs = thm19_lhs_sum(pt, tol * _TIGHT,
                            extra_numer=(al * pt.u * pt.v / q,),
                            extra_denom=(al * pt.u, al * pt.v))
        pref = thm19_prefactor(pt)
        ssum = _s6_pure_sum(pt, tol * _TIGHT, "saalschutz")
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        return _single("", lhs, EvalResult(val, err, ssum.terms_used))

    def sample(rng, q, cap, real):
        lo = max(0.25, cap * 0.5)
        return _s6_sample(rng, q, cap, real, u=(lo, cap), v=(lo, cap))

    return IdentitySpec(
        "thm64", cite, "series=series", _S6_SLOTS + ("u", "v"),
        "max(|a|,...,|r|) < 1; |alpha u|, |alpha v| < 1; u, v away from 0",
        domain, evaluate, sample, 1e-8, derives=_derive_alpha)


def _sqrt_qal(pt: ParameterPoint) -> complex:
    return cmath.sqrt(pt.q * pt.alpha)


def _thm65_spec() -> IdentitySpec:
    cite = "Thm 6.5 (Verma-Jain collapse, integral form)"

    def evaluate(pt, tol):
        q = pt.q
        a, b, c, d, r = pt.a, pt.b, pt.c, pt.d, pt.r
        sq = _sqrt_qal(pt)
        arg = b * c * d * r

        def f(th):
            return quad.weight_grid(th, (a, b, c, d, r), q) * quad.phi43_grid(
                th, a, 0.0, 0.0, sq, -sq, 0.0, q, arg)

        lhs = _quad_result_to_eval(quad.integrate(f, tol * _TIGHT))
        pref = _pref12(pt)
        ssum = _s6_pure_sum(pt, tol * _TIGHT, "verma-jain")
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        return _single("", lhs, EvalResult(val, err, ssum.terms_used))

    def sample(rng, q, cap, real):
        return _s6_sample(rng, q, cap, real)

    return IdentitySpec(
        "thm65", cite, "series=integral", _S6_SLOTS,
        "max(|a|,...,|r|) < 1; alpha derived",
        lambda pt: _s6_domain(pt, cite), evaluate, sample, 1e-7,
        derives=_derive_alpha)


def _thm66_spec() -> IdentitySpec:
    cite = "Thm 6.6 (Verma-Jain collapse, series form)"

    def evaluate(pt, tol):
        sq = _sqrt_qal(pt)
        lhs = thm19_lhs_sum(pt, tol * _TIGHT, extra_numer=(),
                            extra_denom=(sq, -sq))
        pref = thm19_prefactor(pt)
        ssum = _s6_pure_sum(pt, tol * _TIGHT, "verma-jain")
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        return _single("", lhs, EvalResult(val, err, ssum.terms_used))

    def sample(rng, q, cap, real):
        return _s6_sample(rng, q, cap, real)

    return IdentitySpec(
        "thm66", cite, "series=series", _S6_SLOTS,
        "max(|a|,...,|r|) < 1; alpha derived",
        lambda pt: _s6_domain(pt, cite), evaluate, sample, 1e-8,
        derives=_derive_alpha)


def _thm67_spec() -> IdentitySpec:
    cite = "Thm 6.7 (Andrews q-Watson collapse, integral form)"

    def domain(pt):
        _s6_domain(pt, cite, extra=("lam",))
        if abs(pt.lam) < 1e-6 or abs(pt.lam) >= 1.0:
            raise DomainError(f"{cite}: lambda must satisfy 0 < |lambda| < 1")

    def evaluate(pt, tol):
        q = pt.q
        a, b, c, d, r = pt.a, pt.b, pt.c, pt.d, pt.r
        sq = _sqrt_qal(pt)
        rl = cmath.sqrt(pt.lam)
        arg = b * c * d * r

        def f(th):
            return quad.weight_grid(th, (a, b, c, d, r), q) * quad.phi43_grid(
                th, a, rl, -rl, sq, -sq, pt.lam, q, arg)

        lhs = _quad_result_to_eval(quad.integrate(f, tol * _TIGHT))
        pref = _pref12(pt)
        ssum = _s6_pure_sum(pt, tol * _TIGHT, "andrews-watson")
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        return _single("", lhs, EvalResult(val, err, ssum.terms_used))

    def sample(rng, q, cap, real):
        return _s6_sample(rng, q, cap, real, lam=(0.05, cap))

    return IdentitySpec(
        "thm67", cite, "series=integral", _S6_SLOTS + ("lam",),
        "max(|a|,...,|r|) < 1; 0 < |lambda| < 1; alpha derived",
        domain, evaluate, sample, 1e-7, derives=_derive_alpha)


def _thm68_spec() -> IdentitySpec:
    cite = "Thm 6.8 (Andrews q-Watson collapse, series form)"

    def domain(pt):
        _s6_domain(pt, cite, extra=("lam",))
        if abs(pt.lam) < 1e-6 or abs(pt.lam) >= 1.0:
            raise DomainError(f"{cite}: lambda must satisfy 0 < |lambda| < 1")

    def evaluate(pt, tol):
        sq = _sqrt_qal(pt)
        rl = cmath.sqrt(pt.lam)
        lhs = thm19_lhs_sum(pt, tol * _TIGHT, extra_numer=(rl, -rl),
                            extra_denom=(sq, -sq, pt.lam))
        pref = thm19_prefactor(pt)
        ssum = _s6_pure_sum(pt, tol * _TIGHT, "andrews-watson")
        val = pref.value * ssum.value
        err = abs(pref.value) * ssum.err_estimate + abs(ssum.value) * pref.err_estimate
        return _single("", lhs, EvalResult(val, err, ssum.terms_used))

    def sample(rng, q, cap, real):
        return _s6_sample(rng, q, cap, real, lam=(0.05, cap))

    return IdentitySpec(
        "thm68", cite, "series=series", _S6_SLOTS + ("lam",),
        "max(|a|,...,|r|) < 1; 0 < |lambda| < 1; alpha derived",
        domain, evaluate, sample, 1e-8, derives=_derive_alpha)


# ---- the five closed summations as standalone identities ---------------------

def _qgauss_spec() -> IdentitySpec:
    cite = "q-Gauss summation"

    def domain(pt):
        _need(pt, ("a", "b", "z"), cite)
        if abs(pt.z) >= 1.0:
            raise DomainError(f"{cite} requires |z| < 1")

    def evaluate(pt, tol):
        q, a, b, z = pt.q, pt.a, pt.b, pt.z
        lhs = phi_eval(SeriesSpec((a, b), (a * b * z,), q, z), tol * _TIGHT)
        num = _inf_prod([a * z, b * z], q)
        den = _inf_prod([a * b * z, z], q)
        val = num.value / den.value
        rel = (num.err_estimate / max(abs(num.value), _FLOOR)
               + den.err_estimate / max(abs(den.value), _FLOOR))
        return _single("", lhs, EvalResult(val, abs(val) * rel, 0))

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, a=_draw(rng, 0.05, cap, real),
                              b=_draw(rng, 0.05, cap, real),
                              z=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "qgauss", cite, "series=series", ("a", "b", "z"),
        "|z| < 1 (third denominator parameter derived as a b z)",
        domain, evaluate, sample, 1e-9)


def _qchu_spec() -> IdentitySpec:
    cite = "q-Chu-Vandermonde summation"

    def domain(pt):
        _need(pt, ("a", "z"), cite)
        if abs(pt.z) < 1e-6:
            raise DomainError(f"{cite}: z = 0 is degenerate (1/z appears)")
        if abs(pt.a) >= 1.0 or abs(pt.a * pt.q * pt.z) >= 1.0:
            raise DomainError(f"{cite}: |a| < 1 and |a q z| < 1 required")

    def evaluate(pt, tol):
        q, a, z = pt.q, pt.a, pt.z
        out = []
        for n in _BATTERY_N:
            lhs = rescaled_terminating_phi(n, (a * q ** n,), (a * q * z,), q, z)
            tpoch = 1.0 + 0.0j
            qk = 1.0
            for _ in range(n):
                tpoch *= z - qk
                qk *= q
            rhs_val = ((-1.0) ** n) * tpoch / qpoch(a * q * z, q, n).value
            rhs = EvalResult(rhs_val, abs(rhs_val) * n * 1.2e-16, n,
                             terminated=True)
            out.append(PairOutcome(f"n={n}", lhs, rhs))
        return out

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, a=_draw(rng, 0.05, cap, real),
                              z=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "qchu", cite, "series=series", ("a", "z"),
        "|a| < 1, 0 < |z|, |a q z| < 1; checked for n = 0..10 "
        "(both sides rescaled by q^{n(n-1)/2})",
        domain, evaluate, sample, 1e-9)


def _qsaalschutz_spec() -> IdentitySpec:
    cite = "q-Pfaff-Saalschutz summation"

    def domain(pt):
        _need(pt, ("alpha", "u", "v"), cite)
        if min(abs(pt.u), abs(pt.v)) < 0.05:
            raise DomainError(f"{cite}: u, v bounded away from 0")
        if max(abs(pt.alpha * pt.u), abs(pt.alpha * pt.v)) >= 1.0:
            raise DomainError(f"{cite}: |alpha u|, |alpha v| < 1 required")

    def evaluate(pt, tol):
        q, al, u, v = pt.q, pt.alpha, pt.u, pt.v
        out = []
        for n in _BATTERY_N:
            lhs = terminating_phi(n, (al * q ** n, al * u * v / q),
                                  (al * u, al * v), q, q, tol * _TIGHT)
            num = qpoch_multi([q / u, q / v], q, n).value
            den = qpoch_multi([al * u, al * v], q, n).value
            rhs_val = num * (al * u * v / q) ** n / den
            rhs = EvalResult(rhs_val, abs(rhs_val) * n * 2.4e-16, n,
                             terminated=True)
            out.append(PairOutcome(f"n={n}", lhs, rhs))
        return out

    def sample(rng, q, cap, real):
        lo = max(0.25, cap * 0.5)
        return ParameterPoint(q=q, alpha=_draw(rng, 0.05, cap, real),
                              u=_draw(rng, lo, cap, real),
                              v=_draw(rng, lo, cap, real))

    return IdentitySpec(
        "qsaalschutz", cite, "series=series", ("alpha", "u", "v"),
        "|alpha u|, |alpha v| < 1; u, v away from 0; n = 0..10",
        domain, evaluate, sample, 1e-9)


def _verma_jain_spec() -> IdentitySpec:
    cite = "Verma-Jain even/odd summation"

    def domain(pt):
        _need(pt, ("alpha",), cite)
        if abs(pt.alpha) >= 1.0:
            raise DomainError(f"{cite}: |alpha| < 1 required")

    def evaluate(pt, tol):
        q, al = pt.q, pt.alpha
        sq = cmath.sqrt(q * al)
        out = []
        for n in _BATTERY_N:
            lhs = terminating_phi(n, (al * q ** n, 0.0), (sq, -sq), q, q,
                                  tol * _TIGHT)
            rhs_val = verma_jain_sum(n, al, q)
            rhs = EvalResult(rhs_val, abs(rhs_val) * n * 2.4e-16, n,
                             terminated=True)
            out.append(PairOutcome(f"n={n}", lhs, rhs))
        return out

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, alpha=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "verma-jain", cite, "series=series", ("alpha",),
        "|alpha| < 1; n = 0..10 (odd orders vanish)",
        domain, evaluate, sample, 1e-9, scale=lambda pt: 1.0)


def _andrews_watson_spec() -> IdentitySpec:
    cite = "Andrews q-Watson summation"

    def domain(pt):
        _need(pt, ("alpha", "lam"), cite)
        if abs(pt.alpha) >= 1.0:
            raise DomainError(f"{cite}: |alpha| < 1 required")
        if abs(pt.lam) < 1e-6 or abs(pt.lam) >= 1.0:
            raise DomainError(f"{cite}: 0 < |lambda| < 1 required")

    def evaluate(pt, tol):
        q, al, lam = pt.q, pt.alpha, pt.lam
        sq = cmath.sqrt(q * al)
        rl = cmath.sqrt(lam)
        out = []
        for n in _BATTERY_N:
            lhs = terminating_phi(n, (al * q ** n, rl, -rl), (sq, -sq, lam),
                                  q, q, tol * _TIGHT)
            rhs_val = andrews_watson_sum(n, al, lam, q)
            rhs = EvalResult(rhs_val, abs(rhs_val) * n * 2.4e-16, n,
                             terminated=True)
            out.append(PairOutcome(f"n={n}", lhs, rhs))
        return out

    def sample(rng, q, cap, real):
        return ParameterPoint(q=q, alpha=_draw(rng, 0.05, cap, real),
                              lam=_draw(rng, 0.05, cap, real))

    return IdentitySpec(
        "andrews-watson", cite, "series=series", ("alpha", "lam"),
        "|alpha| < 1, 0 < |lambda| < 1; n = 0..10 (odd orders vanish)",
        domain, evaluate, sample, 1e-9, scale=lambda pt: 1.0)


# --------------------------------------------------------------------------
# registry assembly
# --------------------------------------------------------------------------

def _build_registry() -> MappingProxyType:
    _register(_aw_integral_spec())
    for m in range(6):
        for n in range(m, 6):
            _register(_orthogonality_spec(m, n))
    _register(_rogers_spec())
    _register(_ext_rogers_spec())
    _register(_ext_rogers_sub_spec())
    _register(_genfunc_spec("d"))
    _register(_genfunc_spec("a"))
    _register(_nr_spec())
    _register(_rahman_spec())
    _register(_isv_spec())
    _register(_thm18_spec())
    _register(_thm19_spec())
    _register(_prop41_spec())
    _register(_prop42_spec())
    _register(_thm61_spec())
    _register(_thm62_spec())
    _register(_thm63_spec())
    _register(_thm64_spec())
    _register(_thm65_spec())
    _register(_thm66_spec())
    _register(_thm67_spec())
    _register(_thm68_spec())
    _register(_qgauss_spec())
    _register(_qchu_spec())
    _register(_qsaalschutz_spec())
    _register(_verma_jain_spec())
    _register(_andrews_watson_spec())
    return MappingProxyType(_REG)


REGISTRY = _build_registry()


# --------------------------------------------------------------------------
# checking
# --------------------------------------------------------------------------

def _prepare_point(spec: IdentitySpec, point: ParameterPoint) -> ParameterPoint:
    if spec.derives is not None:
        derived = spec.derives(point)
        if point.alpha is not None and \
                abs(point.alpha - derived.alpha) > 1e-9 * max(abs(derived.alpha), 1.0):
            raise DomainError(
                f"{spec.citation}: alpha is derived for this identity and "
                "cannot be set independently")
        point = derived
    spec.domain(point)
    return point


def check(identity_id: str, point: ParameterPoint,
          tol: float | None = None) -> IdentityReport:
    """Evaluate both sides of a registered identity at a point and compare.

    pass requires relative_error <= max(tol, combined error estimates);
    the relative error divides by the identity's scale (orthogonality norms
    for the orthogonality family, max(|lhs|, |rhs|) otherwise).
    """
    if identity_id not in REGISTRY:
        raise DomainError(f"unknown identity {identity_id!r}")
    spec = REGISTRY[identity_id]
    point = _prepare_point(spec, point)
    tol = spec.default_tol if tol is None else tol
    started = time.perf_counter()
    try:
        pairs = spec.evaluate(point, tol)
    except Exception as exc:
        raise type(exc)(f"{identity_id}: {exc}") from exc
    scale_val = spec.scale(point) if spec.scale is not None else None
    worst = None
    worst_rel = -1.0
    for pr in pairs:
        sc = scale_val if scale_val is not None else \
            max(abs(pr.lhs.value), abs(pr.rhs.value), _FLOOR)
        rel = abs(pr.lhs.value - pr.rhs.value) / sc
        if rel > worst_rel:
            worst_rel = rel
            worst = (pr, sc)
    pr, sc = worst
    allowed = max(tol, (pr.lhs.err_estimate + pr.rhs.err_estimate) / sc)
    heuristic = pr.lhs.heuristic_err or pr.rhs.heuristic_err
    if spec.experimental is not None and spec.experimental(point):
        heuristic = True
    return IdentityReport(
        id=identity_id, point=point.to_dict(), label=pr.label,
        lhs_value=pr.lhs.value, rhs_value=pr.rhs.value,
        relative_error=worst_rel,
        lhs_err_estimate=pr.lhs.err_estimate,
        rhs_err_estimate=pr.rhs.err_estimate,
        passed=bool(worst_rel <= allowed),
        heuristic=heuristic,
        wall_time=time.perf_counter() - started)


# --------------------------------------------------------------------------
# reductions: parent identity at an embedded point vs child directly
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Reduction:
    id: str
    parent: str
    child: str
    citation: str
    embed: Callable[[ParameterPoint], ParameterPoint]
    default_tol: float


def _embed_thm18_r0(child: ParameterPoint) -> ParameterPoint:
    # inert slots get fixed in-domain values; they must not affect the value
    return _derive_alpha(ParameterPoint(
        q=child.q, a=child.a, b=child.b, c=child.c, d=child.d, r=0.0,
        s=0.3, t=0.26, h=0.12, beta=0.22, delta=0.18, z=0.4))


def _embed_nr_rahman(child: ParameterPoint) -> ParameterPoint:
    d = child.a * child.b * child.c * child.u * child.v
    return ParameterPoint(q=child.q, a=child.a, b=child.b, c=child.c,
                          u=child.u, v=child.v, d=d)


def _embed_nr_isv(child: ParameterPoint) -> ParameterPoint:
    return ParameterPoint(q=child.q, a=child.a, b=child.b, c=child.c,
                          u=child.u, v=child.v, d=0.0)


def _embed_thm61_rahman(child: ParameterPoint) -> ParameterPoint:
    return _derive_alpha(ParameterPoint(
        q=child.q, a=child.a, b=child.b, c=child.c, d=child.u, r=child.v,
        z=1.0))


REDUCTIONS: MappingProxyType = MappingProxyType({
    red.id: red for red in [
        Reduction("thm18@r=0->aw-integral", "thm18", "aw-integral",
                  "r = 0 collapse to the Askey-Wilson integral",
                  _embed_thm18_r0, 1e-9),
        Reduction("nassrallah-rahman@d=abcuv->rahman", "nassrallah-rahman",
                  "rahman", "d = abcuv collapse via the Rogers summation",
                  _embed_nr_rahman, 1e-9),
        Reduction("nassrallah-rahman@d=0->isv", "nassrallah-rahman", "isv",
                  "d = 0 collapse to the Ismail-Stanton-Viennot integral",
                  _embed_nr_isv, 1e-9),
        Reduction("thm61@z=1->rahman", "thm61", "rahman",
                  "z = 1 delta collapse to the Rahman integral",
                  _embed_thm61_rahman, 1e-9),
    ]
})


def reduce_check(parent_id: str, child_id: str,
                 embedding: Callable[[ParameterPoint], ParameterPoint],
                 child_point: ParameterPoint,
                 tol: float = 1e-9) -> IdentityReport:
    """Assert a parent identity collapses onto a child one under an embedding.

    Both sides are compared across the pair: parent LHS against child LHS
    and parent RHS against child RHS, at the embedded point.
    """
    for ident in (parent_id, child_id):
        if ident not in REGISTRY:
            raise DomainError(f"unknown identity {ident!r}")
    parent = REGISTRY[parent_id]
    child = REGISTRY[child_id]
    started = time.perf_counter()
    child_point = _prepare_point(child, child_point)
    parent_point = _prepare_point(parent, embedding(child_point))
    p_pairs = parent.evaluate(parent_point, tol)
    c_pairs = child.evaluate(child_point, tol)
    if len(p_pairs) != 1 or len(c_pairs) != 1:
        raise DomainError("reduce_check supports single-pair identities only")
    pp, cp = p_pairs[0], c_pairs[0]
    worst_rel = -1.0
    worst = None
    for label, pv, cv in (("lhs", pp.lhs, cp.lhs), ("rhs", pp.rhs, cp.rhs)):
        sc = max(abs(pv.value), abs(cv.value), _FLOOR)
        rel = abs(pv.value - cv.value) / sc
        if rel > worst_rel:
            worst_rel = rel
            worst = (label, pv, cv, sc)
    label, pv, cv, sc = worst
    allowed = max(tol, (pv.err_estimate + cv.err_estimate) / sc)
    return IdentityReport(
        id=f"{parent_id}->{child_id}", point=child_point.to_dict(),
        label=label, lhs_value=pv.value, rhs_value=cv.value,
        relative_error=worst_rel, lhs_err_estimate=pv.err_estimate,
        rhs_err_estimate=cv.err_estimate,
        passed=bool(worst_rel <= allowed),
        heuristic=pv.heuristic_err or cv.heuristic_err,
        wall_time=time.perf_counter() - started)


def run_reduction(red_id: str, child_point: ParameterPoint,
                  tol: float | None = None) -> IdentityReport:
    if red_id not in REDUCTIONS:
        raise DomainError(f"unknown reduction {red_id!r}")
    red = REDUCTIONS[red_id]
    rep = reduce_check(red.parent, red.child, red.embed, child_point,
                       red.default_tol if tol is None else tol)
    rep.id = red.id
    return rep


def catalogue() -> list[dict]:
    """Stable listing of every registered identity and reduction."""
    rows = []
    for ident in sorted(REGISTRY):
        spec = REGISTRY[ident]
        rows.append({
            "id": spec.id,
            "citation": spec.citation,
            "kind": spec.kind,
            "slots": list(spec.slots),
            "domain": spec.domain_desc,
            "default_tol": spec.default_tol,
        })
    for rid in sorted(REDUCTIONS):
        red = REDUCTIONS[rid]
        rows.append({
            "id": red.id,
            "citation": red.citation,
            "kind": "reduction",
            "slots": list(REGISTRY[red.child].slots),
            "domain": f"embeds {red.child} points into {red.parent}",
            "default_tol": red.default_tol,
        })
    return rows
