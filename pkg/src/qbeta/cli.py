"""Command-line harness: run identity suites, evaluate single expressions,
list the catalogue.

Subcommands
-----------
check   run every identity matching a glob at seeded sample points and write
        a JSON or CSV report; exit 0 iff every record passed, 1 on identity
        failures, 2 on usage/config errors.
eval    evaluate one expression (qpoch, phi, vwp, awpoly, integral-id) from
        flags; --json switches to machine output.
list    print the identity catalogue (id, citation, slots, domain).

Determinism: for a fixed (config, seed) the record array is byte-identical
across runs; wall-clock data lives only in the report header, and per-record
timings are deliberately kept out of the serialized records.
"""

from __future__ import annotations

import argparse
import csv
import fnmatch
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

from .qcore import DomainError, check_base
from .hyperseries import SeriesSpec, VWPSpec, phi_eval, vwp_eval
from .askey_wilson import AWParams, aw_poly
from .identities import (
    REDUCTIONS,
    REGISTRY,
    IdentityReport,
    ParameterPoint,
    catalogue,
    check,
    run_reduction,
)
from .sampling import substream
from . import __version__

_USAGE_EXIT = 2
_FAIL_EXIT = 1


@dataclass
class RunConfig:
    """Configuration of one `check` run."""

    ids: str = "*"
    samples: int = 5
    seed: int = 1
    tolerance: float | None = None
    q_list: tuple[float, ...] = (0.3, 0.5, 0.7)
    modulus_cap: float = 0.5
    profile: str = "real"
    output: str = "qbeta-report.json"
    fmt: str = "json"

    def validate(self) -> None:
        if self.samples < 1:
            raise DomainError("samples must be >= 1")
        for q in self.q_list:
            check_base(q)
        if not (0.0 < self.modulus_cap < 1.0):
            raise DomainError("modulus cap must lie in (0, 1)")
        if self.profile not in ("real", "complex"):
            raise DomainError(f"unknown profile {self.profile!r}")
        if self.fmt not in ("json", "csv"):
            raise DomainError(f"unknown format {self.fmt!r}")

    def to_dict(self) -> dict:
        return {
            "ids": self.ids, "samples": self.samples, "seed": self.seed,
            "tolerance": self.tolerance, "q": list(self.q_list),
            "modulus_cap": self.modulus_cap, "profile": self.profile,
            "output": self.output, "format": self.fmt,
        }


def _format_complex(value: complex) -> str:
    """re+imi string form used in reports ('0.5-0.25i')."""
    if isinstance(value, (int, float)):
        value = complex(value)
    re, im = value.real, value.imag
    sign = "+" if im >= 0 or math.isnan(im) else "-"
    return f"{re!r}{sign}{abs(im)!r}i"


def parse_complex(text: str) -> complex:
    """Accept plain floats or re+imi strings."""
    text = text.strip()
    if text.endswith(("i", "j")):
        body = text[:-1]
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                return complex(float(body[:k]), float(body[k:] or "1"))
        return complex(0.0, float(body))
    return complex(float(text), 0.0)


def _record_dict(rep: IdentityReport, index: int) -> dict:
    out = {
        "identity": rep.id,
        "point_index": index,
        "label": rep.label,
        "q": rep.point["q"],
        "point": {k: _format_complex(v) for k, v in rep.point.items() if k != "q"},
        "lhs": _format_complex(rep.lhs_value),
        "rhs": _format_complex(rep.rhs_value),
        "relative_error": rep.relative_error,
        "lhs_err_estimate": rep.lhs_err_estimate,
        "rhs_err_estimate": rep.rhs_err_estimate,
        "pass": rep.passed,
        "heuristic": rep.heuristic,
    }
    if rep.error is not None:
        out["error"] = rep.error
    return out


_CSV_HEADER = ["identity", "point_index", "label", "q", "point", "lhs", "rhs",
               "relative_error", "lhs_err_estimate", "rhs_err_estimate",
               "pass", "heuristic", "error"]


def _records_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for rec in records:
        point = ";".join(f"{k}={v}" for k, v in sorted(rec["point"].items()))
        writer.writerow([
            rec["identity"], rec["point_index"], rec["label"], repr(rec["q"]),
            point, rec["lhs"], rec["rhs"], repr(rec["relative_error"]),
            repr(rec["lhs_err_estimate"]), repr(rec["rhs_err_estimate"]),
            rec["pass"], rec["heuristic"], rec.get("error", ""),
        ])
    return buf.getvalue()


def run_check(config: RunConfig) -> tuple[list[dict], dict]:
    """Run the configured suite; returns (records, summary)."""
    config.validate()
    matched = sorted(i for i in REGISTRY if fnmatch.fnmatch(i, config.ids))
    matched_red = sorted(i for i in REDUCTIONS if fnmatch.fnmatch(i, config.ids))
    if not matched and not matched_red:
        raise DomainError(f"unknown identity: no id matches {config.ids!r}")
    real = config.profile == "real"
    records: list[dict] = []
    for ident in matched + matched_red:
        is_red = ident in REDUCTIONS
        sample = REGISTRY[REDUCTIONS[ident].child].sample if is_red \
            else REGISTRY[ident].sample
        for i in range(config.samples):
            q = config.q_list[i % len(config.q_list)]
            rng = substream(config.seed, ident, i)
            try:
                pt = sample(rng, q, config.modulus_cap, real)
                rep = run_reduction(ident, pt, config.tolerance) if is_red \
                    else check(ident, pt, config.tolerance)
            except Exception as exc:  # evaluator failure -> failed record
                rep = IdentityReport(
                    id=ident, point={"q": q}, label="", lhs_value=0.0,
                    rhs_value=0.0, relative_error=math.inf,
                    lhs_err_estimate=0.0, rhs_err_estimate=0.0, passed=False,
                    error=f"{type(exc).__name__}: {exc}")
            records.append(_record_dict(rep, i))
    records.sort(key=lambda r: (r["identity"], r["point_index"]))
    finite_errs = [r["relative_error"] for r in records
                   if math.isfinite(r["relative_error"])]
    summary = {
        "total": len(records),
        "passed": sum(1 for r in records if r["pass"]),
        "failed": sum(1 for r in records if not r["pass"]),
        "max_rel_error": max(finite_errs) if finite_errs else 0.0,
    }
    return records, summary


def _write_report(config: RunConfig, records: list[dict], summary: dict) -> None:
    header = {
        "version": __version__,
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "seed": config.seed,
        "config": config.to_dict(),
    }
    if config.fmt == "json":
        doc = {"header": header, "records": records, "summary": summary}
        with open(config.output, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:
        with open(config.output, "w") as fh:
            fh.write(_records_csv(records))


def _cmd_check(args) -> int:
    config = _config_from_args(args)
    try:
        config.validate()
        records, summary = run_check(config)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    _write_report(config, records, summary)
    for rec in records:
        if not rec["pass"]:
            print(f"FAIL {rec['identity']} point {rec['point_index']} "
                  f"rel={rec['relative_error']:.3e} {rec.get('error', '')}")
    print(f"{summary['passed']}/{summary['total']} records passed; "
          f"max relative error {summary['max_rel_error']:.3e}; "
          f"report written to {config.output}")
    return 0 if summary["failed"] == 0 else _FAIL_EXIT


def _config_from_args(args) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        for key, value in _parse_config_file(args.config).items():
            _apply_config_entry(config, key, value)
    mapping = {
        "ids": "ids", "samples": "samples", "seed": "seed",
        "tol": "tolerance", "cap": "modulus_cap", "profile": "profile",
        "output": "output", "format": "fmt",
    }
    for flag, attr in mapping.items():
        val = getattr(args, flag, None)
        if val is not None:
            setattr(config, attr, val)
    if getattr(args, "q", None):
        config.q_list = tuple(float(v) for v in args.q.split(","))
    return config


def _parse_config_file(path: str) -> dict:
    entries = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            entries[key] = value
    return entries


def _apply_config_entry(config: RunConfig, key: str, value: str) -> None:
    if key == "ids":
        config.ids = value
    elif key == "samples":
        config.samples = int(value)
    elif key == "seed":
        config.seed = int(value)
    elif key == "tolerance":
        config.tolerance = float(value)
    elif key == "q":
        config.q_list = tuple(float(v) for v in value.split(","))
    elif key == "modulus_cap":
        config.modulus_cap = float(value)
    elif key == "profile":
        config.profile = value
    elif key == "output":
        config.output = value
    elif key == "format":
        config.fmt = value
    else:
        raise DomainError(f"unknown config key {key!r}")


# --------------------------------------------------------------------------
# eval
# --------------------------------------------------------------------------

def _point_from_args(args, slots) -> ParameterPoint:
    kwargs = {"q": args.q}
    for slot in slots:
        val = getattr(args, slot if slot != "lam" else "lam", None)
        if val is not None:
            kwargs[slot] = parse_complex(val)
    return ParameterPoint(**kwargs)


def _emit(args, human: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _cmd_eval(args) -> int:
    try:
        if args.expr == "qpoch":
            from .qcore import qpoch
            n = math.inf if args.n in ("inf", "infinity") else int(args.n)
            res = qpoch(parse_complex(args.a), args.q, n,
                        args.target or 1e-14)
            _emit(args, f"value = {_format_complex(res.value)}  "
                        f"err <= {res.err_estimate:.3e}  terms = {res.terms_used}",
                  {"value": _format_complex(res.value),
                   "err_estimate": res.err_estimate,
                   "terms_used": res.terms_used,
                   "terminated": res.terminated})
        elif args.expr == "phi":
            numer = tuple(parse_complex(v) for v in args.numer.split(","))
            denom = tuple(parse_complex(v) for v in args.denom.split(",")) \
                if args.denom else ()
            res = phi_eval(SeriesSpec(numer, denom, args.q,
                                      parse_complex(args.z)),
                           args.target or 1e-12)
            _emit(args, f"value = {_format_complex(res.value)}  "
                        f"err <= {res.err_estimate:.3e}  terms = {res.terms_used}"
                        f"{'  (terminating)' if res.terminated else ''}",
                  {"value": _format_complex(res.value),
                   "err_estimate": res.err_estimate,
                   "terms_used": res.terms_used,
                   "terminated": res.terminated,
                   "heuristic": res.heuristic_err})
        elif args.expr == "vwp":
            if args.id:
                return _eval_identity(args)
            tail = tuple(parse_complex(v) for v in args.tail.split(","))
            res = vwp_eval(VWPSpec(parse_complex(args.a1), tail, args.q,
                                   parse_complex(args.z)),
                           args.target or 1e-12)
            _emit(args, f"value = {_format_complex(res.value)}  "
                        f"err <= {res.err_estimate:.3e}  terms = {res.terms_used}",
                  {"value": _format_complex(res.value),
                   "err_estimate": res.err_estimate,
                   "terms_used": res.terms_used})
        elif args.expr == "awpoly":
            p = AWParams(parse_complex(args.a), parse_complex(args.b),
                         parse_complex(args.c), parse_complex(args.d), args.q)
            val = aw_poly(int(args.n), float(args.x), p)
            _emit(args, f"value = {_format_complex(val)}",
                  {"value": _format_complex(val)})
        elif args.expr == "integral-id":
            return _eval_identity(args)
        else:
            print(f"error: unknown expression {args.expr!r}", file=sys.stderr)
            return _USAGE_EXIT
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    return 0


def _eval_identity(args) -> int:
    ident = args.id
    if ident not in REGISTRY:
        print(f"error: unknown identity {ident!r}", file=sys.stderr)
        return _USAGE_EXIT
    spec = REGISTRY[ident]
    try:
        point = _point_from_args(args, spec.slots)
        rep = check(ident, point, args.target)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    diff = abs(rep.lhs_value - rep.rhs_value)
    _emit(args,
          f"{ident} [{spec.citation}]\n"
          f"  lhs = {_format_complex(rep.lhs_value)} (err <= {rep.lhs_err_estimate:.3e})\n"
          f"  rhs = {_format_complex(rep.rhs_value)} (err <= {rep.rhs_err_estimate:.3e})\n"
          f"  |difference| = {diff:.6e}  relative error = {rep.relative_error:.6e}"
          f"  -> {'PASS' if rep.passed else 'FAIL'}",
          {"identity": ident, "lhs": _format_complex(rep.lhs_value),
           "rhs": _format_complex(rep.rhs_value),
           "relative_error": rep.relative_error,
           "lhs_err_estimate": rep.lhs_err_estimate,
           "rhs_err_estimate": rep.rhs_err_estimate,
           "pass": rep.passed, "label": rep.label})
    return 0


def _cmd_list(args) -> int:
    rows = catalogue()
    if args.json:
        print(json.dumps(rows, indent=1, sort_keys=True))
        return 0
    width = max(len(r["id"]) for r in rows)
    for row in rows:
        slots = ",".join(row["slots"])
        print(f"{row['id']:<{width}}  {row['citation']}\n"
              f"{'':<{width}}  kind={row['kind']}  slots=({slots})\n"
              f"{'':<{width}}  domain: {row['domain']}")
    print(f"\n{len(rows)} entries "
          f"({len(REGISTRY)} identities, {len(REDUCTIONS)} reductions)")
    return 0


# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbeta",
        description="numerical verification harness for q-series identities")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run identity suites")
    p_check.add_argument("--ids", help="glob over identity ids (default *)")
    p_check.add_argument("--samples", type=int, help="points per identity")
    p_check.add_argument("--seed", type=int, help="run seed")
    p_check.add_argument("--tol", type=float, help="tolerance override")
    p_check.add_argument("--q", help="comma-separated list of bases")
    p_check.add_argument("--cap", type=float, help="modulus cap in (0,1)")
    p_check.add_argument("--profile", choices=("real", "complex"))
    p_check.add_argument("--output", help="report path")
    p_check.add_argument("--format", dest="format", choices=("json", "csv"))
    p_check.add_argument("--config", help="key = value config file")
    p_check.set_defaults(func=_cmd_check)

    p_eval = sub.add_parser("eval", help="evaluate one expression")
    p_eval.add_argument("expr", choices=("qpoch", "phi", "vwp", "awpoly",
                                         "integral-id"))
    p_eval.add_argument("--q", type=float, required=True)
    p_eval.add_argument("--n", help="order (integer or 'inf')")
    p_eval.add_argument("--x", help="cos(theta) evaluation point")
    p_eval.add_argument("--numer", help="comma-separated numerator parameters")
    p_eval.add_argument("--denom", help="comma-separated denominator parameters")
    p_eval.add_argument("--a1", help="very-well-poised head")
    p_eval.add_argument("--tail", help="very-well-poised tail parameters")
    p_eval.add_argument("--id", help="registered identity id")
    p_eval.add_argument("--target", type=float, help="accuracy target")
    p_eval.add_argument("--json", action="store_true")
    for slot in ("a", "b", "c", "d", "r", "s", "t", "h", "u", "v", "z",
                 "beta", "gamma", "delta", "lam", "alpha"):
        p_eval.add_argument(f"--{slot}", dest=slot)
    p_eval.set_defaults(func=_cmd_eval)

    p_list = sub.add_parser("list", help="print the identity catalogue")
    p_list.add_argument("--json", action="store_true")
    p_list.set_defaults(func=_cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return _USAGE_EXIT if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
