"""Command-line front end: one subcommand per public operation.

Output contract: a single JSON object (default) or RFC-4180 CSV table goes
to stdout (or --output PATH); the run configuration and tool version are
embedded in the payload so results are self-describing.  Wall-clock time is
written to *stderr* -- stdout must be byte-identical across repeat runs with
the same configuration, and a timestamp would break that.

Exit codes: 0 success, 2 parameter/validation problems, 3 resource limits
(budget, precision cap, quadrature failure).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, circle_method, expsums, local_arith, ps_core, repcount
from .errors import (
    ArcsOverlap,
    BudgetExceeded,
    DomainError,
    GridTooLarge,
    PrecisionExhausted,
    PSLabError,
    QuadratureNotConverged,
)

_VALIDATION_ERRORS = (DomainError, ArcsOverlap, ValueError, ZeroDivisionError)
_BUDGET_ERRORS = (BudgetExceeded, PrecisionExhausted, QuadratureNotConverged, GridTooLarge)

_ENV_PRECISION_CAP = "PS_LAB_MAX_PRECISION_BITS"


def _precision_cap(default: int = 4096) -> int:
    raw = os.environ.get(_ENV_PRECISION_CAP)
    if raw is None:
        return default
    cap = int(raw)
    if cap < 64:
        raise DomainError(f"{_ENV_PRECISION_CAP} must be >= 64, got {cap}")
    return cap


def _params(c: str, precision_bits: int) -> ps_core.PSParams:
    return ps_core.PSParams(
        c, base_precision_bits=precision_bits, max_precision_bits=_precision_cap()
    )


def _cfloat(x: float) -> float:
    """Round-trip float normalization (shortest repr already round-trips)."""
    return float(x)


def _complex_obj(v: complex) -> dict:
    return {"re": _cfloat(v.real), "im": _cfloat(v.imag), "abs": _cfloat(abs(v))}


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


# ---------------------------------------------------------------------------
# Subcommand handlers: each takes the parsed args, returns a payload dict.
# A "_rows" entry (list of flat dicts) is what CSV mode renders; JSON mode
# renders the whole payload (rows included) minus the leading underscore.
# ---------------------------------------------------------------------------

_HANDLERS = {}


def _sub(name):
    def wrap(fn):
        _HANDLERS[name] = fn
        return fn

    return wrap


@_sub("ps-list")
def _ps_list(a):
    params = _params(a.c, a.precision_bits)
    members = ps_core.enumerate_ps(a.limit, params, partitions=a.threads)
    return {"members": list(members), "count": str(len(members))}


@_sub("ps-primes")
def _ps_primes(a):
    params = _params(a.c, a.precision_bits)
    ps = ps_core.enumerate_ps_primes(a.limit, params)
    return {"primes": list(ps), "count": str(len(ps))}


@_sub("ps-member")
def _ps_member(a):
    params = _params(a.c, a.precision_bits)
    return {"n": a.n, "is_member": ps_core.is_ps_member(a.n, params)}


@_sub("kmod")
def _kmod(a):
    return {"K": local_arith.modulus_K(a.k)}


@_sub("gauss-sum")
def _gauss_sum(a):
    v = local_arith.gauss_power_sum(a.a, a.q, a.k)
    return {"a": a.a, "q": a.q, "k": a.k, "S": _complex_obj(v)}


@_sub("s-m-q")
def _s_m_q(a):
    v = local_arith.S_m_of_q(a.m, a.q, a.s, a.k)
    return {"m": a.m, "q": a.q, "s": a.s, "k": a.k, "value": _cfloat(v)}


@_sub("singular-series")
def _singular_series(a):
    r = local_arith.singular_series(a.m, a.s, a.k, a.Q)
    return {
        "m": a.m,
        "s": a.s,
        "k": a.k,
        "Q": a.Q,
        "partial_sum": _cfloat(r.partial_sum),
        "tail_bound_estimate": _cfloat(r.tail_bound_estimate),
        "n_terms": str(len(r.terms)),
    }


@_sub("weyl-sum")
def _weyl_sum(a):
    v = expsums.weyl_sum(a.alpha, a.k, a.X)
    return {
        "alpha": str(expsums.as_phase_fraction(a.alpha)),
        "k": a.k,
        "X": a.X,
        "value": _complex_obj(v),
    }


@_sub("ps-prime-sum")
def _ps_prime_sum(a):
    params = _params(a.c, a.precision_bits)
    v = expsums.ps_prime_sum(a.alpha, a.k, a.X, params)
    return {
        "alpha": str(expsums.as_phase_fraction(a.alpha)),
        "k": a.k,
        "X": a.X,
        "c": a.c,
        "value": _complex_obj(v),
    }


@_sub("weighted-prime-sum")
def _weighted_prime_sum(a):
    params = _params(a.c, a.precision_bits)
    v = expsums.weighted_prime_sum(a.alpha, a.k, a.X, params)
    return {
        "alpha": str(expsums.as_phase_fraction(a.alpha)),
        "k": a.k,
        "X": a.X,
        "c": a.c,
        "value": _complex_obj(v),
    }


@_sub("vaaler-check")
def _vaaler_check(a):
    vp = expsums.build_vaaler(a.H)
    M = a.grid_points
    xs = (np.arange(M) + 0.5) / M
    err = np.abs(expsums.sawtooth(xs) - vp.psi_star(xs))
    env = vp.envelope(xs)
    margin = (xs >= 0.125) & (xs <= 0.875)
    sup_mid = float(np.max(err[margin]))
    return {
        "H": a.H,
        "grid_points": M,
        "sup_error_middle": _cfloat(sup_mid),
        "sup_error_middle_times_H": _cfloat(sup_mid * a.H),
        "sup_error_full": _cfloat(float(np.max(err))),
        "max_envelope_violation": _cfloat(float(np.max(err - env))),
        "max_h_times_ah": _cfloat(
            max(abs(vp.coeffs_a[h]) * h for h in range(1, a.H + 1))
        ),
    }


@_sub("vaughan-check")
def _vaughan_check(a):
    from .primes import von_mangoldt

    d = expsums.vaughan_decompose(a.n, a.u, a.v)
    lam = von_mangoldt(a.n)
    return {
        "n": a.n,
        "u": _cfloat(a.u),
        "v": _cfloat(a.v),
        "e1": _cfloat(d.e1),
        "e2": _cfloat(d.e2),
        "e3": _cfloat(d.e3),
        "combined": _cfloat(d.combined),
        "von_mangoldt": _cfloat(lam),
        "abs_error": _cfloat(abs(d.combined - lam)),
    }


@_sub("shifted-sum")
def _shifted_sum(a):
    g = [float(x) for x in a.g.split(",")] if a.g else []
    v = expsums.shifted_poly_sum(
        g, a.D, a.delta, (a.lo, a.hi), precision_bits=a.precision_bits
    )
    return {
        "D": _cfloat(a.D),
        "delta": str(expsums.as_phase_fraction(a.delta)),
        "interval": [a.lo, a.hi],
        "g": [_cfloat(x) for x in g],
        "value": _complex_obj(v),
    }


def _parse_grid(spec: str) -> dict:
    """'D=10,1000;N=1000:3000:1000;coeffs=ones' -> keyword grid dict."""
    out: dict = {}
    if not spec:
        return out
    for part in spec.split(";"):
        if "=" not in part:
            raise DomainError(f"bad grid fragment {part!r} (expected key=values)")
        key, raw = part.split("=", 1)
        key = key.strip()
        raw = raw.strip()
        if ":" in raw:
            pieces = raw.split(":")
            if len(pieces) != 3:
                raise DomainError(f"grid range {raw!r} must be start:stop:step")
            start, stop, step = (int(p) for p in pieces)
            if step <= 0 or stop < start:
                raise DomainError(f"empty grid range {raw!r}")
            out[key] = list(range(start, stop + 1, step))
        elif key in ("coeffs", "sigma_rule"):
            out[key] = raw
        elif key in ("k", "ell", "q"):
            out[key] = int(raw)
        elif key == "delta":
            out[key] = raw  # exact-rational parse happens downstream
        else:
            out[key] = [float(x) for x in raw.split(",")]
    return out


@_sub("bound-experiment")
def _bound_experiment(a):
    rep = expsums.bound_experiment(a.lemma, _parse_grid(a.grid), seed=a.seed)
    rows = [
        {k: (_cfloat(v) if isinstance(v, float) else v) for k, v in r.items()}
        for r in rep.rows
    ]
    return {
        "lemma": rep.lemma,
        "eps": _cfloat(rep.eps),
        "seed": rep.seed,
        "max_ratio": _cfloat(rep.max_ratio),
        "_rows": rows,
    }


@_sub("major-arcs")
def _major_arcs(a):
    system = circle_method.build_major_arcs(
        circle_method.ArcParams(X=a.X, k=a.k, kappa=a.kappa)
    )
    rows = [
        {
            "a": arc.a,
            "q": arc.q,
            "center": _frac_str(arc.center),
            "halfwidth": _frac_str(arc.halfwidth),
        }
        for arc in system.arcs
    ]
    return {
        "X": a.X,
        "k": a.k,
        "kappa": _cfloat(a.kappa),
        "q_max": system.params.q_max,
        "count": str(len(system.arcs)),
        "total_measure": _frac_str(system.total_measure),
        "_rows": rows,
    }


@_sub("osc-i")
def _osc_i(a):
    v = circle_method.osc_integral_I(a.z, a.N, a.k, float(Fraction(a.delta)))
    return {"z": _cfloat(a.z), "N": a.N, "k": a.k, "delta": a.delta, "value": _complex_obj(v)}


@_sub("osc-j")
def _osc_j(a):
    v = circle_method.osc_integral_J(a.z, a.N, a.k, float(Fraction(a.delta)))
    return {"z": _cfloat(a.z), "N": a.N, "k": a.k, "delta": a.delta, "value": _complex_obj(v)}


@_sub("v-approx")
def _v_approx(a):
    v = circle_method.v_approx(a.alpha, a.a, a.q, a.N, a.k, float(Fraction(a.delta)))
    return {
        "alpha": str(expsums.as_phase_fraction(a.alpha)),
        "a": a.a,
        "q": a.q,
        "N": a.N,
        "k": a.k,
        "delta": a.delta,
        "value": _complex_obj(v),
    }


@_sub("main-term")
def _main_term(a):
    p = circle_method.MainTermParams(N=a.N, s=a.s, k=a.k, c=a.c)
    v = circle_method.main_term(p, a.Q)
    return {"N": a.N, "s": a.s, "k": a.k, "c": a.c, "Q": a.Q, "value": _cfloat(v)}


@_sub("two-t")
def _two_t(a):
    return {"k": a.k, "two_t": circle_method.two_t_table(a.k)}


@_sub("nu")
def _nu(a):
    return {"k": a.k, "nu": circle_method.nu_of_k(a.k)}


@_sub("c-range")
def _c_range(a):
    lo, hi = circle_method.c_range(a.k, a.s, a.t)
    excess = hi - 1
    return {
        "k": a.k,
        "s": a.s,
        "t": a.t,
        "c_max": f"1 + {excess.numerator}/{excess.denominator}",
        "c_max_exact": _frac_str(hi),
        "c_max_decimal": _cfloat(float(hi)),
    }


@_sub("rep-count")
def _rep_count(a):
    params = _params(a.c, a.precision_bits)
    n = repcount.count_representations(a.N, a.s, a.k, params)
    return {"N": a.N, "s": a.s, "k": a.k, "c": a.c, "count": str(n)}


@_sub("moment-count")
def _moment_count(a):
    m = repcount.moment_count(a.t, a.k, a.X)
    return {"t": a.t, "k": a.k, "X": a.X, "count": str(m.count)}


@_sub("quadrature-check")
def _quadrature_check(a):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rel = repcount.quadrature_vs_count(a.t, a.k, a.X, a.M)
    threshold = 2 * a.t * a.X**a.k + 1
    return {
        "t": a.t,
        "k": a.k,
        "X": a.X,
        "M": a.M,
        "relative_error": _cfloat(rel),
        "exact_count": str(repcount.moment_count(a.t, a.k, a.X).count),
        "exactness_threshold_M": threshold,
        "resolved": a.M >= threshold,
    }


@_sub("compare")
def _compare(a):
    rep = repcount.compare_to_main_term((a.lo, a.hi), a.s, a.k, a.c, a.Q)
    payload = {
        "window": [a.lo, a.hi],
        "s": a.s,
        "k": a.k,
        "c": a.c,
        "Q": a.Q,
        "modulus": rep.modulus,
        "residue": rep.residue,
        "n_admissible": rep.n_admissible,
        "mean_ratio": _cfloat(rep.mean_ratio),
        "mean_ratio_low_half": _cfloat(rep.mean_ratio_low_half),
        "mean_ratio_high_half": _cfloat(rep.mean_ratio_high_half),
        "concentration": _cfloat(rep.concentration),
    }
    if a.table:
        payload["_rows"] = [
            {
                "N": n,
                "count": str(rep.table.counts[n]),
                "main_term": _cfloat(rep.table.main_terms[n]),
            }
            for n in sorted(rep.table.counts)
        ]
    return payload


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ps-lab",
        description="Exponential-sum and circle-method laboratory for "
        "floor-power (Piatetski-Shapiro type) prime sequences.",
    )
    top.add_argument("--version", action="version", version=f"ps-lab {__version__}")
    subs = top.add_subparsers(dest="subcommand", required=True)

    def add(name, help_, *specs):
        p = subs.add_parser(name, help=help_)
        for flag, kw in specs:
            p.add_argument(flag, **kw)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, help="write to this path instead of stdout")
        p.add_argument("--threads", type=int, default=1, help="data-parallel partitions (default 1)")
        p.add_argument(
            "--precision-bits",
            type=int,
            default=96,
            dest="precision_bits",
            help="working precision for directed-rounding evaluations",
        )
        p.add_argument("--seed", type=int, default=0, help="seed for randomized grids")
        return p

    C = ("--c", dict(required=True, help="exponent c as decimal or fraction, 1 < c < 2"))
    K = lambda req=True: ("--k", dict(type=int, required=req))
    ALPHA = ("--alpha", dict(required=True, help="evaluation point: decimal or p/q"))
    DELTA = ("--delta", dict(required=True, help="exponent delta as decimal or fraction"))

    add("ps-list", "enumerate the floor-power sequence up to a limit", C,
        ("--limit", dict(type=int, required=True)))
    add("ps-primes", "enumerate primes of the sequence up to a limit", C,
        ("--limit", dict(type=int, required=True)))
    add("ps-member", "membership test for one integer", C,
        ("--n", dict(type=int, required=True)))
    add("kmod", "local congruence modulus K(k)", K())
    add("gauss-sum", "complete power sum over reduced residues",
        ("--a", dict(type=int, required=True)), ("--q", dict(type=int, required=True)), K())
    add("s-m-q", "normalized s-power Gauss-sum average at modulus q",
        ("--m", dict(type=int, required=True)), ("--q", dict(type=int, required=True)),
        ("--s", dict(type=int, required=True)), K())
    add("singular-series", "truncated singular series with tail estimate",
        ("--m", dict(type=int, required=True)), ("--s", dict(type=int, required=True)),
        K(), ("--Q", dict(type=int, required=True)))
    add("weyl-sum", "complete Weyl sum over n <= X", ALPHA, K(),
        ("--X", dict(type=int, required=True)))
    add("ps-prime-sum", "exponential sum over sequence primes", ALPHA, K(),
        ("--X", dict(type=int, required=True)), C)
    add("weighted-prime-sum", "density-weighted exponential sum over all primes",
        ALPHA, K(), ("--X", dict(type=int, required=True)), C)
    add("vaaler-check", "sawtooth approximation quality report",
        ("--H", dict(type=int, required=True)),
        ("--grid-points", dict(type=int, default=100000, dest="grid_points")))
    add("vaughan-check", "three-piece identity vs the von Mangoldt value",
        ("--n", dict(type=int, required=True)),
        ("--u", dict(type=float, required=True)), ("--v", dict(type=float, required=True)))
    add("shifted-sum", "e(g(n) + D n^delta) summed over an integer interval",
        ("--D", dict(type=float, required=True)), DELTA,
        ("--lo", dict(type=int, required=True)), ("--hi", dict(type=int, required=True)),
        ("--g", dict(default="", help="comma-separated polynomial coefficients g0,g1,...")))
    add("bound-experiment", "observed sums against a lemma-shaped bound",
        ("--lemma", dict(required=True, choices=("shift", "HB", "corput", "typeII"))),
        ("--grid", dict(default="", help="key=v1,v2;key2=start:stop:step;...")))
    add("major-arcs", "arc system with exact rational endpoints",
        ("--X", dict(type=int, required=True)), K(),
        ("--kappa", dict(type=float, required=True)))
    add("osc-i", "oscillatory integral of the density kernel",
        ("--z", dict(type=float, required=True)), ("--N", dict(type=int, required=True)),
        K(), DELTA)
    add("osc-j", "oscillatory integral with logarithmic weight",
        ("--z", dict(type=float, required=True)), ("--N", dict(type=int, required=True)),
        K(), DELTA)
    add("v-approx", "major-arc model value at alpha near a/q", ALPHA,
        ("--a", dict(type=int, required=True)), ("--q", dict(type=int, required=True)),
        ("--N", dict(type=int, required=True)), K(), DELTA)
    add("main-term", "singular series times the archimedean shape",
        ("--N", dict(type=int, required=True)), ("--s", dict(type=int, required=True)),
        K(), C, ("--Q", dict(type=int, required=True)))
    add("two-t", "tabulated/ceiling even moment exponent", K())
    add("nu", "exponent bookkeeping parameter", K())
    add("c-range", "admissible exponent interval, exact rationals", K(),
        ("--s", dict(type=int, required=True)), ("--t", dict(type=int, required=True)))
    add("rep-count", "exact ordered representation count",
        ("--N", dict(type=int, required=True)), ("--s", dict(type=int, required=True)), K(), C)
    add("moment-count", "exact even-moment Diophantine count",
        ("--t", dict(type=int, required=True)), K(), ("--X", dict(type=int, required=True)))
    add("quadrature-check", "Riemann-grid moment vs the exact count",
        ("--t", dict(type=int, required=True)), K(), ("--X", dict(type=int, required=True)),
        ("--M", dict(type=int, required=True)))
    add("compare", "exact counts vs main term across a window",
        ("--lo", dict(type=int, required=True)), ("--hi", dict(type=int, required=True)),
        ("--s", dict(type=int, required=True)), K(), C,
        ("--Q", dict(type=int, required=True)),
        ("--table", dict(action="store_true", help="include the per-N table in the output")))
    return top


_CONFIG_KEYS_SKIP = {"subcommand", "format", "output"}


def _run_config(args: argparse.Namespace) -> dict:
    params = {}
    for key, val in sorted(vars(args).items()):
        if key in _CONFIG_KEYS_SKIP or val is None:
            continue
        params[key.replace("_", "-")] = val if isinstance(val, (int, bool)) else str(val)
    return {
        "subcommand": args.subcommand,
        "parameters": params,
        "output_format": args.format,
    }


def _render_json(payload: dict) -> str:
    doc = {k: v for k, v in payload.items() if not k.startswith("_")}
    if "_rows" in payload:
        doc["rows"] = payload["_rows"]
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _render_csv(payload: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    rows = payload.get("_rows")
    if rows:
        header = list(rows[0].keys())
        w.writerow(header)
        for r in rows:
            w.writerow([r.get(h, "") for h in header])
    else:
        w.writerow(["key", "value"])
        for k in sorted(payload):
            if k.startswith("_") or k in ("tool_version", "run_config"):
                continue
            v = payload[k]
            if isinstance(v, dict):
                for kk in sorted(v):
                    w.writerow([f"{k}.{kk}", v[kk]])
            elif isinstance(v, list):
                w.writerow([k, " ".join(str(x) for x in v)])
            else:
                w.writerow([k, v])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = _run_config(args)
    t0 = time.monotonic()
    try:
        payload = _HANDLERS[args.subcommand](args)
    except _BUDGET_ERRORS as exc:
        print(f"ps-lab: resource limit: {exc}", file=sys.stderr)
        return 3
    except _VALIDATION_ERRORS as exc:
        print(f"ps-lab: invalid parameters: {exc}", file=sys.stderr)
        return 2
    wall_ms = int(round(1000 * (time.monotonic() - t0)))

    payload["tool_version"] = __version__
    payload["run_config"] = config
    text = _render_csv(payload) if args.format == "csv" else _render_json(payload)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"wall_time_ms={wall_ms}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
