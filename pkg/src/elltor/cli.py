"""Command-line entry point: ``elltor verify | genus | kernel``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
Output bytes depend only on the configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import gauge, nekrasov
from .partition import Partition
from .qseries.params import ParamError, ParamPoint, parse_quarter
from .qseries.series import Ring, SeriesError
from .suites import REPS_LEVELS, SUITES, ConfigError, RunConfig, run_suites

KERNEL_KINDS = ("N5d", "Ntheta", "Zaffine")

# flag defaults live here so that a config file can sit between them and the flags
DEFAULTS = {
    "q_quarter": "2/3", "t_quarter": "3/5", "guard_range": 24,
    "p_order": 3, "q_order": 2, "x_order": 4, "max_size": 2, "modes": 2, "level": "all",
    "points": 5, "seed": 0, "suites": list(SUITES), "format": "json", "output": None,
    "rank": 1, "charges": 2, "six_d": False, "kind": "N5d", "lam": "0", "mu": "0",
    "arg": "x", "form": "box",
}


class UsageError(Exception):
    pass


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON file with option values; flags override it")
    sp.add_argument("--q-quarter", dest="q_quarter", help="q^(1/4) as a rational")
    sp.add_argument("--t-quarter", dest="t_quarter", help="t^(1/4) as a rational")
    sp.add_argument("--guard-range", dest="guard_range", type=int)
    sp.add_argument("--p-order", dest="p_order", type=int)
    sp.add_argument("--Q-order", dest="q_order", type=int)
    sp.add_argument("--x-order", dest="x_order", type=int)
    sp.add_argument("--format", choices=("json", "csv"))
    sp.add_argument("--output", "-o", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elltor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity suites and write a report")
    _add_common(v)
    v.add_argument("--suite", dest="suites", action="append",
                   help=f"suite to run, repeatable or comma-separated; one of {', '.join(SUITES)}")
    v.add_argument("--level", choices=REPS_LEVELS)
    v.add_argument("--max-size", dest="max_size", type=int)
    v.add_argument("--modes", type=int)
    v.add_argument("--points", type=int)
    v.add_argument("--seed", type=int)

    g = sub.add_parser("genus", help="instanton series table")
    _add_common(g)
    g.add_argument("--rank", type=int)
    g.add_argument("--charges", type=int, help="largest charge k")
    g.add_argument("--six-d", dest="six_d", action="store_const", const=True,
                   help="elliptic genus (adds the trace nome Q)")

    k = sub.add_parser("kernel", help="dump one kernel as canonical JSON")
    _add_common(k)
    k.add_argument("--kind", choices=KERNEL_KINDS)
    k.add_argument("--lam", help="comma-separated parts, 0 for the empty partition")
    k.add_argument("--mu", help="comma-separated parts, 0 for the empty partition")
    k.add_argument("--arg", help="monomial such as x, 3/5*x, p*x^-1")
    k.add_argument("--form", choices=nekrasov.FORMS_5D)
    return parser


def _merge(ns: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config!r}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(DEFAULTS))
        if unknown:
            raise UsageError(f"unknown config key(s) {unknown}")
        cfg.update(loaded)
    for key, val in vars(ns).items():
        if key in DEFAULTS and val is not None:
            cfg[key] = val
    suites = cfg["suites"]
    if isinstance(suites, str):
        suites = [suites]
    cfg["suites"] = [s for item in suites for s in str(item).split(",") if s]
    return cfg


def _params(cfg: dict) -> ParamPoint:
    try:
        return ParamPoint(parse_quarter(str(cfg["q_quarter"])), parse_quarter(str(cfg["t_quarter"])),
                          int(cfg["guard_range"]))
    except (ParamError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _orders(cfg: dict, *names: str) -> None:
    for name in names:
        val = cfg[name]
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise UsageError(f"{name} must be a non-negative integer, got {val!r}")


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- verify -----------------------------------------------------------------

def _report_text(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check_id", "paper_ref", "status", "detail"])
    for r in records:
        w.writerow([r["suite"], r["check_id"], r["paper_ref"], r["status"],
                    json.dumps(r["detail"], sort_keys=True, ensure_ascii=False)])
    return buf.getvalue()


def cmd_verify(cfg: dict) -> int:
    run = RunConfig(**{k: cfg[k] for k in RunConfig.field_names()})
    try:
        run.validate()
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    records = run_suites(run)
    _emit(_report_text(records, run.format), run.output)
    counts = {s: sum(1 for r in records if r["status"] == s) for s in ("pass", "fail", "skip")}
    print(f"{counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip", file=sys.stderr)
    for r in records:
        if r["status"] == "fail":
            print(f"FAIL {r['check_id']}: {json.dumps(r['detail'], sort_keys=True)}",
                  file=sys.stderr)
    return 1 if counts["fail"] else 0


# --- genus -------------------------------------------------------------------

def _genus_cross_checks(cfg: dict, params: ParamPoint, table) -> list[dict]:
    rank, k_max, P, X = cfg["rank"], cfg["charges"], cfg["p_order"], cfg["x_order"]
    out = []
    if rank == 1 and not cfg["six_d"]:
        other = gauge.chi_y_u1(k_max, params, P, route="ratio")
        out.append(("u1 box vs ratio", _same(table, other)))
    elif rank == 1:
        other = gauge.elliptic_genus_u1(k_max, params, P, cfg["q_order"], route="box")
        out.append(("u1 elliptic box vs ratio", _same(table, other)))
    if cfg["six_d"]:
        five = gauge.chi_y_u1(k_max, params, P) if rank == 1 else None
        if five is not None:
            ok = all(c6.substitute_zero("Q").drop("Q").agree(
                gauge._rehome(c5, c6.drop("Q").ring))[0]
                for c6, c5 in zip(table.coefficients, five.coefficients))
            out.append(("Q->0 reduction", ok))
        else:
            ladder = gauge.specialization_ladder(rank, min(k_max, 1), params, min(P, 2),
                                                 min(cfg["q_order"], 1), min(X, 2), max_size=2)
            out.append(("specialization ladder", ladder["ok"]))
    if rank >= 2 and k_max >= 1:
        from .partition import EMPTY
        one = Partition((1,))
        for lam, mu in ((one, EMPTY), (EMPTY, one)):
            res = gauge.tt_cross_check(lam, mu, params, min(X, 4), min(P, 3))
            out.append((f"free-field cross factor {lam}/{mu}", res["ok"]))
    return [{"check": name, "ok": bool(ok)} for name, ok in out]


def _same(a, b) -> bool:
    return all(x.agree(y)[0] for x, y in zip(a.coefficients, b.coefficients))


def cmd_genus(cfg: dict) -> int:
    _orders(cfg, "p_order", "q_order", "x_order", "charges")
    params = _params(cfg)
    rank, k_max = cfg["rank"], cfg["charges"]
    if not isinstance(rank, int) or rank < 1:
        raise UsageError("rank must be a positive integer")
    P, Q, X = cfg["p_order"], cfg["q_order"], cfg["x_order"]
    if rank == 1:
        table = (gauge.elliptic_genus_u1(k_max, params, P, Q) if cfg["six_d"]
                 else gauge.chi_y_u1(k_max, params, P))
        orders = {"p": P} | ({"Q": Q} if cfg["six_d"] else {})
    else:
        table = (gauge.elliptic_genus_uM(rank, k_max, params, P, Q, X) if cfg["six_d"]
                 else gauge.chi_y_uM(rank, k_max, params, P, X))
        orders = {"p": P} | ({"Q": Q} if cfg["six_d"] else {}) | {
            x: X for x in gauge.ratio_names(rank)}
    checks = _genus_cross_checks(cfg, params, table)
    table.metadata["cross_checks"] = checks
    text = table.to_json(orders) if cfg["format"] == "json" else table.to_csv(orders)
    _emit(text, cfg["output"])
    failed = [c["check"] for c in checks if not c["ok"]]
    for name in failed:
        print(f"FAIL cross-check: {name}", file=sys.stderr)
    return 1 if failed else 0


# --- kernel --------------------------------------------------------------------

def _parse_partition(text) -> Partition:
    try:
        return Partition.parse(str(text))
    except ValueError as exc:
        raise UsageError(f"unparsable partition spec {text!r}: {exc}") from None


def _parse_monomial(text: str) -> tuple[Fraction, dict]:
    """'3/5*x^-1*p' -> (3/5, {'x': -1, 'p': 1})."""
    coeff = Fraction(1)
    exps: dict[str, int] = {}
    for factor in str(text).replace(" ", "").split("*"):
        if not factor:
            raise UsageError(f"unparsable argument {text!r}")
        name, _, power = factor.partition("^")
        if name in ("x", "p", "Q"):
            try:
                exps[name] = exps.get(name, 0) + (int(power) if power else 1)
            except ValueError:
                raise UsageError(f"bad exponent in {factor!r}") from None
        else:
            if power:
                raise UsageError(f"exponent on a constant in {factor!r}")
            try:
                coeff *= Fraction(name)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"unparsable factor {factor!r} in {text!r}") from None
    return coeff, exps


def cmd_kernel(cfg: dict) -> int:
    _orders(cfg, "p_order", "q_order", "x_order")
    params = _params(cfg)
    kind = cfg["kind"]
    if kind not in KERNEL_KINDS:
        raise UsageError(f"kind must be one of {KERNEL_KINDS}")
    lam = _parse_partition(cfg["lam"])
    doc = {"kind": kind, "lam": list(lam.parts), "params": params.describe()}
    if kind == "Zaffine":
        ring = Ring.make(nomes={"p": cfg["p_order"]})
        series = nekrasov.z_affine(lam, params, ring)
    else:
        mu = _parse_partition(cfg["mu"])
        coeff, exps = _parse_monomial(cfg["arg"])
        nomes = {"p": cfg["p_order"]} if "p" in exps else {}
        if kind == "Ntheta":
            nomes["Q"] = cfg["q_order"]
        elif "Q" in exps:
            raise UsageError("Q may only appear in Ntheta arguments")
        spectral = {"x": cfg["x_order"]} if "x" in exps else {}
        ring = Ring.make(nomes=nomes, spectral=spectral)
        arg = ring.mono(coeff, **exps)
        if kind == "N5d":
            if not exps and cfg["form"] in ("rowA", "rowC"):
                raise UsageError("row forms A and C need a formal argument")
            series = nekrasov.nekrasov_5d(lam, mu, arg, params, cfg["form"])
            if not hasattr(series, "ring"):
                series = ring.const(series)
        else:
            if not exps:
                arg = ring.const(coeff)
            series = nekrasov.nekrasov_theta(lam, mu, arg, "Q", params, ring)
        doc.update(mu=list(mu.parts), arg=str(cfg["arg"]), form=cfg["form"])
    doc["series"] = series.to_json()
    _emit(json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n", cfg["output"])
    return 0


COMMANDS = {"verify": cmd_verify, "genus": cmd_genus, "kernel": cmd_kernel}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _merge(ns)
        return COMMANDS[ns.command](cfg)
    except UsageError as exc:
        print(f"elltor: error: {exc}", file=sys.stderr)
        return 2
    except (SeriesError, ValueError) as exc:
        print(f"elltor: error: {exc}", file=sys.stderr)
        return 2
