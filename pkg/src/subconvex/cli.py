"""Command-line front end: ``subconvex {series,enumerate,analyze,verify}``.

Exit status is 0 on success, 1 when a computation fails (or a verification
check does not hold) and 2 on a usage error.  Output for a given set of
flags is byte-for-byte reproducible, whatever ``--threads`` says.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

MODEL_CHOICES = ("cc", "l1", "l2", "all", "t1")
METHOD_CHOICES = ("closed", "system", "dp", "enum")
FORMAT_CHOICES = ("json", "csv", "text")
SUITES = ("series", "partition", "functional", "analysis")

# which methods can produce which model
VALID_METHODS = {
    "cc": ("dp", "enum"),
    "l1": ("closed", "system", "dp", "enum"),
    "l2": ("dp", "enum"),
    "all": ("enum",),
    "t1": ("enum",),
}
DEFAULT_METHOD = {"cc": "dp", "l1": "closed", "l2": "dp", "all": "enum", "t1": "enum"}
ENUM_NAME = {
    "cc": "column_convex",
    "l1": "level1",
    "l2": "level2",
    "all": "all",
    "t1": "incomplete_level1",
}
DP_LEVEL = {"cc": 0, "l1": 1, "l2": 2}
ENUM_LIMIT = {"t1": 11}
DP_LIMIT = 120


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    model: str = "l1"
    order: int = 12
    method: str = "closed"
    format: str = "json"
    digits: int = 12
    threads: int = 1
    output: str | None = None
    suites: tuple[str, ...] = SUITES
    classes: bool = False

    def validate(self) -> "RunConfig":
        if self.model not in MODEL_CHOICES:
            raise UsageError(f"unknown model {self.model!r}")
        if self.method not in VALID_METHODS[self.model]:
            raise UsageError(
                f"method {self.method!r} cannot produce model {self.model!r} "
                f"(choose from {', '.join(VALID_METHODS[self.model])})"
            )
        if self.order < 1:
            raise UsageError("--order/--max-area must be at least 1")
        if self.digits < 1 or self.digits > 60:
            raise UsageError("--digits must lie in 1..60")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.method == "enum":
            from .enumeration import MAX_ENUMERATION_AREA

            limit = ENUM_LIMIT.get(self.model, MAX_ENUMERATION_AREA)
            if self.order > limit:
                raise UsageError(f"enumeration of {self.model} is limited to area {limit}")
        if self.method == "dp" and self.order > DP_LIMIT:
            raise UsageError(f"the column DP is limited to area {DP_LIMIT}")
        if self.classes and self.model != "l1":
            raise UsageError("--classes is only defined for model l1")
        return self


def default_threads() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return max(1, os.cpu_count() or 1)


# ----------------------------------------------------------------------
# computations


def compute_counts(cfg: RunConfig) -> list[int]:
    """``a_1 .. a_order`` for ``cfg.model`` by ``cfg.method``."""
    n = cfg.order
    if cfg.method == "closed":
        from .closedform import a1_closed

        return [int(c) for c in a1_closed(n).coeffs[1 : n + 1]]
    if cfg.method == "system":
        from .temperley import solve

        return [int(c) for c in solve(n).A1.coeffs[1 : n + 1]]
    if cfg.method == "dp":
        from .enumeration import dp_count_subconvex

        return dp_count_subconvex(DP_LEVEL[cfg.model], n, cfg.threads).counts
    from .enumeration import count_by_model

    return count_by_model(n, ENUM_NAME[cfg.model], cfg.threads).counts


def cmd_series(cfg: RunConfig) -> tuple[dict, int]:
    counts = compute_counts(cfg)
    return {
        "model": cfg.model,
        "method": cfg.method,
        "order": cfg.order,
        "counts": [str(c) for c in counts],
    }, 0


def cmd_enumerate(cfg: RunConfig) -> tuple[dict, int]:
    from .enumeration import classification_tally, count_by_model

    table = count_by_model(cfg.order, ENUM_NAME[cfg.model], cfg.threads)
    report: dict = {
        "model": cfg.model,
        "method": "enum",
        "order": cfg.order,
        "counts": [str(c) for c in table.counts],
    }
    if table.heights is not None:
        report["last_column_heights"] = {
            str(n): {str(h): str(v) for h, v in sorted(table.heights[n].items())}
            for n in range(1, cfg.order + 1)
        }
    if cfg.classes:
        tally = classification_tally(cfg.order)
        report["classes"] = {label.value: [str(c) for c in tally[label]] for label in tally}
    return report, 0


def cmd_analyze(cfg: RunConfig) -> tuple[dict, int]:
    from . import analysis

    if cfg.model == "l1" and cfg.method in ("closed", "system"):
        rep = analysis.analyze_level1(cfg.order, Fraction(1, 10 ** min(cfg.digits, 40)))
    else:
        rep = analysis.analyze(compute_counts(cfg), cfg.model)
    out = rep.to_dict(cfg.digits)
    out["method"] = cfg.method
    return out, 0


# ----------------------------------------------------------------------
# verification suites


def _check(results: list, name: str, ok: bool, detail: str = "") -> None:
    results.append({"check": name, "pass": bool(ok), "detail": detail})


def _first_mismatch(a: list, b: list) -> str:
    for i, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return f"first difference at n={i}: {x} vs {y}"
    return ""


LEVEL1_HEAD = [1, 3, 11, 44, 184, 786, 3391, 14683, 63619, 275506, 1192134, 5154794]
LEVEL2_HEAD = [1, 3, 11, 44, 186, 812, 3614, 16254, 73464, 332603, 1505877, 6813301]
ALL_HEAD = [1, 3, 11, 44, 186, 814, 3652, 16689, 77359, 362671, 1716033, 8182213]


def suite_series(cfg: RunConfig) -> list:
    from .closedform import a1_closed
    from .enumeration import count_polyhexes, dp_count_subconvex
    from .temperley import solve

    res: list = []
    N = max(cfg.order, 12)
    closed = [int(c) for c in a1_closed(N).coeffs[1 : N + 1]]
    system = [int(c) for c in solve(N).A1.coeffs[1 : N + 1]]
    _check(res, f"closed == system (n<={N})", closed == system, _first_mismatch(closed, system))
    _check(res, "level-1 head (n<=12)", closed[:12] == LEVEL1_HEAD, _first_mismatch(closed, LEVEL1_HEAD))
    n_dp = min(N, 40)
    dp1 = dp_count_subconvex(1, n_dp, cfg.threads).counts
    _check(res, f"closed == dp (n<={n_dp})", closed[:n_dp] == dp1, _first_mismatch(closed, dp1))
    n_enum = min(N, 10)
    enum = count_polyhexes(n_enum, cfg.threads)
    e1 = enum["level1"].counts
    _check(res, f"closed == enum (n<={n_enum})", closed[:n_enum] == e1, _first_mismatch(closed, e1))
    dp2 = dp_count_subconvex(2, n_enum, cfg.threads).counts
    e2 = enum["level2"].counts
    _check(res, f"level 2: dp == enum (n<={n_enum})", dp2 == e2, _first_mismatch(dp2, e2))
    _check(res, "level-2 head", e2 == LEVEL2_HEAD[:n_enum], _first_mismatch(e2, LEVEL2_HEAD))
    ea = enum["all"].counts
    _check(res, "all-polyhex head", ea == ALL_HEAD[:n_enum], _first_mismatch(ea, ALL_HEAD))
    dp0 = dp_count_subconvex(0, n_enum, cfg.threads).counts
    e0 = enum["column_convex"].counts
    _check(res, f"column-convex: dp == enum (n<={n_enum})", dp0 == e0, _first_mismatch(dp0, e0))
    return res


def suite_partition(cfg: RunConfig) -> list:
    from .enumeration import classification_tally
    from .lattice import S_LABELS, T_LABELS
    from .temperley import part_series, solve

    res: list = []
    n = min(cfg.order, 9)
    tally = classification_tally(n)
    solved = solve(max(n, 12))
    parts = part_series(solved)
    for label, counts in tally.items():
        expect = [int(parts[label][k]) for k in range(1, n + 1)]
        _check(res, f"{label.value} tally (n<={n})", counts == expect, _first_mismatch(counts, expect))
    s_sum = [sum(tally[l][k] for l in S_LABELS) for k in range(n)]
    t_sum = [sum(tally[l][k] for l in T_LABELS) for k in range(n)]
    a1 = [int(solved.A1[k]) for k in range(1, n + 1)]
    c1 = [int(solved.C1[k]) for k in range(1, n + 1)]
    _check(res, "sum of S classes == A1", s_sum == a1, _first_mismatch(s_sum, a1))
    _check(res, "sum of T classes == C1", t_sum == c1, _first_mismatch(t_sum, c1))
    return res


def suite_functional(cfg: RunConfig) -> list:
    from .qseries import dt_at_1, specialize
    from .temperley import assemble_A, build_system, d_functional_residual, d_series, residuals, solve_system

    res: list = []
    N = max(cfg.order, 6)
    system = build_system(N + 2)
    solved = solve_system(system, N)
    for label, r in zip(system.labels, residuals(system, solved)):
        r = r.truncate(N)
        _check(res, f"system row {label} residual (order {N})", r.valuation() is None)
    D = d_series(solved, N)
    _check(res, "D(u) functional residual", d_functional_residual(solved, D).is_zero())
    _check(res, "D(q t) at t=1 == D(q)", specialize(D) == solved.Dq.truncate(N))
    _check(res, "d/dt D(q t) at t=1 == q D'(q)", dt_at_1(D) == (solved.Dprime_q.shift(1)).truncate(N))
    A = assemble_A(solved, N, D)
    _check(res, "A(q, 1) == A1", specialize(A) == solved.A1.truncate(N))
    _check(res, "dA/dt(q, 1) == B1", dt_at_1(A) == solved.B1.truncate(N))
    return res


def suite_analysis(cfg: RunConfig) -> list:
    from . import analysis
    from .enumeration import count_polyhexes, dp_count_subconvex

    res: list = []
    rep = analysis.analyze_level1(max(cfg.order, 40))
    _check(res, "q_c width <= 1e-10", rep.q_c.width <= Fraction(1, 10**10), str(float(rep.q_c.width)))
    _check(
        res,
        "tau(l1) near 4.319139",
        abs(float(rep.tau.mid) - 4.319139) <= 1e-5,
        f"{float(rep.tau.mid):.9f}",
    )
    _check(res, "lower bound below certified tau", rep.lower_bound <= rep.tau.lo)
    cc, _ = analysis.ratio_extrapolate(dp_count_subconvex(0, 40, cfg.threads))
    l2, _ = analysis.ratio_extrapolate(dp_count_subconvex(2, 40, cfg.threads))
    al = analysis.ratio_table(count_polyhexes(11, cfg.threads)["all"])[-1][1]
    _check(
        res,
        "growth constants ordered cc < l1 < l2 < all",
        cc < float(rep.tau.lo) and float(rep.tau.hi) < l2 < al,
        f"{cc:.6f} < {float(rep.tau.mid):.6f} < {l2:.6f} < {al:.6f} (last ratio)",
    )
    return res


SUITE_FUNCS = {
    "series": suite_series,
    "partition": suite_partition,
    "functional": suite_functional,
    "analysis": suite_analysis,
}


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    suites = {}
    ok = True
    for name in cfg.suites:
        checks = SUITE_FUNCS[name](cfg)
        suites[name] = checks
        ok = ok and all(c["pass"] for c in checks)
    return {"order": cfg.order, "suites": suites, "pass": ok}, 0 if ok else 1


COMMANDS = {
    "series": cmd_series,
    "enumerate": cmd_enumerate,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
}


# ----------------------------------------------------------------------
# rendering


def render(report: dict, cfg: RunConfig) -> str:
    if cfg.format == "json":
        return json.dumps(report, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if "counts" in report:
            w.writerow(["n", "count"])
            for n, c in enumerate(report["counts"], start=1):
                w.writerow([n, c])
        elif "suites" in report:
            w.writerow(["suite", "check", "pass", "detail"])
            for suite, checks in report["suites"].items():
                for c in checks:
                    w.writerow([suite, c["check"], "pass" if c["pass"] else "fail", c["detail"]])
        else:
            w.writerow(["key", "value"])
            for k, v in report.items():
                if k != "ratio_table":
                    w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
            for n, r in report.get("ratio_table", []):
                w.writerow([f"ratio_{n}", r])
        return buf.getvalue()
    lines = []
    if "suites" in report:
        for suite, checks in report["suites"].items():
            for c in checks:
                tag = "PASS" if c["pass"] else "FAIL"
                extra = f"  ({c['detail']})" if c["detail"] else ""
                lines.append(f"{tag} [{suite}] {c['check']}{extra}")
        lines.append("all checks passed" if report["pass"] else "some checks FAILED")
    elif "counts" in report and cfg.subcommand in ("series", "enumerate"):
        for n, c in enumerate(report["counts"], start=1):
            lines.append(f"{n} {c}")
        for label, counts in report.get("classes", {}).items():
            lines.append(f"{label}: {' '.join(counts)}")
    else:
        for k, v in report.items():
            if k == "ratio_table":
                continue
            if isinstance(v, list) and len(v) == 2 and all(isinstance(x, str) for x in v):
                v = f"[{v[0]}, {v[1]}]"
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subconvex",
        description="Counts and asymptotics of column-subconvex polyhexes.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, default_order: int):
        p.add_argument("--model", choices=MODEL_CHOICES, default="l1")
        p.add_argument("--method", choices=METHOD_CHOICES, default=None,
                       help="default: closed for l1, dp for cc/l2, enum otherwise")
        p.add_argument("--order", "--max-area", dest="order", type=int, default=default_order)
        p.add_argument("--format", choices=FORMAT_CHOICES, default="json")
        p.add_argument("--digits", type=int, default=12)
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (default: available CPUs)")
        p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")

    common(sub.add_parser("series", help="coefficients a_1..a_N of a generating function"), 12)
    p = sub.add_parser("enumerate", help="brute-force counts, heights and class tallies")
    common(p, 8)
    p.add_argument("--classes", action="store_true", help="add the eleven level-one class tallies")
    common(sub.add_parser("analyze", help="pole, growth constant, bound and amplitude"), 250)
    p = sub.add_parser("verify", help="cross-check independent computations")
    common(p, 40)
    p.add_argument("--suite", action="append", choices=SUITES + ("all",), default=None)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    method = ns.method
    if ns.subcommand == "enumerate":
        if method not in (None, "enum"):
            raise UsageError("enumerate only supports --method enum")
        method = "enum"
    if method is None:
        method = DEFAULT_METHOD[ns.model]
    suites: tuple[str, ...] = SUITES
    if ns.subcommand == "verify" and ns.suite and "all" not in ns.suite:
        suites = tuple(s for s in SUITES if s in ns.suite)
    return RunConfig(
        subcommand=ns.subcommand,
        model=ns.model,
        order=ns.order,
        method=method,
        format=ns.format,
        digits=ns.digits,
        threads=ns.threads if ns.threads is not None else default_threads(),
        output=ns.output,
        suites=suites,
        classes=getattr(ns, "classes", False),
    ).validate()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    try:
        report, status = COMMANDS[cfg.subcommand](cfg)
        text = render(report, cfg)
    except Exception as exc:  # noqa: BLE001 - any failure is reported, not raised
        print(f"{parser.prog}: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
