"""Batch front door: suites over the f family, kernels, and bound checks.

Subcommands
    classify       trichotomy matrix over 1 <= m <= m_max, 1 <= n <= n_max
    check-cm       complete-monotonicity grid check for one (m, n)
    kernels        kernel monotonicity/limit/range report
    inequalities   digamma/polygamma double-bound suite
    bounds         printed vs derived bounding-polynomial audit for f'

Every numeric value in JSON output is paired with its abs_error; CSV
flattens to value/error column pairs.  Reports are deterministic: identical
config yields byte-identical output.  Exit codes: 0 success, 1 verification
failure, 2 usage error, 3 numeric capability/convergence error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from .classifier import (
    BoundAuditReport,
    ClassificationEntry,
    bound_check,
    classify,
)
from .cm_engine import CMReport, FamilyIndex, cm_check
from .errors import (
    CapabilityError,
    ConvergenceError,
    DomainError,
    PolycmError,
)
from .evaluation import PrecisionConfig, linear_grid, log_grid
from .inequalities import BoundsSuiteReport, bounds_suite
from .kernels import KernelId, kernel_report


@dataclass(frozen=True)
class RunConfig:
    command: str
    grid_min: float
    grid_max: float
    grid_count: int
    grid_scale: str
    precision: float
    fmt: str
    out: str | None
    m: int = 1
    n: int = 2
    m_max: int = 6
    n_max: int = 6
    orders: int = 8
    k_max: int = 8
    kernel: str = "omega"
    kernel_k: int = 0

    def __post_init__(self) -> None:
        if self.grid_min <= 0.0:
            raise DomainError("--grid-min must be positive")
        if self.grid_count < 2:
            raise DomainError("--grid-count must be at least 2")
        if self.precision <= 0.0:
            raise DomainError("--precision must be positive")

    def grid(self) -> tuple[float, ...]:
        if self.grid_scale == "linear":
            return linear_grid(self.grid_min, self.grid_max, self.grid_count)
        return log_grid(self.grid_min, self.grid_max, self.grid_count)

    def precision_config(self) -> PrecisionConfig:
        return PrecisionConfig(target_abs_error=self.precision)


def _add_common(p: argparse.ArgumentParser, gmin: float, gmax: float, gcount: int) -> None:
    p.add_argument("--grid-min", type=float, default=gmin)
    p.add_argument("--grid-max", type=float, default=gmax)
    p.add_argument("--grid-count", type=int, default=gcount)
    p.add_argument("--grid-scale", choices=("log", "linear"), default="log")
    p.add_argument("--precision", type=float, default=1e-12,
                   help="target absolute error per evaluation")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json",
                   dest="fmt")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycm",
        description="verification suites for [psi^(m)]^2 + psi^(n)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="trichotomy matrix with evidence")
    p.add_argument("--m-max", type=int, default=6)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--orders", type=int, default=4,
                   help="max derivative order for CM evidence")
    _add_common(p, 0.01, 100.0, 40)

    p = sub.add_parser("check-cm", help="CM grid check for one index")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--orders", type=int, default=8)
    _add_common(p, 0.01, 100.0, 200)

    p = sub.add_parser("kernels", help="kernel monotonicity/limits/range")
    p.add_argument("--kernel", choices=("h", "omega", "tanh", "kappa"),
                   default="omega")
    p.add_argument("--k", type=int, default=0, help="power for the h kernel")
    _add_common(p, 1e-6, 50.0, 64)

    p = sub.add_parser("inequalities", help="double-bound suite")
    p.add_argument("--k-max", type=int, default=8)
    _add_common(p, 0.05, 100.0, 100)

    p = sub.add_parser("bounds", help="bounding-polynomial audit for f'")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1,
                   help="half of the (even) second family index")
    _add_common(p, 0.05, 100.0, 50)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        grid_min=args.grid_min,
        grid_max=args.grid_max,
        grid_count=args.grid_count,
        grid_scale=args.grid_scale,
        precision=args.precision,
        fmt=args.fmt,
        out=args.out,
        m=getattr(args, "m", 1),
        n=getattr(args, "n", 2),
        m_max=getattr(args, "m_max", 6),
        n_max=getattr(args, "n_max", 6),
        orders=getattr(args, "orders", 8),
        k_max=getattr(args, "k_max", 8),
        kernel=getattr(args, "kernel", "omega"),
        kernel_k=getattr(args, "k", 0),
    )


# ---------------------------------------------------------------------------
# Command implementations: each returns (exit_code, document)
# ---------------------------------------------------------------------------


def _config_doc(cfg: RunConfig, **extra) -> dict:
    doc = {
        "command": cfg.command,
        "grid_min": cfg.grid_min,
        "grid_max": cfg.grid_max,
        "grid_count": cfg.grid_count,
        "grid_scale": cfg.grid_scale,
        "precision": cfg.precision,
    }
    doc.update(extra)
    return doc


def _classification_row(entry: ClassificationEntry) -> dict:
    row: dict = {
        "m": entry.index.m,
        "n": entry.index.n,
        "verdict": entry.verdict,
        "cm_verdict": None,
        "cm_inconclusive_points": None,
        "cm_min_margin": None,
        "sign_x_positive": None,
        "sign_value_positive": None,
        "sign_error_positive": None,
        "sign_x_negative": None,
        "sign_value_negative": None,
        "sign_error_negative": None,
        "mono_x_up": None,
        "mono_value_up": None,
        "mono_error_up": None,
        "mono_x_down": None,
        "mono_value_down": None,
        "mono_error_down": None,
    }
    if entry.cm_report is not None:
        rep = entry.cm_report
        row["cm_verdict"] = rep.verdict
        row["cm_inconclusive_points"] = len(rep.inconclusive_points)
        row["cm_min_margin"] = min(
            e.signed_value.value - e.signed_value.abs_error for e in rep.entries
        )
    if entry.sign_witness is not None:
        w = entry.sign_witness
        row.update(
            sign_x_positive=w.x_positive,
            sign_value_positive=w.positive.value,
            sign_error_positive=w.positive.abs_error,
            sign_x_negative=w.x_negative,
            sign_value_negative=w.negative.value,
            sign_error_negative=w.negative.abs_error,
        )
    if entry.monotonicity_witness is not None:
        w = entry.monotonicity_witness
        row.update(
            mono_x_up=w.x_positive,
            mono_value_up=w.positive.value,
            mono_error_up=w.positive.abs_error,
            mono_x_down=w.x_negative,
            mono_value_down=w.negative.value,
            mono_error_down=w.negative.abs_error,
        )
    return row


def cmd_classify(cfg: RunConfig) -> tuple[int, dict]:
    prec = cfg.precision_config()
    grid = cfg.grid()
    entries = []
    counts = {"CM_trivial": 0, "CM_nontrivial": 0, "sign_changing_nonmonotonic": 0}
    for m in range(1, cfg.m_max + 1):
        for n in range(1, cfg.n_max + 1):
            entry = classify(m, n, prec, cm_max_order=cfg.orders, cm_grid=grid)
            counts[entry.verdict] += 1
            entries.append(_classification_row(entry))
    doc = {
        "config": _config_doc(cfg, m_max=cfg.m_max, n_max=cfg.n_max, orders=cfg.orders),
        "entries": entries,
        "findings": [],
        "summary": counts,
    }
    return 0, doc


def cmd_check_cm(cfg: RunConfig) -> tuple[int, dict]:
    report: CMReport = cm_check(
        FamilyIndex(cfg.m, cfg.n), cfg.orders, cfg.grid(), cfg.precision_config()
    )
    entries = [
        {
            "order": e.order,
            "x": e.x,
            "signed_value": e.signed_value.value,
            "abs_error": e.signed_value.abs_error,
            "status": e.status,
        }
        for e in report.entries
    ]
    findings = [
        f"certified violation at order {e.order}, x={e.x:.6g}: "
        f"value {e.signed_value.value:.6e}, error {e.signed_value.abs_error:.3e}"
        for e in report.violations
    ] + [
        f"inconclusive at order {e.order}, x={e.x:.6g}"
        for e in report.inconclusive_points
    ]
    doc = {
        "config": _config_doc(cfg, m=cfg.m, n=cfg.n, orders=cfg.orders),
        "entries": entries,
        "findings": findings,
        "summary": {
            "verdict": report.verdict,
            "violations": len(report.violations),
            "inconclusive": len(report.inconclusive_points),
            "inconclusive_fraction": report.inconclusive_fraction,
        },
    }
    return (1 if report.verdict == "violation" else 0), doc


_EXPECTED_DIRECTION = {"omega": "increasing", "tanh": "increasing", "kappa": "decreasing"}


def cmd_kernels(cfg: RunConfig) -> tuple[int, dict]:
    kid = KernelId("h", cfg.kernel_k) if cfg.kernel == "h" else KernelId(cfg.kernel)
    report = kernel_report(kid, cfg.grid())
    if cfg.kernel == "h":
        expected = "decreasing" if cfg.kernel_k >= 0 else "increasing"
    else:
        expected = _EXPECTED_DIRECTION[cfg.kernel]
    entries = [
        {"t": t, "value": v.value, "abs_error": v.abs_error}
        for t, v in zip(report.grid, report.values)
    ]
    limit_rows = [
        {
            "end": c.end,
            "expected": c.expected,
            "achieved": c.achieved,
            "tolerance": c.tolerance,
            "approach_certified": c.approach_certified,
            "passed": c.passed,
        }
        for c in report.limit_checks
    ]
    ok = (
        report.monotonicity_verdict == expected
        and all(c.passed for c in report.limit_checks)
        and report.range_passed
    )
    doc = {
        "config": _config_doc(cfg, kernel=kid.label()),
        "entries": entries,
        "findings": list(report.diagnostics),
        "summary": {
            "monotonicity": report.monotonicity_verdict,
            "expected_monotonicity": expected,
            "limit_checks": limit_rows,
            "range": report.range_description,
            "range_passed": report.range_passed,
            "min_range_margin": report.min_range_margin,
        },
    }
    return (0 if ok else 1), doc


def cmd_inequalities(cfg: RunConfig) -> tuple[int, dict]:
    report: BoundsSuiteReport = bounds_suite(
        cfg.k_max, cfg.grid(), cfg.precision_config()
    )
    entries = [
        {
            "k": r.k,
            "x": r.x,
            "lower": r.lower,
            "value": r.middle.value,
            "abs_error": r.middle.abs_error,
            "upper": r.upper,
            "margin_lower": r.margins[0],
            "margin_upper": r.margins[1],
            "passed": r.passed,
        }
        for r in report.results
    ]
    findings = [
        f"margin not cleared at k={r.k}, x={r.x:.6g}: "
        f"margins ({r.margins[0]:.3e}, {r.margins[1]:.3e}), "
        f"error {r.margin_error:.3e}"
        for r in report.failures
    ]
    doc = {
        "config": _config_doc(cfg, k_max=cfg.k_max),
        "entries": entries,
        "findings": findings,
        "summary": {
            "checks": len(report.results),
            "failures": len(report.failures),
            "min_lower_margin": report.min_lower_margin,
            "min_upper_margin": report.min_upper_margin,
        },
    }
    return (0 if report.all_passed else 1), doc


def cmd_bounds(cfg: RunConfig) -> tuple[int, dict]:
    report: BoundAuditReport = bound_check(
        cfg.m, cfg.n, cfg.grid(), cfg.precision_config()
    )
    entries = []
    for e in report.entries:
        row: dict = {"x": e.x, "f_prime": e.f_prime.value,
                     "abs_error": e.f_prime.abs_error}
        for name in ("q_printed", "q_derived", "p_printed", "p_derived"):
            row[f"{name}_bound"] = e.bounds[name]
            row[f"{name}_margin"] = e.margins[name]
            row[f"{name}_status"] = e.statuses[name]
        entries.append(row)
    doc = {
        "config": _config_doc(cfg, m=cfg.m, n=cfg.n),
        "entries": entries,
        "findings": list(report.findings),
        "summary": {
            "derived_ok": report.derived_ok,
            "printed_p_ok": report.printed_p_ok,
            "printed_findings": len(report.findings),
        },
    }
    return (0 if report.derived_ok else 1), doc


_COMMANDS = {
    "classify": cmd_classify,
    "check-cm": cmd_check_cm,
    "kernels": cmd_kernels,
    "inequalities": cmd_inequalities,
    "bounds": cmd_bounds,
}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"


def render_csv(doc: dict) -> str:
    buf = io.StringIO()
    entries = doc["entries"]
    if entries:
        writer = csv.DictWriter(buf, fieldnames=list(entries[0].keys()))
        writer.writeheader()
        for row in entries:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    return buf.getvalue()


def render_text(doc: dict) -> str:
    lines: list[str] = []
    cfg = doc["config"]
    lines.append(" ".join(f"{k}={cfg[k]}" for k in sorted(cfg)))
    entries = doc["entries"]
    if entries:
        keys = list(entries[0].keys())
        widths = {
            k: max(len(k), *(len(_cell(e[k])) for e in entries)) for k in keys
        }
        lines.append("  ".join(k.ljust(widths[k]) for k in keys))
        for e in entries:
            lines.append("  ".join(_cell(e[k]).ljust(widths[k]) for k in keys))
    summary = doc.get("summary")
    if summary:
        lines.append("summary: " + json.dumps(summary, sort_keys=True))
    for finding in doc["findings"]:
        lines.append(f"finding: {finding}")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


_RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        code, doc = _COMMANDS[cfg.command](cfg)
    except DomainError as exc:
        print(f"polycm: usage error: {exc}", file=sys.stderr)
        return 2
    except (CapabilityError, ConvergenceError) as exc:
        print(f"polycm: numeric capability error: {exc}", file=sys.stderr)
        return 3
    except PolycmError as exc:
        print(f"polycm: verification failure: {exc}", file=sys.stderr)
        return 1
    rendered = _RENDERERS[cfg.fmt](doc)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
