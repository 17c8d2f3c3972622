"""Capacity and bound tables: computation, CSV/text rendering, figures."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

from composite_dna import reference
from composite_dna.alphabet import parse_alphabet
from composite_dna.capacity import ForbiddenRule, one_redundancy_bound, rll_capacity

CAPACITY_FIELDS = ("table", "alphabet", "l", "lambda", "capacity_bits", "iterations", "reference", "delta")
BOUND_FIELDS = ("alphabet", "l", "bound", "reference", "delta")


@dataclass(frozen=True)
class CapacityRow:
    table: str
    alphabet: str
    l: int
    lam: float
    capacity_bits: float
    iterations: int
    reference: float | None

    @property
    def delta(self) -> float | None:
        return None if self.reference is None else self.capacity_bits - self.reference


@dataclass(frozen=True)
class BoundRow:
    alphabet: str
    l: int
    bound: int
    reference: int | None

    @property
    def delta(self) -> int | None:
        return None if self.reference is None else self.bound - self.reference


def capacity_rows(
    tol: float = 1e-9, rule: ForbiddenRule = ForbiddenRule.COMMON_BASE
) -> list[CapacityRow]:
    rows = []
    for table, refs in (("sigma1", reference.CAPACITY_SIGMA1), ("sigma2", reference.CAPACITY_SIGMA2)):
        for spec, values in refs.items():
            a = parse_alphabet(spec)
            for l, ref in zip(reference.ELLS, values):
                res = rll_capacity(l, a, tol=tol, rule=rule)
                rows.append(CapacityRow(table, spec, l, res.lam, res.capacity_bits, res.iterations, ref))
    return rows


def bound_rows() -> list[BoundRow]:
    rows = []
    for spec, values in reference.BOUND.items():
        a = parse_alphabet(spec)
        for l, ref in zip(reference.BOUND_ELLS, values):
            rows.append(BoundRow(spec, l, one_redundancy_bound(l, a), ref))
    return rows


def _fmt(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    return str(value)


def capacity_records(rows: list[CapacityRow], precision: int = 3) -> list[list[str]]:
    return [
        [r.table, r.alphabet, str(r.l), _fmt(r.lam, precision + 3), _fmt(r.capacity_bits, precision),
         str(r.iterations), _fmt(r.reference, 3), _fmt(r.delta, precision)]
        for r in rows
    ]


def bound_records(rows: list[BoundRow]) -> list[list[str]]:
    return [[r.alphabet, str(r.l), str(r.bound), _fmt(r.reference, 0), _fmt(r.delta, 0)] for r in rows]


def to_csv(header, records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(records)
    return buf.getvalue()


def to_text(header, records) -> str:
    widths = [max(len(h), *(len(r[i]) for r in records)) if records else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in records]
    return "\n".join(lines) + "\n"


def render(header, records, fmt: str) -> str:
    return to_csv(header, records) if fmt == "csv" else to_text(header, records)


def capacity_grid(rows: list[CapacityRow], table: str) -> tuple[list[str], list[list[str]]]:
    """Wide layout: one line per alphabet, one column per l (capacities only)."""
    specs = list(dict.fromkeys(r.alphabet for r in rows if r.table == table))
    ells = sorted({r.l for r in rows if r.table == table})
    by_key = {(r.alphabet, r.l): r for r in rows if r.table == table}
    header = ["alphabet"] + [f"l={l}" for l in ells]
    records = [[s] + [f"{by_key[s, l].capacity_bits:.3f}" for l in ells] for s in specs]
    return header, records


def write_figures(cap: list[CapacityRow], bounds: list[BoundRow], outdir: str) -> list[str]:
    """Write capacity-vs-l and bound plots (PNG) plus the CSV tables into ``outdir``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    written = []

    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, table, title in zip(axes, ("sigma1", "sigma2"), ("one composite", "two composites")):
        for spec in dict.fromkeys(r.alphabet for r in cap if r.table == table):
            sel = [r for r in cap if r.alphabet == spec and r.table == table]
            line, = ax.plot([r.l for r in sel], [r.capacity_bits for r in sel], "o-", label=spec)
            ax.plot([r.l for r in sel], [r.reference for r in sel], "x", color=line.get_color())
        ax.axhline(2.0, color="0.6", lw=0.8, ls="--")
        ax.set_xlabel("run limit l")
        ax.set_title(title)
        ax.legend(fontsize=8)
    axes[0].set_ylabel("capacity (bits/symbol)")
    fig.tight_layout()
    path = os.path.join(outdir, "capacity.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 4))
    for spec in dict.fromkeys(r.alphabet for r in bounds):
        sel = [r for r in bounds if r.alphabet == spec]
        line, = ax.semilogy([r.l for r in sel], [r.bound for r in sel], "o-", label=f"{spec} (computed)")
        ax.semilogy([r.l for r in sel], [r.reference for r in sel], "x", color=line.get_color(),
                    label=f"{spec} (reference)")
    ax.set_xlabel("run limit l")
    ax.set_ylabel("max codeword length n")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(outdir, "bound.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    for name, header, records in (
        ("capacity.csv", CAPACITY_FIELDS, capacity_records(cap)),
        ("bound.csv", BOUND_FIELDS, bound_records(bounds)),
    ):
        path = os.path.join(outdir, name)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(to_csv(header, records))
        written.append(path)
    return written
