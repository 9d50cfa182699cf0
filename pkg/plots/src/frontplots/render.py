"""Render frontspec CSV artifacts into publication-style figures.

This package reads only the delimited files written by the frontspec CLI
(whose floats are 17-significant-digit, lossless for binary64) and never
recomputes any mathematics: region boundaries, roots and traces are all
taken from the files.  Rendering is deterministic - fixed figure size,
fixed fonts, the Agg backend - so identical inputs give identical images.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "SchemaError", "render", "read_csv", "FIGURE_KINDS"]

FIGURE_KINDS = ("spectrum-map", "critical-curve", "front-trace", "wave-profile")

# one fixed style for every figure; no rcParams leak from the environment
_STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "savefig.dpi": 130,
}

_HEADERS = {
    "wave": ["z", "theta0", "phi0", "dtheta0", "dphi0"],
    "spectrum": ["re", "im", "classification", "absD"],
    "roots": ["re", "im", "residual", "multiplicity", "kind"],
    "critical": [
        "epsilon", "m_c", "omega",
        "delta6_residual", "p7_residual", "dispersion_residual", "status",
    ],
    "trace": ["tau", "g", "gdot", "s", "wnorm", "stefan_diag"],
}


class SchemaError(ValueError):
    """Input file does not match the documented CSV contract."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: inputs, kind, destination, style options."""

    inputs: tuple
    kind: str
    out: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")


def read_csv(path) -> dict:
    """Parse one frontspec CSV into columns keyed by header name.

    Numeric cells become floats (empty cells become nan); the original
    strings are kept under ``"_raw_" + name`` so the 17-digit round trip
    can be checked without loss.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty file")
    header = rows[0]
    data = {name: [] for name in header}
    raw = {name: [] for name in header}
    for row in rows[1:]:
        if len(row) != len(header):
            raise SchemaError(f"{path}: row with {len(row)} cells, header has {len(header)}")
        for name, cell in zip(header, row):
            raw[name].append(cell)
            try:
                data[name].append(float(cell) if cell != "" else float("nan"))
            except ValueError:
                data[name].append(float("nan"))
    out = {name: np.array(vals) for name, vals in data.items()}
    out["_header"] = header
    out["_path"] = str(path)
    for name in header:
        out["_raw_" + name] = raw[name]
    return out


def _require(table: dict, expected_key: str) -> None:
    expected = _HEADERS[expected_key]
    missing = [c for c in expected if c not in table["_header"]]
    if missing:
        raise SchemaError(
            f"{table['_path']}: missing column(s) {', '.join(missing)} "
            f"(expected header {','.join(expected)})"
        )


def _split_inputs(tables: list, want: dict) -> dict:
    """Assign input tables to roles by matching headers."""
    found = {}
    for t in tables:
        for role in want:
            if all(c in t["_header"] for c in _HEADERS[role]) and role not in found:
                found[role] = t
                break
        else:
            raise SchemaError(
                f"{t['_path']}: header {','.join(t['_header'])} matches none of the "
                f"expected inputs {sorted(want)}"
            )
    for role, required in want.items():
        if required and role not in found:
            raise SchemaError(f"no input with the {role} header ({','.join(_HEADERS[role])})")
    return found


def render(spec: FigureSpec) -> str:
    """Render the figure and return the written path.

    Nothing is written when the inputs fail validation.
    """
    tables = [read_csv(p) for p in spec.inputs]
    with plt.rc_context(_STYLE):
        fig = plt.figure()
        try:
            if spec.kind == "spectrum-map":
                _spectrum_map(fig, tables)
            elif spec.kind == "critical-curve":
                _critical_curve(fig, tables)
            elif spec.kind == "front-trace":
                _front_trace(fig, tables)
            else:
                _wave_profile(fig, tables)
            out = Path(spec.out)
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, metadata=_image_metadata(out))
        finally:
            plt.close(fig)
    return str(spec.out)


def _image_metadata(out: Path):
    # strip writer defaults that would embed versions or dates
    suffix = out.suffix.lower()
    if suffix == ".png":
        return {"Software": "frontplots"}
    if suffix == ".svg":
        return {"Date": None}
    return None


def _spectrum_map(fig, tables):
    found = _split_inputs(tables, {"spectrum": False, "roots": False})
    if not found:
        raise SchemaError("spectrum-map needs a spectrum grid and/or a roots table")
    ax = fig.add_subplot(111)
    if "spectrum" in found:
        t = found["spectrum"]
        _require(t, "spectrum")
        cls = np.array(t["_raw_classification"], dtype=object)
        pts = {
            "essential-parabola": dict(color="#bcd2e8", marker="s", s=7, label="essential (parabola)"),
            "essential-ray": dict(color="#30588c", marker="s", s=9, label="essential (ray)"),
            "resolvent": dict(color="#f2f2f2", marker=".", s=3, label=None),
            "point-root": dict(color="#c23b22", marker="x", s=30, label="dispersion root"),
            "zero-eigenvalue": dict(color="#111111", marker="+", s=40, label="zero eigenvalue"),
        }
        for name, sty in pts.items():
            sel = cls == name
            if np.any(sel):
                label = sty.pop("label")
                ax.scatter(t["re"][sel], t["im"][sel], label=label, **sty)
                sty["label"] = label
        # boundary of the classified parabola region, one point per im row
        sel = cls == "essential-parabola"
        if np.any(sel):
            ims = np.unique(t["im"][sel])
            bound = [(t["re"][sel][t["im"][sel] == v].max(), v) for v in ims]
            bx, by = zip(*sorted(bound, key=lambda q: q[1]))
            ax.plot(bx, by, color="#30588c", lw=1.2, label="parabola boundary")
    if "roots" in found:
        t = found["roots"]
        _require(t, "roots")
        kinds = np.array(t["_raw_kind"], dtype=object)
        sel = kinds == "point-root"
        ax.scatter(t["re"][sel], t["im"][sel], color="#c23b22", marker="o", s=45,
                   facecolors="none", linewidths=1.6, label="scanned root")
        sel0 = kinds == "zero-eigenvalue"
        ax.scatter(t["re"][sel0], t["im"][sel0], color="#111111", marker="+", s=60,
                   label="zero eigenvalue")
    ax.axhline(0.0, color="0.6", lw=0.5)
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title("spectrum map")
    ax.legend(loc="upper right", fontsize=7)


def _critical_curve(fig, tables):
    t = _split_inputs(tables, {"critical": True})["critical"]
    _require(t, "critical")
    status = np.array(t["_raw_status"], dtype=object)
    ok = status == "ok"
    if not np.any(ok):
        raise SchemaError(f"{t['_path']}: no rows with status ok")
    eps = t["epsilon"][ok]
    ax1 = fig.add_subplot(211)
    ax1.semilogx(eps, t["m_c"][ok], "o-", color="#30588c")
    ax1.set_ylabel("critical m")
    ax1.set_title("Hopf critical curve")
    ax2 = fig.add_subplot(212, sharex=ax1)
    ax2.semilogx(eps, t["omega"][ok], "s-", color="#c23b22")
    ax2.set_ylabel("frequency")
    ax2.set_xlabel("epsilon")
    fig.tight_layout()


def _front_trace(fig, tables):
    t = _split_inputs(tables, {"trace": True})["trace"]
    _require(t, "trace")
    if t["tau"].size == 0:
        raise SchemaError(f"{t['_path']}: trace has no rows")
    ax1 = fig.add_subplot(311)
    ax1.plot(t["tau"], t["s"], color="#30588c", lw=1.0)
    ax1.set_ylabel("front shift s")
    ax1.set_title("front trace")
    ax2 = fig.add_subplot(312, sharex=ax1)
    ax2.plot(t["tau"], t["gdot"] - 1.0, color="#444444", lw=0.8)
    ax2.set_ylabel("gdot - 1")
    ax3 = fig.add_subplot(313, sharex=ax1)
    w = t["wnorm"]
    pos = w > 0
    if np.any(pos):
        ax3.semilogy(t["tau"][pos], w[pos], color="#c23b22", lw=1.0)
    ax3.set_ylabel("weighted norm")
    ax3.set_xlabel("tau")
    fig.tight_layout()


def _wave_profile(fig, tables):
    t = _split_inputs(tables, {"wave": True})["wave"]
    _require(t, "wave")
    if t["z"].size == 0:
        raise SchemaError(f"{t['_path']}: wave table has no rows")
    ax = fig.add_subplot(111)
    ax.plot(t["z"], t["theta0"], color="#c23b22", lw=1.4, label="theta")
    ax.plot(t["z"], t["phi0"], color="#30588c", lw=1.4, label="phi")
    ax.plot(t["z"], t["dtheta0"], color="#c23b22", lw=0.9, ls="--", label="theta'")
    ax.plot(t["z"], t["dphi0"], color="#30588c", lw=0.9, ls="--", label="phi'")
    ax.axvline(0.0, color="0.5", lw=0.6)
    ax.set_xlabel("moving-frame coordinate")
    ax.set_title("traveling wave")
    ax.legend(loc="center right", fontsize=8)
