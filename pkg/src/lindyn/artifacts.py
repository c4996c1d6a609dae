"""Report plumbing: run manifests, atomic file output, CSV and a tiny SVG plotter."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Dict, Iterable, Mapping, Optional, Sequence

__all__ = ["RunManifest", "atomic_write", "dumps", "report_schema", "write_csv", "svg_plot"]


def _version() -> str:
    try:
        from importlib.metadata import version
        return version("lindyn")
    except Exception:  # running from a source tree
        return "0+unknown"


@dataclass(frozen=True)
class RunManifest:
    """Everything that determines a run's verdicts (no timestamps, no hostnames)."""

    command: tuple
    inputs: Dict[str, str] = field(default_factory=dict)  # path -> sha256
    tool_version: str = field(default_factory=_version)
    seeds: Dict[str, int] = field(default_factory=dict)
    horizons: Dict[str, int] = field(default_factory=dict)
    tolerances: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(cls, argv: Sequence[str], input_paths: Iterable[str] = (), **kw) -> "RunManifest":
        return cls(tuple(argv), {p: sha256_file(p) for p in input_paths}, **kw)

    def to_json(self) -> dict:
        d = asdict(self)
        d["command"] = list(self.command)
        return d


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory and rename into place."""
    if path == "-":
        import sys
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".lindyn-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    atomic_write(path, buf.getvalue())


def report_schema() -> dict:
    text = resources.files("lindyn").joinpath("data/report.schema.json").read_text("utf-8")
    return json.loads(text)


def svg_plot(series: Mapping[str, Sequence], title: str = "", logy: bool = False,
             width: int = 640, height: int = 400) -> str:
    """Line plot of ``{label: [(x, y), ...]}`` as standalone SVG text."""
    pad = 48
    pts = [(float(x), float(y)) for s in series.values() for x, y in s]
    if logy:
        pts = [(x, y) for x, y in pts if y > 0]
    if not pts:
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
                f'<text x="10" y="20">{_esc(title)}: no data</text></svg>\n')

    def ty(y):
        return math.log10(y) if logy else y

    xs = [x for x, _ in pts]
    ys = [ty(y) for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (ty(y) - y0) / (y1 - y0) * (height - 2 * pad)

    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2}" y="20" text-anchor="middle">{_esc(title)}</text>',
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
           f'<text x="{pad}" y="{height - pad + 16}">{x0:g}</text>',
           f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="end">{x1:g}</text>',
           f'<text x="4" y="{height - pad}">{_tick(y0, logy)}</text>',
           f'<text x="4" y="{pad + 4}">{_tick(y1, logy)}</text>']
    for i, (label, s) in enumerate(series.items()):
        c = colours[i % len(colours)]
        data = [(float(x), float(y)) for x, y in s if not logy or float(y) > 0]
        if not data:
            continue
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in data)
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{path}"/>')
        out.append(f'<text x="{width - pad - 4}" y="{pad + 16 * (i + 1)}" fill="{c}" '
                   f'text-anchor="end">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _tick(v, logy):
    return f"1e{v:.1f}" if logy else f"{v:.3g}"


def _esc(s: str) -> str:
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
