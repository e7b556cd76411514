"""Reproduce the ring-singularity image grid: for each exponent, the field,
its composition with ``exp(-0.2u)`` and the approximations at scales (4, 4)
and (6, 6), plus residual reports and a manifest with checksums."""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path

from .fields import FIGURE_ALPHAS, RingFieldSpec, generate_ring
from .io import pgm_bytes
from .paraproduct import ScaleRange, decompose, exp_nonlinearity, residual_report

FIGURE_SCALES = (4, 6)
MANIFEST = "manifest.csv"


def alpha_tag(alpha: float) -> str:
    return f"{alpha:.0e}"


def run_figure(output_dir, grid_level: int = 9, alphas=FIGURE_ALPHAS) -> list[Path]:
    """Write 4 images and 2 residual CSVs per exponent, then the manifest.

    Returns every written path, manifest last.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    A = exp_nonlinearity(0.2)
    rows, written = [], []

    def emit(name, data, alpha, quantity, scales=""):
        path = out / name
        path.write_bytes(data)
        written.append(path)
        rows.append([f"{alpha:g}", quantity, scales, name, len(data),
                     hashlib.sha256(data).hexdigest()])

    for alpha in alphas:
        tag = alpha_tag(alpha)
        f = generate_ring(RingFieldSpec(alpha, grid_level=grid_level))
        decs = {n: decompose(f, A, ScaleRange(n, n)) for n in FIGURE_SCALES}
        first = decs[FIGURE_SCALES[0]]
        emit(f"alpha_{tag}_f.pgm", pgm_bytes(f.values), alpha, "f")
        emit(f"alpha_{tag}_Af.pgm", pgm_bytes(first.composed.values), alpha, "A(f)")
        for n, dec in decs.items():
            emit(f"alpha_{tag}_approx_{n}{n}.pgm", pgm_bytes(dec.approx.values), alpha,
                 "approx", f"{n},{n}")
        for n, dec in decs.items():
            text = residual_report(dec, alpha).to_csv().encode("ascii")
            emit(f"alpha_{tag}_residual_{n}{n}.csv", text, alpha, "residual_report", f"{n},{n}")

    manifest = out / MANIFEST
    with open(manifest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "quantity", "scales", "file", "bytes", "sha256"])
        w.writerows(rows)
    written.append(manifest)
    return written
