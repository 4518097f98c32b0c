"""Locating poles of the continued scattering matrix: coarse rectangle scans,
argument-principle counting on cell boundaries, Newton refinement, kernel
vectors, rim scans along the negative axis, and the conjugate-pair audit.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .smatrix import SMatrixModel, build_L

__all__ = [
    "Resonance",
    "ScanRegion",
    "winding_number",
    "scan_region",
    "refine",
    "rim_scan",
    "kernel_vector",
    "conjugate_pair_audit",
    "AuditReport",
    "find_resonances",
    "resonances_to_json",
    "resonances_to_csv",
]

KINDS = ("resonance", "bound_state", "rim_pole", "antiresonance")


@dataclass
class Resonance:
    zeta: complex
    sheet: int
    kind: str
    kernel: np.ndarray
    residual: float
    refinement_iterations: int = 0

    def as_record(self) -> dict:
        return {
            "re_zeta": float(self.zeta.real),
            "im_zeta": float(self.zeta.imag),
            "sheet": int(self.sheet),
            "kind": self.kind,
            "residual": float(self.residual),
            "kernel": [[float(c.real), float(c.imag)] for c in np.atleast_1d(self.kernel)],
            "refinement_iterations": int(self.refinement_iterations),
        }


@dataclass
class ScanRegion:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    sheet: int = 1
    resolution: int = 41

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise ValueError("degenerate scan rectangle")
        if self.resolution < 5:
            raise ValueError("resolution too small")
        if self.im_min < 0 < self.im_max and self.re_min < 0:
            raise ValueError("rectangle crosses the cut (-inf, 0]; scan rims separately")


def _condition_grid(model: SMatrixModel, zs: np.ndarray, sheet: int) -> np.ndarray:
    try:
        vals = model.pole_condition(zs, sheet)
        return np.asarray(vals, dtype=complex)
    except (TypeError, ValueError):
        out = np.empty(zs.shape, dtype=complex)
        for i, z in np.ndenumerate(zs):
            out[i] = model.pole_condition(complex(z), sheet)
        return out


def winding_number(fn, center: complex, half_w: float, half_h: float,
                   n0: int = 64, max_doublings: int = 5) -> tuple[int, float]:
    """Winding of ``fn`` around a rectangle, by phase accumulation.

    Boundary sampling is doubled until two consecutive estimates agree within
    1e-3 of the same integer.
    """
    prev = None
    n = n0
    for _ in range(max_doublings + 1):
        q = n // 4
        ts = np.arange(q) / q
        right = center + half_w + 1j * (-half_h + 2 * half_h * ts)
        top = center + 1j * half_h + (half_w - 2 * half_w * ts)
        left = center - half_w + 1j * (half_h - 2 * half_h * ts)
        bottom = center - 1j * half_h + (-half_w + 2 * half_w * ts)
        path = np.concatenate([right, top, left, bottom, right[:1]])
        vals = fn(path)
        ph = np.angle(vals)
        dph = np.diff(ph)
        dph = (dph + np.pi) % (2 * np.pi) - np.pi
        raw = float(np.sum(dph) / (2 * np.pi))
        if prev is not None and abs(raw - prev) < 1e-3 and abs(raw - round(raw)) < 1e-3:
            return int(round(raw)), raw
        prev = raw
        n *= 2
    return int(round(prev)), prev


def scan_region(model: SMatrixModel, region: ScanRegion) -> list[complex]:
    """Candidate pole locations: detector minima filtered by winding >= 1.

    The detector is the modulus of the model's analytic pole condition
    (the smallest singular value of the resolvent kernel where a trace-class
    structure exists, the reciprocal scattering amplitude otherwise).
    Cells carrying winding >= 2 are subdivided until each candidate is simple
    or the cell is irreducibly small.
    """
    re = np.linspace(region.re_min, region.re_max, region.resolution)
    im = np.linspace(region.im_min, region.im_max, region.resolution)
    zs = re[None, :] + 1j * im[:, None]
    det = np.abs(_condition_grid(model, zs, region.sheet))
    cands: list[complex] = []
    hw = (re[1] - re[0])
    hh = (im[1] - im[0])
    interior = det[1:-1, 1:-1]
    is_min = np.ones_like(interior, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            is_min &= interior <= det[1 + di : det.shape[0] - 1 + di,
                                      1 + dj : det.shape[1] - 1 + dj]
    fn = lambda path: _condition_grid(model, path, region.sheet)
    for i, j in zip(*np.nonzero(is_min)):
        center = complex(zs[1 + i, 1 + j])
        cands.extend(_resolve_cell(fn, center, hw, hh))
    # dedupe
    out: list[complex] = []
    for c in cands:
        if all(abs(c - o) > 0.5 * min(hw, hh) for o in out):
            out.append(c)
    return sorted(out, key=lambda z: (z.real, z.imag))


def _resolve_cell(fn, center: complex, hw: float, hh: float, depth: int = 0) -> list[complex]:
    w, _ = winding_number(fn, center, hw, hh)
    if w <= 0:
        return []
    if w == 1 or depth >= 5 or min(hw, hh) < 1e-6:
        # multiplicity beyond one in an irreducibly small cell is reported as-is
        return [center] * max(1, w if depth >= 5 else 1)
    quads = [center + dx * hw / 2 + 1j * dy * hh / 2 for dx in (-1, 1) for dy in (-1, 1)]
    found: list[complex] = []
    for q in quads:
        found.extend(_resolve_cell(fn, q, hw / 2, hh / 2, depth + 1))
    return found or [center]


def refine(model: SMatrixModel, z0: complex, sheet: int = 1,
           max_iter: int = 50, step_tol: float = 1e-12) -> Resonance:
    """Newton refinement of the pole condition from a candidate point."""
    z = complex(z0)
    it = 0
    for it in range(1, max_iter + 1):
        h = 1e-7 * max(1.0, abs(z))
        f0 = complex(model.pole_condition(z, sheet))
        fp = (complex(model.pole_condition(z + h, sheet))
              - complex(model.pole_condition(z - h, sheet))) / (2 * h)
        if fp == 0:
            raise RuntimeError(f"Newton derivative vanished at {z}")
        step = f0 / fp
        z = z - step
        if abs(step) < step_tol:
            break
    else:
        raise RuntimeError(f"Newton did not converge from {z0} (last step {abs(step):.2e})")
    return _classify(model, z, sheet, it)


def _classify(model: SMatrixModel, zeta: complex, sheet: int, iterations: int) -> Resonance:
    rim_tol = 1e-8
    if abs(zeta.imag) < rim_tol:
        zeta = complex(zeta.real, 0.0)
        if zeta.real >= 0:
            raise RuntimeError(f"converged to {zeta} on the positive axis: not a pole location")
        kind = "bound_state" if sheet == 1 else "rim_pole"
    else:
        kind = "resonance" if zeta.imag < 0 else "antiresonance"
    kernel, residual = _kernel_and_residual(model, zeta, sheet=sheet)
    return Resonance(zeta=zeta, sheet=sheet, kind=kind, kernel=kernel,
                     residual=residual, refinement_iterations=iterations)


def rim_scan(model: SMatrixModel, x_min: float, x_max: float, sheet: int,
             n: int = 4001) -> list[Resonance]:
    """One-dimensional pole search along the negative axis on a fixed sheet."""
    if x_min >= x_max or x_max > 0:
        raise ValueError("rim scans need x_min < x_max <= 0")
    xs = np.linspace(x_min, min(x_max, -1e-9), n)
    vals = _condition_grid(model, xs.astype(complex), sheet)
    if np.max(np.abs(vals.imag)) > 1e-9 * max(np.max(np.abs(vals)), 1.0):
        raise RuntimeError("rim pole condition is not real; no robust bracketing available")
    re = vals.real
    found = []
    for x1, x2, v1, v2 in zip(xs[:-1], xs[1:], re[:-1], re[1:]):
        if v1 == 0.0 or v1 * v2 < 0:
            root = brentq(lambda x: float(np.real(model.pole_condition(complex(x), sheet))),
                          x1, x2, xtol=1e-14)
            found.append(_classify(model, complex(root), sheet, 0))
    return found


def _kernel_and_residual(model: SMatrixModel, zeta: complex, sheet: int | None = None):
    zeta = complex(zeta)
    if zeta.imag == 0 and hasattr(model, "trace_data"):
        ell, _ = build_L(model.trace_data(), zeta, sheet or 1)
        _, s, vh = np.linalg.svd(ell)
        k, val = vh[-1].conj(), float(s[-1])
    elif zeta.imag == 0 and model.sheet_count == 2:
        val = abs(complex(model.pole_condition(zeta, sheet or 1)))
        k = np.ones(model.dim_k, dtype=complex)
    else:
        s_at_conj = np.conj(model.eval_physical(np.conj(zeta))).T
        _, s, vh = np.linalg.svd(np.atleast_2d(s_at_conj))
        k, val = vh[-1].conj(), float(s[-1])
    return k / np.linalg.norm(k), val


def kernel_vector(model: SMatrixModel, zeta: complex, sheet: int | None = None,
                  threshold: float = 1e-6) -> np.ndarray:
    """Unit vector minimizing ``||S(conj(zeta))* k||`` at a located pole.

    Raises when the minimized value stays above the threshold, which signals
    that the point is not a genuine pole.  For poles on the negative axis the
    scattering matrix itself is singular at the conjugate point, so the kernel
    is read from the resolvent-kernel matrix when one is available.
    """
    k, val = _kernel_and_residual(model, zeta, sheet)
    if val > threshold:
        raise ValueError(
            f"point {zeta} is not a pole: min ||S(conj zeta)* k|| = {val:.3e} > {threshold:g}"
        )
    return k


@dataclass
class AuditReport:
    flagged: list = field(default_factory=list)
    ok: bool = True


def conjugate_pair_audit(resonances: list[Resonance], model: SMatrixModel,
                         tol: float = 1e-8) -> AuditReport:
    """Flag mutually conjugate pole pairs on the physical surface.

    The admissibility condition requires that poles of the continued matrix
    never occur in conjugate pairs within the continuation domain; pairs found
    off the physical surface (e.g. sheet-two mirror points) are ignored.
    """
    def on_surface(r: Resonance) -> bool:
        if model.sheet_count == 1:
            return True
        if abs(r.zeta.imag) < tol:
            return True
        return (r.zeta.imag > 0) == (r.sheet == 1)

    surface = [r for r in resonances if on_surface(r)]
    report = AuditReport()
    for i, r1 in enumerate(surface):
        for r2 in surface[i + 1 :]:
            if abs(r1.zeta - np.conj(r2.zeta)) < tol and abs(r1.zeta.imag) > tol:
                report.flagged.append((r1, r2))
                report.ok = False
    return report


def find_resonances(model: SMatrixModel, regions: list[ScanRegion] | None = None,
                    rims: bool = True, rim_extent: float = 8.0) -> list[Resonance]:
    """Scan default or user regions, refine candidates, and scan the rims."""
    if regions is None:
        if model.sheet_count == 1:
            regions = [
                ScanRegion(-6, 6, 0.02, 6, sheet=1),
                ScanRegion(-6, 6, -6, -0.02, sheet=1),
            ]
        else:
            regions = [ScanRegion(-6, 6, -6, -0.02, sheet=2)]
    found: list[Resonance] = []
    for region in regions:
        for cand in scan_region(model, region):
            try:
                res = refine(model, cand, region.sheet)
            except RuntimeError:
                continue
            found.append(res)
    if rims and model.sheet_count == 2:
        for sheet in (1, 2):
            found.extend(rim_scan(model, -rim_extent, -1e-6, sheet))
    deduped: list[Resonance] = []
    for r in sorted(found, key=lambda r: (r.sheet, r.zeta.real, r.zeta.imag)):
        if all(abs(r.zeta - o.zeta) > 1e-8 or r.sheet != o.sheet for o in deduped):
            deduped.append(r)
    return deduped


def resonances_to_json(resonances: list[Resonance]) -> list[dict]:
    return [r.as_record() for r in resonances]


def resonances_to_csv(resonances: list[Resonance], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re_zeta", "im_zeta", "sheet", "kind", "residual"])
        for r in resonances:
            writer.writerow(
                [
                    format(r.zeta.real, ".12g"),
                    format(r.zeta.imag, ".12g"),
                    r.sheet,
                    r.kind,
                    format(r.residual, ".12g"),
                ]
            )
