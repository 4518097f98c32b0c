"""Shift semigroup on the upper Hardy class, its compressed adjoint (the
characteristic semigroup), the generator's tail offset, the polar-decomposition
isometry onto the half line, and closed-form truncation matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hardy import (
    Grid,
    GridFunction,
    _matched_cut,
    _phi_matrix,
    _tail_cache,
    norm,
)

__all__ = [
    "apply_T",
    "apply_C",
    "GeneratorSample",
    "generator_offset",
    "IsometryPair",
    "build_polar_isometry",
    "transfer_apply",
    "semigroup_matrix",
    "generator_matrix",
]


def apply_T(f: GridFunction, t: float) -> GridFunction:
    """Outgoing shift semigroup: multiplication by ``e^{i*t*lam}``, t >= 0."""
    if t < 0:
        raise ValueError("apply_T requires t >= 0")
    lam = f.grid.points()
    return GridFunction(f.grid, np.exp(1j * t * lam)[:, None] * f.samples)


def apply_C(f: GridFunction, t: float) -> GridFunction:
    """Characteristic semigroup: compress ``e^{-i*t*lam}`` back to the Hardy class.

    Computed as multiply-then-project where the projection repairs the window
    and alias artifacts of 1/lam tails (the multiplier shifts the x-image by t,
    so the repair is evaluated at shifted argument).  Contractive on Hardy-class
    inputs and exact on the rational eigenvectors ``k/(lam - zeta)`` up to the
    grid's tail-fit residual.
    """
    if t < 0:
        raise ValueError("apply_C requires t >= 0")
    return _matched_cut(f, "+", shift=float(t))


@dataclass
class GeneratorSample:
    """A point of the generator graph: image(lam) = lam*f(lam) + offset."""

    input: GridFunction
    offset: np.ndarray
    image: GridFunction
    residual: float


def generator_offset(f: GridFunction, residual_tol: float = 5e-2) -> GeneratorSample:
    """Recover the multiplicity-space offset that puts ``lam*f + k0`` in the Hardy class.

    The offset is the negative of the constant term in the tail expansion
    ``lam*f ~ c0 + c1/lam + ...`` (least squares over the edge bands); the
    residual is the fraction of the image's x-side energy on the wrong half
    axis, measured after tail repair.
    """
    tc = _tail_cache(f.grid)
    c0, _, _ = tc.fit(f.samples)
    k0 = -c0
    lam = f.grid.points()
    image = GridFunction(f.grid, lam[:, None] * f.samples + k0[None, :])
    wrong = _matched_cut(image, "-")
    residual = norm(wrong) / max(norm(image), 1e-300)
    if residual > residual_tol:
        raise RuntimeError(
            f"generator offset did not converge: wrong-side residual {residual:.3e}"
        )
    return GeneratorSample(input=f, offset=k0, image=image, residual=residual)


@dataclass
class IsometryPair:
    """Partial isometry factor of the half-line/Hardy overlap operator.

    ``forward`` maps the truncated Hardy subspace isometrically onto functions
    supported on the positive half line; ``adjoint`` is its inverse on the
    retained directions.
    """

    grid: Grid
    rank: int
    singular_values: np.ndarray
    _q: np.ndarray = field(repr=False)
    _w: np.ndarray = field(repr=False)
    _vh: np.ndarray = field(repr=False)

    @property
    def smallest_retained(self) -> float:
        return float(self.singular_values.min())

    @property
    def largest_retained(self) -> float:
        return float(self.singular_values.max())

    def forward(self, f: GridFunction) -> GridFunction:
        wsamp = np.sqrt(f.grid.spacing) * f.samples
        c = self._q.conj().T @ wsamp
        return GridFunction(f.grid, (self._w @ c) / np.sqrt(f.grid.spacing))

    def adjoint(self, f: GridFunction) -> GridFunction:
        wsamp = np.sqrt(f.grid.spacing) * f.samples
        c = self._w.conj().T @ wsamp
        return GridFunction(f.grid, (self._q @ c) / np.sqrt(f.grid.spacing))

    def initial_vectors(self) -> list:
        """Orthonormal grid functions spanning the retained initial space."""
        scale = 1.0 / np.sqrt(self.grid.spacing)
        return [
            GridFunction(self.grid, scale * (self._q @ self._vh[i].conj()))
            for i in range(self.rank)
        ]


def build_polar_isometry(
    grid: Grid, m: int = 1, rank_budget: int = 48, cutoff: float = 1e-8
) -> IsometryPair:
    """SVD polar factor of the half-line-projected Hardy basis.

    The truncated basis is orthonormalized in the grid metric, projected onto
    the positive half line, and the partial isometry is the product of the two
    singular frames with singular values below ``cutoff * sigma_max`` dropped.
    The same matrices act on every multiplicity component.
    """
    if rank_budget < 1 or rank_budget > grid.n_points // 2:
        raise ValueError("rank_budget out of range")
    phi = np.sqrt(grid.spacing) * _phi_matrix(grid, rank_budget)
    q, _ = np.linalg.qr(phi)
    mask = (grid.points() >= 0)[:, None]
    x = np.where(mask, q, 0)
    u, s, vh = np.linalg.svd(x, full_matrices=False)
    keep = s >= cutoff * s[0]
    if not keep.any():
        raise RuntimeError("all singular values fell below the cutoff")
    w = u[:, keep] @ vh[keep, :]
    return IsometryPair(
        grid=grid, rank=int(keep.sum()), singular_values=s[keep], _q=q, _w=w,
        _vh=vh[keep, :],
    )


def transfer_apply(iso: IsometryPair, f: GridFunction, t: float, which: str) -> GridFunction:
    """Conjugate the chosen semigroup by the isometry: ``R o S(t) o R*``."""
    if which not in ("T", "C"):
        raise ValueError(f"which must be 'T' or 'C', got {which!r}")
    g = iso.adjoint(f)
    h = apply_T(g, t) if which == "T" else apply_C(g, t)
    return iso.forward(h)


# ---------------------------------------------------------------------------
# closed-form matrices in the rational basis


def _laguerre_diff(count: int, x: float) -> np.ndarray:
    """L^{(-1)}_m(x) = L_m(x) - L_{m-1}(x) for m = 0..count-1, by recurrence."""
    la = np.empty(count + 1)
    la[0] = 1.0
    if count >= 1:
        la[1] = 1.0 - x
    for m in range(1, count):
        la[m + 1] = ((2 * m + 1 - x) * la[m] - m * la[m - 1]) / (m + 1)
    out = np.empty(count)
    out[0] = 1.0
    out[1:] = la[1:count] - la[: count - 1]
    return out


def semigroup_matrix(t: float, dim: int) -> np.ndarray:
    """Exact matrix of the characteristic semigroup on the rational basis.

    Upper-triangular Toeplitz with entries ``e^{-t} L^{(-1)}_{j-k}(2t)``; the
    generating-function structure makes the semigroup law exact order by order
    and the spectral norm is at most one.
    """
    if t < 0:
        raise ValueError("semigroup_matrix requires t >= 0")
    v = np.exp(-t) * _laguerre_diff(dim, 2 * t)
    mat = np.zeros((dim, dim))
    for k in range(dim):
        mat[k, k:] = v[: dim - k]
    return mat


def generator_matrix(dim: int) -> np.ndarray:
    """Exact matrix of the semigroup generator on the rational basis.

    ``-i (I + 2 N)`` with N the strictly upper triangular matrix of ones; its
    action on the coefficient vector of ``k/(lam - zeta)`` is multiplication
    by zeta.
    """
    return -1j * (np.eye(dim) + 2 * np.triu(np.ones((dim, dim)), 1))
