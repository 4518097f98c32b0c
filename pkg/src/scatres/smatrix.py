"""Concrete scattering matrices with analytic continuation across the positive
half axis: a rational one-sheet family, the rank-one perturbation of the
half-line multiplication operator, the square-well model built from its Jost
function, and a generic trace-class construction driven by form factors.

Sheet convention: sheet 1 carries ``Im sqrt(z) > 0`` (momentum ``i*sqrt(-z)``),
sheet 2 its negation.  Real inputs are treated as approached from above, so
``eval(z, 1)`` on the negative axis is the upper rim and ``eval(z, 2)`` the
lower rim, while on the positive axis the two sheets give the two boundary
values of the physical scattering matrix.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "momentum",
    "SMatrixModel",
    "RationalModel",
    "example1",
    "RankOneModel",
    "SquareWellModel",
    "TraceClassModel",
    "rankone_resolvent_elem",
    "jost_F",
    "jost_F_ode",
    "TraceClassData",
    "rankone_trace_data",
    "trace_T",
    "trace_T_boundary",
    "build_L",
    "load_trace_csv",
    "model_from_spec",
]


def momentum(z, sheet: int):
    """Momentum ``k`` with ``z = k^2``; sheet 1 has Im k >= 0, sheet 2 the mirror.

    Real ``z`` is resolved as ``z + i0``: positive energies give the physical
    ``+sqrt(z)`` on sheet 1, negative energies the upper rim ``i*sqrt(|z|)``.
    """
    if sheet not in (1, 2):
        raise ValueError(f"sheet must be 1 or 2, got {sheet}")
    z = np.asarray(z, dtype=complex)
    k = 1j * np.sqrt(-z)
    return k if sheet == 1 else -k


class SMatrixModel:
    """Evaluation contract for a scattering matrix on labeled sheets."""

    name: str = "abstract"
    dim_k: int = 1
    sheet_count: int = 1

    # -- required --------------------------------------------------------
    def eval(self, z: complex, sheet: int = 1) -> np.ndarray:
        raise NotImplementedError

    def pole_condition(self, z: complex, sheet: int = 1) -> complex:
        """Scalar analytic function vanishing exactly at the poles of the sheet."""
        raise NotImplementedError

    # -- shared ----------------------------------------------------------
    def _check_sheet(self, z: complex, sheet: int):
        if sheet not in (1, 2) or sheet > self.sheet_count:
            raise ValueError(f"invalid sheet {sheet} for model {self.name}")
        if z == 0 and self.sheet_count == 2:
            raise ValueError("z = 0 is the branch point")

    def boundary(self, lam, side: str = "+") -> np.ndarray:
        """Boundary values along the real axis; shape ``lam.shape + (m, m)``.

        Side '+' is the physical surface approached from above (sheet 1
        everywhere); side '-' is the approach from below (sheet 2 for
        two-sheeted models).  A sample landing exactly on the branch point is
        resolved by its bounded one-sided limit.
        """
        if side not in ("+", "-"):
            raise ValueError(f"side must be '+' or '-', got {side!r}")
        sheet = 1 if (side == "+" or self.sheet_count == 1) else 2
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        safe = np.where(lam == 0.0, 1e-12, lam)
        try:
            return np.asarray(self.eval(safe, sheet), dtype=complex)
        except (NotImplementedError, TypeError):
            out = np.empty(lam.shape + (self.dim_k, self.dim_k), dtype=complex)
            for i, x in enumerate(safe):
                out[i] = self.eval(complex(x), sheet)
            return out

    def eval_physical(self, z: complex) -> np.ndarray:
        """Value on the physical surface: sheet 1 for Im z >= 0, else sheet 2."""
        if self.sheet_count == 1:
            return self.eval(z, 1)
        return self.eval(z, 1 if complex(z).imag >= 0 else 2)

    def upper_half_poles(self) -> list[tuple[complex, int]]:
        """Poles of the physical surface in the open upper half plane."""
        return []

    def upper_rim_poles(self) -> list[tuple[float, int]]:
        """Poles on the negative axis approached from above, as (position, order)."""
        return []

    def resonance_hints(self) -> list[tuple[complex, int]]:
        """Known lower-half-plane pole locations (position, sheet), if any."""
        return []


# ---------------------------------------------------------------------------
# rational one-sheet family


class RationalModel(SMatrixModel):
    """Scalar product of factors ``(lam - conj(p))/(lam - p)``.

    Unitary on the real axis by construction, meromorphic on the plane with
    poles exactly at the given points; the single-sheet case of the theory.
    """

    sheet_count = 1
    dim_k = 1

    def __init__(self, poles, name: str = "rational"):
        poles = tuple(complex(p) for p in poles)
        if any(p.imag == 0 for p in poles):
            raise ValueError("real poles would break unitarity of the rational family")
        self.poles = poles
        self.name = name

    def eval(self, z, sheet: int = 1):
        if sheet != 1:
            raise ValueError("rational models live on a single sheet")
        z = np.asarray(z, dtype=complex)
        s = np.ones_like(z)
        for p in self.poles:
            s = s * (z - np.conj(p)) / (z - p)
        return s.reshape(z.shape + (1, 1)) if z.shape else np.array([[complex(s)]])

    def boundary(self, lam, side: str = "+"):
        if side not in ("+", "-"):
            raise ValueError(f"side must be '+' or '-', got {side!r}")
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        return self.eval(lam, 1)

    def pole_condition(self, z, sheet: int = 1):
        z = np.asarray(z, dtype=complex)
        s = np.ones_like(z)
        for p in self.poles:
            s = s * (z - p) / (z - np.conj(p))
        return s

    def upper_half_poles(self):
        out: dict[complex, int] = {}
        for p in self.poles:
            if p.imag > 0:
                out[p] = out.get(p, 0) + 1
        return sorted(out.items(), key=lambda kv: (kv[0].real, kv[0].imag))

    def resonance_hints(self):
        return [(p, 1) for p in self.poles if p.imag < 0]


def example1() -> RationalModel:
    """The rank-one Friedrichs example on the whole line: poles at i and 1 - i."""
    return RationalModel((1j, 1 - 1j), name="example1")


# ---------------------------------------------------------------------------
# rank-one perturbation of the half-line multiplication operator


def rankone_resolvent_elem(z: complex, sheet: int = 1) -> complex:
    """Closed form of the form-factor resolvent element ``-1/(1 - i k)^2``."""
    if np.all(np.asarray(z) == 0):
        raise ValueError("z = 0 is the branch point")
    k = momentum(z, sheet)
    return -1 / (1 - 1j * k) ** 2


class RankOneModel(SMatrixModel):
    """Scalar two-sheeted model of a rank-one coupling with strength ``a``.

    The scattering matrix is ``1 - 4iak / ((1+ik)^2 (a + (1-ik)^2))`` in the
    momentum ``k`` of the chosen sheet; eigenvalues and resonances solve
    ``(1 - ik)^2 + a = 0``.
    """

    sheet_count = 2
    dim_k = 1

    def __init__(self, a: float):
        if a == 0:
            raise ValueError("coupling a must be nonzero")
        self.a = float(a)
        self.name = f"rankone(a={self.a:g})"

    def eval(self, z, sheet: int = 1):
        self._check_sheet(np.asarray(z).flat[0] if np.ndim(z) else z, sheet)
        z = np.asarray(z, dtype=complex)
        k = momentum(z, sheet)
        a = self.a
        s = 1 - 4j * a * k / ((1 + 1j * k) ** 2 * (a + (1 - 1j * k) ** 2))
        return s.reshape(z.shape + (1, 1)) if z.shape else np.array([[complex(s)]])

    def l_value(self, z, sheet: int = 1):
        return 1 - self.a * rankone_resolvent_elem(z, sheet)

    def pole_condition(self, z, sheet: int = 1):
        return self.l_value(z, sheet)

    def eigen_momenta(self) -> list[complex]:
        """Both roots of ``(1 - ik)^2 + a = 0`` in the momentum plane."""
        root = np.sqrt(complex(-self.a))
        return [-1j * (1 - root), -1j * (1 + root)]

    def upper_rim_poles(self):
        # double pole of the form factor at z = -1 on every sheet's rim
        poles = [(-1.0, 2)]
        for k in self.eigen_momenta():
            if k.imag > 1e-14 and abs(k.real) < 1e-14:
                poles.append((-(k.imag ** 2), 1))
        return sorted(poles)

    def resonance_hints(self):
        hints = []
        for k in self.eigen_momenta():
            z = k**2
            sheet = 1 if k.imag > 0 else 2
            if z.imag < 0:
                hints.append((z, sheet))
        return hints

    def trace_data(self) -> "TraceClassData":
        return rankone_trace_data(self.a)


# ---------------------------------------------------------------------------
# square well (zero angular momentum) via the Jost function


def jost_F(k, v0: float, radius: float):
    """Jost function of the well of depth v0 and radius ``radius``.

    Matching formula ``e^{ika} (cos(Ka) - (ik/K) sin(Ka))`` with
    ``K = sqrt(k^2 + v0)``; entire in ``k`` (only even powers of K enter) and
    equal to one for the free problem.
    """
    k = np.asarray(k, dtype=complex)
    ksq = k**2 + v0
    K = np.sqrt(ksq)
    Ka = K * radius
    small = np.abs(Ka) < 1e-6
    sin_over = np.where(small, radius * (1 - Ka**2 / 6), np.sin(np.where(small, 1, Ka)) / np.where(small, 1, K))
    return np.exp(1j * k * radius) * (np.cos(Ka) - 1j * k * sin_over)


def jost_F_ode(k: complex, v0: float, radius: float, n_steps: int = 4000) -> complex:
    """Independent Jost value from the regular solution, by fixed-step RK4.

    Integrates ``u'' = (V - k^2) u`` from the origin with ``u(0)=0, u'(0)=1``
    and reads off ``e^{ika}(u'(a) - ik u(a))``.
    """
    k = complex(k)
    h = radius / n_steps
    u, up = 0.0 + 0j, 1.0 + 0j
    c = -(v0 + k * k)  # u'' = c*u inside the well (V = -v0)

    def rhs(y):
        return np.array([y[1], c * y[0]])

    y = np.array([u, up])
    for _ in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + h / 2 * k1)
        k3 = rhs(y + h / 2 * k2)
        k4 = rhs(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return complex(np.exp(1j * k * radius) * (y[1] - 1j * k * y[0]))


class SquareWellModel(SMatrixModel):
    """Zero-angular-momentum scattering off an attractive well of compact support."""

    sheet_count = 2
    dim_k = 1

    def __init__(self, v0: float, radius: float):
        if v0 <= 0 or radius <= 0:
            raise ValueError("well depth and radius must be positive")
        self.v0 = float(v0)
        self.radius = float(radius)
        self.name = f"squarewell(v0={self.v0:g}, a={self.radius:g})"

    def eval(self, z, sheet: int = 1):
        self._check_sheet(np.asarray(z).flat[0] if np.ndim(z) else z, sheet)
        z = np.asarray(z, dtype=complex)
        k = momentum(z, sheet)
        s = jost_F(-k, self.v0, self.radius) / jost_F(k, self.v0, self.radius)
        return s.reshape(z.shape + (1, 1)) if z.shape else np.array([[complex(s)]])

    def pole_condition(self, z, sheet: int = 1):
        return jost_F(momentum(z, sheet), self.v0, self.radius)

    def bound_state_momenta(self) -> list[float]:
        """Zeros of the Jost function on the positive imaginary momentum axis."""
        kmax = np.sqrt(self.v0)

        def g(kap):
            return float(np.real(jost_F(1j * kap, self.v0, self.radius)))

        grid = np.linspace(1e-9, kmax * (1 - 1e-12), 800)
        vals = [g(x) for x in grid]
        roots = []
        for x1, x2, v1, v2 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if v1 == 0.0:
                roots.append(float(x1))
            elif v1 * v2 < 0:
                roots.append(float(brentq(g, x1, x2, xtol=1e-14)))
        return roots

    def upper_rim_poles(self):
        return [(-kap**2, 1) for kap in self.bound_state_momenta()]

    def upper_half_poles(self):
        return []

    def resonance_momenta(self, n_lowest: int = 4, re_max: float = 16.0,
                          im_min: float = -4.0) -> list[complex]:
        """Lowest fourth-quadrant Jost zeros, by winding counts plus Newton."""
        from .finder import winding_number

        def f(k):
            return jost_F(k, self.v0, self.radius)

        re = np.linspace(0.05, re_max, 160)
        im = np.linspace(im_min, -0.01, 80)
        kk = re[None, :] + 1j * im[:, None]
        vals = np.abs(f(kk))
        interior = vals[1:-1, 1:-1]
        is_min = np.ones_like(interior, dtype=bool)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == dj == 0:
                    continue
                is_min &= interior <= vals[1 + di : vals.shape[0] - 1 + di,
                                           1 + dj : vals.shape[1] - 1 + dj]
        zeros: list[complex] = []
        for i, j in zip(*np.nonzero(is_min)):
            k0 = complex(kk[1 + i, 1 + j])
            w, _ = winding_number(f, k0, re[1] - re[0], im[1] - im[0])
            if w < 1:
                continue
            z = k0
            for _ in range(60):
                h = 1e-7 * max(1.0, abs(z))
                deriv = (f(z + h) - f(z - h)) / (2 * h)
                step = f(z) / deriv
                z = z - step
                if abs(step) < 1e-13:
                    break
            if all(abs(z - u) > 1e-8 for u in zeros):
                zeros.append(complex(z))
        zeros.sort(key=abs)
        return zeros[:n_lowest]


# ---------------------------------------------------------------------------
# trace-class construction: V = B A* with Hilbert-Schmidt form factors


@dataclass
class TraceClassData:
    """Sampled form factors on a positive-axis quadrature grid.

    ``a_vals``/``b_vals`` have shape (Q, m, p) with m the multiplicity and p the
    auxiliary dimension; ``weights`` are the quadrature weights attached to
    ``lam``.  ``c_fun(k)``, when available, is the analytic continuation of
    ``A(lam)* B(lam)`` expressed in the momentum variable, used for sheet-two
    evaluation and accurate boundary values.
    """

    lam: np.ndarray
    weights: np.ndarray
    a_vals: np.ndarray
    b_vals: np.ndarray
    c_fun: object = None
    tail_bound: float = 0.0
    _cross: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.a_vals = np.asarray(self.a_vals, dtype=complex)
        self.b_vals = np.asarray(self.b_vals, dtype=complex)
        if self.a_vals.shape != self.b_vals.shape or self.a_vals.shape[0] != self.lam.size:
            raise ValueError("form factor arrays must share shape (Q, m, p)")
        # A(lam)* B(lam) on the grid, shape (Q, p, p)
        self._cross = np.einsum("qmi,qmj->qij", np.conj(self.a_vals), self.b_vals)

    @property
    def aux_dim(self) -> int:
        return self.a_vals.shape[2]


def _gl_panels(k_start: float, k_stop: float, first: float = 0.05, grow: float = 1.6, n_gl: int = 16):
    """Geometrically growing Gauss-Legendre panels on a momentum interval."""
    xs, ws = np.polynomial.legendre.leggauss(n_gl)
    nodes, weights = [], []
    lo, width = k_start, first
    while lo < k_stop:
        hi = min(lo + width, k_stop)
        nodes.append((hi - lo) / 2 * xs + (hi + lo) / 2)
        weights.append((hi - lo) / 2 * ws)
        lo = hi
        width *= grow
    return np.concatenate(nodes), np.concatenate(weights)


def rankone_trace_data(a: float, k_max: float = 2000.0) -> TraceClassData:
    """Rank-one reduction: scalar form factors ``sqrt(2/pi) lam^{1/4}/(lam+1)``.

    Quadrature nodes come from geometric Gauss-Legendre panels in the momentum
    variable, which removes the square-root endpoint behaviour at zero energy.
    """
    if a == 0:
        raise ValueError("coupling a must be nonzero")
    k, wk = _gl_panels(0.0, k_max)
    lam = k**2
    w = 2 * k * wk
    e = np.sqrt(2 / np.pi) * lam**0.25 / (lam + 1)
    a_vals = e.reshape(-1, 1, 1).astype(complex)
    b_vals = (a * e).reshape(-1, 1, 1).astype(complex)

    def c_fun(kk):
        # continuation of A(lam)* B(lam) = a*(2/pi)*sqrt(lam)/(lam+1)^2
        kk = np.asarray(kk, dtype=complex)
        val = a * (2 / np.pi) * kk / (kk**2 + 1) ** 2
        return val.reshape(np.shape(kk) + (1, 1))

    tail = abs(a) * (2 / np.pi) / (3 * k_max**3)  # integral of |C| beyond the cutoff
    return TraceClassData(lam=lam, weights=w, a_vals=a_vals, b_vals=b_vals,
                          c_fun=c_fun, tail_bound=tail)


def trace_T(data: TraceClassData, z: complex, tail_tol: float = 1e-10) -> np.ndarray:
    """Quadrature of ``int A(lam)* B(lam) / (z - lam) dlam`` for z off the positive axis."""
    z = complex(z)
    if z.imag == 0 and z.real >= 0:
        raise ValueError("trace_T needs z off [0, inf); use trace_T_boundary for rims of R+")
    denom = z - data.lam
    t = np.einsum("q,qij->ij", data.weights / denom, data._cross)
    if data.tail_bound:
        dist = max(abs(z - data.lam[-1]), 1.0)
        if data.tail_bound / dist > tail_tol:
            warnings.warn("trace_T tail estimate exceeds tolerance; enlarge the grid")
    return t


def _jump_momentum(z: complex) -> complex:
    """Branch of the momentum entering the continuation jump term.

    Continuation across the positive axis keeps the principal square root;
    negative real arguments are resolved on the lower rim (sheet two).
    """
    z = complex(z)
    if z.imag == 0 and z.real < 0:
        return -1j * np.sqrt(-z)
    return complex(np.sqrt(z))


def trace_T_boundary(data: TraceClassData, mu: float, side: str, eps: float = 5e-3) -> np.ndarray:
    """Boundary value on the positive axis: principal value -/+ i*pi*A(mu)*B(mu).

    The principal value uses symmetric excision around ``mu`` in the momentum
    variable with one Richardson step in the excision radius (order eps^3).
    """
    mu = float(mu)
    if mu <= 0:
        raise ValueError("boundary values require mu > 0")
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    if data.c_fun is None:
        return _trace_boundary_sampled(data, mu, side)
    k0 = np.sqrt(mu)

    def excised(ec):
        k1, w1 = _gl_panels(0.0, k0 - ec, first=min(0.05, (k0 - ec) / 4 + 1e-12))
        k2, w2 = _gl_panels(k0 + ec, np.sqrt(data.lam[-1]), first=ec)
        k = np.concatenate([k1, k2])
        w = np.concatenate([w1, w2])
        c = data.c_fun(k)
        return np.einsum("q,qij->ij", w * 2 * k / (mu - k**2), c)

    pv = 2 * excised(eps / 2) - excised(eps)
    jump = 1j * np.pi * np.squeeze(data.c_fun(np.array([k0])), axis=0)
    return pv - jump if side == "+" else pv + jump


def _trace_boundary_sampled(data: TraceClassData, mu: float, side: str) -> np.ndarray:
    """Sample-grid principal value: skip nodes inside the excision, Richardson in it."""
    d = np.abs(data.lam - mu)
    base = max(np.median(np.diff(data.lam[np.argsort(np.abs(data.lam - mu))][:8])), 1e-6)

    def excised(ec):
        mask = d > ec
        return np.einsum(
            "q,qij->ij", (data.weights / (mu - data.lam))[mask], data._cross[mask]
        )

    pv = 2 * excised(4 * base) - excised(8 * base)
    idx = int(np.argmin(d))
    jump = 1j * np.pi * data._cross[idx]
    return pv - jump if side == "+" else pv + jump


def build_L(data: TraceClassData, z: complex, sheet: int = 1) -> tuple[np.ndarray, float]:
    """Resolvent-kernel matrix ``L`` on the chosen sheet and its smallest singular value.

    Sheet one is ``I - T(z)`` on the cut plane; sheet two adds the continuation
    jump ``+2*pi*i*C(z)`` below the axis (validated against the rank-one closed
    form) and ``-2*pi*i*C(z)`` above it.
    """
    z = complex(z)
    if sheet not in (1, 2):
        raise ValueError(f"sheet must be 1 or 2, got {sheet}")
    p = data.aux_dim
    eye = np.eye(p, dtype=complex)
    if z.imag == 0 and z.real >= 0:
        ell = eye - trace_T_boundary(data, z.real, "+" if sheet == 1 else "-")
    else:
        if sheet == 2 and data.c_fun is None:
            raise ValueError("sheet-two evaluation needs an analytic form-factor continuation")
        ell = eye - trace_T(data, z)
        if sheet == 2:
            k = _jump_momentum(z)
            c = np.squeeze(data.c_fun(np.array([k])), axis=0)
            ell = ell + (2j * np.pi * c if z.imag <= 0 else -2j * np.pi * c)
    smin = float(np.linalg.svd(ell, compute_uv=False)[-1])
    return ell, smin


class TraceClassModel(SMatrixModel):
    """Scattering matrix assembled from trace-class form-factor data.

    CSV-loaded data supports sheet-one resolvent operations and boundary
    values by quadrature; full two-sheet evaluation requires the analytic
    form-factor continuation (``c_fun``) that the built-in reductions provide.
    """

    sheet_count = 2

    def __init__(self, data: TraceClassData, name: str = "traceclass"):
        self.data = data
        self.dim_k = data.a_vals.shape[1]
        self.name = name

    def eval(self, z, sheet: int = 1):
        z = complex(np.asarray(z).flat[0]) if np.ndim(z) else complex(z)
        self._check_sheet(z, sheet)
        if z.imag == 0 and z.real > 0:
            return self._boundary_point(z.real, "+" if sheet == 1 else "-")
        raise NotImplementedError(
            "off-axis S values for trace-class data are defined through build_L; "
            "use the dedicated models for closed-form continuation"
        )

    def _boundary_point(self, mu: float, side: str):
        ell = np.eye(self.data.aux_dim, dtype=complex) - trace_T_boundary(self.data, mu, side)
        idx = int(np.argmin(np.abs(self.data.lam - mu)))
        a = self.data.a_vals[idx]
        b = self.data.b_vals[idx]
        return np.eye(self.dim_k, dtype=complex) - 2j * np.pi * b @ np.linalg.solve(ell, a.conj().T)

    def pole_condition(self, z, sheet: int = 1):
        ell, _ = build_L(self.data, z, sheet)
        return complex(np.linalg.det(ell))


# ---------------------------------------------------------------------------
# model construction and data files


def load_trace_csv(path) -> TraceClassData:
    """Read form factors from CSV with header ``lambda, re_a_i_j, im_a_i_j, re_b_i_j, im_b_i_j``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError("empty form-factor file")
    header = [h.strip().lower() for h in rows[0]]
    if header[0] not in ("lambda", "lam"):
        raise ValueError("first column must be the energy 'lambda' (header row mandatory)")
    shape_ids = []
    for name in header[1:]:
        parts = name.split("_")
        if len(parts) != 4 or parts[0] not in ("re", "im") or parts[1] not in ("a", "b"):
            raise ValueError(f"unrecognized form-factor column {name!r}")
        shape_ids.append((int(parts[2]), int(parts[3])))
    m = max(i for i, _ in shape_ids) + 1
    p = max(j for _, j in shape_ids) + 1
    body = np.array([[float(v) for v in row] for row in rows[1:] if row])
    lam = body[:, 0]
    if np.any(np.diff(lam) <= 0) or lam[0] < 0:
        raise ValueError("energies must be positive and strictly increasing")
    a_vals = np.zeros((lam.size, m, p), dtype=complex)
    b_vals = np.zeros((lam.size, m, p), dtype=complex)
    for col, name in enumerate(header[1:], start=1):
        parts = name.split("_")
        i, j = int(parts[2]), int(parts[3])
        target = a_vals if parts[1] == "a" else b_vals
        target[:, i, j] += body[:, col] * (1 if parts[0] == "re" else 1j)
    w = np.gradient(lam)
    tail = float(np.linalg.norm(a_vals[-1]) * np.linalg.norm(b_vals[-1]))
    return TraceClassData(lam=lam, weights=w, a_vals=a_vals, b_vals=b_vals, tail_bound=tail)


def model_from_spec(spec) -> SMatrixModel:
    """Build a model from a parsed description ``{"model": name, ...}``."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "model" not in spec:
        raise ValueError("model description must be a mapping with a 'model' key")
    kind = spec["model"]
    if kind == "example1":
        return example1()
    if kind == "rankone":
        if "a" not in spec:
            raise ValueError("rankone needs the coupling 'a'")
        return RankOneModel(float(spec["a"]))
    if kind == "squarewell":
        if "v0" not in spec or "radius" not in spec:
            raise ValueError("squarewell needs 'v0' and 'radius'")
        return SquareWellModel(float(spec["v0"]), float(spec["radius"]))
    if kind == "traceclass":
        if "file" not in spec:
            raise ValueError("traceclass needs a form-factor 'file'")
        return TraceClassModel(load_trace_csv(spec["file"]))
    if kind == "rational":
        poles = [complex(p[0], p[1]) for p in spec.get("poles", [])]
        return RationalModel(poles)
    raise ValueError(f"unknown model {kind!r}")
