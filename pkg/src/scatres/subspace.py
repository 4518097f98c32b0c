"""Invariant subspaces of the characteristic semigroup determined by the
scattering matrix: the constrained family N, its image M = S*N, the admissible
complement T, the restricted decay semigroup and its generator, decaying
eigenvectors, the constructive resolvent, and survival-probability curves.

All subspace computations run in the truncation spanned by the rational basis;
the working dimension is the requested basis size plus the total constraint
order, so the complement has exactly the dimension the constraints carve out.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .hardy import (
    Grid,
    GridFunction,
    cauchy_eval,
    mt_coefficients_grid,
    mt_expand,
    mt_point_eval,
    mt_synthesize,
    norm,
)
from .semigroup import generator_matrix, semigroup_matrix
from .smatrix import SMatrixModel

__all__ = [
    "SubspaceBasis",
    "build_N_basis",
    "build_M_and_T",
    "gamov",
    "gamov_coefficients",
    "restricted_apply",
    "resolve_B",
    "resolvent_residual",
    "DecayCurve",
    "transition_curve",
    "b_matrix",
    "decay_curve_to_csv",
    "basis_diagnostics",
]

N_THETA = 2**16


@dataclass
class SubspaceBasis:
    """Orthonormal family spanning a discretized invariant subspace.

    ``coefs`` has shape (D, r): columns are coefficient vectors with respect to
    the rational basis, orthonormal in the exact inner product of the
    truncation.  ``members`` are the sampled grid functions.
    """

    role: str
    grid: Grid
    coefs: np.ndarray
    members: list
    model: SMatrixModel
    params: dict
    diagnostics: dict

    @property
    def dim(self) -> int:
        return self.coefs.shape[1]

    @property
    def working_dim(self) -> int:
        return self.coefs.shape[0]


def _require_scalar(model: SMatrixModel):
    if model.dim_k != 1:
        raise NotImplementedError("subspace construction is implemented for multiplicity one")


def _phi_callable(j: int):
    return lambda lam: (1 / np.sqrt(np.pi)) * (lam - 1j) ** j / (lam + 1j) ** (j + 1)


def build_N_basis(model: SMatrixModel, n: int, mode: str, grid: Grid,
                  n_theta: int = N_THETA) -> SubspaceBasis:
    """Constrained subspace inside the working truncation.

    ``mode='upper_poles'`` enforces vanishing (to the pole order) at the
    upper-half-plane poles through the multiplier
    ``prod((lam - xi_j)/(lam + i))^{g_j}``; ``mode='rim_poles'`` enforces
    vanishing at the negative-axis poles of the upper boundary values through
    ``p(lam)/(lam + i)^g`` with ``p`` the monic polynomial over the rim poles.
    With no constraints the result is the full truncated basis.
    """
    _require_scalar(model)
    if n < 1:
        raise ValueError("basis size must be positive")
    if mode == "upper_poles":
        data = model.upper_half_poles()
        factors = [(complex(xi), int(g)) for xi, g in data]
    elif mode == "rim_poles":
        data = model.upper_rim_poles()
        if data is None:
            raise ValueError(f"model {model.name} provides no rim pole data")
        factors = [(complex(pos), int(g)) for pos, g in data]
        if any(pos.real >= 0 for pos, _ in factors):
            raise ValueError("rim poles must sit on the negative axis")
    else:
        raise ValueError(f"mode must be 'upper_poles' or 'rim_poles', got {mode!r}")
    g_total = sum(g for _, g in factors)

    def multiplier(lam):
        out = np.ones_like(lam, dtype=complex)
        for pos, g in factors:
            out = out * ((lam - pos) / (lam + 1j)) ** g
        return out

    d_work = n + g_total
    cols = np.empty((d_work, n), dtype=complex)
    for j in range(n):
        phi_j = _phi_callable(j)
        cols[:, j] = mt_expand(lambda lam: multiplier(lam) * phi_j(lam), d_work, n_theta)
    q, _ = np.linalg.qr(cols)
    members = [mt_synthesize(q[:, i], grid) for i in range(n)]
    return SubspaceBasis(
        role="N",
        grid=grid,
        coefs=q,
        members=members,
        model=model,
        params={"n": n, "mode": mode, "constraints": factors, "order": g_total},
        diagnostics={"working_dim": d_work},
    )


def _eval_on_circle(coefs: np.ndarray, n_theta: int) -> np.ndarray:
    """Values of ``sum_k c_k e^{i k theta}`` on the offset circle grid; (NT, r)."""
    d, r = coefs.shape
    padded = np.zeros((n_theta, r), dtype=complex)
    k = np.arange(d)
    padded[:d] = coefs * np.exp(1j * np.pi * k / n_theta)[:, None]
    return n_theta * np.fft.ifft(padded, axis=0)


def build_M_and_T(model: SMatrixModel, n_basis: SubspaceBasis, cutoff: float = 1e-6,
                  n_theta: int = N_THETA) -> tuple[SubspaceBasis, SubspaceBasis]:
    """Image subspace ``M = S*N`` and its orthogonal complement T.

    The boundary operator acts as a pointwise multiplier on the circle; member
    images are re-expanded over the truncation by FFT, orthonormalized with a
    rank-revealing SVD, and T is the complementary frame.  Products stay
    bounded at rim poles because the N members vanish there.
    """
    _require_scalar(model)
    if n_basis.role != "N":
        raise ValueError("build_M_and_T expects the constrained basis")
    theta = 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
    lam = -1.0 / np.tan(theta / 2)
    s_vals = model.boundary(lam, "+")[:, 0, 0]
    v_vals = _eval_on_circle(n_basis.coefs, n_theta)
    w = s_vals[:, None] * v_vals
    coef = np.fft.fft(w, axis=0) / n_theta
    d_work = n_basis.working_dim
    k = np.arange(d_work)
    m_cols = np.exp(-1j * np.pi * k / n_theta)[:, None] * coef[:d_work]
    # continuum lower-Hardy leakage of the images, from the negative indices
    q_neg = np.arange(1, min(d_work, n_theta - d_work))
    neg = np.exp(1j * np.pi * q_neg / n_theta)[:, None] * coef[n_theta - q_neg]
    leakage = np.linalg.norm(neg, axis=0) / np.maximum(np.linalg.norm(m_cols, axis=0), 1e-300)

    u, s, _ = np.linalg.svd(m_cols, full_matrices=True)
    rank = int(np.sum(s >= cutoff * s[0])) if s.size else 0
    m_coefs = u[:, :rank]
    t_coefs = u[:, rank:]
    diag = {
        "singular_values": s.tolist(),
        "rank": rank,
        "dim_T": d_work - rank,
        "hardy_leakage": leakage.tolist(),
        "cutoff": cutoff,
    }
    m_basis = SubspaceBasis(
        role="M", grid=n_basis.grid, coefs=m_coefs,
        members=[mt_synthesize(m_coefs[:, i], n_basis.grid) for i in range(rank)],
        model=model, params=dict(n_basis.params), diagnostics=diag,
    )
    t_basis = SubspaceBasis(
        role="T", grid=n_basis.grid, coefs=t_coefs,
        members=[mt_synthesize(t_coefs[:, i], n_basis.grid) for i in range(t_coefs.shape[1])],
        model=model, params=dict(n_basis.params), diagnostics=diag,
    )
    return m_basis, t_basis


def gamov(zeta: complex, k, grid: Grid) -> GridFunction:
    """Decaying eigenvector ``k/(lam - zeta)`` attached to a lower-half-plane pole."""
    zeta = complex(zeta)
    if zeta.imag >= 0:
        raise ValueError("decaying eigenvectors require Im zeta < 0")
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    if np.linalg.norm(k) == 0:
        raise ValueError("kernel vector must be nonzero")
    lam = grid.points()
    return GridFunction(grid, k[None, :] / (lam - zeta)[:, None])


def gamov_coefficients(zeta: complex, count: int) -> np.ndarray:
    """Exact rational-basis coefficients of ``1/(lam - zeta)`` for Im zeta < 0."""
    zeta = complex(zeta)
    if zeta.imag >= 0:
        raise ValueError("requires Im zeta < 0")
    j = np.arange(count)
    return -2j * np.sqrt(np.pi) * (zeta + 1j) ** j / (zeta - 1j) ** (j + 1)


def _project_coefs(t_basis: SubspaceBasis, f) -> tuple[np.ndarray, float]:
    """Coefficients of f in the working truncation plus its norm surrogate."""
    if isinstance(f, GridFunction):
        c = mt_coefficients_grid(f, t_basis.working_dim)[:, 0]
        return c, norm(f)
    c = np.asarray(f, dtype=complex)
    if c.shape[0] != t_basis.working_dim:
        raise ValueError("coefficient vector does not match the working truncation")
    return c, float(np.linalg.norm(c))


def _continuation_below(t_basis: SubspaceBasis, g: GridFunction, z: complex) -> complex:
    """Value of the continued admissible-subspace element below the axis.

    Uses the factorization through the scattering matrix: the adjoint boundary
    values of g split into a lower-Hardy part (evaluated by a stable Cauchy
    integral at z) and, for models with upper-half-plane poles, a closed-form
    deficiency part; rim poles are handled by the polynomial weight that makes
    the adjoint image square integrable.  This avoids continuing the truncated
    expansion itself, which loses a factor ``|t(z)|`` per basis order.
    """
    model = t_basis.model
    grid = t_basis.grid
    lam = grid.points()
    s_plus = model.boundary(lam, "+")[:, 0, 0]
    mode = t_basis.params.get("mode")
    constraints = t_basis.params.get("constraints", [])
    if mode == "rim_poles":
        g_ord = sum(gj for _, gj in constraints)
        wgt = np.ones_like(lam, dtype=complex)
        for pos, gj in constraints:
            wgt = wgt * (lam - pos) ** gj
        wgt = wgt / (lam - 1j) ** g_ord
        h_minus = GridFunction(grid, wgt[:, None] * np.conj(s_plus)[:, None] * g.samples)
        val = complex(cauchy_eval(h_minus, z)[0])
        pz = np.prod([(z - pos) ** gj for pos, gj in constraints]) if constraints else 1.0
        s_at = complex(model.eval_physical(z)[0, 0])
        return complex((z - 1j) ** g_ord / pz * s_at * val)
    # upper-pole case: subtract the deficiency content before the Cauchy step
    w = GridFunction(grid, np.conj(s_plus)[:, None] * g.samples)
    val = complex(cauchy_eval(w, z)[0])
    fam_vals, fam_at_z = [], []
    for xi, gj in constraints:
        for order in range(1, gj + 1):
            fam_vals.append(1.0 / (lam - np.conj(xi)) ** order)
            fam_at_z.append(1.0 / (z - np.conj(xi)) ** order)
    if fam_vals:
        fam = np.stack(fam_vals, axis=1)
        gram = grid.spacing * (fam.conj().T @ fam)
        rhs = grid.spacing * (fam.conj().T @ w.samples[:, 0])
        coef = np.linalg.solve(gram, rhs)
        val += complex(coef @ np.asarray(fam_at_z))
    s_at = complex(model.eval_physical(z)[0, 0])
    return s_at * val


def restricted_apply(t_basis: SubspaceBasis, f, t: float) -> GridFunction:
    """Decay semigroup on the admissible subspace: project, evolve, project.

    The evolution uses the exact truncation matrix of the characteristic
    semigroup, so the restriction is contractive and satisfies the semigroup
    law to machine precision; inputs essentially orthogonal to the subspace
    are rejected.
    """
    if t < 0:
        raise ValueError("restricted_apply requires t >= 0")
    if t_basis.role != "T":
        raise ValueError("restricted_apply expects the admissible basis")
    c, f_norm = _project_coefs(t_basis, f)
    ct = t_basis.coefs.conj().T @ c
    if np.linalg.norm(ct) < 0.5 * f_norm:
        raise RuntimeError(
            "input is essentially orthogonal to the admissible subspace "
            f"(projection keeps {np.linalg.norm(ct) / max(f_norm, 1e-300):.1%})"
        )
    cmat = semigroup_matrix(t, t_basis.working_dim)
    evolved = t_basis.coefs @ (t_basis.coefs.conj().T @ (cmat @ (t_basis.coefs @ ct)))
    return mt_synthesize(evolved, t_basis.grid)


def resolve_B(t_basis: SubspaceBasis, g, z: complex, resonances=None,
              verify_tol: float = 5e-2) -> GridFunction:
    """Constructive resolvent of the restricted generator at a regular point.

    Builds ``f = (g - k0)/(lam - z)`` with ``k0`` the continuation of ``g``
    evaluated at ``z`` through the truncation coefficients, then verifies the
    generator identity by recovering the offset of ``f`` independently.
    """
    z = complex(z)
    if resonances is not None:
        for r in resonances:
            zeta = r.zeta if hasattr(r, "zeta") else complex(r)
            if abs(z - zeta) < 1e-6:
                raise ValueError(f"{z} is within 1e-6 of the located pole {zeta}")
    c, _ = _project_coefs(t_basis, g)
    g_grid = g if isinstance(g, GridFunction) else mt_synthesize(c, t_basis.grid)
    g_samples = g_grid.samples
    lam = t_basis.grid.points()
    if z.imag == 0:
        # real-axis recipe: k0 is the boundary value of g at the point itself,
        # read off the samples by local cubic interpolation
        j = int(np.searchsorted(lam, z.real))
        j = min(max(j, 2), lam.size - 2)
        stencil = slice(j - 2, j + 2)
        k0 = complex(
            np.polynomial.polynomial.polyfit(lam[stencil], g_samples[stencil, 0], 3)
            @ z.real ** np.arange(4)
        )
    else:
        k0 = _continuation_below(t_basis, g_grid, z)
    denom = lam - z
    hit = np.abs(denom) < 1e-9 * t_basis.grid.spacing
    denom = np.where(hit, 1.0, denom)
    f_samples = (g_samples - k0) / denom[:, None]
    if hit.any():
        j = int(np.nonzero(hit)[0][0])
        h = 1e-6
        f_samples[j, 0] = (mt_point_eval(c, z + h)[0] - mt_point_eval(c, z - h)[0]) / (2 * h)
    f = GridFunction(t_basis.grid, f_samples)
    residual = resolvent_residual(t_basis, f, g_grid, z)
    if residual > verify_tol:
        raise RuntimeError(f"resolvent verification failed: residual {residual:.3e}")
    return f


def resolvent_residual(t_basis: SubspaceBasis, f: GridFunction, g: GridFunction,
                       z: complex) -> float:
    """Round-trip defect of the restricted generator: ``||(B - z) f - g|| / ||g||``.

    The generator acts through its exact truncation matrix compressed to the
    admissible subspace; mass of ``f`` outside the subspace is penalized, so a
    wrong continuation constant cannot hide in the unprojected identity.
    """
    cf, _ = _project_coefs(t_basis, f)
    cg, _ = _project_coefs(t_basis, g)
    u = t_basis.coefs
    f_t = u.conj().T @ cf
    g_t = u.conj().T @ cg
    bt = u.conj().T @ generator_matrix(t_basis.working_dim) @ u
    g_norm = max(float(np.linalg.norm(cg)), 1e-300)
    core = float(np.linalg.norm(bt @ f_t - complex(z) * f_t - g_t)) / g_norm
    off = float(np.linalg.norm(cf - u @ f_t)) * (1 + abs(complex(z))) / g_norm
    return core + off


@dataclass
class DecayCurve:
    times: np.ndarray
    overlaps: np.ndarray
    norms: np.ndarray
    reference: np.ndarray | None = None


def transition_curve(f, times, mode: str, t_basis: SubspaceBasis | None = None,
                     isometry=None, zeta: complex | None = None) -> DecayCurve:
    """Survival amplitudes ``<f, U(t) f>`` under the decay or unitary evolution.

    Decay mode evolves with the restricted semigroup in the truncation (exact
    coefficients are used when ``f`` is given as a coefficient vector or when
    ``zeta`` tags it as a decaying eigenvector); unitary mode evolves the
    half-line representative obtained through the polar isometry.  When
    ``zeta`` is supplied the curve carries ``exp(-t |Im zeta|) ||f||^2`` as the
    reference column.
    """
    times = np.asarray(list(times), dtype=float)
    if times.size == 0:
        raise ValueError("times must be non-empty")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and non-decreasing")
    if mode == "decay":
        if t_basis is None:
            raise ValueError("decay mode needs the admissible basis")
        if isinstance(f, GridFunction) and zeta is not None:
            c = gamov_coefficients(zeta, t_basis.working_dim)
            c = c * (norm(f) / np.linalg.norm(c))
        else:
            c, _ = _project_coefs(t_basis, f)
        u = t_basis.coefs
        ct = u.conj().T @ c
        overlaps, norms = [], []
        for t in times:
            cmat = semigroup_matrix(t, t_basis.working_dim)
            ev = u.conj().T @ (cmat @ (u @ ct))
            overlaps.append(complex(np.vdot(ct, ev)))
            norms.append(float(np.linalg.norm(ev)))
        fnorm2 = float(np.vdot(c, c).real)
    elif mode == "unitary":
        if isometry is None:
            raise ValueError("unitary mode needs the polar isometry")
        rf = isometry.forward(f)
        lam = rf.grid.points()
        overlaps, norms = [], []
        for t in times:
            evolved = np.exp(-1j * t * lam)[:, None] * rf.samples
            overlaps.append(complex(rf.grid.spacing * np.sum(np.conj(rf.samples) * evolved)))
            norms.append(float(np.sqrt(rf.grid.spacing * np.sum(np.abs(evolved) ** 2))))
        fnorm2 = norm(rf) ** 2
    else:
        raise ValueError(f"mode must be 'decay' or 'unitary', got {mode!r}")
    reference = None
    if zeta is not None:
        reference = np.exp(-times * abs(complex(zeta).imag)) * fnorm2
    return DecayCurve(times=times, overlaps=np.asarray(overlaps),
                      norms=np.asarray(norms), reference=reference)


def b_matrix(t_basis: SubspaceBasis) -> np.ndarray:
    """Exact matrix of the restricted generator on the admissible basis."""
    full = generator_matrix(t_basis.working_dim)
    return t_basis.coefs.conj().T @ full @ t_basis.coefs


def decay_curve_to_csv(curve: DecayCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re_overlap", "im_overlap", "abs_overlap", "reference"])
        for i, t in enumerate(curve.times):
            ref = "" if curve.reference is None else format(curve.reference[i], ".12g")
            writer.writerow(
                [
                    format(t, ".12g"),
                    format(curve.overlaps[i].real, ".12g"),
                    format(curve.overlaps[i].imag, ".12g"),
                    format(abs(curve.overlaps[i]), ".12g"),
                    ref,
                ]
            )


def basis_diagnostics(basis: SubspaceBasis) -> dict:
    return {
        "role": basis.role,
        "model": basis.model.name,
        "dim": basis.dim,
        "working_dim": basis.working_dim,
        "params": {
            "n": basis.params.get("n"),
            "mode": basis.params.get("mode"),
            "constraints": [
                [float(np.real(pos)), float(np.imag(pos)), int(g)]
                for pos, g in basis.params.get("constraints", [])
            ],
        },
        "diagnostics": basis.diagnostics,
    }
