"""Group cohomology H^i(G, M) by two independent routes, and group extensions.

* Resolution route: ``Hom_G(P_n, M) = M^{b_n}`` for a minimal free
  resolution, differentials are precomposition with the boundaries.
* Bar route (degree 2 only): normalized inhomogeneous cochains, which also
  yields explicit cocycle representatives for building extension groups.

Extension groups use the element ``(m, g)`` at index ``idx(m)*|G| + g`` where
``idx`` enumerates F_p^dim lexicographically (first coordinate most
significant), and multiply as ``(m1,g1)(m2,g2) = (m1 + g1.m2 + f(g1,g2), g1 g2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import fp_linalg as la
from .gmodule import GModule, fixed_submodule, regular_module, same_group, trivial_module
from .heller import MinimalResolution, minimal_resolution, omega
from .pgroup import MAX_ORDER, PGroup, minimal_generating_set

BAR_COLUMN_GUARD = 100_000


class CohomologyError(ValueError):
    pass


@dataclass
class CohomologyResult:
    group: PGroup = field(repr=False)
    coefficients: GModule = field(repr=False)
    degree: int
    dimension: int
    route: str
    cocycle_basis: Optional[list[np.ndarray]] = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# resolution route


def cochain_differential(res: MinimalResolution, M: GModule, n: int) -> np.ndarray:
    """Matrix of ``delta^n: M^{b_n} -> M^{b_{n+1}}`` (phi -> phi o boundary_{n+1})."""
    G, p, m = res.group, M.p, M.dim
    bn, bn1 = res.ranks[n], res.ranks[n + 1]
    bd = res.boundary(n + 1).matrix                   # (bn*|G|) x (bn1*|G|)
    out = np.zeros((bn1 * m, bn * m), dtype=np.int64)
    for j in range(bn1):
        col = bd[:, j * G.order]                        # image of the j-th free generator
        for i in range(bn):
            coeffs = col[i * G.order:(i + 1) * G.order]
            if coeffs.any():
                block = np.tensordot(coeffs, M.rho, axes=1) % p
                out[j * m:(j + 1) * m, i * m:(i + 1) * m] = block
    return out


def cohomology_dim(G: PGroup, M: GModule, i: int,
                   resolution: Optional[MinimalResolution] = None) -> CohomologyResult:
    if i < 0:
        raise CohomologyError("negative cohomological degree")
    if not same_group(G, M.group):
        raise CohomologyError("coefficient module is over a different group")
    res = resolution if resolution is not None else minimal_resolution(G, i + 1)
    if res.length < i + 1:
        raise CohomologyError(f"degree {i} needs a resolution of length {i + 1}")
    p = G.p
    d_i = cochain_differential(res, M, i)
    ker = res.ranks[i] * M.dim - la.rank_mod(d_i, p)
    img = la.rank_mod(cochain_differential(res, M, i - 1), p) if i > 0 else 0
    return CohomologyResult(G, M, i, ker - img, "minimal_resolution")


# ---------------------------------------------------------------------------
# bar route



def bar_differentials(G: PGroup, M: GModule) -> tuple[np.ndarray, np.ndarray]:
    """``delta^1: C^1 -> C^2`` and ``delta^2: C^2 -> C^3`` on normalized cochains."""
    n, m, p, T = G.order, M.dim, G.p, G.table
    rho = M.rho
    eye = la.identity(m)
    k1 = n - 1
    d1 = np.zeros((k1 * k1 * m, k1 * m), dtype=np.int64)
    for g in range(1, n):
        for h in range(1, n):
            r = ((g - 1) * k1 + (h - 1)) * m
            # (delta phi)(g, h) = g.phi(h) - phi(gh) + phi(g)
            d1[r:r + m, (h - 1) * m:h * m] += rho[g]
            gh = T[g, h]
            if gh:
                d1[r:r + m, (gh - 1) * m:gh * m] -= eye
            d1[r:r + m, (g - 1) * m:g * m] += eye
    d2 = np.zeros((k1 ** 3 * m, k1 * k1 * m), dtype=np.int64)
    for g in range(1, n):
        for h in range(1, n):
            gh = T[g, h]
            for k in range(1, n):
                hk = T[h, k]
                r = (((g - 1) * k1 + (h - 1)) * k1 + (k - 1)) * m
                # (delta f)(g,h,k) = g.f(h,k) - f(gh,k) + f(g,hk) - f(g,h)
                c = ((h - 1) * k1 + (k - 1)) * m
                d2[r:r + m, c:c + m] += rho[g]
                if gh:
                    c = ((gh - 1) * k1 + (k - 1)) * m
                    d2[r:r + m, c:c + m] -= eye
                if hk:
                    c = ((g - 1) * k1 + (hk - 1)) * m
                    d2[r:r + m, c:c + m] += eye
                c = ((g - 1) * k1 + (h - 1)) * m
                d2[r:r + m, c:c + m] -= eye
    return d1 % p, d2 % p


def cochain_to_table(G: PGroup, M: GModule, vec: np.ndarray) -> np.ndarray:
    """Normalized 2-cochain vector -> full ``|G| x |G| x dim`` table."""
    n, m = G.order, M.dim
    f = np.zeros((n, n, m), dtype=np.int64)
    f[1:, 1:, :] = np.asarray(vec, dtype=np.int64).reshape(n - 1, n - 1, m)
    return f


def bar_cohomology_2(G: PGroup, M: GModule, force: bool = False) -> CohomologyResult:
    if not same_group(G, M.group):
        raise CohomologyError("coefficient module is over a different group")
    cols = (G.order - 1) ** 2 * M.dim
    if cols > BAR_COLUMN_GUARD and not force:
        raise CohomologyError(f"bar complex has {cols} columns (guard {BAR_COLUMN_GUARD})")
    p = G.p
    d1, d2 = bar_differentials(G, M)
    cocycles = la.nullspace(d2, p)
    boundaries = la.row_basis(d1.T, p)
    dim = cocycles.shape[0] - boundaries.shape[0]
    # representatives: extend a basis of B^2 by cocycles
    reps = []
    span = boundaries
    for z in cocycles:
        if len(reps) == dim:
            break
        trial = np.vstack([span, z[None, :]])
        if la.rank_mod(trial, p) > span.shape[0]:
            span = la.row_basis(trial, p)
            reps.append(cochain_to_table(G, M, z))
    return CohomologyResult(G, M, 2, dim, "bar", reps)


def is_cocycle(G: PGroup, M: GModule, f: np.ndarray) -> bool:
    f = np.asarray(f, dtype=np.int64) % G.p
    n = G.order
    if f.shape != (n, n, M.dim):
        return False
    if np.any(f[0]) or np.any(f[:, 0]):
        return False
    T = G.table
    g, h, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    act = np.einsum("gab,hkb->ghka", M.rho, f)
    val = act - f[T[g, h], k] + f[g, T[h, k]] - f[g, h]
    return not np.any(val % G.p)


def is_coboundary(G: PGroup, M: GModule, f: np.ndarray) -> bool:
    d1, _ = bar_differentials(G, M)
    vec = np.asarray(f, dtype=np.int64)[1:, 1:, :].reshape(-1)
    return la.solve_mod(d1, vec, G.p) is not None


# ---------------------------------------------------------------------------
# the chain H^0(F_p) = H^1(Omega^1) = H^2(Omega^2) used for the extension problem


def chain_of_isos_check(G: PGroup) -> dict:
    res = minimal_resolution(G, 3)
    F = trivial_module(G)
    om1 = omega(F, 1)
    om2 = omega(F, 2)
    h0 = cohomology_dim(G, F, 0, res).dimension
    h1 = cohomology_dim(G, om1, 1, res).dimension
    h2 = cohomology_dim(G, om2, 2, res).dimension
    report = {
        "H0(G,Fp)": h0,
        "H1(G,Omega1)": h1,
        "H2(G,Omega2)": h2,
        "fixed(Omega1)": fixed_submodule(om1).dim,
        "fixed(Fp[G])": fixed_submodule(regular_module(G)).dim,
    }
    cols = (G.order - 1) ** 2 * om2.dim
    if cols <= BAR_COLUMN_GUARD:
        report["H2(G,Omega2) bar"] = bar_cohomology_2(G, om2).dimension
    report["ok"] = all(v == 1 for k, v in report.items())
    return report


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True, eq=False)
class ExtensionGroup:
    base: PGroup
    kernel_module: GModule
    cocycle: np.ndarray = field(repr=False)
    result: PGroup = field(repr=False)

    @property
    def kernel_elements(self) -> list[int]:
        n = self.base.order
        return [i * n for i in range(self.result.order // n)]

    def kernel_is_normal(self) -> bool:
        return self.result.is_normal(self.kernel_elements)

    def quotient_matches_base(self) -> bool:
        n = self.base.order
        return bool(np.array_equal(self.result.table % n,
                                   np.tile(self.base.table, (self.result.order // n,) * 2)))

    def kernel_is_module_group(self) -> bool:
        """The elements ``(m, 1)`` multiply like vectors under addition."""
        n, p, m = self.base.order, self.base.p, self.kernel_module.dim
        vecs = _all_vectors(p, m)
        sums = (vecs[:, None, :] + vecs[None, :, :]) % p
        expect = _vector_index(sums, p) * n
        ker = np.array(self.kernel_elements)
        return bool(np.array_equal(self.result.table[np.ix_(ker, ker)], expect))


def _all_vectors(p: int, m: int) -> np.ndarray:
    q = p ** m
    return np.array(np.unravel_index(np.arange(q), [p] * m)).T.reshape(q, m)


def _vector_index(vecs: np.ndarray, p: int) -> np.ndarray:
    m = vecs.shape[-1]
    weights = p ** np.arange(m - 1, -1, -1)
    return vecs @ weights


def extension_group(G: PGroup, M: GModule, cocycle: Union[np.ndarray, str] = "zero",
                    name: str = "", force: bool = False) -> ExtensionGroup:
    p, n, m = G.p, G.order, M.dim
    q = p ** m
    if q * n > MAX_ORDER and not force:
        raise CohomologyError(f"extension of order {q * n} exceeds guard {MAX_ORDER}")
    if isinstance(cocycle, str):
        if cocycle != "zero":
            raise CohomologyError(f"unknown cocycle {cocycle!r}")
        f = np.zeros((n, n, m), dtype=np.int64)
    else:
        f = np.asarray(cocycle, dtype=np.int64) % p
    if not is_cocycle(G, M, f):
        raise CohomologyError("not a normalized 2-cocycle")
    vecs = _all_vectors(p, m)                                   # (q, m)
    moved = np.einsum("gab,qb->gqa", M.rho, vecs)               # g . m2
    T = G.table
    table = np.empty((q * n, q * n), dtype=np.int64)
    for i1 in range(q):
        # rows (m1 = vecs[i1], g1) against all (m2, g2)
        s = vecs[i1][None, None, None, :] + moved[:, :, None, :] + f[:, None, :, :]
        idx = _vector_index(s % p, p)                           # (g1, i2, g2)
        prod = idx * n + T[:, None, :]
        table[i1 * n:(i1 + 1) * n, :] = prod.reshape(n, q * n)
    gens = minimal_generating_set(table, p)
    kind = "split" if not np.any(f) else "twisted"
    label = name or f"{M.label or 'M'} . {G.name} ({kind})"
    E = PGroup(p, table, tuple(gens), name=label, full_check=force)
    return ExtensionGroup(G, M, f, E)
