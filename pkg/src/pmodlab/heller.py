"""Minimal projective covers, Heller shifts and minimal free resolutions.

Over F_p[G] for a p-group every projective module is free, and a minimal
cover of ``M`` is the free module of rank ``dim M/rad M`` mapping its
generators onto lifts of a basis of the head.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp_linalg as la
from .gmodule import (
    GModule, GModuleMap, Submodule, dual, free_module, radical, regular_module,
    trivial_module,
)
from .pgroup import PGroup

MAX_RESOLUTION_LENGTH = 6
MAX_GROUP_ORDER = 128


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    target: GModule
    rank: int
    free: GModule
    cover: GModuleMap
    kernel: Submodule


def projective_cover(M: GModule) -> ProjectiveCover:
    G, p, n = M.group, M.p, M.dim
    rad = radical(M)
    piv = set(rad.pivots)
    # lifts of a head basis: standard vectors at the non-pivot columns of rad M
    lifts = [c for c in range(n) if c not in piv]
    t = len(lifts)
    P = free_module(G, t)
    cols = np.zeros((n, t * G.order), dtype=np.int64)
    for i, f in enumerate(lifts):
        cols[:, i * G.order:(i + 1) * G.order] = M.rho[:, :, f].T
    cover = GModuleMap(P, M, cols)
    kernel = (
        Submodule.from_vectors(P, la.nullspace(cols, p)) if t
        else Submodule.from_vectors(P, np.zeros((0, 0)))
    )
    return ProjectiveCover(M, t, P, cover, kernel)


def omega(M: GModule, n: int = 1) -> GModule:
    """Heller shift ``Omega^n(M)`` for any integer ``n``.

    Negative shifts dualise, shift and dualise back; ``Omega^0`` is
    ``Omega^-1(Omega^1(M))``, i.e. ``M`` with its free summands stripped.
    """
    if n == 0:
        return omega(omega(M, 1), -1)
    if n < 0:
        res = dual(omega(dual(M), -n))
        return GModule(res.group, res.gen_action, label=f"Omega^{n}({M.label})")
    cur = M
    for _ in range(n):
        cur = projective_cover(cur).kernel.as_module
    return GModule(cur.group, cur.gen_action, label=f"Omega^{n}({M.label})")


def augmentation_boundary(G: PGroup) -> np.ndarray:
    """Matrix of ``c_i -> sigma_i - 1`` from the free module of rank d(G) to F_p[G]."""
    n, d, p = G.order, len(G.generators), G.p
    D = np.zeros((n, d * n), dtype=np.int64)
    for i, s in enumerate(G.generators):
        for g in range(n):
            D[G.table[g, s], i * n + g] += 1
            D[g, i * n + g] -= 1
    return D % p


def omega2_via_partial(G: PGroup) -> tuple[GModule, Submodule]:
    """``ker(P_1 -> F_p[G])`` with ``c_i -> sigma_i - 1``, and its embedding into ``P_1``."""
    P1 = free_module(G, len(G.generators))
    boundary = GModuleMap(P1, regular_module(G), augmentation_boundary(G))
    K = boundary.kernel()
    mod = K.as_module
    return GModule(G, mod.gen_action, label="ker(partial)"), K


def has_free_summand(M: GModule) -> bool:
    """A module over a p-group has a free summand iff the norm element acts nonzero."""
    return M.dim > 0 and bool(np.any(M.norm_matrix))


@dataclass(frozen=True, eq=False)
class MinimalResolution:
    group: PGroup
    module: GModule
    ranks: tuple[int, ...]
    free_modules: tuple[GModule, ...] = field(repr=False)
    boundaries: tuple[GModuleMap, ...] = field(repr=False)   # boundaries[n-1]: P_n -> P_{n-1}
    augmentation: GModuleMap = field(repr=False)              # P_0 -> module

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, n: int) -> GModuleMap:
        return self.boundaries[n - 1]

    def check_exact(self) -> bool:
        p = self.group.p
        maps = [self.augmentation] + list(self.boundaries)
        for n in range(len(maps) - 1):
            ker = la.nullspace(maps[n].matrix, p) if maps[n].matrix.size else la.identity(maps[n].source.dim)
            img = la.row_basis(maps[n + 1].matrix.T, p)
            if ker.shape[0] != img.shape[0] or not la.in_row_space(ker, img, p):
                return False
        return True

    def check_minimal(self) -> bool:
        p = self.group.p
        for n, bd in enumerate(self.boundaries):
            rad = radical(self.free_modules[n])
            if not la.in_row_space(rad.basis, bd.matrix.T, p):
                return False
        return True


def minimal_resolution(G: PGroup, N: int, M: GModule | None = None, force: bool = False) -> MinimalResolution:
    """Iterated minimal covers: ``... -> P_1 -> P_0 -> M -> 0`` up to degree ``N``."""
    if N < 0:
        raise ValueError("resolution length must be nonnegative")
    if not force and (N > MAX_RESOLUTION_LENGTH or G.order > MAX_GROUP_ORDER):
        raise ValueError(f"resolution guard: N <= {MAX_RESOLUTION_LENGTH}, |G| <= {MAX_GROUP_ORDER}")
    M = M if M is not None else trivial_module(G)
    cov = projective_cover(M)
    frees = [cov.free]
    ranks = [cov.rank]
    bounds = []
    K = cov.kernel
    for _ in range(N):
        nxt = projective_cover(K.as_module)
        # P_n -> K -> P_{n-1}
        mat = la.matmul_mod(K.basis.T, nxt.cover.matrix, G.p) if K.dim else np.zeros(
            (frees[-1].dim, nxt.free.dim), dtype=np.int64)
        bounds.append(GModuleMap(nxt.free, frees[-1], mat))
        frees.append(nxt.free)
        ranks.append(nxt.rank)
        K = nxt.kernel
    return MinimalResolution(G, M, tuple(ranks), tuple(frees), tuple(bounds), cov.cover)


def omega_dimension_formula(G: PGroup) -> int:
    """``(d - 1)|G| + 1``, the dimension of the second syzygy of F_p."""
    return (len(G.generators) - 1) * G.order + 1
