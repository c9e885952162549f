"""Indecomposability via endomorphism scans, the structure-theorem bookkeeping
for J(K), and the explicit presentation of Omega^2(F_p) over C_p x C_p.

A module is indecomposable iff every endomorphism is nilpotent or invertible
(Fitting).  When ``p^dim End(M)`` is within budget every endomorphism is
checked, which certifies the verdict; otherwise a random sample is checked and
the verdict is only heuristic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fp_linalg as la
from .gmodule import (
    GModule, GModuleMap, ModuleError, Submodule, direct_sum, endomorphisms,
    fixed_submodule, free_module, quotient_module, radical, trivial_module,
    zero_intersection_by_fixed_points,
)
from .heller import has_free_summand, omega, omega2_via_partial, omega_dimension_formula
from .pgroup import PGroup, build_abelian

DEFAULT_BUDGET = 1 << 20
_BATCH = 8192


# ---------------------------------------------------------------------------
# Fitting decomposition


def fitting_split(M: GModule, f) -> Optional[tuple[Submodule, Submodule]]:
    """``M = ker f^N + im f^N`` when that is a nontrivial splitting, else ``None``."""
    if not isinstance(f, GModuleMap):
        f = GModuleMap(M, M, f)       # raises for non-equivariant input
    if f.source is not M and f.source != M:
        raise ModuleError("endomorphism of a different module")
    p, n = M.p, M.dim
    power = _matrix_power(f.matrix, max(n, 1), p)
    r = la.rank_mod(power, p)
    if r == 0 or r == n:
        return None
    ker = Submodule.from_vectors(M, la.nullspace(power, p))
    im = Submodule.from_vectors(M, power.T)
    return ker, im


def _matrix_power(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = la.identity(a.shape[0])
    base = a.copy()
    while e:
        if e & 1:
            result = la.matmul_mod(result, base, p)
        base = la.matmul_mod(base, base, p)
        e >>= 1
    return result


def _batch_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices over F_p (vectorized elimination)."""
    m = mats.astype(np.int64) % p
    B, nrow, ncol = m.shape
    inv = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
    row = np.zeros(B, dtype=np.int64)
    ar = np.arange(nrow)
    for c in range(ncol):
        valid = (m[:, :, c] != 0) & (ar[None, :] >= row[:, None])
        has = valid.any(axis=1)
        bi = np.flatnonzero(has)
        if bi.size == 0:
            continue
        pr = np.argmax(valid[bi], axis=1)
        r0 = row[bi]
        tmp = m[bi, r0].copy()
        m[bi, r0] = m[bi, pr]
        m[bi, pr] = tmp
        m[bi, r0] = (m[bi, r0] * inv[m[bi, r0, c]][:, None]) % p
        factors = m[bi, :, c].copy()
        factors[np.arange(bi.size), r0] = 0
        m[bi] = (m[bi] - factors[:, :, None] * m[bi, r0][:, None, :]) % p
        row[bi] += 1
    return row


def _batch_power(mats: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.broadcast_to(la.identity(mats.shape[1]), mats.shape).copy()
    base = mats.copy()
    while e:
        if e & 1:
            out = la.matmul_mod(out, base, p)
        base = la.matmul_mod(base, base, p)
        e >>= 1
    return out


def _first_splitting(mats: np.ndarray, p: int) -> Optional[int]:
    """Index of the first matrix that is neither nilpotent nor invertible."""
    n = mats.shape[1]
    ranks = _batch_rank(_batch_power(mats, n, p), p)
    bad = np.flatnonzero((ranks > 0) & (ranks < n))
    return int(bad[0]) if bad.size else None


# ---------------------------------------------------------------------------
# indecomposability


@dataclass
class DecompositionReport:
    module: GModule = field(repr=False)
    summands: list[Submodule] = field(repr=False)
    certificate: str                  # indecomposable_certified | indecomposable_heuristic | split | zero
    witness: Optional[GModuleMap] = field(default=None, repr=False)
    end_dim: int = 0
    scanned: int = 0
    seed: Optional[int] = None

    @property
    def indecomposable(self) -> bool:
        return self.certificate.startswith("indecomposable")

    def check(self) -> bool:
        M = self.module
        if sum(s.dim for s in self.summands) != M.dim:
            return False
        if not all(s.is_closed() for s in self.summands):
            return False
        for u, v in itertools.combinations(self.summands, 2):
            # fixed-point pre-test first, then the exact intersection
            if not zero_intersection_by_fixed_points(u, v) or u.intersect(v).dim:
                return False
        return True


def _split_report(M, f_matrix, end_dim, scanned, seed=None) -> DecompositionReport:
    f = GModuleMap(M, M, f_matrix)
    ker, im = fitting_split(M, f)
    return DecompositionReport(M, [ker, im], "split", f, end_dim, scanned, seed)


def _head_images(M: GModule, ends: list[GModuleMap]) -> np.ndarray:
    """Images of an End(M) basis in End(M / rad M), as a stack of t x t matrices."""
    Q, proj = quotient_module(M, radical(M))
    free = [c for c in range(M.dim) if c not in set(radical(M).pivots)]
    return np.stack([la.matmul_mod(proj.matrix, e.matrix[:, free], M.p) for e in ends])


def _scan(mats_of, coeff_stream, p):
    """Feed coefficient chunks through ``mats_of``; first (chunk, index) that splits."""
    scanned = 0
    for chunk in coeff_stream:
        hit = _first_splitting(mats_of(chunk), p)
        if hit is not None:
            return chunk[hit], scanned + hit
        scanned += chunk.shape[0]
    return None, scanned


def _exhaustive_chunks(p, k):
    combos = itertools.product(range(p), repeat=k)
    while True:
        chunk = np.array(list(itertools.islice(combos, _BATCH)), dtype=np.int64)
        if chunk.size == 0:
            return
        yield chunk


def indecomposable(M: GModule, budget: int = DEFAULT_BUDGET, seed: int = 0,
                   method: str = "head", samples: Optional[int] = None) -> DecompositionReport:
    """Fitting-lemma verdict on ``M``.

    ``method="head"`` scans the image of End(M) in End(M/rad M); the kernel of
    that restriction is a nilpotent ideal, so an endomorphism is nilpotent or
    invertible iff its image is, and the scan still decides every element of
    End(M).  ``method="full"`` evaluates every endomorphism of M directly.
    Above ``budget`` only ``samples`` (default ``budget``) random endomorphisms
    are tried and the verdict is heuristic.
    """
    if M.dim == 0:
        return DecompositionReport(M, [], "zero")
    whole = Submodule.from_vectors(M, la.identity(M.dim))
    ends = endomorphisms(M)
    k, p, n = len(ends), M.p, M.dim
    for e in ends:
        if fitting_split(M, e) is not None:
            return _split_report(M, e.matrix, k, 0)
    if k == 1:
        # End(M) = F_p
        return DecompositionReport(M, [whole], "indecomposable_certified", end_dim=k, scanned=p)
    flat = np.stack([e.matrix for e in ends]).reshape(k, -1)
    exhaustive = p ** k <= budget
    if method == "head":
        images = _head_images(M, ends)
        t = images.shape[1]
        keep = la.row_reduce(images.reshape(k, -1).T, p)[1]   # End basis with independent images
        sub = images[list(keep)].reshape(len(keep), -1)
        mats_of = lambda c: la.matmul_mod(c, sub, p).reshape(-1, t, t)
        lift = lambda c: la.matmul_mod(c[None, :], flat[list(keep)], p).reshape(n, n)
        dim_scan = len(keep)
    elif method == "full":
        mats_of = lambda c: la.matmul_mod(c, flat, p).reshape(-1, n, n)
        lift = lambda c: la.matmul_mod(c[None, :], flat, p).reshape(n, n)
        dim_scan = k
    else:
        raise ValueError(f"unknown method {method!r}")
    if exhaustive:
        coeff, scanned = _scan(mats_of, _exhaustive_chunks(p, dim_scan), p)
        if coeff is not None:
            return _split_report(M, lift(coeff), k, scanned)
        return DecompositionReport(M, [whole], "indecomposable_certified", end_dim=k, scanned=scanned)
    rng = np.random.default_rng(seed)

    def sampled():
        done = 0
        total = budget if samples is None else samples
        while done < total:
            size = min(_BATCH, total - done)
            yield rng.integers(0, p, (size, dim_scan))
            done += size

    coeff, scanned = _scan(mats_of, sampled(), p)
    if coeff is not None:
        return _split_report(M, lift(coeff), k, scanned, seed)
    return DecompositionReport(M, [whole], "indecomposable_heuristic", end_dim=k,
                               scanned=scanned, seed=seed)


# ---------------------------------------------------------------------------
# structure theorem bookkeeping


class BookkeepingError(ValueError):
    pass


@dataclass
class Theorem1Report:
    group: PGroup = field(repr=False)
    n: int                      # dim J(F)
    d: int                      # d(G)
    dim_J_K: int
    dim_X: int
    free_rank: int
    fixed_dim_Y: int
    X_has_free_summand: bool
    consistent: bool


def verify_theorem1(G: PGroup, n: int) -> Theorem1Report:
    """Dimension bookkeeping ``J(K) = Omega^-2(F_p) + F_p[G]^(n-d)``."""
    d = G.minimal_generator_count()
    if n < d:
        raise BookkeepingError(f"dim J(F) = {n} is smaller than d(G) = {d}")
    X = omega(trivial_module(G), -2)
    free_rank = n - d
    Y = free_module(G, free_rank)
    dim_J_K = G.order * (n - 1) + 1          # Schreier index formula
    fixed_Y = fixed_submodule(Y).dim if free_rank else 0
    total = direct_sum(X, Y) if free_rank else X
    free_X = has_free_summand(X)
    consistent = (
        X.dim == omega_dimension_formula(G)
        and X.dim + G.order * free_rank == dim_J_K
        and total.dim == dim_J_K
        and fixed_Y == free_rank
        and not free_X
    )
    return Theorem1Report(G, n, d, dim_J_K, X.dim, free_rank, fixed_Y, free_X, consistent)


# ---------------------------------------------------------------------------
# Omega^2(F_p) over C_p x C_p


class PresentationError(AssertionError):
    pass


@dataclass
class CpCpPresentation:
    p: int
    group: PGroup = field(repr=False)
    module: GModule = field(repr=False)
    submodule: Submodule = field(repr=False)
    a0: np.ndarray = field(repr=False)
    a1: np.ndarray = field(repr=False)
    a2: np.ndarray = field(repr=False)
    basis: list[tuple[str, np.ndarray]] = field(repr=False)
    lowering: tuple[np.ndarray, np.ndarray] = field(repr=False)   # sigma_i - 1 on P_1
    checks: dict = field(default_factory=dict)

    @property
    def basis_size(self) -> int:
        return len(self.basis)


def box_label(k: int, l: int) -> str:
    return f"(s1-1)^{k}(s2-1)^{l}a0"


def verify_presentation(p: int, force: bool = False) -> CpCpPresentation:
    if p not in (2, 3, 5) and not force:
        raise PresentationError(f"p = {p} outside the default guard {{2, 3, 5}}")
    G = build_abelian(p, [1, 1])
    K_mod, K = omega2_via_partial(G)
    P1 = K.ambient
    n = G.order
    lower = [(a - la.identity(P1.dim)) % p for a in P1.gen_action]
    s1, s2 = lower

    def apply(a, v, times=1):
        for _ in range(times):
            v = la.matmul_mod(a, v, p)
        return v

    c1 = np.zeros(P1.dim, dtype=np.int64)
    c1[0] = 1
    c2 = np.zeros(P1.dim, dtype=np.int64)
    c2[n] = 1
    a0 = (apply(s2, c1) - apply(s1, c2)) % p
    a1 = apply(s1, c1, p - 1)
    a2 = (-apply(s2, c2, p - 1)) % p
    checks = {}

    def need(name, ok):
        checks[name] = bool(ok)
        if not ok:
            raise PresentationError(f"relation failed: {name}")

    for name, v in (("a0", a0), ("a1", a1), ("a2", a2)):
        need(f"{name} in ker(partial)", K.contains(v))
    need("(s1-1)^(p-1) a0 = (s2-1) a1", np.array_equal(apply(s1, a0, p - 1), apply(s2, a1)))
    need("(s2-1)^(p-1) a0 = (s1-1) a2", np.array_equal(apply(s2, a0, p - 1), apply(s1, a2)))
    need("(s1-1)^(p-1)(s2-1)^(p-1) a0 = 0", not np.any(apply(s1, apply(s2, a0, p - 1), p - 1)))
    # a generator v of a free F_p[C_p]-module is exactly one with (s-1)^(p-1) v != 0
    need("a1 free over <s2>", np.any(apply(s2, a1, p - 1)))
    need("a2 free over <s1>", np.any(apply(s1, a2, p - 1)))
    basis = [("a1", a1), ("a2", a2)]
    for k in range(p):
        for l in range(p):
            if k + l < 2 * p - 2:
                basis.append((box_label(k, l), apply(s1, apply(s2, a0, l), k)))
    vecs = np.stack([v for _, v in basis])
    need("spanning set has p^2+1 elements", len(basis) == p * p + 1)
    need("spanning set matches (d-1)|G|+1", len(basis) == omega_dimension_formula(G))
    need("spanning set independent", la.rank_mod(vecs, p) == len(basis))
    need("spanning set spans ker(partial)", K.dim == len(basis) and K.contains(vecs))
    return CpCpPresentation(p, G, K_mod, K, a0, a1, a2, basis, (s1, s2), checks)
