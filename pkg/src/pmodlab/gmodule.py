"""F_p[G]-modules given by matrices for the generators of a p-group.

Conventions: vectors are columns, ``rho(g)`` acts on the left, and a map
``A -> B`` is a ``dim B x dim A`` matrix.  Subspaces are stored as row bases
in reduced echelon form, so the coordinates of a vector in a subspace are its
entries at the pivot columns.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import fp_linalg as la
from .pgroup import PGroup, parse_group_spec

EXHAUSTIVE_HOM_SEARCH = 1 << 12


class ModuleError(ValueError):
    pass


def same_group(g: PGroup, h: PGroup) -> bool:
    return g is h or (
        g.p == h.p and g.generators == h.generators and np.array_equal(g.table, h.table)
    )


@dataclass(frozen=True, eq=False)
class GModule:
    group: PGroup
    gen_action: tuple[np.ndarray, ...] = field(repr=False)
    label: str = ""

    def __post_init__(self):
        p = self.group.p
        mats = []
        for a in self.gen_action:
            a = la.as_mod(a, p)
            a.setflags(write=False)
            mats.append(a)
        if len(mats) != len(self.group.generators):
            raise ModuleError("need one action matrix per group generator")
        n = mats[0].shape[0] if mats else 0
        for a in mats:
            if a.shape != (n, n):
                raise ModuleError("action matrices must be square of equal size")
        object.__setattr__(self, "gen_action", tuple(mats))
        self._validate()

    @property
    def p(self) -> int:
        return self.group.p

    @property
    def dim(self) -> int:
        return self.gen_action[0].shape[0]

    @cached_property
    def rho(self) -> np.ndarray:
        """``rho[g]`` for every element ``g``, built along the BFS tree of the group."""
        n, G = self.dim, self.group
        out = np.zeros((G.order, n, n), dtype=np.int64)
        out[0] = la.identity(n)
        for parent, pos, child in G.bfs_tree:
            out[child] = la.matmul_mod(out[parent], self.gen_action[pos], self.p)
        return out

    def _validate(self):
        p, G = self.p, self.group
        for a in self.gen_action:
            if self.dim and la.inverse_mod(a, p) is None:
                raise ModuleError("generator acts by a singular matrix")
        # rho(g) rho(s) = rho(gs) for every g and generator s gives a
        # homomorphism by induction on word length; this is an exact check
        rho = self.rho
        for pos, s in enumerate(G.generators):
            lhs = la.matmul_mod(rho, self.gen_action[pos], p)
            if not np.array_equal(lhs, rho[G.table[:, s]]):
                raise ModuleError("generator matrices do not satisfy the group relations")

    def act(self, g: int, v) -> np.ndarray:
        return la.matmul_mod(self.rho[g], la.as_mod(v, self.p), self.p)

    @cached_property
    def norm_matrix(self) -> np.ndarray:
        return self.rho.sum(axis=0) % self.p

    def augmentation_gens(self) -> list[np.ndarray]:
        """The matrices of ``sigma_i - 1``."""
        eye = la.identity(self.dim)
        return [(a - eye) % self.p for a in self.gen_action]

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "dim": self.dim,
            "action": [a.tolist() for a in self.gen_action],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, data: dict, group: Optional[PGroup] = None) -> "GModule":
        G = group if group is not None else parse_group_spec(data["group"])
        dim = int(data["dim"])
        mats = [np.asarray(a, dtype=np.int64).reshape(dim, dim) for a in data["action"]]
        return cls(G, tuple(mats), label=data.get("label", ""))

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __eq__(self, other):
        if not isinstance(other, GModule):
            return NotImplemented
        return same_group(self.group, other.group) and all(
            np.array_equal(a, b) for a, b in zip(self.gen_action, other.gen_action)
        ) and self.dim == other.dim

    __hash__ = object.__hash__

    def __repr__(self):
        return f"GModule({self.label or '?'}, dim={self.dim}, group={self.group.name})"


@dataclass(frozen=True, eq=False)
class GModuleMap:
    source: GModule
    target: GModule
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not same_group(self.source.group, self.target.group):
            raise ModuleError("map between modules over different groups")
        m = la.as_mod(self.matrix, self.source.p).reshape(self.target.dim, self.source.dim)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if not self.is_equivariant():
            raise ModuleError("matrix is not G-equivariant")

    def is_equivariant(self) -> bool:
        p = self.source.p
        return all(
            np.array_equal(la.matmul_mod(self.matrix, a, p), la.matmul_mod(b, self.matrix, p))
            for a, b in zip(self.source.gen_action, self.target.gen_action)
        )

    def rank(self) -> int:
        return la.rank_mod(self.matrix, self.source.p)

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.rank() == self.source.dim

    def kernel(self) -> "Submodule":
        return Submodule.from_vectors(self.source, la.nullspace(self.matrix, self.source.p))

    def image(self) -> "Submodule":
        return Submodule.from_vectors(self.target, self.matrix.T)

    def compose(self, before: "GModuleMap") -> "GModuleMap":
        """``self o before``."""
        return GModuleMap(before.source, self.target,
                          la.matmul_mod(self.matrix, before.matrix, self.source.p))


@dataclass(frozen=True, eq=False)
class Submodule:
    ambient: GModule
    basis: np.ndarray = field(repr=False)
    pivots: tuple[int, ...] = ()

    @classmethod
    def from_vectors(cls, ambient: GModule, vectors, close: bool = False) -> "Submodule":
        if ambient.dim == 0:
            return cls(ambient, np.zeros((0, 0), dtype=np.int64), ())
        vecs = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient.dim)
        if close:
            return submodule_generated(ambient, vecs)
        if vecs.shape[0] == 0:
            return cls(ambient, np.zeros((0, ambient.dim), dtype=np.int64), ())
        red, piv = la.row_reduce(vecs, ambient.p)
        sub = cls(ambient, red[: len(piv)], tuple(piv))
        if not sub.is_closed():
            raise ModuleError("subspace is not G-stable")
        return sub

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords(self, vecs) -> np.ndarray:
        return la.coordinates(self.basis, self.pivots, vecs)

    def is_closed(self) -> bool:
        p = self.ambient.p
        for a in self.ambient.gen_action:
            moved = la.matmul_mod(self.basis, a.T, p)
            back = la.matmul_mod(la.coordinates(self.basis, self.pivots, moved), self.basis, p)
            if not np.array_equal(moved, back):
                return False
        return True

    def contains(self, vecs) -> bool:
        return la.in_row_space(self.basis, vecs, self.ambient.p)

    @cached_property
    def as_module(self) -> GModule:
        p = self.ambient.p
        mats = []
        for a in self.ambient.gen_action:
            moved = la.matmul_mod(self.basis, a.T, p)           # rows: rho(s) b_j
            mats.append(la.coordinates(self.basis, self.pivots, moved).T)
        if self.dim == 0:
            mats = [np.zeros((0, 0), dtype=np.int64) for _ in self.ambient.gen_action]
        return GModule(self.ambient.group, tuple(mats), label=f"sub({self.ambient.label})")

    def inclusion(self) -> GModuleMap:
        return GModuleMap(self.as_module, self.ambient, self.basis.T)

    def lift(self, coords) -> np.ndarray:
        """Ambient vector with the given coordinates."""
        return la.matmul_mod(la.as_mod(coords, self.ambient.p), self.basis, self.ambient.p)

    def intersect(self, other: "Submodule") -> "Submodule":
        inter = la.intersect_row_spaces(self.basis, other.basis, self.ambient.p)
        return Submodule.from_vectors(self.ambient, inter)

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule.from_vectors(self.ambient, np.vstack([self.basis, other.basis]))

    def __repr__(self):
        return f"Submodule(dim={self.dim} of {self.ambient!r})"


# ---------------------------------------------------------------------------
# constructions


def regular_module(G: PGroup) -> GModule:
    """F_p[G] with basis the group elements and left translation."""
    n = G.order
    mats = []
    for s in G.generators:
        m = np.zeros((n, n), dtype=np.int64)
        m[G.table[s], np.arange(n)] = 1
        mats.append(m)
    return GModule(G, tuple(mats), label=f"F{G.p}[{G.name}]")


def free_module(G: PGroup, rank: int) -> GModule:
    """``rank`` copies of the regular module; basis index ``i*|G| + g``."""
    if rank == 0:
        return zero_module(G)
    reg = regular_module(G)
    mats = tuple(np.kron(la.identity(rank), a) for a in reg.gen_action)
    return GModule(G, mats, label=f"F{G.p}[{G.name}]^{rank}")


def trivial_module(G: PGroup, dim: int = 1) -> GModule:
    return GModule(G, tuple(la.identity(dim) for _ in G.generators), label=f"F{G.p}")


def zero_module(G: PGroup) -> GModule:
    return GModule(G, tuple(np.zeros((0, 0), dtype=np.int64) for _ in G.generators), label="0")


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=np.int64)
    out[: a.shape[0], : a.shape[0]] = a
    out[a.shape[0]:, a.shape[0]:] = b
    return out


def direct_sum(*mods: GModule) -> GModule:
    if not mods:
        raise ModuleError("direct sum of nothing")
    G = mods[0].group
    for m in mods[1:]:
        if not same_group(G, m.group):
            raise ModuleError("direct sum of modules over different groups")
    mats = []
    for pos in range(len(G.generators)):
        acc = mods[0].gen_action[pos]
        for m in mods[1:]:
            acc = _block_diag(acc, m.gen_action[pos])
        mats.append(acc)
    return GModule(G, tuple(mats), label=" + ".join(m.label or "?" for m in mods))


def dual(M: GModule) -> GModule:
    """Contragredient module: ``rho*(s) = rho(s^-1)^T``."""
    mats = tuple(la.inverse_mod(a, M.p).T.copy() if M.dim else a for a in M.gen_action)
    return GModule(M.group, mats, label=f"({M.label})*")


def fixed_submodule(M: GModule) -> Submodule:
    if M.dim == 0:
        return Submodule.from_vectors(M, np.zeros((0, 0)))
    stacked = np.vstack(M.augmentation_gens())
    return Submodule.from_vectors(M, la.nullspace(stacked, M.p))


def radical(M: GModule) -> Submodule:
    """``sum_i (sigma_i - 1) M``; the augmentation ideal is generated by these."""
    if M.dim == 0:
        return Submodule.from_vectors(M, np.zeros((0, 0)))
    cols = np.hstack(M.augmentation_gens())
    return Submodule.from_vectors(M, la.row_basis(cols.T, M.p))


def norm_apply(M: GModule, v) -> np.ndarray:
    return la.matmul_mod(M.norm_matrix, la.as_mod(v, M.p), M.p)


def submodule_generated(M: GModule, seeds) -> Submodule:
    p = M.p
    seeds = np.asarray(seeds, dtype=np.int64).reshape(-1, M.dim) % p
    basis = la.row_basis(seeds, p)
    while True:
        if basis.shape[0] == 0:
            break
        moved = [la.matmul_mod(basis, a.T, p) for a in M.gen_action]
        new = la.row_basis(np.vstack([basis] + moved), p)
        if new.shape[0] == basis.shape[0]:
            basis = new
            break
        basis = new
    return Submodule.from_vectors(M, basis)


def quotient_module(M: GModule, S: Submodule) -> tuple[GModule, GModuleMap]:
    """``M / S`` on the complement spanned by the non-pivot standard vectors."""
    p, n = M.p, M.dim
    piv = list(S.pivots)
    free = [c for c in range(n) if c not in set(piv)]
    # v -> v - B^T v[piv] kills the S-component (B is in RREF)
    reduce_ = (la.identity(n) - S.basis.T @ la.identity(n)[piv]) % p if piv else la.identity(n)
    proj = reduce_[free]
    mats = []
    for a in M.gen_action:
        mats.append(la.matmul_mod(proj, a[:, free], p) if free else np.zeros((0, 0), dtype=np.int64))
    Q = GModule(M.group, tuple(mats), label=f"{M.label}/sub")
    return Q, GModuleMap(M, Q, proj.reshape(len(free), n))


def head(M: GModule) -> GModule:
    return quotient_module(M, radical(M))[0]


def hom_space(A: GModule, B: GModule) -> list[GModuleMap]:
    """Basis of Hom_G(A, B), solving ``X rho_A(s) = rho_B(s) X`` for all generators."""
    if not same_group(A.group, B.group):
        raise ModuleError("Hom between modules over different groups")
    p, na, nb = A.p, A.dim, B.dim
    if na == 0 or nb == 0:
        return []
    blocks = [
        (np.kron(la.identity(nb), ra.T) - np.kron(rb, la.identity(na))) % p
        for ra, rb in zip(A.gen_action, B.gen_action)
    ]
    sols = la.nullspace(np.vstack(blocks), p)
    return [GModuleMap(A, B, s.reshape(nb, na)) for s in sols]


def endomorphisms(M: GModule) -> list[GModuleMap]:
    return hom_space(M, M)


# ---------------------------------------------------------------------------
# invariants and isomorphism


def radical_series_dims(M: GModule) -> tuple[int, ...]:
    """Dimensions of ``M, rad M, rad^2 M, ...`` down to 0."""
    dims = []
    cur = M
    while cur.dim:
        dims.append(cur.dim)
        cur = radical(cur).as_module
    return tuple(dims) + (0,)


def socle_series_dims(M: GModule) -> tuple[int, ...]:
    """Dimensions of ``soc^1 M, soc^2 M, ...`` up to ``M`` (socle = fixed points for p-groups)."""
    dims = []
    total = 0
    cur = M
    while cur.dim:
        soc = fixed_submodule(cur)
        total += soc.dim
        dims.append(total)
        cur = quotient_module(cur, soc)[0]
    return (0,) + tuple(dims)


def invariant_profile(M: GModule) -> dict:
    return {
        "dim": M.dim,
        "fixed_dim": fixed_submodule(M).dim,
        "radical_series": radical_series_dims(M),
        "socle_series": socle_series_dims(M),
    }


@dataclass
class IsoVerdict:
    status: str                       # "iso" | "not_iso" | "unknown"
    map: Optional[GModuleMap] = None
    witness: str = ""

    def __bool__(self):
        return self.status == "iso"


def is_isomorphic(A: GModule, B: GModule, budget: int = 200,
                  rng: Optional[np.random.Generator] = None) -> IsoVerdict:
    """Look for an invertible map in Hom_G(A, B).

    Differing invariants give ``not_iso``.  Otherwise the Hom basis is tried,
    then ``budget`` random combinations.  When Hom is small enough the whole
    space is enumerated, which settles the question either way.
    """
    pa, pb = invariant_profile(A), invariant_profile(B)
    for key in pa:
        if pa[key] != pb[key]:
            return IsoVerdict("not_iso", witness=f"{key}: {pa[key]} != {pb[key]}")
    if A.dim == 0:
        return IsoVerdict("iso", GModuleMap(A, B, np.zeros((0, 0))))
    homs = hom_space(A, B)
    if not homs:
        return IsoVerdict("not_iso", witness="Hom(A, B) = 0")
    p = A.p
    for h in homs:
        if h.is_iso():
            return IsoVerdict("iso", h)
    stack = np.stack([h.matrix for h in homs])
    if p ** len(homs) <= EXHAUSTIVE_HOM_SEARCH:
        for coeffs in itertools.product(range(p), repeat=len(homs)):
            m = np.tensordot(np.array(coeffs), stack, axes=1) % p
            if la.rank_mod(m, p) == A.dim:
                return IsoVerdict("iso", GModuleMap(A, B, m))
        return IsoVerdict("not_iso", witness="no invertible element in Hom(A, B)")
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(budget):
        coeffs = rng.integers(0, p, len(homs))
        m = np.tensordot(coeffs, stack, axes=1) % p
        if la.rank_mod(m, p) == A.dim:
            return IsoVerdict("iso", GModuleMap(A, B, m))
    return IsoVerdict("unknown", witness=f"no invertible map in {budget} random trials")


def zero_intersection_by_fixed_points(U: Submodule, V: Submodule) -> bool:
    """``U ∩ V = 0`` decided through ``U^G ∩ V^G = 0``; valid for p-groups."""
    fu = fixed_submodule(U.as_module)
    fv = fixed_submodule(V.as_module)
    a = la.matmul_mod(fu.basis, U.basis, U.ambient.p) if fu.dim else np.zeros((0, U.ambient.dim))
    b = la.matmul_mod(fv.basis, V.basis, V.ambient.p) if fv.dim else np.zeros((0, V.ambient.dim))
    return la.intersect_row_spaces(a, b, U.ambient.p).shape[0] == 0 if a.size and b.size else True
