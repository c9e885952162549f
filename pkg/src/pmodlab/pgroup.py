"""Finite p-groups carried as explicit multiplication tables.

A :class:`PGroup` is a Cayley table over element indices ``0..n-1`` with the
identity at index 0, plus a designated generating set of minimal size and a
breadth-first word for every element in those generators.

The Frattini subgroup is computed as the subgroup generated by all p-th
powers and commutators, which for p-groups is the intersection of the
maximal subgroups; its index is ``p^d`` with ``d`` the minimal number of
generators (Burnside basis theorem).
"""
from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .fp_linalg import PrimeField, is_prime

MAX_ORDER = 1 << 14
FULL_CHECK_ORDER = 512
_SAMPLED_TRIPLES = 20000


class GroupError(ValueError):
    """A table or generating set failed validation."""


def _prime_power_exponent(n: int, p: int) -> Optional[int]:
    k = 0
    while n > 1 and n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


@dataclass(frozen=True, eq=False)
class PGroup:
    p: int
    table: np.ndarray = field(repr=False)
    generators: tuple[int, ...]
    name: str = ""
    full_check: bool = field(default=False, repr=False)

    def __post_init__(self):
        PrimeField(self.p)
        t = np.array(self.table, dtype=np.int64)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        self._validate()

    # -- basic data ---------------------------------------------------------

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        return 0

    @property
    def log_order(self) -> int:
        return _prime_power_exponent(self.order, self.p)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverse(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == 0)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        return inv

    def power(self, a: int, k: int) -> int:
        r = 0
        for _ in range(k % self.element_order(a)):
            r = self.mul(r, a)
        return r

    def power_map(self, k: int) -> np.ndarray:
        acc = np.zeros(self.order, dtype=np.int64)
        idx = np.arange(self.order)
        for _ in range(k):
            acc = self.table[acc, idx]
        return acc

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        idx = np.arange(n)
        cur = idx.copy()
        k = 1
        while True:
            done = (cur == 0) & (orders == 0)
            orders[done] = k
            if np.all(orders):
                return orders
            cur = self.table[cur, idx]
            k += 1
            if k > n:
                raise GroupError("element with no finite order in table")

    @property
    def exponent(self) -> int:
        return int(self.element_orders.max())

    def order_profile(self) -> dict[int, int]:
        """Number of elements of each order; a cheap isomorphism fingerprint."""
        return dict(sorted(Counter(int(o) for o in self.element_orders).items()))

    @cached_property
    def words(self) -> tuple[tuple[int, ...], ...]:
        """For each element, a shortest word in generator positions (BFS)."""
        words: list[Optional[tuple[int, ...]]] = [None] * self.order
        words[0] = ()
        queue = deque([0])
        while queue:
            h = queue.popleft()
            for pos, s in enumerate(self.generators):
                x = int(self.table[h, s])
                if words[x] is None:
                    words[x] = words[h] + (pos,)
                    queue.append(x)
        if any(w is None for w in words):
            raise GroupError("generators do not generate the group")
        return tuple(words)

    @cached_property
    def bfs_tree(self) -> list[tuple[int, int, int]]:
        """Triples ``(parent, generator_position, child)`` with child = parent * gen, in BFS order."""
        tree = []
        seen = {0}
        queue = deque([0])
        while queue:
            h = queue.popleft()
            for pos, s in enumerate(self.generators):
                x = int(self.table[h, s])
                if x not in seen:
                    seen.add(x)
                    tree.append((h, pos, x))
                    queue.append(x)
        return tree

    def evaluate_word(self, word: Sequence[int]) -> int:
        e = 0
        for pos in word:
            e = int(self.table[e, self.generators[pos]])
        return e

    # -- subgroups ----------------------------------------------------------

    def subgroup_generated(self, seeds: Iterable[int]) -> frozenset[int]:
        seeds = np.unique(np.fromiter((int(s) for s in seeds), dtype=np.int64))
        member = np.zeros(self.order, dtype=bool)
        member[0] = True
        if seeds.size == 0:
            return frozenset([0])
        frontier = np.array([0])
        # in a finite group, closure under right multiplication by the seeds
        # from the identity already gives the generated subgroup
        while frontier.size:
            prods = np.unique(self.table[np.ix_(frontier, seeds)])
            new = prods[~member[prods]]
            member[new] = True
            frontier = new
        return frozenset(int(i) for i in np.flatnonzero(member))

    def commutators(self) -> np.ndarray:
        n = self.order
        inv = self.inverse
        seen = np.zeros(n, dtype=bool)
        step = max(1, (1 << 22) // n)
        idx = np.arange(n)
        for a0 in range(0, n, step):
            a = idx[a0:a0 + step]
            t1 = self.table[np.ix_(inv[a], inv)]
            t2 = self.table[t1, a[:, None]]
            c = self.table[t2, idx[None, :]]
            seen[np.unique(c)] = True
        return np.flatnonzero(seen)

    def frattini_subgroup(self) -> tuple[frozenset[int], int]:
        seeds = set(np.unique(self.power_map(self.p)).tolist())
        seeds.update(self.commutators().tolist())
        seeds.discard(0)
        phi = self.subgroup_generated(seeds)
        rank = _prime_power_exponent(self.order // len(phi), self.p)
        return phi, rank

    def minimal_generator_count(self) -> int:
        return self.frattini_subgroup()[1]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_normal(self, subset: Iterable[int]) -> bool:
        h = np.array(sorted(subset), dtype=np.int64)
        mask = np.zeros(self.order, dtype=bool)
        mask[h] = True
        # g h g^-1 for all g, h
        conj = self.table[self.table[np.arange(self.order)[:, None], h[None, :]], self.inverse[:, None]]
        return bool(mask[conj].all())

    # -- validation ---------------------------------------------------------

    def _validate(self):
        t = self.table
        n = t.shape[0]
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise GroupError("table must be a nonempty square array")
        if n == 1:
            raise GroupError("the trivial group is not supported (no generators to act by)")
        if n > MAX_ORDER and not self.full_check:
            raise GroupError(f"order {n} exceeds guard {MAX_ORDER}")
        if _prime_power_exponent(n, self.p) is None:
            raise GroupError(f"order {n} is not a power of {self.p}")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entries out of range")
        idx = np.arange(n)
        if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
            raise GroupError("index 0 is not a two-sided identity")
        srt = np.sort(t, axis=1)
        if not np.all(srt == idx) or not np.all(np.sort(t, axis=0) == idx[:, None]):
            raise GroupError("table is not a Latin square (inverses fail)")
        # Latin square + identity: x has a right inverse r and left inverse l;
        # associativity below forces l = r.
        self._check_associative()
        rows, cols = np.nonzero(t == 0)
        if not np.array_equal(t[cols, rows], np.zeros(n, dtype=np.int64)):
            raise GroupError("left and right inverses differ")
        orders = self.element_orders
        if any(_prime_power_exponent(int(o), self.p) is None for o in orders):
            raise GroupError("element order is not a power of p")
        if any(not 0 <= g < n for g in self.generators):
            raise GroupError("generator index out of range")
        if len(self.subgroup_generated(self.generators)) != n:
            raise GroupError("generators do not generate the group")
        d = self.minimal_generator_count()
        if len(self.generators) != d:
            raise GroupError(f"{len(self.generators)} generators given but d(G) = {d}")

    def _check_associative(self):
        t = self.table
        n = t.shape[0]
        if n <= FULL_CHECK_ORDER or self.full_check:
            step = max(1, (1 << 22) // (n * n))
            for a0 in range(0, n, step):
                ab = t[a0:a0 + step]                  # (a, b) -> ab
                left = t[ab]                          # (ab)c
                right = t[a0:a0 + step][:, t]         # a(bc)
                if not np.array_equal(left, right):
                    raise GroupError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, (3, _SAMPLED_TRIPLES))
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise GroupError("table is not associative")

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "order": self.order,
            "table": self.table.tolist(),
            "generators": list(self.generators),
            "name": self.name,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PGroup":
        table = np.asarray(data["table"], dtype=np.int64)
        if "order" in data and int(data["order"]) != table.shape[0]:
            raise GroupError("declared order does not match table")
        p = int(data["p"])
        gens = data.get("generators")
        if gens is None:
            gens = minimal_generating_set(table, p)
        return cls(p, table, tuple(gens), name=data.get("name", ""))

    def __repr__(self):
        return f"PGroup({self.name or '?'}, p={self.p}, order={self.order}, d={len(self.generators)})"


def minimal_generating_set(table, p: int) -> list[int]:
    """Greedy Burnside basis: add elements independent modulo the Frattini subgroup."""
    table = np.asarray(table, dtype=np.int64)
    # a throwaway group with every element as generator, just to reuse the
    # closure and Frattini machinery without the minimality check
    probe = _Unchecked(p, table)
    phi, _ = probe.frattini_subgroup()
    gens: list[int] = []
    span = set(phi)
    for x in range(1, table.shape[0]):
        if x not in span:
            gens.append(x)
            span = set(probe.subgroup_generated(list(phi) + gens))
            if len(span) == table.shape[0]:
                break
    return gens


class _Unchecked(PGroup):
    def __init__(self, p, table):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "table", np.asarray(table, dtype=np.int64))
        object.__setattr__(self, "generators", ())
        object.__setattr__(self, "name", "")
        object.__setattr__(self, "full_check", False)


# ---------------------------------------------------------------------------
# builders


def build_abelian(p: int, exponents: Sequence[int], name: str = "") -> PGroup:
    """Direct product of cyclic groups of orders ``p**e`` (first factor most significant)."""
    if not exponents or any(int(e) < 1 for e in exponents):
        raise GroupError("exponents must be a nonempty list of positive integers")
    PrimeField(p)
    mods = [p ** int(e) for e in exponents]
    n = int(np.prod(mods))
    if n > MAX_ORDER:
        raise GroupError(f"order {n} exceeds guard {MAX_ORDER}")
    coords = np.array(np.unravel_index(np.arange(n), mods)).T      # (n, r)
    summed = (coords[:, None, :] + coords[None, :, :]) % np.array(mods)
    table = np.ravel_multi_index(tuple(np.moveaxis(summed, -1, 0)), mods)
    gens = []
    for i in range(len(mods)):
        unit = [0] * len(mods)
        unit[i] = 1
        gens.append(int(np.ravel_multi_index(unit, mods)))
    if not name:
        name = "x".join(f"C{m}" for m in mods)
    return PGroup(p, table, tuple(gens), name=name)


def cyclic(p: int, e: int = 1) -> PGroup:
    return build_abelian(p, [e])


_FACTOR = re.compile(r"c(\d+)")


def parse_group_spec(spec: str) -> PGroup:
    """Parse ``"C4"``, ``"C2xC2"``, ``"c3xc9"``...; all factors must share one prime."""
    parts = spec.strip().lower().split("x")
    orders = []
    for part in parts:
        m = _FACTOR.fullmatch(part.strip())
        if not m:
            raise GroupError(f"cannot parse factor {part!r} in {spec!r}")
        orders.append(int(m.group(1)))
    primes = set()
    exps = []
    for q in orders:
        ps = [r for r in range(2, q + 1) if q % r == 0 and is_prime(r)]
        if len(ps) != 1:
            raise GroupError(f"C{q} is not a cyclic p-group")
        primes.add(ps[0])
        exps.append(_prime_power_exponent(q, ps[0]))
    if len(primes) != 1:
        raise GroupError(f"factors of {spec!r} do not share one prime")
    return build_abelian(primes.pop(), exps, name="x".join(f"C{q}" for q in orders))


def load_group(arg: str) -> PGroup:
    """A group from a spec string or a path to a JSON group file."""
    path = Path(arg)
    if arg.endswith(".json") or path.is_file():
        return PGroup.from_json(json.loads(path.read_text()))
    return parse_group_spec(arg)


def klein_four() -> PGroup:
    return build_abelian(2, [1, 1], name="C2xC2")
