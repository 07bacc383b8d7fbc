"""Finite groups given by Cayley tables.

Elements are the dense indices ``0..n-1``; every product is a table lookup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidTable,
    MissingIdentity,
    MissingInverse,
    NoIdentity,
    NotAssociative,
    NotClosed,
    NotLatinSquare,
    UnsupportedParams,
)

MAX_ORDER = 512


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    cayley: np.ndarray
    identity: int
    inverse: np.ndarray
    names: tuple[str, ...]

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def mul(self, a, b):
        return self.cayley[a, b]

    def conj(self, k, x):
        """Index of ``k x k^-1``."""
        return self.cayley[self.cayley[k, x], self.inverse[k]]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            np.array_equal(self.cayley, other.cayley)
            and self.names == other.names
        )

    def __hash__(self):
        return hash((self.cayley.tobytes(), self.names))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x):
        return int(x) in self.elements

    def __iter__(self):
        return iter(self.elements)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.intp)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def group_from_cayley(table, names: Sequence[str] | None = None) -> FiniteGroup:
    """Validate a Cayley table and build the group.

    Raises NotLatinSquare, NoIdentity or NotAssociative with witness indices.
    """
    try:
        t = np.asarray(table)
    except Exception as exc:  # ragged nested lists
        raise InvalidTable(f"table is not a rectangular array: {exc}") from None
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise InvalidTable(f"table must be square and non-empty, got shape {t.shape}")
    if not np.issubdtype(t.dtype, np.integer):
        if np.issubdtype(t.dtype, np.floating) and np.all(t == np.round(t)):
            t = t.astype(np.int64)
        else:
            raise InvalidTable("table entries must be integers")
    n = t.shape[0]
    if n > MAX_ORDER:
        raise InvalidTable(f"order {n} exceeds the cap of {MAX_ORDER}")
    if t.min() < 0 or t.max() >= n:
        raise InvalidTable(f"entries must lie in 0..{n - 1}")
    t = t.astype(np.intp)

    target = np.arange(n)
    for axis, label in ((1, "row"), (0, "column")):
        srt = np.sort(t, axis=axis)
        bad = np.nonzero(np.any(srt != (target if axis == 1 else target[:, None]), axis=axis))[0]
        if bad.size:
            i = int(bad[0])
            line = t[i] if axis == 1 else t[:, i]
            vals, counts = np.unique(line, return_counts=True)
            dup = int(vals[counts > 1][0])
            where = [int(j) for j in np.nonzero(line == dup)[0]]
            raise NotLatinSquare(
                f"{label} {i} repeats entry {dup} at positions {where}",
                witness={"axis": label, "index": i, "value": dup, "positions": where},
            )

    ids = [e for e in range(n) if np.array_equal(t[e], target) and np.array_equal(t[:, e], target)]
    if not ids:
        left = [e for e in range(n) if np.array_equal(t[e], target)]
        right = [e for e in range(n) if np.array_equal(t[:, e], target)]
        raise NoIdentity(
            "no two-sided identity element",
            witness={"left_identities": left, "right_identities": right},
        )
    e = ids[0]

    # chunked full associativity scan: t[t[i,j],k] == t[i,t[j,k]]
    chunk = max(1, (1 << 22) // (n * n))
    for i0 in range(0, n, chunk):
        rows = np.arange(i0, min(n, i0 + chunk))
        lhs = t[t[rows]]  # [i, j, k] -> t[t[i,j], k]
        rhs = t[rows][:, t]  # [i, j, k] -> t[i, t[j,k]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, j, k = (int(v) for v in bad[0])
            i += i0
            raise NotAssociative(
                f"(x{i} x{j}) x{k} != x{i} (x{j} x{k})", witness=[i, j, k]
            )

    inverse = np.argmax(t == e, axis=1)
    if names is None:
        names = [str(i) for i in range(n)]
    names = tuple(str(s) for s in names)
    if len(names) != n:
        raise InvalidTable(f"expected {n} names, got {len(names)}")
    if len(set(names)) != n:
        raise InvalidTable("element names must be distinct")
    return FiniteGroup(_readonly(t), int(e), _readonly(inverse), names)


# ---------------------------------------------------------------------------
# presets


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise UnsupportedParams(f"cyclic group needs n >= 1, got {n}")
    a = np.arange(n)
    return group_from_cayley((a[:, None] + a[None, :]) % n)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element ``r^a s^b`` has index ``a + n*b``."""
    if n < 3:
        raise UnsupportedParams(f"dihedral group needs n >= 3, got {n}")
    size = 2 * n
    table = np.empty((size, size), dtype=np.intp)
    for x in range(size):
        a, b = x % n, x // n
        for y in range(size):
            c, d = y % n, y // n
            # r^a s^b r^c s^d = r^(a + (-1)^b c) s^(b+d)
            table[x, y] = (a + (c if b == 0 else -c)) % n + n * ((b + d) % 2)
    names = []
    for x in range(size):
        a, b = x % n, x // n
        r = "" if a == 0 else ("r" if a == 1 else f"r^{a}")
        s = "s" if b else ""
        names.append((r + s) or "e")
    return group_from_cayley(table, names)


def symmetric(n: int) -> FiniteGroup:
    """Permutations of ``n`` points in lexicographic one-line order.

    The product is composition, ``(xy)(i) = x(y(i))``.
    """
    if not 1 <= n <= 5:
        raise UnsupportedParams(f"symmetric group supported for 1 <= n <= 5, got {n}")
    perms = list(itertools.permutations(range(n)))
    lookup = {p: i for i, p in enumerate(perms)}
    table = [[lookup[tuple(x[y[i]] for i in range(n))] for y in perms] for x in perms]
    names = ["".join(str(v + 1) for v in p) for p in perms]
    return group_from_cayley(table, names)


_Q_UNITS = ("1", "i", "j", "k")
# unit products u*v = sign * w for the quaternion units 1, i, j, k
_Q_MUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion8() -> FiniteGroup:
    """Quaternion group ordered as 1, -1, i, -i, j, -j, k, -k."""
    def idx(sign, unit):
        return 2 * unit + (0 if sign > 0 else 1)

    table = np.empty((8, 8), dtype=np.intp)
    for x in range(8):
        ux, sx = divmod(x, 2)
        for y in range(8):
            uy, sy = divmod(y, 2)
            sign, w = _Q_MUL[ux, uy]
            sign *= (-1) ** (sx + sy)
            table[x, y] = idx(sign, w)
    names = [("-" if x % 2 else "") + _Q_UNITS[x // 2] for x in range(8)]
    return group_from_cayley(table, names)


def product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product; ``(a, b)`` has index ``a*|H| + b``."""
    if g.order * h.order > MAX_ORDER:
        raise UnsupportedParams(f"product order {g.order * h.order} exceeds {MAX_ORDER}")
    m = h.order
    table = g.cayley[:, None, :, None] * m + h.cayley[None, :, None, :]
    table = table.reshape(g.order * m, g.order * m)
    names = [f"({a},{b})" for a in g.names for b in h.names]
    return group_from_cayley(table, names)


_PRESETS = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}


def preset_group(kind: str, *params) -> FiniteGroup:
    """Build a standard group: ``cyclic``, ``dihedral``, ``symmetric``,
    ``quaternion8`` or ``product`` (two FiniteGroup params)."""
    if kind == "quaternion8":
        if params:
            raise UnsupportedParams("quaternion8 takes no parameters")
        return quaternion8()
    if kind == "product":
        if len(params) != 2 or not all(isinstance(p, FiniteGroup) for p in params):
            raise UnsupportedParams("product needs two FiniteGroup arguments")
        return product(*params)
    if kind not in _PRESETS:
        raise UnsupportedParams(f"unknown preset {kind!r}")
    if len(params) != 1:
        raise UnsupportedParams(f"{kind} takes exactly one integer parameter")
    try:
        n = int(params[0])
    except (TypeError, ValueError):
        raise UnsupportedParams(f"bad parameter {params[0]!r} for {kind}") from None
    return _PRESETS[kind](n)


def parse_group_ref(ref: str) -> FiniteGroup:
    """Resolve strings like ``cyclic:4``, ``quaternion8`` or ``cyclic:2*symmetric:3``."""
    parts = [p.strip() for p in ref.split("*")]
    groups = []
    for part in parts:
        kind, _, arg = part.partition(":")
        groups.append(preset_group(kind) if not arg else preset_group(kind, arg))
    out = groups[0]
    for g in groups[1:]:
        out = product(out, g)
    return out


# ---------------------------------------------------------------------------
# subgroups and conjugation structure


def make_subgroup(G: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    s = sorted({int(x) for x in elems})
    if any(x < 0 or x >= G.order for x in s):
        raise NotClosed(f"elements must lie in 0..{G.order - 1}", witness=s)
    if G.identity not in s:
        raise MissingIdentity("subset does not contain the identity", witness=G.identity)
    members = set(s)
    for x in s:
        for y in s:
            z = int(G.cayley[x, y])
            if z not in members:
                raise NotClosed(
                    f"{G.names[x]}*{G.names[y]} = {G.names[z]} is missing",
                    witness=[x, y, z],
                )
    # a finite product-closed set already contains inverses; kept as a guard
    for x in s:
        if int(G.inverse[x]) not in members:
            raise MissingInverse(
                f"inverse of {G.names[x]} is missing",
                witness=[x, int(G.inverse[x])],
            )
    return Subgroup(tuple(s))


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    members = {G.identity}
    frontier = [int(g) for g in gens]
    gens = list(frontier)
    while frontier:
        x = frontier.pop()
        if x in members:
            continue
        members.add(x)
        frontier.extend(int(G.cayley[x, g]) for g in gens)
        frontier.extend(int(G.cayley[g, x]) for g in gens)
    # finite group: closure under products already gives inverses
    return make_subgroup(G, members)


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup((G.identity,))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(tuple(range(G.order)))


def subgroup_as_group(G: FiniteGroup, K: Subgroup) -> FiniteGroup:
    """K as a group in its own right; element ``i`` is ``K.elements[i]``."""
    pos = {x: i for i, x in enumerate(K.elements)}
    table = [[pos[int(G.cayley[a, b])] for b in K.elements] for a in K.elements]
    return group_from_cayley(table, [G.names[x] for x in K.elements])


def conjugation_table(G: FiniteGroup, K: Subgroup | Sequence[int]) -> np.ndarray:
    """Array ``c[i, x]`` = index of ``k_i x k_i^-1`` for ``k_i`` in K."""
    k = np.asarray(list(K), dtype=np.intp)
    return G.cayley[G.cayley[k], G.inverse[k][:, None]]


def _orbit_partition(G: FiniteGroup, ks) -> list[list[int]]:
    c = conjugation_table(G, ks)
    label = np.full(G.order, -1)
    orbits = []
    for x in range(G.order):
        if label[x] >= 0:
            continue
        orb = sorted(int(v) for v in np.unique(c[:, x]))
        label[orb] = len(orbits)
        orbits.append(orb)
    first = int(label[G.identity])
    return [orbits[first]] + [o for i, o in enumerate(orbits) if i != first]


def conjugacy_classes(G: FiniteGroup) -> list[list[int]]:
    """Classes sorted by minimal element, the identity's class first."""
    return _orbit_partition(G, range(G.order))


def k_conjugation_orbits(G: FiniteGroup, K: Subgroup) -> list[list[int]]:
    """Orbits of ``x -> k x k^-1``, ``k`` in K; same ordering as the classes."""
    return _orbit_partition(G, K.elements)


def orbit_labels(G: FiniteGroup, orbits: list[list[int]]) -> np.ndarray:
    lab = np.empty(G.order, dtype=np.intp)
    for i, o in enumerate(orbits):
        lab[o] = i
    return lab


def center(G: FiniteGroup) -> Subgroup:
    t = G.cayley
    return Subgroup(tuple(int(z) for z in range(G.order) if np.array_equal(t[z], t[:, z])))


def commutator_subgroup(G: FiniteGroup) -> Subgroup:
    t, inv = G.cayley, G.inverse
    comm = t[t[t, inv[:, None]], inv[None, :]]  # [x, y] -> x y x^-1 y^-1
    return generated_subgroup(G, np.unique(comm))


def is_normal(G: FiniteGroup, K: Subgroup) -> bool:
    members = set(K.elements)
    c = conjugation_table(G, range(G.order))
    return all(int(v) in members for v in np.unique(c[:, list(K.elements)]))


def parse_subgroup_ref(G: FiniteGroup, ref: str) -> Subgroup:
    """``trivial``, ``all``/``G``, ``center``, ``commutator``, or a comma list of
    element indices or names (closed under products; generated if ``gen:`` prefixed)."""
    ref = ref.strip()
    if ref in ("trivial", "e", "{e}"):
        return trivial_subgroup(G)
    if ref in ("all", "G", "whole"):
        return whole_group(G)
    if ref == "center":
        return center(G)
    if ref == "commutator":
        return commutator_subgroup(G)
    generate = ref.startswith("gen:")
    if generate:
        ref = ref[4:]
    items = [s.strip() for s in ref.split(",") if s.strip()]
    idx = []
    for s in items:
        if s.lstrip("-").isdigit() and s not in G.names:
            idx.append(int(s))
        else:
            idx.append(G.index(s))
    return generated_subgroup(G, idx) if generate else make_subgroup(G, idx)
