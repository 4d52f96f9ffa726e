"""Discrete group descriptors used by transformation groupoids.

Elements are plain hashable Python values: ``int`` for Z, tuples of
``int`` for Z^d and the discrete Heisenberg group, ``int`` residues for
cyclic groups and arbitrary hashables for table-defined finite groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

__all__ = [
    "Group",
    "integer_lattice",
    "cyclic_group",
    "finite_group",
    "heisenberg_group",
]


@dataclass(frozen=True, eq=False)
class Group:
    """A discrete group given by its operations.

    Parameters
    ----------
    name : str
        Human readable descriptor, also used in provenance records.
    identity : hashable
        Neutral element.
    mul, inv : callable
        Group law ``mul(a, b) = ab`` and inversion.
    ball : callable
        ``ball(radius)`` enumerates the elements of sup-norm at most
        ``radius`` in a fixed order. Finite groups ignore the radius.
    finite : bool
    abelian : bool
    rank : int
        Lattice dimension for Z^d, 0 otherwise.
    """

    name: str
    identity: Hashable
    mul: Callable[[Hashable, Hashable], Hashable]
    inv: Callable[[Hashable], Hashable]
    ball: Callable[[int | None], tuple]
    finite: bool
    abelian: bool
    rank: int = 0

    def elements(self, radius: int | None = None) -> tuple:
        if not self.finite and radius is None:
            raise ValueError(f"{self.name} is infinite; a window radius is required")
        return self.ball(radius)


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_neg(a):
    return tuple(-x for x in a)


def integer_lattice(dim: int = 1) -> Group:
    """Z (elements are ints) or Z^d for ``dim >= 2`` (elements are tuples)."""
    if dim < 1:
        raise ValueError("dim must be positive")
    if dim == 1:
        return Group(
            name="Z",
            identity=0,
            mul=lambda a, b: a + b,
            inv=lambda a: -a,
            ball=lambda r: tuple(range(-r, r + 1)),
            finite=False,
            abelian=True,
            rank=1,
        )

    def ball(r):
        span = range(-r, r + 1)
        return tuple(itertools.product(span, repeat=dim))

    return Group(
        name=f"Z^{dim}",
        identity=(0,) * dim,
        mul=_vec_add,
        inv=_vec_neg,
        ball=ball,
        finite=False,
        abelian=True,
        rank=dim,
    )


def cyclic_group(m: int) -> Group:
    """Z_m with residues 0..m-1."""
    if m < 1:
        raise ValueError("order must be positive")
    elems = tuple(range(m))
    return Group(
        name=f"Z_{m}",
        identity=0,
        mul=lambda a, b: (a + b) % m,
        inv=lambda a: (-a) % m,
        ball=lambda r: elems,
        finite=True,
        abelian=True,
    )


def finite_group(elements: Sequence[Hashable], table: dict) -> Group:
    """Finite group from a multiplication table ``table[(a, b)] = ab``.

    The table is checked for closure, a two-sided identity, inverses and
    associativity.
    """
    elems = tuple(elements)
    for a in elems:
        for b in elems:
            if table.get((a, b)) not in elems:
                raise ValueError(f"table not closed at ({a!r}, {b!r})")
    identity = None
    for e in elems:
        if all(table[(e, a)] == a and table[(a, e)] == a for a in elems):
            identity = e
            break
    if identity is None:
        raise ValueError("table has no identity")
    inverse = {}
    for a in elems:
        inv = [b for b in elems if table[(a, b)] == identity and table[(b, a)] == identity]
        if not inv:
            raise ValueError(f"{a!r} has no inverse")
        inverse[a] = inv[0]
    for a, b, c in itertools.product(elems, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            raise ValueError(f"table not associative at ({a!r}, {b!r}, {c!r})")
    abelian = all(table[(a, b)] == table[(b, a)] for a in elems for b in elems)
    return Group(
        name=f"finite[{len(elems)}]",
        identity=identity,
        mul=lambda a, b: table[(a, b)],
        inv=inverse.__getitem__,
        ball=lambda r: elems,
        finite=True,
        abelian=abelian,
    )


def _heis_mul(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])


def _heis_inv(a):
    return (-a[0], -a[1], -a[2] + a[0] * a[1])


def heisenberg_group() -> Group:
    """Discrete Heisenberg group H(Z) on triples.

    The law is ``(a1, a2, a3)(b1, b2, b3) = (a1+b1, a2+b2, a3+b3+a1*b2)``.
    """

    def ball(r):
        span = range(-r, r + 1)
        return tuple(itertools.product(span, repeat=3))

    return Group(
        name="H(Z)",
        identity=(0, 0, 0),
        mul=_heis_mul,
        inv=_heis_inv,
        ball=ball,
        finite=False,
        abelian=False,
    )
