"""Well-orders exposed as query oracles.

Every order answers membership, strict comparison, enumeration by position and
position-of-element.  Positions are plain ints; :data:`INF` marks an element
sitting at a transfinite position and ``None`` means the oracle cannot tell.
"""

from __future__ import annotations

import math
from functools import cmp_to_key
from typing import Callable, Iterable, Sequence

from .ordinal import Ordinal

INF = math.inf


class InfiniteSegment(Exception):
    """The segment below an element is infinite."""

    def __init__(self, element):
        super().__init__(f"infinitely many predecessors below {element}")
        self.element = element


class NotEnumerable(Exception):
    """The oracle cannot enumerate the segment below an element."""


class WellOrder:
    """Base class.  Subclasses implement ``__contains__``, ``less``,
    ``position`` and ``at``; ``size`` is an int for finite domains, else None."""

    size: int | None = None

    def __contains__(self, x) -> bool:
        raise NotImplementedError

    def less(self, x, y) -> bool:
        raise NotImplementedError

    def position(self, x):
        raise NotImplementedError

    def at(self, k: int) -> Ordinal:
        raise NotImplementedError

    def ordinal_position(self, x) -> Ordinal | None:
        p = self.position(x)
        if p is None or p == INF:
            return None
        return Ordinal.of(p)

    def order_type(self) -> Ordinal | None:
        return None if self.size is None else Ordinal.of(self.size)

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    def elements(self) -> tuple:
        if self.size is None:
            raise InfiniteSegment(None)
        return tuple(self.at(i) for i in range(self.size))

    def prefix(self, k: int) -> tuple:
        out = []
        for i in range(k):
            try:
                out.append(self.at(i))
            except IndexError:
                break
        return tuple(out)

    def below(self, b) -> tuple:
        """Elements strictly below ``b`` in increasing order."""
        p = self.position(b)
        if p is None:
            raise NotEnumerable(f"cannot locate {b}")
        if p == INF:
            raise InfiniteSegment(b)
        return tuple(self.at(i) for i in range(p))

    def sort(self, items: Iterable) -> list:
        items = list(items)
        pos = [self.position(x) for x in items]
        if all(isinstance(p, int) for p in pos):
            return [x for _, x in sorted(zip(pos, items), key=lambda t: t[0])]
        return sorted(items, key=cmp_to_key(lambda a, b: -1 if self.less(a, b) else (1 if self.less(b, a) else 0)))

    def first_missing(self, items) -> Ordinal | None:
        """Least element of the order (by enumeration) not in ``items``."""
        i = 0
        while True:
            try:
                x = self.at(i)
            except IndexError:
                return None
            if x not in items:
                return x
            i += 1


class ListOrder(WellOrder):
    """A finite well-order given by its enumeration."""

    def __init__(self, seq: Sequence):
        self.seq = tuple(Ordinal.of(x) for x in seq)
        self.pos = {}
        for i, x in enumerate(self.seq):
            self.pos.setdefault(x, i)
        self.size = len(self.seq)

    @property
    def has_duplicates(self) -> bool:
        return len(self.pos) != len(self.seq)

    def __contains__(self, x):
        return x in self.pos

    def less(self, x, y):
        return self.pos[x] < self.pos[y]

    def position(self, x):
        return self.pos.get(x)

    def at(self, k):
        if k < 0 or k >= self.size:
            raise IndexError(k)
        return self.seq[k]

    def elements(self):
        return self.seq

    def __repr__(self):
        return f"ListOrder({[str(x) for x in self.seq]})"


class NaturalRange(WellOrder):
    """The usual order on the ordinal interval ``[0, bound)``."""

    def __init__(self, bound):
        self.bound = Ordinal.of(bound)
        self.size = int(self.bound) if self.bound.is_finite else None

    def __contains__(self, x):
        return Ordinal.of(x) < self.bound

    def less(self, x, y):
        return x < y

    def position(self, x):
        if not Ordinal.of(x) < self.bound:
            return None
        return int(x) if Ordinal.of(x).is_finite else INF

    def ordinal_position(self, x):
        return Ordinal.of(x)

    def at(self, k):
        if k < 0 or (self.size is not None and k >= self.size):
            raise IndexError(k)
        return Ordinal.of(k)

    def order_type(self):
        return self.bound

    def __repr__(self):
        return f"NaturalRange({self.bound})"


class SegmentOrder(WellOrder):
    """The initial segment of ``parent`` strictly below ``top``."""

    def __init__(self, parent: WellOrder, top):
        self.parent = parent
        self.top = Ordinal.of(top)
        p = parent.position(self.top)
        self._top_pos = p
        self.size = p if isinstance(p, int) else None

    def __contains__(self, x):
        return x in self.parent and x != self.top and self.parent.less(x, self.top)

    def less(self, x, y):
        return self.parent.less(x, y)

    def position(self, x):
        if x not in self:
            return None
        return self.parent.position(x)

    def ordinal_position(self, x):
        return self.parent.ordinal_position(x) if x in self else None

    def at(self, k):
        if k < 0:
            raise IndexError(k)
        if self._top_pos is None:
            x = self.parent.at(k)
            if x not in self:
                raise IndexError(k)
            return x
        if k >= self._top_pos:
            raise IndexError(k)
        return self.parent.at(k)

    def order_type(self):
        return self.parent.ordinal_position(self.top)

    def __repr__(self):
        return f"SegmentOrder({self.parent!r} below {self.top})"


class KeyOrder(WellOrder):
    """Restriction of a key-induced well-order to the members of ``domain``.

    ``key`` must be injective with well-ordered values and put the natural
    numbers first in their usual order; ``domain`` must be either a finite
    initial segment of omega or contain all of omega.  Under those conditions
    positions are explicit: a natural sits at its own index, anything else at a
    transfinite position.
    """

    def __init__(self, domain: WellOrder, key: Callable):
        self.domain = domain
        self.key = key
        self.size = domain.size

    def __contains__(self, x):
        return x in self.domain

    def less(self, x, y):
        return self.key(x) < self.key(y)

    def position(self, x):
        if x not in self.domain:
            return None
        x = Ordinal.of(x)
        return int(x) if x.is_finite else INF

    def at(self, k):
        if k < 0 or (self.size is not None and k >= self.size):
            raise IndexError(k)
        return Ordinal.of(k)


class FunctionOrder(WellOrder):
    """An order on a finite domain sorted by a comparison key."""

    def __init__(self, members: Iterable, key: Callable):
        self._list = ListOrder(sorted((Ordinal.of(x) for x in members), key=key))
        self.size = self._list.size

    def __contains__(self, x):
        return x in self._list

    def less(self, x, y):
        return self._list.less(x, y)

    def position(self, x):
        return self._list.position(x)

    def at(self, k):
        return self._list.at(k)

    def elements(self):
        return self._list.seq


def restrict_order(order: WellOrder, carrier: Iterable) -> ListOrder:
    """The suborder on ``carrier`` members of the domain, as a list."""
    return ListOrder(order.sort(x for x in carrier if x in order))
