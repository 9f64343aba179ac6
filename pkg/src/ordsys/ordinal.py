"""Ordinals below omega^omega in Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)`` terms
with strictly decreasing natural exponents and positive coefficients.  Finite
ordinals compare and hash equal to the corresponding ``int`` so that plain
integers can be passed anywhere an ordinal is expected.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Iterable, Union

__all__ = [
    "Ordinal",
    "OrdinalBound",
    "OrdinalError",
    "BoundError",
    "Kind",
    "ZERO",
    "ONE",
    "OMEGA",
    "W",
    "DEFAULT_LAMBDA",
    "ord_",
    "omega_power",
    "parse_cnf",
    "format_cnf",
    "parse_set",
    "format_set",
    "compare",
    "classify",
    "canonical_enum",
    "canonical_index",
    "cantor_pair",
    "cantor_unpair",
]


class OrdinalError(ValueError):
    pass


class BoundError(OrdinalError):
    pass


class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple[int, int]] = ()):
        terms = tuple((int(e), int(c)) for e, c in terms)
        prev = None
        for e, c in terms:
            if e < 0 or c < 1:
                raise OrdinalError(f"bad CNF term {(e, c)}")
            if prev is not None and e >= prev:
                raise OrdinalError("CNF exponents must strictly decrease")
            prev = e
        object.__setattr__(self, "terms", terms)
        if not terms:
            h = hash(0)
        elif len(terms) == 1 and terms[0][0] == 0:
            h = hash(terms[0][1])
        else:
            h = hash(terms)
        object.__setattr__(self, "_hash", h)

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    def __reduce__(self):
        return (Ordinal, (self.terms,))

    @classmethod
    def of(cls, value: Union["Ordinal", int]) -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot make an ordinal from {value!r}")
        if value < 0:
            raise OrdinalError("negative ordinal")
        return cls(((0, value),)) if value else cls(())

    # -- structure -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] > 0

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    @property
    def degree(self) -> int:
        """Leading exponent; -1 for zero."""
        return self.terms[0][0] if self.terms else -1

    def __int__(self) -> int:
        if not self.is_finite:
            raise OrdinalError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    __index__ = __int__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def split_finite(self) -> tuple["Ordinal", int]:
        """Return ``(limit_part, n)`` with ``self == limit_part + n``."""
        if self.is_successor:
            return Ordinal(self.terms[:-1]), self.terms[-1][1]
        return self, 0

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        if other.is_zero:
            return self
        e0, c0 = other.terms[0]
        head = []
        for e, c in self.terms:
            if e > e0:
                head.append((e, c))
            elif e == e0:
                head.append((e, c + c0))
                return Ordinal(head + list(other.terms[1:]))
            else:
                break
        return Ordinal(head + list(other.terms))

    def __radd__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Ordinal.of(other) + self
        return NotImplemented

    def left_minus(self, other: Union["Ordinal", int]) -> "Ordinal":
        """The unique ``r`` with ``other + r == self`` (requires ``other <= self``)."""
        other = Ordinal.of(other)
        if other > self:
            raise OrdinalError(f"{other} > {self}")
        a, b = self.terms, other.terms
        i = 0
        while i < len(b) and i < len(a) and a[i] == b[i]:
            i += 1
        if i == len(b):
            return Ordinal(a[i:])
        ea, ca = a[i]
        eb, cb = b[i]
        if ea > eb:
            return Ordinal(a[i:])
        # equal exponent, larger coefficient in self
        return Ordinal(((ea, ca - cb),) + a[i + 1:])

    def successor(self) -> "Ordinal":
        return self + 1

    # -- ordering --------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Ordinal):
            return other.terms
        if isinstance(other, int) and not isinstance(other, bool) and other >= 0:
            return ((0, other),) if other else ()
        return None

    def __eq__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self.terms == t

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self.terms < t

    def __le__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self.terms <= t

    def __gt__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self.terms > t

    def __ge__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self.terms >= t

    def __repr__(self):
        return f"Ordinal({format_cnf(self)!r})"

    def __str__(self):
        return format_cnf(self)


def ord_(value) -> Ordinal:
    """Coerce an int, Ordinal or CNF string to an :class:`Ordinal`."""
    if isinstance(value, str):
        return parse_cnf(value)
    return Ordinal.of(value)


def omega_power(e: int, c: int = 1) -> Ordinal:
    return Ordinal(((e, c),)) if c else ZERO


ZERO = Ordinal(())
ONE = Ordinal.of(1)
OMEGA = W = omega_power(1)
DEFAULT_LAMBDA = omega_power(3)


@dataclass(frozen=True)
class OrdinalBound:
    """Exclusive bound on every ordinal a system is allowed to mention."""

    lam: Ordinal = DEFAULT_LAMBDA

    def __post_init__(self):
        lam = Ordinal.of(self.lam)
        object.__setattr__(self, "lam", lam)
        if not lam.is_limit or lam < omega_power(2):
            raise BoundError(f"bound must be a limit ordinal >= w^2, got {lam}")

    def check(self, x) -> Ordinal:
        x = Ordinal.of(x)
        if x >= self.lam:
            raise BoundError(f"{x} is not below the bound {self.lam}")
        return x

    def __contains__(self, x) -> bool:
        return Ordinal.of(x) < self.lam


# -- text form ------------------------------------------------------------

_TERM = re.compile(r"^(?:w(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


def parse_cnf(text: str, bound: Ordinal | OrdinalBound | None = None) -> Ordinal:
    """Parse ``w^2*3+w*2+5`` style text.

    Terms may appear in any order; they are combined with ordinal addition, so
    non-normal input such as ``3+w`` denotes ``w``.
    """
    if not isinstance(text, str):
        raise TypeError("parse_cnf expects text")
    body = "".join(text.split())
    if not body:
        raise OrdinalError("empty ordinal text")
    total = ZERO
    for raw in body.split("+"):
        m = _TERM.match(raw)
        if not m:
            raise OrdinalError(f"malformed ordinal term {raw!r} in {text!r}")
        if m.group(3) is not None:
            term = Ordinal.of(int(m.group(3)))
        else:
            e = int(m.group(1)) if m.group(1) is not None else 1
            c = int(m.group(2)) if m.group(2) is not None else 1
            term = omega_power(e, c)
        total = total + term
    if bound is not None:
        lam = bound.lam if isinstance(bound, OrdinalBound) else Ordinal.of(bound)
        if total >= lam:
            raise BoundError(f"{format_cnf(total)} is not below the bound {format_cnf(lam)}")
    return total


def format_cnf(x) -> str:
    x = Ordinal.of(x)
    if x.is_zero:
        return "0"
    parts = []
    for e, c in x.terms:
        if e == 0:
            parts.append(str(c))
        elif e == 1:
            parts.append("w" if c == 1 else f"w*{c}")
        else:
            parts.append(f"w^{e}*{c}")
    return "+".join(parts)


def parse_set(text: str, bound=None) -> frozenset:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise OrdinalError(f"set must be written as {{...}}: {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return frozenset()
    return frozenset(parse_cnf(item, bound) for item in inner.split(","))


def format_set(items) -> str:
    return "{" + ",".join(format_cnf(x) for x in sorted(Ordinal.of(i) for i in items)) + "}"


# -- comparison and classification -----------------------------------------


class Kind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


def compare(a, b) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    a, b = Ordinal.of(a), Ordinal.of(b)
    return (a > b) - (a < b)


def classify(a) -> tuple[Kind, Ordinal | None]:
    """``(Kind, predecessor)``; the predecessor is only set for successors."""
    a = Ordinal.of(a)
    if a.is_zero:
        return Kind.ZERO, None
    if a.is_successor:
        e, c = a.terms[-1]
        pred = Ordinal(a.terms[:-1] + (((0, c - 1),) if c > 1 else ()))
        return Kind.SUCCESSOR, pred
    return Kind.LIMIT, None


# -- canonical bijections omega -> delta -------------------------------------


def cantor_pair(j: int, m: int) -> int:
    return (j + m) * (j + m + 1) // 2 + m


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    m = z - w * (w + 1) // 2
    return w - m, m


def _enum_power(e: int, i: int) -> Ordinal:
    # bijection omega -> [0, w^e), e >= 1
    if e == 1:
        return Ordinal.of(i)
    j, m = cantor_unpair(i)
    return omega_power(e - 1, j) + _enum_power(e - 1, m)


def _index_power(e: int, x: Ordinal) -> int:
    if e == 1:
        return int(x)
    if x.degree == e - 1:
        j = x.terms[0][1]
        rest = Ordinal(x.terms[1:])
    else:
        j, rest = 0, x
    return cantor_pair(j, _index_power(e - 1, rest))


def _unit_blocks(delta: Ordinal) -> list[tuple[Ordinal, int]]:
    """Split ``[0, delta)`` into consecutive blocks ``[p, p + w^e)``."""
    blocks = []
    p = ZERO
    for e, c in delta.terms:
        for _ in range(c):
            blocks.append((p, e))
            p = p + omega_power(e)
    return blocks


def _require_limit(delta) -> Ordinal:
    delta = Ordinal.of(delta)
    if not delta.is_limit:
        raise OrdinalError(f"{delta} is not a limit ordinal")
    return delta


def canonical_enum(delta, i: int) -> Ordinal:
    """The ``i``-th element of the fixed enumeration of ``[0, delta)``.

    ``[0, delta)`` is cut into its CNF blocks ``[p, p + w^e)``; the blocks are
    visited round-robin and each block is enumerated through nested Cantor
    pairing.
    """
    delta = _require_limit(delta)
    if i < 0:
        raise OrdinalError("negative index")
    blocks = _unit_blocks(delta)
    k, m = i % len(blocks), i // len(blocks)
    p, e = blocks[k]
    return p + _enum_power(e, m)


def canonical_index(delta, x) -> int:
    """Inverse of :func:`canonical_enum`."""
    delta = _require_limit(delta)
    x = Ordinal.of(x)
    if x >= delta:
        raise OrdinalError(f"{x} is not below {delta}")
    blocks = _unit_blocks(delta)
    for k, (p, e) in enumerate(blocks):
        if x < p + omega_power(e):
            return _index_power(e, x.left_minus(p)) * len(blocks) + k
    raise AssertionError("unreachable")


def random_ordinal(rng, bound, max_coeff: int = 9) -> Ordinal:
    """A random ordinal below ``bound`` with coefficients at most ``max_coeff``.

    Terms are drawn independently per exponent (each present with
    probability one half) and the draw is repeated until it falls below
    ``bound``; this mixes naturals, limits and successors.
    """
    bound = Ordinal.of(bound)
    if bound.is_zero:
        raise OrdinalError("nothing below 0")
    if bound.is_finite:
        return Ordinal.of(rng.randrange(int(bound)))
    top = bound.degree
    while True:
        terms = []
        for e in range(top, -1, -1):
            if rng.random() < 0.5:
                terms.append((e, rng.randint(1, max_coeff)))
        x = Ordinal(terms)
        if x < bound:
            return x
