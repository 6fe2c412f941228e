"""Core domain types: itemsets, families, frequency vectors and distributions.

Attributes are integer indices ``0 .. K-1``. An itemset is stored as a
bitmask, and a point of the sample space ``{0,1}^K`` is an ``int`` whose bit
``j`` is the value of attribute ``j``. Names such as ``v1`` or ``c1`` only
exist in :mod:`freqquery.io`.

Binary patterns ``t`` for an itemset ``B`` are aligned with the members of
``B`` in ascending attribute order.
"""

from __future__ import annotations

import itertools
import math
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import MalformedInputError, ModeError, ResourceLimitError

#: Largest K for which a dense vector over ``{0,1}^K`` is materialised.
DEFAULT_K_LIMIT = 24

#: Allowed deviation of total mass from 1 for floating distributions.
FLOAT_MASS_TOL = 1e-12

RationalLike = Union[Fraction, int, str, Decimal, float]


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact :class:`~fractions.Fraction`.

    Strings may be ``"p/q"`` or a decimal literal; decimals are expanded
    literally, so ``"0.6"`` becomes ``3/5``. Floats go through their shortest
    repr for the same reason.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MalformedInputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise MalformedInputError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise MalformedInputError(f"not a rational number: {value!r}") from None
    # gmpy2.mpq and friends
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise MalformedInputError(f"not a rational number: {value!r}")


class Itemset:
    """An immutable set of attribute indices stored as a bitmask."""

    __slots__ = ("mask",)

    def __init__(self, members: Union[int, Iterable[int]] = ()):
        if isinstance(members, Itemset):
            mask = members.mask
        elif isinstance(members, int) and not isinstance(members, bool):
            raise TypeError("use Itemset.from_mask() to build from a bitmask")
        else:
            mask = 0
            for i in members:
                if not isinstance(i, (int, np.integer)) or isinstance(i, bool) or i < 0:
                    raise MalformedInputError(f"invalid attribute index {i!r}")
                bit = 1 << int(i)
                if mask & bit:
                    raise MalformedInputError(f"duplicate attribute index {i}")
                mask |= bit
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_mask(cls, mask: int) -> "Itemset":
        if mask < 0:
            raise MalformedInputError("itemset mask must be nonnegative")
        obj = cls.__new__(cls)
        object.__setattr__(obj, "mask", int(mask))
        return obj

    @classmethod
    def of(cls, *indices: int) -> "Itemset":
        return cls(indices)

    def __setattr__(self, name, value):
        raise AttributeError("Itemset is immutable")

    @property
    def indices(self) -> tuple:
        m, out, j = self.mask, [], 0
        while m:
            if m & 1:
                out.append(j)
            m >>= 1
            j += 1
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, index: int) -> bool:
        return index >= 0 and bool(self.mask >> index & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def issubset(self, other: "Itemset") -> bool:
        return self.mask & other.mask == self.mask

    def __le__(self, other: "Itemset") -> bool:
        return self.issubset(other)

    def __lt__(self, other: "Itemset") -> bool:
        return self.mask != other.mask and self.issubset(other)

    def __ge__(self, other: "Itemset") -> bool:
        return other.issubset(self)

    def __gt__(self, other: "Itemset") -> bool:
        return other < self

    def __or__(self, other: "Itemset") -> "Itemset":
        return Itemset.from_mask(self.mask | other.mask)

    def __and__(self, other: "Itemset") -> "Itemset":
        return Itemset.from_mask(self.mask & other.mask)

    def __sub__(self, other: "Itemset") -> "Itemset":
        return Itemset.from_mask(self.mask & ~other.mask)

    def __eq__(self, other) -> bool:
        return isinstance(other, Itemset) and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(("Itemset", self.mask))

    def __repr__(self) -> str:
        return "Itemset({" + ", ".join(map(str, self.indices)) + "})"

    @property
    def max_index(self) -> int:
        return self.mask.bit_length() - 1

    def sort_key(self) -> tuple:
        """Canonical order: by size, then lexicographically by indices."""
        return (len(self), self.indices)

    def subsets(self) -> Iterator["Itemset"]:
        """All subsets, including the empty set and the itemset itself."""
        idx = self.indices
        for r in range(len(idx) + 1):
            for combo in itertools.combinations(idx, r):
                yield Itemset(combo)


ItemsetLike = Union[Itemset, Iterable[int]]


def as_itemset(value: ItemsetLike) -> Itemset:
    return value if isinstance(value, Itemset) else Itemset(value)


def as_bits(t, length: int) -> tuple:
    """Normalise a binary vector given as a sequence of 0/1 or a string."""
    if isinstance(t, str):
        t = t.strip()
        if any(ch not in "01" for ch in t):
            raise MalformedInputError(f"binary pattern must contain only 0/1: {t!r}")
        bits = tuple(int(ch) for ch in t)
    else:
        bits = tuple(int(b) for b in t)
        if any(b not in (0, 1) for b in bits):
            raise MalformedInputError(f"binary pattern must contain only 0/1: {t!r}")
    if len(bits) != length:
        raise MalformedInputError(
            f"binary pattern has length {len(bits)}, expected {length}")
    return bits


class ItemsetFamily(Sequence):
    """An ordered collection of distinct itemsets over ``K`` attributes."""

    __slots__ = ("items", "attribute_count", "_index")

    def __init__(self, items: Iterable[ItemsetLike], attribute_count: int):
        if not isinstance(attribute_count, int) or attribute_count < 1:
            raise MalformedInputError(
                f"attribute count must be a positive integer, got {attribute_count!r}")
        items = tuple(as_itemset(it) for it in items)
        index = {}
        for pos, it in enumerate(items):
            if it.max_index >= attribute_count:
                raise MalformedInputError(
                    f"itemset {it!r} references attribute {it.max_index} "
                    f"but K = {attribute_count}")
            if it in index:
                raise MalformedInputError(f"itemset {it!r} appears twice in the family")
            index[it] = pos
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "attribute_count", attribute_count)
        object.__setattr__(self, "_index", index)

    def __setattr__(self, name, value):
        raise AttributeError("ItemsetFamily is immutable")

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, itemset) -> bool:
        return isinstance(itemset, Itemset) and itemset in self._index

    def __eq__(self, other) -> bool:
        return (isinstance(other, ItemsetFamily)
                and other.attribute_count == self.attribute_count
                and other.items == self.items)

    def __hash__(self) -> int:
        return hash((self.items, self.attribute_count))

    def __repr__(self) -> str:
        return f"ItemsetFamily({list(self.items)!r}, attribute_count={self.attribute_count})"

    def index(self, itemset, start=0, stop=None) -> int:
        try:
            pos = self._index[as_itemset(itemset)]
        except KeyError:
            raise ValueError(f"{itemset!r} is not in the family") from None
        if pos < start or (stop is not None and pos >= stop):
            raise ValueError(f"{itemset!r} is not in the family")
        return pos

    @property
    def masks(self) -> tuple:
        return tuple(it.mask for it in self.items)

    def missing_subsets(self) -> list:
        """Subsets of members that are absent from the family, canonically ordered."""
        missing = set()
        for it in self.items:
            for sub in it.subsets():
                if sub not in self._index:
                    missing.add(sub)
        return sorted(missing, key=Itemset.sort_key)

    def is_antimonotonic(self) -> bool:
        # Checking the immediate subsets suffices by induction.
        for it in self.items:
            m = it.mask
            rest = m
            while rest:
                low = rest & -rest
                if Itemset.from_mask(m ^ low) not in self._index:
                    return False
                rest ^= low
        return True

    def maximal(self) -> list:
        """Members not strictly contained in another member."""
        return [it for it in self.items if not any(it < other for other in self.items)]

    def canonical_order(self) -> list:
        """Positions of the members sorted by (size, indices)."""
        return sorted(range(len(self.items)), key=lambda i: self.items[i].sort_key())


def downward_closure(seed: Iterable[ItemsetLike], attribute_count: int) -> ItemsetFamily:
    """Smallest antimonotonic family containing every seed itemset.

    Members are returned in canonical order (size, then indices).
    """
    found = set()
    for s in seed:
        s = as_itemset(s)
        if s.max_index >= attribute_count:
            raise MalformedInputError(
                f"itemset {s!r} references attribute {s.max_index} but K = {attribute_count}")
        if s in found:
            continue
        found.update(s.subsets())
    return ItemsetFamily(sorted(found, key=Itemset.sort_key), attribute_count)


def is_antimonotonic(family: ItemsetFamily) -> bool:
    return family.is_antimonotonic()


class FrequencyAssignment(Sequence):
    """Exact rational frequencies, one per family member, each in [0, 1]."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable[RationalLike]):
        vals = tuple(to_fraction(v) for v in values)
        for i, v in enumerate(vals):
            if not 0 <= v <= 1:
                raise MalformedInputError(f"frequency #{i} = {v} lies outside [0, 1]")
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("FrequencyAssignment is immutable")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, FrequencyAssignment):
            return other.values == self.values
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return "FrequencyAssignment([" + ", ".join(str(v) for v in self.values) + "])"


def as_frequencies(theta) -> FrequencyAssignment:
    return theta if isinstance(theta, FrequencyAssignment) else FrequencyAssignment(theta)


def check_aligned(family: ItemsetFamily, theta) -> FrequencyAssignment:
    """Validate that ``theta`` matches ``family`` and return it as an assignment."""
    theta = as_frequencies(theta)
    if len(theta) != len(family):
        raise MalformedInputError(
            f"{len(theta)} frequencies given for a family of {len(family)} itemsets")
    empty = Itemset()
    if empty in family and theta[family.index(empty)] != 1:
        raise MalformedInputError(
            f"the empty itemset must have frequency 1, got {theta[family.index(empty)]}")
    return theta


def check_k_limit(attribute_count: int, k_limit: int = DEFAULT_K_LIMIT) -> None:
    if attribute_count > k_limit:
        raise ResourceLimitError(
            f"K = {attribute_count} exceeds the limit of {k_limit} "
            f"(sample space of 2^{attribute_count} points)")


def _event_masks(itemset: Itemset, t) -> tuple:
    bits = as_bits(t, len(itemset))
    ones = zeros = 0
    for idx, b in zip(itemset.indices, bits):
        if b:
            ones |= 1 << idx
        else:
            zeros |= 1 << idx
    return ones, zeros


class JointDistribution:
    """A probability mass function over ``{0,1}^K``.

    Exact distributions hold :class:`Fraction` masses in a sparse mapping;
    floating ones hold a dense ``float64`` vector of length ``2^K``.
    """

    __slots__ = ("attribute_count", "exact", "_mass", "_dense")

    def __init__(self, mass, attribute_count: int, *, exact: bool | None = None,
                 k_limit: int = DEFAULT_K_LIMIT):
        if not isinstance(attribute_count, int) or attribute_count < 0:
            raise MalformedInputError(f"invalid attribute count {attribute_count!r}")
        if exact is None:
            exact = isinstance(mass, Mapping)
        object.__setattr__(self, "attribute_count", attribute_count)
        object.__setattr__(self, "exact", bool(exact))
        size = 1 << attribute_count
        if exact:
            items = mass.items() if isinstance(mass, Mapping) else enumerate(mass)
            sparse = {}
            for state, value in items:
                state = int(state)
                if not 0 <= state < size:
                    raise MalformedInputError(f"state {state} outside {{0,1}}^{attribute_count}")
                if isinstance(value, float):
                    raise ModeError("floating mass given to an exact distribution")
                value = to_fraction(value)
                if value < 0:
                    raise MalformedInputError(f"negative mass {value} at state {state}")
                if value:
                    sparse[state] = sparse.get(state, Fraction(0)) + value
            total = sum(sparse.values(), Fraction(0))
            if total != 1:
                raise MalformedInputError(f"masses sum to {total}, not 1")
            object.__setattr__(self, "_mass", dict(sorted(sparse.items())))
            object.__setattr__(self, "_dense", None)
        else:
            check_k_limit(attribute_count, k_limit)
            if isinstance(mass, Mapping):
                dense = np.zeros(size)
                for state, value in mass.items():
                    dense[int(state)] += float(value)
            else:
                dense = np.array(mass, dtype=np.float64)
            if dense.shape != (size,):
                raise MalformedInputError(
                    f"dense distribution needs {size} entries, got {dense.shape}")
            if (dense < 0).any():
                raise MalformedInputError("negative mass in distribution")
            total = float(dense.sum())
            if abs(total - 1.0) > FLOAT_MASS_TOL:
                raise MalformedInputError(f"masses sum to {total!r}, not 1")
            dense.setflags(write=False)
            object.__setattr__(self, "_mass", None)
            object.__setattr__(self, "_dense", dense)

    def __setattr__(self, name, value):
        raise AttributeError("JointDistribution is immutable")

    @classmethod
    def uniform(cls, attribute_count: int, *, exact: bool = True) -> "JointDistribution":
        size = 1 << attribute_count
        if exact:
            w = Fraction(1, size)
            return cls({s: w for s in range(size)}, attribute_count, exact=True)
        return cls(np.full(size, 1.0 / size), attribute_count, exact=False)

    @classmethod
    def point_mass(cls, state: int, attribute_count: int) -> "JointDistribution":
        return cls({state: Fraction(1)}, attribute_count, exact=True)

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"<JointDistribution K={self.attribute_count} {mode} support={self.support_size}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointDistribution):
            return NotImplemented
        if other.exact != self.exact or other.attribute_count != self.attribute_count:
            return False
        if self.exact:
            return self._mass == other._mass
        return bool(np.array_equal(self._dense, other._dense))

    __hash__ = None

    def items(self) -> Iterator[tuple]:
        """``(state, mass)`` pairs over the support, in ascending state order."""
        if self.exact:
            return iter(self._mass.items())
        nz = np.flatnonzero(self._dense)
        return ((int(s), float(self._dense[s])) for s in nz)

    def mass(self, state: int):
        if self.exact:
            return self._mass.get(int(state), Fraction(0))
        return float(self._dense[int(state)])

    def support(self) -> list:
        return [s for s, _ in self.items()]

    @property
    def support_size(self) -> int:
        if self.exact:
            return len(self._mass)
        return int(np.count_nonzero(self._dense))

    def to_dense(self) -> np.ndarray:
        """Masses as a float vector of length ``2^K``."""
        if not self.exact:
            return self._dense
        check_k_limit(self.attribute_count)
        out = np.zeros(1 << self.attribute_count)
        for s, v in self._mass.items():
            out[s] = float(v)
        return out

    def event_probability(self, itemset: ItemsetLike, t):
        itemset = as_itemset(itemset)
        if itemset.max_index >= self.attribute_count:
            raise MalformedInputError(
                f"itemset {itemset!r} does not fit K = {self.attribute_count}")
        ones, zeros = _event_masks(itemset, t)
        care = ones | zeros
        if self.exact:
            return sum((v for s, v in self._mass.items() if s & care == ones), Fraction(0))
        states = np.arange(1 << self.attribute_count, dtype=np.int64)
        return float(self._dense[(states & care) == ones].sum())

    def frequency(self, itemset: ItemsetLike):
        itemset = as_itemset(itemset)
        return self.event_probability(itemset, (1,) * len(itemset))


def event_probability(p: JointDistribution, itemset: ItemsetLike, t):
    """Probability that the attributes of ``itemset`` take the values ``t``."""
    return p.event_probability(itemset, t)


def satisfies(p: JointDistribution, family: ItemsetFamily, theta, tol=0) -> bool:
    """Whether ``p`` reproduces every frequency in ``theta`` within ``tol``.

    Exact distributions with ``tol == 0`` are compared with rational equality.
    """
    theta = as_frequencies(theta)
    if len(theta) != len(family):
        raise MalformedInputError("frequencies are not aligned with the family")
    if tol < 0:
        raise MalformedInputError("tolerance must be nonnegative")
    if p.attribute_count < family.attribute_count:
        raise MalformedInputError("distribution has fewer attributes than the family")
    for member, value in zip(family, theta):
        f = p.frequency(member)
        if p.exact and tol == 0:
            if f != value:
                return False
        elif abs(float(f - value) if p.exact else f - float(value)) > tol:
            return False
    return True
