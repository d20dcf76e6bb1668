"""Finite outcome spaces, events, gambles, and exact belief states.

Everything here is exact: probabilities and payoffs are `fractions.Fraction`
values, so audit verdicts built on top of this module are tolerance-free.
All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "MAX_ATOMS",
    "Rational",
    "SpaceMismatchError",
    "UndefinedConditionalError",
    "as_fraction",
    "OutcomeSpace",
    "Event",
    "Gamble",
    "BeliefState",
]

#: Audit problems are desk scale; spaces beyond this are rejected.
MAX_ATOMS = 1 << 16

Rational = Union[Fraction, int, str]


class SpaceMismatchError(ValueError):
    """Two objects built over different outcome spaces were combined."""


class UndefinedConditionalError(ValueError):
    """Conditioning on an event of probability zero."""


def as_fraction(value: Rational) -> Fraction:
    """Parse a rational exactly.

    Accepts Fraction, int, or a string in "p/q" or decimal form ("3/5",
    "0.6").  Floats are rejected: binary floats rarely equal the decimal
    the caller had in mind, and exactness is the whole point.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(
        f"expected Fraction, int, or exact string, got {type(value).__name__}"
    )


def _check_same_space(a, b) -> None:
    if a.space is not b.space and a.space != b.space:
        raise SpaceMismatchError("operands belong to different outcome spaces")


@dataclass(frozen=True)
class OutcomeSpace:
    """An ordered finite set of mutually exclusive, exhaustive atoms."""

    atoms: tuple[str, ...]

    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(atoms)
        if not 1 <= len(atoms) <= MAX_ATOMS:
            raise ValueError(f"outcome space must have 1..{MAX_ATOMS} atoms, got {len(atoms)}")
        if len(set(atoms)) != len(atoms):
            raise ValueError("atom labels must be unique")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(atoms)})

    @property
    def size(self) -> int:
        return len(self.atoms)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown atom label {label!r}") from None

    def event(self, labels: Iterable[str]) -> Event:
        """Event containing the named atoms."""
        return Event(self, frozenset(self.index(lab) for lab in labels))

    def full_event(self) -> Event:
        return Event(self, frozenset(range(self.size)))

    def empty_event(self) -> Event:
        return Event(self, frozenset())

    def __eq__(self, other) -> bool:
        return isinstance(other, OutcomeSpace) and self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)


@dataclass(frozen=True)
class Event:
    """A subset of a space's atoms, closed under Boolean operations."""

    space: OutcomeSpace
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not all(0 <= i < self.space.size for i in self.members):
            raise ValueError("event members out of range for its space")

    def __and__(self, other: Event) -> Event:
        _check_same_space(self, other)
        return Event(self.space, self.members & other.members)

    def __or__(self, other: Event) -> Event:
        _check_same_space(self, other)
        return Event(self.space, self.members | other.members)

    def __invert__(self) -> Event:
        return Event(self.space, frozenset(range(self.space.size)) - self.members)

    def __contains__(self, atom: int) -> bool:
        return atom in self.members

    def indicator(self) -> Gamble:
        """Gamble paying $1 on the event's atoms and $0 elsewhere."""
        one, zero = Fraction(1), Fraction(0)
        return Gamble(self.space, tuple(one if i in self.members else zero
                                        for i in range(self.space.size)))

    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.atoms[i] for i in sorted(self.members))


@dataclass(frozen=True)
class Gamble:
    """A payoff in currency units attached to every atom."""

    space: OutcomeSpace
    payoffs: tuple[Fraction, ...]

    def __post_init__(self):
        payoffs = tuple(as_fraction(p) for p in self.payoffs)
        if len(payoffs) != self.space.size:
            raise ValueError("payoff must be defined on every atom")
        object.__setattr__(self, "payoffs", payoffs)

    @classmethod
    def from_map(cls, space: OutcomeSpace, payoff: Mapping[str, Rational]) -> Gamble:
        missing = set(space.atoms) - set(payoff)
        if missing:
            raise ValueError(f"payoff missing for atoms {sorted(missing)}")
        return cls(space, tuple(as_fraction(payoff[a]) for a in space.atoms))

    @classmethod
    def constant(cls, space: OutcomeSpace, value: Rational) -> Gamble:
        v = as_fraction(value)
        return cls(space, (v,) * space.size)


@dataclass(frozen=True)
class BeliefState:
    """An exact probability mass function over a finite outcome space."""

    space: OutcomeSpace
    pmf: tuple[Fraction, ...]

    def __post_init__(self):
        pmf = tuple(as_fraction(p) for p in self.pmf)
        if len(pmf) != self.space.size:
            raise ValueError("pmf must assign mass to every atom")
        if any(p < 0 for p in pmf):
            raise ValueError("pmf masses must be nonnegative")
        if sum(pmf) != 1:
            raise ValueError(f"pmf masses must sum to exactly 1, got {sum(pmf)}")
        object.__setattr__(self, "pmf", pmf)

    @classmethod
    def uniform(cls, space: OutcomeSpace) -> BeliefState:
        return cls(space, (Fraction(1, space.size),) * space.size)

    @classmethod
    def from_map(cls, space: OutcomeSpace, pmf: Mapping[str, Rational]) -> BeliefState:
        return cls(space, tuple(as_fraction(pmf.get(a, 0)) for a in space.atoms))

    def prob(self, e: Event) -> Fraction:
        """Probability of the event: the sum of its atoms' masses."""
        _check_same_space(self, e)
        return sum((self.pmf[i] for i in e.members), Fraction(0))

    def cond_prob(self, e: Event, d: Event) -> Fraction:
        """Conditional probability prob(e and d) / prob(d), exactly."""
        _check_same_space(self, e)
        _check_same_space(self, d)
        pd = self.prob(d)
        if pd == 0:
            raise UndefinedConditionalError(
                "conditional probability undefined: condition has probability 0"
            )
        return self.prob(e & d) / pd

    def expectation(self, g: Gamble) -> Fraction:
        """Fair price of the gamble: the pmf-weighted payoff sum."""
        _check_same_space(self, g)
        return sum((p * x for p, x in zip(self.pmf, g.payoffs)), Fraction(0))
