"""Two-time coherence: beliefs about future beliefs.

A `TemporalModel` is a t=0 joint distribution over propositions
"my t=tau probability for E will be q" (one cell per candidate value q)
together with E itself, and optionally a base event D whose truth will be
revealed at t=tau.  The tools here:

* detect violations of the constraint P0(E | Ptau(E)=q) = q;
* build the canonical three-transaction sure-loss portfolio against any
  violation, with cash legs at both times;
* recover strict conditionalization as the special case where one event D
  determines the future value with certainty;
* run the same machinery for two agents sharing liability (solidarity);
* apply partition-based (Jeffrey) updates to a belief state.

Money at the two times trades at par: a zero interest rate is hard-coded.
Negative realized amounts are agent losses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .beliefs import (
    BeliefState,
    Event,
    OutcomeSpace,
    Rational,
    as_fraction,
)

__all__ = [
    "PositivityError",
    "NoViolationError",
    "ReflectionViolationError",
    "StrategyNotAdoptedError",
    "UndefinedUpdateError",
    "Violation",
    "Ticket",
    "TimedLeg",
    "TimedPortfolio",
    "TemporalModel",
    "reflection_check",
    "goldstein_expectation",
    "build_reflection_dutch_book",
    "realize",
    "ConditioningResult",
    "conditioning_strategy_check",
    "solidarity_check",
    "jeffrey_update",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


class PositivityError(ValueError):
    """The targeted future-value proposition has probability zero."""


class NoViolationError(ValueError):
    """A sure-loss portfolio was requested where no violation exists."""


class ReflectionViolationError(ValueError):
    """An operation requiring a violation-free model found violations."""


class StrategyNotAdoptedError(ValueError):
    """The joint does not encode certainty about the post-learning value."""


class UndefinedUpdateError(ValueError):
    """Partition update moves positive mass onto a zero-probability cell."""


@dataclass(frozen=True)
class Violation:
    """One future value whose t=0 conditional disagrees with it."""

    q: Fraction
    conditional: Fraction  # t=0 probability of E given the value proposition
    gap: Fraction          # conditional - q


class TemporalModel:
    """t=0 joint over (future value of P(E), truth of E[, truth of D]).

    The value cells partition the space: the marginal over candidate values
    sums to one, and the mass of cell i is the t=0 probability that the
    agent's t=tau value for E will be ``qs[i]``.
    """

    def __init__(
        self,
        qs: Sequence[Rational],
        joint: Mapping[tuple, Rational],
        condition_label: str = "Q",
    ):
        self.qs = tuple(as_fraction(q) for q in qs)
        if len(set(self.qs)) != len(self.qs):
            raise ValueError("candidate future values must be distinct")
        if any(not 0 <= q <= 1 for q in self.qs):
            raise ValueError("candidate future values must lie in [0, 1]")
        key_lens = {len(k) for k in joint}
        if key_lens - {2, 3} or len(key_lens) != 1:
            raise ValueError("joint keys must be uniformly (i, e) or (i, e, d)")
        self.has_base = key_lens == {3}
        self.condition_label = condition_label

        labels = []
        index = {}
        for i, q in enumerate(self.qs):
            for e in (True, False):
                for d in ((True, False) if self.has_base else (None,)):
                    key = (i, e) if d is None else (i, e, d)
                    name = f"q={q}," + ("E" if e else "~E")
                    if d is not None:
                        name += ",D" if d else ",~D"
                    index[key] = len(labels)
                    labels.append(name)
        space = OutcomeSpace(labels)
        pmf = [_ZERO] * len(labels)
        for key, mass in joint.items():
            if key not in index:
                raise ValueError(f"joint key {key!r} does not match the model shape")
            pmf[index[key]] = as_fraction(mass)
        self.joint = BeliefState(space, tuple(pmf))
        self._index = index

    @classmethod
    def from_conditionals(
        cls,
        qs: Sequence[Rational],
        masses: Sequence[Rational],
        e_given_q: Sequence[Rational],
        condition_label: str = "Q",
    ) -> TemporalModel:
        """Build a base-event-free model from per-cell mass and P(E | cell)."""
        qs = [as_fraction(q) for q in qs]
        masses = [as_fraction(m) for m in masses]
        conds = [as_fraction(c) for c in e_given_q]
        if not len(qs) == len(masses) == len(conds):
            raise ValueError("qs, masses, and conditionals must align")
        joint = {}
        for i, (m, c) in enumerate(zip(masses, conds)):
            joint[(i, True)] = m * c
            joint[(i, False)] = m * (1 - c)
        return cls(qs, joint, condition_label)

    @property
    def space(self) -> OutcomeSpace:
        return self.joint.space

    def value_event(self, i: int) -> Event:
        """Proposition: the t=tau value equals qs[i]."""
        members = frozenset(idx for key, idx in self._index.items() if key[0] == i)
        return Event(self.space, members)

    def e_event(self) -> Event:
        members = frozenset(idx for key, idx in self._index.items() if key[1])
        return Event(self.space, members)

    def d_event(self) -> Event:
        if not self.has_base:
            raise ValueError("model has no base event")
        members = frozenset(idx for key, idx in self._index.items() if key[2])
        return Event(self.space, members)

    def value_mass(self, i: int) -> Fraction:
        return self.joint.prob(self.value_event(i))


@dataclass(frozen=True)
class Ticket:
    """A lottery ticket's settlement payout per (condition, E) branch."""

    description: str
    payouts: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    def payout(self, cond_true: bool, e_true: bool) -> Fraction:
        return self.payouts[int(cond_true)][int(e_true)]


def _unit_ticket_on_e() -> Ticket:
    return Ticket("pays $1 if E", ((_ZERO, _ONE), (_ZERO, _ONE)))


def _called_off_ticket(price: Fraction, label: str) -> Ticket:
    return Ticket(
        f"pays $1 if {label} and E, refunds ${price} if not {label}",
        ((price, price), (_ZERO, _ONE)),
    )


def _condition_stake_ticket(stake: Fraction, label: str) -> Ticket:
    return Ticket(f"pays ${stake} if {label}", ((_ZERO, _ZERO), (stake, stake)))


@dataclass(frozen=True)
class TimedLeg:
    time: str      # "t0" | "t_tau"
    trigger: str   # "always" | "if-<label>-true"
    direction: str
    ticket: Ticket
    price: Fraction

    def __post_init__(self):
        if self.time not in ("t0", "t_tau"):
            raise ValueError(f"unknown time {self.time!r}")
        if self.direction not in ("buy", "sell"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.time == "t_tau" and self.trigger == "always":
            raise ValueError("t_tau legs must carry a trigger")
        object.__setattr__(self, "price", as_fraction(self.price))


@dataclass(frozen=True)
class TimedPortfolio:
    """Transactions tagged with execution time and trigger condition."""

    legs: tuple[TimedLeg, ...]
    condition_label: str = "Q"

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(self.legs))


def reflection_check(m: TemporalModel) -> list[Violation]:
    """Report every positive-mass value cell whose conditional misses it.

    Zero-mass cells are skipped: with nothing staked on the proposition, no
    transaction can be hung on it.  An empty list means the model's t=0
    conditionals match the announced future values exactly.
    """
    violations = []
    e = m.e_event()
    for i, q in enumerate(m.qs):
        cell = m.value_event(i)
        if m.joint.prob(cell) == 0:
            continue
        cond = m.joint.cond_prob(e, cell)
        if cond != q:
            violations.append(Violation(q, cond, cond - q))
    return violations


def goldstein_expectation(m: TemporalModel) -> Fraction:
    """t=0 expectation of the t=tau value; equals P0(E) when no cell misses.

    Requires a violation-free model.  The returned sum over cells of
    mass * value is checked against P0(E) computed directly from the joint;
    with exact arithmetic the two cannot differ once reflection holds.
    """
    if reflection_check(m):
        raise ReflectionViolationError(
            "expectation identity requires a violation-free model"
        )
    total = sum((m.value_mass(i) * q for i, q in enumerate(m.qs)), _ZERO)
    direct = m.joint.prob(m.e_event())
    if total != direct:
        raise AssertionError("expectation identity failed on a violation-free model")
    return total


def _three_leg_book(
    cond_mass: Fraction,
    cond_value: Fraction,
    declared: Fraction,
    label: str,
) -> TimedPortfolio:
    """The canonical sure-loss construction against one condition cell.

    `cond_value` is the t=0 conditional of E given the cell, `declared` the
    price the agent is sure to trade at t=tau once the cell is true.  For a
    positive gap: buy the called-off ticket, buy the side bet, sell at
    t=tau; a negative gap mirrors the outer legs and keeps the side bet.
    """
    gap = cond_value - declared
    d = abs(gap)
    trigger = f"if-{label}-true"
    side_stake = d * _HALF
    legs = (
        TimedLeg(
            "t0", "always", "buy" if gap > 0 else "sell",
            _called_off_ticket(cond_value, label), cond_value,
        ),
        TimedLeg(
            "t0", "always", "buy",
            _condition_stake_ticket(side_stake, label), cond_mass * side_stake,
        ),
        TimedLeg(
            "t_tau", trigger, "sell" if gap > 0 else "buy",
            _unit_ticket_on_e(), declared,
        ),
    )
    return TimedPortfolio(legs, label)


def build_reflection_dutch_book(m: TemporalModel, q: Rational) -> TimedPortfolio:
    """Sure-loss transactions against a positive-mass cell missing its value.

    Three legs: a called-off ticket on E given the cell, a side bet on the
    cell at half the gap, and a pre-committed t=tau trade on E at the
    announced value.  Realizes strictly negative on all four branches:
    -(mass+1)*|gap|/2 when the cell is true, -mass*|gap|/2 when false.
    """
    q = as_fraction(q)
    try:
        i = m.qs.index(q)
    except ValueError:
        raise ValueError(f"{q} is not among the model's candidate values") from None
    mass = m.value_mass(i)
    if mass == 0:
        raise PositivityError(f"cell for value {q} has probability zero")
    cond = m.joint.cond_prob(m.e_event(), m.value_event(i))
    if cond == q:
        raise NoViolationError(f"no violation at value {q}; conditional equals it")
    return _three_leg_book(mass, cond, q, m.condition_label)


def realize(p: TimedPortfolio, cond_true: bool, e_true: bool) -> Fraction:
    """Net cash to the agent on one (condition, E) branch.

    Triggered legs execute only on branches where the condition is true;
    refunds are part of the ticket payouts, so the sum is a plain
    price-versus-payout ledger.
    """
    total = _ZERO
    for leg in p.legs:
        if leg.trigger != "always" and not cond_true:
            continue
        net = leg.ticket.payout(cond_true, e_true) - leg.price
        total += net if leg.direction == "buy" else -net
    return total


@dataclass(frozen=True)
class ConditioningResult:
    """Outcome of auditing an adopted learn-D-then-set-q strategy."""

    forced_q: Fraction
    declared_q: Fraction
    portfolio: TimedPortfolio | None

    @property
    def coherent(self) -> bool:
        return self.portfolio is None


def conditioning_strategy_check(
    m: TemporalModel,
    declared_q: Rational | None = None,
) -> ConditioningResult:
    """Audit a strategy "on learning D, my value for E becomes q".

    The strategy must be encoded in the joint: conditional on D, exactly one
    value cell carries all the mass (that cell's value is the declared q;
    an explicit `declared_q` is cross-checked against it).  Coherence then
    forces q to equal the t=0 conditional of E given D; any other declared
    value admits the same three-leg construction with D as the condition.
    """
    if not m.has_base:
        raise StrategyNotAdoptedError("model carries no base event to learn")
    d_event = m.d_event()
    d_mass = m.joint.prob(d_event)
    if d_mass == 0:
        raise StrategyNotAdoptedError("base event has probability zero")
    certain = [
        i for i in range(len(m.qs))
        if m.joint.cond_prob(m.value_event(i), d_event) == 1
    ]
    if len(certain) != 1:
        raise StrategyNotAdoptedError(
            "joint does not make any single future value certain given the base event"
        )
    adopted = m.qs[certain[0]]
    if declared_q is not None and as_fraction(declared_q) != adopted:
        raise StrategyNotAdoptedError(
            f"declared value {declared_q} differs from the encoded value {adopted}"
        )
    forced = m.joint.cond_prob(m.e_event(), d_event)
    if forced == adopted:
        return ConditioningResult(forced, adopted, None)
    book = _three_leg_book(d_mass, forced, adopted, "D")
    return ConditioningResult(forced, adopted, book)


def solidarity_check(m: TemporalModel) -> list[Violation]:
    """Reflection run across two agents sharing liability.

    Reinterpret each cell as "the other account holder's value for E is q";
    a violation exposes the shared account to the same three-leg sure loss,
    with transactions split between the two signatories.
    """
    return reflection_check(m)


def jeffrey_update(
    b: BeliefState,
    partition: Sequence[Event],
    new_probs: Sequence[Rational],
) -> BeliefState:
    """Reweight a belief state to hit new partition probabilities.

    Within each cell the relative odds are untouched; across cells the mass
    is scaled to the new targets.  A degenerate target (all mass on one
    cell) reduces to conditioning on that cell.
    """
    new_probs = [as_fraction(p) for p in new_probs]
    if len(partition) != len(new_probs):
        raise ValueError("partition and new probabilities must align")
    if any(p < 0 for p in new_probs):
        raise ValueError("new partition probabilities must be nonnegative")
    if sum(new_probs, _ZERO) != 1:
        raise ValueError("new partition probabilities must sum to exactly 1")
    covered: set[int] = set()
    for cell in partition:
        if cell.space != b.space:
            raise ValueError("partition cells must live on the state's space")
        if covered & cell.members:
            raise ValueError("partition cells must be mutually exclusive")
        covered |= cell.members
    if covered != set(range(b.space.size)):
        raise ValueError("partition must be exhaustive")

    pmf = list(b.pmf)
    for cell, target in zip(partition, new_probs):
        old = b.prob(cell)
        if old == 0:
            if target > 0:
                raise UndefinedUpdateError(
                    "cannot move positive mass onto a zero-probability cell"
                )
            continue
        factor = target / old
        for atom in cell.members:
            pmf[atom] = b.pmf[atom] * factor
    return BeliefState(b.space, tuple(pmf))
