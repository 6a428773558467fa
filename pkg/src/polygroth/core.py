"""Polyadic (n-ary) operations on finite or rule-described carriers.

The checkers here are deliberately blunt instruments: exhaustive enumeration
where the carrier is finite and enumerated, seeded sampling or bounded witness
search otherwise.  Whenever a search is bounded, a negative outcome means
"not found within the bound", never a proof of absence.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import (
    ArityMismatch,
    ExhaustiveOnInfiniteCarrier,
    NonMember,
    NotAZero,
    QuerNotFound,
    QuerNotUnique,
    QuerPlacementFailed,
    UsageError,
)

DEFAULT_SEED = 97


def env_threads() -> int:
    """Parallelism cap taken from POLYGROTH_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("POLYGROTH_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# carriers


class Carrier:
    """A set of elements: finite and enumerated, or membership-rule based."""

    is_finite = False
    witness_bound = 0
    name = ""

    def __contains__(self, x) -> bool:
        raise NotImplementedError

    def canonical(self, x):
        return x

    def eq(self, x, y) -> bool:
        return x == y

    def elements(self, bound: int | None = None) -> list:
        """Deterministic element list; `bound` caps how many are returned."""
        raise NotImplementedError

    def render(self, x) -> str:
        return str(x)

    def sort_key(self, x):
        return x


class FiniteCarrier(Carrier):
    """Duplicate-free ordered element list; supports exhaustive checks."""

    is_finite = True

    def __init__(self, elements: Iterable, labels: Sequence[str] | None = None, name: str = ""):
        self._elements = list(elements)
        self._index: dict = {}
        for i, e in enumerate(self._elements):
            if e in self._index:
                raise ValueError(f"duplicate carrier element {e!r}")
            self._index[e] = i
        if labels is not None and len(labels) != len(self._elements):
            raise ValueError("labels must list exactly one name per element")
        self.labels = list(labels) if labels is not None else None
        self.name = name
        self.witness_bound = len(self._elements)

    def __contains__(self, x):
        return x in self._index

    def __len__(self):
        return len(self._elements)

    def index(self, x) -> int:
        return self._index[x]

    def elements(self, bound=None):
        return list(self._elements) if bound is None else self._elements[:bound]

    def render(self, x):
        return self.labels[self._index[x]] if self.labels else str(x)

    def sort_key(self, x):
        return self._index[x]


class RuleCarrier(Carrier):
    """Membership rule plus a deterministic truncated enumeration.

    The enumeration feeds witness searches and partition domains; it is never
    treated as the whole carrier.
    """

    is_finite = False

    def __init__(self, member: Callable, universe: Iterable, canonical=None, eq=None,
                 render=None, sort_key=None, name: str = ""):
        self._member = member
        self._universe = list(universe)
        self._canonical = canonical
        self._eq = eq
        self._render = render
        self._sort_key = sort_key
        self.name = name
        self.witness_bound = len(self._universe)

    def __contains__(self, x):
        return bool(self._member(x))

    def canonical(self, x):
        return self._canonical(x) if self._canonical else x

    def eq(self, x, y):
        return self._eq(x, y) if self._eq else x == y

    def elements(self, bound=None):
        return list(self._universe) if bound is None else self._universe[:bound]

    def render(self, x):
        return self._render(x) if self._render else str(x)

    def sort_key(self, x):
        return self._sort_key(x) if self._sort_key else x


# ---------------------------------------------------------------------------
# operations and structures


@dataclass(frozen=True)
class NAryOperation:
    """An arity together with a total evaluator on polyads (tuples)."""

    arity: int
    fn: Callable[[tuple], object]
    name: str = ""

    def __post_init__(self):
        if self.arity < 1:
            raise ArityMismatch(f"arity must be >= 1, got {self.arity}")

    def __call__(self, polyad):
        return self.fn(tuple(polyad))


def iterated_arity(arity: int, ell: int) -> int:
    """Arity of the ell-fold iterated product: ell*(arity-1)+1."""
    return ell * (arity - 1) + 1


def iterated_eval(op: NAryOperation, ell: int, polyad: Sequence):
    """Left-nested ell-fold composition: collapse the first `arity` slots,
    then fold in arity-1 further slots per iteration."""
    n = op.arity
    need = iterated_arity(n, ell)
    if len(polyad) != need:
        raise ArityMismatch(
            f"iterated {n}-ary product with ell={ell} takes {need} arguments, got {len(polyad)}"
        )
    acc = op.fn(tuple(polyad[:n]))
    pos = n
    for _ in range(ell - 1):
        acc = op.fn((acc,) + tuple(polyad[pos:pos + n - 1]))
        pos += n - 1
    return acc


def iterate(op: NAryOperation, ell: int) -> NAryOperation:
    """The ell-fold iterated product as a first-class operation."""
    if ell < 1:
        raise ArityMismatch(f"iteration count must be >= 1, got {ell}")
    if ell == 1:
        return op
    return NAryOperation(
        iterated_arity(op.arity, ell),
        lambda polyad, _op=op, _ell=ell: iterated_eval(_op, _ell, polyad),
        name=f"{op.name or 'op'}^o{ell}",
    )


@dataclass(eq=False)
class PolyadicStructure:
    """A carrier together with one n-ary operation.

    `facts` caches checker outputs (index tables, zeros); every entry is
    reproducible by re-running the corresponding checker.
    """

    carrier: Carrier
    op: NAryOperation
    name: str = ""
    facts: dict = field(default_factory=dict, repr=False)

    @property
    def arity(self) -> int:
        return self.op.arity


def derived_structure(carrier: Carrier, binary_op: NAryOperation, arity: int,
                      name: str = "") -> PolyadicStructure:
    """Structure whose operation iterates a binary one up to `arity`."""
    if binary_op.arity != 2:
        raise ArityMismatch("derived structures iterate a binary operation")
    return PolyadicStructure(carrier, iterate(binary_op, arity - 1), name=name)


# ---------------------------------------------------------------------------
# check modes and verdicts


@dataclass(frozen=True)
class CheckMode:
    kind: str
    count: int = 0
    seed: int = 0

    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"

    @classmethod
    def exhaustive(cls) -> "CheckMode":
        return cls(cls.EXHAUSTIVE)

    @classmethod
    def sampled(cls, count: int, seed: int) -> "CheckMode":
        return cls(cls.SAMPLED, count, seed)

    @classmethod
    def parse(cls, text: str) -> "CheckMode":
        if text == "exhaustive":
            return cls.exhaustive()
        parts = text.split(":")
        if len(parts) == 3 and parts[0] == "sampled":
            try:
                return cls.sampled(int(parts[1]), int(parts[2]))
            except ValueError:
                pass
        raise UsageError(f"bad mode {text!r}: expected 'exhaustive' or 'sampled:COUNT:SEED'")

    def __str__(self):
        if self.kind == self.EXHAUSTIVE:
            return "exhaustive"
        return f"sampled:{self.count}:{self.seed}"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a law check.

    status is one of 'proved-exhaustive', 'passed-sampled', 'failed'.  A
    failed verdict always carries a replayable counterexample:
    (polyad, placement_i, placement_j, result_i, result_j).
    """

    status: str
    checked: int
    counterexample: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.status != "failed"

    def __str__(self):
        if self.status == "failed":
            polyad, i, j, ri, rj = self.counterexample
            return f"failed(polyad={polyad}, placements {i}/{j} give {ri!r} vs {rj!r})"
        return f"{self.status}({self.checked})"


def placement_result(op: NAryOperation, polyad: Sequence, i: int):
    """Collapse the inner window starting at slot i, then apply the outer op."""
    n = op.arity
    inner = op.fn(tuple(polyad[i:i + n]))
    return op.fn(tuple(polyad[:i]) + (inner,) + tuple(polyad[i + n:]))


# ---------------------------------------------------------------------------
# basic evaluation


def evaluate(s: PolyadicStructure, args: Sequence):
    """Apply the structure's operation after validating the polyad."""
    args = tuple(args)
    if len(args) != s.arity:
        raise ArityMismatch(f"{s.name or 'structure'} takes {s.arity} arguments, got {len(args)}")
    for a in args:
        if a not in s.carrier:
            raise NonMember(a, s.name or s.carrier.name)
    return s.op.fn(args)


def polyadic_power(s: PolyadicStructure, g, ell: int):
    """g to the ell-th polyadic power: the iterated product of ell*(n-1)+1 copies."""
    if g not in s.carrier:
        raise NonMember(g, s.name or s.carrier.name)
    return iterated_eval(s.op, ell, (g,) * iterated_arity(s.arity, ell))


def find_zeros(s: PolyadicStructure, bound: int | None = None) -> list:
    """All absorbing elements, at every placement.

    On rule-based carriers this is a bounded scan: quantifiers range over the
    generated elements only.
    """
    elems = s.carrier.elements(bound)
    n, op, eq = s.arity, s.op, s.carrier.eq
    zeros = []
    for z in elems:
        if all(
            eq(op.fn(t[:i] + (z,) + t[i:]), z)
            for t in itertools.product(elems, repeat=n - 1)
            for i in range(n)
        ):
            zeros.append(z)
    return zeros


def is_nilpotent(s: PolyadicStructure, g, ell: int, z) -> bool:
    """Whether the ell-th polyadic power of g hits the zero z."""
    zeros = s.facts.get("zeros")
    if zeros is None:
        zeros = find_zeros(s)
        s.facts["zeros"] = zeros
    if not any(s.carrier.eq(z, z0) for z0 in zeros):
        raise NotAZero(z)
    return s.carrier.eq(polyadic_power(s, g, ell), z)


def find_identities(s: PolyadicStructure, bound: int | None = None) -> list:
    """Elements neutral at every argument position (bounded scan on rules)."""
    elems = s.carrier.elements(bound)
    n, op, eq = s.arity, s.op, s.carrier.eq
    out = []
    for e in elems:
        if all(
            eq(op.fn((e,) * i + (g,) + (e,) * (n - 1 - i)), g)
            for g in elems
            for i in range(n)
        ):
            out.append(e)
    return out


def identity_placements(s: PolyadicStructure, e, bound: int | None = None) -> tuple:
    """Per-slot verdicts: slot i holds iff op[e^i, g, e^(n-1-i)] = g for all scanned g."""
    elems = s.carrier.elements(bound)
    n, op, eq = s.arity, s.op, s.carrier.eq
    return tuple(
        all(eq(op.fn((e,) * i + (g,) + (e,) * (n - 1 - i)), g) for g in elems)
        for i in range(n)
    )


def is_neutral_polyad(s: PolyadicStructure, polyad: Sequence, bound: int | None = None) -> bool:
    """Whether the (n-1)-tuple acts as an identity at every insertion point."""
    polyad = tuple(polyad)
    if len(polyad) != s.arity - 1:
        raise ArityMismatch(f"neutral polyad must have length {s.arity - 1}")
    elems = s.carrier.elements(bound)
    op, eq = s.op, s.carrier.eq
    return all(
        eq(op.fn(polyad[:i] + (g,) + polyad[i:]), g)
        for g in elems
        for i in range(s.arity)
    )


# ---------------------------------------------------------------------------
# total associativity


def _index_table(s: PolyadicStructure):
    """Flat Cayley table over element indices, cached on the structure."""
    cached = s.facts.get("index_table")
    if cached is not None:
        return cached
    elems = s.carrier.elements()
    k = len(elems)
    n = s.arity
    index = {e: i for i, e in enumerate(elems)}
    table = [0] * (k ** n)
    flat = 0
    for t in itertools.product(elems, repeat=n):
        r = s.op.fn(t)
        if r not in index:
            raise NonMember(r, f"{s.name or 'structure'} (operation is not closed)")
        table[flat] = index[r]
        flat += 1
    s.facts["index_table"] = (table, k)
    return table, k


def _assoc_scan(table, k, n, start, stop):
    """Scan tuple codes [start, stop); return (code, placement) of the first
    disagreement with placement 0, or None."""
    L = 2 * n - 1
    pw = [k ** e for e in range(L + 1)]
    pn = pw[n]
    for T in range(start, stop):
        first = None
        for i in range(n):
            q = pw[n - 1 - i]
            inner = table[(T // q) % pn]
            out = table[((T // pw[L - i]) * k + inner) * q + T % q]
            if i == 0:
                first = out
            elif out != first:
                return (T, i)
    return None


def _decode_polyad(elems, k, L, T):
    pw = [k ** e for e in range(L)]
    return tuple(elems[(T // pw[L - 1 - j]) % k] for j in range(L))


def check_total_associativity(s: PolyadicStructure, mode: CheckMode,
                              threads: int | None = None) -> Verdict:
    """Invariance of the doubly applied product under all n inner placements.

    Exhaustive mode covers every (2n-1)-tuple of a finite carrier and reports
    the lexicographically smallest counterexample; sampled mode draws tuples
    deterministically from the seed.
    """
    n = s.arity
    if mode.kind == CheckMode.EXHAUSTIVE:
        if not s.carrier.is_finite:
            raise ExhaustiveOnInfiniteCarrier(
                "exhaustive associativity needs a finite enumerated carrier"
            )
        table, k = _index_table(s)
        L = 2 * n - 1
        total = k ** L
        threads = threads or env_threads()
        if threads <= 1:
            hit = _assoc_scan(table, k, n, 0, total)
        else:
            chunk = (total + threads - 1) // threads
            ranges = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                hits = [h for h in pool.map(lambda r: _assoc_scan(table, k, n, *r), ranges) if h]
            hit = min(hits) if hits else None
        if hit is None:
            return Verdict("proved-exhaustive", total)
        T, i = hit
        polyad = _decode_polyad(s.carrier.elements(), k, L, T)
        r0 = placement_result(s.op, polyad, 0)
        ri = placement_result(s.op, polyad, i)
        return Verdict("failed", T + 1, (polyad, 0, i, r0, ri))

    elems = s.carrier.elements()
    if not elems:
        raise UsageError("cannot sample from an empty carrier enumeration")
    rng = random.Random(mode.seed)
    L = 2 * n - 1
    for c in range(mode.count):
        polyad = tuple(rng.choice(elems) for _ in range(L))
        bad = _placements_disagree(s, polyad)
        if bad is not None:
            i, j, ri, rj = bad
            return Verdict("failed", c + 1, (polyad, i, j, ri, rj))
    return Verdict("passed-sampled", mode.count)


def _placements_disagree(s: PolyadicStructure, polyad):
    op, n, eq = s.op, s.arity, s.carrier.eq
    base = placement_result(op, polyad, 0)
    for i in range(1, n):
        ri = placement_result(op, polyad, i)
        if not eq(ri, base):
            return (0, i, base, ri)
    return None


# ---------------------------------------------------------------------------
# commutativity


@dataclass(frozen=True)
class CommutativityReport:
    """Strongest passing level among full > semi > sigma, else none."""

    level: str
    sigma: tuple | None
    checked: int
    full_failure: tuple | None = None

    def __str__(self):
        if self.level == "sigma":
            return f"sigma{self.sigma}"
        return self.level


def commutativity_report(s: PolyadicStructure, mode: CheckMode,
                         sigma: Sequence[int] | None = None) -> CommutativityReport:
    """Classify invariance under argument permutations.

    full: all permutations (checked through adjacent transpositions);
    semi: first/last swap with every fixed middle polyad;
    sigma: a caller-supplied permutation, reported only when full and semi fail.
    """
    n, op, eq = s.arity, s.op, s.carrier.eq
    elems = s.carrier.elements()
    if n == 1:
        return CommutativityReport("full", None, 0)
    if mode.kind == CheckMode.EXHAUSTIVE:
        if not s.carrier.is_finite:
            raise ExhaustiveOnInfiniteCarrier(
                "exhaustive commutativity needs a finite enumerated carrier"
            )
        pool = list(itertools.product(elems, repeat=n))
    else:
        rng = random.Random(mode.seed)
        pool = [tuple(rng.choice(elems) for _ in range(n)) for _ in range(mode.count)]
    checked = len(pool)

    def violation(perm):
        for t in pool:
            pt = tuple(t[p] for p in perm)
            if not eq(op.fn(t), op.fn(pt)):
                return (t, tuple(perm))
        return None

    full_failure = None
    for j in range(n - 1):
        adj = tuple(range(j)) + (j + 1, j) + tuple(range(j + 2, n))
        full_failure = violation(adj)
        if full_failure:
            break
    if full_failure is None:
        return CommutativityReport("full", None, checked)

    first_last = (n - 1,) + tuple(range(1, n - 1)) + (0,)
    if violation(first_last) is None:
        return CommutativityReport("semi", None, checked, full_failure)

    if sigma is not None and violation(sigma) is None:
        return CommutativityReport("sigma", tuple(sigma), checked, full_failure)
    return CommutativityReport("none", None, checked, full_failure)


# ---------------------------------------------------------------------------
# querelements, Doernte relations, group verification


def querelement(s: PolyadicStructure, g, bound: int | None = None):
    """The unique x with op[g^(n-1), x] = g, verified at every placement of x.

    Search is exhaustive on finite carriers and bounded on rule-based ones.
    """
    if g not in s.carrier:
        raise NonMember(g, s.name or s.carrier.name)
    n, op, eq = s.arity, s.op, s.carrier.eq
    elems = s.carrier.elements(bound)
    head = (g,) * (n - 1)
    sols = [x for x in elems if eq(op.fn(head + (x,)), g)]
    if not sols:
        raise QuerNotFound(g, len(elems))
    if len(sols) > 1:
        raise QuerNotUnique(g, sols)
    q = sols[0]
    for i in range(n - 1):
        if not eq(op.fn((g,) * i + (q,) + (g,) * (n - 1 - i)), g):
            raise QuerPlacementFailed(g, q, i)
    return q


def check_doernte(s: PolyadicStructure, g, h, bound: int | None = None) -> bool:
    """Cancellation identities: op[g, n_h] = op[n_h, g] = g where
    n_h = (h^(n-2), quer(h)) with the quer at any slot."""
    n = s.arity
    hq = querelement(s, h, bound)
    op, eq = s.op, s.carrier.eq
    for i in range(n - 1):
        polyad = (h,) * i + (hq,) + (h,) * (n - 2 - i)
        if not eq(op.fn((g,) + polyad), g):
            return False
        if not eq(op.fn(polyad + (g,)), g):
            return False
    return True


@dataclass(frozen=True)
class GroupVerdict:
    is_group: bool
    associativity: Verdict
    solvability_failures: tuple
    checked: int
    note: str = ""

    def __str__(self):
        if self.is_group:
            return f"group ({self.note}, {self.checked} instances)"
        if not self.associativity.ok:
            return f"not a group (associativity: {self.associativity})"
        return f"not a group (solvability failures: {self.solvability_failures[:2]})"


def verify_polyadic_group(s: PolyadicStructure, mode: CheckMode,
                          threads: int | None = None, max_failures: int = 3) -> GroupVerdict:
    """Total associativity plus unique solvability at every argument slot.

    On finite carriers, exhaustive mode checks that fixing any n-1 arguments
    makes the remaining slot a bijection of the carrier.  Sampled mode (the
    only choice on rule-based carriers) counts solutions within the generated
    elements, so a boundary failure reads "unsolvable within bound".
    """
    assoc = check_total_associativity(s, mode, threads)
    n = s.arity
    failures: list = []
    checked = 0
    if mode.kind == CheckMode.EXHAUSTIVE:
        table, k = _index_table(s)
        elems = s.carrier.elements()
        done = False
        for i in range(n):
            if done:
                break
            for others in itertools.product(range(k), repeat=n - 1):
                seen = [False] * k
                ok = True
                pre, post = others[:i], others[i:]
                for h in range(k):
                    idx = 0
                    for d in pre + (h,) + post:
                        idx = idx * k + d
                    r = table[idx]
                    if seen[r]:
                        ok = False
                        break
                    seen[r] = True
                checked += 1
                if not ok:
                    failures.append((i, tuple(elems[d] for d in others)))
                    if len(failures) >= max_failures:
                        done = True
                        break
        note = "exhaustive unique solvability at every slot"
    else:
        rng = random.Random(mode.seed)
        elems = s.carrier.elements()
        eq = s.carrier.eq
        for _ in range(mode.count):
            i = rng.randrange(n)
            others = tuple(rng.choice(elems) for _ in range(n - 1))
            g = rng.choice(elems)
            sols = [h for h in elems if eq(s.op.fn(others[:i] + (h,) + others[i:]), g)]
            checked += 1
            if len(sols) != 1:
                failures.append((i, others, g, len(sols)))
                if len(failures) >= max_failures:
                    break
        note = f"sampled solvability within the first {len(elems)} generated elements"
    return GroupVerdict(assoc.ok and not failures, assoc, tuple(failures), checked, note)


# ---------------------------------------------------------------------------
# bundled report


@dataclass(frozen=True)
class StructureReport:
    totally_associative: Verdict
    identities: tuple
    zeros: tuple
    commutativity: CommutativityReport


def structure_report(s: PolyadicStructure, mode: CheckMode,
                     sigma: Sequence[int] | None = None) -> StructureReport:
    return StructureReport(
        check_total_associativity(s, mode),
        tuple(find_identities(s)),
        tuple(find_zeros(s)),
        commutativity_report(s, mode, sigma),
    )
