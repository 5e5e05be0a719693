"""Branch-and-bound enumeration and exact counting of admissible tuples.

The search runs depth-first over sorted pairwise-coprime prefixes
(m0 <= ... <= mn), resolving the final coordinate in closed form: given the
prefix reciprocal sum S, the three bounds are linear in 1/m, so each
classification occupies an explicit integer interval of the last coordinate
(solved exactly with Fraction arithmetic), and counting reduces to
inclusion-exclusion coprime counts over those intervals.

Key facts the pruning relies on (all for sorted tuples, exact arithmetic;
S is the reciprocal sum of the n+1 prefix entries, m the last coordinate):

  fano         <=>  m*(1-S) < 1          (all m when S >= 1)
  new bound    <=>  m*(S-1) < n          (all m when S <= 1)
  old bound    <=>  n*m*(S-1) < 1        (all m when S <= 1)

so a NewOnlyKE tuple (new holds, old fails) forces S > 1, and an OldKE or
NewOnlyKE verdict confines m to a finite interval per prefix.  NotFano and
NoCriterion are infinite classes (for instance every sufficiently large
coprime last coordinate past a Fano prefix is NoCriterion), so requesting
them requires an explicit max_order.

The doubly-exponential sequence c1=2, c_{k+1} = c1*...*ck + 1 = ck^2-ck+1
supplies the classical family (c1,...,cn, c_{n+1}-2, m): its prefix sum is
1 + 1/D with D = (c_{n+1}-1)(c_{n+1}-2), so the new bound holds exactly for
m < n*D.  The family interval is rederived from that inequality rather than
taken as a closed form on faith; a tempting variant with the (n+2)-nd
sequence value in place of the (n+1)-st fails the derivation (already for
n=2 it would admit last coordinates up to 491 where the true bound is 60).
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import InputError, NodeBudgetExceeded, SearchSpaceTooLarge
from .exactmath import Rat, count_coprime_in_range, coprime_in_range, factorize
from .orbifold import CLASSIFICATIONS, FanoReport, RamTuple, classify, make_tuple

# Classes whose members form a finite set without any order cap.
_BOUNDED_CLASSES = frozenset({"OldKE", "NewOnlyKE"})

_BRUTE_FORCE_GUARD = 10 ** 8


# ---------------------------------------------------------------------------
# Sylvester sequence and family


def sylvester_seq(k: int) -> list[int]:
    """First k values of the sequence c1=2, c_{k+1} = c1*...*ck + 1.

    Both recursion forms (running product + 1, and ck^2 - ck + 1) are
    computed and must agree.  Capped at k <= 8: value 8 already has 27
    digits and nothing downstream needs more.
    """
    if not 1 <= k <= 8:
        raise InputError(f"k must be in 1..8, got {k}")
    seq = [2]
    prod = 2
    for _ in range(k - 1):
        seq.append(prod + 1)
        prod *= seq[-1]
    c = 2
    for i in range(1, k):
        c = c * c - c + 1
        if c != seq[i]:  # pragma: no cover - identity of the two recursions
            raise AssertionError("recursion forms disagree")
    return seq


@dataclass(frozen=True)
class SylvesterFamily:
    """The sequence-based family (c1,...,cn, c_{n+1}-2, m) for dimension n.

    last_interval is the open integer interval (lo_exclusive, hi_exclusive)
    of admissible last coordinates m: every m in it that is coprime to the
    prefix product satisfies the new bound.  forbidden_primes are the prime
    factors of the prefix product, i.e. the coprimality filter for m.
    """

    n: int
    prefix: tuple[int, ...]
    last_interval: tuple[int, int]
    forbidden_primes: tuple[int, ...]


def sylvester_family(n: int) -> SylvesterFamily:
    """Construct the family for dimension n (2 <= n <= 6).

    The admissible interval is derived by exact inequality solving: the
    prefix reciprocal sum is 1 + 1/D with D = (c_{n+1}-1)(c_{n+1}-2), so
    the new bound m*(S-1) < n gives exactly m < n*D.  The lower end is
    c_{n+1}-2 (the largest prefix entry).  n > 6 would need the prime
    factors of c8-2 ~ 1.1e26, past the factorization range this package
    supports.
    """
    if n < 2:
        raise InputError(f"family needs n >= 2, got {n}")
    if n > 6:
        raise InputError(
            f"family capped at n <= 6 (n={n} needs factoring a 27-digit value)"
        )
    seq = sylvester_seq(n + 1)
    c_top = seq[n]
    prefix = tuple(seq[:n]) + (c_top - 2,)
    d = (c_top - 1) * (c_top - 2)
    primes: set[int] = set()
    for entry in prefix:
        primes.update(factorize(entry).primes)
    fam = SylvesterFamily(
        n=n,
        prefix=prefix,
        last_interval=(c_top - 2, n * d),
        forbidden_primes=tuple(sorted(primes)),
    )
    # Construction-time spot check of the defining invariant.
    lo, hi = fam.last_interval
    for m in (lo + 1, hi - 1):
        if all(m % p for p in fam.forbidden_primes):
            t = make_tuple(n, prefix + (m,))
            if not classify(t).new_ok:  # pragma: no cover
                raise AssertionError("family interval violates the new bound")
    return fam


# ---------------------------------------------------------------------------
# Exact last-coordinate intervals

# Intervals are half-open [lo, hi) over candidate last coordinates; hi=None
# means unbounded above; None means empty.
Interval = "tuple[int, int | None] | None"


@dataclass(frozen=True)
class LastIntervals:
    """Exact integer ranges of the last coordinate for a fixed prefix.

    `fano`, `old`, `new` are the raw bound intervals (each bound taken on
    its own); `by_class` maps each classification to its sub-interval.  All
    intervals start no lower than `floor` = max(prefix); coprime filtering
    is the caller's step.
    """

    prefix: tuple[int, ...]
    n: int
    floor: int
    fano: tuple | None
    old: tuple | None
    new: tuple | None
    by_class: dict


def _clip(lo: int, hi, floor: int):
    lo = max(lo, floor)
    if hi is not None and lo >= hi:
        return None
    return (lo, hi)


def admissible_last_interval(prefix, n: int) -> LastIntervals:
    """Solve all three bounds for the last coordinate of a sorted prefix.

    prefix must hold the first n+1 orders, sorted nondecreasing and
    pairwise coprime; candidates for the last coordinate start at
    max(prefix) (sorted enumeration; coprimality later removes equality
    except for repeated unit orders).
    """
    prefix = tuple(int(m) for m in prefix)
    if not prefix:
        raise InputError("prefix must be nonempty")
    if len(prefix) != n + 1:
        raise InputError(f"dimension {n} needs a prefix of {n + 1} orders, got {len(prefix)}")
    if any(m < 1 for m in prefix):
        raise InputError("orders must be >= 1")
    if any(prefix[i] > prefix[i + 1] for i in range(len(prefix) - 1)):
        raise InputError("prefix must be sorted nondecreasing")
    prod = math.prod(prefix)
    if any(math.gcd(prefix[i], prod // prefix[i]) != 1 for i in range(len(prefix))):
        raise InputError("prefix must be pairwise coprime")

    s = sum(Fraction(1, m) for m in prefix)
    floor = prefix[-1]

    if s < 1:
        # fano <=> m < 1/(1-S); both bounds hold for every m.
        fano_hi = math.ceil(Fraction(1) / (1 - s))
        fano = _clip(floor, fano_hi, floor)
        old = (floor, None)
        new = (floor, None)
        by_class = {
            "NotFano": _clip(fano_hi, None, floor),
            "OldKE": fano,
            "NewOnlyKE": None,
            "NoCriterion": None,
        }
    elif s == 1:
        # Unreachable for pairwise-coprime prefixes (the reciprocal sum is a
        # fraction with denominator prod(prefix) in lowest terms), but the
        # algebra is well defined: every m is Fano and satisfies both bounds.
        fano = (floor, None)
        old = (floor, None)
        new = (floor, None)
        by_class = {
            "NotFano": None,
            "OldKE": (floor, None),
            "NewOnlyKE": None,
            "NoCriterion": None,
        }
    else:
        # S > 1: fano always; old <=> n*m*(S-1) < 1; new <=> m*(S-1) < n.
        old_hi = math.ceil(Fraction(1) / (n * (s - 1)))
        new_hi = math.ceil(Fraction(n) / (s - 1))
        fano = (floor, None)
        old = _clip(floor, old_hi, floor)
        new = _clip(floor, new_hi, floor)
        by_class = {
            "NotFano": None,
            "OldKE": old,
            "NewOnlyKE": _clip(old_hi, new_hi, floor),
            "NoCriterion": _clip(new_hi, None, floor),
        }
    return LastIntervals(
        prefix=prefix, n=n, floor=floor, fano=fano, old=old, new=new, by_class=by_class
    )


# ---------------------------------------------------------------------------
# Search configuration and results


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one enumeration run.

    classes is the set of classifications to emit/count.  Requesting any
    class outside {OldKE, NewOnlyKE} requires max_order, since those classes
    are infinite.  prefix_filter pins the leading orders (sorted, coprime).
    node_cap bounds the number of search nodes; hitting it raises
    NodeBudgetExceeded carrying the partial result, and forces serial
    execution so the partial result is deterministic.
    """

    n: int
    min_order: int = 2
    mode: str = "materialize"
    classes: tuple[str, ...] = ("NewOnlyKE",)
    prefix_filter: tuple[int, ...] | None = None
    max_order: int | None = None
    parallel_width: int = 1
    node_cap: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"dimension must be >= 1, got {self.n}")
        if self.min_order not in (1, 2):
            raise InputError(f"min_order must be 1 or 2, got {self.min_order}")
        if self.mode not in ("materialize", "count"):
            raise InputError(f"mode must be materialize or count, got {self.mode!r}")
        bad = [c for c in self.classes if c not in CLASSIFICATIONS]
        if bad or not self.classes:
            raise InputError(f"classes must be a nonempty subset of {CLASSIFICATIONS}")
        if not set(self.classes) <= _BOUNDED_CLASSES and self.max_order is None:
            unbounded = sorted(set(self.classes) - _BOUNDED_CLASSES)
            raise InputError(
                f"classes {unbounded} are infinite; set max_order to bound the search"
            )
        if self.max_order is not None and self.max_order < self.min_order:
            raise InputError("max_order below min_order")
        if self.parallel_width < 1:
            raise InputError("parallel_width must be >= 1")
        if self.node_cap is not None and self.node_cap < 1:
            raise InputError("node_cap must be >= 1")
        if self.prefix_filter is not None:
            pf = tuple(int(m) for m in self.prefix_filter)
            if len(pf) > self.n + 1:
                raise InputError("prefix_filter longer than the searchable prefix")
            if any(m < self.min_order for m in pf):
                raise InputError("prefix_filter entry below min_order")
            if any(pf[i] > pf[i + 1] for i in range(len(pf) - 1)):
                raise InputError("prefix_filter must be sorted nondecreasing")
            prod = math.prod(pf) if pf else 1
            if any(math.gcd(m, prod // m) != 1 for m in pf):
                raise InputError("prefix_filter must be pairwise coprime")
            object.__setattr__(self, "prefix_filter", pf)


@dataclass(frozen=True)
class EnumResult:
    """Outcome of an enumeration: materialized tuples and/or counts.

    counts always holds one entry per requested classification; tuples is
    None in count mode.  In materialize mode counts equal the list sizes.
    """

    tuples: tuple | None
    counts: dict
    nodes_visited: int
    elapsed_s: float


# ---------------------------------------------------------------------------
# The depth-first search


class _Search:
    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.n = cfg.n
        self.total_slots = cfg.n + 2
        self.prefix_slots = cfg.n + 1
        self.classes = set(cfg.classes)
        self.counts = {c: 0 for c in cfg.classes}
        self.nodes = 0

    def _bump(self):
        self.nodes += 1
        cap = self.cfg.node_cap
        if cap is not None and self.nodes > cap:
            partial = EnumResult(
                tuples=None,
                counts=dict(self.counts),
                nodes_visited=self.nodes,
                elapsed_s=0.0,
            )
            raise NodeBudgetExceeded(
                f"node cap {cap} exceeded (progress: {dict(self.counts)})", partial
            )

    def _candidate_state(self, v, s, depth):
        """(alive, dead_forever) of candidate v against the requested classes.

        s is the prefix sum before v; monotonicity in v justifies breaking
        the candidate loop only when every requested class is dead for all
        larger v as well.
        """
        s1 = s + Fraction(1, v)
        fano_reach = s + Fraction(self.total_slots - depth, v) > 1
        prefix_reach = s + Fraction(self.prefix_slots - depth, v) > 1
        alive = False
        forever = True
        for label in self.classes:
            if label == "NotFano":
                alive = True
                forever = False
                continue
            if label == "NoCriterion":
                if fano_reach:
                    alive = True
                forever = forever and not fano_reach
                continue
            if label == "OldKE":
                if fano_reach and (s1 <= 1 or self.n * v * (s1 - 1) < 1):
                    alive = True
                    forever = False
                else:
                    forever = forever and (not fano_reach or s >= 1)
                continue
            # NewOnlyKE
            if prefix_reach and (s1 <= 1 or v * (s1 - 1) < self.n):
                alive = True
                forever = False
            else:
                forever = forever and (not prefix_reach or s >= 1)
        return alive, forever

    def _leaf_windows(self, prefix):
        """Per-class last-coordinate windows [lo, hi_inclusive] for a full prefix."""
        intervals = admissible_last_interval(prefix, self.n)
        windows = []
        for label in CLASSIFICATIONS:
            if label not in self.classes:
                continue
            iv = intervals.by_class[label]
            if iv is None:
                continue
            lo, hi = iv
            if self.cfg.max_order is not None:
                hi = self.cfg.max_order + 1 if hi is None else min(hi, self.cfg.max_order + 1)
            if hi is None:
                raise AssertionError(
                    f"unbounded window for {label} escaped config validation"
                )  # pragma: no cover
            if lo < hi:
                windows.append((label, lo, hi - 1))
        windows.sort(key=lambda w: w[1])
        return windows

    def run_count(self, prefix, s, prod, primes):
        depth = len(prefix)
        if depth == self.prefix_slots:
            self._bump()
            for label, lo, hi in self._leaf_windows(prefix):
                self.counts[label] += count_coprime_in_range(lo, hi, primes)
            return
        for v, s1, prod1, primes1 in self._children(prefix, s, prod, primes):
            self.run_count(prefix + (v,), s1, prod1, primes1)

    def iter_materialize(self, prefix, s, prod, primes):
        depth = len(prefix)
        if depth == self.prefix_slots:
            self._bump()
            for label, lo, hi in self._leaf_windows(prefix):
                for m in coprime_in_range(lo, hi, prod):
                    t = RamTuple(self.n, prefix + (m,))
                    report = classify(t)
                    assert report.classification == label, (prefix, m, label)
                    self.counts[label] += 1
                    yield t, report
            return
        for v, s1, prod1, primes1 in self._children(prefix, s, prod, primes):
            yield from self.iter_materialize(prefix + (v,), s1, prod1, primes1)

    def _children(self, prefix, s, prod, primes):
        depth = len(prefix)
        if self.cfg.prefix_filter is not None and depth < len(self.cfg.prefix_filter):
            v = self.cfg.prefix_filter[depth]
            alive, _ = self._candidate_state(v, s, depth)
            if alive:
                self._bump()
                yield v, s + Fraction(1, v), prod * v, primes + factorize(v).primes
            return
        if not prefix:
            lo = self.cfg.min_order
        elif prefix[-1] == 1:
            lo = 1
        else:
            lo = prefix[-1] + 1
        v = lo
        while True:
            if self.cfg.max_order is not None and v > self.cfg.max_order:
                return
            alive, forever = self._candidate_state(v, s, depth)
            if not alive:
                if forever:
                    return
                v += 1
                continue
            if math.gcd(v, prod) == 1:
                self._bump()
                yield v, s + Fraction(1, v), prod * v, primes + factorize(v).primes
            v += 1


def _initial_state(cfg: SearchConfig):
    return (), Fraction(0), 1, ()


def iter_tuples(cfg: SearchConfig):
    """Stream (RamTuple, FanoReport) pairs in lexicographic order.

    Generator form of materialize mode: nothing is accumulated beyond
    per-class counts, so arbitrarily large result sets can be consumed
    one record at a time.
    """
    cfg = replace(cfg, mode="materialize")
    search = _Search(cfg)
    prefix, s, prod, primes = _initial_state(cfg)
    yield from search.iter_materialize(prefix, s, prod, primes)


def _run_partition(cfg: SearchConfig):
    """Worker entry: run one subtree serially, return plain data."""
    search = _Search(cfg)
    prefix, s, prod, primes = _initial_state(cfg)
    if cfg.mode == "count":
        search.run_count(prefix, s, prod, primes)
        return dict(search.counts), None, search.nodes
    out = [t.orders for t, _ in search.iter_materialize(prefix, s, prod, primes)]
    return dict(search.counts), out, search.nodes


def _partition_prefixes(cfg: SearchConfig, depth: int):
    """All viable sorted coprime prefixes of the given depth, lexicographic."""
    probe = _Search(replace(cfg, mode="count", parallel_width=1))
    done = []

    def rec(prefix, s, prod, primes):
        if len(prefix) == depth:
            done.append(prefix)
            return
        for v, s1, prod1, primes1 in probe._children(prefix, s, prod, primes):
            rec(prefix + (v,), s1, prod1, primes1)

    rec(*_initial_state(cfg))
    return done


def enumerate_tuples(cfg: SearchConfig) -> EnumResult:
    """Run the configured search; see SearchConfig for the contract.

    Counting is exact and closed-form in the last coordinate; materialize
    mode classifies every emitted tuple and cross-checks the label against
    the interval that produced it.  Output order and all counts are
    independent of parallel_width; work splits over disjoint depth-2
    prefix subtrees when parallel_width > 1 (ignored when a node_cap or a
    prefix_filter is set, to keep cap semantics and task planning exact).
    """
    started = time.perf_counter()
    use_pool = (
        cfg.parallel_width > 1
        and cfg.node_cap is None
        and cfg.prefix_filter is None
    )
    if not use_pool:
        search = _Search(cfg)
        state = _initial_state(cfg)
        if cfg.mode == "count":
            search.run_count(*state)
            tuples = None
        else:
            tuples = tuple(search.iter_materialize(*state))
        return EnumResult(
            tuples=tuples,
            counts=dict(search.counts),
            nodes_visited=search.nodes,
            elapsed_s=time.perf_counter() - started,
        )

    split_depth = min(2, cfg.n + 1)
    tasks = _partition_prefixes(cfg, split_depth)
    counts = {c: 0 for c in cfg.classes}
    nodes = 0
    merged = [] if cfg.mode == "materialize" else None
    subcfgs = [replace(cfg, prefix_filter=t, parallel_width=1) for t in tasks]
    with ProcessPoolExecutor(max_workers=cfg.parallel_width) as pool:
        for task_counts, orders_list, task_nodes in pool.map(_run_partition, subcfgs):
            nodes += task_nodes
            for label, value in task_counts.items():
                counts[label] += value
            if merged is not None:
                for orders in orders_list:
                    t = RamTuple(cfg.n, orders)
                    merged.append((t, classify(t)))
    return EnumResult(
        tuples=tuple(merged) if merged is not None else None,
        counts=counts,
        nodes_visited=nodes,
        elapsed_s=time.perf_counter() - started,
    )


def count_new(n: int) -> int:
    """Exact number of canonical NewOnlyKE tuples in dimension n (n <= 5)."""
    if not 1 <= n <= 5:
        raise InputError(f"count_new supports 1 <= n <= 5, got {n}")
    result = enumerate_tuples(SearchConfig(n=n, mode="count", classes=("NewOnlyKE",)))
    return result.counts["NewOnlyKE"]


def brute_force_oracle(n: int, max_order: int, min_order: int = 2):
    """Exhaustively classify every sorted valid tuple with entries <= max_order.

    Test oracle: no pruning beyond tuple validity (sortedness, coprimality,
    min_order).  Returns a list of (orders, classification) pairs in
    lexicographic order.  Guarded to max_order**(n+2) <= 1e8 raw candidates.
    """
    if n < 1:
        raise InputError(f"dimension must be >= 1, got {n}")
    if max_order < min_order:
        raise InputError("max_order below min_order")
    if max_order ** (n + 2) > _BRUTE_FORCE_GUARD:
        raise SearchSpaceTooLarge(
            f"{max_order}^{n + 2} raw candidates exceed the {_BRUTE_FORCE_GUARD:.0e} guard"
        )
    out = []
    slots = n + 2

    def rec(prefix, prod):
        if len(prefix) == slots:
            t = RamTuple(n, prefix)
            out.append((prefix, classify(t).classification))
            return
        if not prefix:
            lo = min_order
        elif prefix[-1] == 1:
            lo = 1
        else:
            lo = prefix[-1] + 1
        for v in range(lo, max_order + 1):
            if math.gcd(v, prod) == 1:
                rec(prefix + (v,), prod * v)

    rec((), 1)
    return out
