"""Homomorphism and embedding search between finite algebras.

Backtracking constraint satisfaction with a fixed, reproducible order:
the next variable is the least-index unassigned element among those with
the smallest candidate set, and values are tried in ascending order.
Assigning an element propagates forward through every operation whose
arguments are now all assigned.  Injectivity, when requested, is
enforced during search by tracking used targets rather than by
post-filtering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .algcore import (
    AlgebraError,
    BudgetExceededError,
    FiniteAlgebra,
    Homomorphism,
)


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 2_000_000
    max_solutions: Optional[int] = None

    def __post_init__(self):
        if self.max_nodes <= 0:
            raise AlgebraError("max_nodes must be positive")
        if self.max_solutions is not None and self.max_solutions <= 0:
            raise AlgebraError("max_solutions must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class PartialMap:
    """A partial assignment between carriers, consistent where determined.

    Construction rejects assignments that already violate an operation
    whose arguments are all assigned.
    """

    source: FiniteAlgebra
    target: FiniteAlgebra
    assignment: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(sorted(dict(self.assignment).items())))
        mapping = dict(self.assignment)
        for x, v in mapping.items():
            if not (0 <= x < self.source.size) or not (0 <= v < self.target.size):
                raise AlgebraError("partial map leaves a carrier")
        for name, arity in self.source.signature.ops:
            for args in itertools.product(sorted(mapping), repeat=arity):
                result = self.source.op(name, *args)
                if result in mapping:
                    forced = self.target.op(name, *(mapping[a] for a in args))
                    if mapping[result] != forced:
                        raise AlgebraError(
                            f"partial map already violates {name!r} at {args}"
                        )

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)


class MembershipError(AlgebraError):
    """An algebra failed a membership precondition; carries a witness pair."""

    def __init__(self, message: str, witness: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.witness = witness


class _Search:
    def __init__(self, source, target, injective, budget):
        self.A = source
        self.B = target
        self.injective = injective
        self.budget = budget
        self.nodes = 0
        self.solutions: list[Homomorphism] = []
        # precompute op tuples once; zeroary ops become forced assignments.
        # a constraint already satisfied never breaks later, so propagation
        # and candidate filtering only visit constraints touching the
        # element being assigned
        self.constraints = []
        self.touching = [[] for _ in range(source.size)]
        for name, arity in source.signature.ops:
            if arity == 0:
                continue
            for args in itertools.product(range(source.size), repeat=arity):
                constraint = (name, args, source.op(name, *args))
                index = len(self.constraints)
                self.constraints.append(constraint)
                for e in sorted(set(args) | {constraint[2]}):
                    self.touching[e].append(index)

    def run(self, seed: dict[int, int]) -> list[Homomorphism]:
        assignment: list[Optional[int]] = [None] * self.A.size
        used = [0] * self.B.size
        pending = []
        for x, v in sorted(seed.items()):
            if not (0 <= x < self.A.size) or not (0 <= v < self.B.size):
                raise AlgebraError("seed assignment is off a carrier")
            pending.append((x, v))
        for name, arity in self.A.signature.ops:
            if arity == 0:
                # constants are hard constraints; conflicts kill the branch
                pending.append((self.A.op(name), self.B.op(name)))
        if not self._assign_all(assignment, used, pending):
            return []
        self._extend(assignment, used)
        return self.solutions

    # assign the pending pairs plus everything forced by propagation;
    # False means a contradiction (this branch has no extension)
    def _assign_all(self, assignment, used, pending) -> bool:
        queue = list(pending)
        while queue:
            x, v = queue.pop()
            cur = assignment[x]
            if cur is not None:
                if cur != v:
                    return False
                continue
            if self.injective and used[v]:
                return False
            assignment[x] = v
            used[v] += 1
            for idx in self.touching[x]:
                name, args, result = self.constraints[idx]
                vals = [assignment[a] for a in args]
                if any(w is None for w in vals):
                    continue
                forced = self.B.op(name, *vals)
                if assignment[result] is None:
                    queue.append((result, forced))
                elif assignment[result] != forced:
                    return False
        return True

    def _candidates(self, assignment, used, x) -> list[int]:
        out = []
        for v in range(self.B.size):
            if self.injective and used[v]:
                continue
            ok = True
            for idx in self.touching[x]:
                name, args, result = self.constraints[idx]
                vals = [assignment[a] if a != x else v for a in args]
                if any(w is None for w in vals):
                    continue
                forced = self.B.op(name, *vals)
                res = assignment[result] if result != x else v
                if res is not None and res != forced:
                    ok = False
                    break
                if self.injective and res is None and used[forced]:
                    # result would be forced onto an already-taken target
                    ok = False
                    break
            if ok:
                out.append(v)
        return out

    def _extend(self, assignment, used) -> bool:
        """Depth-first; returns True when the solution cap was reached."""
        unassigned = [x for x in range(self.A.size) if assignment[x] is None]
        if not unassigned:
            self.solutions.append(
                Homomorphism(self.A, self.B, tuple(assignment))  # re-checked here
            )
            cap = self.budget.max_solutions
            return cap is not None and len(self.solutions) >= cap
        best = None
        for x in unassigned:
            cands = self._candidates(assignment, used, x)
            if best is None or (len(cands), x) < (len(best[1]), best[0]):
                best = (x, cands)
            if not cands:
                break
        x, cands = best
        for v in cands:
            self.nodes += 1
            if self.nodes > self.budget.max_nodes:
                raise BudgetExceededError(
                    f"homomorphism search exceeded {self.budget.max_nodes} nodes"
                )
            trail_assignment = list(assignment)
            trail_used = list(used)
            if self._assign_all(assignment, used, [(x, v)]):
                if self._extend(assignment, used):
                    return True
            assignment[:] = trail_assignment
            used[:] = trail_used
        return False


def find_homomorphisms(
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    seed: Optional[dict[int, int] | PartialMap] = None,
    budget: SearchBudget = DEFAULT_BUDGET,
    injective: bool = False,
) -> list[Homomorphism]:
    """All total homomorphisms extending ``seed``, in deterministic order.

    ``seed`` is a dict or a ``PartialMap``.  Reaching ``max_solutions``
    stops the search normally; exceeding ``max_nodes`` raises
    ``BudgetExceededError`` so exhaustion is never mistaken for "no
    solutions".
    """
    if source.signature != target.signature:
        raise AlgebraError("search between different signatures")
    if isinstance(seed, PartialMap):
        if seed.source != source or seed.target != target:
            raise AlgebraError("partial map belongs to different algebras")
        seed = seed.as_dict()
    if target.size == 0:
        return [] if source.size > 0 else [Homomorphism(source, target, ())]
    return _Search(source, target, injective, budget).run(seed or {})


def exists_embedding(
    a: FiniteAlgebra, b: FiniteAlgebra, budget: SearchBudget = DEFAULT_BUDGET
) -> bool:
    """True iff an injective homomorphism a -> b exists."""
    if a.size > b.size:
        return False
    found = find_homomorphisms(
        a, b, budget=SearchBudget(budget.max_nodes, 1), injective=True
    )
    return bool(found)


def separating_family(
    a: FiniteAlgebra,
    generators: Sequence[FiniteAlgebra],
    budget: SearchBudget = DEFAULT_BUDGET,
) -> tuple[bool, Optional[tuple[int, int]], list[Homomorphism]]:
    """Point-separation data for membership of ``a`` in SP(generators).

    Returns ``(ok, witness, homs)``: when ``ok`` is false, ``witness`` is a
    pair of elements no homomorphism into any generator separates; when
    true, ``homs`` holds one separating homomorphism per element pair, in
    pair order.
    """
    for g in generators:
        if g.signature != a.signature:
            raise AlgebraError("membership test across signatures")
    if a.size <= 1:
        return True, None, []
    hom_lists = [find_homomorphisms(a, g, budget=budget) for g in generators]
    chosen = []
    for x in range(a.size):
        for y in range(x + 1, a.size):
            sep = None
            for homs in hom_lists:
                for h in homs:
                    if h(x) != h(y):
                        sep = h
                        break
                if sep:
                    break
            if sep is None:
                return False, (x, y), []
            chosen.append(sep)
    return True, None, chosen


def in_sp(
    a: FiniteAlgebra,
    generators: Sequence[FiniteAlgebra],
    budget: SearchBudget = DEFAULT_BUDGET,
) -> bool:
    """Membership in SP(generators) by the point-separation criterion.

    Algebras of size <= 1 always belong (they embed in the empty product);
    otherwise every pair of distinct elements must be separated by a
    homomorphism into some generator.
    """
    ok, _, _ = separating_family(a, generators, budget)
    return ok


def sp_embedding(
    a: FiniteAlgebra,
    generators: Sequence[FiniteAlgebra],
    budget: SearchBudget = DEFAULT_BUDGET,
):
    """An explicit injective map of ``a`` into a product of generators.

    Returns ``(product, injection)`` built from one separating homomorphism
    per element pair; raises ``MembershipError`` when ``a`` is not in SP.
    """
    from .algcore import direct_product

    ok, witness, homs = separating_family(a, generators, budget)
    if not ok:
        raise MembershipError("algebra is not in SP of the generators", witness)
    targets = [h.target for h in homs]
    prod, _ = direct_product(targets, signature=a.signature)
    sizes = [t.size for t in targets]
    mapping = []
    for x in range(a.size):
        idx = 0
        for h, s in zip(homs, sizes):
            idx = idx * s + h(x)
        mapping.append(idx)
    return prod, Homomorphism(a, prod, tuple(mapping))
