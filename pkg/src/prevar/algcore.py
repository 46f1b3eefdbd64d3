"""Finite algebras over finitary signatures.

Carriers are always ``0..n-1``.  Operation tables are stored row-major
over mixed-radix argument tuples (the order produced by
``itertools.product(range(n), repeat=arity)``), so serialized algebras
round-trip bit-exactly.  The empty algebra (size 0) is permitted when
the signature has no zeroary operations.  Everything here is immutable
after construction and all operations are pure functions.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class AlgebraError(ValueError):
    """Malformed algebra, term, map or partition."""


class BudgetExceededError(RuntimeError):
    """A configured size or node budget was hit before the answer was known.

    Deliberately distinct from a negative answer: callers must never
    confuse "ran out of budget" with "refuted".
    """


DEFAULT_CONGRUENCE_SIZE_BOUND = 12


@dataclass(frozen=True)
class Signature:
    """Ordered list of (symbol, arity) pairs; symbols distinct, arities finite."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.ops]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate operation symbols in {names}")
        for name, arity in self.ops:
            if arity < 0:
                raise AlgebraError(f"negative arity for {name!r}")

    def arity(self, name: str) -> int:
        for op, ar in self.ops:
            if op == name:
                return ar
        raise AlgebraError(f"unknown operation symbol {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.ops)

    def has_zeroary(self) -> bool:
        return any(ar == 0 for _, ar in self.ops)

    def all_unary(self) -> bool:
        return all(ar == 1 for _, ar in self.ops)


UNARY_SIGNATURE = Signature((("a", 1),))


def _tuple_index(args: Sequence[int], size: int) -> int:
    idx = 0
    for a in args:
        idx = idx * size + a
    return idx


class FiniteAlgebra:
    """A finite algebra: a carrier ``0..size-1`` plus one total table per op."""

    __slots__ = ("signature", "size", "tables", "_arities")

    def __init__(self, signature: Signature, size: int, tables: dict[str, Sequence[int]]):
        if size < 0:
            raise AlgebraError("negative size")
        if size == 0 and signature.has_zeroary():
            raise AlgebraError("empty algebra is not allowed with zeroary operations")
        if set(tables) != set(signature.names):
            raise AlgebraError("tables do not match the signature's symbols")
        frozen: dict[str, tuple[int, ...]] = {}
        for name, arity in signature.ops:
            table = tuple(tables[name])
            if len(table) != size**arity:
                raise AlgebraError(
                    f"table for {name!r} has {len(table)} entries, expected {size**arity}"
                )
            if any(not (0 <= v < size) for v in table):
                raise AlgebraError(f"table for {name!r} has entries outside the carrier")
            frozen[name] = table
        self.signature = signature
        self.size = size
        self.tables = frozen
        self._arities = dict(signature.ops)

    def op(self, name: str, *args: int) -> int:
        if len(args) != self._arities[name]:
            raise AlgebraError(f"arity mismatch applying {name!r}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.tables[name][idx]

    def elements(self) -> range:
        return range(self.size)

    def is_trivial(self) -> bool:
        return self.size == 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteAlgebra)
            and self.signature == other.signature
            and self.size == other.size
            and self.tables == other.tables
        )

    def __hash__(self):
        return hash((self.signature, self.size, tuple(sorted(self.tables.items()))))

    def __repr__(self):
        return f"FiniteAlgebra(size={self.size}, ops={list(self.tables)})"

    # -- canonical JSON text format ------------------------------------
    #
    # {"signature":[{"name":"a","arity":1}],"size":3,"ops":{"a":[1,2,0]}}
    #
    # Keys appear in exactly the order shown; ops follow signature order.
    # Serializing a parsed file reproduces it byte for byte.

    def to_json(self) -> str:
        doc = {
            "signature": [{"name": n, "arity": a} for n, a in self.signature.ops],
            "size": self.size,
            "ops": {n: list(self.tables[n]) for n, _ in self.signature.ops},
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "FiniteAlgebra":
        doc = json.loads(text)
        sig = Signature(tuple((e["name"], e["arity"]) for e in doc["signature"]))
        return cls(sig, doc["size"], {n: doc["ops"][n] for n in sig.names})

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "FiniteAlgebra":
        with open(path) as fh:
            return cls.from_json(fh.read())


# -- terms --------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class App:
    op: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Term = Var | App


def term_variables(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    out: set[int] = set()
    for a in t.args:
        out |= term_variables(a)
    return out


def eval_term(alg: FiniteAlgebra, t: Term, assignment: dict[int, int]) -> int:
    """Evaluate a term by recursive table lookup under a variable assignment."""
    if isinstance(t, Var):
        if t.index not in assignment:
            raise AlgebraError(f"variable {t.index} is unassigned")
        value = assignment[t.index]
        if not (0 <= value < alg.size):
            raise AlgebraError(f"assignment of variable {t.index} is off the carrier")
        return value
    arity = alg.signature.arity(t.op)
    if arity != len(t.args):
        raise AlgebraError(f"arity mismatch for {t.op!r}")
    return alg.op(t.op, *(eval_term(alg, a, assignment) for a in t.args))


# -- homomorphisms and congruences ---------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    """A total structure-preserving map; commutation is checked on construction."""

    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(self.mapping))
        if self.source.signature != self.target.signature:
            raise AlgebraError("homomorphism between different signatures")
        if len(self.mapping) != self.source.size:
            raise AlgebraError("mapping length differs from the source carrier")
        if any(not (0 <= v < self.target.size) for v in self.mapping):
            raise AlgebraError("mapping leaves the target carrier")
        for name, arity in self.source.signature.ops:
            for args in itertools.product(range(self.source.size), repeat=arity):
                lhs = self.mapping[self.source.op(name, *args)]
                rhs = self.target.op(name, *(self.mapping[a] for a in args))
                if lhs != rhs:
                    raise AlgebraError(
                        f"map does not commute with {name!r} at {args}"
                    )

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """(self ∘ inner)(x) = self(inner(x))."""
        if inner.target is not self.source and inner.target != self.source:
            raise AlgebraError("composition mismatch")
        return Homomorphism(inner.source, self.target,
                            tuple(self.mapping[v] for v in inner.mapping))


def identity_hom(alg: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(alg, alg, tuple(range(alg.size)))


def _canonical_blocks(labels: Sequence[int]) -> tuple[int, ...]:
    # renumber block labels in order of first occurrence
    seen: dict[int, int] = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return tuple(out)


@dataclass(frozen=True)
class Congruence:
    """An op-compatible partition, stored as a block index per element."""

    algebra: FiniteAlgebra
    blocks: tuple[int, ...]

    def __post_init__(self):
        if len(self.blocks) != self.algebra.size:
            raise AlgebraError("partition length differs from the carrier")
        object.__setattr__(self, "blocks", _canonical_blocks(self.blocks))
        alg = self.algebra
        for name, arity in alg.signature.ops:
            if arity == 0:
                continue
            for args in itertools.product(range(alg.size), repeat=arity):
                for slot in range(arity):
                    for other in range(alg.size):
                        if self.blocks[other] != self.blocks[args[slot]]:
                            continue
                        alt = list(args)
                        alt[slot] = other
                        if self.blocks[alg.op(name, *args)] != self.blocks[alg.op(name, *alt)]:
                            raise AlgebraError(
                                f"partition is not compatible with {name!r}"
                            )

    @classmethod
    def diagonal(cls, alg: FiniteAlgebra) -> "Congruence":
        return cls(alg, tuple(range(alg.size)))

    @classmethod
    def full(cls, alg: FiniteAlgebra) -> "Congruence":
        return cls(alg, (0,) * alg.size)

    def is_diagonal(self) -> bool:
        return len(set(self.blocks)) == len(self.blocks)

    def num_blocks(self) -> int:
        return len(set(self.blocks))

    def related(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def meet(self, other: "Congruence") -> "Congruence":
        if other.algebra != self.algebra:
            raise AlgebraError("congruences on different algebras")
        pairs = list(zip(self.blocks, other.blocks))
        labels = {p: i for i, p in enumerate(dict.fromkeys(pairs))}
        return Congruence(self.algebra, tuple(labels[p] for p in pairs))

    def join(self, other: "Congruence") -> "Congruence":
        # the transitive closure of the union of two congruences is again
        # a congruence, so plain union-find merging suffices
        if other.algebra != self.algebra:
            raise AlgebraError("congruences on different algebras")
        uf = _UnionFind(self.algebra.size)
        for blocks in (self.blocks, other.blocks):
            first: dict[int, int] = {}
            for x, lab in enumerate(blocks):
                if lab in first:
                    uf.union(first[lab], x)
                else:
                    first[lab] = x
        return Congruence(self.algebra, tuple(uf.find(x) for x in range(self.algebra.size)))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


# -- constructions --------------------------------------------------------


def generated_subalgebra(
    alg: FiniteAlgebra, seed: Iterable[int]
) -> tuple[FiniteAlgebra, Homomorphism]:
    """Least subset containing ``seed`` closed under all ops, with its inclusion.

    The empty seed yields the closure of the zeroary constants (the empty
    algebra when there are none).
    """
    members = set()
    for x in seed:
        if not (0 <= x < alg.size):
            raise AlgebraError(f"seed element {x} is off the carrier")
        members.add(x)
    for name, arity in alg.signature.ops:
        if arity == 0:
            members.add(alg.op(name))
    changed = True
    while changed:
        changed = False
        current = sorted(members)
        for name, arity in alg.signature.ops:
            if arity == 0:
                continue
            for args in itertools.product(current, repeat=arity):
                v = alg.op(name, *args)
                if v not in members:
                    members.add(v)
                    changed = True
    carrier = sorted(members)
    return subalgebra_on(alg, carrier)


def subalgebra_on(alg: FiniteAlgebra, carrier: Sequence[int]) -> tuple[FiniteAlgebra, Homomorphism]:
    """Restrict ``alg`` to an already-closed subset (ascending order kept)."""
    carrier = list(carrier)
    position = {x: i for i, x in enumerate(carrier)}
    if len(position) != len(carrier):
        raise AlgebraError("carrier subset has repeats")
    tables = {}
    for name, arity in alg.signature.ops:
        table = []
        for args in itertools.product(carrier, repeat=arity):
            v = alg.op(name, *args)
            if v not in position:
                raise AlgebraError(f"subset is not closed under {name!r}")
            table.append(position[v])
        tables[name] = table
    sub = FiniteAlgebra(alg.signature, len(carrier), tables)
    return sub, Homomorphism(sub, alg, tuple(carrier))


def direct_product(
    algebras: Sequence[FiniteAlgebra], signature: Optional[Signature] = None
) -> tuple[FiniteAlgebra, list[Homomorphism]]:
    """Componentwise product; the empty family gives the one-element algebra.

    Returns the product together with its projection homomorphisms.
    """
    algebras = list(algebras)
    if signature is None:
        if not algebras:
            raise AlgebraError("empty product needs an explicit signature")
        signature = algebras[0].signature
    for a in algebras:
        if a.signature != signature:
            raise AlgebraError("product factors have mismatched signatures")
    sizes = [a.size for a in algebras]
    carrier = list(itertools.product(*(range(s) for s in sizes)))
    index = {t: i for i, t in enumerate(carrier)}
    tables = {}
    for name, arity in signature.ops:
        table = []
        for args in itertools.product(carrier, repeat=arity):
            value = tuple(
                algebras[k].op(name, *(arg[k] for arg in args)) for k in range(len(algebras))
            )
            table.append(index[value])
        tables[name] = table
    prod = FiniteAlgebra(signature, len(carrier), tables)
    projections = [
        Homomorphism(prod, algebras[k], tuple(t[k] for t in carrier))
        for k in range(len(algebras))
    ]
    return prod, projections


def disjoint_union(algebras: Sequence[FiniteAlgebra]) -> FiniteAlgebra:
    """Disjoint sum of all-unary algebras; each op acts within its summand."""
    algebras = list(algebras)
    if not algebras:
        raise AlgebraError("disjoint union of no algebras has no signature")
    sig = algebras[0].signature
    if not sig.all_unary():
        raise AlgebraError("disjoint unions only exist for all-unary signatures")
    for a in algebras:
        if a.signature != sig:
            raise AlgebraError("summands have mismatched signatures")
    offsets = []
    total = 0
    for a in algebras:
        offsets.append(total)
        total += a.size
    tables: dict[str, list[int]] = {name: [] for name in sig.names}
    for a, off in zip(algebras, offsets):
        for name in sig.names:
            tables[name].extend(off + v for v in a.tables[name])
    return FiniteAlgebra(sig, total, tables)


def quotient(alg: FiniteAlgebra, c: Congruence) -> tuple[FiniteAlgebra, Homomorphism]:
    """Carrier = blocks; tables are well defined by compatibility."""
    if c.algebra != alg:
        raise AlgebraError("congruence is on a different algebra")
    nblocks = c.num_blocks()
    reps = [None] * nblocks
    for x in range(alg.size):
        if reps[c.blocks[x]] is None:
            reps[c.blocks[x]] = x
    tables = {}
    for name, arity in alg.signature.ops:
        table = []
        for args in itertools.product(reps, repeat=arity):
            table.append(c.blocks[alg.op(name, *args)])
        tables[name] = table
    q = FiniteAlgebra(alg.signature, nblocks, tables)
    return q, Homomorphism(alg, q, c.blocks)


def congruence_generated(alg: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence containing the pairs.

    Union-find plus a worklist over ops and argument slots, iterated to a
    fixpoint; iteration order is op declaration order then lexicographic
    argument tuples, so results are reproducible.
    """
    uf = _UnionFind(alg.size)
    for a, b in pairs:
        uf.union(a, b)
    changed = True
    while changed:
        changed = False
        for name, arity in alg.signature.ops:
            if arity == 0:
                continue
            for args in itertools.product(range(alg.size), repeat=arity):
                for slot in range(arity):
                    x = args[slot]
                    for y in range(x + 1, alg.size):
                        if uf.find(x) != uf.find(y):
                            continue
                        alt = list(args)
                        alt[slot] = y
                        if uf.union(alg.op(name, *args), alg.op(name, *alt)):
                            changed = True
    return Congruence(alg, tuple(uf.find(x) for x in range(alg.size)))


def all_congruences(
    alg: FiniteAlgebra, size_bound: int = DEFAULT_CONGRUENCE_SIZE_BOUND
) -> list[Congruence]:
    """Complete congruence list: principal congruences closed under join.

    Guarded by a size bound since the lattice can blow up.
    """
    if alg.size > size_bound:
        raise BudgetExceededError(
            f"congruence enumeration bound {size_bound} exceeded by size {alg.size}"
        )
    found: dict[tuple[int, ...], Congruence] = {}
    diag = Congruence.diagonal(alg)
    found[diag.blocks] = diag
    principal = []
    for a in range(alg.size):
        for b in range(a + 1, alg.size):
            c = congruence_generated(alg, [(a, b)])
            principal.append(c)
            found.setdefault(c.blocks, c)
    frontier = list(found.values())
    while frontier:
        fresh = []
        for c in frontier:
            for p in principal:
                j = c.join(p)
                if j.blocks not in found:
                    found[j.blocks] = j
                    fresh.append(j)
        frontier = fresh
    return sorted(found.values(), key=lambda c: (c.num_blocks() * -1, c.blocks))


def is_subdirectly_irreducible(
    alg: FiniteAlgebra, size_bound: int = DEFAULT_CONGRUENCE_SIZE_BOUND
) -> tuple[bool, Optional[Congruence]]:
    """True iff the meet of all non-diagonal congruences is non-diagonal.

    Returns that meet (the monolith) in the positive case.
    """
    if alg.size < 2:
        raise AlgebraError("subdirect irreducibility needs a nontrivial algebra")
    congruences = all_congruences(alg, size_bound)
    nontrivial = [c for c in congruences if not c.is_diagonal()]
    meet = Congruence.full(alg)
    for c in nontrivial:
        meet = meet.meet(c)
    if meet.is_diagonal():
        return False, None
    return True, meet


def cyclic_unary(d: int) -> FiniteAlgebra:
    """The d-element algebra with one unary op cycling 0 -> 1 -> ... -> 0."""
    if d < 1:
        raise AlgebraError("cyclic algebra needs at least one element")
    return FiniteAlgebra(UNARY_SIGNATURE, d, {"a": [(i + 1) % d for i in range(d)]})


def empty_algebra(signature: Signature) -> FiniteAlgebra:
    return FiniteAlgebra(signature, 0, {name: [] for name in signature.names})


def trivial_algebra(signature: Signature) -> FiniteAlgebra:
    return FiniteAlgebra(
        signature, 1, {name: [0] * (1**arity) for name, arity in signature.ops}
    )


# -- isomorphism helpers ---------------------------------------------------


def apply_relabeling(alg: FiniteAlgebra, perm: Sequence[int]) -> FiniteAlgebra:
    """The isomorphic copy where old element x is renamed perm[x]."""
    inverse = [0] * alg.size
    for x, y in enumerate(perm):
        inverse[y] = x
    tables = {}
    for name, arity in alg.signature.ops:
        table = []
        for args in itertools.product(range(alg.size), repeat=arity):
            table.append(perm[alg.op(name, *(inverse[a] for a in args))])
        tables[name] = table
    return FiniteAlgebra(alg.signature, alg.size, tables)


def canonical_form(alg: FiniteAlgebra) -> tuple:
    """Least relabeled table vector over all permutations; an iso invariant."""
    best = None
    for perm in itertools.permutations(range(alg.size)):
        relabeled = apply_relabeling(alg, perm)
        key = tuple(relabeled.tables[name] for name in alg.signature.names)
        if best is None or key < best:
            best = key
    return (alg.size, best)


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> Optional[Homomorphism]:
    """Some isomorphism a -> b, or None; brute force over bijections."""
    if a.signature != b.signature or a.size != b.size:
        return None
    for perm in itertools.permutations(range(b.size)):
        try:
            h = Homomorphism(a, b, perm)
        except AlgebraError:
            continue
        return h
    return None


def are_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra) -> bool:
    return a.size == b.size and find_isomorphism(a, b) is not None
