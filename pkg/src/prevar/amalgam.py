"""Free products of finite groups with amalgamation.

Elements are kept in the standard normal form: an alternating string of
non-identity left-coset representatives from the two factors, followed by
an element of the amalgamated subgroup.  Normal forms depend on the
chosen transversals; by default each coset is represented by its least
carrier index, except the subgroup's own coset, represented by the
identity.

Torsion detection uses the structural criterion (an element is conjugate
into a factor iff its cyclically reduced string has length <= 1) and
always cross-checks it against a powers oracle, trusting neither alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .algcore import AlgebraError, FiniteAlgebra, Signature

GROUP_SIGNATURE = Signature((("mul", 2), ("inv", 1), ("e", 0)))


class FiniteGroup:
    """A finite group presented by tables; the axioms are checked up front.

    The tables are flattened on construction since group arithmetic sits
    in the innermost loops of the normal-form machinery.
    """

    __slots__ = ("alg", "size", "identity", "_mul", "_inv")

    def __init__(self, alg: FiniteAlgebra):
        if alg.signature != GROUP_SIGNATURE:
            raise AlgebraError("groups use the signature {mul/2, inv/1, e/0}")
        self.alg = alg
        n = alg.size
        self.size = n
        self.identity = alg.op("e")
        self._mul = alg.tables["mul"]
        self._inv = alg.tables["inv"]
        e = self.identity
        for x in range(n):
            if self.mul(e, x) != x or self.mul(x, e) != x:
                raise AlgebraError("identity law fails")
            if self.mul(x, self.inv(x)) != e or self.mul(self.inv(x), x) != e:
                raise AlgebraError("inverse law fails")
        for x in range(n):
            for y in range(n):
                if self.mul(x, y) >= n:
                    raise AlgebraError("product leaves the carrier")
                for z in range(n):
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                        raise AlgebraError("associativity fails")

    def mul(self, x: int, y: int) -> int:
        return self._mul[x * self.size + y]

    def inv(self, x: int) -> int:
        return self._inv[x]

    def order_of(self, x: int) -> int:
        e = self.identity
        acc, k = x, 1
        while acc != e:
            acc = self.mul(acc, x)
            k += 1
        return k

    def __repr__(self):
        return f"FiniteGroup(order={self.size})"


def group_from_table(mul_table: Sequence[Sequence[int]]) -> FiniteGroup:
    """Build a group from its multiplication table, deriving e and inverses."""
    n = len(mul_table)
    flat = [mul_table[i][j] for i in range(n) for j in range(n)]
    identity = None
    for e in range(n):
        if all(mul_table[e][x] == x and mul_table[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise AlgebraError("no identity element in the table")
    inv = []
    for x in range(n):
        found = [y for y in range(n) if mul_table[x][y] == identity]
        if len(found) != 1:
            raise AlgebraError("missing or ambiguous inverse")
        inv.append(found[0])
    alg = FiniteAlgebra(
        GROUP_SIGNATURE, n, {"mul": flat, "inv": inv, "e": [identity]}
    )
    return FiniteGroup(alg)


def symmetric_group(n: int) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """Sym(n) on the points 0..n-1; carrier indices follow the
    lexicographic order of the permutation tuples, so the identity is 0.

    Composition is (g*h)(x) = g(h(x)).
    """
    if n < 1:
        raise AlgebraError("symmetric groups need at least one point")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(g[h[x]] for x in range(n))] for h in perms] for g in perms
    ]
    return group_from_table(table), perms


def subgroup(group: FiniteGroup, members: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
    """The subgroup on the given closed subset, with its inclusion indices."""
    carrier = sorted(set(members))
    pos = {g: i for i, g in enumerate(carrier)}
    table = []
    for x in carrier:
        row = []
        for y in carrier:
            v = group.mul(x, y)
            if v not in pos:
                raise AlgebraError("subset is not closed under multiplication")
            row.append(pos[v])
        table.append(row)
    return group_from_table(table), tuple(carrier)


def point_stabilizer(group: FiniteGroup, perms: Sequence[tuple[int, ...]], point: int):
    members = [i for i, p in enumerate(perms) if p[point] == point]
    return subgroup(group, members)


@dataclass(frozen=True)
class AmalgamCtx:
    """Two factor groups with a common amalgamated subgroup.

    ``embeddings[k]`` sends subgroup indices into factor ``k``.  The
    transversals list left-coset representatives of the embedded subgroup,
    identity first.
    """

    factors: tuple[FiniteGroup, FiniteGroup]
    base: FiniteGroup
    embeddings: tuple[tuple[int, ...], tuple[int, ...]]
    transversals: tuple[tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        # factor element -> (representative, subgroup part), per factor
        tables = []
        for k, group in enumerate(self.factors):
            table = {}
            for rep in self.transversals[k]:
                for b in range(self.base.size):
                    table[group.mul(rep, self.embeddings[k][b])] = (rep, b)
            tables.append(table)
        object.__setattr__(self, "_split_tables", tuple(tables))

    @classmethod
    def build(
        cls,
        g1: FiniteGroup,
        g2: FiniteGroup,
        base: FiniteGroup,
        emb1: Sequence[int],
        emb2: Sequence[int],
        transversals: Optional[Sequence[Sequence[int]]] = None,
    ) -> "AmalgamCtx":
        embeddings = (tuple(emb1), tuple(emb2))
        for k, group in enumerate((g1, g2)):
            emb = embeddings[k]
            if len(emb) != base.size or len(set(emb)) != base.size:
                raise AlgebraError("embedding is not one-to-one on the subgroup")
            for x in range(base.size):
                for y in range(base.size):
                    if emb[base.mul(x, y)] != group.mul(emb[x], emb[y]):
                        raise AlgebraError("embedding does not preserve products")
        if transversals is None:
            transversals = tuple(
                cls._least_transversal(group, embeddings[k])
                for k, group in enumerate((g1, g2))
            )
        transversals = tuple(tuple(t) for t in transversals)
        ctx = cls((g1, g2), base, embeddings, transversals)
        ctx._check_transversals()
        return ctx

    @staticmethod
    def _least_transversal(group: FiniteGroup, emb: Sequence[int]) -> tuple[int, ...]:
        image = set(emb)
        reps = []
        assigned = set()
        for g in range(group.size):
            if g in assigned:
                continue
            coset = {group.mul(g, h) for h in image}
            rep = group.identity if group.identity in coset else min(coset)
            reps.append(rep)
            assigned |= coset
        reps.sort(key=lambda r: (r != group.identity, r))
        return tuple(reps)

    def _check_transversals(self):
        for k, group in enumerate(self.factors):
            image = set(self.embeddings[k])
            reps = self.transversals[k]
            if group.identity not in reps:
                raise AlgebraError("the identity must represent the subgroup's coset")
            cosets = [frozenset(group.mul(r, h) for h in image) for r in reps]
            if len(set(cosets)) != len(reps):
                raise AlgebraError("transversal elements share a coset")
            if set().union(*cosets) != set(range(group.size)):
                raise AlgebraError("transversal misses a coset")

    def factor(self, k: int) -> FiniteGroup:
        return self.factors[k]

    def embed(self, k: int, b: int) -> int:
        return self.embeddings[k][b]

    def split(self, k: int, g: int) -> tuple[int, int]:
        """g = rep * embed(b) with rep in the transversal; returns (rep, b)."""
        try:
            return self._split_tables[k][g]
        except KeyError:
            raise AlgebraError("transversal does not split the factor") from None


@dataclass(frozen=True)
class AmalgamElement:
    """Alternating non-identity representatives, then a subgroup element."""

    reps: tuple[tuple[int, int], ...]  # (factor, representative)
    tail: int                          # subgroup carrier index

    def length(self) -> int:
        return len(self.reps)


def identity_element(ctx: AmalgamCtx) -> AmalgamElement:
    return AmalgamElement((), ctx.base.identity)


def _prepend(ctx: AmalgamCtx, k: int, g: int, el: AmalgamElement) -> AmalgamElement:
    """Normal form of (g in factor k) * el."""
    reps = list(el.reps)
    while reps and reps[0][0] == k:
        g = ctx.factor(k).mul(g, reps[0][1])
        reps.pop(0)
    rep, beta = ctx.split(k, g)
    out = []
    for fi, ri in reps:
        group = ctx.factor(fi)
        h = group.mul(ctx.embed(fi, beta), ri)
        rep_i, beta = ctx.split(fi, h)
        # pushing a subgroup element through never lands in the subgroup
        out.append((fi, rep_i))
    tail = ctx.base.mul(beta, el.tail)
    if rep != ctx.factor(k).identity:
        out.insert(0, (k, rep))
    return AmalgamElement(tuple(out), tail)


def normal_form(ctx: AmalgamCtx, word: Sequence[tuple[int, int]]) -> AmalgamElement:
    """Fold the letters right to left, splitting each against the transversal."""
    el = identity_element(ctx)
    for k, g in reversed(list(word)):
        if k not in (0, 1):
            raise AlgebraError("factor tags are 0 and 1")
        if not 0 <= g < ctx.factor(k).size:
            raise AlgebraError("letter outside its factor")
        el = _prepend(ctx, k, g, el)
    return el


def to_word(ctx: AmalgamCtx, el: AmalgamElement) -> list[tuple[int, int]]:
    return list(el.reps) + [(0, ctx.embed(0, el.tail))]


def multiply(ctx: AmalgamCtx, e1: AmalgamElement, e2: AmalgamElement) -> AmalgamElement:
    el = e2
    for k, g in reversed(to_word(ctx, e1)):
        el = _prepend(ctx, k, g, el)
    return el


def inverse(ctx: AmalgamCtx, el: AmalgamElement) -> AmalgamElement:
    word = to_word(ctx, el)
    inverted = [(k, ctx.factor(k).inv(g)) for k, g in reversed(word)]
    return normal_form(ctx, inverted)


def power(ctx: AmalgamCtx, el: AmalgamElement, k: int) -> AmalgamElement:
    acc = identity_element(ctx)
    for _ in range(k):
        acc = multiply(ctx, acc, el)
    return acc


def cyclically_reduce(ctx: AmalgamCtx, el: AmalgamElement) -> AmalgamElement:
    """Conjugate away matching ends until the string length stabilizes."""
    while el.length() >= 2:
        k, r = el.reps[0]
        letter = normal_form(ctx, [(k, r)])
        conj = multiply(ctx, multiply(ctx, inverse(ctx, letter), el), letter)
        if conj.length() < el.length():
            el = conj
        else:
            break
    return el


def is_torsion(ctx: AmalgamCtx, el: AmalgamElement) -> bool:
    """Finite order iff the cyclically reduced string has length <= 1.

    The structural verdict is cross-validated by the powers oracle: a
    positive answer must exhibit the order, a negative one strict string
    growth of the powers.  A disagreement would mean a bug, and raises.
    """
    reduced = cyclically_reduce(ctx, el)
    structural = reduced.length() <= 1
    if structural:
        bound = ctx.factors[0].size * ctx.factors[1].size * ctx.base.size
        acc = el
        order = None
        for k in range(1, bound + 1):
            if acc == identity_element(ctx):
                order = k
                break
            acc = multiply(ctx, acc, el)
        if order is None:
            raise AlgebraError("structural torsion verdict failed the powers oracle")
        return True
    length = reduced.length()
    for k in range(2, 7):
        if power(ctx, reduced, k).length() != k * length:
            raise AlgebraError("expected strict normal-form growth of powers")
    return False


def coset_torsion_scan(ctx: AmalgamCtx, string: Sequence[tuple[int, int]]) -> bool:
    """Whether the left coset (string * subgroup) contains a torsion element.

    Enumerates all |base| members of the coset.
    """
    reps = tuple(string)
    for k, r in reps:
        if r == ctx.factor(k).identity or r not in ctx.transversals[k]:
            raise AlgebraError("coset strings use non-identity transversal reps")
    for i in range(len(reps) - 1):
        if reps[i][0] == reps[i + 1][0]:
            raise AlgebraError("coset strings must alternate factors")
    for b in range(ctx.base.size):
        if is_torsion(ctx, AmalgamElement(reps, b)):
            return True
    return False


def alternating_strings(ctx: AmalgamCtx, length: int):
    """All alternating transversal strings of exactly the given length."""
    if length == 0:
        yield ()
        return
    nonid = [
        [r for r in ctx.transversals[k] if r != ctx.factor(k).identity]
        for k in (0, 1)
    ]
    for start in (0, 1):
        factors = [(start + i) % 2 for i in range(length)]
        for choice in itertools.product(*(nonid[f] for f in factors)):
            yield tuple(zip(factors, choice))


def sym_stab_amalgam(n: int) -> AmalgamCtx:
    """Sym(n) amalgamated with a second copy over the stabilizer of the
    last point."""
    g, perms = symmetric_group(n)
    g2, _ = symmetric_group(n)
    stab, inclusion = point_stabilizer(g, perms, n - 1)
    return AmalgamCtx.build(g, g2, stab, inclusion, inclusion)


@dataclass
class CosetWitness:
    image: int
    witness: tuple[int, ...]
    order: int


@dataclass
class StabilizerSurvey:
    n: int
    witnesses: list[CosetWitness]

    @property
    def all_cosets_have_involutions(self) -> bool:
        return all(w.order <= 2 for w in self.witnesses)


def stabilizer_coset_survey(n: int) -> StabilizerSurvey:
    """In Sym(n) with the stabilizer of the last point as subgroup, every
    left coset contains an element of order <= 2; report one per coset.

    The coset sending the stabilized point to y contains the transposition
    of the point with y (or the identity when y is the point itself).
    """
    if not 2 <= n <= 6:
        raise AlgebraError("survey implemented for 2 <= n <= 6")
    group, perms = symmetric_group(n)
    point = n - 1
    witnesses = []
    for y in range(n):
        found = None
        for idx, p in enumerate(perms):
            if p[point] == y and group.order_of(idx) <= 2:
                found = CosetWitness(y, p, group.order_of(idx))
                break
        if found is None:
            raise AlgebraError(f"coset sending {point} to {y} has no involution")
        witnesses.append(found)
    return StabilizerSurvey(n, witnesses)
