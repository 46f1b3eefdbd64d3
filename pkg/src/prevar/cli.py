"""Command-line surface.

Exit codes: 0 = property verified / computation done, 1 = property
refuted (a witness is reported), 2 = usage error, 3 = a budget was
exhausted before an answer was known.  ``--json`` switches every verb to
a machine-readable report; reports are byte-stable for fixed inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import freeness
from .algcore import (
    AlgebraError,
    BudgetExceededError,
    FiniteAlgebra,
    all_congruences,
    are_isomorphic,
    cyclic_unary,
    is_subdirectly_irreducible,
)
from .amalgam import (
    AmalgamCtx,
    FiniteGroup,
    alternating_strings,
    coset_torsion_scan,
    normal_form as amalgam_normal_form,
    stabilizer_coset_survey,
    sym_stab_amalgam,
)
from .homsearch import MembershipError, separating_family
from .prevariety import (
    PrevarietyCtx,
    check_amalgamation_bounded,
    coproduct,
    free_algebra,
    is_comfortable,
    is_compatible,
    is_independent,
    is_p_subdirectly_irreducible,
    minimum_compatible_cover,
    parse_quasi_identity,
    quasi_identity_holds,
)
from .srs import (
    format_word,
    knuth_bendix,
    parse_presentation,
    parse_word,
    reduce as srs_reduce,
)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _load_algebras(paths: Sequence[str]) -> list[FiniteAlgebra]:
    return [FiniteAlgebra.load(p) for p in paths]


def _ctx(args) -> PrevarietyCtx:
    return PrevarietyCtx(tuple(_load_algebras(args.gen)))


def _emit(args, report: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for ln in lines:
            print(ln)


def _maybe_cyclic_order(alg: FiniteAlgebra) -> Optional[int]:
    if alg.signature.names == ("a",) and alg.size >= 1:
        if are_isomorphic(alg, cyclic_unary(alg.size)):
            return alg.size
    return None


# -- verbs -------------------------------------------------------------------


def cmd_free(args) -> int:
    ctx = _ctx(args)
    alg, gens = free_algebra(ctx, args.n)
    cyc = _maybe_cyclic_order(alg)
    report = {"size": alg.size, "generators": gens, "cyclic_order": cyc}
    lines = [f"free algebra on {args.n} generators: {alg.size} elements"]
    if cyc is not None:
        lines.append(f"isomorphic to the {cyc}-element cycle: true")
    if args.out:
        alg.save(args.out)
        lines.append(f"written to {args.out}")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_coproduct(args) -> int:
    ctx = _ctx(args)
    factors = _load_algebras(args.factors)
    result = coproduct(ctx, factors)
    inj = [c.is_injective() for c in result.coprojections]
    report = {
        "size": result.algebra.size,
        "coprojections_injective": inj,
        "index_entries": len(result.index_metadata),
    }
    lines = [
        f"coproduct of {len(factors)} factors: {result.algebra.size} elements",
        f"coprojections injective: {inj}",
    ]
    if args.out:
        result.algebra.save(args.out)
        lines.append(f"written to {args.out}")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_compatible(args) -> int:
    ctx = _ctx(args)
    algebras = _load_algebras(args.factors)
    ok = is_compatible(ctx, algebras)
    _emit(args, {"compatible": ok}, [f"compatible: {ok}"])
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_comfortable(args) -> int:
    ctx = _ctx(args)
    a, b = _load_algebras([args.a, args.b])
    ok = is_comfortable(ctx, a, b)
    _emit(args, {"comfortable": ok}, [f"comfortable: {ok}"])
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_independent(args) -> int:
    ctx = _ctx(args)
    ambient = FiniteAlgebra.load(args.ambient)
    subsets = [[int(x) for x in s.split(",") if x] for s in args.subset]
    ok = is_independent(ctx, ambient, subsets)
    _emit(args, {"independent": ok}, [f"independent: {ok}"])
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_si(args) -> int:
    alg = FiniteAlgebra.load(args.algebra)
    ok, monolith = is_subdirectly_irreducible(alg)
    report = {
        "subdirectly_irreducible": ok,
        "monolith": list(monolith.blocks) if monolith else None,
        "congruences": len(all_congruences(alg)),
    }
    lines = [f"subdirectly irreducible: {ok}"]
    if monolith:
        lines.append(f"monolith blocks: {list(monolith.blocks)}")
    _emit(args, report, lines)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_rel_si(args) -> int:
    ctx = _ctx(args)
    alg = FiniteAlgebra.load(args.algebra)
    ok = is_p_subdirectly_irreducible(ctx, alg)
    _emit(args, {"relatively_subdirectly_irreducible": ok},
          [f"relatively subdirectly irreducible: {ok}"])
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_member(args) -> int:
    ctx = _ctx(args)
    alg = FiniteAlgebra.load(args.algebra)
    ok, witness, _ = separating_family(alg, ctx.generators)
    report = {"member": ok, "unseparated_pair": list(witness) if witness else None}
    lines = [f"member of the generated prevariety: {ok}"]
    if witness:
        lines.append(f"unseparated pair: {witness}")
    _emit(args, report, lines)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_cover(args) -> int:
    ctx = _ctx(args)
    algebras = _load_algebras(args.factors)
    blocks = minimum_compatible_cover(ctx, algebras)
    report = {"blocks": blocks, "count": len(blocks)}
    _emit(args, report, [f"minimum compatible cover: {len(blocks)} blocks {blocks}"])
    return EXIT_OK


def cmd_qid(args) -> int:
    alg = FiniteAlgebra.load(args.algebra)
    q = parse_quasi_identity(args.quasi_identity, alg.signature)
    ok = quasi_identity_holds(alg, q)
    _emit(args, {"holds": ok, "quasi_identity": str(q)}, [f"holds: {ok}"])
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_amalg_check(args) -> int:
    ctx = _ctx(args)
    ok, counterexample = check_amalgamation_bounded(ctx, args.k)
    report = {"amalgamation": ok}
    lines = [f"amalgamation up to size {args.k}: {ok}"]
    if counterexample:
        report["counterexample_sizes"] = [
            counterexample.base.size,
            counterexample.left.size,
            counterexample.right.size,
        ]
        lines.append(
            "counterexample sizes (base, left, right): "
            f"{report['counterexample_sizes']}"
        )
    _emit(args, report, lines)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_kb(args) -> int:
    with open(args.presentation) as fh:
        pres = parse_presentation(fh.read())
    result = knuth_bendix(pres, args.max_rules, args.max_word_len)
    report = {
        "completed": result.completed,
        "rules": [[format_word(l), format_word(r)] for l, r in result.system.rules],
        "reason": result.reason,
    }
    lines = [f"completed: {result.completed}"]
    lines += [f"  {format_word(l)} -> {format_word(r)}" for l, r in result.system.rules]
    if result.reason:
        lines.append(f"reason: {result.reason}")
    _emit(args, report, lines)
    return EXIT_OK if result.completed else EXIT_BUDGET


def cmd_reduce(args) -> int:
    with open(args.presentation) as fh:
        pres = parse_presentation(fh.read())
    result = knuth_bendix(pres, args.max_rules, args.max_word_len)
    if not result.completed:
        _emit(args, {"completed": False, "reason": result.reason},
              [f"completion failed: {result.reason}"])
        return EXIT_BUDGET
    word = parse_word(args.word, pres.alphabet)
    nf = srs_reduce(result.system, word)
    _emit(args, {"input": format_word(word), "normal_form": format_word(nf)},
          [f"normal form: {format_word(nf)}"])
    return EXIT_OK


def _amalgam_ctx_from_args(args) -> AmalgamCtx:
    if args.sym:
        return sym_stab_amalgam(args.sym)
    if not (args.g1 and args.g2 and args.base and args.emb1 and args.emb2):
        raise AlgebraError("give --sym N, or all of --g1 --g2 --base --emb1 --emb2")
    g1 = FiniteGroup(FiniteAlgebra.load(args.g1))
    g2 = FiniteGroup(FiniteAlgebra.load(args.g2))
    base = FiniteGroup(FiniteAlgebra.load(args.base))
    emb1 = [int(x) for x in args.emb1.split(",")]
    emb2 = [int(x) for x in args.emb2.split(",")]
    return AmalgamCtx.build(g1, g2, base, emb1, emb2)


def _parse_amalgam_word(text: str) -> list[tuple[int, int]]:
    word = []
    for token in text.split():
        factor, _, elem = token.partition(":")
        word.append((int(factor), int(elem)))
    return word


def cmd_amalgam_nf(args) -> int:
    ctx = _amalgam_ctx_from_args(args)
    word = _parse_amalgam_word(args.word)
    el = amalgam_normal_form(ctx, word)
    report = {"reps": [list(r) for r in el.reps], "tail": el.tail}
    _emit(args, report, [f"normal form: reps={list(el.reps)} tail={el.tail}"])
    return EXIT_OK


def cmd_amalgam_scan(args) -> int:
    ctx = _amalgam_ctx_from_args(args)
    rows = []
    ok = True
    for length in range(args.max_len + 1):
        for string in alternating_strings(ctx, length):
            has_torsion = coset_torsion_scan(ctx, string)
            expected = length % 2 == 1 or length == 0
            rows.append({
                "length": length,
                "string": [list(s) for s in string],
                "has_torsion": has_torsion,
            })
            if has_torsion != expected:
                ok = False
    report = {"cosets": rows, "matches_parity_rule": ok}
    lines = [
        f"len={r['length']} torsion={r['has_torsion']} string={r['string']}"
        for r in rows
    ]
    lines.append(f"even cosets torsion-free, odd and empty cosets torsion: {ok}")
    _emit(args, report, lines)
    return EXIT_OK if ok else EXIT_REFUTED


# -- curated experiment suites -------------------------------------------------


def _suite_prop_2_1():
    from .freeness import (
        CollapseRule,
        FreeTermContext,
        Word,
        make_tag,
        no_free_triple_bounded,
        verify_free_pair,
    )

    checks = []
    cert = no_free_triple_bounded(3)
    checks.append(("free1:one-generator-word-triples-vanish", cert.all_word_triples_vanish))
    checks.append(("free1:tag-survives-three-generators", cert.tag_survives_on_three_generators))
    pair = verify_free_pair(CollapseRule.TWO_GENERATED, 3)
    checks.append(("free1:px-qx-pair-free-depth-3", not pair.failures and pair.collisions == 0))
    one = FreeTermContext(CollapseRule.TWO_GENERATED, 1)
    killed = make_tag(one, Word("p", 0), Word("pq", 0), Word("qq", 0))
    checks.append(("free1:px-pqx-qqx-not-free", isinstance(killed, freeness.Zero)))
    return checks


def _suite_prop_2_2():
    from .freeness import (
        CollapseRule,
        FreeTermContext,
        Tag,
        Word,
        make_tag,
        verify_free_pair,
        witness_triple_hom,
    )
    import random

    checks = []
    ctx = FreeTermContext(CollapseRule.STEM_SPLIT, 1)
    killed = make_tag(ctx, Word("p", 0), Word("pq", 0), Word("qq", 0))
    checks.append(("free0:px-pqx-qqx-collapses", isinstance(killed, freeness.Zero)))
    survivor = make_tag(ctx, Word("", 0), Word("q", 0), Word("p", 0))
    checks.append(("free0:x-qx-px-tag-survives", isinstance(survivor, Tag)))
    pair = verify_free_pair(CollapseRule.STEM_SPLIT, 3)
    checks.append(("free0:px-qx-pair-free-depth-3", not pair.failures and pair.collisions == 0))
    rng = random.Random(20240601)
    ok = True
    for _ in range(25):
        words = ["".join(rng.choice("pq") for _ in range(rng.randint(0, 8))) for _ in range(3)]
        if not witness_triple_hom(*words).ok:
            ok = False
    checks.append(("free0:witness-triples-map-correctly", ok))
    return checks


def _suite_cd_family():
    checks = []
    c2, c3 = cyclic_unary(2), cyclic_unary(3)
    from .algcore import disjoint_union

    ctx = PrevarietyCtx((c2, c3))
    alg, _ = free_algebra(ctx, 1)
    checks.append(("cyclic:free-rank-1-has-6-elements", alg.size == 6))
    checks.append(("cyclic:free-rank-1-is-the-6-cycle", are_isomorphic(alg, cyclic_unary(6))))
    q = parse_quasi_identity("=> a(a(a(a(a(a(x)))))) = x")
    checks.append(("cyclic:sixth-power-identity", quasi_identity_holds(alg, q)))
    checks.append(("cyclic:c2-c3-incompatible", not is_compatible(ctx, [c2, c3])))
    union_ctx = PrevarietyCtx((disjoint_union([c2, c3]),))
    checks.append(("cyclic:compatible-under-union-generator",
                   is_compatible(union_ctx, [c2, c3])))
    checks.append(("cyclic:cover-two-generators",
                   len(minimum_compatible_cover(ctx, [c2, c3])) == 2))
    checks.append(("cyclic:cover-union-generator",
                   len(minimum_compatible_cover(union_ctx, [c2, c3])) == 1))
    checks.append(("cyclic:c2-relatively-irreducible", is_p_subdirectly_irreducible(ctx, c2)))
    checks.append(("cyclic:c6-relatively-reducible",
                   not is_p_subdirectly_irreducible(ctx, cyclic_unary(6))))
    return checks


def _suite_monoid_amalgam():
    from .srs import Presentation, coproduct_presentation, words_equal

    checks = []
    inverses = Presentation(("x", "y", "z"), ((("x", "y"), ()), (("z", "x"), ())))
    done = knuth_bendix(inverses)
    checks.append(("monoid:one-sided-inverses-complete", done.completed))
    sys_ = done.system
    checks.append(("monoid:left-right-inverses-fall-together",
                   words_equal(sys_, ("y",), ("z",))))
    checks.append(("monoid:xy-collapses-to-1", srs_reduce(sys_, ("x", "y")) == ()))
    checks.append(("monoid:zx-collapses-to-1", srs_reduce(sys_, ("z", "x")) == ()))

    b1 = Presentation(("u1", "x", "y"), ((("y",), ("x", "u1")),))
    b2 = Presentation(("u2", "x", "y"), ((("y",), ("x", "u2")),))
    two = knuth_bendix(coproduct_presentation([b1, b2], ["x", "y"]))
    checks.append(("monoid:two-distinguished-generators-stay-distinct",
                   two.completed and not words_equal(two.system, ("u1",), ("u2",))))
    checks.append(("monoid:xu1-equals-xu2",
                   words_equal(two.system, ("x", "u1"), ("x", "u2"))))
    b3 = Presentation(("x", "y", "w"), ((("x", "w"), ()), (("w", "x"), ())))
    three = knuth_bendix(coproduct_presentation([b1, b2, b3], ["x", "y"]))
    checks.append(("monoid:adjoining-inverse-identifies-them",
                   three.completed
                   and words_equal(three.system, ("u1",), ("u2",))
                   and words_equal(three.system, ("u1",), ("w", "y"))))
    return checks


def _suite_amalgam_torsion():
    checks = []
    ctx = sym_stab_amalgam(3)
    ok = True
    for length in range(0, 5):
        expected = length % 2 == 1 or length == 0
        for string in alternating_strings(ctx, length):
            if coset_torsion_scan(ctx, string) != expected:
                ok = False
    checks.append(("amalgam:coset-torsion-parity-up-to-4", ok))
    for n in (3, 4, 5):
        survey = stabilizer_coset_survey(n)
        checks.append((f"amalgam:stabilizer-cosets-have-involutions-n{n}",
                       survey.all_cosets_have_involutions))
    return checks


def _suite_constants_census():
    from .prevariety import constants_si_census

    checks = []
    census = constants_si_census(3)
    checks.append(("constants:census-count-is-4", census.count == 4))
    off_diagonal = all(
        census.compatibility[i][j] == (i == j)
        for i in range(census.count)
        for j in range(census.count)
    )
    checks.append(("constants:distinct-partitions-incompatible", off_diagonal))
    return checks


def _suite_chain_theorem():
    from .algcore import disjoint_union
    from .prevariety import chain_independence

    checks = []
    c3 = cyclic_unary(3)
    a0 = disjoint_union([c3, c3])
    report = chain_independence(a0, [[0, 1, 2]], [[3, 4, 5]])
    checks.append(("chain:two-summands-independent", report.ok))
    checks.append(("chain:retraction-found", report.retractions[0] is not None))
    a0 = disjoint_union([c3, c3, c3])
    report = chain_independence(
        a0, [[0, 1, 2, 3, 4, 5], [0, 1, 2]], [[6, 7, 8], [3, 4, 5]]
    )
    checks.append(("chain:three-summand-chain-independent", report.ok))
    return checks


SUITES = {
    "prop-2-1": _suite_prop_2_1,
    "prop-2-2": _suite_prop_2_2,
    "cd-family": _suite_cd_family,
    "monoid-amalgam": _suite_monoid_amalgam,
    "amalgam-torsion": _suite_amalgam_torsion,
    "constants-census": _suite_constants_census,
    "chain-theorem": _suite_chain_theorem,
}


def cmd_paperlab(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; known: {', '.join(sorted(SUITES))}",
              file=sys.stderr)
        return EXIT_USAGE
    checks = SUITES[args.suite]()
    report = {"suite": args.suite,
              "checks": [{"anchor": a, "ok": ok} for a, ok in checks]}
    lines = [f"{'PASS' if ok else 'FAIL'} [{anchor}]" for anchor, ok in checks]
    _emit(args, report, lines)
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_REFUTED


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prevar",
        description="finite universal algebra workbench",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable reports")
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_generators(p):
        p.add_argument("--gen", action="append", required=True,
                       help="generator algebra file (repeatable)")

    p = sub.add_parser("free", help="canonical free algebra on n generators")
    with_generators(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_free)

    p = sub.add_parser("coproduct", help="canonical coproduct of algebra files")
    with_generators(p)
    p.add_argument("factors", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_coproduct)

    p = sub.add_parser("compatible", help="are all factors jointly embeddable")
    with_generators(p)
    p.add_argument("factors", nargs="+")
    p.set_defaults(func=cmd_compatible)

    p = sub.add_parser("comfortable", help="is the first coprojection one-to-one")
    with_generators(p)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_comfortable)

    p = sub.add_parser("independent", help="do the subsets form a coproduct")
    with_generators(p)
    p.add_argument("ambient")
    p.add_argument("--subset", action="append", required=True,
                   help="comma-separated carrier indices (repeatable)")
    p.set_defaults(func=cmd_independent)

    p = sub.add_parser("si", help="subdirect irreducibility and monolith")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_si)

    p = sub.add_parser("rel-si", help="subdirect irreducibility relative to SP(Y)")
    with_generators(p)
    p.add_argument("algebra")
    p.set_defaults(func=cmd_rel_si)

    p = sub.add_parser("member", help="membership in SP(Y) by point separation")
    with_generators(p)
    p.add_argument("algebra")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("cover", help="minimum partition into compatible blocks")
    with_generators(p)
    p.add_argument("factors", nargs="+")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("qid", help="does a quasi-identity hold")
    p.add_argument("algebra")
    p.add_argument("quasi_identity")
    p.set_defaults(func=cmd_qid)

    p = sub.add_parser("amalg-check", help="bounded amalgamation property check")
    with_generators(p)
    p.add_argument("-k", type=int, required=True, help="member size bound")
    p.set_defaults(func=cmd_amalg_check)

    p = sub.add_parser("kb", help="Knuth-Bendix completion of a presentation file")
    p.add_argument("presentation")
    p.add_argument("--max-rules", type=int, default=64)
    p.add_argument("--max-word-len", type=int, default=64)
    p.set_defaults(func=cmd_kb)

    p = sub.add_parser("reduce", help="normal form of a word after completion")
    p.add_argument("presentation")
    p.add_argument("word")
    p.add_argument("--max-rules", type=int, default=64)
    p.add_argument("--max-word-len", type=int, default=64)
    p.set_defaults(func=cmd_reduce)

    def with_amalgam(p):
        p.add_argument("--sym", type=int, help="use Sym(n) over the last-point stabilizer")
        p.add_argument("--g1")
        p.add_argument("--g2")
        p.add_argument("--base")
        p.add_argument("--emb1", help="comma-separated images of the base in g1")
        p.add_argument("--emb2", help="comma-separated images of the base in g2")

    p = sub.add_parser("amalgam-nf", help="normal form in an amalgamated product")
    with_amalgam(p)
    p.add_argument("word", help="space-separated factor:element letters")
    p.set_defaults(func=cmd_amalgam_nf)

    p = sub.add_parser("amalgam-scan", help="torsion scan over coset strings")
    with_amalgam(p)
    p.add_argument("--max-len", type=int, default=4)
    p.set_defaults(func=cmd_amalgam_scan)

    p = sub.add_parser("paperlab", help="run a curated experiment suite")
    p.add_argument("suite")
    p.set_defaults(func=cmd_paperlab)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code != 0 else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except MembershipError as exc:
        print(f"membership failure: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except (AlgebraError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
