"""
The lagr command line: census, triple, Weyl and rank tables, and the oracle verification suite.
"""

from __future__ import annotations

import functools
import logging
from typing import Callable, List, Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress

from lagrangian_variety import linalg
from lagrangian_variety.bd import (
    Triple,
    enumerate_sequences,
    enumerate_triples,
    is_nilpotent,
    parse_triple,
    s_of,
    sequence_for,
)
from lagrangian_variety.checks import Checks, progress_columns
from lagrangian_variety.chevalley import (
    build_lagrangian,
    build_lie_algebra,
    gh_lagrangian,
    intersect_with_diagonal,
    is_gh_lagrangian_subalgebra,
    is_lagrangian_subalgebra,
    karolinsky_lagrangian,
    normalizer,
    normalizer_bound,
    normalizer_in_diagonal,
    phi_nilpotency,
    stabilizer_algebra,
    v_prime,
    verify_model,
)
from lagrangian_variety.config import Config
from lagrangian_variety.errors import EXIT_VERIFY_FAILED, LagrangianError, exit_code
from lagrangian_variety.lagrlin import (
    canonical_lagrangians,
    h_delta,
    h_minus_delta,
    lagrangian_grassmannian_dim,
    named_lagrangian,
)
from lagrangian_variety.poisson import (
    CERTIFIED,
    Pi0Calculator,
    conjugacy_correction,
    conjugacy_rank,
    flag_table,
)
from lagrangian_variety.render import FORMATS, emit, show
from lagrangian_variety.rootdata import (
    RootSystem,
    build_root_system,
    format_isometry,
    format_subset,
    parse_subset,
)
from lagrangian_variety.strata import (
    OrbitLabel,
    census,
    component_maximality,
    lagr_gh_census,
    orbit_dim,
    stratum_dim,
    torus_sample,
)
from lagrangian_variety.weyl import h_minus_w_dim, min_coset_reps, min_double_coset_reps, weyl_group

log = logging.getLogger(__name__)

FLAG_COLUMNS = ("u", "v", "w", "dim", "rank", "correction", "nonempty")
VERBOSITY = (logging.WARNING, logging.INFO, logging.DEBUG)


def setup_logging(verbose: int) -> None:
    logging.basicConfig(
        level=VERBOSITY[min(verbose, len(VERBOSITY) - 1)],
        format="%(message)s",
        datefmt="%H:%M:%S",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def common_options(default_format: str = "json") -> Callable:
    """Shared flags; the wrapped command receives a Config instead of them."""

    def decorate(command: Callable) -> Callable:
        @click.option("--format", "fmt", type=click.Choice(FORMATS), default=default_format, show_default=True)
        @click.option("--seed", type=int, default=None, help="Seed for every sample (default 0xBD)")
        @click.option("--rank-cap", type=int, default=None)
        @click.option("--oracle-cap", type=int, default=None)
        @click.option("--weyl-cap", type=int, default=None)
        @click.option("--samples", type=int, default=None, help="Torus samples per coset representative")
        @click.option("-v", "--verbose", count=True)
        @functools.wraps(command)
        def wrapper(*args, fmt, seed, rank_cap, oracle_cap, weyl_cap, samples, verbose, **kwargs):
            setup_logging(verbose)
            config = Config.from_env().replace(
                output_format=fmt,
                seed=seed,
                rank_cap=rank_cap,
                oracle_cap=oracle_cap,
                weyl_cap=weyl_cap,
                torus_samples=samples,
            )
            try:
                return command(*args, config=config, **kwargs)
            except LagrangianError as e:
                click.echo(f"error: {e}", err=True)
                raise SystemExit(exit_code(e))

        return wrapper

    return decorate


def _root_system(type_spec: str, config: Config) -> RootSystem:
    return build_root_system(type_spec, config.rank_cap)


def _triple_row(rs: RootSystem, triple: Triple) -> dict:
    return {
        "S": format_subset(triple.S),
        "T": format_subset(triple.T),
        "d": format_isometry(triple.d),
        "z": rs.rank - len(triple.S),
        "nilpotent": is_nilpotent(rs, triple),
    }


@click.group()
def cli():
    """Census, normal forms and Poisson ranks on the variety of Lagrangian subalgebras of g + g."""


@cli.command("census")
@click.argument("type_spec")
@click.option("--strata", is_flag=True, help="List every stratum, not only the components")
@click.option("--oracle", is_flag=True, help="Take parities from the Chevalley oracle")
@common_options()
def census_command(type_spec: str, strata: bool, oracle: bool, config: Config):
    """Irreducible components (or all strata) of the variety for TYPE_SPEC."""
    rs = _root_system(type_spec, config)
    if oracle:
        build_lie_algebra(rs, config.oracle_cap)
    result = census(rs, config.threads, use_oracle=oracle)
    payload = result.as_dict(strata)
    for note in result.notes:
        log.info(note)
    show(emit(payload["triples"], config.output_format, payload=payload), config.output_format)


@cli.command("bd")
@click.argument("type_spec")
@click.option("--nilpotent", is_flag=True, help="Only triples with S(1, d) empty")
@common_options()
def bd_command(type_spec: str, nilpotent: bool, config: Config):
    """Generalized Belavin-Drinfeld triples of TYPE_SPEC."""
    rs = _root_system(type_spec, config)
    rows = [_triple_row(rs, triple) for triple in enumerate_triples(rs, nilpotent_only=nilpotent)]
    show(emit(rows, config.output_format), config.output_format)


@cli.command("weyl")
@click.argument("type_spec")
@click.option("--T", "T", default=None, help="Subset T: list W^T")
@click.option("--S", "S", default=None, help="Subset S: with --T, list the double coset representatives")
@common_options()
def weyl_command(type_spec: str, T: Optional[str], S: Optional[str], config: Config):
    """Weyl group elements, W^T or ^S W^T."""
    rs = _root_system(type_spec, config)
    group = weyl_group(rs, config.weyl_cap)
    T_set = parse_subset(T, rs.rank) if T is not None else ()
    if S is not None:
        elements = min_double_coset_reps(rs, parse_subset(S, rs.rank), T_set, config.weyl_cap)
    elif T is not None:
        elements = min_coset_reps(rs, T_set, config.weyl_cap)
    else:
        elements = list(group)
    rows = [{"w": str(w), "length": w.length} for w in elements]
    show(emit(rows, config.output_format), config.output_format)


@cli.command("gh")
@click.argument("type_spec")
@common_options()
def gh_command(type_spec: str, config: Config):
    """Dimension and components of the Lagrangian subalgebras of g + h."""
    rs = _root_system(type_spec, config)
    dim, components = lagr_gh_census(rs)
    model = build_lie_algebra(rs, config.oracle_cap)
    verified = all(is_gh_lagrangian_subalgebra(gh_lagrangian(model, V)) for V in (h_delta(rs), h_minus_delta(rs)))
    rows = [{"type": rs.type_spec, "dim": dim, "components": components, "verified": verified}]
    show(emit(rows, config.output_format), config.output_format)
    if not verified:
        raise SystemExit(EXIT_VERIFY_FAILED)


@cli.group("rank")
@click.argument("type_spec")
@click.pass_context
def rank_group(ctx: click.Context, type_spec: str):
    """Rank tables of the Poisson structure Pi_0."""
    ctx.obj = type_spec


@rank_group.command("flag")
@click.option("--all", "everything", is_flag=True, help="Every (u, v, w) in W^3")
@click.option("--u", default=None)
@click.option("--v", default=None)
@click.option("--w", default=None)
@click.option("--general", is_flag=True, help="Cross-check certified cells against the general machinery")
@common_options("csv")
@click.pass_obj
def rank_flag(type_spec: str, everything: bool, u, v, w, general: bool, config: Config):
    """Closed-form ranks on shifted double Bruhat cells."""
    rs = _root_system(type_spec, config)
    group = weyl_group(rs, config.weyl_cap)
    elements = None
    if not everything:
        if None in (u, v, w):
            raise click.UsageError("give --all or all of --u, --v and --w")
        elements = [(group.element(u), group.element(v), group.element(w))]
    rows = flag_table(
        rs,
        elements,
        samples=config.bruhat_samples,
        seed=config.seed,
        prime=config.prime,
        general=general,
        cap=config.oracle_cap,
    )
    payload = {
        "type": rs.type_spec,
        "rows": [row.as_dict() for row in rows],
        "conditional": any(row.nonempty != CERTIFIED for row in rows),
    }
    columns = FLAG_COLUMNS + (("generalRank",) if general else ())
    show(emit(payload["rows"], config.output_format, columns, payload), config.output_format)


@rank_group.command("conj")
@click.option("--dimC", "dim_c", type=int, required=True, help="Dimension of the conjugacy class")
@common_options("csv")
@click.pass_obj
def rank_conj(type_spec: str, dim_c: int, config: Config):
    """Ranks on C meet B w B^- for a conjugacy class C of dimension dimC."""
    rs = _root_system(type_spec, config)
    rows = []
    for w in weyl_group(rs, config.weyl_cap):
        result = conjugacy_rank(dim_c, w)
        rows.append(
            {
                "w": str(w),
                "rank": result.rank,
                "correction": conjugacy_correction(rs, w),
                "empty": result.empty,
                "openLeaf": result.open_leaf,
            }
        )
    show(emit(rows, config.output_format, ("w", "rank", "correction", "empty", "openLeaf")), config.output_format)


@rank_group.command("general")
@click.option("--triple", "triple_text", required=True, help='e.g. "{a1},{a1},id"')
@click.option("--V", "V_name", default=None, help="diag, antidiag or zero")
@click.option("--v", "v_word", default="e")
@click.option("--w", "w_word", default="e")
@click.option("--v1", "v1_word", default="e")
@common_options("csv")
@click.pass_obj
def rank_general(type_spec: str, triple_text: str, V_name, v_word, w_word, v1_word, config: Config):
    """The rank on the G_Delta-orbit of [e, v] l_{S,T,d,V} meet the (B x B^-)-orbit of (w, v1)."""
    rs = _root_system(type_spec, config)
    triple = parse_triple(triple_text, rs)
    if V_name is None:
        V_name = "zero" if len(triple.S) == rs.rank else "diag"
    V = named_lagrangian(rs, triple.S, triple.T, triple.d, V_name)
    group = weyl_group(rs, config.weyl_cap)
    O = OrbitLabel("GDelta", triple, V, v=group.element(v_word))
    O_prime = OrbitLabel("BB", triple, V, w=group.element(w_word), v=group.element(v1_word))
    result = Pi0Calculator(rs, config.oracle_cap).rank(O, O_prime)
    rows = [
        {
            "triple": str(triple),
            "V": V_name,
            "v": v_word,
            "w": w_word,
            "v1": v1_word,
            "dim": result.dim,
            "rank": result.rank,
            "correction": result.correction,
            "nonempty": result.nonempty,
        }
    ]
    show(emit(rows, config.output_format), config.output_format)


# Verification


def _check_model(rs: RootSystem, checks: Checks, config: Config) -> None:
    model = build_lie_algebra(rs, config.oracle_cap)
    with checks.create_check("model", "Chevalley model", total=1) as check:
        problems = verify_model(model)
        if problems:
            check.fail("; ".join(problems))
        else:
            check.advance()


def _normal_forms(rs: RootSystem, config: Config):
    """(triple, V, v, m) over every triple, canonical V, v in W^T and m in {e} + sample."""
    sample = [None] + torus_sample(rs.rank, config.seed, config.torus_samples)
    for triple in enumerate_triples(rs):
        for V in canonical_lagrangians(rs, triple.S, triple.T, triple.d, config.seed, config.lagrangian_samples):
            for v in min_coset_reps(rs, triple.T, config.weyl_cap):
                for m in sample:
                    yield triple, V, v, m


def _check_normal_forms(rs: RootSystem, checks: Checks, config: Config) -> None:
    model = build_lie_algebra(rs, config.oracle_cap)
    forms = list(_normal_forms(rs, config))
    names = ("lagrangian", "normalizer", "intersection", "nilpotency", "bound")
    titles = ("Lagrangian axioms", "normalizer formula", "g_Delta intersection", "phi nilpotency", "normalizer bound")
    families = {name: checks.create_check(name, title, total=len(forms)) for name, title in zip(names, titles)}
    for triple, V, v, m in forms:
        label = f"{triple} {V} v={v} m={m}"
        L = build_lagrangian(model, triple, V, v, m)
        _record(families["lagrangian"], label, lambda: is_lagrangian_subalgebra(L))
        _record(families["normalizer"], label, lambda: normalizer_in_diagonal(L) is not None)
        _record(families["intersection"], label, lambda: intersect_with_diagonal(L) is not None)
        _record(families["nilpotency"], label, lambda: phi_nilpotency(model, triple, v, m).ok)
        _record(families["bound"], label, lambda: normalizer_bound(model, L))
    for check in families.values():
        check.complete()


def _record(check, label: str, test: Callable[[], bool]) -> None:
    try:
        passed = test()
    except (LagrangianError, AssertionError) as e:
        check.fail(f"{label}: {e}")
        return
    if passed:
        check.advance()
    else:
        check.fail(label)


def _check_constructions(rs: RootSystem, checks: Checks, config: Config) -> None:
    """The stabilizer is the normalizer in g + g, and the parabolic construction agrees with build_lagrangian."""
    model = build_lie_algebra(rs, config.oracle_cap)
    triples = enumerate_triples(rs)
    check = checks.create_check("constructions", "parabolic constructions", total=len(triples))
    for triple in triples:
        V = canonical_lagrangians(rs, triple.S, triple.T, triple.d, config.seed, 0)[0]
        L = build_lagrangian(model, triple, V)
        _record(
            check,
            str(triple),
            lambda: stabilizer_algebra(model, triple).same_as(normalizer(L))
            and karolinsky_lagrangian(model, triple, V).same_as(L),
        )
    check.complete()


def _check_sequences(rs: RootSystem, checks: Checks, config: Config) -> None:
    triples = enumerate_triples(rs)
    check = checks.create_check("sequences", "quadruple sequences", total=len(triples))

    def bijective(triple: Triple) -> bool:
        limits = [sequence.v_inf for sequence in enumerate_sequences(rs, triple, config.weyl_cap)]
        reps = min_coset_reps(rs, triple.T, config.weyl_cap)
        if sorted(map(str, limits)) != sorted(map(str, reps)):
            return False
        return all(sequence_for(rs, triple, v, config.weyl_cap).v_inf == v for v in reps)

    for triple in triples:
        _record(check, str(triple), lambda: bijective(triple))
    check.complete()


def _check_belavin_drinfeld(rs: RootSystem, checks: Checks, config: Config) -> None:
    """Nilpotent triples with V' = 0 meet g_Delta trivially; V' != 0 forces a nonzero intersection."""
    model = build_lie_algebra(rs, config.oracle_cap)
    identity = weyl_group(rs, config.weyl_cap).identity
    cases = [
        (triple, V)
        for triple in enumerate_triples(rs)
        for V in canonical_lagrangians(rs, triple.S, triple.T, triple.d, config.seed, config.lagrangian_samples)
    ]
    check = checks.create_check("bd", "Belavin-Drinfeld correspondence", total=len(cases))
    for triple, V in cases:
        admissible = linalg.dim(v_prime(rs, triple, V, identity)) == 0
        nilpotent = not s_of(rs, triple, identity)
        meet = intersect_with_diagonal(build_lagrangian(model, triple, V)).dim
        if admissible and nilpotent:
            _record(check, f"{triple} {V}", lambda: meet == 0)
        elif not admissible:
            _record(check, f"{triple} {V}", lambda: meet > 0)
        else:
            check.advance()
    check.complete()


def _check_strata(rs: RootSystem, checks: Checks, config: Config) -> None:
    """Orbit dimensions against the oracle normalizer, strata as orbit times Lagrangian Grassmannian."""
    model = build_lie_algebra(rs, config.oracle_cap)
    triples = enumerate_triples(rs)
    check = checks.create_check("strata", "stratum dimensions", total=len(triples) + 1)

    def dimensions_agree(triple: Triple) -> bool:
        z = rs.rank - len(triple.S)
        V = canonical_lagrangians(rs, triple.S, triple.T, triple.d, config.seed, 0)[0]
        stabilizer = normalizer(build_lagrangian(model, triple, V)).dim
        orbit = orbit_dim(rs, triple)
        return orbit == 2 * model.n - stabilizer and stratum_dim(rs, triple) == orbit + lagrangian_grassmannian_dim(
            2 * z
        )

    for triple in triples:
        _record(check, str(triple), lambda: dimensions_agree(triple))
    result = census(rs, config.threads)
    _record(
        check,
        "component maximality",
        lambda: len(component_maximality(rs, result)) == len(result.rows) - len(result.components),
    )
    check.complete()


def _check_poisson(rs: RootSystem, checks: Checks, config: Config) -> None:
    group = weyl_group(rs, config.weyl_cap)
    simple = [group.reflection(i) for i in range(rs.rank)]
    check = checks.create_check("conjugacy", "conjugacy corrections", total=len(group))
    for w in group:
        _record(
            check,
            str(w),
            lambda: {conjugacy_correction(rs, group.conjugate(x, w)) for x in simple + [group.identity]}
            == {h_minus_w_dim(w)},
        )
    check.complete()
    if len(rs.factors) != 1 or rs.factors[0][0] != "A" or rs.rank > 2:
        return
    flag = checks.create_check("flag", "flag ranks", total=1)

    def ranks_agree() -> bool:
        rows = flag_table(
            rs, samples=config.bruhat_samples, seed=config.seed, prime=config.prime, general=True, cap=config.oracle_cap
        )
        certified = [row for row in rows if row.nonempty == CERTIFIED]
        return bool(certified) and all(row.general_rank == row.rank for row in certified)

    _record(flag, "W^3", ranks_agree)
    flag.complete()


def _check_gh(rs: RootSystem, checks: Checks, config: Config) -> None:
    model = build_lie_algebra(rs, config.oracle_cap)
    check = checks.create_check("gh", "g + h Lagrangians", total=2)
    for V in (h_delta(rs), h_minus_delta(rs)):
        _record(check, str(V), lambda: is_gh_lagrangian_subalgebra(gh_lagrangian(model, V)))
    check.complete()


SUITE: List[Callable[[RootSystem, Checks, Config], None]] = [
    _check_model,
    _check_constructions,
    _check_sequences,
    _check_strata,
    _check_belavin_drinfeld,
    _check_gh,
    _check_poisson,
    _check_normal_forms,
]


def run_suite(rs: RootSystem, config: Config, progress: Optional[Progress] = None) -> Checks:
    """Every oracle check for rs; failures are collected, never raised."""
    build_lie_algebra(rs, config.oracle_cap)
    checks = Checks(f"verify {rs.type_spec}")
    overall = progress.add_task(checks.title, total=None) if progress is not None else None
    tasks = {}
    for family in SUITE:
        log.info(f"{rs.type_spec}: {family.__name__.removeprefix('_check_')}")
        family(rs, checks, config)
        if progress is not None:
            for key, check in checks.items():
                if key not in tasks:
                    tasks[key] = progress.add_task(check.title, total=check.total)
                progress.update(tasks[key], total=check.total, completed=check.completed)
            progress.update(overall, total=checks.total, completed=checks.completed)
    return checks


@cli.command("verify")
@click.argument("type_spec")
@common_options()
def verify_command(type_spec: str, config: Config):
    """Cross-check every closed formula against the Chevalley oracle."""
    rs = _root_system(type_spec, config)
    build_lie_algebra(rs, config.oracle_cap)
    console = Console(stderr=True)
    with Progress(*progress_columns(), console=console, transient=True, disable=not console.is_terminal) as progress:
        checks = run_suite(rs, config, progress)
    rows = [
        {"check": check.title, "total": check.total, "failures": len(check.failures), "passed": check.passed}
        for check in checks.values()
    ]
    payload = {"type": rs.type_spec, "passed": checks.passed, "checks": rows, "failures": checks.failures}
    show(emit(rows, config.output_format, payload=payload), config.output_format)
    if not checks.passed:
        for failure in checks.failures:
            log.error(failure)
        raise SystemExit(EXIT_VERIFY_FAILED)


def main():
    cli()
