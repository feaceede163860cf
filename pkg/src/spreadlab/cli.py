"""Command-line entry point: ``spreadlab <command> ...`` or ``python -m spreadlab``.

Every command prints (or writes with ``--out``) one canonical JSON report::

    {"command", "config", "results", "verdicts", "version", "wall_time"}

Exit status is 0 when every verdict is true or not applicable, 2 when some
verdict is false, and 1 on invalid input or configuration.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from math import comb, factorial

from . import __version__
from .approximation import (
    build_chain,
    check_chain_properties,
    check_S_t_intersecting,
    minimality_violation,
    reduce_to_minimal,
    spread_approximate,
    verify_approximation,
)
from .family import (
    FamilyError,
    GRID_MAX_N,
    PermutationFamily,
    SetFamily,
    avoids_intersection,
    cube_family,
    fano_plane,
    is_t_intersecting,
    k_subsets,
    product_family,
    symmetric_group,
    symmetric_group_family,
)
from .oracle import (
    DEFAULT_BUDGET,
    PERM_ORACLE_MAX_N,
    count_intersection_classes,
    derangement_count,
    hilton_milner_perm_family,
    is_trivial_t_intersecting,
    max_avoiding,
    max_regular_intersecting,
    max_t_intersecting,
    perm_intersection_profile,
    regular_feasibility,
)
from .probabilistic import (
    RngSpec,
    containment_probability,
    find_disjoint_pair_by_coloring,
    find_sunflower,
    spread_lemma_audit,
    sunflower_thresholds,
)
from .serialize import (
    InputError,
    canonical_dumps,
    dumps_family,
    dumps_perms,
    load_family,
    mask_json,
)
from .spread import (
    BudgetExceeded,
    RegularityReport,
    is_rel_homogeneous,
    is_rq_spread,
    is_tau_homogeneous,
    observation_spread_bound,
    regularity_check,
    spread_radius,
)

SIZE_GUARD = 10 ** 6
THREADS_ENV = "SPREADLAB_THREADS"
OK, ERROR, VIOLATION = 0, 1, 2


class ConfigError(ValueError):
    pass


# -- argument types -------------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _threads(args) -> int:
    env = os.environ.get(THREADS_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer") from None
    else:
        value = args.threads
    _require(value >= 1, "thread count must be at least 1")
    return value


def _sets(F: SetFamily) -> list[list[int]]:
    return F.to_sets()


# -- commands -------------------------------------------------------------------------


def cmd_generate(args):
    kind = args.kind
    need = {"ksets": ("n", "k"), "product": ("n", "k", "w"), "cube": ("n", "k"), "perms": ("n",), "fano": ()}[kind]
    for name in need:
        _require(getattr(args, name) is not None, f"generate {kind} needs --{name}")
        _require(getattr(args, name) >= 1, f"--{name} must be positive")
    if kind == "ksets":
        _require(args.k <= args.n, "need k <= n")
        size = comb(args.n, args.k)
    elif kind == "product":
        _require(args.k <= args.n, "need k <= n")
        size = comb(args.n, args.k) ** args.w
    elif kind == "cube":
        size = args.n ** args.k
    elif kind == "perms":
        size = factorial(args.n)
    else:
        size = 7
    if size > SIZE_GUARD and not args.force:
        raise ConfigError(f"family would have {size} members (limit {SIZE_GUARD}); pass --force to override")
    if kind == "perms":
        P = symmetric_group(args.n)
        if args.as_perms:
            return dumps_perms(P)
        _require(args.n <= GRID_MAX_N, f"grid encoding supports n <= {GRID_MAX_N}; use --as-perms")
        return dumps_family(P.to_set_family())
    F = {
        "ksets": lambda: k_subsets(args.n, args.k),
        "product": lambda: product_family(args.n, args.k, args.w),
        "cube": lambda: cube_family(args.n, args.k),
        "fano": fano_plane,
    }[kind]()
    return dumps_family(F)


def cmd_spread(args):
    F = load_family(args.family)
    _require(len(F) > 0, "spread radius needs a nonempty family")
    rep = spread_radius(F, args.max_size)
    results = {
        "size": len(F),
        "radius": rep.radius,
        "witness": mask_json(rep.witness),
        "per_size_min": {str(s): v for s, v in sorted(rep.per_size_min.items())},
    }
    verdicts = {}
    if args.r is not None:
        _require(args.r > 0, "r must be positive")
        verdicts["r_spread"] = rep.is_r_spread(args.r)
    return results, verdicts


def cmd_homog(args):
    _require(args.tau >= 1, "tau must be at least 1")
    F = load_family(args.family)
    if args.ambient:
        A = load_family(args.ambient)
        _require(A.n == F.n, "family and ambient have different ground sets")
        _require(F.issubfamily(A), "family must be a subfamily of the ambient")
        ok, bad = is_rel_homogeneous(F, A, args.tau)
        return {"relative": True, "witness": mask_json(bad)}, {"homogeneous": ok}
    _require(F.uniform_k is not None or not len(F), "absolute homogeneity needs a uniform family")
    ok, bad = is_tau_homogeneous(F, args.tau)
    results = {"relative": False, "witness": mask_json(bad)}
    verdicts = {"homogeneous": ok}
    if ok and len(F):
        bound = observation_spread_bound(F.n, F.uniform_k, args.tau)
        rep = spread_radius(F)
        results["spread_radius"] = rep.radius
        results["guaranteed_radius"] = bound
        verdicts["radius_at_least_n_over_tau_k"] = rep.is_r_spread(bound)
    return results, verdicts


def cmd_rq_spread(args):
    _require(args.r > 0, "r must be positive")
    _require(args.q >= 0, "q must be nonnegative")
    A = load_family(args.family)
    ok, bad = is_rq_spread(A, args.r, args.q)
    witness = None if bad is None else {"S": mask_json(bad[0]), "X": mask_json(bad[1])}
    return {"witness": witness}, {"rq_spread": ok}


def cmd_regularity(args):
    _require(0 < args.eps <= 1, "eps must lie in (0, 1]")
    _require(0 < args.theta <= 1, "theta must lie in (0, 1]")
    _require(args.t >= 0 and args.q >= 0, "t and q must be nonnegative")
    A = load_family(args.family)
    _require(A.uniform_k is not None, "regularity needs a nonempty uniform family")
    try:
        rep = regularity_check(A, args.t, args.q, args.eps, args.theta, args.budget)
    except BudgetExceeded as exc:
        rep = exc.partial
    results = _regularity_json(rep)
    verdicts = {"regular": rep.ok if rep.complete else (False if not rep.ok else None)}
    return results, verdicts


def _regularity_json(rep: RegularityReport) -> dict:
    return {
        "failing_condition": rep.failing_condition,
        "failing_S": mask_json(rep.failing_S),
        "failing_l": rep.failing_l,
        "measured_epsilon": rep.measured_epsilon,
        "measured_theta": rep.measured_theta,
        "mean_set_size": rep.mean_set_size,
        "checked": rep.checked,
        "complete": rep.complete,
    }


def cmd_approx(args):
    _require(args.tau > 1, "tau must exceed 1")
    _require(args.q >= 0, "q must be nonnegative")
    A = load_family(args.ambient)
    F = load_family(args.family)
    _require(A.n == F.n, "family and ambient have different ground sets")
    _require(F.issubfamily(A), "family must be a subfamily of the ambient")
    res = spread_approximate(A, F, args.tau, args.q)
    ver = verify_approximation(res, A, F, args.tau, args.q)
    index = {M: i for i, M in enumerate(F.members)}
    results = {
        "S": [mask_json(B) for B in res.S],
        "pieces": [{"key": mask_json(B), "members": [index[M] for M in res.pieces[B].members]} for B in res.S],
        "remainder": [index[M] for M in res.remainder.members],
        "stop_reason": res.stop_reason,
        "trace": [
            {"step": st.step, "family_size": st.family_size, "chosen": mask_json(st.chosen),
             "link_size": st.link_size, "threshold": st.threshold}
            for st in res.trace
        ],
        "verification_notes": {
            name: {"witness": _witness_json(v.witness), "note": v.note}
            for name, v in _named(ver).items()
        },
    }
    verdicts = {name: v.ok for name, v in _named(ver).items()}
    if args.t is not None:
        ok, pair = check_S_t_intersecting(res, args.t)
        verdicts["S_t_intersecting"] = ok
        results["t_intersection_witness"] = None if pair is None else [mask_json(pair[0]), mask_json(pair[1])]
    return results, verdicts


def _named(ver) -> dict:
    return {
        "coverage": ver.coverage,
        "homogeneity": ver.homogeneity,
        "remainder_bound": ver.remainder_bound,
        "sizes": ver.sizes,
    }


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, tuple):
        return [_witness_json(x) for x in w]
    return w


def cmd_reduce(args):
    _require(args.t >= 1, "t must be at least 1")
    S = load_family(args.family)
    _require(is_t_intersecting(S, args.t), "family is not t-intersecting")
    T = reduce_to_minimal(S, args.t)
    bad = minimality_violation(T, args.t)
    return {"T": _sets(T)}, {"t_intersecting": is_t_intersecting(T, args.t), "minimal": bad is None}


def cmd_chain(args):
    _require(1 <= args.t <= args.q, "need 1 <= t <= q")
    S = load_family(args.family)
    A = load_family(args.ambient)
    _require(S.n == A.n, "family and ambient have different ground sets")
    _require(is_t_intersecting(S, args.t), "family is not t-intersecting")
    _require(S.max_size <= args.q, "members must have size at most q")
    if args.r is not None:
        _require(args.r > 0, "r must be positive")
    chain = build_chain(S, A, args.t, args.q)
    ver = check_chain_properties(chain, A, args.r)
    results = {
        "levels": [{"T": _sets(T), "W": _sets(W)} for T, W in chain.levels],
        "final": _sets(chain.final),
    }
    named = {
        "sizes": ver.sizes, "coverage": ver.coverage, "sunflower_free": ver.sunflower_free,
        "top_layer_bound": ver.top_layer_bound, "collapse_bound": ver.collapse_bound,
    }
    results["notes"] = {k: v.note for k, v in named.items()}
    return results, {k: v.ok for k, v in named.items()}


def cmd_sunflower(args):
    if args.action == "thresholds":
        _require(args.k >= 1 and args.petals >= 2, "need k >= 1 and petals >= 2")
        er, alwz = sunflower_thresholds(args.k, args.petals)
        return {"erdos_rado": er, "alwz": alwz}, {}
    _require(args.petals >= 2, "a sunflower needs at least 2 petals")
    F = load_family(args.family)
    try:
        flower = find_sunflower(F, args.petals, args.budget)
    except BudgetExceeded as exc:
        return {"found": None, "error": str(exc)}, {"complete": None}
    if flower is None:
        return {"found": False}, {}
    return {
        "found": True,
        "petals": list(flower.petals),
        "petal_sets": [mask_json(F.members[i]) for i in flower.petals],
        "core": mask_json(flower.core),
    }, {"valid": flower.is_valid(F)}


def cmd_mc(args):
    rng = RngSpec(args.seed)
    threads = _threads(args)
    _require(args.trials >= 1, "trials must be positive")
    F = load_family(args.family)
    _require(len(F) > 0, "family must be nonempty")
    if args.action == "containment":
        _require(0 <= args.p <= 1, "p must lie in [0, 1]")
        est, se = containment_probability(F, float(args.p), args.trials, rng, threads)
        return {"estimate": est, "stderr": se, "rng": rng.algorithm}, {}
    _require(args.m >= 1, "m must be at least 1")
    _require(args.delta > 0 and args.m * args.delta <= 1, "need delta > 0 and m * delta <= 1")
    audit = spread_lemma_audit(F, args.m, float(args.delta), args.trials, rng, threads)
    return {
        "radius": audit.radius,
        "mean_size": audit.mean_size,
        "p": audit.p,
        "bound": audit.bound,
        "vacuous": audit.vacuous,
        "estimate": audit.estimate,
        "stderr": audit.stderr,
        "rng": rng.algorithm,
    }, {"spread_lemma": audit.passed}


def cmd_pair_color(args):
    _require(args.trials >= 1, "trials must be positive")
    G1 = load_family(args.family1)
    G2 = load_family(args.family2)
    _require(G1.n == G2.n, "families live on different ground sets")
    found = find_disjoint_pair_by_coloring(G1, G2, args.trials, RngSpec(args.seed))
    if found is None:
        return {"found": False}, {}
    a, b, trial = found
    return {"found": True, "A": mask_json(a), "B": mask_json(b), "trial": trial}, {"disjoint": a & b == 0}


def _oracle_ambient(args) -> tuple[SetFamily, dict]:
    if args.family:
        return load_family(args.family), {}
    _require(args.n is not None and args.n >= 1, "oracle needs --n (or --family)")
    if args.ambient == "perms":
        limit = args.max_perm_n if args.max_perm_n is not None else PERM_ORACLE_MAX_N
        _require(args.n <= limit, f"permutation oracle capped at n <= {limit}; raise with --max-perm-n")
        _require(args.n <= GRID_MAX_N, f"grid encoding supports n <= {GRID_MAX_N}")
        return symmetric_group_family(args.n), {}
    _require(args.k is not None and 1 <= args.k <= args.n, "set ambient needs 1 <= k <= n")
    _require(comb(args.n, args.k) <= SIZE_GUARD or args.force, "ambient too large; pass --force")
    return k_subsets(args.n, args.k), {}


def _witness_doc(args, W: SetFamily):
    if args.ambient == "perms" and not args.family:
        return {"perms": [list(p) for p in PermutationFamily.from_set_family(W, args.n).perms]}
    return {"sets": _sets(W)}


def cmd_oracle(args):
    threads = _threads(args)
    act = args.action
    if act in ("max-intersecting", "max-avoiding"):
        _require(args.t is not None and args.t >= 1, "t must be given and at least 1")
        A, _ = _oracle_ambient(args)
        solve = max_t_intersecting if act == "max-intersecting" else max_avoiding
        res = solve(A, args.t, args.budget, threads)
        results = {
            "optimum": res.optimum,
            "proved_optimal": res.proved_optimal,
            "nodes_explored": res.nodes_explored,
            "ambient_size": len(A),
            "witness": _witness_doc(args, res.witness),
        }
        if args.ambient == "perms" and not args.family:
            results["reference"] = factorial(args.n - args.t) if args.t <= args.n else 0
            results["matches_reference"] = res.optimum == results["reference"]
        ok = is_t_intersecting(res.witness, args.t) if act == "max-intersecting" else None
        if act == "max-avoiding":
            ok = avoids_intersection(res.witness, args.t - 1)
        return results, {"witness_valid": ok, "proved_optimal": True if res.proved_optimal else None}
    if act == "regular":
        _require(args.n is not None and args.k is not None and args.n >= 1 and args.k >= 1, "need --n and --k")
        res = max_regular_intersecting(args.n, args.k, args.budget)
        return {
            "feasibility": regular_feasibility(args.n, args.k),
            "optimum": res.optimum,
            "proved_optimal": res.proved_optimal,
            "nodes_explored": res.nodes_explored,
            "witness": {"sets": _sets(res.witness)},
        }, {"proved_optimal": True if res.proved_optimal else None}
    if act == "trivial":
        _require(args.t is not None and args.t >= 1, "t must be given and at least 1")
        F = load_family(args.family) if args.family else None
        _require(F is not None, "trivial needs --family")
        _require(is_t_intersecting(F, args.t), "family is not t-intersecting")
        T = is_trivial_t_intersecting(F, args.t)
        return {"trivial": T is not None, "core": mask_json(T)}, {}
    if act == "hilton-milner":
        _require(args.n is not None and args.t is not None and 1 <= args.t < args.n, "need 1 <= t < n")
        P = hilton_milner_perm_family(args.n, args.t)
        prof = perm_intersection_profile(P, args.t)
        return {"perms": [list(p) for p in P.perms], "size": prof["size"],
                "reference": factorial(args.n - args.t), "common_cells": prof["common"]}, \
            {"avoids": prof["avoids"], "non_trivial": prof["non_trivial"]}
    if act == "derangements":
        _require(args.m is not None and args.m >= 0, "need --m >= 0")
        return {"m": args.m, "count": derangement_count(args.m)}, {}
    raise ConfigError(f"unknown oracle action {act!r}")


def cmd_perm_classes(args):
    _require(args.n >= 1 and 1 <= args.t <= args.n, "need 1 <= t <= n")
    _require(len(args.pi) == args.n, "pi must list n images")
    try:
        res = count_intersection_classes(args.n, args.t, args.pi)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return {
        "counts": {str(i): c for i, c in res.counts.items()},
        "total": res.total,
        "bound": res.bound,
        "hypotheses_met": res.hypotheses_met,
    }, {"bound": res.bound_holds, "mass": res.total == factorial(args.n - args.t)}


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help=f"worker threads (overridden by {THREADS_ENV})")
    common.add_argument("--no-wall-time", action="store_true", help="report wall_time as null")

    p = argparse.ArgumentParser(prog="spreadlab", description="Spread approximations toolkit.")
    p.add_argument("--version", action="version", version=f"spreadlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write an ambient family file")
    g.add_argument("kind", choices=["ksets", "product", "cube", "perms", "fano"])
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--w", type=int)
    g.add_argument("--force", action="store_true")
    g.add_argument("--as-perms", action="store_true", help="write a permutation file for kind=perms")
    g.set_defaults(func=cmd_generate, raw=True)

    s = sub.add_parser("spread", parents=[common], help="spread radius")
    s.add_argument("--family", required=True)
    s.add_argument("--r", type=_fraction)
    s.add_argument("--max-size", type=int)
    s.set_defaults(func=cmd_spread)

    h = sub.add_parser("homog", parents=[common], help="tau-homogeneity")
    h.add_argument("--family", required=True)
    h.add_argument("--tau", type=_fraction, required=True)
    h.add_argument("--ambient")
    h.set_defaults(func=cmd_homog)

    rq = sub.add_parser("rq-spread", parents=[common], help="(r, q)-spreadness")
    rq.add_argument("--family", required=True)
    rq.add_argument("--r", type=_fraction, required=True)
    rq.add_argument("--q", type=int, required=True)
    rq.set_defaults(func=cmd_rq_spread)

    rg = sub.add_parser("regularity", parents=[common], help="(t, q, eps, theta)-regularity")
    rg.add_argument("--family", required=True)
    rg.add_argument("--t", type=int, required=True)
    rg.add_argument("--q", type=int, required=True)
    rg.add_argument("--eps", type=_fraction, required=True)
    rg.add_argument("--theta", type=_fraction, required=True)
    rg.add_argument("--budget", type=int, default=10 ** 7)
    rg.set_defaults(func=cmd_regularity)

    ap = sub.add_parser("approx", help="spread approximation")
    ap_sub = ap.add_subparsers(dest="action", required=True)
    run = ap_sub.add_parser("run", parents=[common])
    run.add_argument("--ambient", required=True)
    run.add_argument("--family", required=True)
    run.add_argument("--tau", type=_fraction, required=True)
    run.add_argument("--q", type=int, required=True)
    run.add_argument("--t", type=int, help="also check that S is t-intersecting")
    run.set_defaults(func=cmd_approx)

    rd = sub.add_parser("reduce", parents=[common], help="minimal reduction of a t-intersecting family")
    rd.add_argument("--family", required=True)
    rd.add_argument("--t", type=int, required=True)
    rd.set_defaults(func=cmd_reduce)

    ch = sub.add_parser("chain", parents=[common], help="reduction chain and its properties")
    ch.add_argument("--family", required=True)
    ch.add_argument("--ambient", required=True)
    ch.add_argument("--t", type=int, required=True)
    ch.add_argument("--q", type=int, required=True)
    ch.add_argument("--r", type=_fraction)
    ch.set_defaults(func=cmd_chain)

    sf = sub.add_parser("sunflower", help="sunflower search and thresholds")
    sf_sub = sf.add_subparsers(dest="action", required=True)
    find = sf_sub.add_parser("find", parents=[common])
    find.add_argument("--family", required=True)
    find.add_argument("--petals", type=int, required=True)
    find.add_argument("--budget", type=int, default=10 ** 6)
    find.set_defaults(func=cmd_sunflower)
    thr = sf_sub.add_parser("thresholds", parents=[common])
    thr.add_argument("--k", type=int, required=True)
    thr.add_argument("--petals", type=int, required=True)
    thr.set_defaults(func=cmd_sunflower)

    mc = sub.add_parser("mc", help="Monte-Carlo experiments")
    mc_sub = mc.add_subparsers(dest="action", required=True)
    sl = mc_sub.add_parser("spread-lemma", parents=[common])
    sl.add_argument("--family", required=True)
    sl.add_argument("--m", type=int, required=True)
    sl.add_argument("--delta", type=_fraction, required=True)
    sl.add_argument("--trials", type=int, required=True)
    sl.add_argument("--seed", type=_seed, required=True)
    sl.set_defaults(func=cmd_mc)
    cp = mc_sub.add_parser("containment", parents=[common])
    cp.add_argument("--family", required=True)
    cp.add_argument("--p", type=_fraction, required=True)
    cp.add_argument("--trials", type=int, required=True)
    cp.add_argument("--seed", type=_seed, required=True)
    cp.set_defaults(func=cmd_mc)

    pc = sub.add_parser("pair-color", parents=[common], help="random-coloring disjoint pair search")
    pc.add_argument("--family1", required=True)
    pc.add_argument("--family2", required=True)
    pc.add_argument("--trials", type=int, required=True)
    pc.add_argument("--seed", type=_seed, required=True)
    pc.set_defaults(func=cmd_pair_color)

    orc = sub.add_parser("oracle", parents=[common], help="exact extremal oracles")
    orc.add_argument("action", choices=["max-intersecting", "max-avoiding", "regular", "trivial",
                                        "hilton-milner", "derangements"])
    orc.add_argument("--ambient", choices=["sets", "perms"], default="sets")
    orc.add_argument("--family", help="ambient (or input) family file instead of --ambient")
    orc.add_argument("--n", type=int)
    orc.add_argument("--k", type=int)
    orc.add_argument("--t", type=int)
    orc.add_argument("--m", type=int)
    orc.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    orc.add_argument("--max-perm-n", type=int, help=f"raise the permutation cap (default {PERM_ORACLE_MAX_N})")
    orc.add_argument("--force", action="store_true")
    orc.set_defaults(func=cmd_oracle)

    pcl = sub.add_parser("perm-classes", parents=[common], help="agreement classes of permutations fixing 1..t")
    pcl.add_argument("--n", type=int, required=True)
    pcl.add_argument("--t", type=int, required=True)
    pcl.add_argument("--pi", type=_int_list, required=True, help="one-line permutation, e.g. 2,1,3,4")
    pcl.set_defaults(func=cmd_perm_classes)
    return p


def _config_echo(args) -> dict:
    skip = {"func", "raw", "out", "no_wall_time"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else ERROR
    start = time.perf_counter()
    try:
        args.threads = _threads(args)
        if getattr(args, "raw", False):
            _emit(args.func(args), args.out)
            return OK
        results, verdicts = args.func(args)
    except (ConfigError, InputError, FamilyError, ValueError) as exc:
        error = {"command": args.command, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, InputError):
            error.update(line=exc.line, field=exc.field, source=exc.source)
        sys.stderr.write(canonical_dumps(error))
        return ERROR
    report = {
        "command": " ".join(x for x in (args.command, getattr(args, "action", None)) if x),
        "config": _config_echo(args),
        "results": results,
        "verdicts": verdicts,
        "version": __version__,
        "wall_time": None if args.no_wall_time else round(time.perf_counter() - start, 6),
    }
    _emit(canonical_dumps(report), args.out)
    return VIOLATION if any(v is False for v in verdicts.values()) else OK


if __name__ == "__main__":
    sys.exit(main())
