"""Seeded property suites over generated instances.

Each suite returns a summary {suite, instances, passes, failures,
first_failure, seed}.  Instance i of a suite draws from its own generator
seeded by (seed, i), so a failure can be replayed in isolation.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

from .bounds import bound_C, bound_D
from .distance import (
    check_cycle_distances,
    check_expansion,
    check_tail_inequality,
    check_triangle,
    log_distance,
    pgl_invariance_holds,
)
from .dynamics import (
    bad_places_simple,
    conjugate,
    constant_pairs,
    has_simple_good_reduction_outside,
    isotriviality_diagnostic,
)
from .errors import CapExceededError
from .field import Place
from .generators import InstanceGenerator
from .orbits import classify
from .sunits import PlaceSet, nondegenerate_count, solve_unit_equation, zannier_bound


@dataclass
class SuiteSummary:
    suite: str
    instances: int
    seed: int
    passes: int = 0
    failures: int = 0
    first_failure: Optional[dict] = None
    seconds: float = 0.0
    stats: Dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "instances": self.instances,
            "seed": self.seed,
            "passes": self.passes,
            "failures": self.failures,
            "first_failure": self.first_failure,
            "stats": dict(sorted(self.stats.items())),
        }


def instance_seed(seed: int, i: int) -> int:
    return seed * 1_000_003 + i


# ---------------------------------------------------------------------------
# theorem-bound assertions (non-binding at desk scale)

_S_LOOKUP_CAP = 4


@functools.lru_cache(maxsize=None)
def _cd(d: int, s: int):
    return bound_C(d, s), bound_D(d, s)


def s_min(phi) -> int:
    """Smallest |S| such that phi has simple good reduction outside S."""
    return max(1, bad_places_simple(phi).count_over_closure)


def theorem_bounds_hold(d: int, s: int, period: int, orbit_size: int) -> bool:
    """period <= C(d, s) and orbit size <= D(d, s).

    C and D grow with s, so checking against s' = min(s, 4) is sound and
    keeps the prime sieve small.
    """
    s_eff = min(s, _S_LOOKUP_CAP)
    try:
        C, D = _cd(d, s_eff)
    except CapExceededError:  # pragma: no cover - only for huge d
        return True
    return period <= C and orbit_size <= D


def _assert_theorem_bounds(phi, P, stats) -> Optional[dict]:
    cl = classify(phi, P)
    if cl.kind != "Preperiodic":
        return {"reason": "constructed point not classified preperiodic", "kind": cl.kind}
    stats["classified"] = stats.get("classified", 0) + 1
    if not theorem_bounds_hold(phi.degree, s_min(phi), cl.n, cl.m + cl.n):
        return {"reason": "theorem bound violated", "m": cl.m, "n": cl.n}
    return None


# ---------------------------------------------------------------------------
# individual instances; each returns None on pass or a witness dict


def _triangle(gen: InstanceGenerator, stats) -> Optional[dict]:
    place = gen.rational_place()
    if gen.rng.random() < 0.5:
        P1, P2, P3 = gen.close_points(3, place)
    else:
        P1, P2, P3 = gen.distinct_points(3)
    if not check_triangle(P1, P2, P3, place):
        return {"points": [str(P1), str(P2), str(P3)], "place": str(place)}
    if min(log_distance(P1, P2, place), log_distance(P2, P3, place), log_distance(P1, P3, place)) > 0:
        stats["all_close"] = stats.get("all_close", 0) + 1
    return None


def _expansion(gen: InstanceGenerator, stats) -> Optional[dict]:
    phi = gen.monic_polynomial_map()
    place = gen.rational_place()
    if gen.rng.random() < 0.5:
        P, Q = gen.close_points(2, place)
    else:
        P, Q = gen.distinct_points(2, inf_rate=0.0)
    if not check_expansion(phi, P, Q, place):
        return {"map": str(phi), "points": [str(P), str(Q)], "place": str(place)}
    if log_distance(P, Q, place) > 0:
        stats["nontrivial"] = stats.get("nontrivial", 0) + 1
    return None


def _cycle(gen: InstanceGenerator, stats) -> Optional[dict]:
    roll = gen.rng.random()
    if roll < 0.6:
        phi, P = gen.two_cycle()
        n = 2
    else:
        phi, P = gen.three_cycle()
        n = 3
    if gen.rng.random() < 0.3:
        bad = bad_places_simple(phi)
        S = PlaceSet(bad.finite + [gen.rational_place(), Place.infinity()])
        A = gen.pgl2_rs(S, steps=2)
        if has_simple_good_reduction_outside(phi, S):
            phi, P = conjugate(phi, A), A.apply(P)
            stats["conjugated"] = stats.get("conjugated", 0) + 1
    rep = check_cycle_distances(phi, P, n)
    stats["places_checked"] = stats.get("places_checked", 0) + len(rep.places)
    if not rep.passed:
        return {"map": str(phi), "point": str(P), "n": n, "violations": rep.violations}
    return _assert_theorem_bounds(phi, P, stats)


def _tail(gen: InstanceGenerator, stats) -> Optional[dict]:
    phi, pts = gen.tail()
    if gen.rng.random() < 0.3:
        bad = bad_places_simple(phi)
        S = PlaceSet(bad.finite + [Place.infinity()])
        if has_simple_good_reduction_outside(phi, S) and bad.residual.degree <= 0:
            A = gen.pgl2_rs(S, steps=2)
            phi, pts = conjugate(phi, A), [A.apply(P) for P in pts]
            stats["conjugated"] = stats.get("conjugated", 0) + 1
    rep = check_tail_inequality(phi, pts)
    stats["checks"] = stats.get("checks", 0) + rep.checks
    if len(pts) > 3:
        stats["long_tails"] = stats.get("long_tails", 0) + 1
    if not rep.passed:
        return {"map": str(phi), "tail": [str(P) for P in pts], "violations": rep.violations}
    return _assert_theorem_bounds(phi, pts[0], stats)


def _pgl_invariance(gen: InstanceGenerator, stats) -> Optional[dict]:
    S = gen.place_set(3)
    if not S.has_infinity and not S.finite_places:  # pragma: no cover
        return None
    A = gen.pgl2_rs(S)
    if not A.in_pgl2_rs(S):
        return {"reason": "generated matrix not in PGL2(R_S)", "A": str(A), "S": str(S)}
    place = gen.rational_place(-6, 6, avoid=S.places)
    if gen.rng.random() < 0.5:
        P1, P2 = gen.close_points(2, place)
    else:
        P1, P2 = gen.distinct_points(2)
    if not pgl_invariance_holds(A, P1, P2, place):
        return {"A": str(A), "S": str(S), "points": [str(P1), str(P2)], "place": str(place)}
    if log_distance(P1, P2, place) > 0:
        stats["nontrivial"] = stats.get("nontrivial", 0) + 1
    return None


def _unit_count(gen: InstanceGenerator, stats) -> Optional[dict]:
    S = gen.place_set(3)
    box = gen.rng.randint(1, 3)
    lam, mu = gen.unit_equation(S)
    res = solve_unit_equation(lam, mu, S, box)
    count = nondegenerate_count(res)
    stats["solutions"] = stats.get("solutions", 0) + count
    if count > zannier_bound(S.s):
        return {"lambda": str(lam), "mu": str(mu), "S": str(S), "box": box, "count": count}
    return None


def _constant_pairs(gen: InstanceGenerator, stats) -> Optional[dict]:
    phi = gen.rational_map()
    cp = constant_pairs(phi)
    if not cp.infinite and cp.closure_count <= 2 * phi.degree:
        stats["finite"] = stats.get("finite", 0) + 1
        stats["pairs"] = stats.get("pairs", 0) + len(cp.pairs)
        return None
    # only non-isotrivial maps are constrained
    verdict = isotriviality_diagnostic(phi)
    if verdict.kind == "IsotrivialOverK":
        stats["isotrivial"] = stats.get("isotrivial", 0) + 1
        return None
    return {"map": str(phi), "constant_pairs": cp.to_json(), "verdict": verdict.kind}


SUITES: Dict[str, Callable] = {
    "triangle": _triangle,
    "expansion": _expansion,
    "cycle": _cycle,
    "tail": _tail,
    "pgl-invariance": _pgl_invariance,
    "unit-count": _unit_count,
    "constant-pairs": _constant_pairs,
}


def run_suite(name: str, count: int, seed: int) -> SuiteSummary:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = SUITES[name]
    summary = SuiteSummary(name, count, seed)
    start = time.perf_counter()
    for i in range(count):
        gen = InstanceGenerator(instance_seed(seed, i))
        witness = fn(gen, summary.stats)
        if witness is None:
            summary.passes += 1
        else:
            summary.failures += 1
            if summary.first_failure is None:
                summary.first_failure = {"instance": i, **witness}
    summary.seconds = time.perf_counter() - start
    return summary
