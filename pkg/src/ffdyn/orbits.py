"""Forward orbits, periodic points, preimages and the preperiodic graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .dynamics import (
    EndoMap,
    ProjPoint,
    evaluate,
    iterate_forms,
)
from .errors import CapExceededError, PreconditionError
from .field import FuncElem
from .kpoly import ZPoly, k_rational_roots

DEFAULT_MAX_ITER = 64
DEFAULT_HEIGHT_CAP = 64
DEFAULT_PERIOD_CAP = 3
DEFAULT_COMPOSITION_CAP = 64  # largest d^n allowed when composing iterates
DEFAULT_VERTEX_CAP = 256

CYCLE = "Cycle"
HEIGHT_ESCAPE = "HeightEscape"
CAP_REACHED = "CapReached"


@dataclass(frozen=True, order=True)
class NaiveHeight:
    degree: int
    bits: int

    @classmethod
    def of(cls, P: ProjPoint) -> "NaiveHeight":
        return cls(*P.height())

    def exceeds(self, cap: int) -> bool:
        return self.degree > cap or self.bits > cap


@dataclass
class OrbitRecord:
    points: List[ProjPoint]
    status: str
    tail: int = 0
    period: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "points": [str(p) for p in self.points],
            "status": self.status,
            "m": self.tail,
            "n": self.period,
        }


def orbit(phi: EndoMap, P: ProjPoint, max_iter: int = DEFAULT_MAX_ITER,
          height_cap: int = DEFAULT_HEIGHT_CAP) -> OrbitRecord:
    if max_iter < 1:
        raise PreconditionError("max_iter must be at least 1")
    seen: Dict[ProjPoint, int] = {P: 0}
    points = [P]
    cur = P
    for _ in range(max_iter):
        if NaiveHeight.of(cur).exceeds(height_cap):
            return OrbitRecord(points, HEIGHT_ESCAPE)
        nxt = evaluate(phi, cur)
        if nxt in seen:
            m = seen[nxt]
            return OrbitRecord(points, CYCLE, m, len(points) - m)
        seen[nxt] = len(points)
        points.append(nxt)
        cur = nxt
    if NaiveHeight.of(cur).exceeds(height_cap):
        return OrbitRecord(points, HEIGHT_ESCAPE)
    return OrbitRecord(points, CAP_REACHED)


@dataclass
class Classification:
    kind: str  # Preperiodic | NotPreperiodicHeuristic | Unknown
    m: Optional[int] = None
    n: Optional[int] = None
    record: Optional[OrbitRecord] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "Preperiodic":
            out.update(m=self.m, n=self.n)
        return out


def classify(phi: EndoMap, P: ProjPoint, max_iter: int = DEFAULT_MAX_ITER,
             height_cap: int = DEFAULT_HEIGHT_CAP) -> Classification:
    rec = orbit(phi, P, max_iter, height_cap)
    if rec.status == CYCLE:
        m, n = rec.tail, rec.period
        cyc = rec.points[m:]
        # the first repeat already gives the minimal period; double check by rotation
        for e in range(1, n):
            if n % e == 0 and all(cyc[i] == cyc[(i + e) % n] for i in range(n)):
                n = e
                break
        return Classification("Preperiodic", m, n, rec)
    if rec.status == HEIGHT_ESCAPE:
        return Classification("NotPreperiodicHeuristic", record=rec)
    return Classification("Unknown", record=rec)


def k_rational_roots_in_z(F: ZPoly) -> List[FuncElem]:
    """Roots of F in K (see kpoly.k_rational_roots for the method)."""
    return k_rational_roots(F)


def _exact_period(phi: EndoMap, P: ProjPoint, n: int) -> Optional[int]:
    Q = P
    for e in range(1, n + 1):
        Q = evaluate(phi, Q)
        if Q == P:
            return e
    return None


def periodic_points(phi: EndoMap, n: int, composition_cap: int = DEFAULT_COMPOSITION_CAP) -> List[ProjPoint]:
    """K-rational points of exact period n, sorted."""
    if n < 1:
        raise PreconditionError("period must be positive")
    if phi.degree ** n > composition_cap:
        raise CapExceededError(f"iterate degree {phi.degree}^{n} exceeds composition cap {composition_cap}")
    F, G = iterate_forms(phi, n)
    dn = phi.degree ** n
    eq = F - ZPoly.z() * G
    cands = []
    if not eq.is_zero():
        cands = [ProjPoint.from_value(r) for r in k_rational_roots_in_z(eq)]
    # infinity is fixed by phi^n iff G_n has no z^(d^n) term
    if not G.coeff(dn):
        cands.append(ProjPoint.infinity())
    out = [P for P in cands if _exact_period(phi, P, n) == n]
    return sorted(set(out), key=ProjPoint.sort_key)


def preimages(phi: EndoMap, Q: ProjPoint) -> List[ProjPoint]:
    """K-rational P with phi(P) = Q, sorted."""
    F, G = phi.f_zpoly(), phi.g_zpoly()
    xq, yq = FuncElem.coerce(Q.x), FuncElem.coerce(Q.y)
    eq = F * yq - G * xq
    out = [ProjPoint.from_value(r) for r in k_rational_roots_in_z(eq)] if not eq.is_zero() else []
    d = phi.degree
    top = FuncElem.coerce(phi.f[d]) * yq - FuncElem.coerce(phi.g[d]) * xq
    if not top:
        out.append(ProjPoint.infinity())
    return sorted(set(out), key=ProjPoint.sort_key)


@dataclass
class PreperGraph:
    vertices: List[ProjPoint]
    edges: Dict[ProjPoint, ProjPoint]
    cycles: List[List[ProjPoint]]
    complete: bool = True
    notes: List[str] = field(default_factory=list)

    def __len__(self):
        return len(self.vertices)

    def cycle_vertices(self):
        return {P for c in self.cycles for P in c}

    def to_json(self) -> dict:
        return {
            "vertices": [str(v) for v in self.vertices],
            "edges": [[str(v), str(self.edges[v])] for v in self.vertices],
            "cycles": [[str(p) for p in c] for c in self.cycles],
            "count": len(self.vertices),
            "complete": self.complete,
            "notes": self.notes,
        }


def preper_set(phi: EndoMap, period_cap: int = DEFAULT_PERIOD_CAP,
               vertex_cap: int = DEFAULT_VERTEX_CAP,
               composition_cap: int = DEFAULT_COMPOSITION_CAP,
               bound=None) -> PreperGraph:
    """Periodic points of period <= period_cap closed backward under preimages.

    ``bound`` (an int) is asserted against the vertex count when given.
    Periods whose iterate would exceed the composition cap are skipped and
    the graph is flagged incomplete.
    """
    notes = []
    complete = True
    cycles = []
    seeds: List[ProjPoint] = []
    for n in range(1, period_cap + 1):
        try:
            pts = periodic_points(phi, n, composition_cap)
        except CapExceededError as exc:
            notes.append(str(exc))
            complete = False
            break
        done = set()
        for P in pts:
            if P in done:
                continue
            cyc = [P]
            Q = evaluate(phi, P)
            while Q != P:
                cyc.append(Q)
                Q = evaluate(phi, Q)
            done.update(cyc)
            cycles.append(cyc)
        seeds.extend(pts)
    vertices = set(seeds)
    frontier = sorted(vertices, key=ProjPoint.sort_key)
    capped = False
    while frontier and not capped:
        nxt = []
        for Q in frontier:
            for P in preimages(phi, Q):
                if P in vertices:
                    continue
                if len(vertices) >= vertex_cap:
                    capped = True
                    break
                vertices.add(P)
                nxt.append(P)
            if capped:
                break
        frontier = sorted(nxt, key=ProjPoint.sort_key)
    if capped:
        complete = False
        notes.append(f"vertex cap {vertex_cap} reached")
    ordered = sorted(vertices, key=ProjPoint.sort_key)
    edges = {P: evaluate(phi, P) for P in ordered}
    for Q in edges.values():
        assert Q in vertices, "preperiodic graph is not closed under the map"
    if bound is not None:
        assert len(ordered) <= bound, "preperiodic count exceeds the theoretical bound"
    cycles.sort(key=lambda c: ProjPoint.sort_key(c[0]))
    return PreperGraph(ordered, edges, cycles, complete, notes)
