"""Desk-scale verification tools: Reidemeister moves, canonical codes,
breadth-first unknot detection, and seeded random unknot diagrams.

These are independent of the loop search and are used to sanity-check
certification verdicts: a diagram certified non-trivial must never be
untied by the move search, and generated unknots must never be
certified non-trivial.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .pdcode import (PlanarDiagram, UNKNOT, DiagramError, crossing_of, slot_of,
                     rotate, pass_partner, diagram_from_visits, visit_sequence,
                     validate)
from .diagram import trace_faces
from .reduce import _reducible_bigon


# -- canonical signed Gauss codes -------------------------------------------

def _direction_orbits(d: PlanarDiagram) -> list[list[int]]:
    """Arrival-position orbits of the strand traversal (two per component)."""
    seen = set()
    orbits = []
    for p0 in range(len(d.pairing)):
        if p0 in seen:
            continue
        orbit = []
        p = p0
        while True:
            orbit.append(p)
            seen.add(p)
            p = d.next_arrival(p)
            if p == p0:
                break
        orbits.append(orbit)
    return orbits


def canonical_visits(d: PlanarDiagram) -> tuple[int, ...]:
    """Relabel-invariant encoding of a knot diagram.

    The lexicographically least visit sequence over all starting visits
    and both traversal directions, with each visit packed as an int so
    that O sorts before U, low labels first, '+' before '-'.
    """
    if d.is_crossing_free:
        return ()
    if d.component_count != 1:
        raise DiagramError("canonical codes are defined for knots only")
    n2 = 2 * d.crossing_count
    best = None
    for orbit in _direction_orbits(d):
        # per-direction crossing signs: +1 when the over strand arrives
        # at the slot counterclockwise-next after the under arrival slot
        in_slot = [[-1, -1] for _ in range(d.crossing_count)]
        for p in orbit:
            in_slot[crossing_of(p)][slot_of(p) & 1] = slot_of(p)
        sbit = [0 if (u - o) % 4 == 3 else 1 for u, o in in_slot]
        uflag = [0 if slot_of(p) & 1 else (1 << 24) for p in orbit]
        cr = [crossing_of(p) for p in orbit]
        for r in range(n2):
            label: dict[int, int] = {}
            cand = []
            verdict = 0  # -1: candidate wins, 0: tied so far, 1: loses
            for j in range(n2):
                t = (r + j) % n2
                i = cr[t]
                lab = label.setdefault(i, len(label) + 1)
                v = uflag[t] | (lab << 1) | sbit[i]
                cand.append(v)
                if best is not None and verdict == 0:
                    if v > best[j]:
                        verdict = 1
                        break
                    if v < best[j]:
                        verdict = -1
            if verdict == 1:
                continue
            if best is None or verdict == -1:
                best = tuple(cand)
    return best


def _visits_from_packed(code: tuple[int, ...]) -> list[tuple[bool, int, int]]:
    return [(not (v >> 24), (v >> 1) & 0x7FFFFF, 1 if not (v & 1) else -1)
            for v in code]


def diagram_from_code(code: tuple[int, ...]) -> PlanarDiagram:
    if not code:
        return UNKNOT
    return diagram_from_visits(_visits_from_packed(code))


def canonical_code(d: PlanarDiagram) -> str:
    """Lexicographically least signed oriented Gauss code of a knot diagram."""
    code = canonical_visits(d)
    if not code:
        return "U"
    return " ".join(f"{'O' if over else 'U'}{lab}{'+' if sg > 0 else '-'}"
                    for over, lab, sg in _visits_from_packed(code))


# -- move surgery -------------------------------------------------------------

def _delete_with_splice(d: PlanarDiagram, dead: set[int]) -> PlanarDiagram:
    """Remove crossings and splice the strands straight through them."""
    live = [i for i in range(d.crossing_count) if i not in dead]
    if not live:
        return UNKNOT
    renum = {i: k for k, i in enumerate(live)}

    def chase(p: int) -> int:
        q = d.pairing[p]
        while crossing_of(q) in dead:
            q = d.pairing[pass_partner(q)]
        return q

    pairing = [0] * (4 * len(live))
    for i in live:
        for s in range(4):
            q = chase(4 * i + s)
            pairing[4 * renum[i] + s] = 4 * renum[crossing_of(q)] + slot_of(q)
    return PlanarDiagram(pairing)


@dataclass(frozen=True)
class MoveApplication:
    kind: str                    # RI-remove | RI-add | RII-remove | RII-add | RIII
    site: dict
    result: PlanarDiagram


_DELTA = {"RI-remove": -1, "RI-add": 1, "RII-remove": -2, "RII-add": 2, "RIII": 0}


def _ri_removes(d: PlanarDiagram):
    for f in trace_faces(d):
        if len(f.corners) == 1:
            i = crossing_of(f.corners[0])
            yield MoveApplication("RI-remove", {"face": f.id, "crossing": i},
                                  _delete_with_splice(d, {i}))


def _rii_removes(d: PlanarDiagram):
    for f in trace_faces(d):
        w = _reducible_bigon(d, f)
        if w is not None:
            dead = set(w["crossings"])
            yield MoveApplication("RII-remove",
                                  {"face": f.id, "crossings": sorted(dead)},
                                  _delete_with_splice(d, dead))


def _ri_adds(d: PlanarDiagram):
    if d.is_crossing_free:
        # the two kink diagrams: a loop arc at adjacent slots plus the
        # long way round through the remaining two slots
        for loop_lo, kind in ((1, "positive"), (0, "negative")):
            pairing = [0] * 4
            a, b = loop_lo, (loop_lo + 1) % 4
            c, e = (loop_lo + 2) % 4, (loop_lo + 3) % 4
            pairing[a], pairing[b] = b, a
            pairing[c], pairing[e] = e, c
            yield MoveApplication("RI-add", {"arc": None, "kink": kind},
                                  PlanarDiagram(pairing))
        return
    base = len(d.pairing)
    for j, (p, q) in enumerate(d.arcs):
        for l in range(4):
            l2, l3 = base + ((l + 2) & 3), base + ((l + 3) & 3)
            for attach, (pp, qq) in enumerate(((l2, l3), (l3, l2))):
                pairing = list(d.pairing) + [0, 0, 0, 0]
                pairing[base + l], pairing[base + ((l + 1) & 3)] = \
                    base + ((l + 1) & 3), base + l
                pairing[p], pairing[pp] = pp, p
                pairing[q], pairing[qq] = qq, q
                yield MoveApplication(
                    "RI-add", {"arc": j, "loop_slots": [l, (l + 1) & 3],
                               "attach": attach},
                    PlanarDiagram(pairing))


# RII finger templates: arc segments created when strand e1 = {A0,A1} is
# pushed across e2 = {B0,B1} inside a common face.  bu/bv are the slot
# bases of the two new crossings.  One template per strand level
# suffices: the finger-tip variants are isotopic inside the pierced
# region (verified: all slot-consistent variants are map-isomorphic).
def _rii_templates(A0, A1, B0, B1, bu, bv):
    return {
        "over": [(A0, bu + 1), (bu + 3, bv + 1), (bv + 3, A1),
                 (B0, bv + 2), (bv + 0, bu + 0), (bu + 2, B1)],
        "under": [(A0, bu + 0), (bu + 2, bv + 0), (bv + 2, A1),
                  (B0, bv + 1), (bv + 3, bu + 3), (bu + 1, B1)],
    }


def _rii_adds(d: PlanarDiagram):
    if d.is_crossing_free:
        return
    base = len(d.pairing)
    for f in trace_faces(d):
        darts = f.corners  # arrival positions; each is one arc side
        for w1 in darts:
            for w2 in darts:
                if w1 == w2 or d.arc_index(w1) == d.arc_index(w2):
                    continue
                A1, A0 = w1, d.pairing[w1]
                B1, B0 = w2, d.pairing[w2]
                tpl = _rii_templates(A0, A1, B0, B1, base, base + 4)
                for level, arcs in tpl.items():
                    pairing = list(d.pairing) + [0] * 8
                    for a, b in arcs:
                        pairing[a], pairing[b] = b, a
                    yield MoveApplication(
                        "RII-add", {"face": f.id, "darts": [w1, w2],
                                    "finger": level},
                        PlanarDiagram(pairing))


def _riii_moves(d: PlanarDiagram):
    if d.component_count != 1 or d.crossing_count < 3:
        return
    visits = visit_sequence(d, 0)
    arrival_index = {}
    p = 0
    for t in range(len(visits)):
        arrival_index[p] = t
        p = d.next_arrival(p)
    for f in trace_faces(d):
        if len(f.corners) != 3:
            continue
        cs = [crossing_of(c) for c in f.corners]
        if len(set(cs)) != 3:
            continue
        # side t runs from the departure slot after corner t to corner t+1
        sides = []
        for t in range(3):
            a = rotate(f.corners[t], 1)
            b = f.corners[(t + 1) % 3]
            sides.append((a, b))
        kinds = set()
        for a, b in sides:
            over_a, over_b = bool(a & 1), bool(b & 1)
            kinds.add((over_a, over_b) if over_a == over_b else None)
        if not ((True, True) in kinds and (False, False) in kinds):
            continue  # cyclic height pattern admits no triangle move
        seq = list(visits)
        n2 = len(seq)
        for a, b in sides:
            # the arc {a, b} is traversed toward one of its ends; its two
            # visits are consecutive in that direction
            if pass_partner(a) in arrival_index and b in arrival_index:
                ia, ib = arrival_index[pass_partner(a)], arrival_index[b]
            else:
                ia, ib = arrival_index[pass_partner(b)], arrival_index[a]
            assert (ia + 1) % n2 == ib
            seq[ia], seq[ib] = seq[ib], seq[ia]
        nd = diagram_from_visits([(over, i, sg) for over, i, sg in seq])
        yield MoveApplication("RIII", {"face": f.id, "crossings": sorted(cs)}, nd)


def _move_gens(d: PlanarDiagram, budget: int | None):
    """Move generators applicable within a crossing budget."""
    gens = [_ri_removes, _rii_removes]
    c = d.crossing_count
    if budget is None or c + 1 <= budget:
        gens.append(_ri_adds)
    if budget is None or c + 2 <= budget:
        gens.append(_rii_adds)
    gens.append(_riii_moves)
    return gens


def neighbors(d: PlanarDiagram, max_crossings: int | None = None
              ) -> list[MoveApplication]:
    """All single-move results: removals at monogons and reducible bigons,
    kink and finger additions, and admissible triangle moves.

    Results exceeding ``max_crossings`` crossings are not generated.
    """
    return [mv for gen in _move_gens(d, max_crossings) for mv in gen(d)]


# -- breadth-first unknot detection -------------------------------------------

@dataclass
class SearchOutcome:
    status: str                    # "Unknot" | "Unknown"
    path: list[dict] | None = None
    states_explored: int = 0

    def as_dict(self) -> dict:
        return {"status": self.status, "states_explored": self.states_explored,
                "path": self.path}


def unknot_search(d: PlanarDiagram, max_crossings: int,
                  max_states: int = 100_000) -> SearchOutcome:
    """BFS through Reidemeister moves over canonical codes.

    Never enqueues diagrams with more than ``max_crossings`` crossings
    nor records more than ``max_states`` distinct states; exhausting
    either bound yields ``Unknown``.
    """
    if d.component_count != 1:
        raise DiagramError("unknot search is defined for knots only")
    if max_crossings < d.crossing_count:
        raise ValueError("max_crossings below the input's crossing count")
    start = canonical_visits(d)
    if not start:
        return SearchOutcome("Unknot", [], 0)
    visited: dict[tuple, tuple] = {start: None}
    queue = deque([start])
    explored = 0
    capped = False
    while queue and not capped:
        code = queue.popleft()
        explored += 1
        cur = diagram_from_code(code)
        for mv in neighbors(cur, max_crossings):
            if mv.result.crossing_count > max_crossings:
                continue
            child = canonical_visits(mv.result)
            if child in visited:
                continue
            visited[child] = (code, mv.kind, mv.site)
            if not child:
                path = []
                node = child
                while visited[node] is not None:
                    parent, kind, site = visited[node]
                    path.append({"kind": kind, "site": site,
                                 "result": canonical_code(diagram_from_code(node))})
                    node = parent
                path.reverse()
                return SearchOutcome("Unknot", path, explored)
            if len(visited) >= max_states:
                capped = True
                break
            queue.append(child)
    return SearchOutcome("Unknown", None, explored)


# -- random unknot diagrams ---------------------------------------------------

def random_unknot(move_count: int, seed: int) -> PlanarDiagram:
    """Apply seeded random crossing-increasing or triangle moves to the
    crossing-free diagram; the result is trivial by construction."""
    rng = random.Random(seed)
    d = UNKNOT
    for _ in range(move_count):
        moves = [mv for gen in (_ri_adds, _rii_adds, _riii_moves)
                 for mv in gen(d)]
        if not moves:
            break
        d = rng.choice(moves).result
    return d
