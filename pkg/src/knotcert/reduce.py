"""Hypothesis checks for certification: reducedness, primeness, connectivity.

Every negative verdict carries a concrete witness that can be re-checked
against the diagram (a monogon face, a reducible bigon, a separating arc
pair, a nugatory crossing).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pdcode import PlanarDiagram, crossing_of
from .diagram import trace_faces, face_of, arc_kind


def is_I_reduced(d: PlanarDiagram) -> tuple[bool, dict | None]:
    """No monogon: no face with exactly one corner."""
    for f in trace_faces(d):
        if len(f.corners) == 1:
            return False, {"kind": "monogon", "face": f.id,
                           "crossing": crossing_of(f.corners[0])}
    return True, None


def _reducible_bigon(d: PlanarDiagram, face) -> dict | None:
    """A bigon is reducible when one boundary arc is over at both ends."""
    if len(face.corners) != 2:
        return None
    # the two darts of the walk arrive at the face's corners
    arcs = [(d.pairing[c], c) for c in face.corners]
    for p, q in arcs:
        if arc_kind(p, q) == "plus":
            over_arc, under_arc = (p, q), [a for a in arcs if a != (p, q)][0]
            return {"kind": "bigon", "face": face.id,
                    "crossings": sorted({crossing_of(c) for c in face.corners}),
                    "over_arc": d.arc_index(over_arc[0]),
                    "under_arc": d.arc_index(under_arc[0])}
    return None


def is_II_reduced(d: PlanarDiagram) -> tuple[bool, dict | None]:
    """No bigon whose two boundary arcs form an over/over + under/under pair."""
    for f in trace_faces(d):
        w = _reducible_bigon(d, f)
        if w is not None:
            return False, w
    return True, None


def _connected_without(d: PlanarDiagram, skip: set[int]) -> list[set[int]]:
    """Components of the crossing multigraph after deleting the arcs whose
    low positions are listed in ``skip``."""
    n = d.crossing_count
    comp = [-1] * n
    out = []
    for start in range(n):
        if comp[start] >= 0:
            continue
        cid = len(out)
        comp[start] = cid
        stack = [start]
        members = {start}
        while stack:
            i = stack.pop()
            for s in range(4):
                p = 4 * i + s
                q = d.pairing[p]
                if min(p, q) in skip:
                    continue
                j = crossing_of(q)
                if comp[j] < 0:
                    comp[j] = cid
                    stack.append(j)
                    members.add(j)
        out.append(members)
    return out


def is_prime(d: PlanarDiagram) -> tuple[bool, dict | None]:
    """Primeness of the diagram.

    Fails when there is no crossing, when the projection is
    disconnected, or when two arcs flanked by the same face pair
    disconnect the projection with crossings on both sides (the
    connected-sum configuration).
    """
    if d.crossing_count == 0:
        return False, {"kind": "no_crossing"}
    comps = d.projection_components()
    if len(comps) > 1:
        return False, {"kind": "disconnected", "components": comps}
    trace_faces(d)
    by_pair: dict[frozenset[int], list[tuple[int, int]]] = {}
    for p, q in d.arcs:
        fp, fq = face_of(d, p), face_of(d, q)
        if fp == fq:
            # a loop crossing this arc twice meets the projection once
            # on each side of the arc; impossible on the sphere unless
            # C == 1 (the kink), where no decomposition exists
            if d.crossing_count >= 2:
                return False, {"kind": "self_flanked_arc", "arc": d.arc_index(p)}
            continue
        by_pair.setdefault(frozenset((fp, fq)), []).append((p, q))
    for pair in sorted(by_pair, key=sorted):
        group = by_pair[pair]
        if len(group) < 2:
            continue
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                e1, e2 = group[a], group[b]
                parts = _connected_without(d, {e1[0], e2[0]})
                if len(parts) > 1:
                    return False, {
                        "kind": "cut_pair",
                        "arcs": [d.arc_index(e1[0]), d.arc_index(e2[0])],
                        "sides": [sorted(s) for s in parts],
                    }
    return True, None


def nugatory_crossings(d: PlanarDiagram) -> set[int]:
    """Crossings with two diagonally opposite corners in one face."""
    trace_faces(d)
    out = set()
    for i in range(d.crossing_count):
        for k in (0, 1):
            if face_of(d, 4 * i + k) == face_of(d, 4 * i + k + 2):
                out.add(i)
                break
    return out


@dataclass(frozen=True)
class HypothesisReport:
    connected: bool
    has_crossing: bool
    i_reduced: bool
    ii_reduced: bool
    prime: bool
    nugatory_free: bool
    checkerboard_colorable: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return (self.connected and self.has_crossing and self.i_reduced
                and self.ii_reduced and self.prime)

    def as_dict(self) -> dict:
        return {
            "connected": self.connected,
            "has_crossing": self.has_crossing,
            "i_reduced": self.i_reduced,
            "ii_reduced": self.ii_reduced,
            "prime": self.prime,
            "nugatory_free": self.nugatory_free,
            "checkerboard_colorable": self.checkerboard_colorable,
            "witnesses": self.witnesses,
        }


def hypothesis_report(d: PlanarDiagram) -> HypothesisReport:
    """Aggregate hypothesis flags with witnesses for each failure.

    Checkerboard colorability is recorded as always true: on the sphere
    every valid 4-valent diagram admits a proper 2-coloring.
    """
    witnesses: dict = {}
    connected = d.is_connected and d.crossing_count > 0
    if d.crossing_count == 0:
        connected = True
    has_crossing = d.crossing_count > 0
    if has_crossing:
        i_red, w = is_I_reduced(d)
        if w:
            witnesses["monogon"] = w
        ii_red, w = is_II_reduced(d)
        if w:
            witnesses["bigon"] = w
        nug = nugatory_crossings(d)
        if nug:
            witnesses["nugatory"] = sorted(nug)
    else:
        i_red = ii_red = True
        nug = set()
    prime, w = is_prime(d)
    if w:
        witnesses["primeness"] = w
    return HypothesisReport(
        connected=connected,
        has_crossing=has_crossing,
        i_reduced=i_red,
        ii_reduced=ii_red,
        prime=prime,
        nugatory_free=not nug,
        checkerboard_colorable=True,
        witnesses=witnesses,
    )
