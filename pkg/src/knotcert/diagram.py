"""Combinatorial topology of a diagram: faces, coloring, adjacency.

Corners are identified with slot positions: the corner between slots k
and k+1 of crossing i has id ``4*i + k``.  A face walk arrives at slot
s, records corner (s, s+1), and leaves through slot s+1; the face lies
to the right of each dart it traverses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pdcode import PlanarDiagram, DiagramError, crossing_of, slot_of, rotate


@dataclass(frozen=True)
class Face:
    """A region of the complement, as the cyclic corner walk of its boundary."""
    id: int
    corners: tuple[int, ...]

    def __len__(self):
        return len(self.corners)

    def corner_pairs(self) -> list[tuple[int, int]]:
        """Corners rendered as (crossing, k) for the slot pair (k, k+1)."""
        return [(crossing_of(c), slot_of(c)) for c in self.corners]


class ColoringConflictError(DiagramError):
    """The face-adjacency graph is not bipartite (invalid rotation system)."""


def trace_faces(d: PlanarDiagram) -> list[Face]:
    """All faces of the diagram, in discovery order from the lowest corner.

    Face walks partition the 4C corners; for a connected sphere diagram
    there are C+2 of them.
    """
    faces = d._faces
    if faces is None:
        n = len(d.pairing)
        face_of = [-1] * n
        pos_in_face = [0] * n
        faces = []
        for p0 in range(n):
            if face_of[p0] >= 0:
                continue
            walk = []
            p = p0
            while face_of[p] < 0:
                face_of[p] = len(faces)
                pos_in_face[p] = len(walk)
                walk.append(p)
                p = d.pairing[rotate(p, 1)]
            faces.append(Face(len(faces), tuple(walk)))
        d._faces = faces
        d._face_of = face_of
        d._pos_in_face = pos_in_face
    return faces


def face_of(d: PlanarDiagram, corner: int) -> int:
    trace_faces(d)
    return d._face_of[corner]


def position_in_face(d: PlanarDiagram, corner: int) -> int:
    trace_faces(d)
    return d._pos_in_face[corner]


def checkerboard(d: PlanarDiagram) -> list[int]:
    """Proper 2-coloring of the faces (face id -> 0/1), face 0 colored 0.

    Adjacency is across arcs: the faces on the two sides of every arc
    must differ.  A conflict signals a non-realizable rotation system.
    """
    faces = trace_faces(d)
    color = [-1] * len(faces)
    for start in range(len(faces)):
        if color[start] >= 0:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for c in faces[f].corners:
                # dart arriving at c travels the arc {pairing[c], c}; the
                # other side of that arc is the walk through its far end
                g = face_of(d, d.pairing[c])
                if color[g] < 0:
                    color[g] = color[f] ^ 1
                    stack.append(g)
                elif color[g] == color[f]:
                    raise ColoringConflictError(
                        f"faces {f} and {g} share an arc but need equal colors")
    return color


@dataclass(frozen=True)
class AdjacencyEdge:
    """An arc joining two crossings, tagged by the strand level at its ends."""
    arc: tuple[int, int]          # the two endpoint positions, low first
    crossings: tuple[int, int]
    kind: str                     # "plus" | "minus" | "plain"


def arc_kind(p: int, q: int) -> str:
    over_p, over_q = bool(p & 1), bool(q & 1)
    if over_p and over_q:
        return "plus"
    if not over_p and not over_q:
        return "minus"
    return "plain"


def adjacency_pairs(d: PlanarDiagram, kind: str) -> set[AdjacencyEdge]:
    """Arcs that are over at both ends (plus) or under at both ends (minus)."""
    if kind not in ("plus", "minus"):
        raise ValueError("kind must be 'plus' or 'minus'")
    out = set()
    for p, q in d.arcs:
        if arc_kind(p, q) == kind:
            out.add(AdjacencyEdge((p, q), (crossing_of(p), crossing_of(q)), kind))
    return out


def adjacent_crossing_pairs(d: PlanarDiagram, sign: str) -> set[frozenset[int]]:
    """Unordered crossing pairs joined by a plus-arc ('+') or minus-arc ('-')."""
    kind = "plus" if sign == "+" else "minus"
    return {frozenset(e.crossings) for e in adjacency_pairs(d, kind)}


# Corner ids of the two passable sides of a bubble, per sign.  For '+'
# the over-strand runs through slots 1 and 3 on the upper hemisphere, so
# a loop in the upper sphere crosses the bubble over one of the under
# slots; side A spans the corners flanking slot 2 and side B those
# flanking slot 0.  For '-' the roles of the strands swap.
_SIDE_CORNERS = {
    "+": {"A": (1, 2), "B": (3, 0)},
    "-": {"A": (0, 1), "B": (2, 3)},
}


def corners_of_side(crossing: int, sign: str) -> dict[str, tuple[int, int]]:
    """Corner ids of sides A and B of the given bubble hemisphere."""
    table = _SIDE_CORNERS[sign]
    return {side: tuple(4 * crossing + k for k in ks) for side, ks in table.items()}


def is_alternating(d: PlanarDiagram) -> bool:
    """True when every arc is over at exactly one end."""
    return all(arc_kind(p, q) == "plain" for p, q in d.arcs)
