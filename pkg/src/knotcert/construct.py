"""Diagram constructors used by fixtures, tests, and experiments.

Rational (2-bridge) diagrams are built as open tangles with four compass
ends, twisted alternately on the right and bottom pairs, then closed.
With positive twist vectors this yields the standard reduced alternating
diagrams of the 2-bridge knots, which covers every knot with at most 7
crossings.
"""

from __future__ import annotations

from .pdcode import PlanarDiagram, DiagramError, rotate, crossing_of, require_sphere
from .diagram import is_alternating


class _Tangle:
    """Open tangle under construction: a partial pairing plus four plugs."""

    def __init__(self):
        self.pairing: list[int] = []
        self.ends: dict[str, int | None] = {"NW": None, "NE": None,
                                            "SW": None, "SE": None}
        self.direct: list[tuple[str, str]] = []  # crossingless strands

    def _new_crossing(self) -> int:
        b = len(self.pairing)
        self.pairing.extend([-1, -1, -1, -1])
        return b

    def _attach(self, name: str, pos: int):
        old = self.ends[name]
        if old is not None:
            self.pairing[old] = pos
            self.pairing[pos] = old
        else:
            # the end was still a bare strand to another compass point
            for a, b in self.direct:
                if name in (a, b):
                    other = b if a == name else a
                    self.direct.remove((a, b))
                    self.ends[other] = None
                    self._attach_pending = (other, pos)
                    break
            else:
                raise DiagramError(f"dangling end {name}")
            other, _ = self._attach_pending
            self.ends[other] = pos  # the strand now terminates at pos
            del self._attach_pending

    def twist(self, pair: tuple[str, str], chirality: int):
        """Cross the two named ends once; chirality picks which goes under."""
        a, b = pair
        tbl = _TWIST_SLOTS[(pair, chirality)]
        c = self._new_crossing()
        for name, slot in tbl["attach"]:
            self._attach(name, c + slot)
        for name, slot in tbl["new"]:
            self.ends[name] = c + slot

    def close(self, kind: str = "numerator") -> PlanarDiagram:
        joins = (("NW", "NE"), ("SW", "SE")) if kind == "numerator" \
            else (("NW", "SW"), ("NE", "SE"))
        for a, b in joins:
            pa, pb = self.ends[a], self.ends[b]
            if pa is None or pb is None:
                raise DiagramError("closure of a crossingless strand")
            self.pairing[pa] = pb
            self.pairing[pb] = pa
        return require_sphere(PlanarDiagram(self.pairing))


# Slot tables for one twist crossing.  "attach" wires the old ends into
# the new crossing; "new" names the slots that become the open ends.
_TWIST_SLOTS = {
    (("NE", "SE"), 0): {"attach": [("NE", 0), ("SE", 1)],
                        "new": [("SE", 2), ("NE", 3)]},
    (("NE", "SE"), 1): {"attach": [("SE", 0), ("NE", 3)],
                        "new": [("NE", 2), ("SE", 1)]},
    (("SW", "SE"), 0): {"attach": [("SW", 0), ("SE", 3)],
                        "new": [("SW", 1), ("SE", 2)]},
    (("SW", "SE"), 1): {"attach": [("SE", 0), ("SW", 1)],
                        "new": [("SW", 2), ("SE", 3)]},
}


def rational_diagram(twists: list[int], chirality=(0, 1),
                     closure: str = "numerator") -> PlanarDiagram:
    """Standard 4-plat diagram of the 2-bridge knot with the given
    positive twist vector (continued-fraction coefficients).

    Twist regions alternate between the right and bottom end pairs;
    the default chirality pattern makes the closed diagram alternating.
    """
    if not twists or any(a < 1 for a in twists):
        raise ValueError("twist vector must be positive")
    t = _Tangle()
    t.direct = [("NW", "NE"), ("SW", "SE")]
    for r, a in enumerate(twists):
        pair = ("NE", "SE") if r % 2 == 0 else ("SW", "SE")
        chir = chirality[r % 2]
        for _ in range(a):
            t.twist(pair, chir)
    return t.close(closure)


def connected_sum(d1: PlanarDiagram, d2: PlanarDiagram, arc1: int = 0,
                  arc2: int = 0, swap: bool = False) -> PlanarDiagram:
    """Splice two diagrams along one cut arc of each."""
    if d1.is_crossing_free or d2.is_crossing_free:
        raise DiagramError("connected sum needs a crossing in each summand")
    n1 = len(d1.pairing)
    pairing = list(d1.pairing) + [q + n1 for q in d2.pairing]
    p1, q1 = d1.arcs[arc1]
    p2, q2 = d2.arcs[arc2][0] + n1, d2.arcs[arc2][1] + n1
    if swap:
        p2, q2 = q2, p2
    pairing[p1], pairing[p2] = p2, p1
    pairing[q1], pairing[q2] = q2, q1
    return require_sphere(PlanarDiagram(pairing))


def flip_crossings(d: PlanarDiagram, crossings: set[int]) -> PlanarDiagram:
    """Crossing changes: swap the over and under strands at the given
    crossings (slot labels there rotate by one)."""
    n = len(d.pairing)
    relab = [rotate(p, 1) if crossing_of(p) in crossings else p
             for p in range(n)]
    new = [0] * n
    for p in range(n):
        new[relab[p]] = relab[d.pairing[p]]
    return PlanarDiagram(new)


# Twist vectors of the standard alternating table diagrams, 3-7
# crossings, named by the usual table ordering.  All knots in this range
# are 2-bridge; the vector is the positive continued fraction of the
# 2-bridge fraction.
TABLE_TWISTS = {
    "3_1": [3],
    "4_1": [2, 2],
    "5_1": [5],
    "5_2": [3, 2],
    "6_1": [4, 2],
    "6_2": [3, 1, 2],
    "6_3": [2, 1, 1, 2],
    "7_1": [7],
    "7_2": [5, 2],
    "7_3": [3, 4],
    "7_4": [3, 1, 3],
    "7_5": [3, 2, 2],
    "7_6": [2, 1, 2, 2],
    "7_7": [2, 1, 1, 1, 2],
}


def table_diagram(name: str) -> PlanarDiagram:
    """Reduced alternating diagram of a 3-7 crossing table knot."""
    d = rational_diagram(TABLE_TWISTS[name])
    if not is_alternating(d):
        raise DiagramError(f"table diagram {name} failed the alternation check")
    return d
