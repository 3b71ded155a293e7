"""Knot/link diagram encodings and the planar-map core.

A diagram with C crossings is stored as a fixed-point-free involution on
the 4*C crossing slots: position ``p = 4*i + s`` is slot ``s`` of
crossing ``i``, and ``pairing[p]`` is the position at the other end of
the arc attached at ``p``.  Slots follow the dominant PD-code
convention: slot 0 carries the incoming under-strand and slots proceed
counterclockwise, so the under-strand occupies slots {0, 2} and the
over-strand slots {1, 3}.

The crossing-free round diagram of the unknot is represented by a
diagram with zero crossings (the ``U`` token in text form); it is the
only crossing-free diagram the text formats admit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class DiagramError(ValueError):
    """Base class for malformed diagrams or encodings."""


class ParseError(DiagramError):
    """Raised for syntactically or structurally bad input text."""


class NonRealizableError(DiagramError):
    """Raised when a crossing pairing cannot be embedded in the 2-sphere."""


def crossing_of(p: int) -> int:
    return p >> 2

def slot_of(p: int) -> int:
    return p & 3

def rotate(p: int, k: int) -> int:
    """Position at slot (s+k) mod 4 of the same crossing."""
    return (p & ~3) | ((p + k) & 3)

def pass_partner(p: int) -> int:
    """Opposite slot: the other end of the strand pass through this slot."""
    return p ^ 2


class PlanarDiagram:
    """A 4-valent map on the sphere with over/under data at each vertex.

    Immutable by convention; all derived structure is computed lazily and
    cached on the instance.
    """

    __slots__ = ("pairing", "_arcs", "_arc_index", "_components", "_faces",
                 "_face_of", "_pos_in_face")

    def __init__(self, pairing: tuple[int, ...] | list[int]):
        pairing = tuple(pairing)
        if len(pairing) % 4:
            raise DiagramError("slot count must be a multiple of 4")
        n = len(pairing)
        for p, q in enumerate(pairing):
            if not 0 <= q < n or q == p or pairing[q] != p:
                raise DiagramError(f"pairing is not a fixed-point-free involution at {p}")
        self.pairing = pairing
        self._arcs = None
        self._arc_index = None
        self._components = None
        self._faces = None
        self._face_of = None
        self._pos_in_face = None

    # -- basic shape ----------------------------------------------------

    @property
    def crossing_count(self) -> int:
        return len(self.pairing) // 4

    @property
    def is_crossing_free(self) -> bool:
        return not self.pairing

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        """Arcs as (p, q) position pairs with p < q, sorted by p."""
        if self._arcs is None:
            self._arcs = tuple((p, q) for p, q in enumerate(self.pairing) if p < q)
        return self._arcs

    def arc_index(self, p: int) -> int:
        """Index into :attr:`arcs` of the arc attached at position p."""
        if self._arc_index is None:
            idx = [0] * len(self.pairing)
            for j, (a, b) in enumerate(self.arcs):
                idx[a] = idx[b] = j
            self._arc_index = idx
        return self._arc_index[p]

    def __eq__(self, other):
        return isinstance(other, PlanarDiagram) and self.pairing == other.pairing

    def __hash__(self):
        return hash(self.pairing)

    def __repr__(self):
        return f"PlanarDiagram(C={self.crossing_count})"

    # -- strand structure -----------------------------------------------

    def next_arrival(self, p: int) -> int:
        """Follow the strand through the crossing at p to its next arrival."""
        return self.pairing[pass_partner(p)]

    @property
    def component_count(self) -> int:
        if self._components is None:
            if self.is_crossing_free:
                self._components = 1
            else:
                seen = [False] * len(self.pairing)
                orbits = 0
                for p0 in range(len(self.pairing)):
                    if seen[p0]:
                        continue
                    orbits += 1
                    p = p0
                    while not seen[p]:
                        seen[p] = True
                        p = self.next_arrival(p)
                # each component is traced once per direction
                self._components = orbits // 2
        return self._components

    def is_over(self, p: int) -> bool:
        return bool(p & 1)

    # -- connectivity of the underlying projection -----------------------

    def projection_components(self) -> list[list[int]]:
        """Connected components of the 4-valent multigraph, as crossing lists."""
        n = self.crossing_count
        if n == 0:
            return []
        comp = [-1] * n
        out = []
        for start in range(n):
            if comp[start] >= 0:
                continue
            cid = len(out)
            stack = [start]
            comp[start] = cid
            members = [start]
            while stack:
                i = stack.pop()
                for s in range(4):
                    j = crossing_of(self.pairing[4 * i + s])
                    if comp[j] < 0:
                        comp[j] = cid
                        stack.append(j)
                        members.append(j)
            out.append(sorted(members))
        return out

    @property
    def is_connected(self) -> bool:
        return len(self.projection_components()) <= 1

    # -- mirror -----------------------------------------------------------

    def mirror(self) -> "PlanarDiagram":
        """Swap over and under strands everywhere (rotate each crossing by one slot)."""
        n = len(self.pairing)
        relab = [rotate(p, -1) for p in range(n)]
        new = [0] * n
        for p in range(n):
            new[relab[p]] = relab[self.pairing[p]]
        return PlanarDiagram(new)


UNKNOT = PlanarDiagram(())


# -- validation -----------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    crossings: int
    edges: int
    faces: int
    component_count: int
    connected: bool
    euler_characteristic: int
    sphere_realizable: bool

    def as_dict(self) -> dict:
        return {
            "crossings": self.crossings,
            "edges": self.edges,
            "faces": self.faces,
            "component_count": self.component_count,
            "connected": self.connected,
            "euler_characteristic": self.euler_characteristic,
            "sphere_realizable": self.sphere_realizable,
        }


def _face_orbit_count(d: PlanarDiagram) -> int:
    n = len(d.pairing)
    seen = [False] * n
    faces = 0
    for p0 in range(n):
        if seen[p0]:
            continue
        faces += 1
        p = p0
        while not seen[p]:
            seen[p] = True
            p = d.pairing[rotate(p, 1)]
    return faces


def validate(d: PlanarDiagram) -> ValidationReport:
    """Euler bookkeeping for the rotation system.

    ``sphere_realizable`` holds when every connected component of the
    underlying projection has Euler characteristic 2 under its traced
    faces (the rotation system then embeds in a disjoint union of
    spheres, hence in one sphere by nesting).
    """
    c = d.crossing_count
    e = 2 * c
    if c == 0:
        return ValidationReport(0, 0, 2, 1, True, 2, True)
    f = _face_orbit_count(d)
    comps = d.projection_components()
    if len(comps) == 1:
        realizable = (c - e + f) == 2
    else:
        realizable = True
        for members in comps:
            sub = _restrict(d, members)
            cc = sub.crossing_count
            realizable &= (cc - 2 * cc + _face_orbit_count(sub)) == 2
            if not realizable:
                break
    return ValidationReport(c, e, f, d.component_count, len(comps) == 1,
                            c - e + f, realizable)


def _restrict(d: PlanarDiagram, members: list[int]) -> PlanarDiagram:
    """Sub-diagram on a connected set of crossings (arcs stay internal)."""
    renum = {i: k for k, i in enumerate(members)}
    pairing = [0] * (4 * len(members))
    for i in members:
        for s in range(4):
            q = d.pairing[4 * i + s]
            pairing[4 * renum[i] + s] = 4 * renum[crossing_of(q)] + slot_of(q)
    return PlanarDiagram(pairing)


def require_sphere(d: PlanarDiagram) -> PlanarDiagram:
    rep = validate(d)
    if not rep.sphere_realizable:
        raise NonRealizableError(
            f"rotation system is not realizable on the sphere "
            f"(C-E+F = {rep.euler_characteristic})")
    return d


# -- PD text format ---------------------------------------------------------

_TERM_RE = re.compile(r"X\[([^\]]*)\]")


def parse_pd(text: str) -> PlanarDiagram:
    """Parse PD notation: whitespace-separated ``X[a,b,c,d]`` terms or ``U``.

    Labels are positive integers naming arcs; each must occur exactly
    twice.  Slot 0 of each term is the incoming under-strand and slots
    run counterclockwise.  An optional ``PD[...]`` wrapper is stripped.
    """
    s = text.strip()
    wrapped = re.fullmatch(r"PD\[(.*)\]", s, re.DOTALL)
    if wrapped:
        s = wrapped.group(1).strip()
    if s == "U":
        return PlanarDiagram(())
    if not s:
        raise ParseError("empty diagram text")
    terms = []
    pos = 0
    for tok in re.split(r"(X\[[^\]]*\])", s):
        tok = tok.strip().strip(",")
        if not tok:
            continue
        m = _TERM_RE.fullmatch(tok)
        if not m:
            raise ParseError(f"unrecognized term {tok!r}")
        try:
            labels = [int(x) for x in m.group(1).split(",")]
        except ValueError:
            raise ParseError(f"non-integer label in term {tok!r}") from None
        if len(labels) != 4:
            raise ParseError(f"term {tok!r} must carry exactly 4 labels")
        if any(x <= 0 for x in labels):
            raise ParseError(f"labels must be positive in term {tok!r}")
        terms.append(labels)
        pos += 1
    ends: dict[int, list[int]] = {}
    for i, labels in enumerate(terms):
        for sl, lab in enumerate(labels):
            ends.setdefault(lab, []).append(4 * i + sl)
    pairing = [0] * (4 * len(terms))
    for lab, plist in sorted(ends.items()):
        if len(plist) != 2:
            raise ParseError(f"label {lab} used {len(plist)} times (need exactly 2)")
        a, b = plist
        pairing[a], pairing[b] = b, a
    return require_sphere(PlanarDiagram(pairing))


def emit_pd(d: PlanarDiagram) -> str:
    """Emit PD notation; arcs are relabeled 1..E deterministically."""
    if d.is_crossing_free:
        return "U"
    label = [0] * len(d.pairing)
    for j, (a, b) in enumerate(d.arcs, start=1):
        label[a] = label[b] = j
    terms = []
    for i in range(d.crossing_count):
        terms.append("X[%d,%d,%d,%d]" % tuple(label[4 * i + s] for s in range(4)))
    return " ".join(terms)


# -- signed oriented Gauss codes --------------------------------------------

_GAUSS_TOKEN_RE = re.compile(r"([OU])(\d+)([+-])")

# Crossing sign convention: at a positive crossing the over-strand
# enters at the slot counterclockwise-next after the incoming under
# slot (slot 1 when the under-strand enters at slot 0).  This is
# invariant under reversing the traversal (both entry slots shift by 2).
_OVER_IN_SLOT = {+1: 1, -1: 3}


def parse_gauss(text: str) -> PlanarDiagram:
    """Parse a signed oriented Gauss code such as ``O1+ U2+ O3+ U1+ O2+ U3+``.

    Tokens list the crossing visits in traversal order.  Fails with
    :class:`NonRealizableError` if the code does not describe a diagram
    on the sphere.
    """
    s = text.strip().replace("−", "-")
    if s == "U":
        return PlanarDiagram(())
    visits = []
    for tok in s.split():
        m = _GAUSS_TOKEN_RE.fullmatch(tok)
        if not m:
            raise ParseError(f"bad Gauss token {tok!r}")
        visits.append((m.group(1) == "O", int(m.group(2)), 1 if m.group(3) == "+" else -1))
    return require_sphere(diagram_from_visits(visits))


def diagram_from_visits(visits: list[tuple[bool, int, int]]) -> PlanarDiagram:
    """Build the rotation system determined by traversal visits.

    Each visit is (is_over, crossing_label, sign).  No sphere check is
    performed here; see :func:`parse_gauss`.
    """
    if not visits:
        raise ParseError("empty Gauss code")
    if len(visits) % 2:
        raise ParseError("odd number of visits")
    byname: dict[int, list[int]] = {}
    for t, (_, lab, _) in enumerate(visits):
        byname.setdefault(lab, []).append(t)
    if any(len(v) != 2 for v in byname.values()):
        raise ParseError("every crossing label must be visited exactly twice")
    index = {lab: i for i, lab in enumerate(sorted(byname))}
    sign_of: dict[int, int] = {}
    flags: dict[int, set[bool]] = {}
    for over, lab, sg in visits:
        i = index[lab]
        if i in sign_of and sign_of[i] != sg:
            raise ParseError(f"inconsistent sign at crossing {lab}")
        sign_of[i] = sg
        flags.setdefault(i, set()).add(over)
    if any(f != {True, False} for f in flags.values()):
        raise ParseError("each crossing needs one over and one under visit")
    n = len(index)
    pairing = [-1] * (4 * n)
    entries = []
    exits = []
    for over, lab, sg in visits:
        i = index[lab]
        if over:
            s_in = _OVER_IN_SLOT[sg]
        else:
            s_in = 0
        entries.append(4 * i + s_in)
        exits.append(4 * i + (s_in ^ 2))
    for t in range(len(visits)):
        a = exits[t]
        b = entries[(t + 1) % len(visits)]
        pairing[a], pairing[b] = b, a
    return PlanarDiagram(pairing)


def visit_sequence(d: PlanarDiagram, start: int) -> list[tuple[bool, int, int]]:
    """Visits (is_over, crossing, sign) along the component through
    arrival position ``start``.

    The sign of a crossing is +1 when, for this traversal, the
    over-strand arrives at the slot counterclockwise-next after the
    under-strand's arrival slot; the value does not depend on the
    traversal direction.  Crossings are reported with their raw indices.
    """
    seq = []
    in_slot: dict[tuple[int, bool], int] = {}
    p = start
    while True:
        i, s = crossing_of(p), slot_of(p)
        in_slot[(i, bool(s & 1))] = s
        seq.append((bool(s & 1), i))
        p = d.next_arrival(p)
        if p == start:
            break
    out = []
    for over, i in seq:
        if (i, True) not in in_slot or (i, False) not in in_slot:
            raise DiagramError("component does not own both passes of a crossing")
        sg = 1 if (in_slot[(i, False)] - in_slot[(i, True)]) % 4 == 3 else -1
        out.append((over, i, sg))
    return out


def emit_gauss(d: PlanarDiagram, start: int = 0) -> str:
    """Signed oriented Gauss code of a one-component diagram."""
    if d.component_count != 1:
        raise DiagramError("Gauss codes are emitted for knots only")
    if d.is_crossing_free:
        return "U"
    visits = visit_sequence(d, start)
    relab: dict[int, int] = {}
    toks = []
    for over, i, sg in visits:
        lab = relab.setdefault(i, len(relab) + 1)
        toks.append(f"{'O' if over else 'U'}{lab}{'+' if sg > 0 else '-'}")
    return " ".join(toks)
