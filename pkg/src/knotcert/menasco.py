"""Bubble-loop search and non-triviality certification.

At every crossing a small bubble separates the over and under strands.
On the upper (+) or lower (-) bubble sphere, an embedded loop avoiding
the knot decomposes into passages over bubble sides and chords across
regions.  A loop of even length 2n (n >= 2) whose cyclic crossing
sequence pairs into sign-adjacent pairs, the last pair free, is the
obstruction this module searches for: a diagram of the trivial knot
meeting the reducedness and primeness hypotheses must contain one, so
its exhaustive absence certifies the knot non-trivial.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .pdcode import PlanarDiagram, DiagramError, crossing_of
from .diagram import (trace_faces, face_of, position_in_face, corners_of_side,
                      adjacent_crossing_pairs, adjacency_pairs)
from .reduce import HypothesisReport, hypothesis_report

SIGNS = ("+", "-")
SIDES = ("A", "B")


class SearchCapReached(Exception):
    """Raised internally when a state cap stops the search before exhaustion."""


@dataclass(frozen=True)
class Passage:
    """One passable side of a bubble: two corner ports with their faces."""
    crossing: int
    side: str
    corners: tuple[int, int]
    faces: tuple[int, int]

    @property
    def usable(self) -> bool:
        # a loop arc over this side must connect two different regions
        return self.faces[0] != self.faces[1]

    @property
    def key(self) -> tuple[int, str]:
        return (self.crossing, self.side)


@dataclass(frozen=True)
class PassageStructure:
    sign: str
    passages: tuple[Passage, ...]

    def __getitem__(self, key: tuple[int, str]) -> Passage:
        crossing, side = key
        return self.passages[2 * crossing + SIDES.index(side)]


def build_passages(d: PlanarDiagram, sign: str) -> PassageStructure:
    """Per-sign decomposition of every bubble into its two passable sides."""
    if sign not in SIGNS:
        raise ValueError("sign must be '+' or '-'")
    trace_faces(d)
    out = []
    for i in range(d.crossing_count):
        table = corners_of_side(i, sign)
        for side in SIDES:
            c1, c2 = table[side]
            out.append(Passage(i, side, (c1, c2),
                               (face_of(d, c1), face_of(d, c2))))
    return PassageStructure(sign, tuple(out))


@dataclass(frozen=True)
class Chord:
    face: int
    endpoints: tuple[int, int]


@dataclass(frozen=True)
class MenascoLoop:
    """An embedded alternating cycle of bubble passages and region chords.

    ``chord_faces[t]`` is the region of the chord joining passage t to
    passage t+1 (cyclically); ``enter_corners[t]`` / ``exit_corners[t]``
    are the ports of passage t used by the chords before and after it.
    """
    sign: str
    passages: tuple[tuple[int, str], ...]
    enter_corners: tuple[int, ...]
    exit_corners: tuple[int, ...]
    chord_faces: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.passages)

    @property
    def crossings(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.passages)

    def chords(self) -> tuple[Chord, ...]:
        n = self.length
        return tuple(
            Chord(self.chord_faces[t],
                  (self.exit_corners[t], self.enter_corners[(t + 1) % n]))
            for t in range(n))

    def triples(self) -> tuple[tuple[int, str, int], ...]:
        return tuple((c, s, f) for (c, s), f in zip(self.passages, self.chord_faces))

    def canonical_key(self) -> tuple:
        return _canonical_triples(self.triples())

    def as_dict(self) -> dict:
        return {
            "sign": self.sign,
            "length": self.length,
            "crossings": list(self.crossings),
            "passages": [
                {"crossing": c, "side": s,
                 "enter_corner": self.enter_corners[t],
                 "exit_corner": self.exit_corners[t]}
                for t, (c, s) in enumerate(self.passages)],
            "chords": [
                {"face": ch.face, "from_corner": ch.endpoints[0],
                 "to_corner": ch.endpoints[1]}
                for ch in self.chords()],
        }


def _canonical_triples(tr: tuple[tuple[int, str, int], ...]) -> tuple:
    n = len(tr)
    best = None
    for rot in range(n):
        cand = tuple(tr[(rot + j) % n] for j in range(n))
        if best is None or cand < best:
            best = cand
    rev = tuple((tr[(n - j) % n][0], tr[(n - j) % n][1], tr[(n - j - 1) % n][2])
                for j in range(n))
    for rot in range(n):
        cand = tuple(rev[(rot + j) % n] for j in range(n))
        if cand < best:
            best = cand
    return best


def _loop_from_triples(d: PlanarDiagram, sign: str,
                       triples: tuple[tuple[int, str, int], ...]) -> MenascoLoop:
    """Rebuild the full loop (ports forced by the chord faces)."""
    ps = build_passages(d, sign)
    n = len(triples)
    passages, enters, exits, cfaces = [], [], [], []
    for t, (c, s, f) in enumerate(triples):
        pg = ps[(c, s)]
        f_prev = triples[(t - 1) % n][2]
        if pg.faces == (f_prev, f):
            enter, exit_ = pg.corners
        elif pg.faces == (f, f_prev):
            exit_, enter = pg.corners
        else:
            raise DiagramError("inconsistent loop triples")
        passages.append((c, s))
        enters.append(enter)
        exits.append(exit_)
        cfaces.append(f)
    return MenascoLoop(sign, tuple(passages), tuple(enters), tuple(exits),
                       tuple(cfaces))


def _interleaves(m: int, a: int, b: int, c: int, e: int) -> bool:
    """Do chords (a,b) and (c,e) cross inside a disk with m boundary corners?

    Arguments are walk positions, all four distinct.
    """
    u = (c - a) % m
    v = (e - a) % m
    w = (b - a) % m
    return (u < w) != (v < w)


class _LoopSearch:
    """Shared depth-first machinery over passages and chords."""

    def __init__(self, d: PlanarDiagram, sign: str, max_length: int | None,
                 max_states: int | None = None):
        self.d = d
        self.sign = sign
        c = d.crossing_count
        self.cap = 2 * c if max_length is None else min(max_length, 2 * c)
        self.ps = build_passages(d, sign)
        self.usable = tuple(p for p in self.ps.passages if p.usable)
        self.by_face: dict[int, list[Passage]] = {}
        for p in self.usable:
            for f in set(p.faces):
                self.by_face.setdefault(f, []).append(p)
        self.flen = [len(f) for f in trace_faces(d)]
        self.max_states = max_states
        self.states = 0
        self.loops_assembled = 0
        self.max_depth = 0

    def _tick(self):
        self.states += 1
        if self.max_states is not None and self.states > self.max_states:
            raise SearchCapReached

    def chord_ok(self, chords_by_face, f, x, y) -> bool:
        existing = chords_by_face.get(f)
        if not existing:
            return True
        d = self.d
        m = self.flen[f]
        px, py = position_in_face(d, x), position_in_face(d, y)
        for a, b in existing:
            if _interleaves(m, position_in_face(d, a), position_in_face(d, b), px, py):
                return False
        return True


def _port_in_face(p: Passage, f: int) -> int | None:
    if p.faces[0] == f:
        return p.corners[0]
    if p.faces[1] == f:
        return p.corners[1]
    return None


def _other_port(p: Passage, corner: int) -> int:
    return p.corners[1] if p.corners[0] == corner else p.corners[0]


def enumerate_loops(d: PlanarDiagram, sign: str, max_length: int | None = None,
                    mode: str = "all") -> list[MenascoLoop]:
    """Complete duplicate-free list of admissible loops up to ``max_length``.

    Loops are reported in canonical form (lexicographically least
    rotation or reflection of the (crossing, side, face) sequence),
    sorted by length then key.  ``mode='qualifying'`` keeps only loops
    accepted by :func:`satisfies_ozawa`.
    """
    if mode not in ("all", "qualifying"):
        raise ValueError("mode must be 'all' or 'qualifying'")
    if d.crossing_count == 0:
        return []
    eng = _LoopSearch(d, sign, max_length)
    found: dict[tuple, None] = {}

    def record(seq: list[Passage], chord_faces: list[int], closing_face: int):
        # triple t carries the face of the chord following passage t
        faces_after = chord_faces[1:] + [closing_face]
        triples = tuple((p.crossing, p.side, f)
                        for p, f in zip(seq, faces_after))
        found[_canonical_triples(triples)] = None

    def dfs(start: Passage, start_in: int, x: int, seq: list,
            chord_faces: list, chords_by_face: dict, used: set):
        f = face_of(d, x)
        depth = len(seq)
        if depth >= 2 and face_of(d, start_in) == f and \
                eng.chord_ok(chords_by_face, f, x, start_in):
            record(seq, chord_faces, f)
        if depth >= eng.cap:
            return
        for q in eng.by_face.get(f, ()):
            # each loop is generated from its least passage only
            if q.key <= start.key or q.key in used:
                continue
            y = _port_in_face(q, f)
            if y is None or not eng.chord_ok(chords_by_face, f, x, y):
                continue
            chords_by_face.setdefault(f, []).append((x, y))
            used.add(q.key)
            seq.append(q)
            chord_faces.append(f)
            dfs(start, start_in, _other_port(q, y), seq, chord_faces,
                chords_by_face, used)
            chord_faces.pop()
            seq.pop()
            used.discard(q.key)
            chords_by_face[f].pop()

    for start in eng.usable:
        for out_i in (0, 1):
            x = start.corners[out_i]
            start_in = start.corners[1 - out_i]
            # chord_faces[t] is the face of the chord arriving at seq[t];
            # for the start passage that is the eventual closing chord
            dfs(start, start_in, x, [start], [face_of(d, start_in)],
                {}, {start.key})

    loops = [_loop_from_triples(d, sign, key) for key in found]
    loops.sort(key=lambda lp: (lp.length, lp.triples()))
    if mode == "qualifying":
        loops = [lp for lp in loops if satisfies_ozawa(lp, d)[0]]
    return loops


def satisfies_ozawa(loop: MenascoLoop, d: PlanarDiagram,
                    strict: bool = False) -> tuple[bool, dict | None]:
    """Test the pairing condition: length 2n, n >= 2, and some rotation and
    direction of the cyclic crossing sequence makes positions (1,2),
    (3,4), ... sign-adjacent, the final pair unconstrained.

    In strict mode each constrained pair's chord must additionally lie
    in a region whose boundary carries a sign-adjacency arc between the
    paired crossings.
    """
    n = loop.length
    if n < 4 or n % 2:
        return False, None
    adj = adjacent_crossing_pairs(d, loop.sign)
    if not adj:
        return False, None
    kind = "plus" if loop.sign == "+" else "minus"
    arcs_by_pair: dict[frozenset, list[tuple[int, int]]] = {}
    if strict:
        for e in adjacency_pairs(d, kind):
            arcs_by_pair.setdefault(frozenset(e.crossings), []).append(e.arc)
    for direction in (1, -1):
        if direction == 1:
            cr = loop.crossings
            cf = loop.chord_faces
        else:
            cr = loop.crossings[::-1]
            # chord after reversed position t is the chord before the
            # original occurrence of that passage
            cf = tuple(loop.chord_faces[(n - 2 - t) % n] for t in range(n))
        for rot in range(n):
            ok = True
            pairs = []
            for i in range(n // 2 - 1):
                c1 = cr[(rot + 2 * i) % n]
                c2 = cr[(rot + 2 * i + 1) % n]
                key = frozenset((c1, c2))
                if key not in adj:
                    ok = False
                    break
                if strict:
                    chord_face = cf[(rot + 2 * i) % n]
                    if not any(face_of(d, p) == chord_face or
                               face_of(d, q) == chord_face
                               for p, q in arcs_by_pair.get(key, ())):
                        ok = False
                        break
                pairs.append([c1, c2])
            if ok:
                free = [cr[(rot + n - 2) % n], cr[(rot + n - 1) % n]]
                return True, {"rotation": rot, "direction": direction,
                              "pairs": pairs, "free_pair": free}
    return False, None


@dataclass
class SearchStats:
    states_expanded: int = 0
    loops_examined: int = 0
    max_length_reached: int = 0
    elapsed_seconds: float = 0.0

    def as_dict(self, include_elapsed: bool = False) -> dict:
        out = {
            "states_expanded": self.states_expanded,
            "loops_examined": self.loops_examined,
            "max_length_reached": self.max_length_reached,
        }
        if include_elapsed:
            out["elapsed_seconds"] = self.elapsed_seconds
        return out


def find_qualifying_loop(d: PlanarDiagram, strict: bool = False,
                         max_states: int | None = None,
                         stats: SearchStats | None = None):
    """Backtracking search for a loop satisfying the pairing condition.

    Searches both signs in order; within a sign the search is
    depth-first over passages ordered by (crossing, side), so the first
    witness is deterministic.  Positions 2i-1, 2i of the growing
    sequence must be sign-adjacent except possibly the final pair, which
    is only accepted when the loop closes there.  Returns ``None`` after
    exhausting all admissible loops of length at most 2C.

    Raises :class:`SearchCapReached` when ``max_states`` stops the
    search before exhaustion.
    """
    if stats is None:
        stats = SearchStats()
    start_t = time.perf_counter()
    try:
        for sign in SIGNS:
            adj = adjacent_crossing_pairs(d, sign)
            if not adj:
                # pairing needs n-1 >= 1 sign-adjacent pairs
                continue
            kind = "plus" if sign == "+" else "minus"
            arcs_by_pair: dict[frozenset, list[tuple[int, int]]] = {}
            if strict:
                for e in adjacency_pairs(d, kind):
                    arcs_by_pair.setdefault(frozenset(e.crossings), []).append(e.arc)
            eng = _LoopSearch(d, sign, None, max_states)

            def pair_ok(c1, c2, chord_face):
                key = frozenset((c1, c2))
                if key not in adj:
                    return False
                if strict and not any(
                        face_of(d, p) == chord_face or face_of(d, q) == chord_face
                        for p, q in arcs_by_pair.get(key, ())):
                    return False
                return True

            def dfs(start, start_in, cur, x, seq, enters, exits, cfaces,
                    chords_by_face, used):
                eng._tick()
                stats.states_expanded += 1
                stats.max_length_reached = max(stats.max_length_reached, len(seq))
                f = face_of(d, x)
                depth = len(seq)
                # closure: even length >= 4; the final pair is free
                if depth >= 4 and depth % 2 == 0 and \
                        face_of(d, start_in) == f and \
                        eng.chord_ok(chords_by_face, f, x, start_in):
                    stats.loops_examined += 1
                    loop = MenascoLoop(sign, tuple(p.key for p in seq),
                                       tuple(enters), tuple(exits),
                                       tuple(cfaces) + (f,))
                    return loop
                if depth >= eng.cap:
                    return None
                closing_only = depth % 2 == 0 and depth >= 2 and \
                    not pair_ok(seq[-2].crossing, seq[-1].crossing, cfaces[-2])
                if closing_only:
                    return None
                for q in eng.by_face.get(f, ()):
                    if q.key in used:
                        continue
                    y = _port_in_face(q, f)
                    if y is None or not eng.chord_ok(chords_by_face, f, x, y):
                        continue
                    # adding at an odd position completes a pair; a failed
                    # pair is only allowed as the final one (closure next)
                    chords_by_face.setdefault(f, []).append((x, y))
                    used.add(q.key)
                    seq.append(q)
                    enters.append(y)
                    exits.append(_other_port(q, y))
                    cfaces.append(f)
                    got = dfs(start, start_in, q, _other_port(q, y), seq,
                              enters, exits, cfaces, chords_by_face, used)
                    seq.pop(); enters.pop(); exits.pop(); cfaces.pop()
                    used.discard(q.key)
                    chords_by_face[f].pop()
                    if got is not None:
                        return got
                return None

            for start in eng.usable:
                for out_i in (0, 1):
                    x = start.corners[out_i]
                    start_in = start.corners[1 - out_i]
                    got = dfs(start, start_in, start, x, [start],
                              [start_in], [x], [], {}, {start.key})
                    if got is not None:
                        canon = _loop_from_triples(d, sign, got.canonical_key())
                        ok, pairing = satisfies_ozawa(canon, d, strict=strict)
                        assert ok, "closure must satisfy the pairing condition"
                        stats.elapsed_seconds = time.perf_counter() - start_t
                        return sign, canon, pairing
        stats.elapsed_seconds = time.perf_counter() - start_t
        return None
    except SearchCapReached:
        stats.elapsed_seconds = time.perf_counter() - start_t
        raise


VERDICT_NON_TRIVIAL = "NonTrivial"
VERDICT_LOOP_FOUND = "LoopFound"
VERDICT_HYPOTHESES_NOT_MET = "HypothesesNotMet"
VERDICT_NOT_A_KNOT = "NotAKnot"
VERDICT_UNKNOWN_CAPPED = "Unknown-Capped"


@dataclass
class CertReport:
    hypotheses: HypothesisReport
    verdict: str
    sign: str | None = None
    witness_loop: MenascoLoop | None = None
    pairing: dict | None = None
    search_stats: SearchStats = field(default_factory=SearchStats)
    strict: bool = False

    def as_dict(self, include_elapsed: bool = False) -> dict:
        out = {
            "hypotheses": self.hypotheses.as_dict(),
            "verdict": self.verdict,
            "strict_adjacency": self.strict,
            "search_stats": self.search_stats.as_dict(include_elapsed),
        }
        if self.witness_loop is not None:
            out["witness_loop"] = self.witness_loop.as_dict()
            out["witness_loop"]["pairing"] = self.pairing
        return out


def certify(d: PlanarDiagram, strict: bool = False,
            max_states: int | None = None) -> CertReport:
    """Certification verdict for one diagram.

    ``NonTrivial`` asserts the knot is not the unknot: all hypotheses
    hold and the exhaustive search found no qualifying loop.  A capped
    search never certifies (verdict ``Unknown-Capped``).
    """
    stats = SearchStats()
    if d.component_count != 1:
        return CertReport(hypothesis_report(d), VERDICT_NOT_A_KNOT,
                          search_stats=stats, strict=strict)
    hyp = hypothesis_report(d)
    if not hyp.all_hold:
        return CertReport(hyp, VERDICT_HYPOTHESES_NOT_MET,
                          search_stats=stats, strict=strict)
    try:
        got = find_qualifying_loop(d, strict=strict, max_states=max_states,
                                   stats=stats)
    except SearchCapReached:
        return CertReport(hyp, VERDICT_UNKNOWN_CAPPED, search_stats=stats,
                          strict=strict)
    if got is None:
        return CertReport(hyp, VERDICT_NON_TRIVIAL, search_stats=stats,
                          strict=strict)
    sign, loop, pairing = got
    return CertReport(hyp, VERDICT_LOOP_FOUND, sign=sign, witness_loop=loop,
                      pairing=pairing, search_stats=stats, strict=strict)
