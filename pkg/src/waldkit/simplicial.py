"""Finite truncated simplicial sets with table-driven operators.

Every simplicial set here is truncated at an explicit dimension ``D``:
levels 0..D are finite sets of simplex identifiers, and the face and
degeneracy operators are stored as explicit tables (degeneracies stop one
level below ``D``).  Identifiers are canonical strings derived from the
construction, so that enumeration order, serialized fixtures, and reports
are reproducible byte for byte.

The operator action of an arbitrary monotone map ``[n] -> [m]`` is reduced
to table lookups through the epi-mono factorization; see ``act``.
"""

from __future__ import annotations

import json
from itertools import product as iproduct


def enc(payload):
    """Canonical string id for a nested payload of lists/ints/strings."""
    return json.dumps(payload, separators=(",", ":"), sort_keys=True)


def monotone_maps(n, m):
    """All monotone maps [n] -> [m] as value tuples, lexicographic order."""
    out = []

    def go(prefix, lo):
        if len(prefix) == n + 1:
            out.append(tuple(prefix))
            return
        for v in range(lo, m + 1):
            go(prefix + [v], v)

    go([], 0)
    return out


class TruncatedSimplicialSet:
    """Levelwise finite simplex sets with explicit operator tables."""

    def __init__(self, trunc_dim, levels, faces, degeneracies, coskeletal_bound=None):
        self.trunc_dim = trunc_dim
        self.levels = [tuple(lv) for lv in levels]
        if len(self.levels) != trunc_dim + 1:
            raise ValueError("levels must cover 0..trunc_dim")
        self.faces = dict(faces)
        self.degeneracies = dict(degeneracies)
        self.coskeletal_bound = coskeletal_bound
        self._level_sets = [frozenset(lv) for lv in self.levels]

    # -- basic access ---------------------------------------------------
    def simplices(self, n):
        return self.levels[n]

    def has_simplex(self, n, x):
        return 0 <= n <= self.trunc_dim and x in self._level_sets[n]

    def face(self, n, x, i):
        return self.faces[(n, x, i)]

    def deg(self, n, x, i):
        return self.degeneracies[(n, x, i)]

    def act(self, m, y, phi):
        """Operator action y . phi for a monotone map phi: [n] -> [m].

        Reduces phi through the epi-mono factorization one elementary map
        at a time, so only the stored d/s tables are consulted.
        """
        n = len(phi) - 1
        if phi == tuple(range(m + 1)):
            return y
        image = set(phi)
        missing = [i for i in range(m + 1) if i not in image]
        if missing:
            i = max(missing)
            phi2 = tuple(v if v < i else v - 1 for v in phi)
            return self.act(m - 1, self.face(m, y, i), phi2)
        for i in range(n):
            if phi[i] == phi[i + 1]:
                y2 = self.act(m, y, phi[:i] + phi[i + 1 :])
                return self.deg(n - 1, y2, i)
        raise AssertionError("unreachable: phi neither injective nor collapsible")

    def degenerate_at(self, n):
        """Identifiers at level n that are degeneracies of level n-1."""
        if n == 0:
            return frozenset()
        out = set()
        for y in self.levels[n - 1]:
            for i in range(n):
                out.add(self.deg(n - 1, y, i))
        return frozenset(out)

    def nondegenerate(self, n):
        skip = self.degenerate_at(n)
        return tuple(x for x in self.levels[n] if x not in skip)

    def truncate(self, new_dim):
        if new_dim > self.trunc_dim:
            raise ValueError("cannot extend a truncation")
        faces = {k: v for k, v in self.faces.items() if k[0] <= new_dim}
        degs = {k: v for k, v in self.degeneracies.items() if k[0] < new_dim}
        return TruncatedSimplicialSet(
            new_dim, self.levels[: new_dim + 1], faces, degs, self.coskeletal_bound
        )

    # -- serialization ---------------------------------------------------
    def to_json(self):
        faces = {}
        for (n, x, i), y in self.faces.items():
            faces.setdefault(str(n), {}).setdefault(x, [None] * (n + 1))[i] = y
        degs = {}
        for (n, x, i), y in self.degeneracies.items():
            degs.setdefault(str(n), {}).setdefault(x, [None] * (n + 1))[i] = y
        return {
            "trunc_dim": self.trunc_dim,
            "levels": [list(lv) for lv in self.levels],
            "faces": faces,
            "degeneracies": degs,
            "coskeletal_bound": self.coskeletal_bound,
        }

    @staticmethod
    def from_json(doc):
        faces = {}
        for n, table in doc["faces"].items():
            for x, imgs in table.items():
                for i, y in enumerate(imgs):
                    faces[(int(n), x, i)] = y
        degs = {}
        for n, table in doc["degeneracies"].items():
            for x, imgs in table.items():
                for i, y in enumerate(imgs):
                    degs[(int(n), x, i)] = y
        return TruncatedSimplicialSet(
            doc["trunc_dim"], doc["levels"], faces, degs, doc["coskeletal_bound"]
        )

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True)

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSimplicialSet)
            and self.trunc_dim == other.trunc_dim
            and self.levels == other.levels
            and self.faces == other.faces
            and self.degeneracies == other.degeneracies
        )

    def __repr__(self):
        sizes = [len(lv) for lv in self.levels]
        return f"TruncatedSimplicialSet(D={self.trunc_dim}, sizes={sizes})"


class SimplicialMap:
    """A map of truncated simplicial sets given by per-level assignments."""

    def __init__(self, source, target, assignment):
        self.source = source
        self.target = target
        # assignment: dict (n, id) -> id
        self.assignment = dict(assignment)

    def __call__(self, n, x):
        return self.assignment[(n, x)]

    def validate(self):
        X, Y = self.source, self.target
        for n in range(X.trunc_dim + 1):
            for x in X.simplices(n):
                y = self.assignment.get((n, x))
                if y is None or not Y.has_simplex(n, y):
                    return {"ok": False, "reason": f"missing/invalid image of level-{n} {x}"}
        for n in range(1, X.trunc_dim + 1):
            for x in X.simplices(n):
                for i in range(n + 1):
                    if self(n - 1, X.face(n, x, i)) != Y.face(n, self(n, x), i):
                        return {"ok": False, "reason": f"face {i} broken at level {n} on {x}"}
        for n in range(X.trunc_dim):
            for x in X.simplices(n):
                for i in range(n + 1):
                    if self(n + 1, X.deg(n, x, i)) != Y.deg(n, self(n, x), i):
                        return {"ok": False, "reason": f"degeneracy {i} broken at level {n} on {x}"}
        return {"ok": True}

    def compose(self, other):
        """self after other (other: W -> X, self: X -> Y)."""
        assignment = {
            (n, w): self.assignment[(n, y)] for (n, w), y in other.assignment.items()
        }
        return SimplicialMap(other.source, self.target, assignment)

    @staticmethod
    def identity(X):
        return SimplicialMap(
            X, X, {(n, x): x for n in range(X.trunc_dim + 1) for x in X.simplices(n)}
        )


def _complex_from_payloads(trunc_dim, level_payloads, face_of, deg_of, cosk=None):
    """Assemble a complex from payload sets and payload-level operators."""
    levels = []
    ids = []
    for n in range(trunc_dim + 1):
        payloads = sorted(level_payloads[n], key=enc)
        ids.append(payloads)
        levels.append([enc(p) for p in payloads])
    faces = {}
    degs = {}
    for n in range(1, trunc_dim + 1):
        for p in ids[n]:
            for i in range(n + 1):
                faces[(n, enc(p), i)] = enc(face_of(n, p, i))
    for n in range(trunc_dim):
        for p in ids[n]:
            for i in range(n + 1):
                degs[(n, enc(p), i)] = enc(deg_of(n, p, i))
    return TruncatedSimplicialSet(trunc_dim, levels, faces, degs, cosk)


def basic_complex(kind, n, k=None, trunc_dim=4):
    """Standard simplex, its boundary, a horn, or the groupoid interval J[n].

    For ``horn`` the horn index ``k`` selects which face is omitted.  J[n]
    is the nerve of the contractible groupoid on n+1 objects, hence flagged
    2-coskeletal; the simplex and boundary are flagged likewise when they
    are nerves of posets (the boundary and horns carry no flag).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if kind == "horn":
        if k is None:
            raise ValueError("horn requires an index k")
        if not (0 <= k <= n):
            raise ValueError("horn index out of range")

    if kind in ("standard", "boundary", "horn"):
        def keep(phi):
            if kind == "standard":
                return True
            image = set(phi)
            if kind == "boundary":
                return image != set(range(n + 1))
            return image | {k} != set(range(n + 1))

        payloads = [
            [list(phi) for phi in monotone_maps(m, n) if keep(phi)]
            for m in range(trunc_dim + 1)
        ]

        def face_of(m, p, i):
            return p[:i] + p[i + 1 :]

        def deg_of(m, p, i):
            return p[: i + 1] + p[i:]

        cosk = 2 if kind == "standard" else None
        return _complex_from_payloads(trunc_dim, payloads, face_of, deg_of, cosk)

    if kind == "interval_groupoid":
        payloads = [
            [list(t) for t in iproduct(range(n + 1), repeat=m + 1)]
            for m in range(trunc_dim + 1)
        ]

        def face_of(m, p, i):
            return p[:i] + p[i + 1 :]

        def deg_of(m, p, i):
            return p[: i + 1] + p[i:]

        return _complex_from_payloads(trunc_dim, payloads, face_of, deg_of, cosk=2)

    raise ValueError(f"unknown kind {kind!r}")


def product(X, Y):
    """Levelwise cartesian product with componentwise operators."""
    if X.trunc_dim != Y.trunc_dim:
        raise ValueError("mismatched truncation dimensions")
    D = X.trunc_dim
    payloads = [
        [[x, y] for x in X.simplices(m) for y in Y.simplices(m)] for m in range(D + 1)
    ]

    def face_of(m, p, i):
        return [X.face(m, p[0], i), Y.face(m, p[1], i)]

    def deg_of(m, p, i):
        return [X.deg(m, p[0], i), Y.deg(m, p[1], i)]

    cosk = None
    if X.coskeletal_bound is not None and Y.coskeletal_bound is not None:
        cosk = max(X.coskeletal_bound, Y.coskeletal_bound)
    prod = _complex_from_payloads(D, payloads, face_of, deg_of, cosk)
    pr1 = SimplicialMap(
        prod, X, {(m, enc([x, y])): x for m in range(D + 1) for x in X.simplices(m) for y in Y.simplices(m)}
    )
    pr2 = SimplicialMap(
        prod, Y, {(m, enc([x, y])): y for m in range(D + 1) for x in X.simplices(m) for y in Y.simplices(m)}
    )
    return prod, pr1, pr2


def pullback(f, g):
    """Levelwise fiber product of f: X -> Z and g: Y -> Z."""
    if f.target is not g.target and f.target != g.target:
        raise ValueError("maps must share a codomain")
    X, Y = f.source, g.source
    if X.trunc_dim != Y.trunc_dim:
        raise ValueError("mismatched truncation dimensions")
    D = X.trunc_dim
    payloads = [
        [
            [x, y]
            for x in X.simplices(m)
            for y in Y.simplices(m)
            if f(m, x) == g(m, y)
        ]
        for m in range(D + 1)
    ]

    def face_of(m, p, i):
        return [X.face(m, p[0], i), Y.face(m, p[1], i)]

    def deg_of(m, p, i):
        return [X.deg(m, p[0], i), Y.deg(m, p[1], i)]

    cosk = None
    if X.coskeletal_bound is not None and Y.coskeletal_bound is not None:
        cosk = max(X.coskeletal_bound, Y.coskeletal_bound)
    pb = _complex_from_payloads(D, payloads, face_of, deg_of, cosk)
    pr1 = SimplicialMap(pb, X, {(m, x): json.loads(x)[0] for m in range(D + 1) for x in pb.simplices(m)})
    pr2 = SimplicialMap(pb, Y, {(m, x): json.loads(x)[1] for m in range(D + 1) for x in pb.simplices(m)})
    return pb, pr1, pr2


def subcomplex(X, keep):
    """The simplicial subset on the kept identifiers.

    ``keep`` maps level -> set of ids.  Raises if the selection is not
    closed under faces and degeneracies within the truncation.
    """
    D = X.trunc_dim
    levels = []
    for n in range(D + 1):
        sel = keep.get(n, set())
        levels.append([x for x in X.simplices(n) if x in sel])
    faces = {}
    degs = {}
    for n in range(1, D + 1):
        for x in levels[n]:
            for i in range(n + 1):
                y = X.face(n, x, i)
                if y not in keep.get(n - 1, set()):
                    raise ValueError(f"selection not face-closed at level {n}: {x}")
                faces[(n, x, i)] = y
    for n in range(D):
        for x in levels[n]:
            for i in range(n + 1):
                y = X.deg(n, x, i)
                if y not in keep.get(n + 1, set()):
                    raise ValueError(f"selection not degeneracy-closed at level {n}: {x}")
                degs[(n, x, i)] = y
    return TruncatedSimplicialSet(D, levels, faces, degs, None)


def validate_simplicial_identities(X):
    """Exhaustively check the five d/s identity families within truncation.

    Returns a report with the first violations found; an empty violation
    list means every identity instance holds.
    """
    bad = []

    def note(msg):
        if len(bad) < 5:
            bad.append(msg)

    D = X.trunc_dim
    for n in range(1, D + 1):
        for x in X.simplices(n):
            for i in range(n + 1):
                y = X.faces.get((n, x, i))
                if y is None or not X.has_simplex(n - 1, y):
                    note(f"level {n} simplex {x}: face {i} missing or invalid")
    for n in range(D):
        for x in X.simplices(n):
            for i in range(n + 1):
                y = X.degeneracies.get((n, x, i))
                if y is None or not X.has_simplex(n + 1, y):
                    note(f"level {n} simplex {x}: degeneracy {i} missing or invalid")
    if bad:
        return {"ok": False, "violations": bad}

    for n in range(2, D + 1):
        for x in X.simplices(n):
            for j in range(n + 1):
                for i in range(j):
                    lhs = X.face(n - 1, X.face(n, x, j), i)
                    rhs = X.face(n - 1, X.face(n, x, i), j - 1)
                    if lhs != rhs:
                        note(f"(level {n}, {x}): d{i} d{j} != d{j-1} d{i}")
    for n in range(D):
        for x in X.simplices(n):
            for j in range(n + 1):
                sx = X.deg(n, x, j)
                for i in range(n + 2):
                    got = X.face(n + 1, sx, i)
                    if i < j:
                        want = X.deg(n - 1, X.face(n, x, i), j - 1)
                    elif i in (j, j + 1):
                        want = x
                    else:
                        want = X.deg(n - 1, X.face(n, x, i - 1), j)
                    if got != want:
                        note(f"(level {n}, {x}): d{i} s{j} law fails")
                if n + 2 <= D:
                    for i in range(j + 1):
                        if X.deg(n + 1, sx, i) != X.deg(n + 1, X.deg(n, x, i), j + 1):
                            note(f"(level {n}, {x}): s{i} s{j} law fails")
    # degeneracies injective levelwise
    for n in range(D):
        for i in range(n + 1):
            seen = {}
            for x in X.simplices(n):
                y = X.deg(n, x, i)
                if y in seen:
                    note(f"s{i} not injective at level {n}: {seen[y]} and {x}")
                seen[y] = x
    return {"ok": not bad, "violations": bad}


def eilenberg_zilber_report(X):
    """Check each simplex is an iterated degeneracy of a unique nondegenerate one."""
    bad = []
    for n in range(X.trunc_dim + 1):
        nondeg = [set(X.nondegenerate(m)) for m in range(n + 1)]
        for x in X.simplices(n):
            hits = []
            for k in range(n + 1):
                for sigma in monotone_maps(n, k):
                    if set(sigma) != set(range(k + 1)):
                        continue  # surjections only
                    for z in nondeg[k]:
                        if X.act(k, z, sigma) == x:
                            hits.append((k, z, sigma))
            if len(hits) != 1 and len(bad) < 5:
                bad.append(f"level {n} simplex {x}: {len(hits)} representations")
    return {"ok": not bad, "violations": bad}


def homology(X, max_degree):
    """Integral homology of the normalized chain complex up to max_degree.

    Uses the nondegenerate basis in each level; boundary entries are exact
    integers and the groups come out of the Smith normal form.  Degrees
    above ``trunc_dim - 1`` are not computable from a truncation and are
    rejected up front.
    """
    from .snf import cokernel_invariants, group_signature, smith_normal_form

    if max_degree > X.trunc_dim - 1:
        raise ValueError("max_degree beyond reliable range for this truncation")
    basis = [list(X.nondegenerate(nn)) for nn in range(min(max_degree + 1, X.trunc_dim) + 1)]
    index = [dict((x, i) for i, x in enumerate(b)) for b in basis]

    def boundary(nn):
        # triplets of the matrix C_nn -> C_{nn-1}
        trip = []
        for col, x in enumerate(basis[nn]):
            for i in range(nn + 1):
                y = X.face(nn, x, i)
                row = index[nn - 1].get(y)
                if row is not None:
                    trip.append((row, col, (-1) ** i))
        return trip, len(basis[nn - 1]), len(basis[nn])

    ranks = {0: 0}
    diag = {}
    for nn in range(1, max_degree + 2):
        if nn >= len(basis):
            diag[nn], ranks[nn] = [], 0
            continue
        trip, nr, nc = boundary(nn)
        d = smith_normal_form(trip, nr, nc)
        diag[nn], ranks[nn] = d, len(d)
    groups = {}
    for nn in range(max_degree + 1):
        dim = len(basis[nn])
        free = dim - ranks.get(nn, 0) - ranks.get(nn + 1, 0)
        torsion = sorted(dd for dd in diag.get(nn + 1, []) if dd > 1)
        groups[nn] = group_signature(torsion, free)
    return HomologyResult(groups, X.trunc_dim)


class HomologyResult:
    """Invariant factors per degree; 0 encodes a Z summand."""

    def __init__(self, groups, trunc_dim):
        self.groups = dict(groups)
        self.trunc_dim = trunc_dim

    def __getitem__(self, degree):
        if degree in self.groups:
            return self.groups[degree]
        return "unknown (truncated)"

    def to_json(self):
        return {str(k): v for k, v in sorted(self.groups.items())}

    def __repr__(self):
        parts = ", ".join(f"H{k}={v}" for k, v in sorted(self.groups.items()))
        return f"HomologyResult({parts}; degrees>{max(self.groups, default=0)} unknown)"


# -- bisimplicial sets ----------------------------------------------------


class BisimplicialSet:
    """Doubly indexed simplex sets with commuting horizontal/vertical tables."""

    def __init__(self, dims, levels, hfaces, vfaces, hdegs, vdegs):
        self.dims = dims  # (D1, D2)
        self.levels = {pq: tuple(v) for pq, v in levels.items()}
        self.hfaces = dict(hfaces)
        self.vfaces = dict(vfaces)
        self.hdegs = dict(hdegs)
        self.vdegs = dict(vdegs)

    def simplices(self, p, q):
        return self.levels[(p, q)]

    def hface(self, p, q, x, i):
        return self.hfaces[(p, q, x, i)]

    def vface(self, p, q, x, i):
        return self.vfaces[(p, q, x, i)]

    def hdeg(self, p, q, x, i):
        return self.hdegs[(p, q, x, i)]

    def vdeg(self, p, q, x, i):
        return self.vdegs[(p, q, x, i)]

    def validate(self):
        D1, D2 = self.dims
        bad = []

        def note(msg):
            if len(bad) < 5:
                bad.append(msg)

        for (p, q), xs in self.levels.items():
            for x in xs:
                # mixed face-face commutation
                if p >= 1 and q >= 1:
                    for i in range(p + 1):
                        for j in range(q + 1):
                            a = self.vface(p - 1, q, self.hface(p, q, x, i), j)
                            b = self.hface(p, q - 1, self.vface(p, q, x, j), i)
                            if a != b:
                                note(f"h/v faces do not commute at ({p},{q}) {x}")
                if p >= 1 and q < D2:
                    for i in range(p + 1):
                        for j in range(q + 1):
                            a = self.vdeg(p - 1, q, self.hface(p, q, x, i), j)
                            b = self.hface(p, q + 1, self.vdeg(p, q, x, j), i)
                            if a != b:
                                note(f"h-face/v-deg do not commute at ({p},{q}) {x}")
        return {"ok": not bad, "violations": bad}

    def row_complex(self, p, trunc=None):
        """The vertical simplicial set at horizontal level p."""
        D2 = self.dims[1] if trunc is None else trunc
        levels = [self.levels[(p, q)] for q in range(D2 + 1)]
        faces = {
            (q, x, i): y
            for (pp, q, x, i), y in self.vfaces.items()
            if pp == p and q <= D2
        }
        degs = {
            (q, x, i): y
            for (pp, q, x, i), y in self.vdegs.items()
            if pp == p and q < D2
        }
        return TruncatedSimplicialSet(D2, levels, faces, degs, None)


def diagonal(B):
    """diag(B)_n = B(n, n) with operators the horizontal/vertical composites."""
    D1, D2 = B.dims
    if D1 != D2:
        raise ValueError("diagonal requires equal truncation dimensions")
    D = D1
    levels = [B.simplices(n, n) for n in range(D + 1)]
    faces = {}
    degs = {}
    for n in range(1, D + 1):
        for x in levels[n]:
            for i in range(n + 1):
                faces[(n, x, i)] = B.vface(n - 1, n, B.hface(n, n, x, i), i)
    for n in range(D):
        for x in levels[n]:
            for i in range(n + 1):
                degs[(n, x, i)] = B.vdeg(n + 1, n, B.hdeg(n, n, x, i), i)
    return TruncatedSimplicialSet(D, levels, faces, degs, None)


def external_product(X, Y):
    """The bisimplicial set (p, q) -> X_p x Y_q."""
    D1, D2 = X.trunc_dim, Y.trunc_dim
    levels = {}
    hf, vf, hd, vd = {}, {}, {}, {}
    for p in range(D1 + 1):
        for q in range(D2 + 1):
            cells = [enc([x, y]) for x in X.simplices(p) for y in Y.simplices(q)]
            levels[(p, q)] = cells
            for x in X.simplices(p):
                for y in Y.simplices(q):
                    c = enc([x, y])
                    for i in range(p + 1):
                        if p >= 1:
                            hf[(p, q, c, i)] = enc([X.face(p, x, i), y])
                        if p < D1:
                            hd[(p, q, c, i)] = enc([X.deg(p, x, i), y])
                    for j in range(q + 1):
                        if q >= 1:
                            vf[(p, q, c, j)] = enc([x, Y.face(q, y, j)])
                        if q < D2:
                            vd[(p, q, c, j)] = enc([x, Y.deg(q, y, j)])
    return BisimplicialSet((D1, D2), levels, hf, vf, hd, vd)


def constant_bisimplicial(X, hdim):
    """Constant in the horizontal direction: B(p, q) = X_q."""
    D2 = X.trunc_dim
    levels = {}
    hf, vf, hd, vd = {}, {}, {}, {}
    for p in range(hdim + 1):
        for q in range(D2 + 1):
            levels[(p, q)] = list(X.simplices(q))
            for x in X.simplices(q):
                for i in range(p + 1):
                    if p >= 1:
                        hf[(p, q, x, i)] = x
                    if p < hdim:
                        hd[(p, q, x, i)] = x
                for j in range(q + 1):
                    if q >= 1:
                        vf[(p, q, x, j)] = X.face(q, x, j)
                    if q < D2:
                        vd[(p, q, x, j)] = X.deg(q, x, j)
    return BisimplicialSet((hdim, D2), levels, hf, vf, hd, vd)


# -- maps into coskeletal targets ------------------------------------------


def _product_cells(A, m, k):
    """Cells of (A x Delta[m]) in levels 0..k as (a, sigma) pairs."""
    cells = []
    for ell in range(k + 1):
        cells.append(
            [(a, sigma) for a in A.simplices(ell) for sigma in monotone_maps(ell, m)]
        )
    return cells


def _cell_face(A, ell, cell, i):
    a, sigma = cell
    return (A.face(ell, a, i), sigma[:i] + sigma[i + 1 :])


def _cell_deg(A, ell, cell, i):
    a, sigma = cell
    return (A.deg(ell, a, i), sigma[: i + 1] + sigma[i:])


def maps_into_coskeletal(A, m, X, fixed=None, limit=None):
    """Enumerate maps A x Delta[m] -> X for a 2-coskeletal X.

    A map is determined by (and exists for) each compatible assignment on
    levels 0..2 of the product, which is what gets returned: a sorted tuple
    of ((level, cell), image) pairs.  ``fixed`` pre-assigns some cells.
    """
    if X.coskeletal_bound is None or X.coskeletal_bound > 2:
        raise ValueError("target must be flagged at most 2-coskeletal")
    k = 2
    cells = _product_cells(A, m, k)
    # indices for fast candidate lookup
    edges_by_ends = {}
    for e in X.simplices(1):
        key = (X.face(1, e, 1), X.face(1, e, 0))
        edges_by_ends.setdefault(key, []).append(e)
    tris_by_faces = {}
    for t in X.simplices(2):
        key = (X.face(2, t, 0), X.face(2, t, 1), X.face(2, t, 2))
        tris_by_faces.setdefault(key, []).append(t)

    # nondegenerate cells drive the search; degenerate ones are forced
    deg_src = {}
    for ell in (1, 2):
        for below in cells[ell - 1]:
            for i in range(ell):
                deg_src.setdefault((ell, _cell_deg(A, ell - 1, below, i)), (below, i))

    results = []
    asg = {}

    def image_of(ell, cell):
        src = deg_src.get((ell, cell))
        if src is not None:
            below, i = src
            lower = image_of(ell - 1, below)
            return None if lower is None else X.deg(ell - 1, lower, i)
        return asg.get((ell, cell))

    order = []
    for ell in range(k + 1):
        for cell in cells[ell]:
            if (ell, cell) not in deg_src:
                order.append((ell, cell))

    def _faces_ok(ell, cell, img):
        for i in range(ell + 1) if ell else ():
            want = image_of(ell - 1, _cell_face(A, ell, cell, i))
            if want is not None and X.face(ell, img, i) != want:
                return False
        return True

    def candidates(ell, cell):
        if fixed and (ell, cell) in fixed:
            want = fixed[(ell, cell)]
            return [want] if want is not None and _faces_ok(ell, cell, want) else []
        if ell == 0:
            return list(X.simplices(0))
        if ell == 1:
            a = image_of(0, _cell_face(A, 1, cell, 1))
            b = image_of(0, _cell_face(A, 1, cell, 0))
            return [e for e in edges_by_ends.get((a, b), ()) if _faces_ok(1, cell, e)]
        key = tuple(image_of(1, _cell_face(A, 2, cell, i)) for i in range(3))
        return [t for t in tris_by_faces.get(key, ()) if _faces_ok(2, cell, t)]

    def fixed_consistent():
        if not fixed:
            return True
        return all(image_of(ell, cell) == img for (ell, cell), img in fixed.items())

    def backtrack(pos):
        if limit is not None and len(results) >= limit:
            return
        if pos == len(order):
            if not fixed_consistent():
                return
            full = {}
            for ell in range(k + 1):
                for cell in cells[ell]:
                    full[(ell, cell)] = image_of(ell, cell)
            results.append(full)
            return
        ell, cell = order[pos]
        for img in candidates(ell, cell):
            asg[(ell, cell)] = img
            backtrack(pos + 1)
            del asg[(ell, cell)]

    backtrack(0)
    return results


def cotensor_into_coskeletal(A, X, up_to, fixed_fn=None):
    """The mapping object X^A, levels 0..up_to, for a coskeletal X.

    Level m is the set of maps A x Delta[m] -> X, each recorded by its
    action on levels 0..2 of the product; the simplicial operators
    precompose with monotone maps in the Delta[m] coordinate.  An optional
    ``fixed_fn(m)`` restricts level m to maps extending a fixed partial
    assignment (constant in the Delta[m] coordinate), which carves out
    slice-style subobjects such as the square complexes under a span.
    """
    if X.coskeletal_bound is None or X.coskeletal_bound > 2:
        raise ValueError("cotensor target must be flagged at most 2-coskeletal")

    def canon(fullmap):
        rows = [
            [ell, cell[0], list(cell[1]), img] for (ell, cell), img in fullmap.items()
        ]
        rows.sort(key=enc)
        return enc(rows)

    level_maps = []
    key_to_map = {}
    for m in range(up_to + 1):
        maps_m = maps_into_coskeletal(A, m, X, fixed=fixed_fn(m) if fixed_fn else None)
        keyed = {}
        for fm in maps_m:
            keyed[canon(fm)] = fm
        level_maps.append(sorted(keyed))
        for kk, fm in keyed.items():
            key_to_map[(m, kk)] = fm

    def reindex(m, key, phi):
        fm = key_to_map[(m, key)]
        out = {}
        target_m = len(phi) - 1
        for ell in range(3):
            for a in A.simplices(ell):
                for sigma in monotone_maps(ell, target_m):
                    composed = tuple(phi[v] for v in sigma)
                    out[(ell, (a, sigma))] = fm[(ell, (a, composed))]
        return canon(out)

    faces = {}
    degs = {}
    for m in range(1, up_to + 1):
        for key in level_maps[m]:
            for i in range(m + 1):
                phi = tuple(v for t, v in enumerate(range(m + 1)) if t != i)
                faces[(m, key, i)] = reindex(m, key, phi)
    for m in range(up_to):
        for key in level_maps[m]:
            for i in range(m + 1):
                phi = tuple(list(range(i + 1)) + list(range(i, m + 1)))
                degs[(m, key, i)] = reindex(m, key, phi)
    cot = TruncatedSimplicialSet(up_to, level_maps, faces, degs, coskeletal_bound=2)
    cot.map_payloads = key_to_map
    return cot


def cotensor_restriction_map(cot, A, vertex_a, X):
    """Restrict X^A along a vertex of A: the evaluation map X^A -> X.

    For each level-m map F the image is the unique m-simplex of X whose
    truncated data is F on the slice {vertex_a} x Delta[m].
    """
    a_cells = [vertex_a]
    for ell in range(1, 3):
        a_cells.append(A.deg(ell - 1, a_cells[-1], 0))
    assignment = {}
    for m in range(cot.trunc_dim + 1):
        for key in cot.simplices(m):
            fm = cot.map_payloads[(m, key)]
            data = {}
            for ell in range(3):
                for sigma in monotone_maps(ell, m):
                    data[(ell, sigma)] = fm[(ell, (a_cells[ell], sigma))]
            assignment[(m, key)] = find_simplex_by_truncation(X, m, data)
    return SimplicialMap(cot, X, assignment)


def find_simplex_by_truncation(X, m, data):
    """The unique m-simplex of X matching the given 2-truncated data.

    ``data`` maps (level, sigma) for monotone sigma: [level] -> [m] with
    level <= 2 to simplices of X.  Valid for coskeletal X.
    """
    if m <= 2:
        return data[(m, tuple(range(m + 1)))]
    for x in X.simplices(m):
        ok = True
        for (ell, sigma), want in data.items():
            if X.act(m, x, sigma) != want:
                ok = False
                break
        if ok:
            return x
    raise ValueError("no simplex matches the truncated data")


def mapping_space(X, x, y, up_to=3):
    """The space of paths from x to y: pullback of source/target evaluation.

    Implements the pullback of (x, y) against X^{Delta[1]} -> X x X and
    returns the resulting complex together with the two projections.
    """
    D1 = basic_complex("standard", 1, trunc_dim=max(2, up_to))
    cot = cotensor_into_coskeletal(D1, X, up_to)
    Xt = X.truncate(up_to) if X.trunc_dim > up_to else X
    prod_xx, _, _ = product(Xt, Xt)
    v0 = enc([0])
    v1 = enc([1])
    st_assignment = {}
    ev0 = cotensor_restriction_map(cot, D1, v0, Xt)
    ev1 = cotensor_restriction_map(cot, D1, v1, Xt)
    for m in range(up_to + 1):
        for key in cot.simplices(m):
            st_assignment[(m, key)] = enc([ev0(m, key), ev1(m, key)])
    st = SimplicialMap(cot, prod_xx, st_assignment)
    point = basic_complex("standard", 0, trunc_dim=up_to)
    pt_assignment = {}
    for m in range(up_to + 1):
        const = tuple([0] * (m + 1))
        xm = Xt.act(0, x, const)
        ym = Xt.act(0, y, const)
        pt_assignment[(m, enc(list(const)))] = enc([xm, ym])
    pt = SimplicialMap(point, prod_xx, pt_assignment)
    space, proj, _ = pullback(st, pt)
    return space, proj
