"""The S-construction over a finite Waldhausen instance.

A level-n object is a grid: a functor out of the arrow poset of [n] with
zero diagonal, cofibration rows, and certified pushout squares.  Grids are
stored by their generating morphisms (one step right, one step down); the
simplicial operators are plain functorial reindexings along monotone maps,
so faces, degeneracies, and pullbacks of grids all share one code path.

Enumeration follows the chain-first strategy: depth-first over cofibration
chains out of the zero object, then over every certified quotient-square
completion (not only the chooser's), with the completion sets memoized per
cofibration.
"""

from __future__ import annotations

import json

from .cats import FiniteCategory, FunctorData, category_from_parts, poset_category
from .simplicial import TruncatedSimplicialSet, enc
from .waldhausen import (
    BudgetExceeded,
    CertificationError,
    PushoutResult,
    WaldhausenInstance,
    is_pushout,
    mediate_by_search,
    searched_pushout,
    verify_exact_functor,
)


def arrow_category(n):
    """The poset of pairs (i, j), 0 <= i <= j <= n, ordered componentwise."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    elems = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    return poset_category(
        [list(e) for e in elems],
        lambda a, b: a[0] <= b[0] and a[1] <= b[1],
    )


class GapGrid:
    """A functor Ar[n] -> C recorded by objects and generating morphisms."""

    __slots__ = ("n", "obj", "hgen", "vgen", "key")

    def __init__(self, n, obj, hgen, vgen):
        self.n = n
        self.obj = dict(obj)  # (i, j) -> object, i <= j
        self.hgen = dict(hgen)  # (i, j) -> morphism to (i, j+1), j < n
        self.vgen = dict(vgen)  # (i, j) -> morphism to (i+1, j), i < j
        self.key = enc(
            [
                n,
                sorted([list(k), v] for k, v in self.obj.items()),
                sorted([list(k), v] for k, v in self.hgen.items()),
                sorted([list(k), v] for k, v in self.vgen.items()),
            ]
        )

    def positions(self):
        return [(i, j) for i in range(self.n + 1) for j in range(i, self.n + 1)]

    def arrow(self, cat, src, dst):
        """The composite morphism src -> dst along right-then-down steps."""
        (a, b), (c, d) = src, dst
        if not (a <= c and b <= d):
            raise ValueError("not an Ar[n] relation")
        m = cat.id_of(self.obj[src])
        for t in range(b, d):
            m = cat.compose(self.hgen[(a, t)], m)
        for s in range(a, c):
            m = cat.compose(self.vgen[(s, d)], m)
        return m

    def to_json(self):
        return {
            "n": self.n,
            "objects": {f"{i},{j}": o for (i, j), o in sorted(self.obj.items())},
            "arrows": {
                **{f"h:{i},{j}": m for (i, j), m in sorted(self.hgen.items())},
                **{f"v:{i},{j}": m for (i, j), m in sorted(self.vgen.items())},
            },
        }

    @staticmethod
    def from_json(doc):
        obj = {}
        for k, o in doc["objects"].items():
            i, j = (int(x) for x in k.split(","))
            obj[(i, j)] = o
        hgen, vgen = {}, {}
        for k, m in doc["arrows"].items():
            tag, pos = k.split(":")
            i, j = (int(x) for x in pos.split(","))
            (hgen if tag == "h" else vgen)[(i, j)] = m
        return GapGrid(doc["n"], obj, hgen, vgen)


def trivial_grid(W):
    return GapGrid(0, {(0, 0): W.zero}, {}, {})


def certify_grid(W, grid):
    """All grid invariants: zero diagonal, cofibration rows, pushout squares.

    Raises CertificationError with the first offending datum.
    """
    cat = W.cat
    n = grid.n
    for i in range(n + 1):
        if grid.obj.get((i, i)) != W.zero:
            raise CertificationError(f"diagonal entry ({i},{i}) is not the zero object")
    for (i, j) in grid.positions():
        if j < n:
            m = grid.hgen.get((i, j))
            if m is None or cat.src[m] != grid.obj[(i, j)] or cat.tgt[m] != grid.obj[(i, j + 1)]:
                raise CertificationError(f"horizontal generator at ({i},{j}) mistyped")
        if i < j:
            m = grid.vgen.get((i, j))
            if m is None or cat.src[m] != grid.obj[(i, j)] or cat.tgt[m] != grid.obj[(i + 1, j)]:
                raise CertificationError(f"vertical generator at ({i},{j}) mistyped")
    # elementary squares commute, so all path composites are well defined
    for i in range(n + 1):
        for j in range(i + 1, n):
            if i < j:
                left = cat.compose(grid.vgen[(i, j + 1)], grid.hgen[(i, j)])
                right = cat.compose(grid.hgen[(i + 1, j)], grid.vgen[(i, j)])
                if left != right:
                    raise CertificationError(f"grid square at ({i},{j}) does not commute")
    for i in range(n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                if not W.is_cof(grid.arrow(cat, (i, j), (i, k))):
                    raise CertificationError(f"row map ({i},{j})->({i},{k}) not a cofibration")
    for i in range(n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                f = grid.arrow(cat, (i, j), (j, j))
                g = grid.arrow(cat, (i, j), (i, k))
                if not is_pushout(
                    cat, f, g, grid.obj[(j, k)],
                    grid.arrow(cat, (j, j), (j, k)),
                    grid.arrow(cat, (i, k), (j, k)),
                ):
                    raise CertificationError(f"square ({i},{j},{k}) is not a pushout")
    return True


def reindex_grid(W, grid, phi):
    """Precompose the grid functor with Ar(phi) for monotone phi: [m] -> [n].

    This single operation realizes faces (phi skips an index), degeneracies
    (phi repeats one), and the pullback of a level-m simplex along phi.
    """
    cat = W.cat
    m = len(phi) - 1
    obj = {}
    hgen = {}
    vgen = {}
    for a in range(m + 1):
        for b in range(a, m + 1):
            obj[(a, b)] = grid.obj[(phi[a], phi[b])]
    for a in range(m + 1):
        for b in range(a, m):
            hgen[(a, b)] = grid.arrow(cat, (phi[a], phi[b]), (phi[a], phi[b + 1]))
    for a in range(m + 1):
        for b in range(a + 1, m + 1):
            if a < b:
                vgen[(a, b)] = grid.arrow(cat, (phi[a], phi[b]), (phi[a + 1], phi[b]))
    out = GapGrid(m, obj, hgen, vgen)
    return out


def simplicial_operator(kind_index, grid, W, certify=True):
    """Face or degeneracy of a grid; kind_index is ("face", i) or ("deg", i)."""
    kind, i = kind_index
    n = grid.n
    if kind == "face":
        if not (0 <= i <= n):
            raise ValueError("face index out of range")
        phi = tuple(v for v in range(n + 1) if v != i)
    elif kind == "deg":
        if not (0 <= i <= n):
            raise ValueError("degeneracy index out of range")
        phi = tuple(list(range(i + 1)) + list(range(i, n + 1)))
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    out = reindex_grid(W, grid, phi)
    if certify:
        certify_grid(W, out)
    return out


def enumerate_grids(W, n, budget=20000):
    """All level-n grids: cofibration chains with certified completions."""
    if n == 0:
        return [trivial_grid(W)]
    cat = W.cat
    results = []

    def extend(grid, t):
        # grid is complete on indices 0..t
        if t == n:
            certify_grid(W, grid)
            results.append(grid)
            if len(results) > budget:
                raise BudgetExceeded(f"more than {budget} grids at level {n}")
            return
        top = grid.obj[(0, t)]
        for c in sorted(W.cofibrations):
            if cat.src[c] != top:
                continue
            obj = dict(grid.obj)
            hgen = dict(grid.hgen)
            vgen = dict(grid.vgen)
            obj[(0, t + 1)] = cat.tgt[c]
            hgen[(0, t)] = c
            _extend_rows(obj, hgen, vgen, t, 1)

    def _extend_rows(obj, hgen, vgen, t, i):
        # fill entries (i, t+1) for ascending i, then recurse to next column
        if i == t + 2:
            extend(GapGrid(t + 1, obj, hgen, vgen), t + 1)
            return
        if i == t + 1:
            obj[(t + 1, t + 1)] = W.zero
            vgen[(t, t + 1)] = W.to_zero(obj[(t, t + 1)])
            _extend_rows(obj, hgen, vgen, t, i + 1)
            del obj[(t + 1, t + 1)]
            del vgen[(t, t + 1)]
            return
        # composite cofibration along row i-1 from column i to column t+1
        m = cat.id_of(obj[(i - 1, i)])
        for col in range(i, t + 1):
            m = cat.compose(hgen[(i - 1, col)], m)
        for b, q in W.quotient_completions(m):
            obj[(i, t + 1)] = b
            vgen[(i - 1, t + 1)] = q
            ok = True
            if i <= t:
                # mediate the new horizontal generator of row i
                u = W.zero_to(b)
                v = cat.compose(q, hgen[(i - 1, t)])
                try:
                    h = mediate_by_search(
                        cat,
                        obj[(i, t)],
                        W.zero_to(obj[(i, t)]),
                        vgen[(i - 1, t)],
                        u,
                        v,
                    )
                    hgen[(i, t)] = h
                except CertificationError:
                    ok = False
            if ok:
                _extend_rows(obj, hgen, vgen, t, i + 1)
            if (i, t) in hgen and i <= t:
                del hgen[(i, t)]
            del obj[(i, t + 1)]
            del vgen[(i - 1, t + 1)]

    extend(trivial_grid(W), 0)
    results.sort(key=lambda g: g.key)
    return results


def grid_transformations(W, g1, g2, weq_only=False):
    """Natural transformations g1 -> g2, componentwise with generator pruning."""
    cat = W.cat
    n = g1.n
    positions = g1.positions()
    comps = {}
    out = []

    def bt(pos_idx):
        if pos_idx == len(positions):
            out.append(dict(comps))
            return
        p = positions[pos_idx]
        i, j = p
        if i == j:
            cands = [cat.id_of(W.zero)]
        else:
            cands = cat.hom(g1.obj[p], g2.obj[p])
        for c in cands:
            if weq_only and i != j and not W.is_weq(c):
                continue
            # generators into p from already-assigned positions
            if j > i and (i, j - 1) in comps:
                if cat.compose(c, g1.hgen[(i, j - 1)]) != cat.compose(
                    g2.hgen[(i, j - 1)], comps[(i, j - 1)]
                ):
                    continue
            if i > 0 and (i - 1, j) in comps:
                if cat.compose(c, g1.vgen[(i - 1, j)]) != cat.compose(
                    g2.vgen[(i - 1, j)], comps[(i - 1, j)]
                ):
                    continue
            comps[p] = c
            bt(pos_idx + 1)
            del comps[p]

    bt(0)
    return out


def transformation_id(comps):
    return enc(sorted([list(k), v] for k, v in comps.items()))


def s_n_category(W, n, budget=20000, validate=False):
    """S_n of the instance, as a Waldhausen instance over grids.

    Morphisms are the natural transformations of grid functors; a morphism
    is a cofibration when every pushout-induced comparison of its top rows
    is a cofibration (undefinable comparisons disqualify), and a weak
    equivalence when all its components are.
    """
    grids = enumerate_grids(W, n, budget)
    by_key = {g.key: g for g in grids}
    cat = W.cat
    mor_specs = []
    nt_of = {}
    for g1 in grids:
        for g2 in grids:
            for comps in grid_transformations(W, g1, g2):
                mid = enc([g1.key, g2.key, json.loads(transformation_id(comps))])
                nt_of[mid] = (g1.key, g2.key, comps)
                mor_specs.append((mid, g1.key, g2.key))

    def compose(gid, fid):
        k1, k2, cf = nt_of[fid]
        _, k3, cg = nt_of[gid]
        comps = {p: cat.compose(cg[p], cf[p]) for p in cf}
        return enc([k1, k3, json.loads(transformation_id(comps))])

    def id_fn(o):
        g = by_key[o]
        comps = {p: cat.id_of(g.obj[p]) for p in g.positions()}
        return enc([o, o, json.loads(transformation_id(comps))])

    sn_cat = category_from_parts([g.key for g in grids], mor_specs, compose, id_fn)
    if validate:
        rep = sn_cat.validate()
        if not rep["ok"]:
            raise CertificationError(f"S_{n} category invalid: {rep['violations']}")

    zero_key = reindex_grid(W, trivial_grid(W), tuple([0] * (n + 1))).key

    weq = set()
    cof = set()
    for mid, (k1, k2, comps) in nt_of.items():
        if all(W.is_weq(c) for c in comps.values()):
            weq.add(mid)
        g1, g2 = by_key[k1], by_key[k2]
        ok = True
        for j in range(1, n + 1):
            f = comps[(0, j - 1)]
            g = g1.hgen[(0, j - 1)] if j - 1 < n else None
            po = W.pushout(f, g1.hgen[(0, j - 1)])
            if po is None:
                ok = False
                break
            induced = po.mediate(g2.hgen[(0, j - 1)], comps[(0, j)])
            if not W.is_cof(induced):
                ok = False
                break
        if ok:
            cof.add(mid)

    inst = WaldhausenInstance(
        f"S_{n}({W.label})", sn_cat, zero_key, frozenset(cof), frozenset(weq),
        searched_pushout,
    )
    inst.grids = by_key
    inst.nt_of = nt_of
    inst.base = W
    return inst


def s_n_functor(F, W_src, W_tgt, Sn_src, Sn_tgt):
    """S_n of an exact functor: apply F entrywise to grids and transformations."""
    obj_map = {}
    for key, g in Sn_src.grids.items():
        img = GapGrid(
            g.n,
            {p: F.on_obj(o) for p, o in g.obj.items()},
            {p: F.on_mor(m) for p, m in g.hgen.items()},
            {p: F.on_mor(m) for p, m in g.vgen.items()},
        )
        if img.key not in Sn_tgt.grids:
            raise CertificationError("functor image grid missing from target S_n")
        obj_map[key] = img.key
    mor_map = {}
    for mid, (k1, k2, comps) in Sn_src.nt_of.items():
        img_comps = {p: F.on_mor(c) for p, c in comps.items()}
        mor_map[mid] = enc(
            [obj_map[k1], obj_map[k2], json.loads(transformation_id(img_comps))]
        )
    return FunctorData(Sn_src.cat, Sn_tgt.cat, obj_map, mor_map)


def w_subcategory(W):
    """The subcategory of weak equivalences (same objects)."""
    cat = W.cat
    mors = sorted(W.weqs)
    comp = {
        (g, f): cat.comp_table[(g, f)]
        for g in mors
        for f in mors
        if cat.tgt[f] == cat.src[g]
    }
    return FiniteCategory(
        cat.objects, mors,
        {m: cat.src[m] for m in mors},
        {m: cat.tgt[m] for m in mors},
        dict(cat.identity), comp,
    )


# -- the category of cofiber sequences E(A, C, B) ----------------------------


class ECat(WaldhausenInstance):
    """Cofiber sequences A >-> C ->> B with subobject in A and quotient in B."""

    def eobj_parts(self, e):
        a, col_a, c, col_q, b = json.loads(e)
        return a, col_a, c, col_q, b

    def emor_parts(self, m):
        # morphism ids carry their endpoints: [src, tgt, fa, fc, fb]
        return tuple(json.loads(m)[2:])

    @staticmethod
    def emor_id(src, tgt, fa, fc, fb):
        return enc([src, tgt, fa, fc, fb])


def e_category(A, C, B):
    """Build E(A, C, B) with its Waldhausen structure.

    Cofibrations require all three of: subobject component a cofibration in
    A, quotient component a cofibration in B, and the induced comparison
    out of the pushout a cofibration in C.  (The induced-map clause alone
    does not close under the pushout axiom on truncated instances.)
    """
    cat = C.cat
    a_objs = set(A.cat.objects)
    b_objs = set(B.cat.objects)
    objects = []
    parts = {}
    for col_a in sorted(C.cofibrations):
        a, c = cat.src[col_a], cat.tgt[col_a]
        if a not in a_objs:
            continue
        for b, col_q in C.quotient_completions(col_a):
            if b not in b_objs:
                continue
            e = enc([a, col_a, c, col_q, b])
            objects.append(e)
            parts[e] = (a, col_a, c, col_q, b)
    objects.sort()

    mor_specs = []
    for e1 in objects:
        a1, colA1, c1, colQ1, b1 = parts[e1]
        for e2 in objects:
            a2, colA2, c2, colQ2, b2 = parts[e2]
            for fc in cat.hom(c1, c2):
                for fa in A.cat.hom(a1, a2):
                    if cat.compose(fc, colA1) != cat.compose(colA2, fa):
                        continue
                    for fb in B.cat.hom(b1, b2):
                        if cat.compose(fb, colQ1) != cat.compose(colQ2, fc):
                            continue
                        mor_specs.append((ECat.emor_id(e1, e2, fa, fc, fb), e1, e2))

    def compose(gid, fid):
        e1, _, fa, fc, fb = json.loads(fid)
        _, e3, ga, gc, gb = json.loads(gid)
        return ECat.emor_id(
            e1, e3,
            A.cat.compose(ga, fa),
            cat.compose(gc, fc),
            B.cat.compose(gb, fb),
        )

    def id_fn(e):
        a, colA, c, colQ, b = parts[e]
        return ECat.emor_id(e, e, A.cat.id_of(a), cat.id_of(c), B.cat.id_of(b))

    e_cat = category_from_parts(objects, mor_specs, compose, id_fn)
    zero = enc([C.zero, cat.id_of(C.zero), C.zero, cat.id_of(C.zero), C.zero])
    if zero not in parts:
        raise CertificationError("zero cofiber sequence missing from E(A,C,B)")

    weq = set()
    cof = set()
    for mid in e_cat.morphisms:
        e1, e2, fa, fc, fb = json.loads(mid)
        if A.is_weq(fa) and C.is_weq(fc) and B.is_weq(fb):
            weq.add(mid)
        if not (A.is_cof(fa) and B.is_cof(fb)):
            continue
        a1, colA1, c1, colQ1, b1 = parts[e1]
        a2, colA2, c2, colQ2, b2 = parts[e2]
        po = C.pushout(colA1, fa)
        if po is None:
            continue
        induced = po.mediate(fc, colA2)
        if C.is_cof(induced):
            cof.add(mid)

    def chooser(EW, F, G):
        x_e, y_e, fa, fc, fb = json.loads(F)
        _, z_e, ga, gc, gb = json.loads(G)
        poa = A.pushout(fa, ga)
        poc = C.pushout(fc, gc)
        pob = B.pushout(fb, gb)
        if poa is None or poc is None or pob is None:
            return None
        _, colA_y, _, colQ_y, _ = parts[y_e]
        _, colA_z, _, colQ_z, _ = parts[z_e]
        col_a = mediate_by_search(
            cat, poa.obj, poa.from_left, poa.from_cof,
            cat.compose(poc.from_left, colA_y),
            cat.compose(poc.from_cof, colA_z),
        )
        col_q = mediate_by_search(
            cat, poc.obj, poc.from_left, poc.from_cof,
            cat.compose(pob.from_left, colQ_y),
            cat.compose(pob.from_cof, colQ_z),
        )
        pe = enc([poa.obj, col_a, poc.obj, col_q, pob.obj])
        if pe not in parts:
            raise CertificationError("levelwise pushout is not a certified cofiber sequence")
        left = ECat.emor_id(y_e, pe, poa.from_left, poc.from_left, pob.from_left)
        cofleg = ECat.emor_id(z_e, pe, poa.from_cof, poc.from_cof, pob.from_cof)

        def mediate(u, v):
            _, t_e, ua, uc, ub = json.loads(u)
            _, t_e2, va, vc, vb = json.loads(v)
            if t_e != t_e2:
                raise ValueError("cone legs must share a target")
            return ECat.emor_id(
                pe, t_e,
                poa.mediate(ua, va),
                poc.mediate(uc, vc),
                pob.mediate(ub, vb),
            )

        return PushoutResult(pe, left, cofleg, mediate)

    EW = ECat(
        f"E({A.label},{C.label},{B.label})", e_cat, zero,
        frozenset(cof), frozenset(weq), chooser,
    )
    EW.A, EW.C, EW.B = A, C, B
    EW.parts = parts
    return EW


def e_projections(EW):
    """The exact projections to A, C, and B."""
    s_obj, c_obj, q_obj = {}, {}, {}
    s_mor, c_mor, q_mor = {}, {}, {}
    for e in EW.cat.objects:
        a, _, c, _, b = EW.eobj_parts(e)
        s_obj[e], c_obj[e], q_obj[e] = a, c, b
    for m in EW.cat.morphisms:
        fa, fc, fb = EW.emor_parts(m)
        s_mor[m], c_mor[m], q_mor[m] = fa, fc, fb
    s = FunctorData(EW.cat, EW.A.cat, s_obj, s_mor)
    mid = FunctorData(EW.cat, EW.C.cat, c_obj, c_mor)
    q = FunctorData(EW.cat, EW.B.cat, q_obj, q_mor)
    return s, mid, q


def object_simplicial_set(W, n_max, budget=20000):
    """The simplicial set of grid objects, levels 0..n_max."""
    levels = []
    grid_index = {}
    for n in range(n_max + 1):
        grids = enumerate_grids(W, n, budget)
        for g in grids:
            grid_index[(n, g.key)] = g
        levels.append([g.key for g in grids])
    faces = {}
    degs = {}
    for n in range(1, n_max + 1):
        for key in levels[n]:
            g = grid_index[(n, key)]
            for i in range(n + 1):
                out = simplicial_operator(("face", i), g, W, certify=False)
                if (n - 1, out.key) not in grid_index:
                    raise CertificationError("face image missing from enumeration")
                faces[(n, key, i)] = out.key
    for n in range(n_max):
        for key in levels[n]:
            g = grid_index[(n, key)]
            for i in range(n + 1):
                out = simplicial_operator(("deg", i), g, W, certify=False)
                if (n + 1, out.key) not in grid_index:
                    raise CertificationError("degeneracy image missing from enumeration")
                degs[(n, key, i)] = out.key
    X = TruncatedSimplicialSet(n_max, levels, faces, degs, None)
    X.grid_index = grid_index
    return X


def diagonal_nerve_w(W, n_max, nerve_trunc=None, budget=20000):
    """The bisimplicial set (n, k) -> N(w S_n)_k and its diagonal."""
    from .cats import nerve
    from .simplicial import BisimplicialSet, diagonal

    if nerve_trunc is None:
        nerve_trunc = n_max
    sn = {n: s_n_category(W, n, budget) for n in range(n_max + 1)}
    nerves = {n: nerve(w_subcategory(sn[n]), nerve_trunc) for n in range(n_max + 1)}

    def chain_map(n_src, phi, chain_id):
        # apply the reindexing functor to a nerve chain of w S_{n_src}
        o, ms = json.loads(chain_id)
        src_inst = sn[n_src]
        start = reindex_grid(W, src_inst.grids[o], phi).key
        new_ms = []
        mlen = len(phi) - 1
        for m in ms:
            k1, k2, comps = src_inst.nt_of[m]
            new_comps = {}
            for a in range(mlen + 1):
                for b in range(a, mlen + 1):
                    new_comps[(a, b)] = comps[(phi[a], phi[b])]
            nk1 = reindex_grid(W, src_inst.grids[k1], phi).key
            nk2 = reindex_grid(W, src_inst.grids[k2], phi).key
            new_ms.append(enc([nk1, nk2, json.loads(transformation_id(new_comps))]))
        return enc([start, new_ms])

    levels = {}
    hf, vf, hd, vd = {}, {}, {}, {}
    for n in range(n_max + 1):
        N = nerves[n]
        for k in range(nerve_trunc + 1):
            levels[(n, k)] = list(N.simplices(k))
            for x in N.simplices(k):
                for j in range(k + 1):
                    if k >= 1:
                        vf[(n, k, x, j)] = N.face(k, x, j)
                    if k < nerve_trunc:
                        vd[(n, k, x, j)] = N.deg(k, x, j)
                for i in range(n + 1):
                    if n >= 1:
                        phi = tuple(v for v in range(n + 1) if v != i)
                        hf[(n, k, x, i)] = chain_map(n, phi, x)
                    if n < n_max:
                        phi = tuple(list(range(i + 1)) + list(range(i, n + 1)))
                        hd[(n, k, x, i)] = chain_map(n, phi, x)
    B = BisimplicialSet((n_max, nerve_trunc), levels, hf, vf, hd, vd)
    diag = diagonal(B) if n_max == nerve_trunc else None
    return B, diag
