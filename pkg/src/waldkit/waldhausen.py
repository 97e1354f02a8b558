"""Waldhausen structures on finite categories and their verifiers.

The two concrete instances (skeletal pointed sets, F2 vector spaces) are
finite truncations of honest Waldhausen categories: every predicate is
total, but the pushout chooser is a deterministic *partial* operation that
declines spans whose canonical amalgam falls outside the size cap.  Axiom
reports therefore separate genuine failures from spans that were skipped
as out of range; determinism of the chooser is what makes it a functorial
choice wherever it is defined (mediating maps compose uniquely).

K0 here is the standard presentation: free abelian group on the objects
modulo cofiber-sequence and weak-equivalence relations.  That presentation
is a pi_0-level shadow adopted for the workbench, not something the source
theory fixes; reports carry a note saying so.
"""

from __future__ import annotations

import json
from itertools import product as iproduct

from .cats import (
    FiniteCategory,
    FunctorData,
    NaturalTransformationData,
    check_equivalence_of_categories,
    full_subcategory,
)
from .simplicial import enc
from .snf import cokernel_invariants, group_signature

K0_NOTE = (
    "K0 given by generators [objects] and relations [B]-[A]-[B/A], [A]-[A'];"
    " standard pi_0-level presentation adopted by this workbench"
)


class BudgetExceeded(Exception):
    pass


class CertificationError(Exception):
    pass


class PushoutResult:
    """A chosen pushout of a span (f: A -> B, g: A >-> C)."""

    __slots__ = ("obj", "from_left", "from_cof", "mediate")

    def __init__(self, obj, from_left, from_cof, mediate):
        self.obj = obj
        self.from_left = from_left  # B -> obj
        self.from_cof = from_cof  # C -> obj
        self.mediate = mediate  # (u: B -> T, v: C -> T) -> obj -> T


class WaldhausenInstance:
    def __init__(self, label, cat, zero, cofibrations, weqs, chooser):
        self.label = label
        self.cat = cat
        self.zero = zero
        self.cofibrations = frozenset(cofibrations)
        self.weqs = frozenset(weqs)
        self._chooser = chooser
        self._pushout_cache = {}
        self._completion_cache = {}

    def is_cof(self, m):
        return m in self.cofibrations

    def is_weq(self, m):
        return m in self.weqs

    def zero_to(self, obj):
        ms = self.cat.hom(self.zero, obj)
        if len(ms) != 1:
            raise CertificationError(f"{self.zero} is not initial toward {obj}")
        return ms[0]

    def to_zero(self, obj):
        ms = self.cat.hom(obj, self.zero)
        if len(ms) != 1:
            raise CertificationError(f"{self.zero} is not terminal from {obj}")
        return ms[0]

    def pushout(self, f, g):
        """Chosen pushout of (f: A -> B, g: A >-> C); None when out of range."""
        key = (f, g)
        if key not in self._pushout_cache:
            if self.cat.src[f] != self.cat.src[g]:
                raise ValueError("span legs must share a source")
            if not self.is_cof(g):
                raise ValueError("second leg must be a cofibration")
            self._pushout_cache[key] = self._chooser(self, f, g)
        return self._pushout_cache[key]

    def quotient_completions(self, m):
        """All certified cofiber completions (B, q) of a cofibration m: A >-> C.

        A completion is any pair making the square over the zero object a
        pushout, certified by the universal property; the chooser output is
        just one of them.
        """
        if m in self._completion_cache:
            return self._completion_cache[m]
        if not self.is_cof(m):
            raise ValueError("completions only defined for cofibrations")
        a, c = self.cat.src[m], self.cat.tgt[m]
        f = self.to_zero(a)
        out = []
        for b in self.cat.objects:
            leg_b = self.zero_to(b)
            for q in self.cat.hom(c, b):
                if is_pushout(self.cat, f, m, b, leg_b, q):
                    out.append((b, q))
        self._completion_cache[m] = tuple(out)
        return self._completion_cache[m]


def is_pushout(cat, f, g, pobj, leg_left, leg_cof):
    """Universal-property test: does (pobj, legs) form the pushout of (f, g)?

    Exhaustive over every cone in the finite category; results are cached
    on the category object.
    """
    cache = getattr(cat, "_pushout_cache", None)
    if cache is None:
        cache = cat._pushout_cache = {}
    key = (f, g, pobj, leg_left, leg_cof)
    if key in cache:
        return cache[key]
    ok = _is_pushout_uncached(cat, f, g, pobj, leg_left, leg_cof)
    cache[key] = ok
    return ok


def _is_pushout_uncached(cat, f, g, pobj, leg_left, leg_cof):
    b, c = cat.tgt[f], cat.tgt[g]
    if cat.src[leg_left] != b or cat.src[leg_cof] != c:
        return False
    if cat.tgt[leg_left] != pobj or cat.tgt[leg_cof] != pobj:
        return False
    if cat.compose(leg_left, f) != cat.compose(leg_cof, g):
        return False
    for t in cat.objects:
        homs_p = cat.hom(pobj, t)
        for u in cat.hom(b, t):
            uf = cat.compose(u, f)
            for v in cat.hom(c, t):
                if uf != cat.compose(v, g):
                    continue
                found = [
                    w
                    for w in homs_p
                    if cat.compose(w, leg_left) == u and cat.compose(w, leg_cof) == v
                ]
                if len(found) != 1:
                    return False
    return True


def mediate_by_search(cat, pobj, leg_left, leg_cof, u, v):
    """The unique map out of a certified pushout commuting with the cone."""
    t = cat.tgt[u]
    if cat.tgt[v] != t:
        raise ValueError("cone legs must share a target")
    found = [
        w
        for w in cat.hom(pobj, t)
        if cat.compose(w, leg_left) == u and cat.compose(w, leg_cof) == v
    ]
    if len(found) != 1:
        raise CertificationError("mediating map not unique; not a pushout?")
    return found[0]


def searched_pushout(W, f, g):
    """Generic chooser: scan candidates in canonical order, certify, pick first."""
    cat = W.cat
    b, c = cat.tgt[f], cat.tgt[g]
    for pobj in cat.objects:
        for leg_left in cat.hom(b, pobj):
            for leg_cof in cat.hom(c, pobj):
                if is_pushout(cat, f, g, pobj, leg_left, leg_cof):
                    def mediate(u, v, _p=pobj, _l=leg_left, _c=leg_cof):
                        return mediate_by_search(cat, _p, _l, _c, u, v)

                    return PushoutResult(pobj, leg_left, leg_cof, mediate)
    return None


# -- concrete instances -----------------------------------------------------


def _pointed_obj(card):
    return f"P{card}"


def _pointed_mor(a, b, images):
    return f"p{a}.{b}:" + "".join(str(x) for x in images)


def _pointed_parse(mid):
    head, imgs = mid[1:].split(":")
    a, b = head.split(".")
    return int(a), int(b), tuple(int(ch) for ch in imgs)


def instance_pointed_sets(max_card):
    """Skeletal pointed sets {*, 1, .., k-1} for k <= max_card, all based maps.

    Cofibrations are the injective based maps, weak equivalences the
    bijections, and the chooser produces the canonical amalgam relabeled
    into the skeleton (partial: it declines when the amalgam needs more
    than max_card elements).
    """
    if max_card < 1:
        raise ValueError("max_card must be at least 1")
    if max_card > 9:
        raise ValueError("identifiers assume single-digit cardinalities")
    objs = [_pointed_obj(k) for k in range(1, max_card + 1)]
    mors = []
    images = {}
    for a in range(1, max_card + 1):
        for b in range(1, max_card + 1):
            for rest in iproduct(range(b), repeat=a - 1):
                imgs = (0,) + rest
                mid = _pointed_mor(a, b, imgs)
                mors.append((mid, _pointed_obj(a), _pointed_obj(b)))
                images[mid] = imgs

    def compose(gid, fid):
        fa, fb, fim = _pointed_parse(fid)
        ga, gb, gim = _pointed_parse(gid)
        return _pointed_mor(fa, gb, tuple(gim[x] for x in fim))

    def id_fn(o):
        k = int(o[1:])
        return _pointed_mor(k, k, tuple(range(k)))

    from .cats import category_from_parts

    cat = category_from_parts(objs, mors, compose, id_fn)
    cof = frozenset(m for m in images if len(set(images[m])) == len(images[m]))
    weq = frozenset(
        m for m in images if len(set(images[m])) == _pointed_parse(m)[1] == _pointed_parse(m)[0]
    )

    def chooser(W, f, g):
        # general amalgam: quotient of the disjoint union by f(a) ~ g(a);
        # correct for any span, with the relabeled skeleton as the object
        fa, fb, fim = _pointed_parse(f)
        ga, gc, gim = _pointed_parse(g)
        nodes = [("b", x) for x in range(fb)] + [("c", y) for y in range(gc)]
        parent = {nd: nd for nd in nodes}

        def find(nd):
            while parent[nd] != nd:
                parent[nd] = parent[parent[nd]]
                nd = parent[nd]
            return nd

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        union(("b", 0), ("c", 0))
        for x in range(fa):
            union(("b", fim[x]), ("c", gim[x]))
        labels = {}
        labels[find(("b", 0))] = 0
        for nd in nodes:
            root = find(nd)
            if root not in labels:
                labels[root] = len(labels)
        d = len(labels)
        if d > max_card:
            return None
        leg_left = _pointed_mor(fb, d, tuple(labels[find(("b", x))] for x in range(fb)))
        leg_cof = _pointed_mor(gc, d, tuple(labels[find(("c", y))] for y in range(gc)))
        rep_of = {}
        for nd in nodes:
            lab = labels[find(nd)]
            if lab not in rep_of:
                rep_of[lab] = nd

        def mediate(u, v):
            ua, ub, uim = _pointed_parse(u)
            va, vb, vim = _pointed_parse(v)
            if ub != vb:
                raise ValueError("cone legs must share a target")
            if tuple(uim[x] for x in fim) != tuple(vim[y] for y in gim):
                raise ValueError("not a cone over the span")
            wim = []
            for lab in range(d):
                side, elem = rep_of[lab]
                wim.append(uim[elem] if side == "b" else vim[elem])
            return _pointed_mor(d, ub, tuple(wim))

        return PushoutResult(_pointed_obj(d), leg_left, leg_cof, mediate)

    inst = WaldhausenInstance(f"pointed_sets<={max_card}", cat, "P1", cof, weq, chooser)
    inst.kind = ("pointed_sets", max_card)
    return inst


def _bits_to_matrix(a, b, bits):
    # b rows, a cols, row-major
    return [[int(bits[r * a + c]) for c in range(a)] for r in range(b)]


def _matrix_to_bits(mat):
    return "".join(str(x) for row in mat for x in row)


def _vect_mor(a, b, mat):
    return f"v{a}.{b}:" + _matrix_to_bits(mat)


def _vect_parse(mid):
    head, bits = mid[1:].split(":")
    a, b = (int(x) for x in head.split("."))
    return a, b, _bits_to_matrix(a, b, bits)


def _matmul2(gm, gb, fm, fb, fa):
    """Product of g (gb x fb) and f (fb x fa) over F2, dimension-aware."""
    return [
        [sum(gm[r][k] * fm[k][c] for k in range(fb)) % 2 for c in range(fa)]
        for r in range(gb)
    ]


def _rref2(rows):
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                rows[r] = [(x + y) % 2 for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    return rows[:rank], pivots


def instance_vect_f2(max_dim):
    """F2 vector spaces of dimension <= max_dim with all linear maps.

    Cofibrations = injective maps, weak equivalences = isomorphisms; the
    chooser computes the cokernel-style amalgam in reduced echelon form.
    """
    if not (0 <= max_dim <= 3):
        raise ValueError("max_dim must be between 0 and 3")
    objs = [f"V{d}" for d in range(max_dim + 1)]
    mors = []
    for a in range(max_dim + 1):
        for b in range(max_dim + 1):
            for bits in iproduct("01", repeat=a * b):
                mat = _bits_to_matrix(a, b, "".join(bits))
                mors.append((_vect_mor(a, b, mat), f"V{a}", f"V{b}"))

    def compose(gid, fid):
        fa, fb, fm = _vect_parse(fid)
        ga, gb, gm = _vect_parse(gid)
        return _vect_mor(fa, gb, _matmul2(gm, gb, fm, fb, fa))

    def id_fn(o):
        d = int(o[1:])
        return _vect_mor(d, d, [[1 if r == c else 0 for c in range(d)] for r in range(d)])

    from .cats import category_from_parts

    cat = category_from_parts(objs, mors, compose, id_fn)

    def rank_of(mid):
        a, b, m = _vect_parse(mid)
        cols = [[m[r][c] for r in range(b)] for c in range(a)]
        return len(_rref2(cols)[0]) if cols else 0

    cof = frozenset(m for m, _, _ in mors if rank_of(m) == _vect_parse(m)[0])
    weq = frozenset(
        m
        for m, _, _ in mors
        if _vect_parse(m)[0] == _vect_parse(m)[1] == rank_of(m)
    )

    def chooser(W, f, g):
        fa, fb, fm = _vect_parse(f)
        ga, gc, gm = _vect_parse(g)
        rel = []
        for i in range(fa):
            rel.append([fm[r][i] for r in range(fb)] + [gm[r][i] for r in range(gc)])
        R, pivots = _rref2(rel) if rel else ([], [])
        nonpivots = [j for j in range(fb + gc) if j not in pivots]
        d = len(nonpivots)
        if d > max_dim:
            return None

        def reduce_vec(vec):
            v = list(vec)
            for row, p in zip(R, pivots):
                if v[p]:
                    v = [(x + y) % 2 for x, y in zip(v, row)]
            return [v[j] for j in nonpivots]

        def basis_vec(j, n):
            return [1 if t == j else 0 for t in range(n)]

        cols_left = [reduce_vec(basis_vec(j, fb + gc)) for j in range(fb)]
        cols_cof = [reduce_vec(basis_vec(fb + j, fb + gc)) for j in range(gc)]
        leg_left = _vect_mor(fb, d, [[cols_left[c][r] for c in range(fb)] for r in range(d)])
        leg_cof = _vect_mor(gc, d, [[cols_cof[c][r] for c in range(gc)] for r in range(d)])

        def mediate(u, v):
            ua, ub, um = _vect_parse(u)
            va, vb, vm = _vect_parse(v)
            if ub != vb:
                raise ValueError("cone legs must share a target")
            if _matmul2(um, ub, fm, fb, fa) != _matmul2(vm, vb, gm, gc, ga):
                raise ValueError("not a cone over the span")
            uv_cols = [[um[r][c] for r in range(ub)] for c in range(ua)] + [
                [vm[r][c] for r in range(vb)] for c in range(va)
            ]
            wcols = [uv_cols[j] for j in nonpivots]
            return _vect_mor(d, ub, [[wcols[c][r] for c in range(d)] for r in range(ub)])

        return PushoutResult(f"V{d}", leg_left, leg_cof, mediate)

    inst = WaldhausenInstance(f"vect_f2<={max_dim}", cat, "V0", cof, weq, chooser)
    inst.kind = ("vect_f2", max_dim)
    return inst


def ambient_instance(W):
    """An extension of a builtin instance with room for homotopy pushouts.

    The deformation homotopy forms amalgams of size up to quotient size
    plus subobject-row size; the extension holds them while agreeing with
    the original chooser wherever both are defined.
    """
    kind = getattr(W, "kind", None)
    if kind is None:
        return W
    name, size = kind
    if name == "pointed_sets":
        return instance_pointed_sets(min(2 * size - 1, 9))
    if name == "vect_f2":
        need = 2 * size
        if need > 3:
            raise BudgetExceeded(
                f"vect_f2 fibers need dimension {need}, above the supported cap"
            )
        return instance_vect_f2(need)
    return W


def load_instance(descriptor):
    """Instance descriptors as used in configs: {"instance": ..., "size": k}."""
    kind = descriptor["instance"]
    size = descriptor["size"]
    if kind == "pointed_sets":
        return instance_pointed_sets(size)
    if kind == "vect_f2":
        return instance_vect_f2(size)
    raise ValueError(f"unknown instance {kind!r}")


# -- axiom verification ------------------------------------------------------


def cofibration_spans(W):
    cat = W.cat
    out = []
    for g in sorted(W.cofibrations):
        a = cat.src[g]
        for f in cat.morphisms:
            if cat.src[f] == a:
                out.append((f, g))
    return out


def verify_axioms(W, check_gluing=True, span_budget=None):
    """Exhaustive check of the four axiom families on a finite instance.

    Spans whose chosen pushout is out of range are counted as skipped, not
    failed: the instance is a finite truncation and existence holds in the
    ambient (untruncated) category.
    """
    cat = W.cat
    clauses = {}
    bad = []

    # zero object
    zero_bad = []
    for obj in cat.objects:
        if len(cat.hom(W.zero, obj)) != 1:
            zero_bad.append(f"Hom(*,{obj}) not a point")
        if len(cat.hom(obj, W.zero)) != 1:
            zero_bad.append(f"Hom({obj},*) not a point")
    clauses["zero_object"] = {"pass": not zero_bad, "witness": zero_bad[:3]}

    # isomorphisms are cofibrations and weak equivalences; both classes
    # contain identities and are closed under composition
    sub_bad = []
    for m in cat.morphisms:
        if cat.is_iso(m):
            if m not in W.cofibrations:
                sub_bad.append(f"iso {m} not a cofibration")
            if m not in W.weqs:
                sub_bad.append(f"iso {m} not a weak equivalence")
    for cls_name, cls in (("cof", W.cofibrations), ("weq", W.weqs)):
        for g in cls:
            for f in cls:
                if cat.tgt[f] == cat.src[g] and cat.compose(g, f) not in cls:
                    sub_bad.append(f"{cls_name} not closed under composition at ({g},{f})")
    clauses["isos_and_closure"] = {"pass": not sub_bad, "witness": sub_bad[:3]}

    # the unique map * -> A is a cofibration
    init_bad = []
    for obj in cat.objects:
        try:
            if W.zero_to(obj) not in W.cofibrations:
                init_bad.append(f"* -> {obj} not a cofibration")
        except CertificationError as err:
            init_bad.append(str(err))
    clauses["zero_sections_cofibrations"] = {"pass": not init_bad, "witness": init_bad[:3]}

    # pushouts along cofibrations: chooser universal, far leg a cofibration
    spans = cofibration_spans(W)
    if span_budget is not None and len(spans) > span_budget:
        raise BudgetExceeded(f"{len(spans)} spans exceed budget {span_budget}")
    po_bad = []
    skipped = 0
    available = {}
    for f, g in spans:
        po = W.pushout(f, g)
        if po is None:
            skipped += 1
            continue
        available[(f, g)] = po
        if not is_pushout(cat, f, g, po.obj, po.from_left, po.from_cof):
            po_bad.append(f"chooser output for ({f},{g}) is not a pushout")
        elif po.from_left not in W.cofibrations:
            po_bad.append(f"far leg of ({f},{g}) not a cofibration")
    clauses["pushouts"] = {
        "pass": not po_bad,
        "witness": po_bad[:3],
        "checked": len(available),
        "skipped_out_of_range": skipped,
    }

    # gluing lemma: weak equivalences of spans induce weak equivalences
    if check_gluing:
        glue_bad = []
        checked = 0
        span_list = sorted(available)
        by_src = {}
        for fg in span_list:
            f, g = fg
            key = (cat.src[f],)
            by_src.setdefault(key, []).append(fg)
        for f1, g1 in span_list:
            a1, b1, c1 = cat.src[f1], cat.tgt[f1], cat.tgt[g1]
            for f2, g2 in span_list:
                a2, b2, c2 = cat.src[f2], cat.tgt[f2], cat.tgt[g2]
                for wa in cat.hom(a1, a2):
                    if wa not in W.weqs:
                        continue
                    for wb in cat.hom(b1, b2):
                        if wb not in W.weqs:
                            continue
                        if cat.compose(wb, f1) != cat.compose(f2, wa):
                            continue
                        for wc in cat.hom(c1, c2):
                            if wc not in W.weqs:
                                continue
                            if cat.compose(wc, g1) != cat.compose(g2, wa):
                                continue
                            po1 = available[(f1, g1)]
                            po2 = available[(f2, g2)]
                            induced = po1.mediate(
                                cat.compose(po2.from_left, wb),
                                cat.compose(po2.from_cof, wc),
                            )
                            checked += 1
                            if induced not in W.weqs:
                                glue_bad.append(
                                    f"gluing fails for spans ({f1},{g1})->({f2},{g2})"
                                )
        clauses["gluing"] = {"pass": not glue_bad, "witness": glue_bad[:3], "checked": checked}

    ok = all(c["pass"] for c in clauses.values())
    return {"ok": ok, "clauses": clauses}


def canonical_pushout(W, span):
    """The chosen pushout of a span (f: A -> B, g: A >-> C).

    Returns the PushoutResult; raises when the chooser declines (caller
    decides whether that is an error or a skip).
    """
    f, g = span
    if not W.is_cof(g):
        raise ValueError("second span leg must be a cofibration")
    po = W.pushout(f, g)
    if po is None:
        raise BudgetExceeded(f"pushout of ({f},{g}) falls outside the instance")
    return po


def verify_pushout_functoriality(W, limit=2000):
    """Induced squares commute for every enumerated map of spans."""
    cat = W.cat
    spans = [s for s in cofibration_spans(W) if W.pushout(*s) is not None]
    bad = []
    checked = 0
    for f1, g1 in spans:
        po1 = W.pushout(f1, g1)
        for f2, g2 in spans:
            po2 = W.pushout(f2, g2)
            a1, b1, c1 = cat.src[f1], cat.tgt[f1], cat.tgt[g1]
            a2, b2, c2 = cat.src[f2], cat.tgt[f2], cat.tgt[g2]
            for wa in cat.hom(a1, a2):
                for wb in cat.hom(b1, b2):
                    if cat.compose(wb, f1) != cat.compose(f2, wa):
                        continue
                    for wc in cat.hom(c1, c2):
                        if cat.compose(wc, g1) != cat.compose(g2, wa):
                            continue
                        checked += 1
                        if checked > limit:
                            return {"ok": not bad, "checked": checked, "witness": bad[:3],
                                    "truncated": True}
                        w = po1.mediate(
                            cat.compose(po2.from_left, wb),
                            cat.compose(po2.from_cof, wc),
                        )
                        if cat.compose(w, po1.from_left) != cat.compose(po2.from_left, wb):
                            bad.append(f"square fails on ({f1},{g1})->({f2},{g2})")
                        if cat.compose(w, po1.from_cof) != cat.compose(po2.from_cof, wc):
                            bad.append(f"square fails on ({f1},{g1})->({f2},{g2})")
    return {"ok": not bad, "checked": checked, "witness": bad[:3], "truncated": False}


def verify_exact_functor(F, W_src, W_tgt):
    """Zero, predicate preservation, and pushout-square preservation."""
    clauses = {}
    rep = F.validate()
    clauses["functor_valid"] = {"pass": rep["ok"], "witness": rep["violations"][:3]}
    clauses["zero_preserved"] = {
        "pass": F.on_obj(W_src.zero) == W_tgt.zero,
        "witness": [] if F.on_obj(W_src.zero) == W_tgt.zero else [F.on_obj(W_src.zero)],
    }
    bad_cof = [m for m in W_src.cofibrations if F.on_mor(m) not in W_tgt.cofibrations]
    clauses["cofibrations_preserved"] = {"pass": not bad_cof, "witness": bad_cof[:3]}
    bad_weq = [m for m in W_src.weqs if F.on_mor(m) not in W_tgt.weqs]
    clauses["weqs_preserved"] = {"pass": not bad_weq, "witness": bad_weq[:3]}
    bad_po = []
    checked = 0
    for f, g in cofibration_spans(W_src):
        po = W_src.pushout(f, g)
        if po is None:
            continue
        checked += 1
        if not is_pushout(
            W_tgt.cat,
            F.on_mor(f),
            F.on_mor(g),
            F.on_obj(po.obj),
            F.on_mor(po.from_left),
            F.on_mor(po.from_cof),
        ):
            bad_po.append(f"image of pushout ({f},{g}) not a pushout")
            if len(bad_po) >= 3:
                break
    clauses["pushouts_preserved"] = {"pass": not bad_po, "witness": bad_po, "checked": checked}
    return {"ok": all(c["pass"] for c in clauses.values()), "clauses": clauses}


# -- K0 ----------------------------------------------------------------------


class K0Presentation:
    def __init__(self, generators, relations, torsion, free_rank):
        self.generators = tuple(generators)
        self.relations = [dict(r) for r in relations]
        self.torsion = list(torsion)
        self.free_rank = free_rank
        self.note = K0_NOTE

    @property
    def signature(self):
        return group_signature(self.torsion, self.free_rank)

    def to_json(self):
        return {
            "note": self.note,
            "generators": list(self.generators),
            "relation_count": len(self.relations),
            "invariant_factors": self.signature,
        }

    def __repr__(self):
        return f"K0Presentation({self.signature})"


def k0(W):
    """Presentation of K0 from cofiber sequences and weak equivalences."""
    gens = list(W.cat.objects)
    idx = {o: i for i, o in enumerate(gens)}
    relations = []
    for m in sorted(W.cofibrations):
        a, c = W.cat.src[m], W.cat.tgt[m]
        for b, _q in W.quotient_completions(m):
            row = {}
            for o, coeff in ((c, 1), (a, -1), (b, -1)):
                row[o] = row.get(o, 0) + coeff
            relations.append(row)
    for m in sorted(W.weqs):
        row = {}
        for o, coeff in ((W.cat.src[m], 1), (W.cat.tgt[m], -1)):
            row[o] = row.get(o, 0) + coeff
        relations.append(row)
    triplets = []
    for r, row in enumerate(relations):
        for o, coeff in row.items():
            if coeff:
                triplets.append((r, idx[o], coeff))
    torsion, free = cokernel_invariants(triplets, len(relations), len(gens))
    return K0Presentation(gens, relations, torsion, free)


def k0_direct_sum_signature(*presentations):
    """Invariant factors of the direct sum of presented groups."""
    gens = []
    rows = []
    offset = 0
    for p in presentations:
        gens.extend((offset, g) for g in p.generators)
        index = {g: i for i, g in enumerate(p.generators)}
        for row in p.relations:
            rows.append({index[g] + offset: c for g, c in row.items()})
        offset += len(p.generators)
    triplets = []
    for r, row in enumerate(rows):
        for j, c in row.items():
            if c:
                triplets.append((r, j, c))
    torsion, free = cokernel_invariants(triplets, len(rows), offset)
    return group_signature(torsion, free)


# -- sub-Waldhausen structures and split-exact sequences ----------------------


def sub_waldhausen_instance(W, objects, label=None):
    """Full subcategory with the inherited (sub-Waldhausen) structure.

    Cofibrations are ambient cofibrations between kept objects whose
    quotient is isomorphic to a kept object; weak equivalences restrict.
    The chooser searches within the subcategory.
    """
    objects = sorted(objects)
    if W.zero not in objects:
        raise ValueError("subcategory must contain the zero object")
    cat = full_subcategory(W.cat, objects)
    kept = set(objects)
    cof = set()
    for m in cat.morphisms:
        if m not in W.cofibrations:
            continue
        for b, _q in W.quotient_completions(m):
            if any(W.cat.isos_between(b, o) for o in kept):
                cof.add(m)
                break
    weq = frozenset(m for m in cat.morphisms if m in W.weqs)
    sub = WaldhausenInstance(
        label or f"{W.label}|sub", cat, W.zero, frozenset(cof), weq, searched_pushout
    )
    return sub


def verify_sub_waldhausen(W_sub, W_amb):
    """The inclusion is exact and cofibrations satisfy the subcategory rule."""
    clauses = {}
    ok_objs = set(W_sub.cat.objects) <= set(W_amb.cat.objects)
    ok_mors = set(W_sub.cat.morphisms) <= set(W_amb.cat.morphisms)
    clauses["inclusion"] = {"pass": ok_objs and ok_mors and W_sub.zero == W_amb.zero,
                            "witness": []}
    incl = FunctorData(
        W_sub.cat,
        W_amb.cat,
        {o: o for o in W_sub.cat.objects},
        {m: m for m in W_sub.cat.morphisms},
    )
    rep = verify_exact_functor(incl, W_sub, W_amb)
    clauses["inclusion_exact"] = {"pass": rep["ok"], "witness": [rep["clauses"]] if not rep["ok"] else []}
    rule_bad = []
    kept = set(W_sub.cat.objects)
    for m in W_sub.cat.morphisms:
        if m in W_amb.cofibrations:
            has_quot = any(
                any(W_amb.cat.isos_between(b, o) for o in kept)
                for b, _ in W_amb.quotient_completions(m)
            )
            if has_quot and m not in W_sub.cofibrations:
                rule_bad.append(m)
    clauses["cofibration_rule"] = {"pass": not rule_bad, "witness": rule_bad[:3]}
    return {"ok": all(c["pass"] for c in clauses.values()), "clauses": clauses}


class SplitExactSequenceData:
    """A split-exact sequence with its four functors and (co)units."""

    def __init__(self, A, E, B, i, f, j, g, unit_A, counit_B, counit_E, unit_E):
        self.A = A
        self.E = E
        self.B = B
        self.i = i  # A -> E
        self.f = f  # E -> B
        self.j = j  # E -> A, right adjoint to i
        self.g = g  # B -> E, right adjoint to f
        self.unit_A = unit_A  # Id_A -> j i (natural isomorphism)
        self.counit_B = counit_B  # f g -> Id_B (natural isomorphism)
        self.counit_E = counit_E  # i j -> Id_E
        self.unit_E = unit_E  # Id_E -> g f


def quotient_complement_objects(S):
    """Objects E with Hom(i(A), E) a point for every A (the E/A subcategory)."""
    E = S.E.cat
    out = []
    for e in E.objects:
        if all(len(E.hom(S.i.on_obj(a), e)) == 1 for a in S.A.cat.objects):
            out.append(e)
    return out


def verify_split_exact(S):
    """Every clause of split-exactness, reported separately."""
    clauses = {}
    E = S.E.cat

    fi_bad = []
    for a in S.A.cat.objects:
        if S.f.on_obj(S.i.on_obj(a)) != S.B.zero:
            fi_bad.append(a)
    for m in S.A.cat.morphisms:
        if S.f.on_mor(S.i.on_mor(m)) != S.B.cat.id_of(S.B.zero):
            fi_bad.append(m)
    clauses["f_after_i_is_zero"] = {"pass": not fi_bad, "witness": fi_bad[:3]}

    ff_bad = []
    for a in S.A.cat.objects:
        for b in S.A.cat.objects:
            seen = {}
            for m in S.A.cat.hom(a, b):
                seen[S.i.on_mor(m)] = m
            if set(seen) != set(E.hom(S.i.on_obj(a), S.i.on_obj(b))):
                ff_bad.append((a, b))
    clauses["i_fully_faithful"] = {"pass": not ff_bad, "witness": ff_bad[:3]}

    ea_objects = quotient_complement_objects(S)
    ea_cat = full_subcategory(E, ea_objects)
    restricted = FunctorData(
        ea_cat,
        S.B.cat,
        {o: S.f.on_obj(o) for o in ea_cat.objects},
        {m: S.f.on_mor(m) for m in ea_cat.morphisms},
    )
    eq_rep = check_equivalence_of_categories(restricted)
    clauses["f_restricted_equivalence"] = {
        "pass": eq_rep["ok"],
        "witness": eq_rep["witnesses"][:3],
        "quotient_objects": ea_objects,
    }

    clauses["unit_A_natural_iso"] = {"pass": S.unit_A.is_natural_iso(), "witness": []}
    clauses["counit_B_natural_iso"] = {"pass": S.counit_B.is_natural_iso(), "witness": []}
    clauses["counit_E_natural"] = {"pass": S.counit_E.validate()["ok"], "witness": []}
    clauses["unit_E_natural"] = {"pass": S.unit_E.validate()["ok"], "witness": []}

    # triangle identities for i -| j
    tri_bad = []
    for a in S.A.cat.objects:
        lhs = E.compose(S.counit_E.components[S.i.on_obj(a)], S.i.on_mor(S.unit_A.components[a]))
        if lhs != E.id_of(S.i.on_obj(a)):
            tri_bad.append(f"counit_iA . i(unit_A) != id at {a}")
    for e in E.objects:
        lhs = S.A.cat.compose(S.j.on_mor(S.counit_E.components[e]), S.unit_A.components[S.j.on_obj(e)])
        if lhs != S.A.cat.id_of(S.j.on_obj(e)):
            tri_bad.append(f"j(counit_E) . unit_jE != id at {e}")
    clauses["i_j_triangle_identities"] = {"pass": not tri_bad, "witness": tri_bad[:3]}

    # triangle identities for f -| g
    tri2_bad = []
    for e in E.objects:
        lhs = S.B.cat.compose(S.counit_B.components[S.f.on_obj(e)], S.f.on_mor(S.unit_E.components[e]))
        if lhs != S.B.cat.id_of(S.f.on_obj(e)):
            tri2_bad.append(f"counit_fE . f(unit_E) != id at {e}")
    for b in S.B.cat.objects:
        lhs = E.compose(S.g.on_mor(S.counit_B.components[b]), S.unit_E.components[S.g.on_obj(b)])
        if lhs != E.id_of(S.g.on_obj(b)):
            tri2_bad.append(f"g(counit_B) . unit_gB != id at {b}")
    clauses["f_g_triangle_identities"] = {"pass": not tri2_bad, "witness": tri2_bad[:3]}

    g_bad = [b for b in S.B.cat.objects if S.g.on_obj(b) not in ea_objects]
    clauses["g_lands_in_quotient_subcategory"] = {"pass": not g_bad, "witness": g_bad[:3]}

    jg_bad = []
    for b in S.B.cat.objects:
        jg = S.j.on_obj(S.g.on_obj(b))
        if not S.A.cat.isos_between(jg, S.A.zero):
            jg_bad.append(b)
    clauses["j_after_g_isomorphic_to_zero"] = {"pass": not jg_bad, "witness": jg_bad[:3]}

    for nm, F, src, tgt in (
        ("i", S.i, S.A, S.E),
        ("f", S.f, S.E, S.B),
        ("j", S.j, S.E, S.A),
        ("g", S.g, S.B, S.E),
    ):
        rep = verify_exact_functor(F, src, tgt)
        clauses[f"{nm}_exact"] = {"pass": rep["ok"],
                                  "witness": [] if rep["ok"] else [rep["clauses"]]}

    return {"ok": all(c["pass"] for c in clauses.values()), "clauses": clauses}


def build_universal_sequence(A, C, B):
    """The split-exact sequence through the cofiber-sequence category.

    ``A`` and ``B`` must be sub-Waldhausen instances of ``C``; the middle
    term is the category of cofiber sequences with subobject in A and
    quotient in B, together with the four functors and their (co)units.
    """
    for sub in (A, B):
        rep = verify_sub_waldhausen(sub, C)
        if not rep["ok"]:
            raise ValueError(f"sub-Waldhausen condition fails: {rep['clauses']}")
    from .sconstruction import ECat, e_category

    EW = e_category(A, C, B)
    E = EW.cat

    def eobj(a, colA, c, colQ, b):
        return enc([a, colA, c, colQ, b])

    i_obj = {a: eobj(a, A.cat.id_of(a), a, C.to_zero(a), C.zero) for a in A.cat.objects}
    g_obj = {b: eobj(C.zero, C.zero_to(b), b, B.cat.id_of(b), b) for b in B.cat.objects}
    i = FunctorData(
        A.cat,
        E,
        i_obj,
        {
            m: ECat.emor_id(
                i_obj[A.cat.src[m]], i_obj[A.cat.tgt[m]], m, m, C.cat.id_of(C.zero)
            )
            for m in A.cat.morphisms
        },
    )
    g = FunctorData(
        B.cat,
        E,
        g_obj,
        {
            m: ECat.emor_id(
                g_obj[B.cat.src[m]], g_obj[B.cat.tgt[m]], C.cat.id_of(C.zero), m, m
            )
            for m in B.cat.morphisms
        },
    )
    # j = subobject projection, f = quotient projection
    j_obj = {}
    f_obj = {}
    for e in E.objects:
        a, colA, c, colQ, b = json.loads(e)
        j_obj[e] = a
        f_obj[e] = b
    j_mor = {}
    f_mor = {}
    for m in E.morphisms:
        fa, fc, fb = EW.emor_parts(m)
        j_mor[m] = fa
        f_mor[m] = fb
    j = FunctorData(E, A.cat, j_obj, j_mor)
    f = FunctorData(E, B.cat, f_obj, f_mor)

    unit_A = NaturalTransformationData(
        FunctorData.identity(A.cat), j.compose_with(i),
        {a: A.cat.id_of(a) for a in A.cat.objects},
    )
    counit_B = NaturalTransformationData(
        f.compose_with(g), FunctorData.identity(B.cat),
        {b: B.cat.id_of(b) for b in B.cat.objects},
    )
    counit_E_components = {}
    unit_E_components = {}
    for e in E.objects:
        a, colA, c, colQ, b = json.loads(e)
        counit_E_components[e] = ECat.emor_id(
            i_obj[a], e, A.cat.id_of(a), colA, C.zero_to(b)
        )
        unit_E_components[e] = ECat.emor_id(
            e, g_obj[b], C.to_zero(a), colQ, B.cat.id_of(b)
        )
    counit_E = NaturalTransformationData(
        i.compose_with(j), FunctorData.identity(E), counit_E_components
    )
    unit_E = NaturalTransformationData(
        FunctorData.identity(E), g.compose_with(f), unit_E_components
    )
    return SplitExactSequenceData(
        A, EW, B, i, f, j, g, unit_A, counit_B, counit_E, unit_E
    )


def check_waldhausen_equivalence(F, W_src, W_tgt):
    """Certify an exact functor as an equivalence of Waldhausen structures.

    Checks exactness, reflection of cofibrations and weak equivalences,
    and equivalence of underlying categories; then constructs an inverse
    (pinned to send zero to zero) and re-runs the exactness verifier on it.
    """
    clauses = {}
    rep = verify_exact_functor(F, W_src, W_tgt)
    clauses["exact"] = {"pass": rep["ok"], "witness": [] if rep["ok"] else [rep["clauses"]]}
    refl_cof = [
        m for m in W_src.cat.morphisms
        if F.on_mor(m) in W_tgt.cofibrations and m not in W_src.cofibrations
    ]
    clauses["reflects_cofibrations"] = {"pass": not refl_cof, "witness": refl_cof[:3]}
    refl_weq = [
        m for m in W_src.cat.morphisms
        if F.on_mor(m) in W_tgt.weqs and m not in W_src.weqs
    ]
    clauses["reflects_weqs"] = {"pass": not refl_weq, "witness": refl_weq[:3]}
    eq = check_equivalence_of_categories(F, prefer={W_tgt.zero: W_src.zero})
    clauses["equivalence_of_categories"] = {
        "pass": eq["ok"],
        "witness": eq["witnesses"][:3],
    }
    inverse = None
    if eq["ok"]:
        G = eq["inverse_witness"]["inverse"]
        grep = verify_exact_functor(G, W_tgt, W_src)
        clauses["inverse_exact"] = {
            "pass": grep["ok"],
            "witness": [] if grep["ok"] else [grep["clauses"]],
        }
        inverse = eq["inverse_witness"]
    else:
        clauses["inverse_exact"] = {"pass": False, "witness": ["no inverse constructed"]}
    return {
        "ok": all(c["pass"] for c in clauses.values()),
        "clauses": clauses,
        "inverse_witness": inverse,
    }


def phi_comparison(S):
    """The comparison of a split-exact sequence with its universal model.

    Gates the three hypotheses first (each checked, never assumed), then
    builds Phi(E) = (ij(E) >-> E ->> gf(E)) into the cofiber-sequence
    category over the essential images, re-certifies each value, and
    certifies Phi as a Waldhausen equivalence with strict middle-projection
    retraction.  Returns (Phi-or-None, report).
    """
    from .sconstruction import ECat, e_category, e_projections

    E = S.E
    Ecat = E.cat
    report = {"hypotheses": {}}

    bad1 = [e for e in Ecat.objects if S.counit_E.components[e] not in E.cofibrations]
    report["hypotheses"]["counit_components_cofibrations"] = {
        "pass": not bad1, "witness": bad1[:3],
    }

    # the induced-map hypothesis is quantified over the cofibrations of E:
    # that is the instance the comparison's exactness consumes, and the
    # all-morphisms form is false already for pointed sets (collapse maps)
    if bad1:
        report["hypotheses"]["induced_maps_cofibrations"] = {
            "pass": False, "witness": ["not evaluated: counit gate failed"],
        }
    else:
        bad2 = []
        skipped2 = 0
        for mu in sorted(E.cofibrations):
            e1, e2 = Ecat.src[mu], Ecat.tgt[mu]
            ij_mu = S.i.on_mor(S.j.on_mor(mu))
            po = E.pushout(ij_mu, S.counit_E.components[e1])
            if po is None:
                skipped2 += 1
                continue
            induced = po.mediate(S.counit_E.components[e2], mu)
            if induced not in E.cofibrations:
                bad2.append(mu)
                if len(bad2) >= 3:
                    break
        report["hypotheses"]["induced_maps_cofibrations"] = {
            "pass": not bad2, "witness": bad2[:3], "skipped_out_of_range": skipped2,
        }

    bad3 = []
    for m in sorted(S.A.cofibrations):
        for b, _q in S.A.quotient_completions(m):
            if b == S.A.zero and not S.A.cat.is_iso(m):
                bad3.append(m)
    report["hypotheses"]["zero_quotient_sequences_isos"] = {
        "pass": not bad3, "witness": bad3[:3],
    }

    if not all(h["pass"] for h in report["hypotheses"].values()):
        report["ok"] = False
        return None, report

    # essential images of i and g inside E, with transported structure
    a_image = set()
    for a in S.A.cat.objects:
        ia = S.i.on_obj(a)
        for e in Ecat.objects:
            if Ecat.isos_between(ia, e):
                a_image.add(e)
    b_image = set()
    for b in S.B.cat.objects:
        gb = S.g.on_obj(b)
        for e in Ecat.objects:
            if Ecat.isos_between(gb, e):
                b_image.add(e)
    A_w = sub_waldhausen_instance(E, a_image, label="essential image of subobjects")
    B_w = sub_waldhausen_instance(E, b_image, label="essential image of quotients")
    T_W = e_category(A_w, E, B_w)

    phi_obj = {}
    cert_bad = []
    for e in Ecat.objects:
        ij_e = S.i.on_obj(S.j.on_obj(e))
        gf_e = S.g.on_obj(S.f.on_obj(e))
        te = enc([ij_e, S.counit_E.components[e], e, S.unit_E.components[e], gf_e])
        if te not in T_W.parts:
            cert_bad.append(e)
        phi_obj[e] = te
    report["phi_values_certified"] = {"pass": not cert_bad, "witness": cert_bad[:3]}
    if cert_bad:
        report["ok"] = False
        return None, report

    phi_mor = {}
    for mu in Ecat.morphisms:
        e1, e2 = Ecat.src[mu], Ecat.tgt[mu]
        phi_mor[mu] = ECat.emor_id(
            phi_obj[e1], phi_obj[e2],
            S.i.on_mor(S.j.on_mor(mu)), mu, S.g.on_mor(S.f.on_mor(mu)),
        )
    Phi = FunctorData(Ecat, T_W.cat, phi_obj, phi_mor)
    rep = Phi.validate()
    report["phi_functor_valid"] = {"pass": rep["ok"], "witness": rep["violations"][:3]}

    _, Psi, _ = e_projections(T_W)
    psi_phi_id = all(Psi.on_obj(phi_obj[e]) == e for e in Ecat.objects) and all(
        Psi.on_mor(phi_mor[mu]) == mu for mu in Ecat.morphisms
    )
    report["psi_after_phi_is_identity"] = {"pass": psi_phi_id, "witness": []}

    wrep = check_waldhausen_equivalence(Phi, E, T_W)
    report["waldhausen_equivalence"] = {
        "pass": wrep["ok"],
        "clauses": {k: v["pass"] for k, v in wrep["clauses"].items()},
    }
    report["ok"] = all([
        rep["ok"], psi_phi_id, wrep["ok"],
        report["phi_values_certified"]["pass"],
    ])
    return Phi, report
