"""Finite categories, functors, natural transformations, nerve and tau1.

Categories are stored skeletally where the instance builders permit it,
with string identifiers for objects and morphisms and a total composition
table on composable pairs.  Everything is immutable after construction and
the validators are exhaustive, which is affordable at desk scale.
"""

from __future__ import annotations

import json
from itertools import product as iproduct

from .simplicial import TruncatedSimplicialSet, enc


class Tau1Error(Exception):
    """Raised when the path congruence cannot be closed within bounds."""


class FiniteCategory:
    def __init__(self, objects, morphisms, src, tgt, identity, comp):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.identity = dict(identity)
        self.comp_table = dict(comp)  # (g, f) -> g after f
        self._hom = {}
        for m in self.morphisms:
            self._hom.setdefault((self.src[m], self.tgt[m]), []).append(m)
        for k in self._hom:
            self._hom[k].sort()

    def hom(self, a, b):
        return tuple(self._hom.get((a, b), ()))

    def compose(self, g, f):
        """g after f; f: a -> b and g: b -> c give a -> c."""
        return self.comp_table[(g, f)]

    def id_of(self, obj):
        return self.identity[obj]

    def is_identity(self, m):
        return self.identity.get(self.src[m]) == m

    def validate(self):
        bad = []

        def note(msg):
            if len(bad) < 5:
                bad.append(msg)

        for obj in self.objects:
            i = self.identity.get(obj)
            if i is None or self.src.get(i) != obj or self.tgt.get(i) != obj:
                note(f"identity of {obj} missing or mistyped")
        for m in self.morphisms:
            if self.src[m] not in self.objects or self.tgt[m] not in self.objects:
                note(f"morphism {m} has unknown endpoints")
        for g in self.morphisms:
            for f in self.morphisms:
                if self.tgt[f] != self.src[g]:
                    if (g, f) in self.comp_table:
                        note(f"composite defined on non-composable ({g},{f})")
                    continue
                gf = self.comp_table.get((g, f))
                if gf is None:
                    note(f"missing composite ({g},{f})")
                    continue
                if self.src[gf] != self.src[f] or self.tgt[gf] != self.tgt[g]:
                    note(f"composite ({g},{f}) mistyped")
        for m in self.morphisms:
            if self.comp_table.get((m, self.identity[self.src[m]])) != m:
                note(f"right unit fails for {m}")
            if self.comp_table.get((self.identity[self.tgt[m]], m)) != m:
                note(f"left unit fails for {m}")
        for h in self.morphisms:
            for g in self.morphisms:
                if self.tgt[g] != self.src[h]:
                    continue
                for f in self.morphisms:
                    if self.tgt[f] != self.src[g]:
                        continue
                    if self.compose(self.compose(h, g), f) != self.compose(
                        h, self.compose(g, f)
                    ):
                        note(f"associativity fails on ({h},{g},{f})")
        return {"ok": not bad, "violations": bad}

    def is_iso(self, m):
        a, b = self.src[m], self.tgt[m]
        for n in self.hom(b, a):
            if (
                self.compose(n, m) == self.identity[a]
                and self.compose(m, n) == self.identity[b]
            ):
                return True
        return False

    def inverse_of(self, m):
        a, b = self.src[m], self.tgt[m]
        for n in self.hom(b, a):
            if (
                self.compose(n, m) == self.identity[a]
                and self.compose(m, n) == self.identity[b]
            ):
                return n
        return None

    def isos_between(self, a, b):
        return tuple(m for m in self.hom(a, b) if self.is_iso(m))

    def to_json(self):
        return {
            "objects": list(self.objects),
            "morphisms": [
                {"id": m, "src": self.src[m], "tgt": self.tgt[m]}
                for m in self.morphisms
            ],
            "identities": dict(sorted(self.identity.items())),
            "composition": sorted([g, f, gf] for (g, f), gf in self.comp_table.items()),
        }

    @staticmethod
    def from_json(doc):
        src = {m["id"]: m["src"] for m in doc["morphisms"]}
        tgt = {m["id"]: m["tgt"] for m in doc["morphisms"]}
        comp = {(g, f): gf for g, f, gf in doc["composition"]}
        return FiniteCategory(
            doc["objects"], [m["id"] for m in doc["morphisms"]],
            src, tgt, doc["identities"], comp,
        )

    def __repr__(self):
        return f"FiniteCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def category_from_parts(objects, mor_specs, compose_fn, id_fn):
    """Build a FiniteCategory from morphism specs and a composition rule.

    ``mor_specs``: iterable of (id, src, tgt); ``compose_fn(g, f) -> id``;
    ``id_fn(obj) -> id``.  The table is materialized eagerly.
    """
    objects = sorted(objects)
    mors = sorted(m[0] for m in mor_specs)
    src = {m: s for m, s, _ in mor_specs}
    tgt = {m: t for m, _, t in mor_specs}
    identity = {o: id_fn(o) for o in objects}
    comp = {}
    for g in mors:
        for f in mors:
            if tgt[f] == src[g]:
                comp[(g, f)] = compose_fn(g, f)
    return FiniteCategory(objects, mors, src, tgt, identity, comp)


def poset_category(elements, leq):
    """The category of a finite poset: one morphism per related pair."""
    elements = sorted(elements, key=enc)
    mors = []
    for a in elements:
        for b in elements:
            if leq(a, b):
                mors.append((enc([a, b]), enc(a), enc(b)))

    def compose(g, f):
        a, _ = json.loads(f)
        _, c = json.loads(g)
        return enc([a, c])

    return category_from_parts(
        [enc(a) for a in elements], mors, compose, lambda o: enc([json.loads(o), json.loads(o)])
    )


def chain_category(n):
    """The poset [n] as a category."""
    return poset_category(list(range(n + 1)), lambda a, b: a <= b)


def terminal_category():
    return chain_category(0)


def contractible_groupoid(n):
    """Objects 0..n with a unique isomorphism between any two."""
    objs = [str(i) for i in range(n + 1)]
    mors = [(enc([a, b]), a, b) for a in objs for b in objs]

    def compose(g, f):
        a, _ = json.loads(f)
        _, c = json.loads(g)
        return enc([a, c])

    return category_from_parts(objs, mors, compose, lambda o: enc([o, o]))


class FunctorData:
    def __init__(self, source, target, object_map, morphism_map):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.morphism_map = dict(morphism_map)

    def on_obj(self, o):
        return self.object_map[o]

    def on_mor(self, m):
        return self.morphism_map[m]

    def validate(self):
        bad = []
        C, D = self.source, self.target
        for o in C.objects:
            fo = self.object_map.get(o)
            if fo not in D.objects:
                bad.append(f"object {o} has no valid image")
                return {"ok": False, "violations": bad}
            if self.morphism_map.get(C.id_of(o)) != D.id_of(fo):
                bad.append(f"identity of {o} not preserved")
        for m in C.morphisms:
            fm = self.morphism_map.get(m)
            if fm not in D.morphisms:
                bad.append(f"morphism {m} has no valid image")
                return {"ok": False, "violations": bad}
            if D.src[fm] != self.object_map[C.src[m]] or D.tgt[fm] != self.object_map[C.tgt[m]]:
                bad.append(f"morphism {m} image mistyped")
        for g in C.morphisms:
            for f in C.morphisms:
                if C.tgt[f] == C.src[g]:
                    if self.morphism_map[C.compose(g, f)] != D.compose(
                        self.morphism_map[g], self.morphism_map[f]
                    ):
                        bad.append(f"composition broken on ({g},{f})")
                        if len(bad) >= 5:
                            return {"ok": False, "violations": bad}
        return {"ok": not bad, "violations": bad}

    def compose_with(self, other):
        """self after other: other: A -> B, self: B -> C."""
        return FunctorData(
            other.source,
            self.target,
            {o: self.object_map[v] for o, v in other.object_map.items()},
            {m: self.morphism_map[v] for m, v in other.morphism_map.items()},
        )

    @staticmethod
    def identity(C):
        return FunctorData(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms})


class NaturalTransformationData:
    def __init__(self, source, target, components):
        self.source = source  # FunctorData
        self.target = target  # FunctorData
        self.components = dict(components)  # object -> morphism of target cat

    def validate(self):
        F, G = self.source, self.target
        D = F.target
        bad = []
        for o in F.source.objects:
            c = self.components.get(o)
            if c not in D.morphisms or D.src[c] != F.on_obj(o) or D.tgt[c] != G.on_obj(o):
                bad.append(f"component at {o} mistyped")
        if bad:
            return {"ok": False, "violations": bad}
        for m in F.source.morphisms:
            a, b = F.source.src[m], F.source.tgt[m]
            left = D.compose(self.components[b], F.on_mor(m))
            right = D.compose(G.on_mor(m), self.components[a])
            if left != right:
                bad.append(f"naturality fails at {m}")
                if len(bad) >= 5:
                    break
        return {"ok": not bad, "violations": bad}

    def is_natural_iso(self):
        rep = self.validate()
        if not rep["ok"]:
            return False
        D = self.source.target
        return all(D.is_iso(c) for c in self.components.values())


def nerve(C, trunc_dim=4):
    """Composable chains of C as a 2-coskeletal truncated simplicial set."""
    chains = [[(o, ()) for o in C.objects]]
    for n in range(1, trunc_dim + 1):
        nxt = []
        for (o, ms) in chains[n - 1]:
            end = C.tgt[ms[-1]] if ms else o
            for m in C.morphisms:
                if C.src[m] == end:
                    nxt.append((o, ms + (m,)))
        chains.append(nxt)

    def payload(ch):
        return [ch[0], list(ch[1])]

    def vertex(ch, i):
        return ch[0] if i == 0 else C.tgt[ch[1][i - 1]]

    def face_of(n, p, i):
        o, ms = p[0], tuple(p[1])
        if i == 0:
            return payload((vertex((o, ms), 1), ms[1:]))
        if i == n:
            return payload((o, ms[:-1]))
        merged = ms[: i - 1] + (C.compose(ms[i], ms[i - 1]),) + ms[i + 1 :]
        return payload((o, merged))

    def deg_of(n, p, i):
        o, ms = p[0], tuple(p[1])
        v = vertex((o, ms), i)
        return payload((o, ms[:i] + (C.id_of(v),) + ms[i:]))

    from .simplicial import _complex_from_payloads

    payloads = [[payload(ch) for ch in lvl] for lvl in chains]
    return _complex_from_payloads(trunc_dim, payloads, face_of, deg_of, cosk=2)


def nerve_chain_id(C, o, ms):
    """The identifier of a chain in nerve(C)."""
    return enc([o, list(ms)])


def nerve_functor_map(F, trunc_dim=4):
    """N(F): nerve(source) -> nerve(target) as a SimplicialMap."""
    from .simplicial import SimplicialMap

    NX = nerve(F.source, trunc_dim)
    NY = nerve(F.target, trunc_dim)
    assignment = {}
    for n in range(trunc_dim + 1):
        for x in NX.simplices(n):
            o, ms = json.loads(x)
            assignment[(n, x)] = enc([F.on_obj(o), [F.on_mor(m) for m in ms]])
    return SimplicialMap(NX, NY, assignment)


# -- tau1: the homotopy category of a truncated complex ---------------------


def tau1(X, path_cap=12, budget=200000):
    """Edge-path classes of X modulo the relations from its 2-simplices.

    Returns ``(category, edge_class)`` where ``edge_class`` maps each edge
    of X to its morphism in the category.  Paths are explored breadth-first
    through the irreducible words of the rewriting system given by the
    2-simplex relations; if the congruence cannot be certified closed
    within ``path_cap``/``budget``, a ``Tau1Error`` is raised instead of
    returning a possibly wrong category.
    """
    if X.trunc_dim < 2:
        raise ValueError("tau1 needs at least the 2-truncation")
    verts = list(X.simplices(0))
    deg_edge_of = {X.deg(0, v, 0): v for v in verts}
    edges = list(X.simplices(1))
    src = {e: X.face(1, e, 1) for e in edges}
    tgt = {e: X.face(1, e, 0) for e in edges}
    alphabet = [e for e in edges if e not in deg_edge_of]

    def path_of_edge(e, at):
        # degenerate edges are identities
        return (at, ()) if e in deg_edge_of else (at, (e,))

    rules = []  # oriented (lhs_edges, rhs_path) with lhs nonempty
    for t in X.simplices(2):
        f, h, g = X.face(2, t, 2), X.face(2, t, 1), X.face(2, t, 0)
        v0 = src[f]
        u = path_of_edge(f, v0)[1] + path_of_edge(g, tgt[f])[1]
        w = path_of_edge(h, v0)[1]
        left, right = (v0, u), (v0, w)
        if left == right:
            continue
        if (len(u), enc(list(u))) < (len(w), enc(list(w))):
            left, right = right, left
        rules.append((left[1], right, v0))

    def window_matches(edges_tuple, start_vertex):
        """One-step reductions of the path; each strictly lowers (len, lex)."""
        outs = []
        for i in range(len(edges_tuple) + 1):
            at = start_vertex if i == 0 else tgt[edges_tuple[i - 1]]
            for lhs, rhs, v0 in rules:
                if not lhs:
                    continue
                if edges_tuple[i : i + len(lhs)] == lhs and at == v0:
                    new = edges_tuple[:i] + rhs[1] + edges_tuple[i + len(lhs) :]
                    outs.append(new)
        return outs

    def is_reducible(edges_tuple, start_vertex):
        return bool(window_matches(edges_tuple, start_vertex))

    # BFS over irreducible paths
    irreducible = {}
    frontier = []
    for v in verts:
        irreducible[(v, ())] = True
        frontier.append((v, ()))
    enumerated = list(frontier)
    overflow = False
    while frontier:
        nxt = []
        for (v, p) in frontier:
            end = tgt[p[-1]] if p else v
            for e in alphabet:
                if src[e] != end:
                    continue
                q = p + (e,)
                if len(enumerated) > budget:
                    raise Tau1Error("path budget exceeded before closure")
                enumerated.append((v, q))
                if is_reducible(q, v):
                    continue
                if len(q) > path_cap:
                    overflow = True
                    continue
                irreducible[(v, q)] = True
                nxt.append((v, q))
        frontier = nxt
    if overflow:
        raise Tau1Error("irreducible paths exceed the path-length cap")

    memo = {}

    def descend(v, p):
        key = (v, p)
        if key in memo:
            return memo[key]
        memo[key] = frozenset()  # cycle guard; reductions strictly decrease
        reds = window_matches(p, v)
        if not reds:
            out = frozenset([key])
        else:
            acc = set()
            for r in reds:
                acc |= descend(v, r)
            out = frozenset(acc)
        memo[key] = out
        return out

    parent = {k: k for k in irreducible}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for (v, p) in enumerated:
        ds = sorted(descend(v, p))
        for d in ds[1:]:
            union(ds[0], d)
        if (v, p) in irreducible and ds:
            union((v, p), ds[0])

    classes = {}
    for k in irreducible:
        classes.setdefault(find(k), []).append(k)

    def class_id(root):
        rep = min(classes[root], key=lambda kp: (len(kp[1]), enc([kp[0], list(kp[1])])))
        return enc([rep[0], list(rep[1])])

    root_of = {k: find(k) for k in irreducible}
    ids = {root: class_id(root) for root in classes}

    def resolve(v, p):
        ds = descend(v, p)
        roots = set()
        for d in ds:
            if d not in root_of:
                raise Tau1Error(f"composite escapes the explored classes: {d}")
            roots.add(root_of[d])
        if len(roots) != 1:
            raise Tau1Error("rewriting not confluent on explored paths")
        return roots.pop()

    mor_specs = []
    root_src = {}
    root_tgt = {}
    for root, members in classes.items():
        v, p = members[0]
        root_src[root] = v
        root_tgt[root] = tgt[p[-1]] if p else v
        mor_specs.append((ids[root], v, root_tgt[root]))

    comp = {}
    roots = sorted(classes, key=lambda r: ids[r])
    for rg in roots:
        for rf in roots:
            if root_tgt[rf] != root_src[rg]:
                continue
            vf, pf = min(classes[rf])
            vg, pg = min(classes[rg])
            comp[(ids[rg], ids[rf])] = ids[resolve(vf, pf + pg)]

    idents = {v: ids[root_of[(v, ())]] for v in verts}
    cat = FiniteCategory(
        verts, [ids[r] for r in roots],
        {ids[r]: root_src[r] for r in roots},
        {ids[r]: root_tgt[r] for r in roots},
        idents,
        comp,
    )
    edge_class = {}
    for e in edges:
        if e in deg_edge_of:
            edge_class[e] = idents[deg_edge_of[e]]
        else:
            edge_class[e] = ids[resolve(src[e], (e,))]
    rep = cat.validate()
    if not rep["ok"]:
        raise Tau1Error(f"path category failed validation: {rep['violations']}")
    return cat, edge_class


def tau1_counit_iso(C, trunc_dim=4):
    """The canonical comparison C -> tau1(nerve(C)); an isomorphism.

    Returns the comparison functor; callers assert bijectivity.
    """
    N = nerve(C, trunc_dim)
    T, edge_class = tau1(N)
    object_map = {o: enc([o, []]) for o in C.objects}
    morphism_map = {}
    for m in C.morphisms:
        e = enc([C.src[m], [m]])
        morphism_map[m] = edge_class[e]
    return FunctorData(C, T, object_map, morphism_map)


def maximal_groupoid(C):
    """Same objects, only the invertible morphisms."""
    mors = [m for m in C.morphisms if C.is_iso(m)]
    comp = {
        (g, f): C.comp_table[(g, f)]
        for g in mors
        for f in mors
        if C.tgt[f] == C.src[g]
    }
    return FiniteCategory(C.objects, mors,
                          {m: C.src[m] for m in mors},
                          {m: C.tgt[m] for m in mors},
                          dict(C.identity), comp)


def check_equivalence_of_categories(F, prefer=None):
    """Fully faithful + essentially surjective, with a constructed inverse.

    When both hold the report carries ``inverse_witness``: an inverse
    functor G together with validated natural isomorphisms GF = Id and
    FG = Id (components chosen from preimages, preferring strict ones).
    ``prefer`` pins the chosen preimage of selected target objects.
    """
    C, D = F.source, F.target
    prefer = prefer or {}
    report = {"fully_faithful": True, "essentially_surjective": True, "witnesses": []}
    for a in C.objects:
        for b in C.objects:
            images = {}
            for m in C.hom(a, b):
                fm = F.on_mor(m)
                if fm in images:
                    report["fully_faithful"] = False
                    report["witnesses"].append(f"not faithful on {images[fm]} vs {m}")
                images[fm] = m
            want = set(D.hom(F.on_obj(a), F.on_obj(b)))
            if set(images) != want:
                report["fully_faithful"] = False
                report["witnesses"].append(f"not full on Hom({a},{b})")
    chosen = {}
    for d in D.objects:
        strict = [a for a in C.objects if F.on_obj(a) == d]
        pick = None
        if d in prefer and F.on_obj(prefer[d]) == d:
            pick = (prefer[d], D.id_of(d))
        elif strict:
            pick = (min(strict), D.id_of(d))
        else:
            for a in C.objects:
                isos = D.isos_between(F.on_obj(a), d)
                if isos:
                    pick = (a, isos[0])
                    break
        if pick is None:
            report["essentially_surjective"] = False
            report["witnesses"].append(f"{d} not in the essential image")
        else:
            chosen[d] = pick
    report["ok"] = report["fully_faithful"] and report["essentially_surjective"]
    report["inverse_witness"] = None
    if not report["ok"]:
        return report

    phi = {d: chosen[d][1] for d in D.objects}  # phi_d: F(G d) -> d
    g_obj = {d: chosen[d][0] for d in D.objects}
    preimage = {}
    for m in C.morphisms:
        preimage[(C.src[m], C.tgt[m], F.on_mor(m))] = m
    g_mor = {}
    for n in D.morphisms:
        d, d2 = D.src[n], D.tgt[n]
        a, a2 = g_obj[d], g_obj[d2]
        conant = D.compose(D.inverse_of(phi[d2]), D.compose(n, phi[d]))
        m = preimage.get((a, a2, conant))
        if m is None:
            report["ok"] = False
            report["witnesses"].append(f"no preimage for {n}")
            return report
        g_mor[n] = m
    G = FunctorData(D, C, g_obj, g_mor)
    eta = {}
    for c in C.objects:
        d = F.on_obj(c)
        target_iso = D.inverse_of(phi[d])  # F(c) -> F(G d)
        u = preimage.get((c, g_obj[d], target_iso))
        if u is None:
            report["ok"] = False
            report["witnesses"].append(f"no unit component at {c}")
            return report
        eta[c] = u
    GF = FunctorData(
        C, C,
        {o: g_obj[F.on_obj(o)] for o in C.objects},
        {m: g_mor[F.on_mor(m)] for m in C.morphisms},
    )
    unit = NaturalTransformationData(FunctorData.identity(C), GF, eta)
    counit = NaturalTransformationData(
        FunctorData(
            D, D,
            {d: F.on_obj(g_obj[d]) for d in D.objects},
            {n: F.on_mor(g_mor[n]) for n in D.morphisms},
        ),
        FunctorData.identity(D),
        dict(phi),
    )
    if not (G.validate()["ok"] and unit.is_natural_iso() and counit.is_natural_iso()):
        report["ok"] = False
        report["witnesses"].append("constructed inverse failed validation")
        return report
    report["inverse_witness"] = {"inverse": G, "unit": unit, "counit": counit}
    return report


def full_subcategory(C, objs):
    objs = sorted(objs)
    mors = [m for m in C.morphisms if C.src[m] in objs and C.tgt[m] in objs]
    comp = {
        (g, f): C.comp_table[(g, f)]
        for g in mors
        for f in mors
        if C.tgt[f] == C.src[g]
    }
    return FiniteCategory(objs, mors,
                          {m: C.src[m] for m in mors},
                          {m: C.tgt[m] for m in mors},
                          {o: C.identity[o] for o in objs}, comp)


def all_functors(A, B):
    """Every functor A -> B, found by backtracking over generators."""
    a_objs = list(A.objects)
    a_mors = sorted(A.morphisms)
    results = []

    def assign_mors(obj_map):
        mor_map = {}
        for o in a_objs:
            mor_map[A.id_of(o)] = B.id_of(obj_map[o])
        todo = [m for m in a_mors if m not in mor_map]

        def bt(pos):
            if pos == len(todo):
                F = FunctorData(A, B, obj_map, dict(mor_map))
                if F.validate()["ok"]:
                    results.append(F)
                return
            m = todo[pos]
            for cand in B.hom(obj_map[A.src[m]], obj_map[A.tgt[m]]):
                mor_map[m] = cand
                ok = True
                # early composition pruning on already-assigned pairs
                for m2 in todo[: pos + 1]:
                    if A.tgt[m2] == A.src[m] and A.compose(m, m2) in mor_map:
                        if B.compose(cand, mor_map[m2]) != mor_map[A.compose(m, m2)]:
                            ok = False
                            break
                if ok:
                    bt(pos + 1)
                del mor_map[m]

        bt(0)

    for combo in iproduct(B.objects, repeat=len(a_objs)):
        assign_mors(dict(zip(a_objs, combo)))
    return results


def natural_transformations(F, G):
    """All natural transformations F => G between parallel functors."""
    C, D = F.source, F.target
    objs = list(C.objects)
    results = []
    comp = {}

    def bt(pos):
        if pos == len(objs):
            nt = NaturalTransformationData(F, G, dict(comp))
            if nt.validate()["ok"]:
                results.append(nt)
            return
        o = objs[pos]
        for cand in D.hom(F.on_obj(o), G.on_obj(o)):
            comp[o] = cand
            ok = True
            for m in C.morphisms:
                a, b = C.src[m], C.tgt[m]
                if a in comp and b in comp:
                    if D.compose(comp[b], F.on_mor(m)) != D.compose(G.on_mor(m), comp[a]):
                        ok = False
                        break
            if ok:
                bt(pos + 1)
            del comp[o]

    bt(0)
    return results


def functor_category(A, B):
    """The category of functors A -> B and natural transformations."""
    functors = all_functors(A, B)
    fkey = {}
    for F in functors:
        fkey[enc([sorted(F.object_map.items()), sorted(F.morphism_map.items())])] = F
    objs = sorted(fkey)
    nt_index = {}
    mor_specs = []
    for ka in objs:
        for kb in objs:
            for nt in natural_transformations(fkey[ka], fkey[kb]):
                mid = enc([ka, kb, sorted(nt.components.items())])
                nt_index[mid] = (ka, kb, nt)
                mor_specs.append((mid, ka, kb))

    def compose(g, f):
        ka, kb, ntf = nt_index[f]
        _, kc, ntg = nt_index[g]
        B_ = ntf.source.target
        comps = {
            o: B_.compose(ntg.components[o], ntf.components[o])
            for o in ntf.source.source.objects
        }
        return enc([ka, kc, sorted(comps.items())])

    def id_fn(o):
        F = fkey[o]
        comps = {oo: B.id_of(F.on_obj(oo)) for oo in A.objects}
        return enc([o, o, sorted(comps.items())])

    cat = category_from_parts(objs, mor_specs, compose, id_fn)
    cat.functor_of = {k: fkey[k] for k in objs}
    cat.nt_of = {mid: v[2] for mid, v in nt_index.items()}
    return cat
