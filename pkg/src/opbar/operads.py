"""Operads: the associative and commutative operads, free operads on
regular generator collections, and the chain operad of Stasheff's
associahedra.

The differential of the Stasheff operad is fixed on generators by

    d(mu_r) = sum_{s+t=r+1, s,t>=2} sum_{i=1..s} (-1)^{i(t+1)+s+t} mu_s o_i mu_t

together with the vertex-word Koszul convention for grafting (trees are
identified with the tensors of their generator labels in preorder).
Solving d^2 = 0 through arity 6 leaves exactly two conventions up to a
global sign; this one is additionally coherent with the suspended
operators b_r = s . mu_r . (s^{-1})^{(x) r} of the bar coderivation,
which the bar-module tests enforce.
"""

from __future__ import annotations

from itertools import permutations as _permutations

from . import perm, trees
from .dg import DgModule
from .errors import ArityBoundExceeded
from .linalg import SparseMatrix
from .sigma import SigmaModule, _combo_add


class Operad:
    """A concrete operad over an explicit basis.

    Subclasses provide `compose_basic(p_triple, i, q_triple)` returning
    a combo {label: coeff} in arity s+t-1, degree dp+dq, where a triple
    is (arity, degree, label).
    """

    name = "operad"

    def __init__(self, field, sigma, unit_label):
        self.field = field
        self.sigma = sigma
        self.unit_label = unit_label

    # shared helpers ---------------------------------------------------------

    def arity_bound(self):
        return self.sigma.arity_bound()

    def component(self, n):
        return self.sigma.component(n)

    def unit_triple(self):
        return (1, 0, self.unit_label)

    def compose_partial(self, p_triple, i, q_triple):
        s = p_triple[0]
        if not 1 <= i <= s:
            raise ValueError("slot %d out of range for arity %d" % (i, s))
        if s + q_triple[0] - 1 > self.arity_bound():
            raise ArityBoundExceeded(
                "composition lands in arity %d beyond bound %d" % (s + q_triple[0] - 1, self.arity_bound())
            )
        return self.compose_basic(p_triple, i, q_triple)

    def compose_combo(self, p_combo_triples, i, q_combo_triples):
        """Bilinear extension over {triple: coeff} dicts."""
        f = self.field
        out = {}
        for (pt, cp) in p_combo_triples.items():
            for (qt, cq) in q_combo_triples.items():
                for label, c in self.compose_partial(pt, i, qt).items():
                    _combo_add(f, out, (pt[0] + qt[0] - 1, pt[1] + qt[1], label), f.mul(f.mul(cp, cq), c))
        return out

    def gamma(self, p_triple, args):
        """Full composition p(q_1,...,q_s), args a list of triples.

        Defined by left-to-right partial compositions, which carries no
        extra Koszul signs in the vertex-word convention.
        """
        f = self.field
        cur = {p_triple: f.one()}
        slot = 1
        for q in args:
            nxt = {}
            for pt, cp in cur.items():
                for label, c in self.compose_partial(pt, slot, q).items():
                    _combo_add(f, nxt, (pt[0] + q[0] - 1, pt[1] + q[1], label), f.mul(cp, c))
            cur = nxt
            slot += q[0]
        return cur

    def differential_combo(self, triple):
        """d of a basis element, as {triple: coeff}."""
        n, d, label = triple
        comp = self.component(n)
        out = {}
        for l2, c in comp.apply_diff(d, {label: self.field.one()}).items():
            out[(n, d - 1, l2)] = c
        return out

    def act_combo(self, n, sigma, triples):
        f = self.field
        out = {}
        for (a, d, label), c in triples.items():
            for l2, c2 in self.sigma.act_perm_combo(a, sigma, d, {label: c}).items():
                _combo_add(f, out, (a, d, l2), c2)
        return out

    def basis_triples(self, n):
        comp = self.component(n)
        for d in comp.degrees():
            for label in comp.labels(d):
                yield (n, d, label)


class AssociativeOperad(Operad):
    """As: As(n) is the regular representation, basis = monomial words.

    A word w (a permutation of 1..n in one-line form) stands for the
    multilinear monomial x_{w_1} x_{w_2} ... x_{w_n}; composition is
    substitution of monomials, the right action relabels variables.
    """

    name = "As"

    def __init__(self, field, arity_bound):
        comps = {}
        actions = {}
        for n in range(1, arity_bound + 1):
            labels = sorted(_permutations(range(1, n + 1)))
            comps[n] = DgModule(field, {0: tuple(labels)}, {}, check=False)
            for i in range(1, n):
                s_i = perm.apply_adjacent(perm.identity(n), i)
                inv = perm.inverse(s_i)
                table = {}
                for w in labels:
                    table[(0, w)] = {tuple(inv[x - 1] for x in w): field.one()}
                actions[(n, i)] = table
        super().__init__(field, SigmaModule(field, comps, actions, check=False), (1,))

    def compose_basic(self, p_triple, i, q_triple):
        s, _, w = p_triple
        t, _, v = q_triple
        out = []
        for x in w:
            if x < i:
                out.append(x)
            elif x == i:
                out.extend(y + i - 1 for y in v)
            else:
                out.append(x + t - 1)
        return {tuple(out): self.field.one()}


class CommutativeOperad(Operad):
    """Com: the trivial representation in every arity, degree 0."""

    name = "Com"

    def __init__(self, field, arity_bound):
        comps = {n: DgModule.ground(field, "e") for n in range(1, arity_bound + 1)}
        super().__init__(field, SigmaModule(field, comps, {}, check=False), "e")

    def compose_basic(self, p_triple, i, q_triple):
        return {"e": self.field.one()}


class FreeOperad(Operad):
    """Free operad on generators {arity: [(name, degree)]}, each
    generating a free symmetric orbit; basis = planar trees with
    bijectively labeled leaves.

    `gen_diff` maps a generator name to its differential, a dict
    {tree: coeff} of trees of the generator's arity; it is extended as
    a derivation.
    """

    name = "free"

    def __init__(self, field, generators, arity_bound, gen_diff=None):
        self.generators = {r: list(gens) for r, gens in generators.items() if r >= 2}
        self.degree_of = {}
        arities = {}
        for r, gens in self.generators.items():
            for (gname, gdeg) in gens:
                if gname in self.degree_of:
                    raise ValueError("generator name %r reused" % (gname,))
                self.degree_of[gname] = gdeg
                arities.setdefault(r, []).append(gname)
        self.gen_diff = gen_diff or {}
        comps = {1: DgModule.ground(field, trees.leaf(1))}
        actions = {}
        tree_bases = {1: [trees.leaf(1)]}
        for n in range(2, arity_bound + 1):
            tree_bases[n] = trees.enumerate_trees(n, arities)
        for n in range(2, arity_bound + 1):
            by_degree = {}
            for t in tree_bases[n]:
                by_degree.setdefault(trees.degree(t, self.degree_of), []).append(t)
            basis = {d: tuple(ts) for d, ts in by_degree.items()}
            mod = DgModule(field, basis, {}, check=False)
            diff = {}
            for d in sorted(basis):
                m = SparseMatrix.zero(field, mod.dim(d - 1), mod.dim(d))
                for t in basis[d]:
                    for t2, c in self._tree_diff(field, t).items():
                        m.add_to(mod.index(d - 1, t2), mod.index(d, t), c)
                if not m.is_zero():
                    diff[d] = m
            comps[n] = DgModule(field, basis, diff, check=True)
            for i in range(1, n):
                s_i = perm.apply_adjacent(perm.identity(n), i)
                table = {}
                for d, ts in basis.items():
                    for t in ts:
                        table[(d, t)] = {trees.act(t, s_i): field.one()}
                actions[(n, i)] = table
        super().__init__(field, SigmaModule(field, comps, actions, check=False), trees.leaf(1))

    def compose_basic(self, p_triple, i, q_triple):
        s, _, p = p_triple
        t, _, q = q_triple
        if trees.is_leaf(p):
            return {q: self.field.one()}
        if trees.is_leaf(q):
            return {p: self.field.one()}
        par, out = trees.graft(p, i, q, self.degree_of)
        return {out: self.field.sign(par)}

    def _gen_diff_combo(self, field, name):
        return self.gen_diff.get(name, {})

    def _tree_diff(self, field, t):
        """Derivation extension of the generator differentials.

        Works на planar-standard shapes via one-child-at-a-time
        decomposition, then transports along the leaf relabeling.
        """
        f = field
        labels = trees.leaf_labels(t)
        n = len(labels)
        sigma = tuple(labels)  # shape . sigma = t, where shape is planar-standard
        shape = trees.relabel(t, {labels[k]: k + 1 for k in range(n)})
        out_shape = self._shape_diff(f, shape)
        out = {}
        for t2, c in out_shape.items():
            _combo_add(f, out, trees.relabel(t2, {k + 1: labels[k] for k in range(n)}), c)
        return out

    def _shape_diff(self, f, t):
        if trees.is_leaf(t):
            return {}
        children = t[1:]
        if all(trees.is_leaf(c) for c in children):
            return dict(self._gen_diff_combo(f, t[0]))
        # split off the leftmost non-leaf child: t = p o_j c
        j = None
        offset = 0
        for idx, c in enumerate(children):
            a = trees.arity(c)
            if not trees.is_leaf(c):
                j = offset + 1
                child = c
                child_index = idx
                break
            offset += a
        a_child = trees.arity(child)
        # p: t with that child collapsed to one leaf, labels renormalized
        new_children = []
        pos = 0
        for idx, c in enumerate(children):
            a = trees.arity(c)
            if idx == child_index:
                new_children.append(trees.leaf(j))
            else:
                shift = {l: (l if l < j else l - a_child + 1) for l in trees.leaf_labels(c)}
                new_children.append(trees.relabel(c, shift))
            pos += a
        p = (t[0],) + tuple(new_children)
        c_std = trees.relabel(child, {l: l - j + 1 for l in trees.leaf_labels(child)})
        dp = self._shape_diff(f, p)
        dc = self._shape_diff(f, c_std)
        out = {}
        for p2, cp in dp.items():
            par, tr = trees.graft(p2, j, c_std, self.degree_of)
            _combo_add(f, out, tr, f.mul(cp, f.sign(par)))
        sgn = f.sign(trees.degree(p, self.degree_of))
        for c2, cc in dc.items():
            par, tr = trees.graft(p, j, c2, self.degree_of)
            _combo_add(f, out, tr, f.mul(f.mul(sgn, cc), f.sign(par)))
        return out


def stasheff_sign(s, t, i):
    """Exponent of the sign of mu_s o_i mu_t inside d(mu_r)."""
    return (i * (t + 1) + s + t) % 2


def stasheff_generator_diff(field, r):
    """d(mu_r) as {tree: coeff} over the corolla generators."""
    degs = {("mu", k): k - 2 for k in range(2, r + 1)}
    out = {}
    for s in range(2, r):
        t = r + 1 - s
        if t < 2:
            continue
        for i in range(1, s + 1):
            par, tree = trees.graft(
                trees.corolla(("mu", s), s), i, trees.corolla(("mu", t), t), degs
            )
            c = field.sign(stasheff_sign(s, t, i) + par)
            _combo_add(field, out, tree, c)
    return out


def stasheff_d_squared_vanishes(field, max_arity):
    """Symbolic check that d(d(mu_r)) = 0 for r <= max_arity.

    Works on tree combinations directly (no operad materialization), so
    arity 7 runs in well under a second.
    """
    degs = {("mu", k): k - 2 for k in range(2, max_arity + 1)}
    for r in range(2, max_arity + 1):
        acc = {}
        for s in range(2, r):
            t = r + 1 - s
            if t < 2:
                continue
            for i in range(1, s + 1):
                par0, _ = trees.graft(trees.corolla(("mu", s), s), i, trees.corolla(("mu", t), t), degs)
                c0 = field.sign(stasheff_sign(s, t, i) + par0)
                # d(mu_s) o_i mu_t
                for ptree, pc in stasheff_generator_diff(field, s).items():
                    par, tr = trees.graft(ptree, i, trees.corolla(("mu", t), t), degs)
                    _combo_add(field, acc, tr, field.mul(c0, field.mul(pc, field.sign(par))))
                # (-1)^{|mu_s|} mu_s o_i d(mu_t)
                sgn_p = field.sign(s - 2)
                for qtree, qc in stasheff_generator_diff(field, t).items():
                    par, tr = trees.graft(trees.corolla(("mu", s), s), i, qtree, degs)
                    _combo_add(field, acc, tr, field.mul(c0, field.mul(field.mul(sgn_p, qc), field.sign(par))))
        if acc:
            return False
    return True


def stasheff_unique_sign_convention(field, max_arity=5):
    """All exponent patterns a*i+b*s+c*t+d*it+e*is+f*st+g with d^2 = 0.

    Returns the list of coefficient tuples; exactly two survive through
    arity 5 (a global-sign pair), one of which is the pinned convention.
    """
    from itertools import product as _product

    degs = {("mu", k): k - 2 for k in range(2, max_arity + 1)}
    good = []
    for coeffs in _product([0, 1], repeat=7):
        a, b, c, d, e, f_, g = coeffs

        def sign_fn(s, t, i):
            return (a * i + b * s + c * t + d * i * t + e * i * s + f_ * s * t + g) % 2

        ok = True
        for r in range(2, max_arity + 1):
            acc = {}
            for s in range(2, r):
                t = r + 1 - s
                if t < 2:
                    continue
                for i in range(1, s + 1):
                    par0, _ = trees.graft(
                        trees.corolla(("mu", s), s), i, trees.corolla(("mu", t), t), degs
                    )
                    c0 = field.sign(sign_fn(s, t, i) + par0)
                    for s2 in range(2, s):
                        t2 = s + 1 - s2
                        if t2 < 2:
                            continue
                        for i2 in range(1, s2 + 1):
                            par1, tr1 = trees.graft(
                                trees.corolla(("mu", s2), s2), i2, trees.corolla(("mu", t2), t2), degs
                            )
                            c1 = field.mul(c0, field.sign(sign_fn(s2, t2, i2) + par1))
                            par, tr = trees.graft(tr1, i, trees.corolla(("mu", t), t), degs)
                            _combo_add(field, acc, tr, field.mul(c1, field.sign(par)))
                    sgn_p = field.sign(s - 2)
                    for s2 in range(2, t):
                        t2 = t + 1 - s2
                        if t2 < 2:
                            continue
                        for i2 in range(1, s2 + 1):
                            par1, tr1 = trees.graft(
                                trees.corolla(("mu", s2), s2), i2, trees.corolla(("mu", t2), t2), degs
                            )
                            c1 = field.mul(
                                field.mul(c0, sgn_p), field.sign(sign_fn(s2, t2, i2) + par1)
                            )
                            par, tr = trees.graft(trees.corolla(("mu", s), s), i, tr1, degs)
                            _combo_add(field, acc, tr, field.mul(c1, field.sign(par)))
            if acc:
                ok = False
                break
        if ok:
            good.append(coeffs)
    return good


def eps_kills_stasheff_differential(field, max_arity):
    """eps(d mu_r) = 0 in As for every r <= max_arity (dg-compatibility).

    For r = 3 this is associativity of the product; beyond, every term
    carries a generator of arity > 2 and dies.
    """

    def eps_tree(t):
        word = []

        def walk(node):
            if trees.is_leaf(node):
                word.append(node[1])
                return True
            if len(node) != 3:
                return False
            return walk(node[1]) and walk(node[2])

        return tuple(word) if walk(t) else None

    for r in range(3, max_arity + 1):
        acc = {}
        for tr, c in stasheff_generator_diff(field, r).items():
            w = eps_tree(tr)
            if w is not None:
                _combo_add(field, acc, w, c)
        if acc:
            return False
    return True


def stasheff_operad(field, arity_bound):
    """The chain operad of Stasheff's associahedra, K = (Free(mu_*), d)."""
    if arity_bound < 2:
        raise ValueError("arity_bound must be at least 2")
    generators = {r: [(("mu", r), r - 2)] for r in range(2, arity_bound + 1)}
    gen_diff = {("mu", r): stasheff_generator_diff(field, r) for r in range(2, arity_bound + 1)}
    op = FreeOperad(field, generators, arity_bound, gen_diff)
    op.name = "K"
    return op


def free_operad(field, generators, arity_bound, gen_diff=None):
    for r in generators:
        if r < 2:
            raise ValueError("free operad generators must have arity >= 2")
    return FreeOperad(field, generators, arity_bound, gen_diff)


def associative_operad(field, arity_bound):
    return AssociativeOperad(field, arity_bound)


def commutative_operad(field, arity_bound):
    return CommutativeOperad(field, arity_bound)


class TableOperad(Operad):
    """Operad backed by an explicit composition table (JSON import)."""

    name = "table"

    def __init__(self, field, sigma, unit_label, table, name="table"):
        super().__init__(field, sigma, unit_label)
        self.table = table
        self.name = name

    def compose_basic(self, p_triple, i, q_triple):
        s, dp, lp = p_triple
        t, dq, lq = q_triple
        if (s, lp) == (1, self.unit_label):
            return {lq: self.field.one()}
        if (t, lq) == (1, self.unit_label):
            return {lp: self.field.one()}
        key = (s, lp, i, t, lq)
        out = self.table.get(key)
        if out is None:
            return {}
        return dict(out)


# morphisms -------------------------------------------------------------------


class OperadMorphism:
    """Arity-indexed family of chain maps between operads.

    `rule(triple)` returns {label: coeff} in the target component of the
    same arity and degree.
    """

    def __init__(self, source, target, rule, name="morphism"):
        self.source = source
        self.target = target
        self.rule = rule
        self.name = name

    def apply_triple(self, triple):
        return {k: v for k, v in self.rule(triple).items() if not self.source.field.is_zero(v)}

    def apply_combo(self, combo):
        f = self.source.field
        out = {}
        for triple, c in combo.items():
            for label, c2 in self.apply_triple(triple).items():
                _combo_add(f, out, (triple[0], triple[1], label), f.mul(c, c2))
        return out


def identity_morphism(op):
    return OperadMorphism(op, op, lambda triple: {triple[2]: op.field.one()}, name="id")


def eps_to_assoc(k_operad, as_operad):
    """The augmentation K -> As: binary trees to monomials, mu_{r>2} to 0."""

    def rule(triple):
        n, d, t = triple
        if n == 1:
            return {as_operad.unit_label: k_operad.field.one()}
        if d != 0:
            return {}
        word = []

        def walk(node):
            if trees.is_leaf(node):
                word.append(node[1])
                return True
            if len(node) != 3:
                return False
            return walk(node[1]) and walk(node[2])

        if not walk(t):
            return {}
        return {tuple(word): k_operad.field.one()}

    return OperadMorphism(k_operad, as_operad, rule, name="eps")


def alpha_to_com(as_operad, com_operad):
    """As -> Com: every monomial to the arity generator."""

    def rule(triple):
        n, d, w = triple
        if n == 1:
            return {com_operad.unit_label: as_operad.field.one()}
        return {"e": as_operad.field.one()}

    return OperadMorphism(as_operad, com_operad, rule, name="alpha")


def compose_morphisms(g, f):
    """g after f."""

    def rule(triple):
        out = {}
        field = f.source.field
        for label, c in f.apply_triple(triple).items():
            for label2, c2 in g.apply_triple((triple[0], triple[1], label)).items():
                _combo_add(field, out, label2, field.mul(c, c2))
        return out

    return OperadMorphism(f.source, g.target, rule, name="%s.%s" % (g.name, f.name))


def operad_morphism_check(f, arity_bound=None, report=False):
    """True iff f commutes with units, differentials, actions and o_i.

    With report=True returns (ok, list of failure strings).
    """
    src, dst = f.source, f.target
    field = src.field
    bound = arity_bound or min(src.arity_bound(), dst.arity_bound())
    failures = []

    unit_img = f.apply_triple(src.unit_triple())
    if unit_img != {dst.unit_label: field.one()}:
        failures.append("unit is not preserved")

    for n in range(1, bound + 1):
        for triple in src.basis_triples(n):
            lhs = {}
            for t2, c in src.differential_combo(triple).items():
                for label, c2 in f.apply_triple(t2).items():
                    _combo_add(field, lhs, (n, triple[1] - 1, label), field.mul(c, c2))
            rhs = {}
            for label, c in f.apply_triple(triple).items():
                for l2, c2 in dst.component(n).apply_diff(triple[1], {label: c}).items():
                    _combo_add(field, rhs, (n, triple[1] - 1, l2), c2)
            if lhs != rhs:
                failures.append("differential not preserved at %r" % (triple,))
            for i in range(1, n):
                s_i = perm.apply_adjacent(perm.identity(n), i)
                lhs = {}
                for l2, c in src.sigma.act_perm_combo(n, s_i, triple[1], {triple[2]: field.one()}).items():
                    for label, c2 in f.apply_triple((n, triple[1], l2)).items():
                        _combo_add(field, lhs, label, field.mul(c, c2))
                rhs = {}
                for label, c in f.apply_triple(triple).items():
                    for l2, c2 in dst.sigma.act_perm_combo(n, s_i, triple[1], {label: c}).items():
                        _combo_add(field, rhs, l2, c2)
                if lhs != rhs:
                    failures.append("equivariance fails at %r s_%d" % (triple, i))

    for s in range(1, bound + 1):
        for t in range(1, bound + 1):
            if s + t - 1 > bound:
                continue
            for p in src.basis_triples(s):
                for q in src.basis_triples(t):
                    for i in range(1, s + 1):
                        lhs = {}
                        for label, c in src.compose_partial(p, i, q).items():
                            for l2, c2 in f.apply_triple((s + t - 1, p[1] + q[1], label)).items():
                                _combo_add(field, lhs, l2, field.mul(c, c2))
                        rhs = {}
                        fp = f.apply_triple(p)
                        fq = f.apply_triple(q)
                        for lp, cp in fp.items():
                            for lq, cq in fq.items():
                                for l2, c2 in dst.compose_partial((s, p[1], lp), i, (t, q[1], lq)).items():
                                    _combo_add(field, rhs, l2, field.mul(field.mul(cp, cq), c2))
                        if lhs != rhs:
                            failures.append("composition fails at %r o_%d %r" % (p, i, q))
    ok = not failures
    return (ok, failures) if report else ok


# structural checks -----------------------------------------------------------


def check_operad(op, arity_bound=None, deep=False):
    """Unit, associativity, equivariance, derivation and d^2 checks.

    Raises ValueError on the first failure.  `deep` additionally runs
    the Sigma-module relation checks.
    """
    field = op.field
    bound = arity_bound or op.arity_bound()
    if deep:
        op.sigma.check_relations()
    unit = op.unit_triple()
    for n in range(1, bound + 1):
        for p in op.basis_triples(n):
            for i in range(1, n + 1):
                if op.compose_partial(p, i, unit) != {p[2]: field.one()}:
                    raise ValueError("right unit law fails at %r slot %d" % (p, i))
            if op.compose_partial(unit, 1, p) != {p[2]: field.one()}:
                raise ValueError("left unit law fails at %r" % (p,))

    def combos_equal(a, b):
        return a == b

    for s in range(1, bound + 1):
        for t in range(1, bound + 1):
            for u in range(1, bound + 1):
                if s + t + u - 2 > bound:
                    continue
                for p in op.basis_triples(s):
                    for q in op.basis_triples(t):
                        for r_ in op.basis_triples(u):
                            # nested: (p o_i q) o_{i+j-1} r = p o_i (q o_j r)
                            for i in range(1, s + 1):
                                for j in range(1, t + 1):
                                    lhs = op.compose_combo(
                                        op_combo_wrap(op, op.compose_partial(p, i, q), s + t - 1, p[1] + q[1]),
                                        i + j - 1,
                                        {r_: field.one()},
                                    )
                                    rhs = op.compose_combo(
                                        {p: field.one()},
                                        i,
                                        op_combo_wrap(op, op.compose_partial(q, j, r_), t + u - 1, q[1] + r_[1]),
                                    )
                                    if not combos_equal(lhs, rhs):
                                        raise ValueError(
                                            "nested associativity fails: %r o_%d %r o_%d %r" % (p, i, q, j, r_)
                                        )
                            # disjoint: (p o_i q) o_{j+t-1} r = (-1)^{|q||r|} (p o_j r) o_i q, i<j
                            for i in range(1, s + 1):
                                for j in range(i + 1, s + 1):
                                    lhs = op.compose_combo(
                                        op_combo_wrap(op, op.compose_partial(p, i, q), s + t - 1, p[1] + q[1]),
                                        j + t - 1,
                                        {r_: field.one()},
                                    )
                                    rhs = op.compose_combo(
                                        op_combo_wrap(op, op.compose_partial(p, j, r_), s + u - 1, p[1] + r_[1]),
                                        i,
                                        {q: field.one()},
                                    )
                                    sgn = field.sign(q[1] * r_[1])
                                    rhs = {k: field.mul(sgn, v) for k, v in rhs.items()}
                                    if not combos_equal(lhs, rhs):
                                        raise ValueError(
                                            "disjoint associativity fails: %r o_%d %r, o_%d %r" % (p, i, q, j, r_)
                                        )

    # derivation: d(p o_i q) = dp o_i q + (-1)^{|p|} p o_i dq
    for s in range(1, bound + 1):
        for t in range(1, bound + 1):
            if s + t - 1 > bound:
                continue
            for p in op.basis_triples(s):
                for q in op.basis_triples(t):
                    for i in range(1, s + 1):
                        lhs = {}
                        for label, c in op.compose_partial(p, i, q).items():
                            for t2, c2 in op.differential_combo((s + t - 1, p[1] + q[1], label)).items():
                                _combo_add(field, lhs, t2, field.mul(c, c2))
                        rhs = {}
                        for pt, cp in op.differential_combo(p).items():
                            for label, c in op.compose_partial(pt, i, q).items():
                                _combo_add(field, rhs, (s + t - 1, pt[1] + q[1], label), field.mul(cp, c))
                        sgn = field.sign(p[1])
                        for qt, cq in op.differential_combo(q).items():
                            for label, c in op.compose_partial(p, i, qt).items():
                                _combo_add(
                                    field, rhs, (s + t - 1, p[1] + qt[1], label), field.mul(field.mul(sgn, cq), c)
                                )
                        if lhs != rhs:
                            raise ValueError("derivation rule fails at %r o_%d %r" % (p, i, q))

    # equivariance: (p.sigma) o_i (q.tau) = (p o_{sigma(i)} q).(sigma o_i tau)
    for s in range(1, bound + 1):
        for t in range(1, bound + 1):
            if s + t - 1 > bound:
                continue
            gens_s = [perm.apply_adjacent(perm.identity(s), i) for i in range(1, s)] or [perm.identity(s)]
            gens_t = [perm.apply_adjacent(perm.identity(t), i) for i in range(1, t)] or [perm.identity(t)]
            for p in op.basis_triples(s):
                for q in op.basis_triples(t):
                    for sg in gens_s:
                        for tg in gens_t:
                            for i in range(1, s + 1):
                                lhs = {}
                                for lp, cp in op.sigma.act_perm_combo(s, sg, p[1], {p[2]: field.one()}).items():
                                    for lq, cq in op.sigma.act_perm_combo(t, tg, q[1], {q[2]: field.one()}).items():
                                        for label, c in op.compose_partial((s, p[1], lp), i, (t, q[1], lq)).items():
                                            _combo_add(field, lhs, label, field.mul(field.mul(cp, cq), c))
                                rhs = {}
                                big = perm.block_substitution(sg, i, tg)
                                for label, c in op.compose_partial(p, sg[i - 1], q).items():
                                    for l2, c2 in op.sigma.act_perm_combo(
                                        s + t - 1, big, p[1] + q[1], {label: c}
                                    ).items():
                                        _combo_add(field, rhs, l2, c2)
                                if lhs != rhs:
                                    raise ValueError(
                                        "equivariance fails at %r o_%d %r with generators" % (p, i, q)
                                    )


def op_combo_wrap(op, label_combo, arity, degree):
    return {(arity, degree, label): c for label, c in label_combo.items()}
