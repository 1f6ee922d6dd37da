"""The categorical bar construction and its comparison with the bar.

The simplicial object C(A) has level n the n-fold coproduct of A; for
non-unital commutative algebras the coproduct has the closed form

    A v B = A (+) B (+) A (x) B,

so level n is the direct sum over nonempty subsets S of {1..n} of the
tensor products A^{(x)S}.  Outer faces kill index 1 (resp. n), inner
faces fold neighbours through the codiagonal (= the product on the
overlap), degeneracies reindex past an inserted zero slot.

Normalized chains are the quotient by degeneracy images with a
deterministic complement; the total differential is

    D = delta_internal + (-1)^q (sum_i (-1)^i d_i)        (q = internal degree)

and the comparison with the bar complex is the signed basis bijection

    a_1 (x) ... (x) a_n  |->  (-1)^{sum_j j |a_j|} (n, a_1 (x) ... (x) a_n),

which the tests verify to be an isomorphism of dg-algebras, matching
the shuffle product against the Eilenberg-Mac Lane product.
"""

from __future__ import annotations

from . import perm
from .dg import DgMap, DgModule, tensor as dg_tensor
from .errors import FieldMismatch, NotCommutative, SimplicialIdentityViolation
from .linalg import SparseMatrix, quotient_data, rank
from .modules import DgAlgebra
from .sigma import _combo_add


class SimplicialDgModule:
    """Levels of dg-modules with face/degeneracy chain maps.

    `faces[(n, i)]` and `degeneracies[(n, j)]` are DgMaps out of level
    n; identities are verified matrixwise up to the dimension bound.
    """

    def __init__(self, field, levels, faces, degeneracies, dimension_bound, check=True):
        self.field = field
        self.levels = levels
        self.faces = faces
        self.degeneracies = degeneracies
        self.dimension_bound = dimension_bound
        if check:
            self.check_identities()

    def level(self, n):
        mod = self.levels.get(n)
        return mod if mod is not None else DgModule.zero(self.field)

    def face(self, n, i):
        return self.faces[(n, i)]

    def degeneracy(self, n, j):
        return self.degeneracies[(n, j)]

    def check_identities(self):
        """d_i d_j = d_{j-1} d_i (i<j), the s_j relations, and mixed."""
        for n in range(2, self.dimension_bound + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = self.face(n - 1, i).compose(self.face(n, j))
                    rhs = self.face(n - 1, j - 1).compose(self.face(n, i))
                    if lhs != rhs:
                        raise SimplicialIdentityViolation("d_%d d_%d at level %d" % (i, j, n))
        for n in range(0, self.dimension_bound):
            for i in range(n + 1):
                for j in range(n + 1):
                    if n + 1 > self.dimension_bound:
                        continue
                    lhs = self.face(n + 1, i).compose(self.degeneracy(n, j))
                    if i < j:
                        if n == 0:
                            continue
                        rhs = self.degeneracy(n - 1, j - 1).compose(self.face(n, i))
                        ok = lhs == rhs
                    elif i in (j, j + 1):
                        ok = lhs == DgMap.identity(self.level(n))
                    else:
                        if n == 0:
                            continue
                        rhs = self.degeneracy(n - 1, j).compose(self.face(n, i - 1))
                        ok = lhs == rhs
                    if not ok:
                        raise SimplicialIdentityViolation("d_%d s_%d at level %d" % (i, j, n))
        for n in range(0, self.dimension_bound - 1):
            for i in range(n + 1):
                for j in range(i, n + 1):
                    lhs = self.degeneracy(n + 1, i).compose(self.degeneracy(n, j))
                    rhs = self.degeneracy(n + 1, j + 1).compose(self.degeneracy(n, i))
                    if lhs != rhs:
                        raise SimplicialIdentityViolation("s_%d s_%d at level %d" % (i, j, n))


class NormalizedComplex:
    """N_*(C): quotient of each level by the degeneracy images.

    `module` is the total dg-module with labels (n, level_label) and
    degree n + internal degree; `project(n, combo)` maps level elements
    into the kept basis, `embed` includes back.
    """

    def __init__(self, simplicial):
        self.simplicial = simplicial
        self.field = simplicial.field
        self._presentations = {}
        self._build()

    def _build(self):
        f = self.field
        sx = self.simplicial
        kept_per_level = {}
        for n in range(sx.dimension_bound + 1):
            lvl = sx.level(n)
            pres = {}
            for q in lvl.degrees():
                dim = lvl.dim(q)
                relations = []
                if n >= 1:
                    prev = sx.level(n - 1)
                    for j in range(n):
                        s_map = sx.degeneracy(n - 1, j)
                        for col in range(prev.dim(q)):
                            vec = s_map.block(q).column(col)
                            if vec:
                                relations.append(vec)
                kept, project = quotient_data(f, dim, relations)
                pres[q] = (kept, project)
            self._presentations[n] = pres
            kept_per_level[n] = pres
        basis = {}
        for n in range(sx.dimension_bound + 1):
            lvl = sx.level(n)
            for q in lvl.degrees():
                kept, _ = self._presentations[n][q]
                labels = lvl.labels(q)
                for i in kept:
                    basis.setdefault(n + q, []).append((n, labels[i]))
        basis = {d: tuple(ls) for d, ls in sorted(basis.items())}
        mod = DgModule(f, basis, {}, check=False)
        diff = {}
        for d in sorted(basis):
            m = SparseMatrix.zero(f, mod.dim(d - 1), mod.dim(d))
            for (n, label) in basis[d]:
                q = d - n
                lvl = sx.level(n)
                # internal differential
                for l2, c in lvl.apply_diff(q, {label: f.one()}).items():
                    for lab3, c3 in self.project(n, q - 1, {l2: c}).items():
                        m.add_to(mod.index(d - 1, (n, lab3)), mod.index(d, (n, label)), c3)
                # simplicial boundary with the bicomplex sign
                if n >= 1:
                    sgn_q = f.sign(q)
                    for i in range(n + 1):
                        face = sx.face(n, i)
                        out = face.apply(q, {label: f.one()})
                        coeff = f.mul(sgn_q, f.sign(i))
                        for l2, c in out.items():
                            for lab3, c3 in self.project(n - 1, q, {l2: c}).items():
                                m.add_to(
                                    mod.index(d - 1, (n - 1, lab3)),
                                    mod.index(d, (n, label)),
                                    f.mul(coeff, c3),
                                )
            if not m.is_zero():
                diff[d] = m
        self.module = DgModule(f, basis, diff, check=True)

    def project(self, n, q, combo):
        """Project a level-n internal-degree-q combo to kept labels."""
        f = self.field
        lvl = self.simplicial.level(n)
        pres = self._presentations.get(n, {}).get(q)
        if pres is None:
            return {}
        kept, project = pres
        vec = {}
        for label, c in combo.items():
            j = lvl.index(q, label)
            for i, v in project.column(j).items():
                cur = vec.get(i)
                vec[i] = f.mul(v, c) if cur is None else f.add(cur, f.mul(v, c))
        labels = lvl.labels(q)
        return {labels[kept[i]]: v for i, v in vec.items() if not f.is_zero(v)}


def normalize(simplicial):
    """The normalized total complex of a simplicial dg-module."""
    return NormalizedComplex(simplicial).module


# coproducts of commutative algebras -------------------------------------------


def coproduct_algebra(algebras):
    """The coproduct A_1 v ... v A_n of non-unital commutative algebras.

    Carrier basis: (S, word) for nonempty S = (i_1 < ... < i_k) and
    word a tuple of (degree, label) letters, letter j from A_{i_j}.
    Returns (DgAlgebra, injections) where injections[i] maps A_i basis
    labels into the coproduct.
    """
    if not algebras:
        raise ValueError("need at least one algebra")
    field = algebras[0].field
    for a in algebras:
        if a.field != field:
            raise FieldMismatch("coproduct over different fields")
        if not a.is_commutative_kind():
            raise NotCommutative("closed-form coproduct needs commutative algebras")
    n = len(algebras)
    elements = []
    diff_map = {}
    subsets = []

    def gen_subsets(start, acc):
        if acc:
            subsets.append(tuple(acc))
        for i in range(start, n + 1):
            gen_subsets(i + 1, acc + [i])

    gen_subsets(1, [])
    for S in subsets:
        words = [()]
        for i in S:
            amod = algebras[i - 1].module
            words = [w + ((d, l),) for w in words for d in amod.degrees() for l in amod.labels(d)]
        for w in words:
            label = (S, w)
            deg = sum(d for d, _ in w)
            elements.append((label, deg))
    mod_nodiff = DgModule(
        field,
        _group_by_degree(elements),
        {},
        check=False,
    )
    diff = {}
    for (S, w), deg in elements:
        targets = {}
        prefix = 0
        for j, (d, l) in enumerate(w):
            amod = algebras[S[j] - 1].module
            for l2, c in amod.apply_diff(d, {l: field.one()}).items():
                w2 = w[:j] + ((d - 1, l2),) + w[j + 1 :]
                _combo_add(field, targets, (S, w2), field.mul(field.sign(prefix), c))
            prefix += d
        if targets:
            diff[(S, w)] = targets
    module = DgModule.from_data(field, elements, diff)
    table = {}
    for (S, u), du in elements:
        for (T, v), dv in elements:
            out = _coproduct_product(field, algebras, (S, u), (T, v))
            if out:
                table[((S, u), (T, v))] = out
    alg = DgAlgebra(field, "comm", module, {2: table}, name="v".join(a.name for a in algebras))
    injections = [lambda lab, d, i=i: ((i,), (((d, lab)),)) for i in range(1, n + 1)]
    return alg, injections


def _group_by_degree(elements):
    basis = {}
    for label, d in elements:
        basis.setdefault(d, []).append(label)
    return basis


def _coproduct_product(field, algebras, left, right):
    """Multiply (S, u) by (T, v): interleave and fold overlaps."""
    S, u = left
    T, v = right
    U = tuple(sorted(set(S) | set(T)))
    # Koszul: rearrange the concatenated letters into U-order, x before y
    items = []
    for j, i in enumerate(S):
        items.append((i, 0, u[j]))
    for j, i in enumerate(T):
        items.append((i, 1, v[j]))
    order = sorted(range(len(items)), key=lambda a: (items[a][0], items[a][1]))
    degs = [it[2][0] for it in items]
    sigma = [0] * len(items)
    for newpos, old in enumerate(order):
        sigma[old] = newpos + 1
    sign = field.sign(perm.koszul_sign_exponent(degs, tuple(sigma)))
    # fold: walk U; overlap indices multiply in their algebra
    letters_per_index = {}
    for i, side, (d, l) in items:
        letters_per_index.setdefault(i, []).append((d, l))
    result_words = [((), sign)]
    for i in U:
        letters = letters_per_index[i]
        if len(letters) == 1:
            result_words = [(w + (letters[0],), c) for w, c in result_words]
        else:
            (d1, l1), (d2, l2) = letters
            prod = algebras[i - 1].op_apply(2, (l1, l2))
            nxt = []
            for w, c in result_words:
                for l3, c3 in prod.items():
                    nxt.append((w + ((d1 + d2, l3),), field.mul(c, c3)))
            result_words = nxt
    out = {}
    for w, c in result_words:
        if not field.is_zero(c):
            _combo_add(field, out, (U, w), c)
    return out


def commutative_coproduct(a, b):
    """A v B = A (+) B (+) A (x) B with injections and the codiagonal.

    Returns (coproduct DgAlgebra, inject_a, inject_b, fold) where fold
    is meaningful when a and b are the same algebra: it is the
    codiagonal A v A -> A given by (x, y, x (x) y) -> (x, y, x y).
    """
    alg, _ = coproduct_algebra([a, b])

    def inject_a(d, label):
        return ((1,), ((d, label),))

    def inject_b(d, label):
        return ((2,), ((d, label),))

    def fold(label):
        S, w = label
        if len(S) == 1:
            return {w[0]: a.field.one()}
        (d1, l1), (d2, l2) = w
        return {(d1 + d2, l3): c for l3, c in a.op_apply(2, (l1, l2)).items()}

    return alg, inject_a, inject_b, fold


# the simplicial categorical bar ------------------------------------------------


def simplicial_categorical_bar(algebra, dimension_bound, check=True):
    """C(A)_n = A^{v n} with fold faces and zero-insertion degeneracies."""
    if not algebra.is_commutative_kind():
        raise NotCommutative("the categorical bar needs a commutative algebra")
    field = algebra.field
    amod = algebra.module
    levels = {}
    level_algebras = {}
    for n in range(dimension_bound + 1):
        if n == 0:
            levels[0] = DgModule.zero(field)
            continue
        alg_n, _ = coproduct_algebra([algebra] * n)
        level_algebras[n] = alg_n
        levels[n] = alg_n.module
    faces = {}
    degeneracies = {}
    for n in range(1, dimension_bound + 1):
        for i in range(n + 1):
            faces[(n, i)] = _cat_face(field, algebra, levels, n, i)
    for n in range(0, dimension_bound):
        for j in range(n + 1):
            degeneracies[(n, j)] = _cat_degeneracy(field, levels, n, j)
    sx = SimplicialDgModule(field, levels, faces, degeneracies, dimension_bound, check=check)
    sx.level_algebras = level_algebras
    return sx


def _cat_face(field, algebra, levels, n, i):
    src = levels[n]
    dst = levels.get(n - 1)

    def rule(d, label):
        S, w = label
        if i == 0:
            if 1 in S:
                return {}
            S2 = tuple(x - 1 for x in S)
            return {(S2, w): field.one()}
        if i == n:
            if n in S:
                return {}
            return {(S, w): field.one()}
        # fold i, i+1
        if i in S and (i + 1) in S:
            j = S.index(i)
            (d1, l1), (d2, l2) = w[j], w[j + 1]
            prod = algebra.op_apply(2, (l1, l2))
            S2 = tuple(x if x <= i else x - 1 for x in S if x != i + 1)
            out = {}
            for l3, c in prod.items():
                w2 = w[:j] + ((d1 + d2, l3),) + w[j + 2 :]
                _combo_add(field, out, (S2, w2), c)
            return out
        S2 = tuple(x if x <= i else x - 1 for x in S)
        return {(S2, w): field.one()}

    return DgMap.from_rule(src, dst, 0, rule)


def _cat_degeneracy(field, levels, n, j):
    src = levels[n] if n >= 1 else DgModule.zero(field)
    dst = levels[n + 1]

    def rule(d, label):
        S, w = label
        S2 = tuple(x if x <= j else x + 1 for x in S)
        return {(S2, w): field.one()}

    return DgMap.from_rule(src, dst, 0, rule)


# Eilenberg-Mac Lane ---------------------------------------------------------------


def tensor_simplicial(c, d, dimension_bound=None):
    """Levelwise tensor product of simplicial dg-modules."""
    bound = dimension_bound or min(c.dimension_bound, d.dimension_bound)
    field = c.field
    levels = {n: dg_tensor(c.level(n), d.level(n)) for n in range(bound + 1)}
    faces = {}
    degeneracies = {}
    for n in range(1, bound + 1):
        for i in range(n + 1):
            faces[(n, i)] = _tensor_map(field, levels[n], levels[n - 1], c.face(n, i), d.face(n, i))
    for n in range(0, bound):
        for j in range(n + 1):
            degeneracies[(n, j)] = _tensor_map(
                field, levels[n], levels[n + 1], c.degeneracy(n, j), d.degeneracy(n, j)
            )
    return SimplicialDgModule(field, levels, faces, degeneracies, bound, check=False)


def _tensor_map(field, src, dst, f_map, g_map):
    """f (x) g on levelwise tensors (both degree 0: no Koszul twist)."""
    src_c = f_map.source

    def rule(q, label):
        x, y = label
        # find the degrees of the two halves
        dx = None
        for dd in f_map.source.degrees():
            if x in f_map.source._index.get(dd, {}):
                dx = dd
                break
        dy = q - dx
        out = {}
        fx = f_map.apply(dx, {x: field.one()})
        gy = g_map.apply(dy, {y: field.one()})
        for lx, cx in fx.items():
            for ly, cy in gy.items():
                _combo_add(field, out, (lx, ly), field.mul(cx, cy))
        return out

    return DgMap.from_rule(src, dst, 0, rule)


def eilenberg_maclane(c, d, normalized_c=None, normalized_d=None, normalized_cd=None, bound=None):
    """The shuffle map N(C) (x) N(D) -> N(C (x) D).

    On x (x) y with x of bidegree (p, internal q_x) and y of bidegree
    (q, internal q_y) it is the sum over (p,q)-shuffles (mu, nu) of

        (-1)^{sign(mu,nu) + p q_y} s_nu x (x) s_mu y;

    the internal-degree twist p q_y makes the induced product on
    normalized categorical bars agree with the shuffle product on the
    bar complex under the standard comparison.  Returns the DgMap
    between the total complexes.
    """
    field = c.field
    bound = bound or min(c.dimension_bound, d.dimension_bound)
    nc = normalized_c or NormalizedComplex(c)
    nd = normalized_d or NormalizedComplex(d)
    cd = normalized_cd or NormalizedComplex(tensor_simplicial(c, d, bound))
    source = dg_tensor(nc.module, nd.module)
    target = cd.module

    def rule(total_deg, label):
        (p_lab, q_lab) = label
        p, x = p_lab
        q, y = q_lab
        if p + q > bound:
            return {}
        qx = None
        for dd in c.level(p).degrees():
            if x in c.level(p)._index.get(dd, {}):
                qx = dd
                break
        qy = None
        for dd in d.level(q).degrees():
            if y in d.level(q)._index.get(dd, {}):
                qy = dd
                break
        out = {}
        for mu, nu, sgn in _em_shuffles(p, q):
            sgn = (sgn + p * qy) % 2
            xs = {x: field.one()}
            cur = p
            for idx in nu:
                nxt = {}
                for lx, cx in xs.items():
                    for l2, c2 in c.degeneracy(cur, idx).apply(qx, {lx: cx}).items():
                        _combo_add(field, nxt, l2, c2)
                xs = nxt
                cur += 1
            ys = {y: field.one()}
            cur = q
            for idx in mu:
                nxt = {}
                for ly, cy in ys.items():
                    for l2, c2 in d.degeneracy(cur, idx).apply(qy, {ly: cy}).items():
                        _combo_add(field, nxt, l2, c2)
                ys = nxt
                cur += 1
            for lx, cx in xs.items():
                for ly, cy in ys.items():
                    combo = cd.project(p + q, qx + qy, {(lx, ly): field.mul(cx, cy)})
                    for lab2, c2 in combo.items():
                        _combo_add(
                            field, out, (p + q, lab2), field.mul(field.sign(sgn), field.mul(c2, field.one()))
                        )
        return out

    return DgMap.from_rule(source, target, 0, rule), nc, nd, cd


def _em_shuffles(p, q):
    """(mu, nu, parity): mu goes to the y-side, nu to the x-side.

    mu lists ascending positions taken by the x-block inside
    {0..p+q-1}; s_nu and s_mu are applied in ascending index order
    (the innermost degeneracy first), which respects the level bounds.
    """
    from itertools import combinations

    out = []
    for mu in combinations(range(p + q), p):
        nu = tuple(k for k in range(p + q) if k not in mu)
        parity = sum(mu[a] - a for a in range(len(mu))) % 2
        out.append((mu, nu, parity))
    return out


# the categorical bar with its product -------------------------------------------


class CategoricalBar:
    """C(A) = N(C(A)) with the Eilenberg-Mac Lane product."""

    def __init__(self, algebra, dimension_bound, check=True):
        self.algebra = algebra
        self.field = algebra.field
        self.simplicial = simplicial_categorical_bar(algebra, dimension_bound, check=check)
        self.normalized = NormalizedComplex(self.simplicial)
        self.module = self.normalized.module
        self.dimension_bound = dimension_bound

    def em_product_table(self):
        """Structure constants of the EM product on the normalized complex."""
        f = self.field
        sx = self.simplicial
        em, nc, nd, cd = eilenberg_maclane(sx, sx, self.normalized, self.normalized)
        table = {}
        src = em.source
        for dtot in src.degrees():
            for (u_lab, v_lab) in src.labels(dtot):
                out = em.apply(dtot, {(u_lab, v_lab): f.one()})
                folded = {}
                for (n, lab), c in out.items():
                    # levelwise multiplication C(A)_n (x) C(A)_n -> C(A)_n
                    alg_n = sx.level_algebras.get(n)
                    if alg_n is None:
                        continue
                    (xl, yl) = lab
                    prod = alg_n.op_apply(2, (xl, yl))
                    for l3, c3 in prod.items():
                        q3 = _find_degree(sx.level(n), l3)
                        for l4, c4 in self.normalized.project(n, q3, {l3: c3}).items():
                            _combo_add(f, folded, (n, l4), f.mul(c, c4))
                folded = {k: v for k, v in folded.items() if not f.is_zero(v)}
                if folded:
                    table[(u_lab, v_lab)] = folded
        return table


def _find_degree(module, label):
    for d in module.degrees():
        if label in module._index.get(d, {}):
            return d
    raise KeyError(label)


class CategoricalBarModule:
    """C_R: normalized chains of the simplicial module R(I^{(+) n}).

    Level n is the free R-algebra on n arity-one generators ("colors"),
    materialized through the composition product; faces fold or kill
    colors, degeneracies reindex past an inserted color.  Levels are
    normalized arity by arity.
    """

    def __init__(self, operad, arity_bound, dimension_bound, check=True):
        from .sigma import compose as sigma_compose, SigmaModule as _SM
        from .dg import DgModule as _DG

        self.operad = operad
        self.field = operad.field
        self.arity_bound = arity_bound
        self.dimension_bound = dimension_bound
        f = self.field
        self.levels = {}
        for n in range(1, dimension_bound + 1):
            colors = _SM(
                f, {1: _DG(f, {0: tuple(("c", j) for j in range(1, n + 1))}, {}, check=False)}, {}, check=False
            )
            self.levels[n] = sigma_compose(operad.sigma, colors, arity_bound)
        self.normalized = {}
        self._normalize(check)

    def _color_map(self, pure_label, mapping):
        """Relabel colors by mapping (None kills); pure -> pure or None."""
        (k, dm, lm), (w, inner) = pure_label
        new_inner = []
        for (a, d, (tag, j)) in inner:
            out = mapping.get(j)
            if out is None:
                return None
            new_inner.append((a, d, ("c", out)))
        return ((k, dm, lm), (w, tuple(new_inner)))

    def _face_map(self, n, i):
        """d_i on pure labels of level n, valued in level n-1 classes."""
        if i == 0:
            mapping = {j: (j - 1 if j > 1 else None) for j in range(1, n + 1)}
        elif i == n:
            mapping = {j: (j if j < n else None) for j in range(1, n + 1)}
        else:
            mapping = {j: (j if j <= i else j - 1) for j in range(1, n + 1)}
        return mapping

    def _degeneracy_map(self, n, j):
        return {k: (k if k <= j else k + 1) for k in range(1, n + 1)}

    def _normalize(self, check):
        f = self.field
        for r in range(1, self.arity_bound + 1):
            levels = {0: DgModule.zero(f)}
            for n in range(1, self.dimension_bound + 1):
                levels[n] = self.levels[n].sigma.component(r)
            faces = {}
            degeneracies = {}
            for n in range(1, self.dimension_bound + 1):
                for i in range(n + 1):
                    mapping = self._face_map(n, i)
                    faces[(n, i)] = self._induced(r, n, n - 1, mapping)
            for n in range(0, self.dimension_bound):
                for j in range(n + 1):
                    mapping = self._degeneracy_map(n, j)
                    degeneracies[(n, j)] = self._induced(r, n, n + 1, mapping)
            sx = SimplicialDgModule(f, levels, faces, degeneracies, self.dimension_bound, check=check)
            self.normalized[r] = NormalizedComplex(sx)

    def _induced(self, r, n_src, n_dst, mapping):
        f = self.field
        src = self.levels[n_src].sigma.component(r) if n_src >= 1 else DgModule.zero(f)
        dst = self.levels[n_dst].sigma.component(r) if n_dst >= 1 else DgModule.zero(f)
        if n_src < 1 or n_dst < 1:
            return DgMap(src, dst, 0, {})

        def rule(d, label):
            moved = self._color_map(label, mapping)
            if moved is None:
                return {}
            return self.levels[n_dst].project(r, d, {moved: f.one()})

        return DgMap.from_rule(src, dst, 0, rule)

    def level_dims(self, n):
        return self.levels[n].sigma.dims()

    def degeneracies_split_injective(self):
        """Every s_j is injective levelwise (free on a summand inclusion)."""
        for r in range(1, self.arity_bound + 1):
            for n in range(1, self.dimension_bound):
                src = self.levels[n].sigma.component(r)
                for j in range(n + 1):
                    m = self._induced(r, n, n + 1, self._degeneracy_map(n, j))
                    for d in src.degrees():
                        if rank(m.block(d)) != src.dim(d):
                            return False
        return True


def categorical_bar_module(operad, arity_bound, dimension_bound, check=True):
    return CategoricalBarModule(operad, arity_bound, dimension_bound, check=check)


def cat_bar_module_vs_bar_module(cat_mod, bar_mod):
    """N(C_Com) ~= B_Com arity by arity: explicit chain isomorphism.

    The bar word with letters of arities (a_1..a_m) routed by w maps to
    the class of the pure level-m element whose input p' carries the
    color of the letter owning value block position p'.
    """
    f = cat_mod.field
    for r in range(1, cat_mod.arity_bound + 1):
        bcomp = bar_mod.component(r)
        ncomp = cat_mod.normalized[r].module
        blocks = {}
        for d in bcomp.degrees():
            mat = SparseMatrix.zero(f, ncomp.dim(d), bcomp.dim(d))
            for col, (m, (w, inner)) in enumerate(bcomp.labels(d)):
                sizes = tuple(t[0] for t in inner)
                color_of_pos = []
                acc = 0
                owner = {}
                for j, a in enumerate(sizes):
                    for v in range(acc + 1, acc + a + 1):
                        owner[v] = j + 1
                    acc += a
                colors = tuple(("c", owner[p]) for p in range(1, r + 1))
                pure = ((r, 0, "e"), (w, tuple((1, 0, c) for c in colors)))
                cls = cat_mod.levels[m].project(r, 0, {pure: f.one()})
                for lab2, c2 in cls.items():
                    for lab3, c3 in cat_mod.normalized[r].project(m, 0, {lab2: c2}).items():
                        mat.add_to(ncomp.index(d, (m, lab3)), col, c3)
            blocks[d] = mat
        iso = DgMap(bcomp, ncomp, 0, blocks)
        if not iso.is_chain_map():
            raise AssertionError("C_Com vs B_Com: not a chain map at arity %d" % r)
        if not iso.is_iso():
            raise AssertionError("C_Com vs B_Com: not bijective at arity %d" % r)
    return True


def bar_cat_comparison(algebra, window, compare_products=True, product_weight_cap=3):
    """B(A) vs N(C(A)): the signed basis bijection, as dg-algebras.

    Builds both sides at the sound weight bound for `window`, maps the
    bar word a_1..a_n to (-1)^{sum j |a_j|} times the class of the full
    tensor summand at level n, and verifies: chain iso; and (optionally)
    that the Eilenberg-Mac Lane product corresponds to the shuffle
    product for words of weight up to the cap.  Returns
    (bar_complex, categorical, iso).
    """
    from .bar import bar, shuffle_word_product, sound_weight_bound
    from .dg import DegreeWindow

    f = algebra.field
    susp = [d + 1 for d in algebra.module.degrees()]
    wb = sound_weight_bound(susp, window)
    if wb is None:
        raise NotCommutative("mixed-sign degrees: supply a commutative model")
    full = DegreeWindow(min(min(susp), wb * min(susp)), max(max(susp), wb * max(susp)))
    b = bar(algebra, full, weight_bound=wb)
    cat = CategoricalBar(algebra, wb)

    def iso_rule(d, word):
        n = len(word)
        sgn = f.sign(sum((j + 1) * word[j][0] for j in range(n)))
        S = tuple(range(1, n + 1))
        return {(n, (S, word)): sgn}

    iso = DgMap.from_rule(b.module, cat.module, 0, iso_rule)
    if not iso.is_chain_map():
        raise AssertionError("bar -> categorical bar comparison is not a chain map")
    if not iso.is_iso():
        raise AssertionError("bar -> categorical bar comparison is not bijective")
    if compare_products:
        em_table = cat.em_product_table()
        for du in b.module.degrees():
            for u in b.module.labels(du):
                if len(u) > product_weight_cap:
                    continue
                for dv in b.module.degrees():
                    for v in b.module.labels(dv):
                        if len(v) > product_weight_cap or len(u) + len(v) > wb:
                            continue
                        if du + dv not in b.module.basis:
                            continue
                        shuffle = shuffle_word_product(f, u, v)
                        shuffle = {w: c for w, c in shuffle.items() if w in b.weight_of}
                        lhs = {}
                        for w, c in shuffle.items():
                            for lab, c2 in iso_rule(du + dv, w).items():
                                _combo_add(f, lhs, lab, f.mul(c, c2))
                        (u_img,), (v_img,) = list(iso_rule(du, u)), list(iso_rule(dv, v))
                        cu = iso_rule(du, u)[u_img]
                        cv = iso_rule(dv, v)[v_img]
                        rhs = {}
                        for lab, c in em_table.get((u_img, v_img), {}).items():
                            _combo_add(f, rhs, lab, f.mul(f.mul(cu, cv), c))
                        if lhs != rhs:
                            raise AssertionError(
                                "product mismatch at %r * %r: %r vs %r" % (u, v, lhs, rhs)
                            )
    return b, cat, iso
