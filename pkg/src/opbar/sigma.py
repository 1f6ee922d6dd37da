"""Sigma_*-modules: arity-indexed dg-modules with symmetric group actions.

Conventions:
  * components are indexed by arities n >= 1 (the non-unitary setting:
    the arity-0 component is always zero);
  * symmetric groups act on the RIGHT; generator actions (adjacent
    transpositions s_1..s_{n-1}) are stored, arbitrary permutations act
    through their transposition words;
  * tensor products of Sigma-modules are materialized on the induced
    basis: a word label is (w, inner) where inner lists the factors'
    (arity, degree, label) triples and w is the canonical representative
    of the right coset (Sigma_{a_1} x ... x Sigma_{a_k})\\Sigma_r,
    the one whose inverse is increasing on each value block.

Routing semantics for (x (x) w): the tensor x expects inputs in
consecutive blocks; block position v is fed by global input w^{-1}(v).
"""

from __future__ import annotations

from .dg import DgModule
from .errors import FieldMismatch
from .linalg import SparseMatrix, quotient_data
from . import perm


def _combo_add(field, acc, label, coeff):
    cur = acc.get(label)
    new = field.add(cur, coeff) if cur is not None else coeff
    if field.is_zero(new):
        acc.pop(label, None)
    else:
        acc[label] = new


class SigmaModule:
    """Collection {M(n)} of dg-modules with right Sigma_n actions.

    `actions` maps (n, i) to {(degree, label): {label2: coeff}}; entries
    missing from the map act as the identity on that basis element.
    Actions of built-in objects are signed basis permutations; computed
    quotients may carry general invertible matrices.
    """

    def __init__(self, field, components, actions=None, check=True):
        self.field = field
        self.components = {n: c for n, c in components.items() if not c.is_zero()}
        self.actions = actions or {}
        if check:
            self.check_relations()

    def arities(self):
        return sorted(self.components)

    def arity_bound(self):
        return max(self.components) if self.components else 0

    def component(self, n):
        c = self.components.get(n)
        return c if c is not None else DgModule.zero(self.field)

    def dims(self):
        return {n: {d: c.dim(d) for d in c.degrees()} for n, c in sorted(self.components.items())}

    def total_dim(self, n):
        return self.component(n).total_dim()

    def is_zero(self):
        return not self.components

    # actions ---------------------------------------------------------------

    def act_adjacent(self, n, i, d, label):
        """Right action of s_i on a basis element; returns a combo."""
        table = self.actions.get((n, i))
        if table is None:
            return {label: self.field.one()}
        out = table.get((d, label))
        if out is None:
            return {label: self.field.one()}
        return dict(out)

    def act_perm_combo(self, n, sigma, d, combo):
        """combo . sigma by the stored right action."""
        f = self.field
        cur = dict(combo)
        for i in perm.transposition_word(sigma):
            nxt = {}
            for label, c in cur.items():
                for label2, c2 in self.act_adjacent(n, i, d, label).items():
                    _combo_add(f, nxt, label2, f.mul(c, c2))
            cur = nxt
        return cur

    def suspend(self):
        """Degree shift +1 on every component, labels wrapped with 's'.

        The group actions are unchanged (the suspension coordinate has
        no inputs); differentials flip sign per the suspension rule.
        """
        from .dg import suspension

        comps = {n: suspension(c) for n, c in self.components.items()}
        actions = {}
        for (n, i), table in self.actions.items():
            actions[(n, i)] = {
                (d + 1, ("s", label)): {("s", l2): c for l2, c in out.items()}
                for (d, label), out in table.items()
            }
        return SigmaModule(self.field, comps, actions, check=False)

    def check_relations(self):
        """Involution, braid and commutation relations; action vs diff."""
        f = self.field
        for n, comp in self.components.items():
            gens = list(range(1, n))
            for d in comp.degrees():
                for label in comp.labels(d):
                    for i in gens:
                        once = self.act_adjacent(n, i, d, label)
                        twice = {}
                        for l2, c in once.items():
                            for l3, c3 in self.act_adjacent(n, i, d, l2).items():
                                _combo_add(f, twice, l3, f.mul(c, c3))
                        if twice != {label: f.one()}:
                            raise ValueError("s_%d^2 != 1 on %r (arity %d)" % (i, label, n))
            for i in gens:
                for j in gens:
                    if j <= i:
                        continue
                    word_a = [i, j, i] if j == i + 1 else [i, j]
                    word_b = [j, i, j] if j == i + 1 else [j, i]
                    for d in comp.degrees():
                        for label in comp.labels(d):
                            if self._act_word(n, word_a, d, label) != self._act_word(n, word_b, d, label):
                                raise ValueError(
                                    "braid/commutation failure at s_%d,s_%d (arity %d)" % (i, j, n)
                                )
            # action commutes with the differential
            for i in gens:
                for d in list(comp.diff):
                    for label in comp.labels(d):
                        lhs = {}
                        for l2, c in self.act_adjacent(n, i, d, label).items():
                            for l3, c3 in comp.apply_diff(d, {l2: f.one()}).items():
                                _combo_add(f, lhs, l3, f.mul(c, c3))
                        rhs = {}
                        for l2, c in comp.apply_diff(d, {label: f.one()}).items():
                            for l3, c3 in self.act_adjacent(n, i, d - 1, l2).items():
                                _combo_add(f, rhs, l3, f.mul(c, c3))
                        if lhs != rhs:
                            raise ValueError("action does not commute with diff (arity %d)" % n)

    def _act_word(self, n, word, d, label):
        f = self.field
        cur = {label: f.one()}
        for i in word:
            nxt = {}
            for l, c in cur.items():
                for l2, c2 in self.act_adjacent(n, i, d, l).items():
                    _combo_add(f, nxt, l2, f.mul(c, c2))
            cur = nxt
        return cur

    def __repr__(self):
        return "SigmaModule(%r, arities %s)" % (self.field, self.arities())


def unit_sigma(field, label="1"):
    """The composition unit I: k in arity 1, degree 0."""
    return SigmaModule(field, {1: DgModule.ground(field, label)}, {}, check=False)


# ---------------------------------------------------------------------------
# word spaces: tensor powers / products of Sigma-modules


class WordSpace:
    """N_1 (x) ... (x) N_k materialized arity by arity.

    Basis label at arity r: (w, inner), inner a k-tuple of
    (arity, degree, label) triples into the factors, w the canonical
    right-coset representative for the block sizes.
    """

    def __init__(self, field, factors, arity_bound, check=False):
        if not factors:
            raise ValueError("need at least one factor")
        for fac in factors:
            if fac.field != field:
                raise FieldMismatch("word space factors over different fields")
        self.field = field
        self.factors = list(factors)
        self.arity_bound = arity_bound
        self._components = {}
        self._build()
        self._sigma = None
        if check:
            self.as_sigma().check_relations()

    # construction -----------------------------------------------------------

    def _build(self):
        k = len(self.factors)
        for r in range(k, self.arity_bound + 1):
            by_degree = {}
            for sizes in self._arity_splits(r):
                cosets = perm.multishuffles(sizes)
                inner_choices = []
                for j, a in enumerate(sizes):
                    comp = self.factors[j].component(a)
                    triples = []
                    for d in comp.degrees():
                        for l in comp.labels(d):
                            triples.append((a, d, l))
                    inner_choices.append(triples)
                for inner in _product(inner_choices):
                    d_total = sum(t[1] for t in inner)
                    for w in cosets:
                        by_degree.setdefault(d_total, []).append((w, inner))
            if not by_degree:
                continue
            basis = {d: tuple(labels) for d, labels in by_degree.items()}
            mod = DgModule(self.field, basis, {}, check=False)
            diff = {}
            for d in sorted(basis):
                if not mod.dim(d - 1) and not mod.dim(d):
                    continue
                m = SparseMatrix.zero(self.field, mod.dim(d - 1), mod.dim(d))
                for label in basis[d]:
                    for lab2, c in self.diff_combo(label).items():
                        m.add_to(mod.index(d - 1, lab2), mod.index(d, label), c)
                if not m.is_zero():
                    diff[d] = m
            self._components[r] = DgModule(self.field, basis, diff, check=False)

    def _arity_splits(self, r):
        k = len(self.factors)
        out = []

        def rec(j, remaining, acc):
            if j == k:
                if remaining == 0:
                    out.append(tuple(acc))
                return
            for a in self.factors[j].arities():
                if a > remaining - (k - j - 1):
                    continue
                rec(j + 1, remaining - a, acc + [a])

        rec(0, r, [])
        return out

    def component(self, r):
        c = self._components.get(r)
        return c if c is not None else DgModule.zero(self.field)

    def arities(self):
        return sorted(self._components)

    # label operations --------------------------------------------------------

    def diff_combo(self, label):
        """Koszul differential: sum over factors of the internal diffs."""
        f = self.field
        w, inner = label
        out = {}
        prefix = 0
        for j, (a, d, l) in enumerate(inner):
            comp = self.factors[j].component(a)
            for l2, c in comp.apply_diff(d, {l: f.one()}).items():
                lab2 = (w, inner[:j] + ((a, d - 1, l2),) + inner[j + 1 :])
                _combo_add(f, out, lab2, f.mul(f.sign(prefix), c))
            prefix += d
        return out

    def right_act(self, r, sigma, label):
        """(x (x) w) . sigma = (x . h) (x) w' where w sigma = h w'."""
        f = self.field
        w, inner = label
        sizes = tuple(t[0] for t in inner)
        h_parts, w2 = perm.coset_canonicalize(perm.compose(w, sigma), sizes)
        expanded = [
            self.factors[j].act_perm_combo(inner[j][0], h_parts[j], inner[j][1], {inner[j][2]: f.one()})
            for j in range(len(inner))
        ]
        result = {}
        for choice in _combo_product(expanded):
            c_total = f.one()
            triples = []
            for j, (l2, c2) in enumerate(choice):
                c_total = f.mul(c_total, c2)
                triples.append((inner[j][0], inner[j][1], l2))
            _combo_add(f, result, (w2, tuple(triples)), c_total)
        return result

    def factor_swap(self, j, label):
        """Swap factors j and j+1 (1-based); Koszul sign, coset recomputed.

        Only valid when the two factor modules coincide.
        """
        f = self.field
        w, inner = label
        a1, d1, l1 = inner[j - 1]
        a2, d2, l2 = inner[j]
        sizes = tuple(t[0] for t in inner)
        offset = sum(sizes[: j - 1])
        # rho maps the new value blocks order-preservingly onto the old
        # ones; the new routing is w' = rho^{-1} o w, which is again
        # canonical.
        rho_local = tuple([v + a1 for v in range(1, a2 + 1)] + [v for v in range(1, a1 + 1)])
        rho = perm.block_sum(
            [perm.identity(offset), rho_local, perm.identity(sum(sizes) - offset - a1 - a2)]
        )
        w2 = perm.compose(perm.inverse(rho), w)
        new_inner = inner[: j - 1] + ((a2, d2, l2), (a1, d1, l1)) + inner[j + 1 :]
        return {(w2, new_inner): f.sign(d1 * d2)}

    def factor_perm_combo(self, sigma_k, label):
        """Permute the factors by sigma_k (left action via adjacent swaps)."""
        f = self.field
        word = perm.transposition_word(sigma_k)
        cur = {label: f.one()}
        for i in word:
            nxt = {}
            for lab, c in cur.items():
                for lab2, c2 in self.factor_swap(i, lab).items():
                    _combo_add(f, nxt, lab2, f.mul(c, c2))
            cur = nxt
        return cur

    def apply_at(self, label, i, rlen, op, op_degree):
        """Apply an operator to the contiguous factors i..i+rlen-1.

        `op(u, sub_inner)` consumes the inner canonical representative u
        and the sub-factors' triples, returning a combo over
        (degree, label) pairs in the merged target component (whose
        arity is the sum of the consumed arities).  The Koszul prefix
        sign of moving the degree-`op_degree` operator past the first
        i-1 factors is applied here.  Result combos are labeled for the
        word space with the consumed factors replaced by one factor.
        """
        f = self.field
        w, inner = label
        sizes = tuple(t[0] for t in inner)
        u, w_coarse, _ = perm.refine_decompose(w, sizes, i, rlen)
        sub = inner[i - 1 : i - 1 + rlen]
        merged_arity = sum(t[0] for t in sub)
        prefix = sum(t[1] for t in inner[: i - 1])
        sgn = f.sign(op_degree * prefix)
        out = {}
        for (d2, l2), c in op(u, sub).items():
            lab2 = (w_coarse, inner[: i - 1] + ((merged_arity, d2, l2),) + inner[i - 1 + rlen :])
            _combo_add(f, out, lab2, f.mul(sgn, c))
        return out

    def compose_into_slot(self, label, slot, p_arity, p_degree, p_label, action_fn):
        """Right operadic action: insert p into global input `slot`.

        `action_fn(j_factor, local_slot, factor_triple, p)` returns the
        combo of (degree,label) pairs in the owning factor's component
        at arity a_j + p_arity - 1 after partial composition.  The
        Koszul sign of moving p past the factors to the right of the
        owner is applied here; the coset becomes w o_slot id, then is
        re-canonicalized.
        """
        f = self.field
        w, inner = label
        sizes = tuple(t[0] for t in inner)
        v = w[slot - 1]
        # owning factor: the value block containing v
        acc = 0
        owner = None
        for j, a in enumerate(sizes):
            if v <= acc + a:
                owner = j
                local = v - acc
                break
            acc += a
        tail_deg = sum(t[1] for t in inner[owner + 1 :])
        sgn = f.sign(p_degree * tail_deg)
        w_new = perm.block_substitution(w, slot, perm.identity(p_arity))
        new_sizes = sizes[:owner] + (sizes[owner] + p_arity - 1,) + sizes[owner + 1 :]
        h_parts, w_canon = perm.coset_canonicalize(w_new, new_sizes)
        out = {}
        for (d2, l2), c in action_fn(owner, local, inner[owner], (p_arity, p_degree, p_label)).items():
            # apply h blockwise; only the owner block can be nontrivial
            combo = {l2: f.mul(sgn, c)}
            factor_combos = []
            for j in range(len(inner)):
                if j == owner:
                    fac_combo = self.factors[j].act_perm_combo(new_sizes[j], h_parts[j], d2, combo)
                    factor_combos.append([((d2, l3), c3) for l3, c3 in fac_combo.items()])
                else:
                    a_j, d_j, l_j = inner[j]
                    fac_combo = self.factors[j].act_perm_combo(a_j, h_parts[j], d_j, {l_j: f.one()})
                    factor_combos.append([((d_j, l3), c3) for l3, c3 in fac_combo.items()])
            for choice in _product(factor_combos):
                c_total = f.one()
                triples = []
                for j, ((dd, ll), cc) in enumerate(choice):
                    c_total = f.mul(c_total, cc)
                    triples.append((new_sizes[j], dd, ll))
                _combo_add(f, out, (w_canon, tuple(triples)), c_total)
        return out

    def as_sigma(self):
        """Materialize as a SigmaModule (actions computed via cosets)."""
        if self._sigma is not None:
            return self._sigma
        actions = {}
        for r in self.arities():
            comp = self._components[r]
            for i in range(1, r):
                sigma = perm.apply_adjacent(perm.identity(r), i)
                table = {}
                for d in comp.degrees():
                    for label in comp.labels(d):
                        out = self.right_act(r, sigma, label)
                        if out != {label: self.field.one()}:
                            table[(d, label)] = out
                if table:
                    actions[(r, i)] = table
        self._sigma = SigmaModule(self.field, dict(self._components), actions, check=False)
        return self._sigma


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product(lists[1:]):
            yield (head,) + tail


def _combo_product(combos):
    """Cartesian product of {label: coeff} dicts, as tuples of items."""
    item_lists = [list(c.items()) for c in combos]
    return _product(item_lists)


def sigma_tensor(m, n, arity_bound):
    """Tensor product of Sigma-modules on the induced basis."""
    return WordSpace(m.field, [m, n], arity_bound).as_sigma()


class ComposeResult:
    """M o N presented as a quotient of the two-level word space.

    Pure basis labels are (m_triple, word_label) with m_triple =
    (k, degree, label) in M(k) and word_label a basis label of
    N^{(x)k}(r).  The quotient identifies (m.s_i) (x) word with
    m (x) (s_i-factor-permuted word).
    """

    def __init__(self, field, m, n, arity_bound):
        self.field = field
        self.left = m
        self.right = n
        self.arity_bound = arity_bound
        self.word_spaces = {}
        self.big = {}
        self.presentation = {}
        self._build()

    def _build(self):
        f = self.field
        for k in self.left.arities():
            if k > self.arity_bound:
                continue
            self.word_spaces[k] = WordSpace(f, [self.right] * k, self.arity_bound)
        components = {}
        actions = {}
        for r in range(1, self.arity_bound + 1):
            by_degree = {}
            for k, ws in sorted(self.word_spaces.items()):
                wcomp = ws.component(r)
                mcomp = self.left.component(k)
                for dm in mcomp.degrees():
                    for lm in mcomp.labels(dm):
                        for dw in wcomp.degrees():
                            for lw in wcomp.labels(dw):
                                by_degree.setdefault(dm + dw, []).append(((k, dm, lm), lw))
            if not by_degree:
                continue
            kept_basis = {}
            for d in sorted(by_degree):
                bigs = by_degree[d]
                index = {lab: i for i, lab in enumerate(bigs)}
                relations = []
                for (k, dm, lm), lw in bigs:
                    ws = self.word_spaces[k]
                    for i in range(1, k):
                        rel = {}
                        acted_m = self.left.act_adjacent(k, i, dm, lm)
                        for lm2, cm in acted_m.items():
                            _combo_add(f, rel, ((k, dm, lm2), lw), cm)
                        for lw2, cw in ws.factor_swap(i, lw).items():
                            _combo_add(f, rel, ((k, dm, lm), lw2), f.neg(cw))
                        if rel:
                            relations.append({index[lab]: c for lab, c in rel.items()})
                kept, project = quotient_data(f, len(bigs), relations)
                self.presentation[(r, d)] = (bigs, index, kept, project)
                kept_basis[d] = tuple(bigs[i] for i in kept)
            mod = DgModule(f, kept_basis, {}, check=False)
            diff = {}
            for d in sorted(kept_basis):
                rows = mod.dim(d - 1)
                mat = SparseMatrix.zero(f, rows, mod.dim(d))
                for label in kept_basis[d]:
                    for lab2, c in self.project(r, d - 1, self.diff_big(label)).items():
                        mat.add_to(mod.index(d - 1, lab2), mod.index(d, label), c)
                if not mat.is_zero():
                    diff[d] = mat
            components[r] = DgModule(f, kept_basis, diff, check=True)
            for i in range(1, r):
                sigma = perm.apply_adjacent(perm.identity(r), i)
                table = {}
                for d in sorted(kept_basis):
                    for label in kept_basis[d]:
                        (k, dm, lm), lw = label
                        acted = self.word_spaces[k].right_act(r, sigma, lw)
                        combo = {}
                        for lw2, c in acted.items():
                            _combo_add(f, combo, ((k, dm, lm), lw2), c)
                        out = self.project(r, d, combo)
                        if out != {label: f.one()}:
                            table[(d, label)] = out
                if table:
                    actions[(r, i)] = table
        self.sigma = SigmaModule(self.field, components, actions, check=False)

    def diff_big(self, label):
        f = self.field
        (k, dm, lm), lw = label
        out = {}
        mcomp = self.left.component(k)
        for lm2, c in mcomp.apply_diff(dm, {lm: f.one()}).items():
            _combo_add(f, out, ((k, dm - 1, lm2), lw), c)
        sgn = f.sign(dm)
        for lw2, c in self.word_spaces[k].diff_combo(lw).items():
            _combo_add(f, out, ((k, dm, lm), lw2), f.mul(sgn, c))
        return out

    def project(self, r, d, big_combo):
        """Project a combo over pure labels to the kept quotient basis."""
        f = self.field
        pres = self.presentation.get((r, d))
        if pres is None:
            if big_combo:
                raise ValueError("no component at arity %d degree %d" % (r, d))
            return {}
        bigs, index, kept, project = pres
        vec = {}
        for lab, c in big_combo.items():
            j = index[lab]
            for i, v in project.column(j).items():
                cur = vec.get(i)
                nv = f.mul(v, c) if cur is None else f.add(cur, f.mul(v, c))
                vec[i] = nv
        return {bigs[kept[i]]: v for i, v in vec.items() if not f.is_zero(v)}


def compose(m, n, arity_bound):
    """The composition product M o N of Sigma-modules."""
    return ComposeResult(m.field, m, n, arity_bound)
