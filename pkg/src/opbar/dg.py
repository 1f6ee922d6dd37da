"""Differential graded modules over an exact coefficient field.

Grading is lower (homological): the differential has degree -1.  Upper
graded (cochain) data is imported via C^n -> C_{-n} at the boundary of
the simplicial module, so everything downstream sees one convention.

A DgModule stores a finite basis per degree inside its support window
and is zero outside; constructions that are infinite in nature (bar
complexes) choose finite truncations *before* building a DgModule, and
their soundness rules live with them.

Sign conventions, fixed once:
  * tensor differential      d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy
  * operator evaluation      (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)
  * suspension               d(s x) = -s(d x)
  * symmetry                 x (x) y -> (-1)^{|x||y|} y (x) x
Every constructor re-checks d^2 = 0, which pins the conventions in
practice.
"""

from __future__ import annotations

from .errors import CompositionNotZero, FieldMismatch
from .linalg import SparseMatrix, homology_dimension


class DegreeWindow:
    """Closed degree interval [lo, hi]."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if lo > hi:
            raise ValueError("empty window [%d, %d]" % (lo, hi))
        self.lo = lo
        self.hi = hi

    def __contains__(self, d):
        return self.lo <= d <= self.hi

    def __eq__(self, other):
        return isinstance(other, DegreeWindow) and (self.lo, self.hi) == (other.lo, other.hi)

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def intersect(self, other):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return DegreeWindow(lo, hi)

    def __repr__(self):
        return "[%d, %d]" % (self.lo, self.hi)


class DgModule:
    """Finite dg-module: ordered basis labels per degree plus differential.

    `basis` maps degree -> tuple of hashable labels; `diff` maps degree d
    -> SparseMatrix representing C_d -> C_{d-1} in the stored basis
    orders.  Degrees absent from `basis` are zero.
    """

    def __init__(self, field, basis, diff, check=True):
        self.field = field
        self.basis = {d: tuple(labels) for d, labels in basis.items() if labels}
        self.diff = {}
        for d, m in diff.items():
            if m is None or m.is_zero():
                continue
            self.diff[d] = m
        self._index = {
            d: {label: i for i, label in enumerate(labels)} for d, labels in self.basis.items()
        }
        for d, m in self.diff.items():
            if m.cols != self.dim(d) or m.rows != self.dim(d - 1):
                raise ValueError("differential block at degree %d has wrong shape" % d)
        if check:
            self.check_differential()

    # basic queries --------------------------------------------------------

    def degrees(self):
        return sorted(self.basis)

    def dim(self, d):
        return len(self.basis.get(d, ()))

    def total_dim(self):
        return sum(len(v) for v in self.basis.values())

    def window(self):
        if not self.basis:
            return None
        ds = self.degrees()
        return DegreeWindow(ds[0], ds[-1])

    def index(self, d, label):
        return self._index[d][label]

    def labels(self, d):
        return self.basis.get(d, ())

    def diff_block(self, d):
        m = self.diff.get(d)
        if m is None:
            return SparseMatrix.zero(self.field, self.dim(d - 1), self.dim(d))
        return m

    def is_zero(self):
        return not self.basis

    def check_differential(self):
        for d in list(self.diff):
            below = self.diff.get(d - 1)
            if below is not None and not below.matmul(self.diff[d]).is_zero():
                raise CompositionNotZero("d^2 != 0 from degree %d" % d)

    # element helpers -------------------------------------------------------

    def vector(self, d, combo):
        """{label: scalar} -> sparse index vector in degree d."""
        idx = self._index.get(d, {})
        return {idx[l]: c for l, c in combo.items() if not self.field.is_zero(c)}

    def combo(self, d, vec):
        labels = self.basis.get(d, ())
        return {labels[i]: c for i, c in vec.items()}

    def apply_diff(self, d, combo):
        return self.combo(d - 1, self.diff_block(d).apply(self.vector(d, combo)))

    # constructions ----------------------------------------------------------

    @staticmethod
    def zero(field):
        return DgModule(field, {}, {})

    @staticmethod
    def ground(field, label="1", degree=0):
        return DgModule(field, {degree: (label,)}, {})

    @staticmethod
    def from_data(field, elements, diff_map=None, check=True):
        """Build from [(label, degree)] and {label: {label2: coeff}}."""
        basis = {}
        degree_of = {}
        for label, d in elements:
            basis.setdefault(d, []).append(label)
            if label in degree_of:
                raise ValueError("duplicate label %r" % (label,))
            degree_of[label] = d
        mod = DgModule(field, basis, {}, check=False)
        diff = {}
        for src, targets in (diff_map or {}).items():
            d = degree_of[src]
            m = diff.setdefault(d, SparseMatrix.zero(field, mod.dim(d - 1), mod.dim(d)))
            for dst, c in targets.items():
                if degree_of[dst] != d - 1:
                    raise ValueError("differential entry %r -> %r does not drop degree by 1" % (src, dst))
                m.add_to(mod.index(d - 1, dst), mod.index(d, src), c)
        return DgModule(field, basis, diff, check=check)

    def truncate(self, window):
        """Brutal degree truncation; homology correct strictly inside."""
        basis = {d: labels for d, labels in self.basis.items() if d in window}
        diff = {d: m for d, m in self.diff.items() if d in window and (d - 1) in window}
        return DgModule(self.field, basis, diff, check=False)

    def shift_labels(self, wrap):
        """Relabel every basis element by wrap(label); structure unchanged."""
        basis = {d: tuple(wrap(l) for l in labels) for d, labels in self.basis.items()}
        return DgModule(self.field, basis, dict(self.diff), check=False)

    def direct_sum(self, other, tag_left="L", tag_right="R"):
        if self.field != other.field:
            raise FieldMismatch("direct_sum over different fields")
        basis = {}
        for d in sorted(set(self.basis) | set(other.basis)):
            basis[d] = tuple((tag_left, l) for l in self.labels(d)) + tuple(
                (tag_right, l) for l in other.labels(d)
            )
        mod = DgModule(self.field, basis, {}, check=False)
        diff = {}
        for d in sorted(set(self.diff) | set(other.diff)):
            m = SparseMatrix.zero(self.field, mod.dim(d - 1), mod.dim(d))
            for (i, j), v in self.diff_block(d).entries.items():
                m.add_to(i, j, v)
            off_r, off_c = self.dim(d - 1), self.dim(d)
            for (i, j), v in other.diff_block(d).entries.items():
                m.add_to(i + off_r, j + off_c, v)
            diff[d] = m
        return DgModule(self.field, basis, diff, check=False)

    def __repr__(self):
        w = self.window()
        return "DgModule(%r, dims %s)" % (
            self.field,
            {d: self.dim(d) for d in self.degrees()} if w else "0",
        )


class DgMap:
    """Homogeneous map of dg-modules of a fixed degree.

    `blocks` maps source degree d -> SparseMatrix source_d ->
    target_{d+degree}.  A degree-k chain map satisfies
    d f = (-1)^k f d.
    """

    def __init__(self, source, target, degree, blocks):
        self.source = source
        self.target = target
        self.degree = degree
        self.blocks = {}
        for d, m in blocks.items():
            if m is None or m.is_zero():
                continue
            if m.cols != source.dim(d) or m.rows != target.dim(d + degree):
                raise ValueError("block at degree %d has wrong shape" % d)
            self.blocks[d] = m

    def block(self, d):
        m = self.blocks.get(d)
        if m is None:
            return SparseMatrix.zero(self.source.field, self.target.dim(d + self.degree), self.source.dim(d))
        return m

    @staticmethod
    def from_rule(source, target, degree, rule):
        """rule(d, label) -> {target_label: coeff} in degree d+degree."""
        blocks = {}
        for d in source.degrees():
            td = d + degree
            m = SparseMatrix.zero(source.field, target.dim(td), source.dim(d))
            for j, label in enumerate(source.labels(d)):
                for out_label, c in rule(d, label).items():
                    m.add_to(target.index(td, out_label), j, c)
            blocks[d] = m
        return DgMap(source, target, degree, blocks)

    @staticmethod
    def identity(module):
        return DgMap(
            module,
            module,
            0,
            {d: SparseMatrix.identity(module.field, module.dim(d)) for d in module.degrees()},
        )

    def apply(self, d, combo):
        vec = self.block(d).apply(self.source.vector(d, combo))
        return self.target.combo(d + self.degree, vec)

    def compose(self, other):
        """self after other."""
        if other.target is not self.source and other.target.basis != self.source.basis:
            raise ValueError("composition source/target mismatch")
        blocks = {}
        for d in other.source.degrees():
            blocks[d] = self.block(d + other.degree).matmul(other.block(d))
        return DgMap(other.source, self.target, self.degree + other.degree, blocks)

    def add(self, other):
        blocks = {}
        for d in set(self.blocks) | set(other.blocks):
            blocks[d] = self.block(d).add(other.block(d))
        return DgMap(self.source, self.target, self.degree, blocks)

    def scale(self, c):
        return DgMap(self.source, self.target, self.degree, {d: m.scale(c) for d, m in self.blocks.items()})

    def is_chain_map(self):
        f = self.source.field
        sign = f.sign(self.degree)
        for d in self.source.degrees():
            lhs = self.target.diff_block(d + self.degree).matmul(self.block(d))
            rhs = self.block(d - 1).matmul(self.source.diff_block(d)).scale(sign)
            if not lhs.sub(rhs).is_zero():
                return False
        return True

    def is_iso(self):
        """Bijective in every degree (degree-0 maps only)."""
        from .linalg import rank as _rank

        if self.degree != 0:
            return False
        degs = set(self.source.degrees()) | set(self.target.degrees())
        for d in degs:
            if self.source.dim(d) != self.target.dim(d):
                return False
            if _rank(self.block(d)) != self.source.dim(d):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, DgMap) or self.degree != other.degree:
            return False
        for d in set(self.blocks) | set(other.blocks):
            if not self.block(d).sub(other.block(d)).is_zero():
                return False
        return True


# tensor products -----------------------------------------------------------


def tensor(a, b, window=None):
    """Tensor product with the Koszul differential; labels are pairs."""
    if a.field != b.field:
        raise FieldMismatch("tensor over different fields")
    field = a.field
    basis = {}
    degree_pairs = {}
    for da in a.degrees():
        for db in b.degrees():
            d = da + db
            if window is not None and d not in window:
                continue
            degree_pairs.setdefault(d, []).append((da, db))
    for d in sorted(degree_pairs):
        labels = []
        for da, db in degree_pairs[d]:
            for x in a.labels(da):
                for y in b.labels(db):
                    labels.append((x, y))
        basis[d] = tuple(labels)
    mod = DgModule(field, basis, {}, check=False)
    diff = {}
    for d in sorted(basis):
        m = SparseMatrix.zero(field, mod.dim(d - 1), mod.dim(d))
        for da, db in degree_pairs[d]:
            da_block = a.diff_block(da)
            db_block = b.diff_block(db)
            sgn = field.sign(da)
            for x in a.labels(da):
                for y in b.labels(db):
                    j = mod.index(d, (x, y))
                    for i, v in da_block.column(a.index(da, x)).items():
                        lab = (a.labels(da - 1)[i], y)
                        if mod.dim(d - 1) and lab in mod._index.get(d - 1, {}):
                            m.add_to(mod.index(d - 1, lab), j, v)
                    for i, v in db_block.column(b.index(db, y)).items():
                        lab = (x, b.labels(db - 1)[i])
                        if mod.dim(d - 1) and lab in mod._index.get(d - 1, {}):
                            m.add_to(mod.index(d - 1, lab), j, field.mul(sgn, v))
        if not m.is_zero():
            diff[d] = m
    return DgModule(field, basis, diff, check=False)


def dg_tensor_swap(a, b, ab=None, ba=None):
    """The symmetry chain isomorphism a(x)b -> b(x)a with Koszul signs."""
    ab = ab if ab is not None else tensor(a, b)
    ba = ba if ba is not None else tensor(b, a)
    field = a.field

    degree_of_a = {l: d for d in a.degrees() for l in a.labels(d)}
    degree_of_b = {l: d for d in b.degrees() for l in b.labels(d)}

    def rule(d, label):
        x, y = label
        sgn = field.sign(degree_of_a[x] * degree_of_b[y])
        return {(y, x): sgn}

    return DgMap.from_rule(ab, ba, 0, rule)


def suspension(a, wrap=None):
    """Degree shift by +1 with d(s x) = -s(d x).

    `wrap` renames basis labels; default tags them with 's'.
    """
    if wrap is None:
        wrap = lambda l: ("s", l)
    field = a.field
    basis = {d + 1: tuple(wrap(l) for l in a.labels(d)) for d in a.degrees()}
    diff = {d + 1: a.diff_block(d).scale(field.sign(1)) for d in a.diff}
    return DgModule(field, basis, diff, check=False)


def homology(a, window=None):
    """dim H_d for every degree d with d-1, d, d+1 inside the support.

    With `window` given, degrees are restricted to it; the module is
    zero outside its basis support, so boundary degrees are exact too.
    """
    out = {}
    w = a.window()
    if w is None:
        return {d: 0 for d in window} if window else {}
    degrees = list(window) if window is not None else list(w)
    for d in degrees:
        h = homology_dimension(a.diff_block(d + 1), a.diff_block(d))
        out[d] = h
    return out
