"""Seeded fixture generators for the verification suites.

All constructions are honest by design: tensor algebras are truncated
by word length (a differential ideal), commutative fixtures are free
graded-commutative algebras truncated the same way, and differentials
come from acyclic generator pairs, so d^2 = 0 and the Leibniz rule hold
exactly rather than by accident of the random draw.
"""

from __future__ import annotations

import random
from itertools import permutations as _permutations

from . import perm
from .dg import DgModule
from .modules import DgAlgebra
from .sigma import SigmaModule


def random_tensor_algebra(field, seed, max_generators=3, length_cap=2):
    """Seeded dg tensor algebra T(V)/(length > cap), dim <= 6ish.

    Generators optionally come in acyclic pairs (dv = u); the
    differential extends as a derivation, and products are word
    concatenation (zero past the cap).
    """
    rng = random.Random(seed)
    gens = []
    diff_pairs = {}
    n_gens = rng.randint(2, max_generators)
    next_deg = rng.randint(1, 2)
    k = 0
    while k < n_gens:
        name = "g%d" % k
        gens.append((name, next_deg))
        if rng.random() < 0.5 and k + 1 < n_gens:
            # acyclic pair: d(g_{k+1}) = g_k, both consumed
            upper = "g%d" % (k + 1)
            gens.append((upper, next_deg + 1))
            diff_pairs[upper] = name
            k += 1
        next_deg = next_deg + rng.randint(0, 2)
        k += 1
    deg = dict(gens)
    layer = [()]
    words = []
    for _ in range(length_cap):
        layer = [w + (g,) for w in layer for g, _ in gens]
        words.extend(layer)
    word_deg = {w: sum(deg[g] for g in w) for w in words}
    module_elements = [(w, word_deg[w]) for w in words]
    diff_map = {}
    f = field
    for w in words:
        targets = {}
        prefix = 0
        for j, g in enumerate(w):
            low = diff_pairs.get(g)
            if low is not None:
                w2 = w[:j] + (low,) + w[j + 1 :]
                c = f.sign(prefix)
                cur = targets.get(w2, f.zero())
                new = f.add(cur, c)
                if f.is_zero(new):
                    targets.pop(w2, None)
                else:
                    targets[w2] = new
            prefix += deg[g]
        if targets:
            diff_map[w] = targets
    module = DgModule.from_data(f, module_elements, diff_map)
    prod = {}
    for u in words:
        for v in words:
            if len(u) + len(v) <= length_cap:
                prod[(u, v)] = {u + v: f.one()}
    return DgAlgebra(f, "assoc", module, {2: prod}, name="T%d" % seed)


def random_commutative_algebra(field, seed, max_generators=3, length_cap=2):
    """Seeded free graded-commutative algebra, length-truncated.

    Monomials are sorted generator words; odd generators square to zero
    unless the characteristic is 2.
    """
    rng = random.Random(seed)
    n_gens = rng.randint(1, max_generators)
    gens = []
    diff_pairs = {}
    deg = {}
    d = rng.randint(1, 3)
    k = 0
    while k < n_gens:
        name = "g%d" % k
        gens.append(name)
        deg[name] = d
        if rng.random() < 0.4 and k + 1 < n_gens:
            upper = "g%d" % (k + 1)
            gens.append(upper)
            deg[upper] = d + 1
            diff_pairs[upper] = name
            k += 1
        d += rng.randint(0, 2)
        k += 1
    char2 = field.p == 2

    def admissible(mono):
        if char2:
            return True
        seen = {}
        for g in mono:
            if deg[g] % 2:
                seen[g] = seen.get(g, 0) + 1
                if seen[g] > 1:
                    return False
        return True

    layer = [()]
    monos = set()
    for _ in range(length_cap):
        layer = [tuple(sorted(m + (g,))) for m in layer for g in gens]
        monos.update(layer)
    monos = sorted(m for m in monos if m and admissible(m))
    mono_deg = {m: sum(deg[g] for g in m) for m in monos}
    f = field

    def merge(u, v):
        """Sorted merge with the Koszul sign of the interleaving."""
        letters = [(g, 0, deg[g]) for g in u] + [(g, 1, deg[g]) for g in v]
        order = sorted(range(len(letters)), key=lambda a: (letters[a][0], letters[a][1]))
        degs = [l[2] for l in letters]
        sigma = [0] * len(letters)
        for newpos, old in enumerate(order):
            sigma[old] = newpos + 1
        sign = perm.koszul_sign_exponent(degs, tuple(sigma))
        merged = tuple(letters[a][0] for a in order)
        return merged, f.sign(sign)

    def sort_in_place(letters):
        """Stable sort of (name, tiebreak, degree) letters; Koszul sign."""
        order = sorted(range(len(letters)), key=lambda a: (letters[a][0], letters[a][1]))
        degs = [l[2] for l in letters]
        sigma = [0] * len(letters)
        for newpos, old in enumerate(order):
            sigma[old] = newpos + 1
        sign = perm.koszul_sign_exponent(degs, tuple(sigma))
        return tuple(letters[a][0] for a in order), f.sign(sign)

    diff_map = {}
    for m in monos:
        targets = {}
        prefix = 0
        for j, g in enumerate(m):
            low = diff_pairs.get(g)
            if low is not None:
                in_place = [(h, pos, deg[h]) for pos, h in enumerate(m[:j])]
                in_place.append((low, j, deg[low]))
                in_place.extend((h, pos + len(m), deg[h]) for pos, h in enumerate(m[j + 1 :]))
                merged, sgn = sort_in_place(in_place)
                if merged not in mono_deg:
                    continue
                c = f.mul(f.sign(prefix), sgn)
                cur = targets.get(merged, f.zero())
                new = f.add(cur, c)
                if f.is_zero(new):
                    targets.pop(merged, None)
                else:
                    targets[merged] = new
            prefix += deg[g]
        if targets:
            diff_map[m] = targets
    module = DgModule.from_data(f, [(m, mono_deg[m]) for m in monos], diff_map)
    prod = {}
    for u in monos:
        for v in monos:
            if len(u) + len(v) > length_cap:
                continue
            merged, sgn = merge(u, v)
            if merged not in mono_deg:
                continue
            prod[(u, v)] = {merged: sgn}
    return DgAlgebra(f, "comm", module, {2: prod}, name="C%d" % seed)


# random Sigma-modules ----------------------------------------------------------


def _orbit_trivial(field, name, degree):
    return ("trivial", name, degree)


def random_sigma_module(field, seed, arity_bound=4, allow_signs=True):
    """Seeded Sigma-module: direct sums of trivial, sign and regular orbits.

    Returns (SigmaModule, description) where description records per
    arity the list of ("trivial" | "sign" | "regular", degree) orbits;
    relations hold by construction.
    """
    rng = random.Random(seed)
    kinds = ["trivial", "regular"] + (["sign"] if allow_signs else [])
    components = {}
    actions = {}
    description = {}
    for n in range(1, arity_bound + 1):
        orbits = []
        for k in range(rng.randint(0, 2)):
            kind = rng.choice(kinds if n > 1 else ["trivial", "regular"])
            degree = rng.randint(-2, 2)
            orbits.append((kind, degree))
        if not orbits:
            continue
        description[n] = orbits
        by_degree = {}
        for idx, (kind, degree) in enumerate(orbits):
            if kind == "regular" and n > 1:
                for w in sorted(_permutations(range(1, n + 1))):
                    by_degree.setdefault(degree, []).append(("o%d" % idx, w))
            else:
                by_degree.setdefault(degree, []).append(("o%d" % idx, kind))
        components[n] = DgModule(field, {d: tuple(ls) for d, ls in by_degree.items()}, {}, check=False)
        for i in range(1, n):
            table = {}
            s_i = perm.apply_adjacent(perm.identity(n), i)
            inv = perm.inverse(s_i)
            for idx, (kind, degree) in enumerate(orbits):
                if kind == "regular" and n > 1:
                    for w in _permutations(range(1, n + 1)):
                        table[(degree, ("o%d" % idx, w))] = {
                            ("o%d" % idx, perm.compose(w, s_i)): field.one()
                        }
                elif kind == "sign":
                    table[(degree, ("o%d" % idx, kind))] = {
                        ("o%d" % idx, kind): field.sign(1)
                    }
            if table:
                actions[(n, i)] = table
    return SigmaModule(field, components, actions, check=True), description


def compose_dims_oracle(field, m_sigma, n_sigma, arity_bound):
    """Brute-force dims of (M o N)(r): full-group relations, flat basis.

    Enumerates the pure two-level basis directly (tuples of factors
    with a full permutation recording the input routing, no canonical
    coset choices) and eliminates the identifications for every group
    element of every symmetric group involved.  Independent of the
    canonical-representative machinery used by the implementation.
    """
    from .linalg import quotient_data

    out = {}
    for r in range(1, arity_bound + 1):
        by_degree = {}
        for k in m_sigma.arities():
            mcomp = m_sigma.component(k)
            splits = _compositions(r, k, [a for a in n_sigma.arities()])
            for sizes in splits:
                factor_triples = [[] for _ in range(k)]
                for j, a in enumerate(sizes):
                    comp = n_sigma.component(a)
                    for d in comp.degrees():
                        for l in comp.labels(d):
                            factor_triples[j].append((a, d, l))
                for dm in mcomp.degrees():
                    for lm in mcomp.labels(dm):
                        for inners in _product_lists(factor_triples):
                            for routing in _permutations(range(1, r + 1)):
                                d = dm + sum(t[1] for t in inners)
                                by_degree.setdefault(d, []).append(
                                    ((k, dm, lm), tuple(inners), routing)
                                )
        for d, bigs in by_degree.items():
            index = {b: i for i, b in enumerate(bigs)}
            relations = []
            for (mt, inners, routing) in bigs:
                k = mt[0]
                sizes = tuple(t[0] for t in inners)
                # (a) inner input action: routing is a torsor coordinate:
                #     x . (h_1 x...x h_k embedded) = blockwise action, routing absorbed
                for j in range(k):
                    a = sizes[j]
                    for i in range(1, a):
                        h = perm.apply_adjacent(perm.identity(a), i)
                        emb = perm.block_sum(
                            [perm.identity(sizes[x]) if x != j else h for x in range(k)]
                        )
                        acted = n_sigma.act_perm_combo(a, h, inners[j][1], {inners[j][2]: field.one()})
                        rel = {}
                        new_routing = perm.compose(emb, routing)
                        for l2, c in acted.items():
                            inn = inners[:j] + ((a, inners[j][1], l2),) + inners[j + 1 :]
                            key = (mt, inn, routing)
                            rel[index[key]] = rel.get(index[key], field.zero())
                            rel[index[key]] = field.add(rel[index[key]], c)
                        key2 = (mt, inners, new_routing)
                        rel[index[key2]] = field.add(rel.get(index[key2], field.zero()), field.sign(1))
                        rel = {a_: b_ for a_, b_ in rel.items() if not field.is_zero(b_)}
                        if rel:
                            relations.append(rel)
                # (b) outer coinvariants: m.sigma (x) x ~ m (x) sigma.x for all sigma
                for sig in _permutations(range(1, k + 1)):
                    if sig == perm.identity(k):
                        continue
                    acted_m = m_sigma.act_perm_combo(k, sig, mt[1], {mt[2]: field.one()})
                    sig_inv = perm.inverse(sig)
                    # sigma acts on the word by permuting factors with Koszul
                    # signs and rerouting the inputs
                    permuted = [inners[sig_inv[j] - 1] for j in range(k)]
                    kos = perm.koszul_sign_exponent(
                        [t[1] for t in inners], tuple(sig)
                    )
                    # rerouting: factor j's inputs keep their global slots
                    old_offsets = _offsets(sizes)
                    new_sizes = tuple(t[0] for t in permuted)
                    new_offsets = _offsets(new_sizes)
                    slot_map = {}
                    for j in range(k):
                        nj = sig[j] - 1
                        for a_ in range(sizes[j]):
                            slot_map[old_offsets[j] + a_ + 1] = new_offsets[nj] + a_ + 1
                    rerouted = [0] * r
                    for p_ in range(1, r + 1):
                        rerouted[p_ - 1] = slot_map[routing[p_ - 1]]
                    rel = {}
                    for lm2, cm in acted_m.items():
                        key = ((k, mt[1], lm2), inners, routing)
                        rel[index[key]] = field.add(rel.get(index[key], field.zero()), cm)
                    key2 = (mt, tuple(permuted), tuple(rerouted))
                    rel[index[key2]] = field.add(
                        rel.get(index[key2], field.zero()), field.sign(kos + 1)
                    )
                    rel = {a_: b_ for a_, b_ in rel.items() if not field.is_zero(b_)}
                    if rel:
                        relations.append(rel)
            kept, _ = quotient_data(field, len(bigs), relations)
            if kept:
                out.setdefault(r, {})[d] = len(kept)
    return out


def _offsets(sizes):
    out = []
    acc = 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def _compositions(r, k, allowed):
    out = []

    def rec(j, remaining, acc):
        if j == k:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for a in allowed:
            if a <= remaining - (k - j - 1) * min(allowed) if allowed else False:
                rec(j + 1, remaining - a, acc + [a])

    if allowed:
        rec(0, r, [])
    return out


def _product_lists(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product_lists(lists[1:]):
            yield (head,) + tail


def tensor_dims_formula(m_sigma, n_sigma, arity_bound):
    """dim (M (x) N)(r) = sum_{s+t=r} C(r,s) dim M(s) dim N(t)."""
    from math import comb

    out = {}
    for r in range(1, arity_bound + 1):
        per_degree = {}
        for s in m_sigma.arities():
            t = r - s
            if t not in n_sigma.arities():
                continue
            mc, nc = m_sigma.component(s), n_sigma.component(t)
            for dm in mc.degrees():
                for dn in nc.degrees():
                    per_degree[dm + dn] = per_degree.get(dm + dn, 0) + comb(r, s) * mc.dim(dm) * nc.dim(dn)
        if per_degree:
            out[r] = per_degree
    return out


def is_sigma_free(description):
    """True when every orbit of arity >= 2 is a regular one."""
    return all(kind == "regular" for k, orbits in description.items() if k >= 2 for kind, _ in orbits)


def sigma_free_compose_dims_formula(m_description, n_sigma, arity_bound):
    """Counting formula for (M o N)(r) when M is Sigma-free.

    A regular orbit of M(k) contributes dim N^{(x)k}(r) (the coinvariant
    of regular (x) X is X); arity-1 orbits contribute dim N(r).  The
    word dimension is the multinomial coset count times the factor dims.
    """
    from math import factorial

    out = {}
    arities = sorted({k for k in m_description})
    for r in range(1, 100):
        per_degree = {}
        for k, orbits in m_description.items():
            allowed = []
            for kind, dm in orbits:
                allowed.append(dm)
            if not allowed:
                continue
            sizes_list = _compositions(r, k, [a for a in range(1, r + 1)])
            for dm in allowed:
                for sizes in sizes_list:
                    if any(s not in [a for a in n_arities(n_sigma)] for s in sizes):
                        continue
                    cosets = factorial(r)
                    for a in sizes:
                        cosets //= factorial(a)
                    dims_prod = {0: 1}
                    for a in sizes:
                        comp = n_sigma.component(a)
                        nxt = {}
                        for dacc, cacc in dims_prod.items():
                            for d in comp.degrees():
                                nxt[dacc + d] = nxt.get(dacc + d, 0) + cacc * comp.dim(d)
                        dims_prod = nxt
                    for d, c in dims_prod.items():
                        per_degree[d + dm] = per_degree.get(d + dm, 0) + cosets * c
        per_degree = {d: c for d, c in per_degree.items() if c}
        if per_degree:
            out[r] = per_degree
        if r >= arity_bound:
            break
    return out


def n_arities(n_sigma):
    return n_sigma.arities()
