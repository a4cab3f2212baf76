"""The reduction algebra presented by the reflection equation.

Generators ``L[i,j]`` (several braided copies ``M1, M2, ...`` when
requested) have weight eps_i - eps_j.  The quadratic-linear defining
relations are the components of the reflection equation; the rewrite
system that orders an arbitrary word is not transcribed by hand but
extracted by solving those components for the out-of-order quadratic
monomials over the coefficient field.  Cross-copy exchange rules come
from the braided compatibility relation the same way.

A total order on generator patterns fixes what "ordered" means; copy
labels are always major.  The engine normal-orders with the root-height
order (:func:`normal_order`), the only family found to give terminating
rewriting at every rank checked; the relation catalogue and the n=2
regression against the printed ordering table use the table's own order
(:func:`appendix_order`), which needs no rewriting.
"""

from __future__ import annotations

from .algebra import (Element, TermAlgebra, mat_first_leg, mat_from_tensor,
                      mat_mul, mat_sub, reflection_residual)
from .coeffs import RatFun, eps, hdiff, phi, phi_segment, qminus, serialize
from .errors import RelationExtractionError
from .rmatrix import hmat, rhat


def normal_order(pat):
    """Engine order: generators sorted by root height (lowering ones
    first, then diagonal, then raising), ties by (i, j).

    The choice matters: rewriting must terminate, and most orders fail
    that.  Plain lexicographic order on (i, j) already cycles at n=2
    (the word L[2,1] L[2,2] L[1,2] reproduces itself), and the order of
    the printed n=2 table cycles at n=3.  The height order gives an
    acyclic rewrite graph (see :func:`rewrite_graph_cycle`), which the
    degree-3 associativity oracle then certifies for confluence.
    """
    i, j = pat
    return (j - i, i, j)


def appendix_order(pat):
    """Presentation order of the printed n=2 ordering table (generalized
    to any rank): off-diagonal generators first, then diagonal ones,
    each block by descending (i, j).

    Used for the relation catalogue only; rule extraction is pure linear
    algebra, so it does not need the termination property.
    """
    i, j = pat
    return (1 if i == j else 0, -i, -j)


# kept as the engine default
default_order = normal_order


# ---------------------------------------------------------------------------
# free weight-graded algebra (no relations)
# ---------------------------------------------------------------------------

class FreeReductionAlgebra(TermAlgebra):
    """Formal weight-graded generators; only coefficients move."""

    def __init__(self, n, copies=1):
        super().__init__(n, ("free-reduction", n, copies))
        self.copies = copies
        self._eps = [None] + [eps(n, i) for i in range(1, n + 1)]

    def gen(self, t, i, j):
        return self.gen_element((t, i, j))

    def weight(self, g):
        _, i, j = g
        return tuple(a - b for a, b in zip(self._eps[i], self._eps[j]))

    def needs_rewrite(self, g1, g2):
        return False

    def pair_rule(self, g1, g2):  # pragma: no cover - nothing is rewritten
        raise AssertionError("free algebra has no rewrite rules")

    def gen_str(self, g):
        t, i, j = g
        if self.copies == 1:
            return f"L[{i},{j}]"
        return f"M{t}[{i},{j}]"


def lmat_formal(alg):
    return {(i, j): alg.gen(1, i, j)
            for i in range(1, alg.n + 1) for j in range(1, alg.n + 1)}


def reflection_components(n, matrix="L"):
    """Componentwise reflection-equation residual for a generator matrix.

    matrix="L": formal generators; the components are the defining
    relations.  matrix="H": the Cartan realization (pure coefficients,
    expected to vanish).  matrix="mixed": the linear compatibility
    identity between a formal weight-graded matrix and the Cartan one.
    """
    alg = FreeReductionAlgebra(n)
    r = rhat(n)
    if matrix == "L":
        return reflection_residual(alg, r, lmat_formal(alg), n)
    if matrix == "H":
        h = hmat(n)
        entries = {(i, i): alg.scalar(h[i]) for i in range(1, n + 1)}
        return reflection_residual(alg, r, entries, n)
    if matrix == "mixed":
        h = hmat(n)
        r12 = mat_from_tensor(alg, r)
        l1 = mat_first_leg(alg, lmat_formal(alg), n)
        h1 = mat_first_leg(
            alg, {(i, i): alg.scalar(h[i]) for i in range(1, n + 1)}, n)
        rl = mat_mul(alg, r12, l1, n)
        rh = mat_mul(alg, r12, h1, n)
        lr = mat_mul(alg, l1, r12, n)
        hr = mat_mul(alg, h1, r12, n)
        lhs = mat_sub(mat_add2(mat_mul(alg, rl, rh, n),
                               mat_mul(alg, rh, rl, n)),
                      mat_add2(mat_mul(alg, lr, hr, n),
                               mat_mul(alg, hr, lr, n)))
        rhs = mat_sub(rl, lr)
        rhs = {k: v.times_int(2) for k, v in rhs.items()}
        return mat_sub(lhs, rhs)
    raise ValueError(f"unknown matrix kind {matrix!r}")


def mat_add2(a, b):
    out = dict(a)
    for key, el in b.items():
        acc = out.get(key)
        out[key] = el if acc is None else acc + el
    return {k: v for k, v in out.items() if not v.is_zero}


# ---------------------------------------------------------------------------
# rewrite-rule extraction by linear solve
# ---------------------------------------------------------------------------

def _solve_for_unordered(n, components, is_unordered):
    """Solve linear systems "sum A_u * u = rhs" grouped by word weight.

    components: iterable of Elements that are identically zero in the
    algebra.  Words classified unordered become unknowns; everything
    else goes to the right-hand side.  Returns {unordered word: rule
    element dict}.  A missing pivot or an inconsistent leftover row is a
    hard error: it would contradict the completeness of the relations.
    """
    buckets = {}
    for el in components:
        if el.is_zero:
            continue
        for wt, sub in el.weight_decomposition().items():
            adict = {}
            rhs = {}
            for w, c in sub.terms.items():
                if is_unordered(w):
                    adict[w] = c
                else:
                    rhs[w] = -c
            buckets.setdefault(wt, []).append((adict, rhs))
    rules = {}
    for wt in sorted(buckets):
        rows = buckets[wt]
        unknowns = sorted({u for a, _ in rows for u in a})
        pivot_rows = {}
        remaining = rows
        for u in unknowns:
            pick = None
            for idx, (a, r) in enumerate(remaining):
                if u in a:
                    pick = idx
                    break
            if pick is None:
                raise RelationExtractionError(
                    f"no pivot for unordered word {u} at weight {wt}")
            a, r = remaining.pop(pick)
            inv = a[u].inverse()
            a = {k: inv * v for k, v in a.items() if k != u}
            r = {k: inv * v for k, v in r.items()}
            # eliminate u from the remaining rows and from earlier pivots
            new_remaining = []
            for a2, r2 in remaining:
                c = a2.get(u)
                if c is None:
                    new_remaining.append((a2, r2))
                    continue
                a2 = dict(a2)
                del a2[u]
                for k, v in a.items():
                    s = a2.get(k, None)
                    s = -(c * v) if s is None else s - c * v
                    if s.is_zero:
                        a2.pop(k, None)
                    else:
                        a2[k] = s
                r2 = dict(r2)
                for k, v in r.items():
                    s = r2.get(k, None)
                    s = -(c * v) if s is None else s - c * v
                    if s.is_zero:
                        r2.pop(k, None)
                    else:
                        r2[k] = s
                new_remaining.append((a2, r2))
            remaining = new_remaining
            for u0 in list(pivot_rows):
                a0, r0 = pivot_rows[u0]
                c = a0.get(u)
                if c is None:
                    continue
                del a0[u]
                for k, v in a.items():
                    s = a0.get(k, None)
                    s = -(c * v) if s is None else s - c * v
                    if s.is_zero:
                        a0.pop(k, None)
                    else:
                        a0[k] = s
                for k, v in r.items():
                    s = r0.get(k, None)
                    s = -(c * v) if s is None else s - c * v
                    if s.is_zero:
                        r0.pop(k, None)
                    else:
                        r0[k] = s
            pivot_rows[u] = (dict(a), dict(r))
        for a2, r2 in remaining:
            if a2 or r2:
                raise RelationExtractionError(
                    f"inconsistent leftover relation at weight {wt}")
        for u, (a0, r0) in pivot_rows.items():
            if a0:
                raise RelationExtractionError(
                    f"rule for {u} still references unordered words")
            rules[u] = r0
    return rules


def extract_rewrite_rules(n, gen_order=None):
    """Ordering rules for one copy: unordered pair word -> ordered element."""
    order = gen_order or default_order
    comps = reflection_components(n, "L")

    def is_unordered(word):
        if len(word) != 2:
            return False
        (_, i1, j1), (_, i2, j2) = word
        return order((i1, j1)) > order((i2, j2))

    raw = _solve_for_unordered(n, comps.values(), is_unordered)
    rules = {}
    for word, rhs in raw.items():
        (_, i1, j1), (_, i2, j2) = word
        rules[((i1, j1), (i2, j2))] = [
            (c, tuple((i, j) for (_, i, j) in w)) for w, c in sorted(rhs.items())]
    return rules


def extract_cross_rules(n, gen_order=None):
    """Braided exchange: (higher copy gen)(lower copy gen) -> ordered."""
    alg = FreeReductionAlgebra(n, copies=2)
    r = rhat(n)
    r12 = mat_from_tensor(alg, r)
    m1 = mat_first_leg(alg, {(i, j): alg.gen(1, i, j)
                             for i in range(1, n + 1)
                             for j in range(1, n + 1)}, n)
    m2 = mat_first_leg(alg, {(i, j): alg.gen(2, i, j)
                             for i in range(1, n + 1)
                             for j in range(1, n + 1)}, n)
    lhs = mat_mul(alg, mat_mul(alg, mat_mul(alg, r12, m1, n), r12, n), m2, n)
    rhs = mat_mul(alg, mat_mul(alg, mat_mul(alg, m2, r12, n), m1, n), r12, n)
    comps = mat_sub(lhs, rhs)

    def is_unordered(word):
        if len(word) != 2:
            return False
        return word[0][0] > word[1][0]

    raw = _solve_for_unordered(n, comps.values(), is_unordered)
    rules = {}
    for word, rhs_el in raw.items():
        (_, i1, j1), (_, i2, j2) = word
        rules[((i1, j1), (i2, j2))] = [
            (c, ((w[0][1], w[0][2]), (w[1][1], w[1][2])))
            for w, c in sorted(rhs_el.items())]
    return rules


# ---------------------------------------------------------------------------
# the working algebra
# ---------------------------------------------------------------------------

_RULE_CACHE = {}


class ReductionAlgebra(TermAlgebra):
    """The reduction algebra with its extracted rewrite system.

    Rule systems are cached per (rank, order_name); a custom gen_order
    therefore needs its own order_name.
    """

    def __init__(self, n, copies=1, gen_order=None, order_name="default"):
        if gen_order is not None and order_name == "default":
            raise ValueError("a custom generator order needs its own "
                             "order_name (rule systems are cached by name)")
        super().__init__(n, ("reduction", n, copies, order_name))
        self.copies = copies
        self.order = gen_order or default_order
        self._eps = [None] + [eps(n, i) for i in range(1, n + 1)]
        self._cache_key = (n, order_name)
        cached = _RULE_CACHE.get(self._cache_key)
        if cached is None:
            cached = extract_rewrite_rules(n, self.order)
            _RULE_CACHE[self._cache_key] = cached
        self.same_rules = cached

    @property
    def cross_rules(self):
        # only multi-copy words ever need these; extracted on first use
        key = self._cache_key + ("cross",)
        cached = _RULE_CACHE.get(key)
        if cached is None:
            cached = extract_cross_rules(self.n, self.order)
            _RULE_CACHE[key] = cached
        return cached

    def gen(self, i, j, t=1):
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ValueError(f"generator index ({i},{j}) out of range")
        if not 1 <= t <= self.copies:
            raise ValueError(f"copy {t} out of range 1..{self.copies}")
        return self.gen_element((t, i, j))

    def generators(self, t=1):
        return [(t, i, j) for i in range(1, self.n + 1)
                for j in range(1, self.n + 1)]

    def weight(self, g):
        _, i, j = g
        return tuple(a - b for a, b in zip(self._eps[i], self._eps[j]))

    def gen_str(self, g):
        t, i, j = g
        if self.copies == 1:
            return f"L[{i},{j}]"
        return f"M{t}[{i},{j}]"

    def _key(self, g):
        t, i, j = g
        return (t,) + tuple(self.order((i, j)))

    def needs_rewrite(self, g1, g2):
        return self._key(g1) > self._key(g2)

    def pair_rule(self, g1, g2):
        t1, i1, j1 = g1
        t2, i2, j2 = g2
        if t1 == t2:
            rule = self.same_rules[((i1, j1), (i2, j2))]
            return [(c, tuple((t1, i, j) for (i, j) in w)) for c, w in rule]
        rule = self.cross_rules[((i1, j1), (i2, j2))]
        return [(c, ((t2,) + lo, (t1,) + hi)) for c, (lo, hi) in rule]

    # -- derived operators ---------------------------------------------------

    def lmatrix(self, t=1):
        return {(i, j): self.gen(i, j, t)
                for i in range(1, self.n + 1) for j in range(1, self.n + 1)}

    def lprime_matrix(self, t=1):
        h = hmat(self.n)
        out = {}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                el = -self.gen(i, j, t)
                if i == j:
                    el = el + self.scalar(h[i])
                out[(i, j)] = el
        return out

    def mat_power(self, mat, power):
        """Entrywise normal-ordered matrix power (power >= 0)."""
        n = self.n
        out = {(i, j): (self.one() if i == j else self.zero())
               for i in range(1, n + 1) for j in range(1, n + 1)}
        for _ in range(power):
            nxt = {}
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    acc = self.zero()
                    for k in range(1, n + 1):
                        acc = acc + mat[(i, k)] * out[(k, j)]
                    nxt[(i, j)] = self.normal_form(acc)
            out = nxt
        return out

    def quantum_trace(self, mat_pow):
        """Tr(A Q^-): weighted trace producing central elements."""
        acc = self.zero()
        for i in range(1, self.n + 1):
            acc = acc + mat_pow[(i, i)].times_coeff_right(qminus(self.n, i))
        return self.normal_form(acc)


# ---------------------------------------------------------------------------
# failure records
# ---------------------------------------------------------------------------

def _fail(identity, indices, lhs, rhs="0"):
    return {
        "identity": identity,
        "indices": list(indices),
        "lhs": lhs if isinstance(lhs, str) else str(lhs),
        "rhs": rhs if isinstance(rhs, str) else str(rhs),
    }


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_relation_roundtrip(n, gen_order=None, order_name="default"):
    """Substituting the extracted rules back into every reflection
    component must give zero identically."""
    alg = ReductionAlgebra(n, 1, gen_order, order_name)
    comps = reflection_components(n, "L")
    failures = []
    for key in sorted(comps):
        free_el = comps[key]
        el = Element(alg, dict(free_el.terms))
        nf = alg.normal_form(el)
        if not nf.is_zero:
            failures.append(_fail("relation_roundtrip", key, str(nf)))
    return failures


def check_h_realization(n):
    """The Cartan diagonal satisfies the reflection equation, and the
    mixed linear identity holds for a formal weight-graded matrix."""
    failures = []
    for key, el in sorted(reflection_components(n, "H").items()):
        if not el.is_zero:
            failures.append(_fail("cartan_reflection", key, str(el)))
    for key, el in sorted(reflection_components(n, "mixed").items()):
        if not el.is_zero:
            failures.append(_fail("mixed_weight_identity", key, str(el)))
    return failures


def rewrite_graph_cycle(n, gen_order=None, degree=3):
    """Search the coefficient-free rewrite graph for a cycle.

    Explores every word of the given degree under "rewrite the leftmost
    descent", following rule words only (coefficients dropped; exact
    cancellations could only shrink the graph).  Returns a witness word
    on a cycle, or None when the graph is acyclic, which certifies that
    normal ordering terminates on all inputs of that degree.
    """
    order = gen_order or default_order
    rules = extract_rewrite_rules(n, order)
    import itertools

    def successors(word):
        for p in range(len(word) - 1):
            if order(word[p]) > order(word[p + 1]):
                rule = rules[(word[p], word[p + 1])]
                return [word[:p] + w + word[p + 2:] for _, w in rule]
        return None

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {}
    pats = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for start in itertools.product(pats, repeat=degree):
        if color.get(start, WHITE) != WHITE:
            continue
        stack = [(start, iter(successors(start) or ()))]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt, WHITE)
                if c == GRAY:
                    return nxt
                if c == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(successors(nxt) or ())))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None


def check_associativity(n, triples=None):
    """Degree-3 oracle: both bracketings normal-order identically."""
    alg = ReductionAlgebra(n)
    gens = alg.generators()
    failures = []
    if triples is None:
        import itertools
        triples = itertools.product(gens, repeat=3)
    for g1, g2, g3 in triples:
        e1, e2, e3 = (alg.gen_element(g) for g in (g1, g2, g3))
        left = alg.normal_form(alg.normal_form(e1 * e2) * e3)
        right = alg.normal_form(e1 * alg.normal_form(e2 * e3))
        if left != right:
            failures.append(_fail("associativity_oracle", (g1, g2, g3),
                                  str(left), str(right)))
    return failures


def check_associativity_sample(n, sample=200, seed=20240901):
    """Exhaustive degree-3 oracle at n=2; a fixed random sample above."""
    if n <= 2:
        return check_associativity(n)
    import random
    rng = random.Random(seed)
    alg = ReductionAlgebra(n)
    gens = alg.generators()
    triples = [tuple(rng.choice(gens) for _ in range(3)) for _ in range(sample)]
    return check_associativity(n, triples=triples)


def check_cross_copy_convention():
    """Failure-list form of :func:`cross_copy_convention_report`."""
    rep = cross_copy_convention_report()
    if rep["passing_convention"] == "same_copy_only":
        return []
    return [_fail("cross_copy_convention", (), str(rep), "same_copy_only")]


def central_element(n, power):
    """Tr(L^power Q^-) as a normal-ordered element."""
    alg = ReductionAlgebra(n)
    return alg.quantum_trace(alg.mat_power(alg.lmatrix(), power))


def check_central(n, power, primed=False):
    """[Tr(L^N Q^-), L^i_j] == 0 for every generator (L' = H - L when
    primed)."""
    alg = ReductionAlgebra(n)
    mat = alg.lprime_matrix() if primed else alg.lmatrix()
    c = alg.quantum_trace(alg.mat_power(mat, power))
    failures = []
    tag = "central_commutator_primed" if primed else "central_commutator"
    for (i, j) in sorted(alg.lmatrix()):
        g = alg.gen(i, j)
        res = alg.normal_form(c * g - g * c)
        if not res.is_zero:
            failures.append(_fail(tag, (n, power, i, j), str(res)))
    return failures


def check_weight_zero_diagonal(n, power):
    """Diagonal entries of L^N have weight zero (trace-side independence)."""
    alg = ReductionAlgebra(n)
    p = alg.mat_power(alg.lmatrix(), power)
    failures = []
    zero = (0,) * n
    for i in range(1, n + 1):
        for wt in p[(i, i)].weight_decomposition():
            if wt != zero:
                failures.append(_fail("diagonal_weight_zero", (i, power),
                                      str(wt), str(zero)))
    return failures


# -- generator transforms -----------------------------------------------------


def _transform_matrix(n, alg=None):
    """Coefficient of s[k,l] in L[i,j], as left-normalized coefficients."""
    if alg is None:
        alg = FreeReductionAlgebra(n)
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                el = alg.gen(1, i, j).times_coeff_right(phi(n, j))
            else:
                el = alg.gen(1, i, i)
                for m in range(i + 1, n + 1):
                    seg = phi_segment(n, i, m)
                    c = (hdiff(n, i, m) * seg).inverse()
                    el = el - alg.gen(1, m, m).times_coeff_right(c)
                el = el.times_coeff_right(phi(n, i))
            out[(i, j)] = el
    return out




def check_generator_transforms(n):
    """Triangularity and invertibility of the change of basis."""
    failures = []
    alg = FreeReductionAlgebra(n)
    trans = _transform_matrix(n, alg)

    # triangular transition with unit diagonal
    for (i, j), el in sorted(trans.items()):
        diag_coeff = el.terms.get(((1, i, j),))
        if diag_coeff is None or not diag_coeff.is_unit_in_localization():
            failures.append(_fail("transition_unit_diagonal", (i, j),
                                  serialize(diag_coeff) if diag_coeff else "0",
                                  "unit"))
        for word in el.terms:
            (_, a, b) = word[0]
            if (a, b) != (i, j) and not (i == j and a == b and a > i):
                failures.append(_fail("transition_triangular", (i, j, a, b),
                                      str(el), "triangular"))
    # explicit inverse: solve for s in terms of L and round trip
    inv = invert_transform(n, alg)
    for (i, j), el in sorted(inv.items()):
        # substitute L expressions back: must reproduce the bare generator
        acc = alg.zero()
        for word, c in el.terms.items():
            (_, a, b) = word[0]
            acc = acc + trans[(a, b)].times_coeff_left(c)
        want = alg.gen(1, i, j)
        if acc != want:
            failures.append(_fail("transition_inverse_roundtrip", (i, j),
                                  str(acc), str(want)))
    return failures


def invert_transform(n, alg=None):
    """Express each s[i,j] as a coefficient combination of L[k,l]."""
    if alg is None:
        alg = FreeReductionAlgebra(n)
    trans = _transform_matrix(n, alg)
    inv = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                c = trans[(i, j)].terms[((1, i, j),)]
                inv[(i, j)] = alg.gen(1, i, j).times_coeff_left(c.inverse())
    # diagonal block is upper triangular in m; solve upward from m = n
    for i in range(n, 0, -1):
        expr = trans[(i, i)]
        diag = expr.terms[((1, i, i),)]
        rest = alg.zero()
        for word, c in expr.terms.items():
            (_, a, b) = word[0]
            if (a, b) != (i, i):
                rest = rest + inv[(a, b)].times_coeff_left(c)
        # the generator symbol here stands for the transformed family
        inv[(i, i)] = (alg.gen(1, i, i) - rest).times_coeff_left(diag.inverse())
    return inv


def check_cartan_sum(n):
    """The two transformed generator families sum to the Cartan matrix.

    The first- and second-factor generators add up to the Cartan element
    entrywise, so applying the triangular transform to both families and
    adding must reproduce the diagonal matrix h_j + n exactly; this is a
    pure coefficient identity."""
    failures = []
    trans = _transform_matrix(n)
    h = hmat(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            el = trans[(i, j)]
            if i != j:
                # off-diagonal: L^i_j + L'^i_j = (s+s')^i_j phi_j = 0 weightwise
                continue
            tot = RatFun.zero(n)
            for word, c in el.terms.items():
                (_, a, b) = word[0]
                assert a == b
                hval = RatFun.var(n, a) + a
                tot = tot + c * hval
            if tot != h[i]:
                failures.append(_fail("cartan_sum", (i,), serialize(tot),
                                      serialize(h[i])))
    return failures


# -- independent oracle: the differential-operator realization -------------------


def check_weyl_realization(n, copies_weyl=None):
    """Re-verify every extracted ordering rule inside the differential
    algebra.

    The generators map to the composite operators (coordinate times
    barred derivative, summed over copies), injectively once the copy
    count reaches the rank; each rule, transported through that map,
    must hold under the *differential-operator* rewriting engine.  This
    route never touches the reduction-algebra rule system, so it checks
    the extraction and the engine against one another.
    """
    from .weyl import WeylAlgebra
    N = copies_weyl or n
    walg = WeylAlgebra(n, N)
    lt = walg.ltilde()
    rules = extract_rewrite_rules(n)
    failures = []
    for (g1, g2) in sorted(rules):
        lhs = walg.normal_form(lt[g1] * lt[g2])
        acc = walg.zero()
        for c, word in rules[(g1, g2)]:
            term = walg.scalar(c)
            for pat in word:
                term = term * lt[pat]
            acc = acc + term
        rhs = walg.normal_form(acc)
        if lhs != rhs:
            failures.append(_fail("rule_in_weyl_realization", (g1, g2),
                                  str(lhs), str(rhs)))
    return failures


def check_central_realization(n, power, copies_weyl=None):
    """Centrality of the quantum trace checked in the differential
    algebra: the image of Tr(L^N Q^-) must commute with every composite
    operator entry there."""
    from .weyl import WeylAlgebra
    N = copies_weyl or n
    walg = WeylAlgebra(n, N)
    lt = walg.ltilde()
    power_mat = {(i, j): (walg.one() if i == j else walg.zero())
                 for i in range(1, n + 1) for j in range(1, n + 1)}
    for _ in range(power):
        nxt = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                acc = walg.zero()
                for k in range(1, n + 1):
                    acc = acc + lt[(i, k)] * power_mat[(k, j)]
                nxt[(i, j)] = walg.normal_form(acc)
        power_mat = nxt
    trace = walg.zero()
    for i in range(1, n + 1):
        trace = trace + power_mat[(i, i)].times_coeff_right(qminus(n, i))
    trace = walg.normal_form(trace)
    failures = []
    for (i, j) in sorted(lt):
        res = walg.normal_form(trace * lt[(i, j)] - lt[(i, j)] * trace)
        if not res.is_zero:
            failures.append(_fail("central_in_weyl_realization",
                                  (n, power, i, j), str(res)))
    return failures


# -- braided structure ----------------------------------------------------------


def check_braided_sum(n, copies):
    """The sum of all braided copies satisfies the reflection equation."""
    alg = ReductionAlgebra(n, copies=copies)
    entries = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            acc = alg.zero()
            for t in range(1, copies + 1):
                acc = acc + alg.gen(i, j, t)
            entries[(i, j)] = acc
    res = reflection_residual(alg, rhat(n), entries, n)
    failures = []
    for key in sorted(res):
        nf = alg.normal_form(res[key])
        if not nf.is_zero:
            failures.append(_fail("braided_sum_reflection",
                                  (copies,) + key, str(nf)))
    return failures


def check_coproduct(n):
    """The sum of the two braided copies satisfies the reflection
    equation, and the two iterated coproducts agree in three copies."""
    failures = check_braided_sum(n, 2)
    a2 = ReductionAlgebra(n, copies=2)
    a3 = ReductionAlgebra(n, copies=3)

    def hom_left(el):  # coproduct on the first tensor factor
        return _substitute(a3, el, {1: (1, 2), 2: (3,)})

    def hom_right(el):  # coproduct on the second tensor factor
        return _substitute(a3, el, {1: (1,), 2: (2, 3)})

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            delta = a2.gen(i, j, 1) + a2.gen(i, j, 2)
            lhs = a3.normal_form(hom_left(delta))
            rhs = a3.normal_form(hom_right(delta))
            want = (a3.gen(i, j, 1) + a3.gen(i, j, 2) + a3.gen(i, j, 3))
            if lhs != rhs or lhs != want:
                failures.append(_fail("coassociativity", (i, j),
                                      str(lhs), str(rhs)))
    return failures


def _substitute(dst, el, copy_images):
    out = dst.zero()
    for word, c in el.terms.items():
        acc = dst.scalar(c)
        for (t, i, j) in word:
            part = dst.zero()
            for t2 in copy_images[t]:
                part = part + dst.gen(i, j, t2)
            acc = acc * part
        out = out + acc
    return out


# -- appendix regression -----------------------------------------------------------


def appendix_expected_rules():
    """The printed n=2 ordering relations, under the printed order."""
    n = 2
    h = hdiff(n, 1, 2)
    one = RatFun.const(n, 1)
    L11, L12, L21, L22 = (1, 1), (1, 2), (2, 1), (2, 2)

    def r(*pairs):
        return sorted(((tuple(w), c) for w, c in pairs), key=lambda t: t[0])

    return {
        (L11, L12): r(((L12, L11), (h - 3) / (h - 2)),
                      ((L12, L22), one / (h - 2)),
                      ((L12,), one)),
        (L22, L12): r(((L12, L11), (h - 3) / ((h - 2) * (h + 1))),
                      ((L12, L22), (h - 1) * (h - 1) / ((h - 2) * (h + 1))),
                      ((L12,), -((h - 1) / (h + 1)))),
        (L11, L21): r(((L21, L11), (h + 1) * (h + 1) / ((h - 1) * (h + 2))),
                      ((L21, L22), -((h + 3) / ((h - 1) * (h + 2)))),
                      ((L21,), -((h + 1) / (h - 1)))),
        (L22, L21): r(((L21, L11), -(one / (h + 2))),
                      ((L21, L22), (h + 3) / (h + 2)),
                      ((L21,), one)),
        (L11, L22): r(((L22, L11), one)),
        (L12, L21): r(((L21, L12), one),
                      ((L11, L11), -(one / h)),
                      ((L22, L11), 2 * one / h),
                      ((L22, L22), -(one / h)),
                      ((L11,), one),
                      ((L22,), -one)),
    }


def check_appendix_rules():
    """Extracted n=2 rules match the printed table coefficient by
    coefficient (under the printed generator order)."""
    got = extract_rewrite_rules(2, appendix_order)
    want = appendix_expected_rules()
    failures = []
    for key in sorted(want):
        g = sorted(((w, c) for c, w in got.get(key, [])), key=lambda t: t[0])
        w = want[key]
        if [x[0] for x in g] != [x[0] for x in w] or any(
                gc != wc for (_, gc), (_, wc) in zip(g, w)):
            failures.append(_fail(
                "appendix_rule", key,
                "; ".join(f"{wd}:{serialize(c)}" for wd, c in g),
                "; ".join(f"{wd}:{serialize(c)}" for wd, c in w)))
    extra = set(got) - set(want)
    if extra:
        failures.append(_fail("appendix_rule_count", sorted(extra),
                              str(len(got)), str(len(want))))
    return failures


def check_appendix_central_form(max_power=3):
    """Closed form of the n=2 central elements, byte-exact."""
    from .coeffs import parse
    failures = []
    alg = ReductionAlgebra(2)
    qm1 = parse(2, "(h1-h2-1)/(h1-h2)")
    qm2 = parse(2, "(h1-h2+1)/(h1-h2)")
    for power in range(1, max_power + 1):
        got = central_element(2, power)
        p = alg.mat_power(alg.lmatrix(), power)
        want = alg.normal_form(p[(1, 1)].times_coeff_left(qm1)
                               + p[(2, 2)].times_coeff_left(qm2))
        if str(got) != str(want):
            failures.append(_fail("appendix_central_form", (power,),
                                  str(got), str(want)))
    return failures


def cross_copy_convention_report():
    """Run the composite-matrix reflection oracle under both conventions
    for the inhomogeneous unit of the cross-copy exchange.

    Returns a dict recording which convention passes; the printed
    two-copy table's constant terms are reproduced only by the variant
    convention, which fails the reflection oracle.
    """
    from .weyl import verify_reflection
    same_copy_only = verify_reflection(2, 2, False,
                                       inhomogeneous_across_copies=False)
    across = verify_reflection(2, 2, False, inhomogeneous_across_copies=True)
    return {
        "same_copy_only_failures": len(same_copy_only),
        "across_copies_failures": len(across),
        "passing_convention": ("same_copy_only" if not same_copy_only
                               else "across_copies" if not across else "none"),
    }


def check_appendix_cross_copy():
    """The printed two-copy exchange table of the differential algebra.

    Homogeneous parts must hold exactly; the two diagonal coordinate-
    derivative relations for distinct copies are checked without their
    printed constant (see the convention report).
    """
    from .weyl import WeylAlgebra
    n = 2
    alg = WeylAlgebra(n, copies=2)
    h = hdiff(n, 1, 2)
    one = RatFun.const(n, 1)
    x = {(i, a): alg.x(i, a) for i in (1, 2) for a in (1, 2)}
    d = {(j, a): alg.d(j, a) for j in (1, 2) for a in (1, 2)}
    nf = alg.normal_form
    failures = []

    def chk(tag, lhs, rhs):
        if nf(lhs) != nf(rhs):
            failures.append(_fail(tag, (), str(nf(lhs)), str(nf(rhs))))

    chk("xx_12", x[(1, 1)] * x[(2, 2)],
        (x[(1, 2)] * x[(2, 1)]).times_coeff_left(one / h)
        + (x[(2, 2)] * x[(1, 1)]).times_coeff_left((h * h - 1) / (h * h)))
    chk("xx_21", x[(2, 1)] * x[(1, 2)],
        x[(1, 2)] * x[(2, 1)]
        - (x[(2, 2)] * x[(1, 1)]).times_coeff_left(one / h))
    chk("dd_12", d[(1, 1)] * d[(2, 2)],
        (d[(1, 2)] * d[(2, 1)]).times_coeff_left(-(one / h))
        + (d[(2, 2)] * d[(1, 1)]).times_coeff_left((h * h - 1) / (h * h)))
    chk("dd_21", d[(2, 1)] * d[(1, 2)],
        d[(1, 2)] * d[(2, 1)]
        + (d[(2, 2)] * d[(1, 1)]).times_coeff_left(one / h))
    for i in (1, 2):
        chk(f"xx_same_{i}", x[(i, 1)] * x[(i, 2)], x[(i, 2)] * x[(i, 1)])
        chk(f"dd_same_{i}", d[(i, 1)] * d[(i, 2)], d[(i, 2)] * d[(i, 1)])
    chk("xd_offdiag_12", x[(1, 1)] * d[(2, 2)], d[(2, 2)] * x[(1, 1)])
    chk("xd_offdiag_21", x[(2, 1)] * d[(1, 2)],
        (d[(1, 2)] * x[(2, 1)]).times_coeff_left(h * (h + 2) / ((h + 1) ** 2)))
    # diagonal cross-copy relations: homogeneous parts of the printed rows
    chk("xd_diag_1", x[(1, 1)] * d[(1, 2)],
        d[(1, 2)] * x[(1, 1)]
        + (d[(2, 2)] * x[(2, 1)]).times_coeff_left(one / (1 - h)))
    chk("xd_diag_2", x[(2, 1)] * d[(2, 2)],
        (d[(1, 2)] * x[(1, 1)]).times_coeff_left(one / (1 + h))
        + d[(2, 2)] * x[(2, 1)])
    # the printed constants are NOT consistent: with -1 appended the two
    # relations above must fail
    bad = nf(x[(1, 1)] * d[(1, 2)]
             - (d[(1, 2)] * x[(1, 1)]
                + (d[(2, 2)] * x[(2, 1)]).times_coeff_left(one / (1 - h))
                - alg.one()))
    if bad.is_zero:
        failures.append(_fail("xd_diag_printed_constant_unexpectedly_holds",
                              (), "0", "nonzero"))
    return failures


# -- relation catalogue -------------------------------------------------------------


def relation_catalogue(n, generators="L"):
    """Ordering relations as (lhs word, rhs element) pairs, in the
    presentation order of the printed table.

    generators="L" gives the extracted rewrite rules; "s" maps both
    sides through the change of basis to the first-factor generators.
    """
    rules = extract_rewrite_rules(n, appendix_order)
    cat = []
    for (g1, g2) in sorted(rules):
        rhs = rules[(g1, g2)]
        cat.append(((g1, g2), rhs))
    if generators == "L":
        return cat
    if generators != "s":
        raise ValueError("generators must be 'L' or 's'")
    free = FreeReductionAlgebra(n)
    trans = _transform_matrix(n, free)
    out = []
    for (g1, g2), rhs in cat:
        lhs_el = trans[g1] * trans[g2]
        rhs_el = free.zero()
        for c, word in rhs:
            acc = free.scalar(c)
            for pat in word:
                acc = acc * trans[pat]
            rhs_el = rhs_el + acc
        out.append((((g1, g2), lhs_el), rhs_el))
    return out


# -- suite driver --------------------------------------------------------------------


def run_suite(n, suite="all", copies=2, power=2):
    failures = []
    known = {"reflection", "central", "coproduct", "appendix", "transforms",
             "hrealization", "associativity", "realization"}
    if suite not in known and suite != "all":
        raise ValueError(f"unknown dra suite {suite!r}")
    if suite in ("all", "reflection"):
        failures.extend(check_relation_roundtrip(n))
    if suite in ("all", "associativity"):
        failures.extend(check_associativity(n))
    if suite in ("all", "hrealization"):
        failures.extend(check_h_realization(n))
    if suite in ("all", "central"):
        for p in range(0, power + 1):
            failures.extend(check_central(n, p))
            failures.extend(check_central(n, p, primed=True))
        failures.extend(check_weight_zero_diagonal(n, power))
    if suite in ("all", "realization"):
        failures.extend(check_weyl_realization(n))
        failures.extend(check_central_realization(n, min(power, 2)))
    if suite in ("all", "coproduct"):
        failures.extend(check_coproduct(n))
        if copies > 2:
            failures.extend(check_braided_sum(n, copies))
    if suite in ("all", "transforms"):
        failures.extend(check_cartan_sum(n))
        failures.extend(check_generator_transforms(n))
    if suite in ("all", "appendix") and n == 2:
        failures.extend(check_appendix_rules())
        failures.extend(check_appendix_central_form())
        failures.extend(check_appendix_cross_copy())
        rep = cross_copy_convention_report()
        if rep["passing_convention"] != "same_copy_only":
            failures.append(_fail("cross_copy_convention",
                                  (), str(rep), "same_copy_only"))
    return failures
