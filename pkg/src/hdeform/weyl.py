"""The h-deformed differential-operator algebra on n indices and N copies.

Generators are coordinates ``x[i,a]`` and barred derivatives ``D[j,a]``
(index 1..n, copy 1..N) with either bosonic or fermionic statistics.
Normal order puts all x's first, each block sorted by (index, copy);
the exchange rules are driven by the dynamical tensors of
:mod:`hdeform.rmatrix`, with the skew inverse supplying the rule that
moves a derivative past a coordinate.

The cross-copy exchange of a coordinate with a derivative of equal
index is homogeneous here (the inhomogeneous unit appears only for
equal copy labels).  The printed n=2 two-copy table in the source
material carries a constant for distinct copies as well; construct the
algebra with ``inhomogeneous_across_copies=True`` to adopt that variant
convention.  ``verify_reflection`` run under both settles which one is
consistent (see ``appendix`` checks in :mod:`hdeform.dra`).
"""

from __future__ import annotations

import itertools

from .algebra import Element, TermAlgebra, mat_first_leg, reflection_residual
from .coeffs import (RatFun, eps, hdiff, mu_coeff, phi, phi_prime, qminus,
                     qplus)
from .errors import CoefficientError
from .rmatrix import rhat, shat

XK, DK = 0, 1


def xgen(i, a=1):
    return (XK, i, a)


def dgen(j, a=1):
    return (DK, j, a)


class WeylAlgebra(TermAlgebra):

    def __init__(self, n, copies=1, fermionic=False,
                 inhomogeneous_across_copies=False):
        super().__init__(n, ("weyl", n, copies, fermionic,
                             inhomogeneous_across_copies))
        self.copies = copies
        self.fermionic = fermionic
        self.inhomogeneous_across_copies = inhomogeneous_across_copies
        self._rules = {}
        self._eps = [None] + [eps(n, i) for i in range(1, n + 1)]
        self._neps = [None] + [tuple(-x for x in eps(n, i))
                               for i in range(1, n + 1)]
        self._psi_diag = None

    # -- generators ------------------------------------------------------------

    def x(self, i, a=1):
        self._check_gen(i, a)
        return self.gen_element(xgen(i, a))

    def d(self, j, a=1):
        self._check_gen(j, a)
        return self.gen_element(dgen(j, a))

    def _check_gen(self, i, a):
        if not 1 <= i <= self.n:
            raise CoefficientError(f"index {i} out of range 1..{self.n}")
        if not 1 <= a <= self.copies:
            raise CoefficientError(f"copy {a} out of range 1..{self.copies}")

    def generators(self):
        return [xgen(i, a) for i in range(1, self.n + 1)
                for a in range(1, self.copies + 1)] + \
               [dgen(j, a) for j in range(1, self.n + 1)
                for a in range(1, self.copies + 1)]

    def weight(self, gen):
        kind, i, _ = gen
        return self._eps[i] if kind == XK else self._neps[i]

    def gen_str(self, gen):
        kind, i, a = gen
        return f"{'x' if kind == XK else 'D'}[{i},{a}]"

    # -- exchange rules ----------------------------------------------------------

    def needs_rewrite(self, g1, g2):
        if g1 == g2:
            return self.fermionic
        return g1 > g2

    def pair_rule(self, g1, g2):
        rule = self._rules.get((g1, g2))
        if rule is None:
            rule = self._make_rule(g1, g2)
            self._rules[(g1, g2)] = rule
        return rule

    def _make_rule(self, g1, g2):
        k1, i1, a1 = g1
        k2, i2, a2 = g2
        sgn = -1 if self.fermionic else 1
        n = self.n
        if k1 == k2:
            if g1 == g2:
                # only reachable in the fermionic case: squares vanish
                return []
            if i1 == i2:
                # same index, copies swap with unit coefficient
                return [(RatFun.const(n, sgn), ((k1, i1, a2), (k1, i1, a1)))]
            # i1 > i2 here; the two-copy linear system solved in closed form
            g = hdiff(n, i2, i1)
            c_keep = (g * g / (g * g - 1)) * sgn
            c_cross = g / (g * g - 1)
            if k1 == XK:
                c_cross = -c_cross
            return [(c_keep, ((k1, i2, a2), (k1, i1, a1))),
                    (c_cross, ((k1, i2, a1), (k1, i1, a2)))]
        if k1 == DK and k2 == XK:
            j, beta = i1, a1
            i, alpha = i2, a2
            if i != j:
                if i < j:
                    psi = RatFun.const(n, 1)
                else:
                    d = hdiff(n, i, j)
                    psi = (d - 1) * (d - 1) / (d * (d - 2))
                return [(psi * sgn, ((XK, i, alpha), (DK, j, beta)))]
            out = []
            for k in range(1, n + 1):
                out.append((self._psi_diag_entry(i, k) * sgn,
                            ((XK, k, alpha), (DK, k, beta))))
            if alpha == beta or self.inhomogeneous_across_copies:
                # the unit term keeps its sign in the fermionic variant
                # (anticommutator normalization D x + x D = 1), which is
                # what makes the composite matrix satisfy the same
                # reflection equation in both statistics
                out.append((qplus(n, i), ()))
            return out
        raise AssertionError("x before D is never rewritten")

    def _psi_diag_entry(self, i, k):
        if self._psi_diag is None:
            n = self.n
            qp = {t: qplus(n, t) for t in range(1, n + 1)}
            qm = {t: qminus(n, t) for t in range(1, n + 1)}
            self._psi_diag = {
                (a, b): qp[a] * qm[b] / (hdiff(n, a, b) + 1) if a != b
                else qp[a] * qm[a]
                for a in range(1, n + 1) for b in range(1, n + 1)}
        return self._psi_diag[(i, k)]

    # -- composite operators --------------------------------------------------------

    def ltilde(self):
        """Matrix (i, j) -> sum_a x[i,a] D[j,a]; already normal ordered."""
        out = {}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                out[(i, j)] = Element(self, {
                    (xgen(i, a), dgen(j, a)): self._one
                    for a in range(1, self.copies + 1)})
        return out

    def partial_ltilde(self, copy_range):
        out = {}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                out[(i, j)] = Element(self, {
                    (xgen(i, a), dgen(j, a)): self._one for a in copy_range})
        return out


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
# verification suites
# ---------------------------------------------------------------------------

def verify_reflection(n, copies=1, fermionic=False,
                      inhomogeneous_across_copies=False):
    """Reflection-equation residuals of the composite operator matrix."""
    alg = WeylAlgebra(n, copies, fermionic, inhomogeneous_across_copies)
    res = reflection_residual(alg, rhat(n), alg.ltilde(), n)
    failures = []
    for key in sorted(res):
        nf = res[key].normal_form()
        if not nf.is_zero:
            failures.append(_fail("reflection_equation", key, str(nf)))
    return failures


def check_confluence(n, copies=1, fermionic=False):
    """Degree-3 associativity oracle over every generator triple."""
    alg = WeylAlgebra(n, copies, fermionic)
    failures = []
    gens = alg.generators()
    for g1, g2, g3 in itertools.product(gens, repeat=3):
        e1, e2, e3 = (alg.gen_element(g) for g in (g1, g2, g3))
        left = alg.normal_form(alg.normal_form(e1 * e2) * e3)
        right = alg.normal_form(e1 * alg.normal_form(e2 * e3))
        if left != right:
            failures.append(_fail("associativity_oracle", (g1, g2, g3),
                                  str(left), str(right)))
    return failures


def check_forward_exchange(n, copies=1, fermionic=False):
    """Round trip of the derivative-past-coordinate rule.

    The engine's D-x rule was produced by skew inversion; substituting it
    back into the forward x-D exchange (with its inhomogeneous unit, and
    the global sign flip of the fermionic variant) must reproduce the
    identity.
    """
    from .rmatrix import that as that_builder
    alg = WeylAlgebra(n, copies, fermionic)
    t = that_builder(n)
    sgn = -1 if fermionic else 1
    failures = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for a in range(1, copies + 1):
                for b in range(1, copies + 1):
                    acc = alg.zero()
                    for k in range(1, n + 1):
                        for l in range(1, n + 1):
                            c = t.get(i, k, j, l)
                            if c is None:
                                continue
                            acc = acc + alg.normal_form(
                                alg.word_element((dgen(k, b), xgen(l, a)))
                            ).times_coeff_left(c * sgn)
                    if a == b and i == j:
                        acc = acc + alg.one().times_int(-sgn)
                    want = alg.word_element((xgen(i, a), dgen(j, b)))
                    if alg.normal_form(acc) != want:
                        failures.append(_fail("forward_exchange_round_trip",
                                              (i, j, a, b),
                                              str(alg.normal_form(acc)),
                                              str(want)))
    return failures


# -- unbarred and doubly-barred generator families -----------------------------


def _unbarred_d(alg, j, a=1):
    """partial_j = (phi_j[eps_j])^{-1} D_j as a left-coefficient element."""
    c = phi(alg.n, j).shift(eps(alg.n, j)).inverse()
    return alg.d(j, a).times_coeff_left(c)


def _double_barred_d(alg, j, a=1):
    """bbar_j = ((phi_j phi'_j)[eps_j])^{-1} D_j."""
    n = alg.n
    c = (phi(n, j) * phi_prime(n, j)).shift(eps(n, j)).inverse()
    return alg.d(j, a).times_coeff_left(c)


def check_variant_generators(n):
    """Relations of the unbarred and doubly-barred derivative families."""
    alg = WeylAlgebra(n, 1)
    one = alg.one()
    failures = []
    nf = alg.normal_form

    x = {i: alg.x(i) for i in range(1, n + 1)}
    d_un = {j: _unbarred_d(alg, j) for j in range(1, n + 1)}
    d_bb = {j: _double_barred_d(alg, j) for j in range(1, n + 1)}

    # unbarred family: alpha/beta/mu relations
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                a_c = (hdiff(n, i, j) + 1) / hdiff(n, i, j)
                r = nf(x[i] * x[j] - (x[j] * x[i]).times_coeff_left(a_c))
                if not r.is_zero:
                    failures.append(_fail("unbarred_xx", (i, j), str(r)))
                r = nf(d_un[j] * d_un[i] -
                       (d_un[i] * d_un[j]).times_coeff_left(a_c))
                if not r.is_zero:
                    failures.append(_fail("unbarred_dd", (i, j), str(r)))
            if i != j:
                r = nf(x[i] * d_un[j] - d_un[j] * x[i])
                if not r.is_zero:
                    failures.append(_fail("unbarred_xd_commute", (i, j), str(r)))
        acc = alg.zero()
        for j in range(1, n + 1):
            beta = _beta(n, i, j)
            acc = acc + (d_un[j] * x[j]).times_coeff_left(beta)
        acc = acc + alg.scalar(mu_coeff(n, i))
        r = nf(x[i] * d_un[i] - acc)
        if not r.is_zero:
            failures.append(_fail("unbarred_diagonal", (i,), str(r)))

    # doubly-barred family against the shat tensor
    s = shat(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            acc = alg.zero()
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    c = s.get(i, k, j, l)
                    if c is not None:
                        acc = acc + (x[l] * d_bb[k]).times_coeff_left(c)
            if i == j:
                acc = acc + one
            r = nf(d_bb[j] * x[i] - acc)
            if not r.is_zero:
                failures.append(_fail("double_barred_exchange", (i, j), str(r)))
    # derivative change of basis: D_i == bbar_i (q-)^{-1} == (q+) bbar_i
    for i in range(1, n + 1):
        lhs = d_bb[i].times_coeff_right(qminus(n, i).inverse())
        if nf(lhs - alg.d(i)) != alg.zero():
            failures.append(_fail("derivative_scaling_right", (i,),
                                  str(nf(lhs - alg.d(i)))))
        lhs = d_bb[i].times_coeff_left(qplus(n, i))
        if nf(lhs - alg.d(i)) != alg.zero():
            failures.append(_fail("derivative_scaling_left", (i,),
                                  str(nf(lhs - alg.d(i)))))
    return failures


def _beta(n, i, j):
    one = RatFun.const(n, 1)
    pj = phi(n, j).shift(eps(n, j))
    if i == j:
        return pj / phi(n, i)
    return (one / (one - hdiff(n, i, j))) * pj / phi(n, i)


# -- Zhelobenko automorphisms ---------------------------------------------------


def zhelobenko_images(alg, i):
    """Generator images of the i-th braid automorphism (1 <= i < n)."""
    n = alg.n
    if not 1 <= i < n:
        raise CoefficientError(f"braid index {i} out of range 1..{n - 1}")
    h = hdiff(n, i, i + 1)
    img = {}
    for a in range(1, alg.copies + 1):
        img[xgen(i, a)] = (-alg.x(i + 1, a)).times_coeff_right(h / (h - 1))
        img[xgen(i + 1, a)] = alg.x(i, a)
        img[dgen(i, a)] = (-alg.d(i + 1, a)).times_coeff_left((h - 1) / h)
        img[dgen(i + 1, a)] = alg.d(i, a)
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                img[xgen(j, a)] = alg.x(j, a)
                img[dgen(j, a)] = alg.d(j, a)
    return img


def zhelobenko(alg, i, el, _img_cache=None):
    """Apply the i-th braid automorphism and normal order the result."""
    img = (_img_cache or {}).get(i) if _img_cache is not None else None
    if img is None:
        img = zhelobenko_images(alg, i)
        if _img_cache is not None:
            _img_cache[i] = img
    perm = list(range(1, alg.n + 1))
    perm[i - 1], perm[i] = perm[i], perm[i - 1]
    perm = tuple(perm)
    out = alg.zero()
    for word, c in el.terms.items():
        acc = alg.scalar(c.permute(perm))
        for g in word:
            acc = acc * img[g]
        out = out + acc
    return alg.normal_form(out)


def verify_zhelobenko(n, copies=1):
    """Automorphism, braid and mu-propagation checks."""
    alg = WeylAlgebra(n, copies)
    failures = []
    cache = {}
    gens = alg.generators()
    nf = alg.normal_form

    # q_i respects every quadratic exchange: q(nf(g1 g2)) == nf(q(g1) q(g2))
    for i in range(1, n):
        for g1 in gens:
            for g2 in gens:
                prod = nf(alg.gen_element(g1) * alg.gen_element(g2))
                lhs = zhelobenko(alg, i, prod, cache)
                rhs = nf(zhelobenko(alg, i, alg.gen_element(g1), cache)
                         * zhelobenko(alg, i, alg.gen_element(g2), cache))
                if lhs != rhs:
                    failures.append(_fail("automorphism_on_exchange",
                                          (i, g1, g2), str(lhs), str(rhs)))
    # braid relation on every generator (needs n >= 3)
    for i in range(1, n - 1):
        for g in gens:
            e = alg.gen_element(g)
            lhs = zhelobenko(alg, i, zhelobenko(
                alg, i + 1, zhelobenko(alg, i, e, cache), cache), cache)
            rhs = zhelobenko(alg, i + 1, zhelobenko(
                alg, i, zhelobenko(alg, i + 1, e, cache), cache), cache)
            if lhs != rhs:
                failures.append(_fail("braid_relation", (i, g),
                                      str(lhs), str(rhs)))
    # mu recursion: x^i d_i - sum_j beta_ij d_j x^j == mu_i == -1/phi_i
    relations = {}
    for i in range(1, n + 1):
        acc = alg.zero()
        for j in range(1, n + 1):
            acc = acc + (_unbarred_d(alg, j, 1) * alg.x(j, 1)
                         ).times_coeff_left(_beta(n, i, j))
        got = nf(alg.x(i, 1) * _unbarred_d(alg, i, 1) - acc)
        want = alg.scalar(mu_coeff(n, i))
        if got != want:
            failures.append(_fail("mu_recursion", (i,), str(got), str(want)))
        relations[i] = (alg.x(i, 1) * _unbarred_d(alg, i, 1) - acc - want)
    # propagation step: the braid image of each diagonal relation element
    # is again a relation, i.e. normal-orders to zero (this is how the
    # value of each mu follows from the base case at the last index)
    for i in range(1, n):
        for k in relations:
            img = zhelobenko(alg, i, relations[k], cache)
            if not img.is_zero:
                failures.append(_fail("mu_propagation", (i, k), str(img)))
    return failures


def zhelobenko_square_action(n, copies=1):
    """Computed (not asserted) action of each squared braid generator."""
    alg = WeylAlgebra(n, copies)
    cache = {}
    out = {}
    for i in range(1, n):
        for g in alg.generators():
            sq = zhelobenko(alg, i, zhelobenko(
                alg, i, alg.gen_element(g), cache), cache)
            out[(i, g)] = str(sq)
    return out


# -- split realization of the braided double ------------------------------------


def split_realization(n, copies, nu):
    """Two-interval realization of the braided product inside the algebra."""
    if not 1 <= nu < copies:
        raise CoefficientError("split point must satisfy 1 <= nu < N")
    alg = WeylAlgebra(n, copies)
    m1 = alg.partial_ltilde(range(1, nu + 1))
    m2 = alg.partial_ltilde(range(nu + 1, copies + 1))
    failures = []
    r = rhat(n)
    for tag, mat in (("first_interval", m1), ("second_interval", m2)):
        res = reflection_residual(alg, r, mat, n)
        for key in sorted(res):
            nf = res[key].normal_form()
            if not nf.is_zero:
                failures.append(_fail(f"reflection_{tag}", key, str(nf)))
    # cross relation R M1 R M2 == M2 R M1 R
    from .algebra import mat_from_tensor, mat_mul, mat_sub
    r12 = mat_from_tensor(alg, r)
    a1 = mat_first_leg(alg, m1, n)
    a2 = mat_first_leg(alg, m2, n)
    lhs = mat_mul(alg, mat_mul(alg, mat_mul(alg, r12, a1, n), r12, n), a2, n)
    rhs = mat_mul(alg, mat_mul(alg, mat_mul(alg, a2, r12, n), a1, n), r12, n)
    diff = mat_sub(lhs, rhs)
    for key in sorted(diff):
        nfv = diff[key].normal_form()
        if not nfv.is_zero:
            failures.append(_fail("braided_cross_relation", key, str(nfv)))
    # the two intervals sum to the full composite matrix
    lt = alg.ltilde()
    for key in sorted(lt):
        if (m1[key] + m2[key]) != lt[key]:
            failures.append(_fail("interval_sum", key,
                                  str(m1[key] + m2[key]), str(lt[key])))
    return failures


# -- suite driver ----------------------------------------------------------------


def run_suite(n, copies=1, fermionic=False, suite="all"):
    failures = []
    if suite in ("all", "confluence"):
        failures.extend(check_confluence(n, copies, fermionic))
    if suite in ("all", "reflection"):
        failures.extend(verify_reflection(n, copies, fermionic))
    if suite in ("all", "exchange"):
        failures.extend(check_forward_exchange(n, copies, fermionic))
    if suite in ("all", "variants"):
        if not fermionic:
            failures.extend(check_variant_generators(n))
    if suite in ("all", "zhelobenko"):
        if not fermionic:
            failures.extend(verify_zhelobenko(n, copies))
    if suite in ("all", "split"):
        if copies >= 2 and not fermionic:
            failures.extend(split_realization(n, copies, 1))
    if suite not in ("all", "confluence", "reflection", "exchange",
                     "variants", "zhelobenko", "split"):
        raise ValueError(f"unknown weyl suite {suite!r}")
    return failures
