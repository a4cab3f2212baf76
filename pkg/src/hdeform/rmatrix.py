"""Dynamical exchange tensors and their identity checks.

The rank-4 tensors (the exchange operator ``rhat``, its companion
``that``, the variant ``shat`` and the skew inverse ``psihat``) are
sparse maps ``(i, k, j, l) -> RatFun`` with upper index pair (i, k) and
lower pair (j, l); an absent key means the entry is zero.  Every stored
entry has {i, k} == {j, l} as multisets, and rank-2 operators (``qplus``
/ ``qminus`` weights and the Cartan matrix ``hmat``) are diagonal.

Checkers enumerate index tuples exhaustively and return a list of
failure records; an empty list means the identity holds exactly.
"""

from __future__ import annotations

from .coeffs import RatFun, eps, hdiff, qminus, qplus, serialize


class DynTensor2:
    """Diagonal operator: map i -> RatFun."""

    __slots__ = ("n", "entries")

    def __init__(self, n, entries):
        self.n = n
        self.entries = dict(entries)

    def __getitem__(self, i):
        return self.entries.get(i) or RatFun.zero(self.n)

    def trace(self):
        tot = RatFun.zero(self.n)
        for v in self.entries.values():
            tot = tot + v
        return tot


class DynTensor4:
    """Sparse rank-4 tensor over the coefficient ring."""

    __slots__ = ("n", "entries")

    def __init__(self, n, entries):
        self.n = n
        self.entries = {key: val for key, val in entries.items()
                        if not val.is_zero}
        for (i, k, j, l) in self.entries:
            if sorted((i, k)) != sorted((j, l)):
                raise ValueError(f"entry {(i, k, j, l)} breaks the "
                                 "multiset sparsity pattern")

    def get(self, i, k, j, l):
        return self.entries.get((i, k, j, l))

    def __getitem__(self, key):
        return self.entries.get(key) or RatFun.zero(self.n)

    def by_upper(self):
        idx = {}
        for (i, k, j, l), val in self.entries.items():
            idx.setdefault((i, k), []).append(((j, l), val))
        return idx


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def rhat(n):
    """The involutive dynamical exchange operator.

    Nonzero entries: (i,k | i,k) = 1/h_ik for i != k, and
    (i,k | k,i) = (h_ik^2 - 1)/h_ik^2 for i < k, = 1 for i >= k.
    """
    one = RatFun.const(n, 1)
    e = {}
    for i in range(1, n + 1):
        e[(i, i, i, i)] = one
        for k in range(1, n + 1):
            if k == i:
                continue
            d = hdiff(n, i, k)
            e[(i, k, i, k)] = one / d
            if i < k:
                e[(i, k, k, i)] = (d * d - 1) / (d * d)
            else:
                e[(i, k, k, i)] = one
    return DynTensor4(n, e)


def that(n):
    """Companion tensor of the x-against-d exchange.

    Nonzero entries: (i,k | i,k) = -1/(h_ik - 1) for i != k, and
    (k,i | i,k) = h_ik (h_ik + 2)/(h_ik + 1)^2 for i < k, = 1 for i >= k.
    """
    one = RatFun.const(n, 1)
    e = {}
    for i in range(1, n + 1):
        e[(i, i, i, i)] = one
        for k in range(1, n + 1):
            if k == i:
                continue
            d = hdiff(n, i, k)
            e[(i, k, i, k)] = -(one / (d - 1))
            if i < k:
                e[(k, i, i, k)] = d * (d + 2) / ((d + 1) * (d + 1))
            else:
                e[(k, i, i, k)] = one
    return DynTensor4(n, e)


def shat(n):
    """Exchange tensor for the double-barred derivative family.

    Nonzero entries: (i,k | i,k) = 1/(h_ik + 1), and
    (i,k | k,i) = 1 for i > k, = h_ik (h_ik - 2)/(h_ik - 1)^2 for i < k.
    """
    one = RatFun.const(n, 1)
    e = {}
    for i in range(1, n + 1):
        e[(i, i, i, i)] = one
        for k in range(1, n + 1):
            if k == i:
                continue
            d = hdiff(n, i, k)
            e[(i, k, i, k)] = one / (d + 1)
            if i > k:
                e[(i, k, k, i)] = one
            else:
                e[(i, k, k, i)] = d * (d - 2) / ((d - 1) * (d - 1))
    return DynTensor4(n, e)


def psihat(n):
    """Skew inverse of ``that``.

    Nonzero entries: (i,k | i,k) = qplus_i qminus_k / (h_ik + 1) for all
    i, k (the diagonal i == k included), and for i != k
    (i,k | k,i) = 1 for i < k, = (h_ik - 1)^2/(h_ik (h_ik - 2)) for i > k.
    """
    one = RatFun.const(n, 1)
    qp = {i: qplus(n, i) for i in range(1, n + 1)}
    qm = {i: qminus(n, i) for i in range(1, n + 1)}
    e = {}
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            if i == k:
                e[(i, i, i, i)] = qp[i] * qm[i]
                continue
            d = hdiff(n, i, k)
            e[(i, k, i, k)] = qp[i] * qm[k] / (d + 1)
            if i < k:
                e[(i, k, k, i)] = one
            else:
                e[(i, k, k, i)] = (d - 1) * (d - 1) / (d * (d - 2))
    return DynTensor4(n, e)


def qplus_op(n):
    return DynTensor2(n, {i: qplus(n, i) for i in range(1, n + 1)})


def qminus_op(n):
    return DynTensor2(n, {i: qminus(n, i) for i in range(1, n + 1)})


def hmat(n):
    """Cartan diagonal matrix with entries h_j + n."""
    return DynTensor2(n, {j: hdiff(n, j, j) + RatFun.var(n, j) + n
                          for j in range(1, n + 1)})


BUILDERS = {
    "rhat": rhat,
    "that": that,
    "shat": shat,
    "psihat": psihat,
    "qplus": qplus_op,
    "qminus": qminus_op,
    "hmat": hmat,
}


def build(name, n):
    try:
        return BUILDERS[name](n)
    except KeyError:
        raise ValueError(f"unknown tensor {name!r}") from None


# ---------------------------------------------------------------------------
# failure records
# ---------------------------------------------------------------------------

def _fail(identity, indices, lhs, rhs):
    return {
        "identity": identity,
        "indices": list(indices),
        "lhs": serialize(lhs) if isinstance(lhs, RatFun) else str(lhs),
        "rhs": serialize(rhs) if isinstance(rhs, RatFun) else str(rhs),
    }


def _compare_sparse(identity, got, expected, failures):
    for key in sorted(set(got) | set(expected)):
        g = got.get(key)
        e = expected.get(key)
        n = (g or e).n
        g = g if g is not None else RatFun.zero(n)
        e = e if e is not None else RatFun.zero(n)
        if g != e:
            failures.append(_fail(identity, key, g, e))


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

def check_involutive(n):
    """rhat squared is the identity operator."""
    r = rhat(n)
    one = RatFun.const(n, 1)
    got = {}
    by_up = r.by_upper()
    for (i, k, j, l), v in r.entries.items():
        for (m, p), w in by_up.get((j, l), ()):
            key = (i, k, m, p)
            acc = got.get(key)
            got[key] = v * w if acc is None else acc + v * w
    got = {k: v for k, v in got.items() if not v.is_zero}
    expected = {(i, k, i, k): one
                for i in range(1, n + 1) for k in range(1, n + 1)}
    failures = []
    _compare_sparse("rhat_squared_identity", got, expected, failures)
    return failures


def check_dybe(n):
    """Dynamical Yang-Baxter equation, exhaustively over free indices."""
    r = rhat(n)
    by_up = r.by_upper()
    lhs = {}
    rhs = {}
    for (i, j, a, b), v1 in r.entries.items():
        for k in range(1, n + 1):
            # v1 * r[b,k,u,rr][-eps_a] * r[a,u,m,nn]
            for (u, rr), v2 in by_up.get((b, k), ()):
                v2s = v2.shift(tuple(-x for x in eps(n, a)))
                v12 = v1 * v2s
                for (m, nn), v3 in by_up.get((a, u), ()):
                    key = (i, j, k, m, nn, rr)
                    term = v12 * v3
                    acc = lhs.get(key)
                    lhs[key] = term if acc is None else acc + term
    for (j, k, a, b), v1 in r.entries.items():
        for i in range(1, n + 1):
            v1s = v1.shift(tuple(-x for x in eps(n, i)))
            # v1s * r[i,a,m,u] * r[u,b,nn,rr][-eps_m]
            for (m, u), v2 in by_up.get((i, a), ()):
                v12 = v1s * v2
                for (nn, rr), v3 in by_up.get((u, b), ()):
                    key = (i, j, k, m, nn, rr)
                    term = v12 * v3.shift(tuple(-x for x in eps(n, m)))
                    acc = rhs.get(key)
                    rhs[key] = term if acc is None else acc + term
    lhs = {k: v for k, v in lhs.items() if not v.is_zero}
    rhs = {k: v for k, v in rhs.items() if not v.is_zero}
    failures = []
    _compare_sparse("dynamical_yang_baxter", lhs, rhs, failures)
    return failures


def check_skew_inverse(n):
    """psihat is the skew inverse of that, plus its two partial traces."""
    t = that(n)
    psi = psihat(n)
    one = RatFun.const(n, 1)
    failures = []

    # sum_{k,l} psi[i,k | j,l] t[l,m | k,nn] == delta(i,nn) delta(m,j)
    got = {}
    for (i, k, j, l), v in psi.entries.items():
        for m in range(1, n + 1):
            for nn in range(1, n + 1):
                w = t.get(l, m, k, nn)
                if w is None:
                    continue
                key = (i, j, m, nn)
                term = v * w
                acc = got.get(key)
                got[key] = term if acc is None else acc + term
    got = {k: v for k, v in got.items() if not v.is_zero}
    expected = {(i, j, j, i): one
                for i in range(1, n + 1) for j in range(1, n + 1)}
    _compare_sparse("skew_inverse_contraction", got, expected, failures)

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            tot = RatFun.zero(n)
            for k in range(1, n + 1):
                v = psi.get(i, k, j, k)
                if v is not None:
                    tot = tot + v
            want = qplus(n, i) if i == j else RatFun.zero(n)
            if tot != want:
                failures.append(_fail("psihat_trace2", (i, j), tot, want))
    for m in range(1, n + 1):
        for nn in range(1, n + 1):
            tot = RatFun.zero(n)
            for a in range(1, n + 1):
                v = psi.get(a, m, a, nn)
                if v is not None:
                    tot = tot + v
            want = qminus(n, nn) if m == nn else RatFun.zero(n)
            if tot != want:
                failures.append(_fail("psihat_trace1", (m, nn), tot, want))
    return failures


def check_aux_identities(n):
    """The web of identities tying rhat, that, shat, psihat and q-weights."""
    r = rhat(n)
    t = that(n)
    s = shat(n)
    psi = psihat(n)
    qp = {i: qplus(n, i) for i in range(1, n + 1)}
    qm = {i: qminus(n, i) for i in range(1, n + 1)}
    one = RatFun.const(n, 1)
    zero = RatFun.zero(n)
    failures = []

    rng = range(1, n + 1)
    for k in rng:
        for l in rng:
            for i in rng:
                for j in rng:
                    # shifted that equals transposed-swapped rhat
                    lhs = (t.get(k, l, i, j) or zero).shift(
                        tuple(-x for x in eps(n, l)))
                    rhs = r.get(l, k, j, i) or zero
                    if lhs != rhs:
                        failures.append(_fail("that_from_rhat",
                                              (k, l, i, j), lhs, rhs))
                    # shat is the one-step shift of rhat
                    lhs = s.get(i, j, k, l) or zero
                    rhs = (r.get(i, j, k, l) or zero).shift(eps(n, k))
                    if lhs != rhs:
                        failures.append(_fail("shat_from_rhat",
                                              (i, j, k, l), lhs, rhs))
    for i in rng:
        for k in rng:
            for j in rng:
                for l in rng:
                    sv = s.get(i, k, j, l) or zero
                    shiftkl = tuple(x - y for x, y in zip(eps(n, k), eps(n, l)))
                    lhs = psi.get(i, k, j, l) or zero
                    rhs = (qp[i].shift(shiftkl) * sv
                           * qp[l].inverse().shift(tuple(-x for x in eps(n, l))))
                    if lhs != rhs:
                        failures.append(_fail("psihat_from_shat",
                                              (i, k, j, l), lhs, rhs))
                    # transpose symmetry under global sign reversal
                    lhs = r.get(k, i, l, j) or zero
                    rhs = (r.get(j, l, i, k) or zero).negate_h()
                    if lhs != rhs:
                        failures.append(_fail("rhat_transpose_negation",
                                              (i, k, j, l), lhs, rhs))
    # weighted row/column sums of rhat collapse to the identity
    for m in rng:
        for nn in rng:
            tot1 = zero
            tot2 = zero
            for a in rng:
                v = r.get(m, a, nn, a)
                if v is not None:
                    tot1 = tot1 + qm[a].shift(tuple(-x for x in eps(n, m))) * v
                w = r.get(a, m, a, nn)
                if w is not None:
                    tot2 = tot2 + qp[a].shift(eps(n, m)) * w
            want = one if m == nn else zero
            if tot1 != want:
                failures.append(_fail("qminus_weighted_row_sum",
                                      (m, nn), tot1, want))
            if tot2 != want:
                failures.append(_fail("qplus_weighted_column_sum",
                                      (m, nn), tot2, want))
    # exchange of shifted q-weights
    for i in rng:
        for j in rng:
            lhs = qm[j] * qm[i].shift(tuple(-x for x in eps(n, j)))
            rhs = qm[i] * qm[j].shift(tuple(-x for x in eps(n, i)))
            if lhs != rhs:
                failures.append(_fail("qminus_shift_exchange",
                                      (i, j), lhs, rhs))
    for (i, k, j, l), v in r.entries.items():
        lhs = (qp[i].shift(tuple(-x for x in eps(n, i)))
               * qp[k].shift(tuple(-x - y for x, y in zip(eps(n, i), eps(n, k))))
               * v)
        rhs = (v * qp[j].shift(tuple(-x for x in eps(n, j)))
               * qp[l].shift(tuple(-x - y for x, y in zip(eps(n, j), eps(n, l)))))
        if lhs != rhs:
            failures.append(_fail("qplus_rhat_compatibility",
                                  (i, k, j, l), lhs, rhs))
    return failures


def check_traces(n):
    """Exact trace values and reciprocity of the q-weights."""
    failures = []
    one = RatFun.const(n, 1)
    tp = qplus_op(n).trace()
    tm = qminus_op(n).trace()
    want = RatFun.const(n, n)
    if tp != want:
        failures.append(_fail("trace_qplus", (n,), tp, want))
    if tm != want:
        failures.append(_fail("trace_qminus", (n,), tm, want))
    for j in range(1, n + 1):
        v = qminus(n, j).shift(eps(n, j)) * qplus(n, j)
        if v != one:
            failures.append(_fail("qminus_qplus_reciprocal", (j,), v, one))
        if qminus(n, j).negate_h() != qplus(n, j):
            failures.append(_fail("q_sign_reversal", (j,),
                                  qminus(n, j).negate_h(), qplus(n, j)))
    for i in range(1, n + 1):
        tot = RatFun.zero(n)
        for j in range(1, n + 1):
            tot = tot + qminus(n, j) / (hdiff(n, i, j) + 1)
        if tot != one:
            failures.append(_fail("qminus_partial_fraction_row", (i,), tot, one))
    return failures


SUITES = {
    "involutive": check_involutive,
    "dybe": check_dybe,
    "skew": check_skew_inverse,
    "aux": check_aux_identities,
    "traces": check_traces,
}


def run_suite(n, suite="all"):
    """Run one named identity suite (or all of them) at rank n."""
    names = sorted(SUITES) if suite == "all" else [suite]
    failures = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown rmatrix suite {name!r}")
        failures.extend(SUITES[name](n))
    return failures
