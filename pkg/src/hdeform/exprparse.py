"""Parser for differential-operator expressions.

Grammar: sums of products, where a product factor is either a generator
``x[i,a]`` / ``D[j,a]`` (copy label ``a`` optional, defaulting to 1) or
a coefficient expression in the h-variables (the coefficient grammar of
:mod:`hdeform.coeffs`, atoms only; parenthesize anything composite).
``*`` is concatenation and the result is NOT normal ordered.
"""

from __future__ import annotations

from .coeffs import _Parser


class _WeylParser(_Parser):

    def __init__(self, alg, text):
        super().__init__(alg.n, text)
        self.alg = alg

    def element(self):
        node = self.signed_product()
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                node = node + self.signed_product()
            elif c == "-":
                self.pos += 1
                node = node - self.signed_product()
            else:
                return node

    def signed_product(self):
        sign = 1
        while self.peek() in "+-":
            if self.text[self.pos] == "-":
                sign = -sign
            self.pos += 1
        node = self.product_factor()
        while self.peek() == "*":
            self.pos += 1
            node = node * self.product_factor()
        return node if sign > 0 else -node

    def product_factor(self):
        c = self.peek()
        if c in ("x", "D") and self.text[self.pos:self.pos + 2][-1] == "[":
            kind = self.text[self.pos]
            self.pos += 2
            i = self.unsigned()
            a = 1
            if self.peek() == ",":
                self.pos += 1
                a = self.unsigned()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            gen = self.alg.x if kind == "x" else self.alg.d
            try:
                base = gen(i, a)
            except Exception as exc:
                self.error(str(exc))
        else:
            base = self.alg.scalar(self.atom())
        if self.peek() == "^":
            self.pos += 1
            k = self.unsigned()
            out = self.alg.one()
            for _ in range(k):
                out = out * base
            return out
        return base


def parse_weyl_expression(alg, text):
    p = _WeylParser(alg, text)
    node = p.element()
    p.skip_ws()
    if p.pos != len(text):
        p.error("unexpected trailing input")
    return node
