"""Binary extension field GF(2^m) arithmetic backed by log/antilog tables."""

import numpy as np

# Primitive polynomials for the supported field sizes (bit i = coefficient of x^i).
_DEFAULT_PRIMITIVE = {
    4: 0b10011,       # x^4 + x + 1
    8: 0b100011101,   # x^8 + x^4 + x^3 + x^2 + 1
}


class GaloisField:
    """GF(2^m) with exp/log tables over a primitive polynomial.

    Elements are ints in [0, 2^m). Addition is XOR. The exp table is
    doubled in length so products of two logs can be looked up without a
    modulo. Instances are immutable after construction and safe to share.
    """

    def __init__(self, extension_degree, primitive_polynomial=None):
        if primitive_polynomial is None:
            try:
                primitive_polynomial = _DEFAULT_PRIMITIVE[extension_degree]
            except KeyError:
                raise ValueError(f"no default primitive polynomial for m={extension_degree}")
        self.extension_degree = extension_degree
        self.primitive_polynomial = primitive_polynomial
        self.order = 1 << extension_degree
        self.group_order = self.order - 1  # size of the multiplicative group

        n = self.group_order
        exp = np.zeros(2 * n, dtype=np.int32)
        log = np.zeros(self.order, dtype=np.int32)
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= primitive_polynomial
        if x != 1 or np.unique(exp[:n]).size != n:
            raise ValueError(f"0x{primitive_polynomial:x} is not primitive for m={extension_degree}")
        exp[n:] = exp[:n]
        self.exp = exp
        self.log = log

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero field element")
        if a == 0:
            return 0
        return int(self.exp[self.log[a] - self.log[b] + self.group_order])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self.exp[self.group_order - self.log[a]])

    def pow(self, a, e):
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.log[a]) * e) % self.group_order])

    def alpha_pow(self, e):
        """alpha^e for any integer exponent e."""
        return int(self.exp[e % self.group_order])

    def poly_mul(self, p, q):
        """Product of two polynomials with field coefficients (ascending order)."""
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a == 0:
                continue
            for j, b in enumerate(q):
                if b:
                    out[i + j] ^= self.mul(a, b)
        return out

    def poly_eval(self, p, x):
        """Evaluate a polynomial (ascending coefficients) at a field element."""
        acc = 0
        for c in reversed(p):
            acc = self.mul(acc, x) ^ c
        return acc

    def __repr__(self):
        return f"GaloisField(m={self.extension_degree}, poly=0x{self.primitive_polynomial:x})"
