"""BCH component codec: construction, systematic encoding, syndromes, and
bounded-distance decoding (BDD) with explicit success/failure outcomes.

Bit/position conventions used throughout the package:

* position 0 is the first transmitted bit, the extension parity bit (if any)
  occupies the last position;
* transmitted inner position i carries the coefficient of
  x^(n_inner - 1 - shortened_bits - i), so information bits sit at the high
  degrees and the polynomial remainder (parity) fills the trailing positions;
* shortened positions are the leading information bits, fixed to zero and
  never transmitted.  A decoder that locates an error there declares failure.
"""

from dataclasses import dataclass

import numpy as np

from .gf import GaloisField


@dataclass(frozen=True)
class BddOutcome:
    """Result of one bounded-distance decoding attempt.

    On success ``codeword`` is the corrected word and ``error_positions``
    lists the flipped positions (at most t of them).  On failure
    ``codeword`` is the unmodified input and ``error_positions`` is empty.
    """

    success: bool
    codeword: np.ndarray
    error_positions: tuple

    @property
    def error_weight(self):
        return len(self.error_positions)


class BchCode:
    """A (possibly extended and/or shortened) binary BCH component code.

    Use :func:`build_code` to construct instances.  All derived tables are
    precomputed here; the object is immutable afterwards and safe to share
    between concurrent decoders.
    """

    def __init__(self, gf, n_inner, k_inner, t, extended, shortened_bits, generator_int):
        self.gf = gf
        self.n_inner = n_inner
        self.k_inner = k_inner
        self.t = t
        self.extended = extended
        self.shortened_bits = shortened_bits
        self.k_c = k_inner - shortened_bits
        self.n_c = n_inner + (1 if extended else 0) - shortened_bits
        self.d0 = 2 * t + 2 if extended else 2 * t + 1
        self.n_parity = n_inner - k_inner
        self._generator_int = generator_int
        gen_bits = np.zeros(generator_int.bit_length(), dtype=np.uint8)
        for i in range(generator_int.bit_length()):
            gen_bits[i] = (generator_int >> i) & 1
        self.generator_polynomial = gen_bits  # ascending coefficients

        self._build_tables()

    # -- derived tables -----------------------------------------------------

    def _build_tables(self):
        gf = self.gf
        nf = gf.group_order
        s = self.shortened_bits
        n_in_tx = self.n_inner - s  # transmitted positions that belong to the inner code

        # degree carried by each transmitted position (-1 for the parity bit)
        deg = np.full(self.n_c, -1, dtype=np.int64)
        deg[:n_in_tx] = self.n_inner - 1 - s - np.arange(n_in_tx)
        self._deg = deg

        # syndrome_tables[ki, pos] = alpha^((2*ki+1) * deg(pos)); parity column is zero
        tabs = np.zeros((self.t, self.n_c), dtype=np.int32)
        for ki in range(self.t):
            k = 2 * ki + 1
            tabs[ki, :n_in_tx] = gf.exp[(k * deg[:n_in_tx]) % nf]
        self.syndrome_tables = tabs
        # per-position odd-syndrome update rows, used for incremental updates
        self.syndrome_update = tabs.T.copy()  # (n_c, t)

        # systematic parity generator: row i = parity bits when info bit i is set
        P = np.zeros((self.k_c, self.n_parity), dtype=np.uint8)
        g = self._generator_int
        gdeg = self.n_parity
        for i in range(self.k_c):
            v = 1 << int(deg[i])
            for bit in range(int(deg[i]), gdeg - 1, -1):
                if (v >> bit) & 1:
                    v ^= g << (bit - gdeg)
            for j in range(self.n_parity):
                P[i, j] = (v >> (self.n_parity - 1 - j)) & 1
        self.parity_matrix = P

        self._lut = self._build_lut() if self.t == 2 else None

    def _build_lut(self):
        """Exact syndrome -> error-degree table for t = 2.

        Keyed by (S1 << m) | S3.  Values pack the error degrees; -1 marks a
        syndrome with no error pattern of weight <= 2 (decoding failure).
        Distinct patterns of weight <= 2 have distinct syndromes because the
        designed distance is at least 5, so there are no collisions.
        """
        gf = self.gf
        nf = gf.group_order
        m = gf.extension_degree
        d = np.arange(nf, dtype=np.int64)
        a1 = gf.exp[:nf].astype(np.int64)
        a3 = gf.exp[(3 * d) % nf].astype(np.int64)

        lut = np.full(1 << (2 * m), -1, dtype=np.int64)
        # single errors: value = degree | 1 << 62 marker via count field
        keys1 = (a1 << m) | a3
        lut[keys1] = d | (1 << 16)
        # double errors
        i, j = np.triu_indices(nf, k=1)
        keys2 = ((a1[i] ^ a1[j]) << m) | (a3[i] ^ a3[j])
        lut[keys2] = i | (j << 8) | (2 << 16)
        return lut

    # -- helpers ------------------------------------------------------------

    def positions_from_degrees(self, degrees):
        """Map inner-code degrees to transmitted positions, or None if any
        degree falls in the shortened region."""
        top = self.n_inner - 1 - self.shortened_bits
        out = []
        for dg in degrees:
            if dg > top:
                return None
            out.append(top - dg)
        return out

    def is_codeword(self, word):
        syn, parity_ok = syndromes(self, word)
        return parity_ok and not any(syn)

    def __repr__(self):
        tag = "ext" if self.extended else "plain"
        return (f"BchCode(n_c={self.n_c}, k_c={self.k_c}, t={self.t}, {tag}, "
                f"shortened={self.shortened_bits})")


def _minimal_polynomial(gf, exponent):
    """Minimal polynomial over GF(2) of alpha^exponent (ascending coefficients)."""
    nf = gf.group_order
    coset = set()
    e = exponent % nf
    while e not in coset:
        coset.add(e)
        e = (2 * e) % nf
    poly = [1]
    for e in sorted(coset):
        poly = gf.poly_mul(poly, [gf.alpha_pow(e), 1])  # (x + alpha^e)
    if any(c not in (0, 1) for c in poly):
        raise AssertionError("minimal polynomial has non-binary coefficients")
    return poly


def build_code(n_inner, k, t, extended=False, shortened_bits=0):
    """Build a BCH component code from the inner (n_inner, k, t) triple.

    ``extended`` appends one overall-parity bit, ``shortened_bits`` removes
    that many leading information bits.  The resulting transmitted length is
    n_inner + extended - shortened_bits and the information length per
    transmitted word is k - shortened_bits.

    Raises ValueError if the triple is inconsistent, i.e. the degree of the
    generator polynomial (the LCM of the minimal polynomials of
    alpha^1 .. alpha^2t) is not n_inner - k.
    """
    m = (n_inner + 1).bit_length() - 1
    if (1 << m) - 1 != n_inner:
        raise ValueError(f"n_inner must be 2^m - 1, got {n_inner}")
    if not 0 <= shortened_bits < k:
        raise ValueError("shortened_bits must be in [0, k)")
    gf = GaloisField(m)

    seen = set()
    g = [1]
    for i in range(1, 2 * t + 1):
        rep = min({(i * (1 << j)) % gf.group_order for j in range(m)})
        if rep in seen:
            continue
        seen.add(rep)
        g = gf.poly_mul(g, _minimal_polynomial(gf, i))
    gdeg = len(g) - 1
    if gdeg != n_inner - k:
        raise ValueError(
            f"inconsistent BCH triple ({n_inner},{k},{t}): generator degree "
            f"{gdeg} != n_inner - k = {n_inner - k}")
    gen_int = 0
    for i, c in enumerate(g):
        gen_int |= int(c) << i
    return BchCode(gf, n_inner, k, t, bool(extended), shortened_bits, gen_int)


def encode(code, info):
    """Systematically encode ``info`` (length k_c) into an n_c-bit codeword."""
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (code.k_c,):
        raise ValueError(f"info length {info.shape} != ({code.k_c},)")
    parity = (info @ code.parity_matrix) % 2
    word = np.concatenate([info, parity.astype(np.uint8)])
    if code.extended:
        ext = np.uint8(word.sum() % 2)
        word = np.append(word, ext)
    return word


def syndromes(code, word):
    """Power-sum syndromes S_1..S_2t of ``word`` plus the overall parity check.

    Returns (syn, parity_ok) where syn is a list of 2t field elements and
    parity_ok reports the extension-parity check (always True for
    non-extended codes).  The word is a codeword iff all syndromes are zero
    and parity_ok holds.
    """
    word = np.asarray(word, dtype=np.uint8)
    if word.shape != (code.n_c,):
        raise ValueError(f"word length {word.shape} != ({code.n_c},)")
    on = word.astype(bool)
    s_odd = [int(np.bitwise_xor.reduce(code.syndrome_tables[ki][on]))
             for ki in range(code.t)]
    syn = _expand_syndromes(code, s_odd)
    parity_ok = (not code.extended) or int(word.sum()) % 2 == 0
    return syn, parity_ok


def _expand_syndromes(code, s_odd):
    """Full S_1..S_2t from the odd power sums (S_2k = S_k^2 for binary codes)."""
    gf = code.gf
    syn = [0] * (2 * code.t)
    for ki in range(code.t):
        syn[2 * ki] = s_odd[ki]
    for k in range(2, 2 * code.t + 1, 2):
        half = syn[k // 2 - 1]
        syn[k - 1] = gf.mul(half, half)
    return syn


def _berlekamp_massey(gf, syn):
    """Error-locator polynomial (ascending coefficients) for syndromes S_1..S_2t."""
    C = [1]
    B = [1]
    L = 0
    shift = 1
    b = 1
    for n in range(len(syn)):
        d = syn[n]
        for i in range(1, L + 1):
            if i < len(C) and C[i]:
                d ^= gf.mul(C[i], syn[n - i])
        if d == 0:
            shift += 1
        elif 2 * L <= n:
            T = list(C)
            coef = gf.div(d, b)
            C = C + [0] * (len(B) + shift - len(C))
            for i, c in enumerate(B):
                if c:
                    C[i + shift] ^= gf.mul(coef, c)
            L = n + 1 - L
            B = T
            b = d
            shift = 1
        else:
            coef = gf.div(d, b)
            C = C + [0] * max(0, len(B) + shift - len(C))
            for i, c in enumerate(B):
                if c:
                    C[i + shift] ^= gf.mul(coef, c)
            shift += 1
    while len(C) > 1 and C[-1] == 0:
        C.pop()
    return C, L


def _chien_degrees(code, locator):
    """Degrees of the error locations, or None when the root count does not
    match the locator degree (bounded-distance failure)."""
    gf = code.gf
    nf = gf.group_order
    deg = len(locator) - 1
    j = np.arange(nf, dtype=np.int64)
    acc = np.full(nf, locator[0], dtype=np.int32)
    for k in range(1, deg + 1):
        ck = locator[k]
        if ck:
            acc ^= gf.exp[(int(gf.log[ck]) + k * j) % nf].astype(np.int32)
    roots = np.nonzero(acc == 0)[0]
    if len(roots) != deg:
        return None
    return [(nf - int(r)) % nf for r in roots]


def _bdd_flips(code, s_odd, parity_bad):
    """Positions to flip for one bounded-distance decode, or None on failure.

    ``s_odd`` holds the odd power sums S_1, S_3, ... and ``parity_bad`` the
    extension-parity state (False for non-extended codes).  The extended code
    is decoded by running the inner BDD and then repairing the parity bit to
    even; total flips beyond t mean failure, which keeps the decoding radius
    at exactly t over all n_c positions.
    """
    if not any(s_odd):
        if not parity_bad:
            return ()
        return (code.n_c - 1,)

    if code.t == 2:
        m = code.gf.extension_degree
        packed = int(code._lut[(s_odd[0] << m) | s_odd[1]])
        if packed < 0:
            return None
        count = packed >> 16
        degrees = [packed & 0xFF] if count == 1 else [packed & 0xFF, (packed >> 8) & 0xFF]
    else:
        syn = _expand_syndromes(code, s_odd)
        locator, L = _berlekamp_massey(code.gf, syn)
        if L > code.t or len(locator) - 1 != L:
            return None
        degrees = _chien_degrees(code, locator)
        if degrees is None:
            return None

    positions = code.positions_from_degrees(degrees)
    if positions is None:
        return None
    if code.extended:
        if parity_bad ^ (len(positions) % 2 == 1):
            positions.append(code.n_c - 1)
    if len(positions) > code.t:
        return None
    return tuple(sorted(positions))


def bdd_decode(code, word):
    """Bounded-distance decode: return the codeword within Hamming distance t
    of ``word`` if one exists (Success), else Failure with the input intact.

    Success onto a codeword other than the transmitted one (a miscorrection)
    is an inherent possibility, not an error.
    """
    word = np.asarray(word, dtype=np.uint8)
    if word.shape != (code.n_c,):
        raise ValueError(f"word length {word.shape} != ({code.n_c},)")
    on = word.astype(bool)
    s_odd = [int(np.bitwise_xor.reduce(code.syndrome_tables[ki][on]))
             for ki in range(code.t)]
    parity_bad = code.extended and int(word.sum()) % 2 == 1
    flips = _bdd_flips(code, s_odd, parity_bad)
    if flips is None:
        return BddOutcome(False, word, ())
    out = word.copy()
    for p in flips:
        out[p] ^= 1
    return BddOutcome(True, out, flips)
