"""Sliding-window staircase decoding with three variants: plain iterative
BDD ("standard"), soft-aided decoding of the newest pair with sorted
bit-flips ("sabm"), and threshold-marked random-flip decoding over the
newest blocks ("isabm").

Flow of one soft-aided component decode (for words whose current syndrome
state is nonzero):

1. run BDD; on success check the proposed flips for miscorrection: reject
   when a flip touches a bit marked highly reliable, or a bit whose crossing
   component word currently has all-zero syndromes;
2. on failure or rejection, flip a number of marked highly-unreliable bits
   (1 after a failure, d0 - t - weight(detected pattern) after a rejection)
   and run BDD again; if fewer candidates exist than flips needed, give up;
3. the net change (retry flips xor second-attempt corrections) must pass the
   same miscorrection check before it is applied; otherwise the received
   word is kept unchanged.

Accepted corrections update the window bits and the cached per-word syndrome
state immediately, so later words in the same pass observe them.  Within one
window position the schedule runs the configured number of iterations, each
sweeping pairs from newest to oldest; afterwards the oldest block is emitted
and the window slides by one block.  Bit marks are computed once at block
ingestion and never updated.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bch import _bdd_flips
from .marking import (
    MarkClass,
    Thresholds,
    mark_bit,
    mark_quantized,
    quantize,
    quantizer_from_threshold,
)
from .staircase import ComponentWordRef, assemble_word, crossing_word, word_bit_location

VARIANTS = ("standard", "sabm", "isabm")

_MASK64 = (1 << 64) - 1


class CounterRng:
    """Tiny counter-based uniform-integer stream (splitmix64).

    One instance per (window position, pair, word, iteration) key keeps the
    retry-flip draws reproducible independently of execution order, at a
    fraction of the cost of constructing a full bit generator per word.
    """

    __slots__ = ("_state",)

    def __init__(self, key):
        self._state = key & _MASK64

    def integers(self, bound):
        """Uniform int in [0, bound)."""
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        return (z * bound) >> 64


@dataclass(frozen=True)
class DecoderConfig:
    """Window decoder settings.

    ``bdd_only_pairs`` (the ``k`` CLI knob) is the number of oldest pairs
    decoded with plain BDD; marks are kept for window blocks from that index
    onward.  The special value window_size - 1 soft-decodes only the newest
    pair using marks of the newest block alone, which is the sabm geometry
    with random instead of sorted flips.  The sabm variant itself forces that
    geometry and ignores ``bdd_only_pairs``.
    """

    variant: str = "isabm"
    window_size: int = 9
    iterations: int = 7
    bdd_only_pairs: int = 2
    thresholds: Thresholds = field(default_factory=Thresholds)
    quant_bits: int = 0
    rng_seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.window_size < 2:
            raise ValueError("window_size must be >= 2")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not 0 <= self.bdd_only_pairs <= self.window_size - 1:
            raise ValueError("bdd_only_pairs must be in [0, window_size - 1]")
        if self.quant_bits < 0:
            raise ValueError("quant_bits must be >= 0")

    @property
    def marked_from(self):
        """First window slot whose marks are retained."""
        if self.variant == "standard":
            return self.window_size
        if self.variant == "sabm":
            return self.window_size - 1
        return self.bdd_only_pairs

    @property
    def soft_pair_start(self):
        """First pair index decoded with soft aid."""
        if self.variant == "standard":
            return self.window_size
        if self.variant == "sabm":
            return self.window_size - 1
        return min(self.bdd_only_pairs + 1, self.window_size - 1)


class SoftDecodeResult(Enum):
    ACCEPTED_FIRST_BDD = "accepted_first_bdd"
    ACCEPTED_AFTER_FLIP = "accepted_after_flip"
    REJECTED_MISCORRECTION = "rejected_miscorrection"
    FAILURE_UNCHANGED = "failure_unchanged"


@dataclass(frozen=True)
class SoftDecodeOutcome:
    """Result of one soft-aided component decode.

    ``flipped_positions`` is the net change applied to the word (empty when
    the word was returned unchanged); ``pattern_estimations`` counts BDD
    attempts that ran the error-locator machinery (for complexity counters).
    """

    word: np.ndarray
    classification: SoftDecodeResult
    bdd_calls: int
    flipped_positions: tuple
    pattern_estimations: int

    @property
    def accepted(self):
        return self.classification in (SoftDecodeResult.ACCEPTED_FIRST_BDD,
                                       SoftDecodeResult.ACCEPTED_AFTER_FLIP)


_HRB = int(MarkClass.HRB)
_HUB = int(MarkClass.HUB)


def miscorrection_check(flip_positions, marks, crossing_zero, marked_mask=None):
    """True when a proposed flip set is clean, False when it must be rejected.

    Rejected if any flipped position is marked HRB (only positions inside the
    marked region are subject to this rule), or if any flipped position's
    crossing component word currently has zero syndrome.
    """
    for pos in flip_positions:
        if crossing_zero[pos]:
            return False
        if (marked_mask is None or marked_mask[pos]) and marks[pos] == _HRB:
            return False
    return True


def _select_flips(variant, flip_count, candidates, reliabilities, rng):
    """Retry flip positions among HUB candidates, or None on give-up.

    ``rng`` only needs an ``integers(bound)`` method (numpy Generator or
    CounterRng); the isabm draw is a partial Fisher-Yates shuffle, uniform
    without replacement.
    """
    n = len(candidates)
    if n < flip_count:
        return None
    if variant == "sabm":
        order = np.argsort(reliabilities[candidates], kind="stable")
        return [int(candidates[i]) for i in order[:flip_count]]
    pool = [int(c) for c in candidates]
    for i in range(flip_count):
        j = i + int(rng.integers(n - i))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:flip_count]


def bit_flip_retry(code, variant, word, marks, marked_mask, first_bdd_flips, rng,
                   reliabilities=None):
    """Word with the retry flips applied, or None when the decoder gives up.

    ``first_bdd_flips`` is the detected pattern of the failed first attempt:
    None after a BDD failure (one flip), a position tuple after a rejected
    miscorrection (d0 - t - weight flips).  Candidates are HUB-marked
    positions inside the marked region; the sabm variant takes the least
    reliable ones (ties left to right), isabm draws uniformly.
    """
    if first_bdd_flips is None:
        flip_count = 1
    else:
        flip_count = code.d0 - code.t - len(first_bdd_flips)
    marks = np.asarray(marks)
    candidates = np.nonzero(np.asarray(marked_mask, dtype=bool)
                            & (marks == int(MarkClass.HUB)))[0]
    sel = _select_flips(variant, flip_count, candidates, reliabilities, rng)
    if sel is None:
        return None
    out = np.array(word, dtype=np.uint8, copy=True)
    for pos in sel:
        out[pos] ^= 1
    return out


def _soft_decode_core(code, s_odd, parity_bad, marks, marked_mask, crossing_zero,
                      variant, reliabilities, rng_factory):
    """Shared soft-decode logic on cached syndrome state.

    Returns (net_flips or None, classification, bdd_calls, pattern_estimations).
    ``net_flips`` is the accepted change ((), possibly, for an already-clean
    word); None means the word stays unchanged.
    """
    pattern_est = 1 if any(s_odd) else 0
    flips1 = _bdd_flips(code, s_odd, parity_bad)
    if flips1 is not None and miscorrection_check(flips1, marks, crossing_zero, marked_mask):
        return flips1, SoftDecodeResult.ACCEPTED_FIRST_BDD, 1, pattern_est

    flip_count = 1 if flips1 is None else code.d0 - code.t - len(flips1)
    candidates = np.nonzero(marked_mask & (marks == _HUB))[0]
    rejected = flips1 is not None
    fail_cls = (SoftDecodeResult.REJECTED_MISCORRECTION if rejected
                else SoftDecodeResult.FAILURE_UNCHANGED)
    if len(candidates) < flip_count:
        return None, fail_cls, 1, pattern_est

    retry = _select_flips(variant, flip_count, candidates, reliabilities, rng_factory())
    s2 = list(s_odd)
    pb2 = parity_bad
    for pos in retry:
        if code._deg[pos] >= 0:
            upd = code.syndrome_update[pos]
            s2 = [a ^ int(b) for a, b in zip(s2, upd)]
        if code.extended:
            pb2 = not pb2
    pattern_est += 1 if any(s2) else 0
    flips2 = _bdd_flips(code, tuple(s2), pb2)
    if flips2 is None:
        return None, SoftDecodeResult.FAILURE_UNCHANGED, 2, pattern_est
    net = tuple(sorted(set(retry) ^ set(flips2)))
    if miscorrection_check(net, marks, crossing_zero, marked_mask):
        return net, SoftDecodeResult.ACCEPTED_AFTER_FLIP, 2, pattern_est
    return None, SoftDecodeResult.REJECTED_MISCORRECTION, 2, pattern_est


def soft_decode_word(code, word, marks, crossing_zero, marked_mask=None,
                     variant="isabm", rng=None, reliabilities=None):
    """Soft-aided decode of one assembled component word.

    ``marks`` holds per-position MarkClass values, ``crossing_zero`` flags
    positions whose crossing component word currently has zero syndrome, and
    ``marked_mask`` limits the reliable-bit rule and the flip candidates to
    the marked region (defaults to everywhere).  Returns the resulting word
    and bookkeeping; the input is never modified.
    """
    word = np.asarray(word, dtype=np.uint8)
    marks = np.asarray(marks)
    crossing_zero = np.asarray(crossing_zero, dtype=bool)
    if marked_mask is None:
        marked_mask = np.ones(word.size, dtype=bool)
    else:
        marked_mask = np.asarray(marked_mask, dtype=bool)
    if rng is None:
        rng = np.random.Generator(np.random.Philox(key=0))

    on = word.astype(bool)
    s_odd = tuple(int(np.bitwise_xor.reduce(code.syndrome_tables[ki][on]))
                  for ki in range(code.t))
    parity_bad = code.extended and int(word.sum()) % 2 == 1
    net, cls, calls, pes = _soft_decode_core(
        code, s_odd, parity_bad, marks, marked_mask, crossing_zero,
        variant, reliabilities, lambda: rng)
    if net is None:
        return SoftDecodeOutcome(word.copy(), cls, calls, (), pes)
    out = word.copy()
    for pos in net:
        out[pos] ^= 1
    return SoftDecodeOutcome(out, cls, calls, net, pes)


@dataclass(frozen=True)
class ComponentWordView:
    """Assembled component word with per-position decoder metadata."""

    word: np.ndarray
    marks: np.ndarray          # MarkClass values; meaningful where ``marked``
    marked: np.ndarray         # positions inside the marked (soft) region
    crossing_zero: np.ndarray  # crossing word exists and has zero syndrome


class SccWindow:
    """The in-flight decoding window: L blocks of hard-decision bits plus
    per-bit marks for the soft region and cached per-component-word syndrome
    state for every pair.

    The cache is updated incrementally after each accepted correction and is
    bit-exact with full recomputation (each flip XORs the position's
    power-sum contributions into the two protecting words).
    """

    def __init__(self, code, config):
        if code.n_c % 2:
            raise ValueError("component code length must be even")
        self.code = code
        self.config = config
        self.w = code.n_c // 2
        self.L = config.window_size
        self.blocks = []
        self.marks = []
        self.rels = []
        L = self.L
        self.s_odd = [None] * L   # pair p in 1..L-1
        self.parity = [None] * L
        self.zero = [None] * L
        self.position = 0
        self._quantizer = (quantizer_from_threshold(config.thresholds.delta1,
                                                    config.quant_bits)
                           if config.quant_bits > 0 else None)
        self._d = np.zeros((max(config.iterations, 1), L - 1), dtype=np.int64)
        self._p = np.zeros_like(self._d)
        self._n = 0
        # scratch buffers reused across word decodes (read-only in the core)
        self._mv_buf = np.empty(2 * self.w, dtype=np.uint8)
        self._cz_buf = np.empty(2 * self.w, dtype=bool)
        self._rv_buf = np.empty(2 * self.w)
        self._mask_cache = {}

    # -- construction --------------------------------------------------------

    def prime(self, entries):
        """Load the virtual zero block plus the first L-1 received blocks."""
        if len(entries) != self.L - 1:
            raise ValueError(f"need {self.L - 1} blocks to prime, got {len(entries)}")
        zero_blk = np.zeros((self.w, self.w), dtype=np.uint8)
        self.blocks = [zero_blk]
        self.marks = [self._virtual_marks()]
        self.rels = [self._virtual_rels()]
        for bits, rel in entries:
            self._append(bits, rel)
        for p in range(1, self.L):
            self._init_pair(p)

    def _virtual_marks(self):
        if self.config.variant == "standard":
            return None
        return np.zeros((self.w, self.w), dtype=np.uint8)  # all HRB

    def _virtual_rels(self):
        if self.config.variant != "sabm":
            return None
        return np.full((self.w, self.w), np.inf)

    def _append(self, bits, rel):
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        if bits.shape != (self.w, self.w):
            raise ValueError(f"block shape {bits.shape} != {(self.w, self.w)}")
        marks, rels = self._compute_marks(rel)
        self.blocks.append(bits)
        self.marks.append(marks)
        self.rels.append(rels)

    def _compute_marks(self, rel):
        cfg = self.config
        if cfg.variant == "standard":
            return None, None
        if rel is None:
            raise ValueError(f"variant {cfg.variant!r} needs per-bit reliabilities")
        rel = np.asarray(rel, dtype=float)
        if cfg.variant == "isabm":
            if self._quantizer is not None:
                return mark_quantized(cfg.thresholds, self._quantizer, rel), None
            return mark_bit(cfg.thresholds, rel), None
        # sabm: threshold the reliable bits, per-row sorted selection of the
        # d0 - t - 1 least reliable ones; sorting uses quantized values when
        # a quantizer is configured, ties resolve left to right
        relq = quantize(self._quantizer, rel) if self._quantizer is not None else rel
        marks = np.full((self.w, self.w), int(MarkClass.UB), dtype=np.uint8)
        count = self.code.d0 - self.code.t - 1
        order = np.argsort(relq, axis=1, kind="stable")[:, :count]
        marks[np.arange(self.w)[:, None], order] = int(MarkClass.HUB)
        marks[rel >= cfg.thresholds.delta1] = int(MarkClass.HRB)
        return marks, relq

    def _init_pair(self, p):
        code = self.code
        W = np.concatenate([self.blocks[p - 1].T, self.blocks[p]], axis=1).astype(bool)
        s = np.zeros((self.w, code.t), dtype=np.int32)
        for ki in range(code.t):
            s[:, ki] = np.bitwise_xor.reduce(
                np.where(W, code.syndrome_tables[ki][None, :], 0), axis=1)
        self.s_odd[p] = s
        if code.extended:
            par = (W.sum(axis=1) % 2).astype(np.uint8)
        else:
            par = np.zeros(self.w, dtype=np.uint8)
        self.parity[p] = par
        self.zero[p] = ~s.any(axis=1) & (par == 0)

    # -- metadata ------------------------------------------------------------

    def _marked_mask(self, p):
        mask = self._mask_cache.get(p)
        if mask is None:
            mask = np.zeros(2 * self.w, dtype=bool)
            mf = self.config.marked_from
            if p - 1 >= mf:
                mask[:self.w] = True
            if p >= mf:
                mask[self.w:] = True
            self._mask_cache[p] = mask
        return mask

    def _crossing_snapshot(self, p, out=None):
        cz = np.zeros(2 * self.w, dtype=bool) if out is None else out
        w = self.w
        if p - 1 >= 1:
            cz[:w] = self.zero[p - 1]
        elif out is not None:
            cz[:w] = False
        if p + 1 <= self.L - 1:
            cz[w:] = self.zero[p + 1]
        elif out is not None:
            cz[w:] = False
        return cz

    def _marks_vector(self, p, j, out=None):
        mv = np.empty(2 * self.w, dtype=np.uint8) if out is None else out
        w = self.w
        if self.marks[p - 1] is not None:
            mv[:w] = self.marks[p - 1][:, j]
        else:
            mv[:w] = int(MarkClass.UB)
        if self.marks[p] is not None:
            mv[w:] = self.marks[p][j, :]
        else:
            mv[w:] = int(MarkClass.UB)
        return mv

    def _rels_vector(self, p, j, out=None):
        if self.config.variant != "sabm":
            return None
        rv = np.empty(2 * self.w) if out is None else out
        w = self.w
        rv[:w] = np.inf if self.rels[p - 1] is None else self.rels[p - 1][:, j]
        rv[w:] = np.inf if self.rels[p] is None else self.rels[p][j, :]
        return rv

    def component_word(self, ref):
        """Assembled word plus mark classes and crossing-word syndrome flags."""
        p, j = ref.pair_index, ref.row_index
        if not (1 <= p <= self.L - 1 and 0 <= j < self.w):
            raise IndexError(f"component word ref out of range: {ref}")
        word = assemble_word(self.blocks[p - 1], self.blocks[p], j)
        return ComponentWordView(
            word=word,
            marks=self._marks_vector(p, j),
            marked=self._marked_mask(p),
            crossing_zero=self._crossing_snapshot(p),
        )

    # -- decoding ------------------------------------------------------------

    def _rng_key(self, h, p, j):
        return (((self.config.rng_seed & _MASK64) * 0x9E3779B97F4A7C15)
                ^ ((self.position & 0xFFFFFFFF) << 32)
                ^ ((h & 0x3F) << 26) ^ ((p & 0x3FF) << 16) ^ (j & 0xFFFF))

    def decode_pair(self, h, p):
        """One pass of the w component decoders of pair p at iteration h."""
        cfg = self.config
        code = self.code
        row = (h - 1, p - 1)
        self._d[row] += self.w
        self._n += self.w
        nz = np.nonzero(~self.zero[p])[0]
        if not nz.size:
            return
        s_list = self.s_odd[p].tolist()
        par = self.parity[p].tolist() if code.extended else None
        if cfg.variant == "standard" or p < cfg.soft_pair_start:
            for j in nz:
                j = int(j)
                s = s_list[j]
                if any(s):
                    self._p[row] += 1
                flips = _bdd_flips(code, s, bool(par[j]) if par else False)
                if flips:
                    self._apply(p, j, flips)
            return
        mask = self._marked_mask(p)
        extra_calls = 0
        extra_pes = 0
        for j in nz:
            j = int(j)
            net, _cls, calls, pes = _soft_decode_core(
                code,
                s_list[j],
                bool(par[j]) if par else False,
                self._marks_vector(p, j, out=self._mv_buf),
                mask,
                self._crossing_snapshot(p, out=self._cz_buf),
                cfg.variant,
                self._rels_vector(p, j, out=self._rv_buf),
                lambda: CounterRng(self._rng_key(h, p, j)),
            )
            extra_calls += calls - 1
            extra_pes += pes
            if net:
                self._apply(p, j, net)
        self._n += extra_calls
        self._d[row] += extra_calls
        self._p[row] += extra_pes

    def _apply(self, p, j, flips):
        """Flip accepted positions and refresh both protecting words' state."""
        w = self.w
        for pos in flips:
            b, r, c = word_bit_location(w, p, j, pos)
            self.blocks[b][r, c] ^= 1
            pc, jc, _posc = crossing_word(w, p, j, pos)
            if 1 <= pc <= self.L - 1:
                self._update_word_state(pc, jc, _posc)
            self._update_word_state(p, j, pos)

    def _update_word_state(self, p, j, pos):
        code = self.code
        if code._deg[pos] >= 0:
            self.s_odd[p][j] ^= code.syndrome_update[pos]
        if code.extended:
            self.parity[p][j] ^= 1
            self.zero[p][j] = not self.s_odd[p][j].any() and self.parity[p][j] == 0
        else:
            self.zero[p][j] = not self.s_odd[p][j].any()

    def recompute_state(self):
        """Full syndrome recomputation of every pair (validation helper)."""
        snapshot = [(None if s is None else s.copy()) for s in self.s_odd]
        for p in range(1, len(self.blocks)):
            self._init_pair(p)
        return snapshot

    # -- sliding -------------------------------------------------------------

    def begin_position(self):
        self._d[:] = 0
        self._p[:] = 0
        self._n = 0

    def counters(self):
        return self._n, self._d, self._p

    def slide_out(self, new_bits=None, reliabilities=None):
        """Emit the oldest block, shift, and optionally ingest a new block."""
        emitted = self.blocks.pop(0)
        self.marks.pop(0)
        self.rels.pop(0)
        for arrs in (self.s_odd, self.parity, self.zero):
            arrs.pop(1)
            arrs[0] = None
        if new_bits is not None:
            self._append(new_bits, reliabilities)
            for arrs in (self.s_odd, self.parity, self.zero):
                arrs.append(None)
            self._init_pair(len(self.blocks) - 1)
        # marks below the retained region are dropped, never recomputed
        mf = self.config.marked_from
        for idx in range(min(mf, len(self.marks))):
            self.marks[idx] = None
            self.rels[idx] = None
        self.position += 1
        return emitted


def iterate_window(config, window, counters=None):
    """Run the configured iterations over every pair of the current window.

    Each iteration sweeps the pairs from oldest to newest, so the newest
    (dirtiest) pair sees the corrections its older half just received.
    """
    window.begin_position()
    for h in range(1, config.iterations + 1):
        for p in range(1, window.L):
            window.decode_pair(h, p)
    if counters is not None:
        counters.add_window(*window.counters())
    return window


def slide(window, new_bits=None, reliabilities=None):
    """Emit the oldest block and shift the window (spec-level wrapper)."""
    return window.slide_out(new_bits, reliabilities)


def decode_stream(code, config, received, counters=None):
    """Decode a stream of received blocks (generator).

    ``received`` yields (bits, reliabilities) per block in stream order;
    reliabilities may be None for the standard variant.  Yields the decoded
    blocks in order.  Blocks still in the window when the stream ends are
    flushed as-is (they did not receive the full decoding pipeline).
    """
    it = iter(received)
    window = SccWindow(code, config)
    head = []
    for entry in it:
        head.append(entry)
        if len(head) == config.window_size - 1:
            break
    if len(head) < config.window_size - 1:
        # stream shorter than one window: nothing gets fully decoded
        for bits, _rel in head:
            yield np.array(bits, dtype=np.uint8)
        return
    window.prime(head)
    first = True
    for bits, rel in it:
        iterate_window(config, window, counters)
        out = window.slide_out(bits, rel)
        if not first:
            yield out
        first = False
    iterate_window(config, window, counters)
    out = window.slide_out()
    if not first:
        yield out
    for blk in window.blocks:
        yield blk
