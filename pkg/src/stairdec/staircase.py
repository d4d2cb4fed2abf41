"""Staircase code construction: block geometry, stream encoding, per-block
interleaving, and the row/column addressing shared by all window decoders.

Geometry: the code is a chain of w x w bit blocks B_1, B_2, ... seeded by a
virtual all-zero block B_0 known to the decoder.  Component word j of the
pair (B_{i-1}, B_i) is column j of B_{i-1} followed by row j of B_i, and
every such 2w-bit word is a codeword of the component code.  Each interior
bit is therefore protected twice: once as part of its block's row words and
once as part of the next pair's column half.

Block layout: row j of B_i carries information bits in the leading
k_c - w columns and component parity in the trailing columns, so encoding is
row-local given the previous block.
"""

from dataclasses import dataclass

import numpy as np

from .bch import BchCode


@dataclass(frozen=True)
class SccParams:
    """Staircase stream parameters."""

    code: BchCode
    interleave: bool = False
    interleaver_seed: int = 0

    def __post_init__(self):
        if self.code.n_c % 2:
            raise ValueError("component code length must be even")
        if self.code.k_c < self.w:
            raise ValueError("component info length must be at least n_c / 2")

    @property
    def w(self):
        return self.code.n_c // 2

    @property
    def info_cols(self):
        return self.code.k_c - self.w

    @property
    def rate(self):
        return 2.0 * self.code.k_c / self.code.n_c - 1.0


@dataclass
class SccBlock:
    bits: np.ndarray  # (w, w) uint8
    index: int        # stream index, >= 1 (block 0 is the virtual zero block)


def scc_encode(params, info_blocks):
    """Encode info chunks into a staircase block stream (generator).

    Each chunk must be a (w, k_c - w) bit array filling the information
    region of one new block.  For every emitted block, each row of
    [previous^T | current] is a valid component codeword.
    """
    code = params.code
    w = params.w
    prev = np.zeros((w, w), dtype=np.uint8)
    for i, chunk in enumerate(info_blocks, start=1):
        chunk = np.asarray(chunk, dtype=np.uint8)
        if chunk.shape != (w, params.info_cols):
            raise ValueError(
                f"info chunk {i} has shape {chunk.shape}, expected {(w, params.info_cols)}")
        rows_info = np.concatenate([prev.T, chunk], axis=1)  # (w, k_c)
        parity = (rows_info @ code.parity_matrix) % 2
        parts = [chunk, parity.astype(np.uint8)]
        if code.extended:
            ext = ((rows_info.sum(axis=1) + parity.sum(axis=1)) % 2).astype(np.uint8)
            parts.append(ext[:, None])
        block = np.concatenate(parts, axis=1)
        yield SccBlock(bits=block, index=i)
        prev = block


def _permutation(params, block_index):
    key = ((params.interleaver_seed & ((1 << 64) - 1)) << 64) | (block_index & ((1 << 64) - 1))
    rng = np.random.Generator(np.random.Philox(key=key))
    w = params.w
    return rng.permutation(w * w)


def interleave(params, block):
    """Apply the per-block random permutation (identity when disabled)."""
    if not params.interleave:
        return block
    perm = _permutation(params, block.index)
    flat = block.bits.ravel()
    return SccBlock(bits=flat[perm].reshape(block.bits.shape), index=block.index)


def deinterleave(params, block):
    """Inverse of :func:`interleave` for the same block index."""
    if not params.interleave:
        return block
    perm = _permutation(params, block.index)
    out = np.empty_like(block.bits.ravel())
    out[perm] = block.bits.ravel()
    return SccBlock(bits=out.reshape(block.bits.shape), index=block.index)


def deinterleave_array(params, arr, block_index):
    """Deinterleave any per-bit array (e.g. reliabilities) of one block."""
    if not params.interleave:
        return arr
    perm = _permutation(params, block_index)
    flat = np.empty_like(arr.ravel())
    flat[perm] = arr.ravel()
    return flat.reshape(arr.shape)


# -- component-word addressing -------------------------------------------------

@dataclass(frozen=True)
class ComponentWordRef:
    """Component word ``row_index`` of window pair ``pair_index``.

    The word covers column ``row_index`` of the older block followed by row
    ``row_index`` of the newer block.
    """

    pair_index: int
    row_index: int


def word_bit_location(w, pair, j, pos):
    """(block_offset, row, col) of word position ``pos`` of word (pair, j).

    ``block_offset`` is ``pair - 1`` for the older half and ``pair`` for the
    newer half, in window-slot units.
    """
    if pos < w:
        return pair - 1, pos, j
    return pair, j, pos - w


def crossing_word(w, pair, j, pos):
    """The other component word protecting word position ``pos`` of (pair, j).

    Returns (pair', j', pos') where pos' is the bit's position inside the
    crossing word.  Older-half bits cross into the previous pair's newer
    half; newer-half bits cross into the next pair's older half.
    """
    if pos < w:
        return pair - 1, pos, w + j
    return pair + 1, pos - w, j


def assemble_word(older_block, newer_block, j):
    """The 2w bits of component word j over a (older, newer) block pair."""
    return np.concatenate([older_block[:, j], newer_block[j, :]])


def word_cover(w, pair, j):
    """All bit locations covered by component word j of ``pair``."""
    return [word_bit_location(w, pair, j, pos) for pos in range(2 * w)]
