"""Three-level reliability classification of hard-decision bits and the
uniform reliability quantizer whose saturation boundary is aligned with the
upper marking threshold.

Classes: HRB (highly reliable), UB (uncertain), HUB (highly unreliable).
Boundaries are inclusive at the top (|llr| >= delta1 is HRB) and exclusive
at the bottom of the uncertain band (|llr| < delta2 is HUB).
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class MarkClass(IntEnum):
    HRB = 0
    UB = 1
    HUB = 2


@dataclass(frozen=True)
class Thresholds:
    """Reliability thresholds: HRB at/above ``delta1``, HUB below ``delta2``."""

    delta1: float = 10.0
    delta2: float = 2.5

    def __post_init__(self):
        if not 0 < self.delta2 < self.delta1:
            raise ValueError("need 0 < delta2 < delta1")


def mark_bit(thresholds, reliability):
    """Classify reliabilities (scalar or array) into MarkClass values."""
    rel = np.asarray(reliability)
    out = np.where(rel >= thresholds.delta1, int(MarkClass.HRB),
                   np.where(rel < thresholds.delta2, int(MarkClass.HUB),
                            int(MarkClass.UB)))
    if np.isscalar(reliability):
        return MarkClass(int(out))
    return out.astype(np.uint8)


@dataclass(frozen=True)
class Quantizer:
    """Unsigned uniform q-bit quantizer clipping at ``saturation``.

    Output values are exactly {0, step, 2*step, ..., top} with
    top = saturation - step; ``top`` is stored explicitly so the identity
    "input >= top  <=>  output == top" holds bit-exactly in floats.
    """

    bits: int
    saturation: float
    step: float
    top: float

    @property
    def values(self):
        return np.arange(1 << self.bits) * self.step


def quantizer_from_threshold(delta1, bits):
    """Quantizer whose largest decision boundary is exactly ``delta1``.

    The saturation threshold is delta1 * 2^q / (2^q - 1), which makes the
    resolution as fine as possible for the given threshold and guarantees
    delta1 = saturation - step.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if delta1 <= 0:
        raise ValueError("delta1 must be positive")
    step = delta1 / ((1 << bits) - 1)
    return Quantizer(bits=bits, saturation=step * (1 << bits), step=step, top=delta1)


def quantize(quantizer, reliability):
    """floor(|llr| / step) * step below the top boundary, clipped to top above."""
    rel = np.asarray(reliability, dtype=float)
    levels = np.minimum(np.floor(rel / quantizer.step), (1 << quantizer.bits) - 2)
    out = np.where(rel >= quantizer.top, quantizer.top, levels * quantizer.step)
    if np.isscalar(reliability):
        return float(out)
    return out


def effective_hub_threshold(thresholds, quantizer):
    """Smallest quantizer decision boundary >= delta2 (the HUB cut after
    quantization; equals delta1 for 1-bit quantizers)."""
    boundary = int(np.ceil(thresholds.delta2 / quantizer.step)) * quantizer.step
    return min(boundary, quantizer.top)


def mark_quantized(thresholds, quantizer, reliability):
    """Classify on the quantized reliability.

    HRB iff the quantizer saturates (quantized value == top, equivalent to
    |llr| >= delta1); HUB iff the quantized value falls below the effective
    HUB boundary.  With 1-bit quantization every non-HRB bit is a HUB.
    """
    relq = np.asarray(quantize(quantizer, reliability))
    cut = effective_hub_threshold(thresholds, quantizer)
    out = np.where(relq == quantizer.top, int(MarkClass.HRB),
                   np.where(relq < cut, int(MarkClass.HUB), int(MarkClass.UB)))
    if np.isscalar(reliability):
        return MarkClass(int(out))
    return out.astype(np.uint8)


def sabm_hub_select(reliabilities, count):
    """Positions of the ``count`` smallest reliabilities in one block row,
    ties broken by ascending position (left to right).  Returned sorted."""
    rel = np.asarray(reliabilities)
    order = np.argsort(rel, kind="stable")
    return np.sort(order[:count])
