"""Bundled calibration constants.

The default marking thresholds (delta1=10, delta2=2.5) assume a particular
reliability scale.  This package pins that scale through the channel's
default LLR noise variance, chosen so that at the bundled 2-PAM operating
point the fractions of bits with reliability below 2.5, 10/3, and 10 match
the percentile profile the thresholds were tuned for (about 2.5%, 3.5%, and
17%).  ``OPERATING_SNR_DB`` is the SNR, in this package's convention
(rho = symbol energy over a noise variance of 1/2), at which the default
isabm decoder on the (256,239,2)-based staircase delivers a post-FEC BER
near 1e-3; it anchors the acceptance measurements.
"""

from .channel import DEFAULT_LLR_NOISE_VAR

# SNR (dB) of the bundled operating point for the default configuration:
# 2-PAM, extended (256,239,2) component, window 9, 7 iterations, isabm with
# 2 plain pairs, unquantized marks.
OPERATING_SNR_DB = 5.20

LLR_NOISE_VAR = DEFAULT_LLR_NOISE_VAR
