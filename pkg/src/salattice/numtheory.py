"""Extended gcd with canonical coefficients, coprime-perturbation search,
exact Jacobsthal values for small arguments, and coprimality-gap statistics.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BothZero, HypothesisViolated, ShiftSearchExhausted, TooLarge

JACOBSTHAL_CAP = 10**7  # exhaustive window scan is O(n log n); keep it sane


@dataclass(frozen=True)
class BezoutResult:
    """g = gcd(a, b) >= 0 together with coefficients a*s + b*t = g.

    The representative with minimal |s| is chosen, which in particular gives
    |s| <= |b/g| whenever b != 0.
    """

    g: int
    s: int
    t: int


def ext_gcd(a: int, b: int) -> BezoutResult:
    """Extended Euclid with a deterministic, minimal-|s| coefficient choice."""
    if a == 0 and b == 0:
        raise BothZero("gcd(0, 0) has no Bezout form")
    if b == 0:
        return BezoutResult(abs(a), 1 if a > 0 else -1, 0)
    if a == 0:
        return BezoutResult(abs(b), 0, 1 if b > 0 else -1)
    g = math.gcd(a, b)
    old_r, r = a, b
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r < 0:
        old_s = -old_s
    # shift s into the centered residue class mod |b/g|; ties keep +m/2
    m = abs(b) // g
    s_min = old_s % m if m > 1 else 0
    if 2 * s_min > m:
        s_min -= m
    t = (g - a * s_min) // b
    return BezoutResult(g, s_min, t)


def coprime_shift(a0: int, d1: int, b0: int, d2: int, max_shift: int | None = None) -> int:
    """Minimal x >= 0 with gcd(a0 + d1*x, b0 + d2*x) = 1.

    Requires gcd(d1, d2) = 1, which guarantees such an x exists over the
    integers; the upward scan additionally carries a safety cap because a
    non-negative solution is not guaranteed for adversarial inputs.
    """
    if math.gcd(d1, d2) != 1:
        raise HypothesisViolated(f"gcd({d1}, {d2}) != 1")
    if max_shift is None:
        modulus = abs(d2 * a0 - d1 * b0)
        max_shift = max(256, 4 * modulus.bit_length() ** 2)
    u, v = a0, b0
    for x in range(max_shift + 1):
        if math.gcd(u, v) == 1:
            return x
        u += d1
        v += d2
    raise ShiftSearchExhausted(
        f"no coprime pair within {max_shift} shifts",
        a0=a0, d1=d1, b0=b0, d2=d2, max_shift=max_shift,
    )


def jacobsthal(n: int) -> int:
    """Exact j(n): the least m such that every m consecutive integers contain
    one coprime to n.  Computed by scanning the coprimality pattern over a
    full period; capped at JACOBSTHAL_CAP.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > JACOBSTHAL_CAP:
        raise TooLarge(f"jacobsthal cap is {JACOBSTHAL_CAP}")
    if n == 1:
        return 1
    coprime = [r for r in range(n) if math.gcd(r, n) == 1]
    # j(n) is the largest cyclic gap between consecutive coprime residues
    best = coprime[0] + n - coprime[-1]
    for prev, cur in zip(coprime, coprime[1:]):
        best = max(best, cur - prev)
    return best


@dataclass(frozen=True)
class GapHistogram:
    """Distribution of minimal non-negative shifts until a pair is coprime.

    `params` records the experiment configuration (sampling bounds, seed,
    ...) so reports are self-describing and reproducible.
    """

    counts: dict[int, int]
    samples: int
    mean: Fraction
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if sum(self.counts.values()) != self.samples:
            raise ValueError("counts must sum to the sample count")

    def frequency(self, x: int) -> Fraction:
        return Fraction(self.counts.get(x, 0), self.samples)

    @classmethod
    def from_counts(cls, counts: dict[int, int], **params) -> "GapHistogram":
        samples = sum(counts.values())
        total = sum(x * c for x, c in counts.items())
        return cls(dict(sorted(counts.items())), samples, Fraction(total, samples), tuple(params.items()))

    def merged(self, other: "GapHistogram") -> "GapHistogram":
        counts = dict(self.counts)
        for x, c in other.counts.items():
            counts[x] = counts.get(x, 0) + c
        merged = GapHistogram.from_counts(counts)
        return GapHistogram(merged.counts, merged.samples, merged.mean, self.params)

    def to_dict(self) -> dict:
        out: dict = {"samples": self.samples}
        out.update({k: v for k, v in self.params})
        out["counts"] = {str(x): c for x, c in self.counts.items()}
        out["mean"] = f"{self.mean.numerator}/{self.mean.denominator}"
        return out


_CHUNK = 1 << 16  # fixed chunk size keeps the merged histogram independent of worker split


def _chunk_rng(seed: int, chunk: int) -> random.Random:
    return random.Random((seed << 32) ^ chunk)


def coprime_gap_experiment(samples: int, bit_size: int = 32, seed: int = 0) -> GapHistogram:
    """Sample pairs (a, b) uniform on [2^(bit_size-1), 2^bit_size) and record
    the minimal x >= 0 with gcd(a + x, b) = 1.

    Deterministic for a given seed: samples are drawn in fixed chunks with
    seeds derived as (seed, chunk index), so a parallel runner splitting on
    chunk boundaries reproduces the same histogram.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    lo, hi = 1 << (bit_size - 1), 1 << bit_size
    counts: dict[int, int] = {}
    gcd = math.gcd
    done = 0
    chunk = 0
    while done < samples:
        rng = _chunk_rng(seed, chunk)
        for _ in range(min(_CHUNK, samples - done)):
            a = rng.randrange(lo, hi)
            b = rng.randrange(lo, hi)
            x = 0
            while gcd(a + x, b) != 1:
                x += 1
            counts[x] = counts.get(x, 0) + 1
        done += min(_CHUNK, samples - done)
        chunk += 1
    return GapHistogram.from_counts(counts, bit_size=bit_size, seed=seed)
