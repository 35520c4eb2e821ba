"""Base-3 integers, F3 helpers and the integer oracles every check is measured against.

Trit strings are little-endian throughout: index 0 is the least significant trit.
"""

from __future__ import annotations

from typing import Sequence


class TritRangeError(ValueError):
    pass


def _check_width(n: int) -> None:
    if n < 1:
        raise TritRangeError(f"width must be >= 1, got {n}")


def to_trits(x: int, n: int) -> list[int]:
    """Little-endian base-3 digits of ``x`` padded to ``n`` trits."""
    _check_width(n)
    if x < 0 or x >= 3**n:
        raise TritRangeError(f"{x} does not fit in {n} trits")
    out = []
    for _ in range(n):
        x, r = divmod(x, 3)
        out.append(r)
    return out


def from_trits(trits: Sequence[int]) -> int:
    value = 0
    for t in reversed(trits):
        value = 3 * value + int(t)
    return value


def fmt_trits(trits: Sequence[int]) -> str:
    """Render most-significant trit first, the way numbers are written."""
    return "".join(str(int(t)) for t in reversed(trits))


def binary_weight(n: int) -> int:
    """Number of ones in the binary expansion of ``n``."""
    if n < 0:
        raise ValueError("binary_weight needs n >= 0")
    return bin(n).count("1")


def floor_log2(n: int) -> int:
    if n < 1:
        raise ValueError(f"floor_log2 undefined for {n}")
    return n.bit_length() - 1


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError(f"ceil_log2 undefined for {n}")
    return (n - 1).bit_length()


def floor_log2_frac(num: int, den: int) -> int:
    """Exact ``floor(log2(num/den))`` for positive rationals (may be negative)."""
    if num < 1 or den < 1:
        raise ValueError("floor_log2_frac needs positive arguments")
    t = num.bit_length() - den.bit_length()
    # adjust so that 2**t <= num/den < 2**(t+1)
    while not _pow2_le(t, num, den):
        t -= 1
    while _pow2_le(t + 1, num, den):
        t += 1
    return t


def _pow2_le(t: int, num: int, den: int) -> bool:
    # 2**t <= num/den
    if t >= 0:
        return den << t <= num
    return den <= num << (-t)


def identity_eq2(n: int) -> tuple[int, int]:
    """Both sides of  sum_{i>=1} floor(n / 2^i) = n - omega(n)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    lhs, i = 0, 1
    while n >> i:
        lhs += n >> i
        i += 1
    return lhs, n - binary_weight(n)


def identity_eq3(n: int) -> tuple[int, int]:
    """Both sides of  sum_{i=1}^{floor(log n)+1} floor(n/2^i - 1/2) = n - floor(log n) - 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    L = floor_log2(n)
    # floor(n/2^i - 1/2) == floor((n - 2^(i-1)) / 2^i), exact in integers
    lhs = sum((n - (1 << (i - 1))) // (1 << i) for i in range(1, L + 2))
    return lhs, n - L - 1


def carry_threshold(a: int, b: int, c: int) -> int:
    if c not in (0, 1):
        raise ValueError(f"incoming carry must be 0 or 1, got {c}")
    return 1 if a + b + c >= 3 else 0


def carry_polynomial(a: int, b: int, c: int) -> int:
    """The mod-3 carry polynomial 2(1+a+b+c)(ab+ac+bc) + abc."""
    return (2 * (1 + a + b + c) * (a * b + a * c + b * c) + a * b * c) % 3


def carry_oracle(a: int, b: int, c: int) -> int:
    """Outgoing carry of a ternary full adder; cross-checks both evaluation paths."""
    t = carry_threshold(a, b, c)
    p = carry_polynomial(a, b, c)
    if t != p:
        raise AssertionError(f"carry forms disagree on {(a, b, c)}: {t} vs {p}")
    return t


def complement(trits: Sequence[int]) -> list[int]:
    return [2 - int(t) for t in trits]


def add_oracle(a: int, b: int, cin: int, n: int) -> list[int]:
    """Trits of a + b + cin in n + 1 positions."""
    to_trits(a, n), to_trits(b, n)
    if cin not in (0, 1):
        raise TritRangeError("cin must be 0 or 1")
    return to_trits(a + b + cin, n + 1)


def sub_oracle(a: int, b: int, n: int) -> tuple[int, int]:
    """``((a - b) mod 3^n, borrow)`` with borrow = 1 iff a < b."""
    to_trits(a, n), to_trits(b, n)
    return (a - b) % 3**n, int(a < b)


def cmp_oracle(a: int, b: int) -> int:
    return int(a < b)
