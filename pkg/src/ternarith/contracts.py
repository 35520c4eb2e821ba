"""Vectorised reference behaviour for the arithmetic circuits.

Each oracle takes role values (integer arrays) and returns the expected values of
the roles the circuit is meant to change.
"""

from __future__ import annotations

import numpy as np

from .circuit import RegisterMap


def _split(total, regs: RegisterMap) -> dict[str, np.ndarray]:
    # spread a little-endian value over the result roles in order
    out = {}
    for role in regs.result:
        size = 3 ** len(regs[role])
        out[role] = total % size
        total = total // size
    return out


def add_oracle(regs: RegisterMap, n: int):
    def oracle(v):
        total = v["A"] + v["B"] + v.get("CIN", 0)
        return _split(total, regs)
    return oracle


def add_mod_oracle(regs: RegisterMap, n: int):
    def oracle(v):
        return {regs.result[0]: (v["A"] + v["B"]) % 3**n}
    return oracle


def sub_oracle(regs: RegisterMap, n: int, borrow: bool = False):
    def oracle(v):
        d = (v["A"] - v["B"]) % 3**n
        if borrow:
            d = d + 3**n * (v["A"] < v["B"])
        return _split(d, regs)
    return oracle


def cmp_oracle(regs: RegisterMap, n: int):
    def oracle(v):
        return {"R": (v["A"] < v["B"]).astype(np.int64)}
    return oracle
