"""Reference table of spectral-singularity parameter sets.

Rows 1-18 carry a singularity; rows 19 and 20 are families (nu = a -+ ib,
a, b > 0) for which none is expected.  Values are copied as printed,
including rounding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .potential import PotentialSpec, Profile


@dataclass(frozen=True)
class TableRow:
    row: int
    sign: int
    nu: complex
    lam: float
    E_star: float
    V0_printed: complex
    n: int
    profile: Profile
    # printed V(0) known to disagree with the closed form
    v0_flagged: bool = False

    @property
    def spec(self) -> PotentialSpec:
        return PotentialSpec(nu=self.nu, lam=self.lam, sign=self.sign)


@dataclass(frozen=True)
class NoSSFamily:
    """nu = a + ib * imag_sign with a, b > 0; absorptive for either sign."""

    row: int
    sign: int
    imag_sign: int

    def spec(self, a: float, b: float, lam: float) -> PotentialSpec:
        return PotentialSpec(nu=complex(a, self.imag_sign * b), lam=lam, sign=self.sign)


_B, _W, _S = Profile.BARRIER, Profile.WELL, Profile.WELL_WITH_SIDE_BARRIERS

ROWS = (
    TableRow(1, -1, -2.65j, 3.4, 104.229, 70.90 + 30.63j, -1, _B, v0_flagged=True),
    TableRow(2, -1, 1 - 4.5j, 4.123, 650.126, 302.235 + 229.488j, -4, _B),
    TableRow(3, -1, 6 - 12j, 1.4366, 359.557, 209.978 + 322.359j, -8, _B),
    TableRow(4, -1, -8.39 + 10.4j, 1.351, 248.522, 83.8348 + 299.537j, -9, _B),
    TableRow(5, -1, 4.2 - 12.57j, 1.2, 239.275, 195.857 + 170.148j, -5, _B),
    TableRow(6, -1, -6.99 + 11.3j, 1.0, 127.690, 85.890 + 146.674j, -6, _B),
    TableRow(7, 1, 3.75 + 0.5j, 3.1221, 190.868, 166.817 + 41.4269j, -1, _B),
    TableRow(8, 1, 2.776 + 2.15j, 2.1, 78.761, 24.1326 + 62.122j, -3, _B),
    TableRow(9, 1, -7.384 - 3.05j, 1.63, 153.668, 99.706 + 111.570j, -4, _B),
    TableRow(10, 1, -4.75 - 4.928j, 1.85, 121.598, -23.364 + 143.362j, -6, _W),
    TableRow(11, 1, 4.67 + 7.8366j, 1.74, 166.720, -106.778 + 245.328j, -9, _W),
    TableRow(12, -1, -6 + 1j, 4.261, 236.028, -535.106 + 199.717j, -6, _W),
    TableRow(13, 1, -3 - 8.5j, 0.96, 5.3077, -61.016 + 39.168j, -8, _W),
    TableRow(14, -1, 0.55 - 0.6j, 9.312, 478.444, -85.563 + 109.44j, -2, _S),
    TableRow(15, 1, -1.560 - 0.601j, 10.0, 651.183, 1.6769 + 127.572j, -2, _S),
    TableRow(16, -1, 1.9 - 2.4j, 2.127, 55.4231, -0.6310 + 52.118j, -3, _S),
    TableRow(17, -1, -0.6 + 0.5j, 7.0, 24.01, 0.01 + 4.9j, 0, _S),
    TableRow(18, 1, -0.6 - 3.4j, 4.5, 3.9130, -248.575 + 13.771j, -3, _S),
)

NO_SS = (NoSSFamily(19, 1, -1), NoSSFamily(20, -1, 1))

# parameter box for the no-SS families
FAMILY_RANGE = (0.5, 8.0)
FAMILY_LAMBDA = 3.0
FAMILY_SEED = 20
FAMILY_E_RANGE = (1e-3, 1000.0)


def family_draws(seed: int = FAMILY_SEED, draws: int = 3):
    """Deterministic (a, b) pairs for the no-SS families."""
    rng = np.random.default_rng(seed)
    lo, hi = FAMILY_RANGE
    return [tuple(float(v) for v in rng.uniform(lo, hi, size=2)) for _ in range(draws)]


def row(number: int) -> TableRow:
    for r in ROWS:
        if r.row == number:
            return r
    raise KeyError(number)
