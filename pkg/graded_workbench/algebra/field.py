"""Prime field arithmetic and seeded randomness."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sympy import isprime

from graded_workbench.errors import InputError, ZeroDivisionInFieldError
from graded_workbench.settings import WORKBENCH_CHAR

log = logging.getLogger(__name__)

# Field elements are plain ints in [0, p).
FieldElement = int

# Keeps every product of two residues inside int64 for the numpy kernels.
MAX_CHARACTERISTIC = 2**31 - 1


@dataclass(frozen=True, slots=True)
class PrimeField:
    p: int = WORKBENCH_CHAR

    def __post_init__(self):
        if self.p < 2 or not isprime(self.p):
            raise InputError(f"characteristic {self.p} is not a prime")
        if self.p > MAX_CHARACTERISTIC:
            raise InputError(f"characteristic {self.p} exceeds {MAX_CHARACTERISTIC}")

    def check_size(self, num_vars: int) -> None:
        """Reject fields too small for generic coordinates in `num_vars` variables."""
        if self.p <= num_vars + 2:
            raise InputError(
                f"characteristic {self.p} too small for {num_vars} variables (need p > N + 2)"
            )

    def element(self, value: int) -> FieldElement:
        return value % self.p

    def add(self, a: int, b: int) -> FieldElement:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> FieldElement:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> FieldElement:
        return (a * b) % self.p

    def neg(self, a: int) -> FieldElement:
        return (-a) % self.p

    def inv(self, a: int) -> FieldElement:
        a %= self.p
        if a == 0:
            raise ZeroDivisionInFieldError(f"0 has no inverse in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> FieldElement:
        return (a * self.inv(b)) % self.p

    def arithmetic(self, a: int, b: int, op: str) -> FieldElement:
        """Apply one of + - * / to two residues."""
        if op == "+":
            return self.add(a, b)
        if op == "-":
            return self.sub(a, b)
        if op == "*":
            return self.mul(a, b)
        if op == "/":
            return self.div(a, b)
        raise ValueError(f"unknown field operation {op!r}")

    def lift(self, a: int) -> int:
        """Symmetric representative in (-p/2, p/2], used for printing."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a

    def random_element(self, rng: np.random.Generator) -> FieldElement:
        return int(rng.integers(0, self.p))


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """Seeded PCG64 generator; every random choice in the package goes through one."""
    return np.random.default_rng(seed)


def child_seeds(seed: int, count: int) -> list[int]:
    """Independent, reproducible per-trial seeds derived from one master seed."""
    seq = np.random.SeedSequence(seed)
    return [int(child.generate_state(1)[0]) for child in seq.spawn(count)]
