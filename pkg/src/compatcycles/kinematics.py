"""Exact Mandelstam kinematics: symmetric, zero diagonal, zero row sums."""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence


class KinematicsError(ValueError):
    pass


class DegenerateKinematicsError(KinematicsError):
    """A quantity required to be nonzero vanishes at this kinematic point."""

    def __init__(self, message: str, channel=None):
        super().__init__(message)
        self.channel = channel


@dataclass(frozen=True)
class KinematicPoint:
    n: int
    s: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        s = tuple(tuple(Fraction(x) for x in row) for row in self.s)
        object.__setattr__(self, "s", s)
        if len(s) != self.n or any(len(row) != self.n for row in s):
            raise KinematicsError(f"s must be {self.n}x{self.n}")
        for a in range(self.n):
            if s[a][a] != 0:
                raise KinematicsError(f"s[{a + 1}][{a + 1}] must vanish")
            if sum(s[a]) != 0:
                raise KinematicsError(f"row {a + 1} does not sum to zero")
            for b in range(a):
                if s[a][b] != s[b][a]:
                    raise KinematicsError(f"s is not symmetric at ({b + 1},{a + 1})")

    def __getitem__(self, ab: tuple[int, int]) -> Fraction:
        a, b = ab
        return self.s[a - 1][b - 1]

    def invariant(self, labels: Iterable[int]) -> Fraction:
        """Sum of ``s_ab`` over unordered pairs ``a < b`` in ``labels``."""
        labels = sorted(labels)
        return sum((self.s[a - 1][b - 1] for a, b in itertools.combinations(labels, 2)), Fraction(0))

    def relabel(self, perm: dict[int, int]) -> "KinematicPoint":
        inv = {v: k for k, v in perm.items()}
        return KinematicPoint(
            self.n,
            tuple(tuple(self[inv[a], inv[b]] for b in range(1, self.n + 1)) for a in range(1, self.n + 1)),
        )

    @cached_property
    def float_matrix(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self.s])

    def to_dict(self) -> dict:
        return {"n": self.n, "s": [[str(x) for x in row] for row in self.s]}

    @classmethod
    def from_dict(cls, data: dict) -> "KinematicPoint":
        return cls(int(data["n"]), tuple(tuple(Fraction(x) for x in row) for row in data["s"]))

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def from_upper(n: int, values: dict[tuple[int, int], Fraction]) -> KinematicPoint:
    s = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), v in values.items():
        s[a - 1][b - 1] = s[b - 1][a - 1] = Fraction(v)
    return KinematicPoint(n, tuple(tuple(r) for r in s))


def degenerate_channel(kin: KinematicPoint) -> frozenset | None:
    """First subset of size ``2..n-2`` whose invariant vanishes, if any."""
    n = kin.n
    for size in range(2, n // 2 + 1):
        for L in itertools.combinations(range(1, n + 1), size):
            if kin.invariant(L) == 0:
                return frozenset(L)
    return None


def random_kinematics(n: int, seed: int, max_tries: int = 1000, bound: int = 9) -> KinematicPoint:
    """Random integer kinematic point with all pair and channel invariants nonzero.

    ``s_ab`` for ``2 <= a < b <= n`` (except ``(n-1, n)``) are drawn from
    ``[-bound, bound] \\ {0}``; ``s_{n-1,n}`` makes their total vanish, and row sums
    fix ``s_{1b}``.  Small ``bound`` values can land on points with
    accidental linear relations among cycle vectors; a large bound avoids them.
    """
    if n < 4:
        raise KinematicsError("need n >= 4")
    rng = random.Random(seed)
    values = [v for v in range(-bound, bound + 1) if v]
    for _ in range(max_tries):
        s = [[0] * (n + 1) for _ in range(n + 1)]
        total = 0
        for a in range(2, n + 1):
            for b in range(a + 1, n + 1):
                if (a, b) == (n - 1, n):
                    continue
                s[a][b] = s[b][a] = rng.choice(values)
                total += s[a][b]
        s[n - 1][n] = s[n][n - 1] = -total
        for b in range(2, n + 1):
            s[1][b] = s[b][1] = -sum(s[b][c] for c in range(2, n + 1) if c != b)
        kin = KinematicPoint(n, tuple(tuple(Fraction(x) for x in row[1:]) for row in s[1:]))
        if any(kin[a, b] == 0 for a, b in itertools.combinations(range(1, n + 1), 2)):
            continue
        if degenerate_channel(kin) is not None:
            continue
        return kin
    raise KinematicsError(f"no generic point found after {max_tries} draws")


def constraint_rank(n: int) -> int:
    """Rank of the row-sum constraints on the ``n(n-1)/2`` independent ``s_ab``."""
    import numpy as np

    pairs = list(itertools.combinations(range(n), 2))
    M = np.zeros((n, len(pairs)))
    for j, (a, b) in enumerate(pairs):
        M[a, j] = M[b, j] = 1
    return int(np.linalg.matrix_rank(M))


def free_dimension(n: int) -> int:
    return n * (n - 1) // 2 - constraint_rank(n)


def as_kinematics(obj) -> KinematicPoint:
    if isinstance(obj, KinematicPoint):
        return obj
    if isinstance(obj, dict):
        return KinematicPoint.from_dict(obj)
    if isinstance(obj, Sequence):
        return KinematicPoint(len(obj), tuple(tuple(row) for row in obj))
    raise TypeError(f"cannot interpret {type(obj).__name__} as kinematics")
