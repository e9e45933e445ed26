"""A concrete sup-norm recursion showing directional-rotundity failure.

On finitely supported sequences with the sup norm, zeroing the first
coordinate is a norm-one projection with a one-dimensional kernel. With
z = (1-delta) e_1 in that kernel, the recursion places, at step n, the pair
+-(1 - eps_n/4) e_{n+1} on a fresh coordinate; taking the + member keeps
||z + x_n|| < 1 while the coordinate functionals norm every later x_m at
height 1 - eps_n/4 > 1 - eps_n. Consequently

    x_n - y_n = -z       (fixed direction),
    ||x_n + y_n|| = ||2 x_n + z|| = 2 (1 - eps_n/4)  ->  2,

for y_n = z + x_n, and every point t*z + x_N of the truncated segment stays
in the closed ball with norm at least 1 - eps_N/4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dyadic import frac_str, to_frac


@dataclass(frozen=True)
class SparseSeq:
    """A finitely supported sequence: sorted (index, nonzero value) pairs."""

    coords: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        clean = tuple(
            (int(i), to_frac(v)) for i, v in sorted(self.coords) if to_frac(v) != 0
        )
        for i, _ in clean:
            if i < 1:
                raise ValueError(f"indices must be >= 1, got {i}")
        if len({i for i, _ in clean}) != len(clean):
            raise ValueError("duplicate indices")
        object.__setattr__(self, "coords", clean)

    @staticmethod
    def from_dict(d: dict) -> "SparseSeq":
        return SparseSeq(tuple(d.items()))

    @staticmethod
    def unit(i: int, value=1) -> "SparseSeq":
        return SparseSeq(((i, to_frac(value)),))

    @staticmethod
    def zero() -> "SparseSeq":
        return SparseSeq(())

    def get(self, i: int) -> Fraction:
        for j, v in self.coords:
            if j == i:
                return v
        return Fraction(0)

    def sup_norm(self) -> Fraction:
        return max((abs(v) for _, v in self.coords), default=Fraction(0))

    def __add__(self, other: "SparseSeq") -> "SparseSeq":
        acc = dict(self.coords)
        for i, v in other.coords:
            acc[i] = acc.get(i, Fraction(0)) + v
        return SparseSeq(tuple(acc.items()))

    def __neg__(self) -> "SparseSeq":
        return SparseSeq(tuple((i, -v) for i, v in self.coords))

    def __sub__(self, other: "SparseSeq") -> "SparseSeq":
        return self + (-other)

    def __mul__(self, c) -> "SparseSeq":
        c = to_frac(c)
        return SparseSeq(tuple((i, c * v) for i, v in self.coords))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {str(i): frac_str(v) for i, v in self.coords}


def projection_tail(x: SparseSeq) -> SparseSeq:
    """Zero the first coordinate: idempotent, sup-norm non-increasing."""
    return SparseSeq(tuple((i, v) for i, v in x.coords if i != 1))


@dataclass(frozen=True)
class RecursionRun:
    delta: Fraction
    eps: tuple[Fraction, ...]
    z: SparseSeq
    xs: tuple[SparseSeq, ...]  # xs[0] = 0, xs[n] after step n
    xstars: tuple[int, ...]  # coordinate index evaluated by the n-th functional
    checks: dict

    @property
    def steps(self) -> int:
        return len(self.xs) - 1

    def to_json(self) -> dict:
        return {
            "delta": frac_str(self.delta),
            "eps": [frac_str(e) for e in self.eps],
            "z": self.z.to_json(),
            "xs": [x.to_json() for x in self.xs],
            "xstars": list(self.xstars),
            "checks": self.checks,
        }


def ured_recursion(delta, eps: Sequence, steps: int) -> RecursionRun:
    """Run the fresh-coordinate recursion for `steps` steps.

    delta in (0, 1); eps positive, non-increasing, < 2, with len(eps) >=
    steps. Step n places height 1 - eps[n-1]/4 on coordinate n + 1.
    """
    delta = to_frac(delta)
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    eps = [to_frac(e) for e in eps]
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if len(eps) < steps:
        raise ValueError(f"need at least {steps} eps values, got {len(eps)}")
    for e in eps[:steps]:
        if not 0 < e < 2:
            raise ValueError(f"eps values must lie in (0, 2), got {e}")
    for a, b in zip(eps, eps[1:steps]):
        if b > a:
            raise ValueError("eps must be non-increasing")

    z = SparseSeq.unit(1, 1 - delta)
    xs = [SparseSeq.zero()]
    xstars: list[int] = []
    for n in range(1, steps + 1):
        height = 1 - eps[n - 1] / 4
        xs.append(xs[-1] + SparseSeq.unit(n + 1, height))
        xstars.append(n + 1)

    checks = {
        "claim1": {
            "values": [frac_str((z + x).sup_norm()) for x in xs],
            "ok": all((z + x).sup_norm() < 1 for x in xs),
        },
        "claim2": {
            "ok": all(
                xs[m].get(xstars[n - 1]) == xs[n].get(xstars[n - 1])
                and xs[n].get(xstars[n - 1]) > 1 - eps[n - 1]
                for n in range(1, steps + 1)
                for m in range(n, steps + 1)
            ),
        },
    }
    if not (checks["claim1"]["ok"] and checks["claim2"]["ok"]):
        raise RuntimeError("internal: recursion claims failed")
    return RecursionRun(delta, tuple(eps[:steps]), z, tuple(xs), tuple(xstars), checks)


def verify_claim(run: RecursionRun) -> dict:
    """Re-verify the claims and the norm identities of a completed run.

    (i) ||z + x_n|| < 1 and the norming equalities for all indices;
    (ii) ||z/2 + x_m|| >= 1 - eps_n for all m >= n >= 1;
    (iii) ||2 x_n + z|| = 2 (1 - eps_n/4) for n >= 1 (and = 1 - delta at 0).
    """
    n_steps = run.steps
    claim1 = all((run.z + x).sup_norm() < 1 for x in run.xs)
    claim2 = all(
        run.xs[m].get(run.xstars[n - 1]) == run.xs[n].get(run.xstars[n - 1]) == 1 - run.eps[n - 1] / 4
        and run.xs[n].get(run.xstars[n - 1]) > 1 - run.eps[n - 1]
        for n in range(1, n_steps + 1)
        for m in range(n, n_steps + 1)
    )
    half_z = Fraction(1, 2) * run.z
    halfway = all(
        (half_z + run.xs[m]).sup_norm() >= 1 - run.eps[n - 1]
        for n in range(1, n_steps + 1)
        for m in range(n, n_steps + 1)
    )
    doubled_vals = [(2 * x + run.z).sup_norm() for x in run.xs]
    doubled = doubled_vals[0] == 1 - run.delta and all(
        doubled_vals[n] == 2 * (1 - run.eps[n - 1] / 4) for n in range(1, n_steps + 1)
    )
    report = {
        "claim1": claim1,
        "claim2": claim2,
        "half_z_norming": halfway,
        "doubled_norm": {
            "values": [frac_str(v) for v in doubled_vals],
            "ok": doubled,
        },
        "ok": claim1 and claim2 and halfway and doubled,
    }
    if not report["ok"]:
        raise RuntimeError("internal: claim verification failed")
    return report


def segment_check(run: RecursionRun, t_grid: Sequence, N: int) -> dict:
    """Check the truncated sphere segment: for each t in [0, 1],
    1 - eps_N/4 <= ||t*z + x_N|| < 1."""
    if not t_grid:
        raise ValueError("t grid must be nonempty")
    if not 1 <= N <= run.steps:
        raise ValueError(f"N must lie in 1..{run.steps}, got {N}")
    ts = [to_frac(t) for t in t_grid]
    for t in ts:
        if not 0 <= t <= 1:
            raise ValueError(f"grid points must lie in [0, 1], got {t}")
    floor = 1 - run.eps[N - 1] / 4
    rows = []
    ok = True
    for t in ts:
        val = (t * run.z + run.xs[N]).sup_norm()
        row_ok = floor <= val < 1
        ok = ok and row_ok
        rows.append({"t": frac_str(t), "sup_norm": frac_str(val), "ok": row_ok})
    if not ok:
        raise RuntimeError("internal: segment check failed")
    return {"N": N, "floor": frac_str(floor), "rows": rows, "ok": ok}
