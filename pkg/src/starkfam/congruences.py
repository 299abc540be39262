"""Congruence checks between theta elements of different weights.

Every check reduces exact rational group-ring elements to ``Z/p^n[G]`` and
compares residues. A coefficient with ``p`` in its denominator makes the
comparison meaningless, so it produces a *skipped* report rather than a
failure; only a well-defined nonzero difference counts as *failed*.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .gring import (
    QQ,
    GroupRingElement,
    ResidueRing,
    parity_idempotent,
    twist,
)
from .lfunctions import (
    ThetaElement,
    bernoulli_poly,
    delta_T,
    euler_factor_group,
    is_prime,
    prime_factors,
    theta,
)
from .report import FAILED, SKIPPED, VERIFIED, CongruenceReport

__all__ = [
    "NotPIntegralError",
    "reduce_mod",
    "zeta_value",
    "verify_kummer",
    "kummer_pairs",
    "verify_minus_congruence",
    "verify_delta_twist",
    "verify_integrality",
    "SweepGrid",
    "default_grid",
    "sweep",
]


class NotPIntegralError(ValueError):
    """A coefficient has ``p`` in its denominator."""

    def __init__(self, p: int, label: int | None, coefficient: Fraction):
        self.p = p
        self.label = label
        self.coefficient = coefficient
        where = f" at sigma_{label}" if label is not None else ""
        super().__init__(f"not p-integral (p={p}): coefficient {coefficient}{where}")


def _reduce_scalar(c: Fraction, p: int, N: int, label=None) -> int:
    c = Fraction(c)
    if c.denominator % p == 0:
        raise NotPIntegralError(p, label, c)
    return c.numerator * pow(c.denominator, -1, N) % N


def reduce_mod(x, p: int, n: int) -> GroupRingElement:
    """Coefficientwise image of a rational group-ring element in ``Z/p^n[G]``."""
    if isinstance(x, ThetaElement):
        x = x.value
    if x.ring != QQ:
        raise ValueError("reduce_mod expects exact rational coefficients")
    N = p**n
    vals = [_reduce_scalar(c, p, N, a) for a, c in x.items()]
    return GroupRingElement(x.group, ResidueRing(p, n), vals)


def zeta_value(j: int) -> Fraction:
    """zeta(j) = -B_{1-j}(1)/(1-j) for j <= 0; B_1(1) = +1/2 gives zeta(0) = -1/2."""
    if j > 0:
        raise ValueError("exact channel is non-positive only")
    return -bernoulli_poly(1 - j, 1) / (1 - j)


def _residue_dict(x: GroupRingElement) -> dict[int, int]:
    return {a: c for a, c in x.items()}


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


# ---------------------------------------------------------------------------
# Kummer


def _kummer_precondition(p: int, n: int, j: int, k: int) -> str | None:
    if not is_prime(p) or p == 2:
        return "p must be an odd prime"
    if n < 1:
        return "n must be positive"
    if j >= 0 or k >= 0 or j % 2 == 0 or k % 2 == 0:
        return "j and k must be odd and negative"
    period = p ** (n - 1) * (p - 1)
    if (j - k) % period:
        return f"j - k is not divisible by p^(n-1)(p-1) = {period}"
    if (1 - j) % (p - 1) == 0:
        return "1 - j is divisible by p - 1"
    return None


@_timed
def verify_kummer(p: int, n: int, j: int, k: int) -> CongruenceReport:
    """(1 - p^-j) zeta(j) == (1 - p^-k) zeta(k) mod p^n, exactly."""
    params = {"p": p, "n": n, "j": j, "k": k}
    why = _kummer_precondition(p, n, j, k)
    if why:
        return CongruenceReport("kummer", params, SKIPPED, reason=why)
    N = p**n
    sides = []
    for m in (j, k):
        val = (1 - Fraction(p) ** (-m)) * zeta_value(m)
        try:
            sides.append(_reduce_scalar(val, p, N))
        except NotPIntegralError as exc:
            return CongruenceReport("kummer", params, SKIPPED, reason=str(exc))
    lhs, rhs = sides
    witness = {"lhs": lhs, "rhs": rhs}
    if lhs == rhs:
        return CongruenceReport("kummer", params, VERIFIED, witness=witness)
    witness["difference"] = (lhs - rhs) % N
    return CongruenceReport("kummer", params, FAILED, witness=witness)


def kummer_pairs(primes: Iterable[int], ns: Iterable[int], lo: int = -50) -> list[tuple[int, int, int, int]]:
    """All admissible (p, n, j, k) with lo <= k < j < 0."""
    out = []
    for p in primes:
        for n in ns:
            for j in range(-1, lo - 1, -1):
                for k in range(j - 1, lo - 1, -1):
                    if _kummer_precondition(p, n, j, k) is None:
                        out.append((p, n, j, k))
    return out


# ---------------------------------------------------------------------------
# minus-part congruence


def _minus_precondition(f: int, p: int, n: int, S: tuple[int, ...], j: int, k: int) -> str | None:
    if not is_prime(p) or p == 2:
        return "p must be an odd prime"
    if n < 1 or f % p**n:
        return f"p^n = {p}^{n} does not divide f = {f}"
    if j > 0 or k > 0:
        return "j and k must be non-positive"
    need = set(prime_factors(f)) | {p}
    if not need <= set(S):
        return f"S must contain {sorted(need)}"
    return None


def _minus_part(th: GroupRingElement, j: int) -> GroupRingElement:
    return parity_idempotent(th.group, j, -1, QQ) * th


@_timed
def verify_minus_congruence(
    f: int,
    p: int,
    n: int,
    S: Sequence[int] | None = None,
    T: Sequence[int] = (),
    j: int = 0,
    k: int = 0,
    corrupt: bool = False,
) -> CongruenceReport:
    """tw_{k-j}(e_j^- theta(j)) == e_k^- theta(k) in Z/p^n[G].

    ``S`` lists finite primes and defaults to p together with the primes
    dividing f. The minus parts are cut out over Q before reduction, so only
    they need to be p-integral. ``corrupt`` adds 1 to the identity
    coefficient of theta(k), a fault-injection hook.
    """
    S = tuple(sorted(set(S) if S is not None else set(prime_factors(f)) | {p}))
    T = tuple(sorted(set(T)))
    params = {"f": f, "p": p, "n": n, "S": list(S), "T": list(T), "j": j, "k": k, "part": "minus"}
    why = _minus_precondition(f, p, n, S, j, k)
    if why:
        return CongruenceReport("minus", params, SKIPPED, reason=why)
    try:
        th_j = theta(f, S, T, j).value
        th_k = theta(f, S, T, k).value
    except ValueError as exc:
        return CongruenceReport("minus", params, SKIPPED, reason=str(exc))
    if corrupt:
        th_k = th_k + GroupRingElement.one(th_k.group, QQ)
    reduced = []
    for side, th, m in (("j", th_j, j), ("k", th_k, k)):
        try:
            reduced.append(reduce_mod(_minus_part(th, m), p, n))
        except NotPIntegralError as exc:
            return CongruenceReport("minus", params, SKIPPED, reason=f"weight {side}={m}: {exc}")
    lhs = twist(k - j, reduced[0])
    rhs = reduced[1]
    witness = {"lhs": _residue_dict(lhs), "rhs": _residue_dict(rhs)}
    if lhs == rhs:
        return CongruenceReport("minus", params, VERIFIED, witness=witness)
    witness["difference"] = {a: c for a, c in (lhs - rhs).items() if c}
    return CongruenceReport("minus", params, FAILED, witness=witness)


# ---------------------------------------------------------------------------
# twist identities for T-factors and Euler factors


@_timed
def verify_delta_twist(
    f: int,
    p: int,
    n: int,
    T: Sequence[int] = (),
    j: int = 0,
    k: int = 0,
    euler_primes: Sequence[int] = (),
) -> CongruenceReport:
    """tw_{k-j}(delta_T(j)) == delta_T(k), and likewise for each Euler factor."""
    T = tuple(sorted(set(T)))
    params = {"f": f, "p": p, "n": n, "T": list(T), "j": j, "k": k, "euler_primes": list(euler_primes)}
    if not is_prime(p) or f % p**n:
        return CongruenceReport("delta", params, SKIPPED, reason=f"p^n = {p}^{n} does not divide f = {f}")
    if j > 0 or k > 0:
        return CongruenceReport("delta", params, SKIPPED, reason="j and k must be non-positive")
    if any(f % ell == 0 for ell in list(T) + list(euler_primes)):
        return CongruenceReport("delta", params, SKIPPED, reason="T and Euler primes must not divide f")
    pairs = [("delta_T", delta_T(f, T, j), delta_T(f, T, k))]
    for ell in euler_primes:
        pairs.append((f"euler_{ell}", euler_factor_group(f, ell, j), euler_factor_group(f, ell, k)))
    bad = {}
    for name, xj, xk in pairs:
        try:
            lhs = twist(k - j, reduce_mod(xj, p, n))
            rhs = reduce_mod(xk, p, n)
        except NotPIntegralError as exc:
            return CongruenceReport("delta", params, SKIPPED, reason=f"{name}: {exc}")
        if lhs != rhs:
            bad[name] = {a: c for a, c in (lhs - rhs).items() if c}
    if bad:
        return CongruenceReport("delta", params, FAILED, witness={"difference": bad})
    return CongruenceReport("delta", params, VERIFIED)


# ---------------------------------------------------------------------------
# integrality


@_timed
def verify_integrality(f: int, p: int, S: Sequence[int] | None = None, T: Sequence[int] = (), j: int = 0) -> CongruenceReport:
    """Whether e_j^- theta_{S,T}(j) has p-integral coefficients.

    With T empty a denominator divisible by p is expected in general, so the
    report is skipped and names the offending coefficient. With T nonempty,
    every l in T prime to f p, integrality is a theorem and a denominator is
    a failure.
    """
    S = tuple(sorted(set(S) if S is not None else set(prime_factors(f)) | {p}))
    T = tuple(sorted(set(T)))
    params = {"f": f, "p": p, "S": list(S), "T": list(T), "j": j,
              "annihilators": "1 - l^(1-j) sigma_l^-1, l in T, l prime to f p"}
    if not is_prime(p) or p == 2:
        return CongruenceReport("integrality", params, SKIPPED, reason="p must be an odd prime")
    if p not in S:
        return CongruenceReport("integrality", params, SKIPPED, reason=f"S must contain p={p}")
    if any((f * p) % ell == 0 for ell in T):
        return CongruenceReport("integrality", params, SKIPPED, reason="T primes must be prime to f p")
    try:
        th = theta(f, S, T, j)
    except ValueError as exc:
        return CongruenceReport("integrality", params, SKIPPED, reason=str(exc))
    x = _minus_part(th.value, j) if f > 2 else th.value
    try:
        reduce_mod(x, p, 1)
    except NotPIntegralError as exc:
        witness = {"label": exc.label, "coefficient": exc.coefficient}
        if not T:
            return CongruenceReport(
                "integrality", params, SKIPPED,
                reason=f"T empty: denominator divisible by {p} at sigma_{exc.label} ({exc.coefficient})",
                witness=witness,
            )
        return CongruenceReport("integrality", params, FAILED, reason=str(exc), witness=witness)
    return CongruenceReport("integrality", params, VERIFIED)


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepGrid:
    """Parameter grid for :func:`sweep`.

    ``combos`` lists ``(f, p, n)``. Pairs ``(j, k)`` with ``j > k`` are drawn
    from ``weights`` and ``k_weights`` (which defaults to ``weights``).
    ``t_mode`` picks T sets from ``t_primes``: ``"singletons"``, ``"subsets"``
    (all nonempty subsets) or ``"none"``. ``seed`` drives the randomized
    presentations of the Fitting-ideal check.
    """

    combos: tuple[tuple[int, int, int], ...] = ()
    weights: tuple[int, ...] = ()
    t_primes: tuple[int, ...] = ()
    t_mode: str = "singletons"
    checks: tuple[str, ...] = ("kummer", "minus", "delta", "integrality", "conj35")
    extra_S: tuple[int, ...] = ()
    corrupt: bool = False
    k_weights: tuple[int, ...] = ()
    seed: int = 0

    def t_sets(self, f: int, p: int) -> list[tuple[int, ...]]:
        usable = [ell for ell in sorted(set(self.t_primes)) if (f * p) % ell and ell not in self.extra_S]
        if self.t_mode == "none" or not usable:
            return [()]
        if self.t_mode == "singletons":
            return [(ell,) for ell in usable]
        if self.t_mode == "subsets":
            return [c for r in range(1, len(usable) + 1) for c in itertools.combinations(usable, r)]
        raise ValueError(f"unknown T mode {self.t_mode!r}")

    def pairs(self) -> list[tuple[int, int]]:
        js = sorted(set(self.weights), reverse=True)
        ks = sorted(set(self.k_weights or self.weights), reverse=True)
        return [(j, k) for j in js for k in ks if j > k]


def default_grid() -> SweepGrid:
    return SweepGrid(
        combos=((9, 3, 1), (9, 3, 2), (27, 3, 1), (27, 3, 2), (27, 3, 3), (5, 5, 1),
                (25, 5, 1), (25, 5, 2), (45, 3, 1), (45, 3, 2), (45, 5, 1)),
        weights=(0, -1, -2, -3, -4, -5, -6),
        t_primes=(2, 7, 11),
        t_mode="singletons",
    )


def _tasks(grid: SweepGrid) -> list[tuple]:
    tasks: list[tuple] = []
    pairs = grid.pairs()
    if "kummer" in grid.checks:
        seen = set()
        for f, p, n in grid.combos:
            for j, k in pairs:
                if (p, n, j, k) not in seen:
                    seen.add((p, n, j, k))
                    tasks.append(("kummer", p, n, j, k))
    for f, p, n in grid.combos:
        S = tuple(sorted(set(prime_factors(f)) | {p} | set(grid.extra_S)))
        tsets = grid.t_sets(f, p)
        if "minus" in grid.checks:
            for T in tsets:
                for j, k in pairs:
                    tasks.append(("minus", f, p, n, S, T, j, k, grid.corrupt))
        if "delta" in grid.checks:
            for T in tsets:
                for j, k in pairs:
                    tasks.append(("delta", f, p, n, T, j, k, tuple(grid.extra_S)))
        if "integrality" in grid.checks and n == 1:
            for T in tsets:
                for j in sorted(set(grid.weights), reverse=True):
                    tasks.append(("integrality", f, p, S, T, j))
        if "conj35" in grid.checks:
            for T in tsets:
                for j in sorted(set(grid.weights), reverse=True):
                    tasks.append(("conj35", f, p, n, T, j, grid.seed))
    return tasks


def _run_task(task: tuple) -> CongruenceReport:
    kind = task[0]
    if kind == "kummer":
        return verify_kummer(*task[1:])
    if kind == "minus":
        f, p, n, S, T, j, k, corrupt = task[1:]
        return verify_minus_congruence(f, p, n, S, T, j, k, corrupt=corrupt)
    if kind == "delta":
        f, p, n, T, j, k, ells = task[1:]
        return verify_delta_twist(f, p, n, T, j, k, euler_primes=ells)
    if kind == "integrality":
        return verify_integrality(*task[1:])
    if kind == "conj35":
        from .modalg import conj35_rank0_check

        return conj35_rank0_check(*task[1:])
    raise ValueError(f"unknown check {kind!r}")


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("STARKFAM_WORKERS", "").strip()
    return max(1, int(env)) if env.isdigit() else 1


def sweep(grid: SweepGrid | None, workers: int | None = None) -> list[CongruenceReport]:
    """Run every admissible check in ``grid``; results come back in grid order.

    ``workers`` (or the ``STARKFAM_WORKERS`` environment variable) sets the
    size of a process pool; the default is to run in-process.
    """
    if grid is None:
        return []
    tasks = _tasks(grid)
    count = _worker_count(workers)
    if count == 1 or len(tasks) < 2:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=count) as pool:
        return list(pool.map(_run_task, tasks, chunksize=16))
