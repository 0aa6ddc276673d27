"""
Ground truth by mutation.

Seeds carry the extended exchange matrix [B; I] and their cluster variables
as exact Laurent polynomials in x1..xn with principal coefficients y1..yn.
Exploring the exchange graph attaches every cluster variable to the diagonal
(type A) or theta-orbit (types B and C) sitting in its slot of the companion
triangulation.
"""
from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from math import comb
from typing import Literal, Optional, Sequence, Union

from pydantic import BaseModel

from foldmatch.config import settings
from foldmatch.exceptions import (
    ClosureBudgetExceeded,
    ConventionError,
    NotHomogeneous,
    UnsupportedTriangulationForB,
)
from foldmatch.folded import b_corners, f_B_formula, f_C_formula, g_C_formula, orbit_expansion
from foldmatch.geometry import (
    Diagonal,
    PolygonConfig,
    ThetaOrbit,
    Triangulation,
    all_orbits,
    enumerate_theta_triangulations,
    enumerate_triangulations,
    flip,
    flip_orbit,
    orbit_of,
)
from foldmatch.polynomial import (
    GVector,
    LaurentPolynomial,
    Polynomial,
    canonical_string,
    render_vector,
)
from foldmatch.snake import diagonal_expansion, diagonal_laurent

logger = logging.getLogger(__name__)

Kind = Literal["A", "B", "C"]
ExchangeMatrix = tuple[tuple[int, ...], ...]
Slot = Union[Diagonal, ThetaOrbit]


# -- exchange matrices -----------------------------------------------------


def signed_adjacency_A(T: Triangulation) -> ExchangeMatrix:
    """
    b_ij = +1 when tau_i follows tau_j counterclockwise in a triangle of T,
    -1 when it precedes it, summed over shared triangles.
    """
    m = T.m
    b = [[0] * m for _ in range(m)]
    for a, c, d in T.triangles:
        sides = [T.index_of(Diagonal.of(u, v)) for u, v in ((a, c), (c, d), (d, a))]
        for k in range(3):
            j, i = sides[k], sides[(k + 1) % 3]
            if i is None or j is None:
                continue
            b[i - 1][j - 1] += 1
            b[j - 1][i - 1] -= 1
    return tuple(tuple(row) for row in b)


def symmetrizer(B: ExchangeMatrix) -> Optional[tuple[int, ...]]:
    """A positive diagonal D with DB skew-symmetric, among the ones finite types B and C need."""
    n = len(B)
    for d in ((1,) * n, (1,) * (n - 1) + (2,), (2,) * (n - 1) + (1,)):
        if all(d[i] * B[i][j] == -d[j] * B[j][i] for i in range(n) for j in range(n)):
            return d
    return None


def fold_exchange_matrix(T: Triangulation, kind: Kind, corrupt: bool = False) -> ExchangeMatrix:
    """
    Fold the full polygon's signed adjacency over theta-orbits:
    M[i][j] = sum of b[i][k] over tau_k in orbit j. Type B uses M and type C
    its negative transpose. `corrupt` swaps the two (a test hook).
    """
    n = T.rank
    full = signed_adjacency_A(T)
    folded = [
        [sum(full[i][k - 1] for k in {j, 2 * n - j}) for j in range(1, n + 1)]
        for i in range(n)
    ]
    use_b = (kind == "B") != corrupt
    if not use_b:
        folded = [[-folded[j][i] for j in range(n)] for i in range(n)]
    B = tuple(tuple(row) for row in folded)
    if symmetrizer(B) is None:
        raise ConventionError(f"folded matrix {B} is not skew-symmetrizable")
    return B


def initial_matrix(T: Triangulation, kind: Kind, corrupt: bool = False) -> ExchangeMatrix:
    if kind == "A":
        return signed_adjacency_A(T)
    return fold_exchange_matrix(T, kind, corrupt)


def mutate_matrix(B: Sequence[Sequence[int]], k: int) -> ExchangeMatrix:
    """Matrix mutation at column k (0-based) of a possibly extended matrix."""
    out = []
    for i, row in enumerate(B):
        new = []
        for j, b in enumerate(row):
            if i == k or j == k:
                new.append(-b)
            else:
                new.append(b + max(row[k], 0) * max(B[k][j], 0) - max(-row[k], 0) * max(-B[k][j], 0))
        out.append(tuple(new))
    return tuple(out)


# -- seeds -----------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    kind: Kind
    matrix: ExchangeMatrix  # 2n rows: exchange part then coefficient rows
    variables: tuple[LaurentPolynomial, ...]
    triangulation: Triangulation

    @property
    def rank(self) -> int:
        return len(self.variables)

    @property
    def exchange(self) -> ExchangeMatrix:
        return self.matrix[: self.rank]

    @property
    def coefficients(self) -> ExchangeMatrix:
        return self.matrix[self.rank:]

    @property
    def key(self) -> frozenset:
        return self.triangulation.key()

    def slot(self, k: int) -> Slot:
        tau = self.triangulation.tau(k)
        if self.kind == "A":
            return tau
        return orbit_of(tau, self.triangulation.polygon)


def initial_seed(T: Triangulation, kind: Kind, corrupt: bool = False) -> Seed:
    B = initial_matrix(T, kind, corrupt)
    n = len(B)
    identity = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    variables = tuple(LaurentPolynomial.variable(k, n) for k in range(1, n + 1))
    return Seed(kind, B + identity, variables, T)


def mutate_seed(s: Seed, k: int) -> Seed:
    """Mutation at slot k (1-based)."""
    n = s.rank
    col = k - 1
    zero = (0,) * n
    positive = LaurentPolynomial.monomial(zero, tuple(max(c[col], 0) for c in s.coefficients))
    negative = LaurentPolynomial.monomial(zero, tuple(max(-c[col], 0) for c in s.coefficients))
    for i, row in enumerate(s.exchange):
        if row[col] > 0:
            positive = positive * s.variables[i] ** row[col]
        elif row[col] < 0:
            negative = negative * s.variables[i] ** -row[col]
    new = (positive + negative).exact_divide(s.variables[col])
    variables = s.variables[:col] + (new,) + s.variables[col + 1:]
    T = flip(s.triangulation, k) if s.kind == "A" else flip_orbit(s.triangulation, k)
    return Seed(s.kind, mutate_matrix(s.matrix, col), variables, T)


def f_and_g(X: LaurentPolynomial, B0: ExchangeMatrix) -> tuple[Polynomial, GVector]:
    """F is X at x=1; g is the degree under deg x_i = e_i, deg y_j = -(column j of B0)."""
    n = X.rank
    degrees = set()
    for x_exps, y_exps, _ in X.terms():
        degrees.add(tuple(x_exps[i] - sum(B0[i][j] * y_exps[j] for j in range(n)) for i in range(n)))
    if len(degrees) != 1:
        raise NotHomogeneous(f"cluster variable has degrees {sorted(degrees)}")
    (g,) = degrees
    return X.specialize_x(), g


# -- exploration -----------------------------------------------------------


def expected_counts(kind: Kind, n: int) -> tuple[int, int]:
    """(seeds, cluster variables) of finite type A_n, B_n or C_n."""
    if kind == "A":
        return comb(2 * n + 2, n + 1) // (n + 2), n * (n + 3) // 2
    return comb(2 * n, n), n * (n + 1)


@dataclass
class Exploration:
    kind: Kind
    initial: Seed
    seeds: int = 0
    variables: dict = field(default_factory=dict)
    laurent: dict = field(default_factory=dict)

    @property
    def B0(self) -> ExchangeMatrix:
        return self.initial.exchange

    def value(self, slot: Slot) -> tuple[Polynomial, GVector]:
        return self.variables[slot]


def explore(T: Triangulation, kind: Kind, corrupt: bool = False, budget: Optional[int] = None) -> Exploration:
    """Breadth-first closure of the exchange graph from the seed of T."""
    budget = budget or settings.oracle.closure_budget
    start = initial_seed(T, kind, corrupt)
    result = Exploration(kind, start)
    seen = {start.key}
    queue = deque([start])
    while queue:
        seed = queue.popleft()
        result.seeds += 1
        for k in range(1, seed.rank + 1):
            slot = seed.slot(k)
            X = seed.variables[k - 1]
            known = result.laurent.get(slot)
            if known is None:
                result.laurent[slot] = X
                result.variables[slot] = f_and_g(X, result.B0)
            elif known != X:
                raise ConventionError(f"slot {slot} carries two different cluster variables")
        for k in range(1, seed.rank + 1):
            nxt = mutate_seed(seed, k)
            if nxt.key in seen:
                continue
            seen.add(nxt.key)
            if len(seen) > budget:
                raise ClosureBudgetExceeded(f"more than {budget} seeds from {T}")
            queue.append(nxt)
    logger.debug(
        f"explored {result.seeds} seeds",
        extra={"kind": kind, "seeds": result.seeds, "variables": len(result.variables)},
    )
    return result


# -- verification ----------------------------------------------------------


class Comparison(BaseModel):
    source: str
    F: str
    g: list[int]


class SlotReport(BaseModel):
    slot: str
    F: str
    g: list[int]
    sources: list[Comparison]
    status: Literal["ok", "mismatch"]
    diffs: list[str] = []


class VerificationReport(BaseModel):
    kind: Kind
    triangulation: str
    rows: list[SlotReport]

    @property
    def ok(self) -> bool:
        return all(row.status == "ok" for row in self.rows)

    @property
    def passed(self) -> int:
        return sum(row.status == "ok" for row in self.rows)

    def summary(self) -> str:
        unit = "diagonals" if self.kind == "A" else "orbits"
        return f"{self.passed}/{len(self.rows)} {unit} OK"


def _row(slot: str, values: list[tuple[str, Optional[Polynomial], Optional[GVector]]], errors: list[str]) -> SlotReport:
    reference_F, reference_g = values[0][1], values[0][2]
    diffs = list(errors)
    sources = []
    for name, F, g in values:
        sources.append(
            Comparison(
                source=name,
                F=canonical_string(F) if F is not None else "",
                g=list(g) if g is not None else [],
            )
        )
        if F is not None and reference_F is not None and F != reference_F:
            diffs.append(f"{name}: F = {canonical_string(F)} != {canonical_string(reference_F)}")
        if g is not None and reference_g is not None and tuple(g) != tuple(reference_g):
            diffs.append(f"{name}: g = {render_vector(g)} != {render_vector(reference_g)}")
    return SlotReport(
        slot=slot,
        F=sources[0].F,
        g=sources[0].g,
        sources=sources,
        status="mismatch" if diffs else "ok",
        diffs=diffs,
    )


def verify_theorems(T: Triangulation, kind: Kind, corrupt: bool = False) -> VerificationReport:
    """Compare graph, closed formula and oracle values for every orbit."""
    if kind == "A":
        return verify_diagonals(T)
    if kind == "B":
        b_corners(T)
    oracle = explore(T, kind, corrupt)
    rows = []
    for o in all_orbits(T.polygon):
        values: list = []
        errors = []
        try:
            F, g = orbit_expansion(o, T, kind)
            values.append(("graph", F, g))
            if kind == "B":
                values.append(("formula", f_B_formula(o, T), None))
            else:
                values.append(("formula", f_C_formula(o, T), g_C_formula(o, T)))
        except ConventionError as exc:
            errors.append(f"{exc.code}: {exc}")
            values.append(("graph", None, None))
        values.append(("oracle", *oracle.value(o)))
        row = _row(str(o), values, errors)
        if row.status != "ok":
            logger.warning(f"orbit {o} mismatch", extra={"orbit": str(o), "kind": kind, "diffs": row.diffs})
        rows.append(row)
    return VerificationReport(kind=kind, triangulation=str(T), rows=rows)


def verify_diagonals(T: Triangulation) -> VerificationReport:
    """Type A: snake graph values and full Laurent expansions against the oracle."""
    oracle = explore(T, "A")
    rows = []
    for gamma in T.polygon.all_diagonals():
        F, g = diagonal_expansion(gamma, T)
        values = [("graph", F, g), ("oracle", *oracle.value(gamma))]
        errors = []
        if diagonal_laurent(gamma, T) != oracle.laurent[gamma]:
            errors.append("laurent expansion differs from the cluster variable")
        rows.append(_row(gamma.render(T.polygon), values, errors))
    return VerificationReport(kind="A", triangulation=str(T), rows=rows)


class SweepLine(BaseModel):
    kind: Kind
    rank: int
    triangulations: int
    skipped: int
    slots: int
    failures: list[VerificationReport] = []

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        unit = "diagonals" if self.kind == "A" else "orbits"
        if self.ok:
            return f"all {self.triangulations} triangulations × {self.slots} {unit} OK"
        return f"{len(self.failures)}/{self.triangulations} triangulations failed"


def _checked(T: Triangulation, kind: Kind, corrupt: bool) -> Optional[VerificationReport]:
    try:
        return verify_theorems(T, kind, corrupt)
    except UnsupportedTriangulationForB:
        return None


def sweep(rank: int, kind: Kind, corrupt: bool = False, threads: Optional[int] = None) -> SweepLine:
    """Verify every triangulation of one rank; type B skips triangulations outside its hypothesis."""
    threads = threads or settings.sweep.threads
    if kind == "A":
        polygon = PolygonConfig(rank, "plain")
        triangulations = enumerate_triangulations(polygon)
        slots = len(polygon.all_diagonals())
    else:
        triangulations = enumerate_theta_triangulations(rank)
        slots = expected_counts(kind, rank)[1]
    check = partial(_checked, kind=kind, corrupt=corrupt)
    if threads > 1:
        # sympy work holds the GIL, so workers are processes
        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(check, triangulations, chunksize=4))
    else:
        reports = [check(T) for T in triangulations]
    done = [r for r in reports if r is not None]
    line = SweepLine(
        kind=kind,
        rank=rank,
        triangulations=len(done),
        skipped=len(reports) - len(done),
        slots=slots,
        failures=[r for r in done if not r.ok],
    )
    logger.info(
        f"rank {rank} type {kind}: {line.summary()}",
        extra={"kind": kind, "rank": rank, "skipped": line.skipped, "status": "ok" if line.ok else "mismatch"},
    )
    return line


def seed_census(T: Triangulation, kind: Kind) -> dict[str, int]:
    result = explore(T, kind)
    return {"seeds": result.seeds, "variables": len(result.variables)}


__all__ = [
    "Exploration",
    "Seed",
    "VerificationReport",
    "explore",
    "f_and_g",
    "fold_exchange_matrix",
    "initial_seed",
    "mutate_seed",
    "signed_adjacency_A",
    "sweep",
    "verify_theorems",
]
