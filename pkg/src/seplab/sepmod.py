"""Test modules over coefficient space and separation experiments.

An input polynomial of degree at most d in n variables is a point of
coefficient space; a *test polynomial* is a polynomial in one coefficient
variable per monomial slot.  Test modules come in three shapes: rank
thresholds of a measure (semantically the span of all minors above the
threshold), explicit spans of test polynomials, and products implementing
property disjunction.  ``run_separation`` drives the whole pipeline: sample
easy circuits, evaluate the module on each expansion, and test the hard
candidate exactly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from math import perm as falling_factorial
from typing import Sequence, Union

from . import circuits, groups, linalg, measures
from . import poly as polyops
from .errors import InfeasibleError
from .field import Field, Scalar
from .poly import Poly, grlex_key, monomial, monomials_exact, monomials_upto
from .seeding import derive_seed, trial_rng

MINOR_CAP = 6


# ---------------------------------------------------------------------------
# ambient coefficient space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ambient:
    """Coefficient space of input polynomials: n variables, degree cap d.

    ``homogeneous`` selects the exact-degree slice; otherwise every monomial
    of degree at most d gets one coefficient variable.  Coefficient variable
    i corresponds to ``coeff_exponents()[i]`` (grlex order).
    """

    n: int
    d: int
    field: Field
    homogeneous: bool = False

    def __post_init__(self):
        if self.n < 1 or self.d < 0:
            raise ValueError("need n >= 1 and d >= 0")

    def coeff_exponents(self) -> list[tuple[int, ...]]:
        if self.homogeneous:
            return monomials_exact(self.n, self.d)
        return monomials_upto(self.n, self.d)

    @property
    def N(self) -> int:
        return len(self.coeff_exponents())

    def accepts(self, f: Poly) -> bool:
        if f.n != self.n or f.field != self.field or f.degree > self.d:
            return False
        if self.homogeneous and not f.is_zero:
            return f.is_homogeneous and f.degree == self.d
        return True

    def require(self, f: Poly) -> None:
        if not self.accepts(f):
            raise ValueError(
                f"polynomial (n={f.n}, deg={f.degree}, {f.field}) does not fit "
                f"the ambient space (n={self.n}, d<={self.d}, {self.field}"
                f"{', homogeneous' if self.homogeneous else ''})"
            )

    def coeff_vector(self, f: Poly) -> list[Scalar]:
        self.require(f)
        return [f.coefficient(e) for e in self.coeff_exponents()]

    def coeff_variable(self, e: Sequence[int]) -> Poly:
        """The test polynomial reading off one coefficient slot."""
        exponents = self.coeff_exponents()
        idx = exponents.index(tuple(e))
        return polyops.variable(idx, len(exponents), self.field)


# ---------------------------------------------------------------------------
# span arithmetic on test polynomials
# ---------------------------------------------------------------------------


def _reduce_polys(polys: Sequence[Poly], nvars: int, fld: Field) -> tuple[Poly, ...]:
    support = sorted({e for t in polys for e in t.terms}, key=grlex_key)
    if not support:
        return ()
    rows = [[t.coefficient(e) for e in support] for t in polys]
    reduced, _ = linalg.rref(rows, fld, ncols=len(support))
    return tuple(
        Poly(nvars, fld, {e: c for e, c in zip(support, row) if c != 0})
        for row in reduced
    )


def span_rank_with(polys: Sequence[Poly], extra: Poly) -> tuple[int, int]:
    """Ranks of the span without and with one extra polynomial."""
    all_polys = list(polys) + [extra]
    support = sorted({e for t in all_polys for e in t.terms}, key=grlex_key)
    if not support:
        return 0, 0
    fld = extra.field
    base = [[t.coefficient(e) for e in support] for t in polys]
    r0 = linalg.rank(base, fld, ncols=len(support))
    r1 = linalg.rank(
        base + [[extra.coefficient(e) for e in support]], fld, ncols=len(support)
    )
    return r0, r1


# ---------------------------------------------------------------------------
# test-module variants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExplicitSpan:
    """Span of test polynomials, reduced to a canonical echelon basis."""

    ambient: Ambient
    basis: tuple[Poly, ...]

    def __post_init__(self):
        for t in self.basis:
            if t.n != self.ambient.N or t.field != self.ambient.field:
                raise ValueError(
                    f"test polynomial on {t.n} variables over {t.field} does "
                    f"not fit coefficient space of dimension {self.ambient.N} "
                    f"over {self.ambient.field}"
                )
        reduced = _reduce_polys(self.basis, self.ambient.N, self.ambient.field)
        object.__setattr__(self, "basis", reduced)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def describe(self) -> str:
        return f"span[dim={self.dim}]"


@dataclass(frozen=True)
class MinorsOfMeasure:
    """All (r+1) x (r+1) minors of a measure matrix, decided by exact rank.

    Vanishing of every minor at f is equivalent to rank <= r, so evaluation
    computes the measure rank and compares — no minor is ever enumerated
    here (``minors_explicit`` materializes them at tiny sizes as a
    cross-check).
    """

    ambient: Ambient
    measure: str
    r: int
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.measure not in measures.MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}")
        if self.r < 0:
            raise ValueError("rank threshold must be nonnegative")

    def describe(self) -> str:
        return f"minors:{self.measure}:{self.r}"


@dataclass(frozen=True)
class ProductModule:
    """Product of two modules; vanishes where either factor vanishes."""

    left: "TestModule"
    right: "TestModule"

    def __post_init__(self):
        if self.left.ambient != self.right.ambient:
            raise ValueError("product factors live in different ambient spaces")

    @property
    def ambient(self) -> Ambient:
        return self.left.ambient

    def describe(self) -> str:
        return f"product({self.left.describe()},{self.right.describe()})"


TestModule = Union[ExplicitSpan, MinorsOfMeasure, ProductModule]


def explicit_span(ambient: Ambient, polys: Sequence[Poly]) -> ExplicitSpan:
    return ExplicitSpan(ambient, tuple(polys))


def module_product(left: TestModule, right: TestModule) -> ProductModule:
    return ProductModule(left, right)


def explicit_product(left: ExplicitSpan, right: ExplicitSpan) -> ExplicitSpan:
    """Materialized product span: pairwise products of basis elements."""
    if left.ambient != right.ambient:
        raise ValueError("product factors live in different ambient spaces")
    prods = [
        polyops.multiply(t1, t2)
        for t1 in left.basis
        for t2 in right.basis
    ]
    return ExplicitSpan(left.ambient, tuple(prods))


def in_span(span: ExplicitSpan, t: Poly) -> bool:
    if t.n != span.ambient.N or t.field != span.ambient.field:
        raise ValueError("polynomial does not fit the span's coefficient space")
    r0, r1 = span_rank_with(span.basis, t)
    return r0 == r1


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleEvaluation:
    """Outcome of evaluating one module at one input polynomial."""

    vanishes: bool
    value: int
    threshold: int
    detail: dict

    def to_json(self) -> dict:
        return {
            "vanishes": self.vanishes,
            "value": self.value,
            "threshold": self.threshold,
            "detail": dict(self.detail),
        }


def evaluate_module(module: TestModule, f: Poly) -> ModuleEvaluation:
    """Decide vanishing of the module at f, with witness data.

    Rank modules report the measure rank against the threshold r; explicit
    spans report how many basis test polynomials are nonzero at f (module
    vanishes iff none are); products report the disjunction of the factors.
    """
    if isinstance(module, MinorsOfMeasure):
        module.ambient.require(f)
        report = measures.compute_measure(module.measure, f, dict(module.params))
        return ModuleEvaluation(
            vanishes=report.rank <= module.r,
            value=report.rank,
            threshold=module.r,
            detail={"measure": module.measure, "params": report.params},
        )
    if isinstance(module, ExplicitSpan):
        point = module.ambient.coeff_vector(f)
        nonzero = [
            i
            for i, t in enumerate(module.basis)
            if polyops.evaluate(t, point) != 0
        ]
        return ModuleEvaluation(
            vanishes=not nonzero,
            value=len(nonzero),
            threshold=0,
            detail={
                "dim": module.dim,
                "first_nonzero_index": nonzero[0] if nonzero else None,
            },
        )
    if isinstance(module, ProductModule):
        left = evaluate_module(module.left, f)
        right = evaluate_module(module.right, f)
        vanishes = left.vanishes or right.vanishes
        return ModuleEvaluation(
            vanishes=vanishes,
            value=0 if vanishes else 1,
            threshold=0,
            detail={"left": left.to_json(), "right": right.to_json()},
        )
    raise TypeError(f"not a test module: {type(module).__name__}")


def vanishes_on(module: TestModule, f: Poly) -> bool:
    return evaluate_module(module, f).vanishes


# ---------------------------------------------------------------------------
# symbolic measure matrix and explicit minors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicMatrix:
    """Matrix whose entries are test polynomials (linear in the a-variables)."""

    row_labels: tuple
    col_labels: tuple
    entries: tuple[tuple[Poly, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)


def symbolic_partial_deriv_matrix(
    ambient: Ambient, max_order: int | None = None
) -> SymbolicMatrix:
    """Derivative matrix of a generic input polynomial of the ambient space.

    Row c (a derivative operator of order |c| <= max_order, order 0
    included), column e (a monomial): the entry is mu * a_{e+c} where mu is
    the falling-factorial multiplier, or zero when e+c leaves the space.
    """
    if max_order is None:
        max_order = ambient.d
    exponents = ambient.coeff_exponents()
    index = {e: i for i, e in enumerate(exponents)}
    nvars = len(exponents)
    fld = ambient.field
    row_labels = tuple(monomials_upto(ambient.n, max_order))
    col_labels = tuple(monomials_upto(ambient.n, ambient.d))
    rows = []
    for c in row_labels:
        row = []
        for e in col_labels:
            big = tuple(ei + ci for ei, ci in zip(e, c))
            if big in index:
                mu = 1
                for bi, ci in zip(big, c):
                    mu *= falling_factorial(bi, ci)
                coeff = fld.coerce(mu)
                if coeff == 0:
                    row.append(polyops.zero(nvars, fld))
                else:
                    unit = [0] * nvars
                    unit[index[big]] = 1
                    row.append(monomial(tuple(unit), coeff, fld))
            else:
                row.append(polyops.zero(nvars, fld))
        rows.append(tuple(row))
    return SymbolicMatrix(row_labels, col_labels, tuple(rows))


def _perm_sign(p: tuple[int, ...]) -> int:
    inv = sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )
    return -1 if inv % 2 else 1


def poly_det(entries: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials (permutation expansion)."""
    k = len(entries)
    if any(len(row) != k for row in entries):
        raise ValueError("determinant needs a square matrix")
    if k == 0:
        raise ValueError("empty determinant")
    sample = entries[0][0]
    total = polyops.zero(sample.n, sample.field)
    for p in itertools.permutations(range(k)):
        term = polyops.constant(sample.n, _perm_sign(p), sample.field)
        for i in range(k):
            term = polyops.multiply(term, entries[i][p[i]])
        total = polyops.add(total, term)
    return total


def poly_matrix_minors(
    entries: Sequence[Sequence[Poly]], size: int, cap: int = MINOR_CAP
) -> list[Poly]:
    """All size x size minor determinants of a polynomial matrix."""
    nrows = len(entries)
    ncols = len(entries[0]) if nrows else 0
    if any(len(row) != ncols for row in entries):
        raise ValueError("ragged matrix")
    if nrows > cap or ncols > cap:
        raise InfeasibleError(
            f"{nrows}x{ncols} matrix exceeds the explicit-minor cap {cap}x{cap}"
        )
    if size < 1 or size > min(nrows, ncols):
        return []
    out = []
    for rs in itertools.combinations(range(nrows), size):
        for cs in itertools.combinations(range(ncols), size):
            out.append(poly_det([[entries[i][j] for j in cs] for i in rs]))
    return out


def minors_explicit(
    matrix: SymbolicMatrix | Sequence[Sequence[Poly]],
    r: int,
    ambient: Ambient,
    cap: int = MINOR_CAP,
) -> ExplicitSpan:
    """Explicit span of all (r+1) x (r+1) minors, reduced to a basis.

    Only for tiny matrices (guarded by ``cap``); ranks above min(rows, cols)
    leave no minors, giving the empty span that vanishes everywhere.
    """
    entries = matrix.entries if isinstance(matrix, SymbolicMatrix) else matrix
    minors = poly_matrix_minors(entries, r + 1, cap)
    nonzero = [m for m in minors if not m.is_zero]
    return ExplicitSpan(ambient, tuple(nonzero))


# ---------------------------------------------------------------------------
# group closure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosureReport:
    """Span generated by transporting a module around a group."""

    module: ExplicitSpan
    group: str
    mode: str
    samples: int
    dim: int

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "mode": self.mode,
            "samples": self.samples,
            "dim": self.dim,
        }


def _transport(t: Poly, coeff_matrix) -> Poly:
    return polyops.substitute_linear(t, coeff_matrix)


def group_closure(
    span: ExplicitSpan,
    group: str,
    rng: random.Random | None = None,
    stable_rounds: int = 10,
    max_samples: int = 500,
) -> ClosureReport:
    """Close an explicit span under a variable group acting on coefficients.

    group="sym": exhaustive over all n! permutations (n <= 8); the result is
    genuinely invariant.  group="gl": random invertible substitutions are
    added until the span dimension survives ``stable_rounds`` consecutive
    samples — reported as mode "sampled", which is evidence, not proof.
    """
    amb = span.ambient
    if group == "sym":
        elements = groups.enumerate_permutations(amb.n)
        images = list(span.basis)
        for g in elements:
            cm = groups.induced_coeff_map(
                g, amb.d, field=amb.field, homogeneous=amb.homogeneous
            )
            images.extend(_transport(t, cm.matrix) for t in span.basis)
        closed = ExplicitSpan(amb, tuple(images))
        return ClosureReport(
            closed, "sym", "exhaustive", len(elements), closed.dim
        )
    if group == "gl":
        if rng is None:
            raise ValueError("sampled closure needs a random generator")
        current = span
        streak = 0
        samples = 0
        while streak < stable_rounds and samples < max_samples:
            g = groups.random_invertible(amb.n, amb.field, rng)
            cm = groups.induced_coeff_map(
                g, amb.d, homogeneous=amb.homogeneous
            )
            images = [_transport(t, cm.matrix) for t in span.basis]
            grown = ExplicitSpan(amb, current.basis + tuple(images))
            samples += 1
            if grown.dim == current.dim:
                streak += 1
            else:
                streak = 0
            current = grown
        return ClosureReport(current, "gl", "sampled", samples, current.dim)
    raise ValueError(f'unknown group {group!r} (expected "sym" or "gl")')


# ---------------------------------------------------------------------------
# separation experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrialResult:
    index: int
    seed: int
    value: int
    threshold: int
    vanished: bool


@dataclass(frozen=True)
class SeparationReport:
    """Full record of one separation experiment.

    The separating claim needs every sampled easy function to vanish AND the
    hard candidate not to; with zero trials the claim is refused outright.
    """

    module: str
    sampler: str
    trials: int
    rows: tuple[TrialResult, ...]
    easy_vanish_count: int
    hard_nonvanish: bool
    hard_value: int
    hard_threshold: int
    separating: bool
    note: str

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "sampler": self.sampler,
            "trials": self.trials,
            "easy_vanish_count": self.easy_vanish_count,
            "hard_nonvanish": self.hard_nonvanish,
            "hard_value": self.hard_value,
            "hard_threshold": self.hard_threshold,
            "separating": self.separating,
            "note": self.note,
            "rows": [
                {
                    "trial": t.index,
                    "seed": t.seed,
                    "rank": t.value,
                    "bound": t.threshold,
                    "vanished": t.vanished,
                }
                for t in self.rows
            ],
        }

    def csv_rows(self) -> list[list]:
        out = [["trial", "seed", "rank", "bound", "vanished"]]
        for t in self.rows:
            out.append(
                [t.index, t.seed, t.value, t.threshold, int(t.vanished)]
            )
        return out


def run_separation(
    module: TestModule,
    sampler: circuits.EasySampler,
    f_hard: Poly,
    trials: int,
    seed: int = 0,
) -> SeparationReport:
    """Evaluate the module on sampled easy functions and the hard candidate.

    Trial i uses its own generator derived from the master seed, so runs
    reproduce bit for bit and trials could be distributed.
    """
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    rows = []
    vanish_count = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        f_easy = circuits.expand(sampler.sample(rng))
        outcome = evaluate_module(module, f_easy)
        rows.append(
            TrialResult(
                index=i,
                seed=derive_seed(seed, i),
                value=outcome.value,
                threshold=outcome.threshold,
                vanished=outcome.vanishes,
            )
        )
        if outcome.vanishes:
            vanish_count += 1
    hard_outcome = evaluate_module(module, f_hard)
    hard_nonvanish = not hard_outcome.vanishes
    if trials == 0:
        separating = False
        note = "insufficient evidence: zero easy-side trials"
    else:
        separating = (vanish_count == trials) and hard_nonvanish
        note = ""
    return SeparationReport(
        module=module.describe(),
        sampler=sampler.describe(),
        trials=trials,
        rows=tuple(rows),
        easy_vanish_count=vanish_count,
        hard_nonvanish=hard_nonvanish,
        hard_value=hard_outcome.value,
        hard_threshold=hard_outcome.threshold,
        separating=separating,
        note=note,
    )
