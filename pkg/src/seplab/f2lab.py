"""Finite-field function-space constructions at desk scale.

Truth tables over F_2 convert to and from multilinear polynomials by the
XOR subset-sum (binary Moebius) transform.  ``distance_to_degree`` finds the
exact Hamming distance from a table to the nearest low-degree function by
walking the whole low-degree code in Gray-code order.  Over a general prime
field F_q the module works with *functions*, i.e. polynomials reduced by
x^q = x: vanishing ideals of point sets, canonical subspaces of the reduced
monomial space, subspace intersections by two independent strategies, and a
twisted-derivative intersection check against the invertible-matrix locus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

from . import groups, linalg
from . import poly as polyops
from .errors import InfeasibleError
from .field import Field, prime_field
from .poly import Poly, grlex_key

_DISTANCE_CODE_BITS = 24
_DISTANCE_MAX_VARS = 16
_GK_MAX_POINTS = 10_000

F2 = prime_field(2)


# ---------------------------------------------------------------------------
# truth tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruthTable:
    """Boolean function on n bits, stored as 2^n values in point-lex order.

    The point (x_1, .., x_n) sits at index sum x_i * 2^(n-1-i), so x_1 is the
    most significant index bit and the all-zeros point comes first.
    """

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("need a nonnegative variable count")
        if len(self.bits) != 1 << self.n:
            raise ValueError(
                f"table for {self.n} variables needs {1 << self.n} entries, "
                f"got {len(self.bits)}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("table entries must be 0 or 1")

    def weight(self) -> int:
        return sum(self.bits)

    def as_int(self) -> int:
        """The table packed into an integer, bit i = value at point index i."""
        word = 0
        for idx, b in enumerate(self.bits):
            if b:
                word |= 1 << idx
        return word


def point_index(point: Sequence[int], n: int) -> int:
    return sum((1 << (n - 1 - i)) for i, v in enumerate(point) if v)


def index_point(idx: int, n: int) -> tuple[int, ...]:
    return tuple((idx >> (n - 1 - i)) & 1 for i in range(n))


def truth_table(n: int, predicate: Callable[[tuple[int, ...]], object]) -> TruthTable:
    """Tabulate a predicate over all 2^n points."""
    bits = tuple(
        1 if predicate(index_point(idx, n)) else 0 for idx in range(1 << n)
    )
    return TruthTable(n, bits)


def table_from_int(n: int, word: int) -> TruthTable:
    return TruthTable(n, tuple((word >> idx) & 1 for idx in range(1 << n)))


def format_table(t: TruthTable) -> str:
    return f"n={t.n}\n" + "".join(str(b) for b in t.bits) + "\n"


def parse_table(text: str) -> TruthTable:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("n="):
        raise ValueError('expected a "n=<int>" header line and one bit line')
    n = int(lines[0][2:])
    if any(ch not in "01" for ch in lines[1]):
        raise ValueError("bit line may only contain 0 and 1")
    return TruthTable(n, tuple(int(ch) for ch in lines[1]))


# ---------------------------------------------------------------------------
# Moebius transform
# ---------------------------------------------------------------------------


def _xor_subset_transform(values: list[int], n: int) -> list[int]:
    # Self-inverse over F_2: out[m] = XOR of in[m'] over submasks m' of m.
    arr = list(values)
    for j in range(n):
        step = 1 << j
        for m in range(len(arr)):
            if m & step:
                arr[m] ^= arr[m ^ step]
    return arr


def _mask_to_exponent(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> (n - 1 - i)) & 1 for i in range(n))


def truth_table_to_multilinear(t: TruthTable) -> Poly:
    """The unique multilinear polynomial over F_2 computing the table."""
    coeffs = _xor_subset_transform(list(t.bits), t.n)
    terms = {
        _mask_to_exponent(mask, t.n): 1
        for mask, c in enumerate(coeffs)
        if c
    }
    return Poly(t.n, F2, terms)


def multilinear_to_truth_table(f: Poly) -> TruthTable:
    """Tabulate a multilinear polynomial over F_2 (inverse of the above)."""
    if f.field != F2:
        raise ValueError("expected a polynomial over F2")
    coeffs = [0] * (1 << f.n)
    for e, c in f.terms.items():
        if any(v > 1 for v in e):
            raise ValueError(f"not multilinear: exponent {e}")
        if c:
            coeffs[point_index(e, f.n)] ^= 1
    return TruthTable(f.n, tuple(_xor_subset_transform(coeffs, f.n)))


# ---------------------------------------------------------------------------
# distance to the low-degree code
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgreementReport:
    """Exact nearest-codeword data for one table against the degree-<=d code."""

    n: int
    degree_bound: int
    distance: int
    witness: Poly
    candidates: int

    def agreement(self) -> int:
        return (1 << self.n) - self.distance

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degree_bound": self.degree_bound,
            "distance": self.distance,
            "agreement": self.agreement(),
            "witness": polyops.poly_to_json(self.witness),
            "candidates": self.candidates,
        }


def _monomial_masks(n: int, d: int) -> list[tuple[int, ...]]:
    out = [
        e
        for bits in range(1 << n)
        if (e := _mask_to_exponent(bits, n)) is not None and sum(e) <= d
    ]
    out.sort(key=grlex_key)
    return out


def distance_to_degree(t: TruthTable, d: int) -> AgreementReport:
    """Minimum Hamming distance from the table to any degree-<=d function.

    Walks all 2^M codewords (M = number of multilinear monomials of degree
    <= d) in Gray-code order, flipping one monomial table per step, so each
    candidate costs one XOR and one popcount.  First codeword achieving the
    minimum is the reported witness.
    """
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    if t.n > _DISTANCE_MAX_VARS:
        raise InfeasibleError(
            f"table on {t.n} > {_DISTANCE_MAX_VARS} variables is out of desk range"
        )
    d = min(d, t.n)
    m_count = sum(comb(t.n, i) for i in range(d + 1))
    if m_count > _DISTANCE_CODE_BITS:
        raise InfeasibleError(
            f"degree-{d} code over {t.n} variables has 2^{m_count} words; "
            f"the enumeration budget is 2^{_DISTANCE_CODE_BITS}"
        )
    monomials = _monomial_masks(t.n, d)
    tables = []
    for e in monomials:
        word = 0
        for idx in range(1 << t.n):
            point = index_point(idx, t.n)
            if all(point[i] for i in range(t.n) if e[i]):
                word |= 1 << idx
        tables.append(word)

    target = t.as_int()
    best_dist = target.bit_count()
    best_mask = 0
    word = 0
    for k in range(1, 1 << m_count):
        flip = (k & -k).bit_length() - 1
        word ^= tables[flip]
        dist = (word ^ target).bit_count()
        if dist < best_dist:
            best_dist = dist
            best_mask = k ^ (k >> 1)
            if best_dist == 0:
                break

    witness_terms = {
        monomials[i]: 1 for i in range(m_count) if (best_mask >> i) & 1
    }
    witness = Poly(t.n, F2, witness_terms)
    return AgreementReport(t.n, d, best_dist, witness, 1 << m_count)


# ---------------------------------------------------------------------------
# reduced function spaces over F_q
# ---------------------------------------------------------------------------


def reduce_pointwise(f: Poly) -> Poly:
    """Reduce a polynomial by x^q = x, giving the canonical function form."""
    q = f.field.p
    if q is None:
        raise ValueError("pointwise reduction needs a prime field")
    terms: dict = {}
    for e, c in f.terms.items():
        e2 = tuple(0 if v == 0 else 1 + (v - 1) % (q - 1) for v in e)
        terms[e2] = (terms.get(e2, 0) + c) % q
    return Poly(f.n, f.field, terms)


def function_monomials(m: int, q: int, max_degree: int) -> list[tuple[int, ...]]:
    """Grlex-ordered reduced monomials: each exponent < q, total degree capped."""
    out = [
        e
        for e in itertools.product(range(q), repeat=m)
        if sum(e) <= max_degree
    ]
    out.sort(key=grlex_key)
    return out


@dataclass(frozen=True)
class SubspaceOverFq:
    """Subspace of the reduced function space, basis kept in canonical RREF."""

    q: int
    monomials: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def polynomials(self, n: int) -> list[Poly]:
        fld = prime_field(self.q)
        return [
            Poly(n, fld, {e: c for e, c in zip(self.monomials, row) if c})
            for row in self.basis
        ]


def _make_subspace(q: int, monomials, rows) -> SubspaceOverFq:
    fld = prime_field(q)
    reduced, _ = linalg.rref(rows, fld, ncols=len(monomials))
    return SubspaceOverFq(
        q, tuple(monomials), tuple(tuple(r) for r in reduced)
    )


def subspace_from_polys(
    polys: Sequence[Poly], q: int, monomials: Sequence[tuple[int, ...]]
) -> SubspaceOverFq:
    """Span of the given (already reduced) polynomials in the monomial basis."""
    index = {e: i for i, e in enumerate(monomials)}
    rows = []
    for f in polys:
        row = [0] * len(monomials)
        for e, c in f.terms.items():
            if e not in index:
                raise ValueError(f"monomial {e} outside the ambient basis")
            row[index[e]] = c
        rows.append(row)
    return _make_subspace(q, monomials, rows)


def vanishing_ideal_basis(
    points: Sequence[Sequence[int]], max_degree: int, q: int
) -> SubspaceOverFq:
    """All reduced functions of degree <= max_degree vanishing on the points.

    Computed as the right kernel of the evaluation matrix whose rows are the
    points and whose columns are the reduced monomials.
    """
    if not points:
        raise ValueError("need at least one point")
    m = len(points[0])
    if any(len(p) != m for p in points):
        raise ValueError("points must share one dimension")
    monomials = function_monomials(m, q, max_degree)
    fld = prime_field(q)
    eval_rows = []
    for pt in points:
        pt = [v % q for v in pt]
        eval_rows.append(
            [_eval_monomial(pt, e, q) for e in monomials]
        )
    kernel = linalg.right_kernel(eval_rows, fld, ncols=len(monomials))
    return SubspaceOverFq(q, tuple(monomials), tuple(tuple(r) for r in kernel))


def _eval_monomial(point: Sequence[int], e: Sequence[int], q: int) -> int:
    v = 1
    for x, k in zip(point, e):
        if k:
            v = (v * pow(x, k, q)) % q
        if v == 0:
            return 0
    return v


def subspace_intersection(a: SubspaceOverFq, b: SubspaceOverFq) -> SubspaceOverFq:
    """Intersection of two subspaces in the same ambient basis.

    Solves U^T x = W^T y: the right kernel of the block matrix [U^T | -W^T]
    gives coefficient pairs, and each x part maps to one intersection vector.
    """
    if a.q != b.q or a.monomials != b.monomials:
        raise ValueError("subspaces live in different ambient spaces")
    if not a.basis or not b.basis:
        return _make_subspace(a.q, a.monomials, [])
    fld = prime_field(a.q)
    n_cols = len(a.monomials)
    block = [
        [a.basis[i][r] for i in range(a.dim)]
        + [(-b.basis[j][r]) % a.q for j in range(b.dim)]
        for r in range(n_cols)
    ]
    pairs = linalg.right_kernel(block, fld, ncols=a.dim + b.dim)
    rows = []
    for vec in pairs:
        x = vec[: a.dim]
        rows.append(
            [
                sum(x[i] * a.basis[i][c] for i in range(a.dim)) % a.q
                for c in range(n_cols)
            ]
        )
    return _make_subspace(a.q, a.monomials, rows)


def _annihilator_rows(s: SubspaceOverFq) -> list[list[int]]:
    return linalg.right_kernel(
        [list(r) for r in s.basis], prime_field(s.q), ncols=len(s.monomials)
    )


def intersect_all(
    subs: Sequence[SubspaceOverFq], strategy: str = "pairwise"
) -> SubspaceOverFq:
    """Intersection of many subspaces.

    "pairwise" folds subspace_intersection left to right; "stacked" collects
    each subspace's annihilator (right kernel of its basis) into one
    constraint system and takes a single kernel.  Both return the canonical
    RREF basis, so results are comparable entry by entry.
    """
    if not subs:
        raise ValueError("need at least one subspace")
    first = subs[0]
    if any(s.q != first.q or s.monomials != first.monomials for s in subs):
        raise ValueError("subspaces live in different ambient spaces")
    if strategy == "pairwise":
        acc = subs[0]
        for s in subs[1:]:
            acc = subspace_intersection(acc, s)
        return acc
    if strategy == "stacked":
        constraints = []
        for s in subs:
            constraints.extend(_annihilator_rows(s))
        fld = prime_field(first.q)
        kernel = linalg.right_kernel(
            constraints, fld, ncols=len(first.monomials)
        )
        return SubspaceOverFq(
            first.q, first.monomials, tuple(tuple(r) for r in kernel)
        )
    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# twisted-derivative intersection check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GKReport:
    """Outcome of the twisted-derivative / vanishing-ideal intersection test."""

    n: int
    q: int
    r: int
    max_degree: int
    sigma_count: int
    strategy: str
    lambda_dim: int
    intersection_dim: int
    property_holds: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "r": self.r,
            "max_degree": self.max_degree,
            "sigma_count": self.sigma_count,
            "strategy": self.strategy,
            "lambda_dim": self.lambda_dim,
            "intersection_dim": self.intersection_dim,
            "property_holds": self.property_holds,
        }


def gl_points(n: int, q: int) -> list[tuple[int, ...]]:
    """All invertible n x n matrices over F_q, flattened row-major."""
    fld = prime_field(q)
    pts = []
    for g in groups.enumerate_invertible(n, fld):
        pts.append(tuple(v % q for row in g.matrix for v in row))
    return pts


def _twist_matrix(sigma, n: int, q: int) -> list[list[int]]:
    # Substitution X -> sigma X on the n^2 flattened matrix variables:
    # the image of x_{ij} is sum_k sigma[i][k] x_{kj}.
    m = [[0] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                m[i * n + j][k * n + j] = sigma[i][k] % q
    return m


def _derivative_span_rows(
    f: Poly, r: int, twist: list[list[int]] | None, monomials, q: int
) -> list[list[int]]:
    index = {e: i for i, e in enumerate(monomials)}
    rows = []
    for order in polyops.monomials_upto(f.n, min(r, max(f.degree, 0))):
        g = polyops.derivative(f, order)
        if g.is_zero:
            continue
        if twist is not None:
            g = polyops.substitute_linear(g, twist)
        g = reduce_pointwise(g)
        if g.is_zero:
            continue
        row = [0] * len(monomials)
        for e, c in g.terms.items():
            row[index[e]] = c
        rows.append(row)
    return rows


def gk_intersection_test(
    f: Poly,
    r: int,
    sigmas: Sequence[groups.GroupElement],
    max_degree: int | None = None,
    strategy: str = "pairwise",
) -> GKReport:
    """Check whether twisted derivative spans share a function vanishing on
    every invertible matrix.

    f is a polynomial over F_q in n^2 matrix variables.  For each sigma the
    span of all derivatives of order <= r of f, twisted by X -> sigma X and
    reduced by x^q = x, is intersected across sigmas; the result is then
    intersected with the vanishing ideal of the invertible-matrix point set.
    The property holds when that final intersection contains a nonzero
    function.
    """
    q = f.field.p
    if q is None:
        raise ValueError("the intersection test runs over a prime field")
    if not sigmas:
        raise ValueError("need at least one matrix to twist by")
    m = f.n
    n = int(round(m ** 0.5))
    if n * n != m:
        raise ValueError(f"{m} variables do not form a square matrix")
    if r < 0:
        raise ValueError("derivative order bound must be nonnegative")
    if q ** m > _GK_MAX_POINTS:
        raise InfeasibleError(
            f"q^(n^2) = {q ** m} exceeds the desk-scale budget {_GK_MAX_POINTS}"
        )
    reduced_f = reduce_pointwise(f)
    cap = m * (q - 1)
    if max_degree is None:
        max_degree = cap
    if not reduced_f.is_zero and reduced_f.degree > max_degree:
        raise ValueError(
            f"degree cap {max_degree} is below the reduced degree {reduced_f.degree}"
        )
    monomials = function_monomials(m, q, max_degree)

    for s in sigmas:
        if s.kind != "linear" or s.n != n or s.field != f.field:
            raise ValueError(
                "twists must be invertible linear elements on the matrix side"
            )

    if reduced_f.is_zero:
        return GKReport(
            n, q, r, max_degree, len(sigmas), strategy, 0, 0, False
        )

    spans = []
    for s in sigmas:
        twist = _twist_matrix(s.matrix, n, q)
        rows = _derivative_span_rows(reduced_f, r, twist, monomials, q)
        spans.append(_make_subspace(q, monomials, rows))
    lam = intersect_all(spans, strategy)
    ideal = vanishing_ideal_basis(gl_points(n, q), max_degree, q)
    final = intersect_all([lam, ideal], strategy)
    return GKReport(
        n,
        q,
        r,
        max_degree,
        len(sigmas),
        strategy,
        lam.dim,
        final.dim,
        final.dim > 0,
    )
