"""Sparse exact multivariate polynomial arithmetic.

A polynomial is a map from exponent tuples to nonzero coefficients, tagged
with its variable count and coefficient field.  Everything here is pure and
exact: rational coefficients stay reduced fractions, prime-field coefficients
stay ints in ``[0, p)``.  The canonical monomial order used for iteration and
matrix column indexing everywhere in this package is graded lexicographic:
lower total degree first, ties broken by tuple comparison of the exponents.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import Field, RATIONALS, Scalar

Exponent = tuple[int, ...]


def grlex_key(e: Exponent):
    """Sort key realizing the graded-lexicographic order."""
    return (sum(e), e)


def monomials_exact(n: int, degree: int) -> list[Exponent]:
    """All exponent tuples of total degree exactly ``degree``, grlex-sorted."""
    if degree < 0:
        return []
    if n == 0:
        return [()] if degree == 0 else []
    out: list[Exponent] = []

    def rec(prefix: Exponent, remaining: int, slots: int):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for i in range(remaining + 1):
            rec(prefix + (i,), remaining - i, slots - 1)

    rec((), degree, n)
    return out


def monomials_upto(n: int, degree: int) -> list[Exponent]:
    """All exponent tuples of total degree at most ``degree``, grlex-sorted."""
    return [e for k in range(degree + 1) for e in monomials_exact(n, k)]


@dataclass(frozen=True)
class Poly:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero scalars.

    Construction canonicalizes: coefficients are coerced into ``field``, zero
    terms are dropped, exponents are validated against ``n``.  Instances are
    treated as immutable; all operations return new values.  The zero
    polynomial is the empty term map and has degree -1.
    """

    n: int
    field: Field
    terms: dict[Exponent, Scalar]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative variable count")
        clean: dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            e = tuple(int(v) for v in e)
            if len(e) != self.n or any(v < 0 for v in e):
                raise ValueError(f"bad exponent {e} for {self.n} variable(s)")
            c = self.field.coerce(c)
            if c != 0:
                clean[e] = c
        object.__setattr__(self, "terms", clean)

    # construction never leaves zero coefficients, so truthiness is simple
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def coefficient(self, e: Exponent) -> Scalar:
        return self.terms.get(tuple(e), self.field.zero())

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i}" if v == 1 else f"x{i}^{v}" for i, v in enumerate(e) if v
            )
            parts.append(f"{self.field.fmt(c)}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def zero(n: int, field: Field = RATIONALS) -> Poly:
    return Poly(n, field, {})


def constant(n: int, c, field: Field = RATIONALS) -> Poly:
    return Poly(n, field, {(0,) * n: c})


def variable(i: int, n: int, field: Field = RATIONALS) -> Poly:
    if not 0 <= i < n:
        raise IndexError(f"variable index {i} out of range for n={n}")
    e = tuple(1 if j == i else 0 for j in range(n))
    return Poly(n, field, {e: 1})


def monomial(e: Exponent, c, field: Field = RATIONALS) -> Poly:
    return Poly(len(e), field, {tuple(e): c})


def _check_ring(f: Poly, g: Poly):
    if f.n != g.n:
        raise ValueError(f"variable count mismatch: {f.n} vs {g.n}")
    if f.field != g.field:
        raise ValueError(f"field mismatch: {f.field} vs {g.field}")


def add(f: Poly, g: Poly) -> Poly:
    _check_ring(f, g)
    terms = dict(f.terms)
    for e, c in g.terms.items():
        prev = terms.get(e)
        terms[e] = c if prev is None else prev + c
    return Poly(f.n, f.field, terms)


def negate(f: Poly) -> Poly:
    return Poly(f.n, f.field, {e: -c for e, c in f.terms.items()})


def subtract(f: Poly, g: Poly) -> Poly:
    return add(f, negate(g))


def scalar_multiply(c, f: Poly) -> Poly:
    c = f.field.coerce(c)
    return Poly(f.n, f.field, {e: c * v for e, v in f.terms.items()})


def _dict_mul(a: dict, b: dict, p: int | None) -> dict:
    """Raw term-map product; reduces mod p and drops zeros."""
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            prev = out.get(e)
            out[e] = c1 * c2 if prev is None else prev + c1 * c2
    if p is None:
        return {e: v for e, v in out.items() if v}
    return {e: vp for e, v in out.items() if (vp := v % p)}


def multiply(f: Poly, g: Poly) -> Poly:
    _check_ring(f, g)
    return Poly(f.n, f.field, _dict_mul(f.terms, g.terms, f.field.p))


def power(f: Poly, k: int) -> Poly:
    if k < 0:
        raise ValueError("negative power")
    result = constant(f.n, 1, f.field)
    base = f
    while k:
        if k & 1:
            result = multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result


def partial_derivative(f: Poly, i: int) -> Poly:
    """Formal derivative with respect to variable ``i``."""
    if not 0 <= i < f.n:
        raise IndexError(f"variable index {i} out of range for n={f.n}")
    terms = {}
    for e, c in f.terms.items():
        if e[i]:
            e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
            terms[e2] = c * e[i]
    return Poly(f.n, f.field, terms)


def derivative(f: Poly, orders: Exponent) -> Poly:
    """Iterated formal derivative: differentiate ``orders[i]`` times in x_i.

    Coefficients pick up the falling-factorial multipliers, reduced mod p over
    a prime field (so high-order derivatives can vanish there).
    """
    orders = tuple(int(v) for v in orders)
    if len(orders) != f.n or any(v < 0 for v in orders):
        raise ValueError(f"bad derivative orders {orders} for n={f.n}")
    terms = {}
    for e, c in f.terms.items():
        if all(ei >= oi for ei, oi in zip(e, orders)):
            mult = 1
            for ei, oi in zip(e, orders):
                mult *= math.perm(ei, oi)
            e2 = tuple(ei - oi for ei, oi in zip(e, orders))
            prev = terms.get(e2)
            contrib = c * mult
            terms[e2] = contrib if prev is None else prev + contrib
    return Poly(f.n, f.field, terms)


def evaluate(f: Poly, point: Sequence) -> Scalar:
    """Exact value of f at a point (length-n sequence of scalars)."""
    if len(point) != f.n:
        raise ValueError(f"point has {len(point)} entries, expected {f.n}")
    fld = f.field
    vals = [fld.coerce(v) for v in point]
    p = fld.p
    total = fld.zero()
    for e, c in f.terms.items():
        term = c
        for v, ei in zip(vals, e):
            if ei:
                term = term * (pow(v, ei, p) if p is not None else v**ei)
        total = total + term
    return total % p if p is not None else total


def substitute(f: Poly, images: Sequence[Poly]) -> Poly:
    """Substitute ``images[i]`` for variable i; images fix the output ring.

    All images must share one variable count and the field of f.  Powers of
    each image are computed once and reused across terms.
    """
    if f.n == 0:
        raise ValueError("cannot substitute into a 0-variable polynomial")
    if len(images) != f.n:
        raise ValueError(f"expected {f.n} images, got {len(images)}")
    n_out = images[0].n
    fld = images[0].field
    if fld != f.field:
        raise ValueError(f"field mismatch: {f.field} vs {fld}")
    for img in images:
        if img.n != n_out or img.field != fld:
            raise ValueError("images must share one ring")
    p = fld.p

    need = [0] * f.n
    for e in f.terms:
        for i, v in enumerate(e):
            if v > need[i]:
                need[i] = v
    one = {(0,) * n_out: fld.one()}
    powers: list[list[dict]] = []
    for i, img in enumerate(images):
        cache = [one]
        for _ in range(need[i]):
            cache.append(_dict_mul(cache[-1], img.terms, p))
        powers.append(cache)

    acc: dict = {}
    for e, c in f.terms.items():
        cur = {(0,) * n_out: c}
        for i, ei in enumerate(e):
            if ei:
                cur = _dict_mul(cur, powers[i][ei], p)
        for k, v in cur.items():
            prev = acc.get(k)
            acc[k] = v if prev is None else prev + v
    return Poly(n_out, fld, acc)


def substitute_linear(f: Poly, matrix: Sequence[Sequence]) -> Poly:
    """Return f(A·x): variable i is replaced by the linear form of row i.

    The matrix need not be invertible; restrictions and projections reuse
    this path.
    """
    a = [list(row) for row in matrix]
    if len(a) != f.n or any(len(row) != f.n for row in a):
        raise ValueError(f"matrix must be {f.n}x{f.n}")
    fld = f.field
    images = []
    for row in a:
        terms = {}
        for j, v in enumerate(row):
            v = fld.coerce(v)
            if v != 0:
                e = tuple(1 if k == j else 0 for k in range(f.n))
                terms[e] = v
        images.append(Poly(f.n, fld, terms))
    return substitute(f, images)


def substitute_affine(f: Poly, matrix: Sequence[Sequence], shift: Sequence) -> Poly:
    """Return f(A·x + b), by homogenizing with one extra variable set to 1."""
    if len(shift) != f.n:
        raise ValueError(f"shift must have length {f.n}")
    n = f.n
    ext = Poly(n + 1, f.field, {e + (0,): c for e, c in f.terms.items()})
    rows = [list(matrix[i]) + [shift[i]] for i in range(n)]
    rows.append([0] * n + [1])
    return restrict(substitute_linear(ext, rows), {n: 1})


_NAME_RE = re.compile(r"^x(\d+)$")


def _input_index(name: str) -> int | None:
    m = _NAME_RE.match(name)
    return int(m.group(1)) if m else None


def restrict(f: Poly, assignment: Mapping[int, object]) -> Poly:
    """Partially substitute variables by constants or variables, re-indexing.

    ``assignment`` maps input variable indices to either scalars or variable
    names.  Input variable i is named ``"x<i>"``; a name matching an
    unassigned input variable substitutes that variable, any other name
    introduces a fresh output variable.  The output ring consists of the
    surviving input variables in index order followed by the fresh names in
    sorted order.

    Raises ValueError on conflicting assignments (a target variable that is
    itself assigned) and on x-names outside the input ring.
    """
    n = f.n
    assignment = dict(assignment)
    for i in assignment:
        if not (0 <= int(i) < n):
            raise ValueError(f"assigned variable index {i} out of range")

    survivors = [i for i in range(n) if i not in assignment]
    fresh: set[str] = set()
    for v in assignment.values():
        if isinstance(v, str):
            j = _input_index(v)
            if j is None:
                fresh.add(v)
            elif j >= n:
                raise ValueError(f"unknown input variable name {v!r}")
            elif j in assignment:
                raise ValueError(
                    f"conflicting assignment: target {v!r} is itself assigned"
                )

    index: dict[object, int] = {i: k for k, i in enumerate(survivors)}
    for k, name in enumerate(sorted(fresh)):
        index[name] = len(survivors) + k
    n_out = len(survivors) + len(fresh)

    if n_out == 0:
        # every variable got a constant; the restriction is an evaluation
        val = evaluate(f, [assignment[i] for i in range(n)])
        return Poly(0, f.field, {(): val})

    images = []
    for i in range(n):
        if i in assignment:
            v = assignment[i]
            if isinstance(v, str):
                j = _input_index(v)
                target = index[j] if j is not None else index[v]
                images.append(variable(target, n_out, f.field))
            else:
                images.append(constant(n_out, v, f.field))
        else:
            images.append(variable(index[i], n_out, f.field))
    return substitute(f, images)


def coefficient_of(f: Poly, fixed: Mapping[int, int]) -> Poly:
    """Coefficient of the monomial with the given exact exponents.

    Collects the terms of f whose exponent agrees with ``fixed`` on every
    listed variable, zeroing those positions.  The result lives in the same
    ring (the extracted variables simply no longer occur).
    """
    for i in fixed:
        if not (0 <= int(i) < f.n):
            raise ValueError(f"variable index {i} out of range")
    terms = {}
    for e, c in f.terms.items():
        if all(e[i] == v for i, v in fixed.items()):
            e2 = tuple(0 if i in fixed else v for i, v in enumerate(e))
            prev = terms.get(e2)
            terms[e2] = c if prev is None else prev + c
    return Poly(f.n, f.field, terms)


# ---------------------------------------------------------------------------
# JSON form: {"n": int, "field": "Q"|"Fp:<p>", "terms": [{"e": [...], "c": "<str>"}]}
# ---------------------------------------------------------------------------


def poly_to_json(f: Poly) -> dict:
    return {
        "n": f.n,
        "field": f.field.name,
        "terms": [
            {"e": list(e), "c": f.field.fmt(c)} for e, c in f.sorted_terms()
        ],
    }


def poly_from_json(data: Mapping) -> Poly:
    from .field import field_from_name

    fld = field_from_name(data["field"])
    terms = {tuple(t["e"]): fld.parse(str(t["c"])) for t in data["terms"]}
    return Poly(int(data["n"]), fld, terms)
