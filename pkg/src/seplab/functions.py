"""Generators for the benchmark input polynomials.

Elementary symmetric polynomials, symbolic determinant and permanent on an
n x n matrix of variables, the multilinear polynomial over F_2 deciding
Hamming weight modulo 3, and seeded dense random polynomials.  Each has a
compact text spec ("esym:2,4", "det:3", ...) used by the command line.
"""

from __future__ import annotations

import itertools
import random
from math import comb

from . import f2lab
from .errors import InfeasibleError
from .field import Field, RATIONALS
from .poly import Poly, monomials_upto
from .seeding import trial_rng

DET_PERM_CAP = 6


def elementary_symmetric(d: int, n: int, field: Field = RATIONALS) -> Poly:
    """Sum of all multilinear monomials of degree d in n variables."""
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    terms = {}
    for subset in itertools.combinations(range(n), d):
        e = [0] * n
        for i in subset:
            e[i] = 1
        terms[tuple(e)] = 1
    f = Poly(n, field, terms)
    assert len(f.terms) == comb(n, d)
    return f


def _permutation_sign(p: tuple[int, ...]) -> int:
    inversions = sum(
        1
        for i in range(len(p))
        for j in range(i + 1, len(p))
        if p[i] > p[j]
    )
    return -1 if inversions % 2 else 1


def _matrix_poly(n: int, field: Field, signed: bool, cap: int) -> Poly:
    if n < 1:
        raise ValueError("matrix side must be positive")
    if n > cap:
        raise InfeasibleError(
            f"{n}x{n} expansion has {n}! terms; the cap is {cap}"
        )
    terms = {}
    for p in itertools.permutations(range(n)):
        e = [0] * (n * n)
        for i in range(n):
            e[i * n + p[i]] = 1
        c = _permutation_sign(p) if signed else 1
        terms[tuple(e)] = c
    return Poly(n * n, field, terms)


def determinant_poly(n: int, field: Field = RATIONALS, cap: int = DET_PERM_CAP) -> Poly:
    """Symbolic n x n determinant; variable x_{ij} sits at index i*n + j."""
    return _matrix_poly(n, field, signed=True, cap=cap)


def permanent_poly(n: int, field: Field = RATIONALS, cap: int = DET_PERM_CAP) -> Poly:
    """Symbolic n x n permanent over the same row-major variables."""
    return _matrix_poly(n, field, signed=False, cap=cap)


def mod3_multilinear(n: int, residue: int = 0) -> Poly:
    """Multilinear polynomial over F_2 testing Hamming weight mod 3.

    Output is 1 exactly on points whose weight is congruent to ``residue``
    modulo 3; the polynomial is produced from the truth table by the subset
    transform, so it is the unique multilinear representative.
    """
    if n < 1:
        raise ValueError("need at least one variable")
    residue %= 3
    table = f2lab.truth_table(n, lambda pt: sum(pt) % 3 == residue)
    return f2lab.truth_table_to_multilinear(table)


def random_dense_poly(n: int, d: int, rng: random.Random, field: Field = RATIONALS) -> Poly:
    """Random polynomial with every monomial of degree <= d present.

    Coefficients are uniform over {-3..3} without 0 (rationals) or uniform
    nonzero (prime fields), so the support is the full truncated monomial
    set and results are reproducible from the generator state.
    """
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    terms = {}
    for e in monomials_upto(n, d):
        if field.p is None:
            c = rng.choice((-3, -2, -1, 1, 2, 3))
        else:
            c = rng.randrange(1, field.p)
        terms[e] = c
    return Poly(n, field, terms)


def from_spec(
    spec: str, field: Field | None = None, mod3_residue: int = 0
) -> Poly:
    """Build a benchmark polynomial from its text spec.

    Formats: "esym:d,n", "det:n", "perm:n", "mod3:n" (or "mod3:n,residue"),
    "rand:n,d,seed".  ``field`` defaults to the rationals (ignored for mod3,
    which is always over F_2).
    """
    try:
        kind, _, arg_text = spec.partition(":")
        args = [int(a) for a in arg_text.split(",")] if arg_text else []
    except ValueError as exc:
        raise ValueError(f"malformed function spec {spec!r}") from exc
    fld = field or RATIONALS
    if kind == "esym" and len(args) == 2:
        return elementary_symmetric(args[0], args[1], fld)
    if kind == "det" and len(args) == 1:
        return determinant_poly(args[0], fld)
    if kind == "perm" and len(args) == 1:
        return permanent_poly(args[0], fld)
    if kind == "mod3" and len(args) in (1, 2):
        if field is not None and field.p != 2:
            raise ValueError("mod3 is defined over F2 only")
        residue = args[1] if len(args) == 2 else mod3_residue
        return mod3_multilinear(args[0], residue)
    if kind == "rand" and len(args) == 3:
        return random_dense_poly(args[0], args[1], trial_rng(args[2], 0), fld)
    raise ValueError(
        f"unrecognized function spec {spec!r} "
        '(formats: "esym:d,n", "det:n", "perm:n", "mod3:n", "rand:n,d,seed")'
    )
