"""Index computations for paths of graph Lagrangians.

A path is given in a fixed chart as a piecewise-polynomial family A(t) of
symmetric n x n matrices with rational coefficients (the path of graphs
{(x, A(t)x)}).  The index of a path relative to a constant reference B is
computed from crossings, the parameters t* with det(A(t*) - B) = 0:

* the crossing form is A'(t*) restricted to ker(A(t*) - B),
* a crossing strictly inside a piece contributes its full signature,
* a crossing at the start or end of the path contributes half,
* a crossing at a junction between pieces contributes half from each side,
  each side using its own derivative,

and the total is weighted by the global calibration constant
``CROSSING_SIGN``.  With these conventions the relative index is additive
under concatenation (the two junction halves reassemble an interior
crossing).

Crossings are handled exactly: determinants of polynomial matrices are
computed by interpolation, roots are isolated with Sturm chains, and linear
algebra at an irrational crossing runs over Q[x]/(g) for a squarefree g
with dynamic splitting of g whenever a zero test requires it.  Signs of
algebraic numbers are decided by shrinking the isolating interval until the
quantity has no root inside, then evaluating at a rational endpoint.

A crossing is rejected (``DegenerateCrossing``) when det(A(t) - B)
vanishes identically on a piece, or when the multiplicity of the root does
not equal the kernel dimension, or when the crossing form is singular.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

__all__ = [
    "ChartMismatch",
    "DegenerateCrossing",
    "NonTransverseEndpoints",
    "CROSSING_SIGN",
    "PathPiece",
    "LagrangianPath",
    "Crossing",
    "CrossingReport",
    "rs_index",
    "rs_index_report",
    "string_index",
    "dual_path",
    "path_from_json",
    "report_to_json",
]

CROSSING_SIGN = -1

Poly = Tuple[Fraction, ...]          # coefficients, constant term first


class ChartMismatch(ValueError):
    """Path data is not a continuous family of symmetric matrices of one size."""


class DegenerateCrossing(ValueError):
    """A crossing is not regular (or a whole piece fails to be transverse)."""


class NonTransverseEndpoints(ValueError):
    """The endpoints of the path are not transverse to each other."""


# ---------------------------------------------------------------------------
# exact polynomial arithmetic
# ---------------------------------------------------------------------------

def _pnorm(cs: Sequence[Fraction]) -> Poly:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _pconst(c) -> Poly:
    return _pnorm([Fraction(c)])


def _padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _pnorm([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                   for i in range(n)])


def _pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def _psub(p: Poly, q: Poly) -> Poly:
    return _padd(p, _pneg(q))


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _pnorm(out)


def _pscale(p: Poly, c: Fraction) -> Poly:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def _peval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p: Poly) -> Poly:
    return _pnorm([p[i] * i for i in range(1, len(p))])


def _pdivmod(p: Poly, q: Poly) -> Tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    dq = len(q) - 1
    lead = q[-1]
    while len(rem) - 1 >= dq and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dq:
            break
        f = rem[-1] / lead
        shift = len(rem) - 1 - dq
        quo[shift] = f
        for i, c in enumerate(q):
            rem[shift + i] -= f * c
        rem.pop()
    return _pnorm(quo), _pnorm(rem)


def _pmonic(p: Poly) -> Poly:
    if not p:
        return ()
    return tuple(c / p[-1] for c in p)


def _pgcd(p: Poly, q: Poly) -> Poly:
    a, b = p, q
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _pxgcd(p: Poly, q: Poly) -> Tuple[Poly, Poly, Poly]:
    """Extended gcd: returns (d, s, t) with s*p + t*q = d."""
    r0, r1 = p, q
    s0, s1 = _pconst(1), ()
    t0, t1 = (), _pconst(1)
    while r1:
        quo, rem = _pdivmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _psub(s0, _pmul(quo, s1))
        t0, t1 = t1, _psub(t0, _pmul(quo, t1))
    return r0, s0, t0


def _yun_squarefree(p: Poly) -> List[Tuple[Poly, int]]:
    """Squarefree decomposition: list of (monic factor, multiplicity)."""
    if len(p) <= 1:
        return []
    dp = _pderiv(p)
    u = _pgcd(p, dp)
    v = _pdivmod(p, u)[0]
    w = _pdivmod(dp, u)[0]
    out = []
    i = 1
    while len(v) > 1:
        diff = _psub(w, _pderiv(v))
        s = _pgcd(v, diff) if diff else _pmonic(v)
        if len(s) > 1:
            out.append((s, i))
        v = _pdivmod(v, s)[0]
        w = _pdivmod(diff, s)[0] if diff else ()
        if not diff:
            w = ()
        i += 1
    return out


def _sturm_chain(p: Poly) -> List[Poly]:
    chain = [p, _pderiv(p)]
    while chain[-1]:
        rem = _pdivmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(_pneg(rem))
    return [c for c in chain if c]


def _sign_changes(chain: List[Poly], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _peval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sturm_count(p: Poly, lo: Fraction, hi: Fraction,
                 chain: Optional[List[Poly]] = None) -> int:
    """Distinct roots of p in (lo, hi]; requires p(lo) != 0."""
    if _peval(p, lo) == 0:
        raise AssertionError("sturm count with root at left endpoint")
    if chain is None:
        chain = _sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def _isolate_roots(f: Poly, lo: Fraction, hi: Fraction) -> List[Tuple[Fraction, Fraction]]:
    """Isolating intervals (l, h] for the roots of squarefree f strictly
    inside (lo, hi); requires f(lo) != 0 and f(hi) != 0."""
    chain = _sturm_chain(f)

    def rec(a: Fraction, b: Fraction) -> List[Tuple[Fraction, Fraction]]:
        k = _sturm_count(f, a, b, chain)
        if k == 0:
            return []
        if k == 1:
            return [(a, b)]
        span = b - a
        split = None
        num, den = 1, 2
        while split is None:
            for j in range(1, den, 2):
                cand = a + span * Fraction(j, den)
                if _peval(f, cand) != 0:
                    split = cand
                    break
            den *= 2
        return rec(a, split) + rec(split, b)

    return rec(lo, hi)


# ---------------------------------------------------------------------------
# determinants and rational-point linear algebra
# ---------------------------------------------------------------------------

def _det_q(M: List[List[Fraction]]) -> Fraction:
    n = len(M)
    A = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] * inv
                for j in range(c, n):
                    A[r][j] -= f * A[c][j]
    return det


def _det_poly(M: List[List[Poly]]) -> Poly:
    n = len(M)
    if n == 0:
        return _pconst(1)
    bound = 0
    for row in M:
        degs = [len(e) - 1 for e in row if e]
        if not degs:
            return ()
        bound += max(degs)
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = [_det_q([[_peval(e, x) for e in row] for row in M]) for x in xs]
    # Newton divided differences
    coef = ys[:]
    for level in range(1, len(xs)):
        for i in range(len(xs) - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    poly: Poly = ()
    basis: Poly = _pconst(1)
    for i, c in enumerate(coef):
        poly = _padd(poly, _pscale(basis, c))
        basis = _pmul(basis, _pnorm([-xs[i], Fraction(1)]))
    return poly


def _kernel_q(M: List[List[Fraction]]) -> List[List[Fraction]]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    R = [row[:] for row in M]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((rr for rr in range(r, rows) if R[rr][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [e * inv for e in R[r]]
        for rr in range(rows):
            if rr != r and R[rr][c] != 0:
                f = R[rr][c]
                R[rr] = [e - f * R[r][j] for j, e in enumerate(R[rr])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    for fc in range(cols):
        if fc in piv_cols:
            continue
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for k, pc in enumerate(piv_cols):
            v[pc] = -R[k][fc]
        basis.append(v)
    return basis


def _signature_q(G: List[List[Fraction]]) -> int:
    k = len(G)
    A = [row[:] for row in G]
    sig = 0
    for i in range(k):
        if A[i][i] == 0:
            j = next((jj for jj in range(i + 1, k) if A[i][jj] != 0), None)
            if j is None:
                raise DegenerateCrossing("singular crossing form")
            for s in (1, -1):
                if 2 * s * A[i][j] + A[j][j] != 0:
                    for col in range(k):
                        A[i][col] += s * A[j][col]
                    for row in range(k):
                        A[row][i] += s * A[row][j]
                    break
        d = A[i][i]
        sig += 1 if d > 0 else -1
        # congruence clearing of row/column i below the pivot
        factors = {r: A[r][i] / d for r in range(i + 1, k) if A[r][i] != 0}
        for r, f in factors.items():
            for col in range(i, k):
                A[r][col] -= f * A[i][col]
        for r in range(i + 1, k):
            A[i][r] = Fraction(0)
            A[r][i] = Fraction(0)
    return sig


# ---------------------------------------------------------------------------
# linear algebra over Q[x]/(g) at an isolated root
# ---------------------------------------------------------------------------

class _RootCtx:
    """Arithmetic at one real root t* of a squarefree polynomial g, located
    in the isolating interval (lo, hi].  Zero tests may replace g by the
    factor still vanishing at t*; sign queries shrink the interval."""

    def __init__(self, g: Poly, lo: Fraction, hi: Fraction):
        self.g = _pmonic(g)
        self.lo = lo
        self.hi = hi

    def reduce(self, h: Poly) -> Poly:
        return _pdivmod(h, self.g)[1] if len(h) >= len(self.g) else h

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(_pmul(a, b))

    def sub(self, a: Poly, b: Poly) -> Poly:
        return _psub(a, b)

    def neg(self, a: Poly) -> Poly:
        return _pneg(a)

    def is_zero(self, h: Poly) -> bool:
        h = self.reduce(h)
        if not h:
            return True
        if len(self.g) == 1:
            return False
        c = _pgcd(h, self.g)
        if len(c) == 1:
            return False
        # does t* lie among the roots of c?  c divides g, so it has 0 or 1
        # roots in the isolating interval.
        if _sturm_count(c, self.lo, self.hi) == 1:
            self.g = c
            return True
        self.g = _pdivmod(self.g, c)[0]
        return False

    def inv(self, h: Poly) -> Poly:
        h = self.reduce(h)
        d, s, _t = _pxgcd(h, self.g)
        if len(d) != 1:
            raise AssertionError("inverting a zero divisor without a split")
        return self.reduce(_pscale(s, 1 / d[0]))

    def _refine(self) -> None:
        mid = (self.lo + self.hi) / 2
        if _peval(self.g, mid) == 0:
            self.lo = (self.lo + mid) / 2
            return
        if _sturm_count(self.g, self.lo, mid) == 1:
            self.hi = mid
        else:
            self.lo = mid

    def sign_at(self, h: Poly) -> int:
        if self.is_zero(h):
            return 0
        h = self.reduce(h)
        while True:
            if _peval(h, self.lo) != 0 and _sturm_count(h, self.lo, self.hi) == 0:
                v = _peval(h, self.hi)
                return 1 if v > 0 else -1
            self._refine()


def _kernel_ctx(ctx: _RootCtx, M: List[List[Poly]]) -> List[List[Poly]]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    R = [[ctx.reduce(e) for e in row] for row in M]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((rr for rr in range(r, rows) if not ctx.is_zero(R[rr][c])), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = ctx.inv(R[r][c])
        R[r] = [ctx.mul(inv, e) for e in R[r]]
        for rr in range(rows):
            if rr != r and not ctx.is_zero(R[rr][c]):
                f = R[rr][c]
                R[rr] = [ctx.sub(e, ctx.mul(f, R[r][j]))
                         for j, e in enumerate(R[rr])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    one = _pconst(1)
    for fc in range(cols):
        if fc in piv_cols:
            continue
        v: List[Poly] = [()] * cols
        v[fc] = one
        for k, pc in enumerate(piv_cols):
            v[pc] = ctx.neg(R[k][fc])
        basis.append(v)
    return basis


def _signature_ctx(ctx: _RootCtx, G: List[List[Poly]]) -> int:
    k = len(G)
    A = [[ctx.reduce(e) for e in row] for row in G]
    sig = 0
    for i in range(k):
        if ctx.is_zero(A[i][i]):
            j = next((jj for jj in range(i + 1, k) if not ctx.is_zero(A[i][jj])), None)
            if j is None:
                raise DegenerateCrossing("singular crossing form")
            for s in (1, -1):
                cand = _padd(_padd(A[i][i], _pscale(A[i][j], Fraction(2 * s))), A[j][j])
                if not ctx.is_zero(cand):
                    sc = _pconst(s)
                    for col in range(k):
                        A[i][col] = _padd(A[i][col], ctx.mul(sc, A[j][col]))
                    for row in range(k):
                        A[row][i] = _padd(A[row][i], ctx.mul(sc, A[row][j]))
                    break
        d = A[i][i]
        sg = ctx.sign_at(d)
        if sg == 0:
            raise DegenerateCrossing("singular crossing form")
        sig += sg
        dinv = ctx.inv(d)
        factors = {}
        for r in range(i + 1, k):
            if not ctx.is_zero(A[r][i]):
                factors[r] = ctx.mul(A[r][i], dinv)
        for r, f in factors.items():
            for col in range(i, k):
                A[r][col] = ctx.sub(A[r][col], ctx.mul(f, A[i][col]))
        for r in range(i + 1, k):
            A[r][i] = ()
            A[i][r] = ()
    return sig


# ---------------------------------------------------------------------------
# path data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathPiece:
    start: Fraction
    end: Fraction
    matrix: Tuple[Tuple[Poly, ...], ...]     # symmetric n x n, polynomial entries

    def derivative(self) -> Tuple[Tuple[Poly, ...], ...]:
        return tuple(tuple(_pderiv(e) for e in row) for row in self.matrix)

    def value(self, t: Fraction) -> List[List[Fraction]]:
        return [[_peval(e, t) for e in row] for row in self.matrix]


def _as_poly(entry) -> Poly:
    if isinstance(entry, tuple):
        return _pnorm([Fraction(c) for c in entry])
    return _pnorm([Fraction(c) for c in list(entry)])


def make_piece(start, end, matrix) -> PathPiece:
    a, b = Fraction(start), Fraction(end)
    if not a < b:
        raise ValueError("piece interval must have positive length")
    rows = tuple(tuple(_as_poly(e) for e in row) for row in matrix)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ChartMismatch("matrix is not square")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise ChartMismatch("matrix is not symmetric")
    return PathPiece(a, b, rows)


@dataclass(frozen=True)
class LagrangianPath:
    pieces: Tuple[PathPiece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("path needs at least one piece")
        n = self.n
        for p in self.pieces:
            if len(p.matrix) != n:
                raise ChartMismatch("pieces have different matrix sizes")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.end != right.start:
                raise ChartMismatch("pieces are not contiguous")
            if left.value(left.end) != right.value(right.start):
                raise ChartMismatch("path is discontinuous at a junction")

    @property
    def n(self) -> int:
        return len(self.pieces[0].matrix)

    @property
    def start(self) -> Fraction:
        return self.pieces[0].start

    @property
    def end(self) -> Fraction:
        return self.pieces[-1].end

    def value(self, t: Fraction) -> List[List[Fraction]]:
        for p in self.pieces:
            if p.start <= t <= p.end:
                return p.value(t)
        raise ValueError("parameter outside the path domain")


def make_path(pieces) -> LagrangianPath:
    return LagrangianPath(tuple(
        p if isinstance(p, PathPiece) else make_piece(*p) for p in pieces))


def dual_path(path: LagrangianPath) -> LagrangianPath:
    """The path t -> A(-t) on the mirrored domain."""
    flipped = []
    for p in reversed(path.pieces):
        matrix = tuple(tuple(_pnorm([c * ((-1) ** k) for k, c in enumerate(e)])
                             for e in row) for row in p.matrix)
        flipped.append(PathPiece(-p.end, -p.start, matrix))
    return LagrangianPath(tuple(flipped))


# ---------------------------------------------------------------------------
# crossings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    lower: Fraction
    upper: Fraction          # isolating interval; lower == upper when rational
    location: str            # "start" | "interior" | "junction" | "end"
    kernel_dimension: int
    parts: Tuple[Tuple[Fraction, int], ...]   # (weight, signature) per side

    @property
    def weighted(self) -> Fraction:
        return sum((w * s for w, s in self.parts), Fraction(0))


@dataclass(frozen=True)
class CrossingReport:
    n: int
    crossings: Tuple[Crossing, ...]
    total: Fraction


def _reference_matrix(reference, n: int) -> List[List[Fraction]]:
    B = [[Fraction(e) for e in row] for row in reference]
    if len(B) != n or any(len(row) != n for row in B):
        raise ChartMismatch("reference matrix size does not match the path")
    for i in range(n):
        for j in range(i + 1, n):
            if B[i][j] != B[j][i]:
                raise ChartMismatch("reference matrix is not symmetric")
    return B


def _rational_crossing(piece: PathPiece, B: List[List[Fraction]],
                       t0: Fraction) -> Tuple[int, int]:
    """(kernel dimension, signature of the crossing form) at a rational t0."""
    n = len(piece.matrix)
    M = [[_peval(piece.matrix[i][j], t0) - B[i][j] for j in range(n)]
         for i in range(n)]
    kernel = _kernel_q(M)
    k = len(kernel)
    if k == 0:
        raise AssertionError("crossing with trivial kernel")
    Ap = [[_peval(_pderiv(piece.matrix[i][j]), t0) for j in range(n)]
          for i in range(n)]
    G = [[sum(kernel[r][u] * Ap[u][v] * kernel[s][v]
              for u in range(n) for v in range(n))
          for s in range(k)] for r in range(k)]
    return k, _signature_q(G)


def _root_multiplicity(d: Poly, t0: Fraction) -> int:
    m = 0
    lin = _pnorm([-t0, Fraction(1)])
    while d and _peval(d, t0) == 0:
        d = _pdivmod(d, lin)[0]
        m += 1
    return m


def _irrational_crossing(piece: PathPiece, Bpoly: List[List[Poly]],
                         g: Poly, lo: Fraction, hi: Fraction) -> Tuple[int, int]:
    n = len(piece.matrix)
    ctx = _RootCtx(g, lo, hi)
    M = [[ctx.reduce(_psub(piece.matrix[i][j], Bpoly[i][j])) for j in range(n)]
         for i in range(n)]
    kernel = _kernel_ctx(ctx, M)
    k = len(kernel)
    if k == 0:
        raise AssertionError("crossing with trivial kernel")
    Ap = [[ctx.reduce(_pderiv(piece.matrix[i][j])) for j in range(n)]
          for i in range(n)]
    G = []
    for r in range(k):
        row = []
        for s in range(k):
            acc: Poly = ()
            for u in range(n):
                if not kernel[r][u]:
                    continue
                for v in range(n):
                    if not kernel[s][v] or not Ap[u][v]:
                        continue
                    acc = _padd(acc, ctx.mul(ctx.mul(kernel[r][u], Ap[u][v]),
                                             kernel[s][v]))
            row.append(acc)
        G.append(row)
    return k, _signature_ctx(ctx, G)


def rs_index_report(reference, path: LagrangianPath) -> CrossingReport:
    n = path.n
    B = _reference_matrix(reference, n)
    Bpoly = [[_pconst(B[i][j]) for j in range(n)] for i in range(n)]

    # per-boundary-point contributions keyed by parameter value
    boundary: Dict[Fraction, List[Tuple[int, int, int]]] = {}
    crossings: List[Crossing] = []

    for p_idx, piece in enumerate(path.pieces):
        P = [[_psub(piece.matrix[i][j], Bpoly[i][j]) for j in range(n)]
             for i in range(n)]
        d = _det_poly(P)
        if not d:
            raise DegenerateCrossing(
                "determinant vanishes identically on a piece")
        for t0 in (piece.start, piece.end):
            if _peval(d, t0) == 0:
                m = _root_multiplicity(d, t0)
                k, sig = _rational_crossing(piece, B, t0)
                if m != k:
                    raise DegenerateCrossing(
                        f"root multiplicity {m} != kernel dimension {k} at t={t0}")
                boundary.setdefault(t0, []).append((p_idx, k, sig))
        for factor, mult in _yun_squarefree(d):
            f = factor
            for t0 in (piece.start, piece.end):
                lin = _pnorm([-t0, Fraction(1)])
                if _peval(f, t0) == 0:
                    f = _pdivmod(f, lin)[0]
            if len(f) <= 1:
                continue
            for lo, hi in _isolate_roots(f, piece.start, piece.end):
                k, sig = _irrational_crossing(piece, Bpoly, f, lo, hi)
                if mult != k:
                    raise DegenerateCrossing(
                        f"root multiplicity {mult} != kernel dimension {k}")
                crossings.append(Crossing(lo, hi, "interior", k,
                                          ((Fraction(1), sig),)))

    half = Fraction(1, 2)
    for t0, contribs in boundary.items():
        if t0 == path.start:
            (_p, k, sig), = contribs
            crossings.append(Crossing(t0, t0, "start", k, ((half, sig),)))
        elif t0 == path.end:
            (_p, k, sig), = contribs
            crossings.append(Crossing(t0, t0, "end", k, ((half, sig),)))
        else:
            ks = {k for _p, k, _s in contribs}
            if len(contribs) != 2 or len(ks) != 1:
                raise DegenerateCrossing(
                    f"inconsistent junction crossing at t={t0}")
            parts = tuple((half, sig) for _p, _k, sig in
                          sorted(contribs, key=lambda c: c[0]))
            crossings.append(Crossing(t0, t0, "junction", ks.pop(), parts))

    crossings.sort(key=lambda c: (c.lower, c.upper))
    total = CROSSING_SIGN * sum((c.weighted for c in crossings), Fraction(0))
    return CrossingReport(n, tuple(crossings), total)


def rs_index(reference, path: LagrangianPath) -> Fraction:
    return rs_index_report(reference, path).total


def string_index(path: LagrangianPath) -> int:
    """n/2 minus the index of the path relative to its own starting point.
    Requires the endpoints to be transverse to each other."""
    n = path.n
    A0 = path.pieces[0].value(path.start)
    A1 = path.pieces[-1].value(path.end)
    diff = [[A1[i][j] - A0[i][j] for j in range(n)] for i in range(n)]
    if _det_q(diff) == 0:
        raise NonTransverseEndpoints(
            "endpoint Lagrangians are not transverse")
    total = Fraction(n, 2) - rs_index(A0, path)
    if total.denominator != 1:
        raise AssertionError("index of a transverse path must be an integer")
    return int(total)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def path_from_json(obj) -> LagrangianPath:
    pieces = []
    for p in obj["pieces"]:
        if "t0" in p:
            a, b = Fraction(str(p["t0"])), Fraction(str(p["t1"]))
        else:
            a, b = (Fraction(str(v)) for v in p["interval"])
        raw = p["A"] if "A" in p else p["matrix"]
        matrix = [[[Fraction(str(c)) for c in entry] for entry in row]
                  for row in raw]
        pieces.append(make_piece(a, b, matrix))
    return make_path(pieces)


def report_to_json(report: CrossingReport) -> dict:
    return {
        "n": report.n,
        "rs_index": str(report.total),
        "crossings": [
            {
                "interval": [str(c.lower), str(c.upper)],
                "location": c.location,
                "kernel_dimension": c.kernel_dimension,
                "parts": [[str(w), s] for w, s in c.parts],
            }
            for c in report.crossings
        ],
    }
