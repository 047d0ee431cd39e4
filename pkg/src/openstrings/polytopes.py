"""Face combinatorics of the associativity and map polytopes.

Faces are represented purely combinatorially:

* ``K`` (associativity polytope, dimension l-2): rooted planar trees with l
  ordered leaves and internal vertices of arity >= 2.  Encoding: a leaf is
  ``0``; an internal vertex is the tuple of its children.

* ``J`` (map polytope, dimension l-1): painted planar trees.  Encoding:
  ``("p", *children)`` for painted vertices (arity >= 2, children painted or
  front), ``("f", *children)`` for front vertices (arity >= 1, children
  unpainted subtrees or leaves; every root-leaf path crosses exactly one
  front vertex), ``("u", *children)`` for unpainted vertices (arity >= 2),
  and ``0`` for a leaf.

Dimension bookkeeping: painted/unpainted/plain vertices of arity a carry a
factor of dimension a-2; front vertices of arity a carry a factor of
dimension a-1.  A face is a product of these factors.

Orientation convention (fixed here once, everything else is relative): a
face is oriented by the wedge of its positive-dimensional factor
orientations in preorder (root-first, children left to right).  The signed
cellular boundary applies the facet parity rules

* plain split, sign +1 iff  l1*l2 + i*(l2-1)  is odd,
* front lower move, sign +1 iff  l1*l2 + i*(l2-1)  is even,
* front upper move, sign +1 iff  sum_j (q-j)*(k_j-1)  is even,

with a Leibniz prefix over earlier factors and a Koszul sign reordering the
replaced factors into the new face's preorder.  ``boundary_map_consistency``
verifies d(d(face)) = 0 over the integers for every face, which pins all
three parity rules against each other.

Canonical order: faces are sorted lexicographically by their serialization
(see :func:`serialize_face`); the degenerate cases K_0/K_1 (points) and
J_0/J_1 (an interval) use explicit sentinel faces.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iproduct
from typing import Dict, Iterable, List, Optional, Tuple

__all__ = [
    "UnsupportedL",
    "FacetFactorization",
    "enumerate_faces",
    "face_dimension",
    "serialize_face",
    "f_vector",
    "facets_with_signs",
    "signed_boundary",
    "boundary_map_consistency",
    "assoc_facet_parity",
    "assoc_facet_sign",
    "multi_lower_sign",
    "multi_upper_sign",
]

_BUDGET_ENV = "OPENSTRINGS_MAX_L"
_DEFAULT_MAX = {"K": 10, "J": 8}

# interval sentinels for the degenerate J_0 = J_1 case
_INT_CELL = ("interval", "cell")
_INT_END0 = ("interval", "end0")
_INT_END1 = ("interval", "end1")


class UnsupportedL(ValueError):
    """l exceeds the configured enumeration budget."""


@dataclass(frozen=True)
class FacetFactorization:
    """A codimension-one face with its product decomposition and the sign
    comparing the induced boundary orientation with the product orientation."""

    kind: str                 # "assoc" | "multi_lower" | "multi_upper" | "multi_end"
    params: tuple
    orientation_sign: int
    face: str                 # serialized facet


# ---------------------------------------------------------------------------
# parity rules
# ---------------------------------------------------------------------------

def assoc_facet_parity(l1: int, l2: int, i: int) -> int:
    return (l1 * l2 + i * (l2 - 1)) % 2


def assoc_facet_sign(l1: int, l2: int, i: int) -> int:
    """Orientations coincide iff the parity is odd."""
    return 1 if assoc_facet_parity(l1, l2, i) == 1 else -1


def multi_lower_sign(l1: int, l2: int, i: int) -> int:
    """Orientations coincide iff the parity is even."""
    return 1 if assoc_facet_parity(l1, l2, i) == 0 else -1


def multi_upper_sign(parts: Tuple[int, ...]) -> int:
    q = len(parts)
    parity = sum((q - j) * (parts[j - 1] - 1) for j in range(1, q + 1)) % 2
    return 1 if parity == 0 else -1


# ---------------------------------------------------------------------------
# tree helpers
# ---------------------------------------------------------------------------

def _is_leaf(node) -> bool:
    return node == 0


def _kind(node) -> str:
    return node[0] if isinstance(node[0], str) else "k"


def _children(node) -> tuple:
    return node[1:] if isinstance(node[0], str) else node


def _mk(kind: str, children: Iterable) -> tuple:
    ch = tuple(children)
    return ch if kind == "k" else (kind,) + ch


def _factor_dim(node) -> int:
    ar = len(_children(node))
    return ar - 1 if _kind(node) == "f" else ar - 2


def face_dimension(face) -> int:
    """Total dimension of a face (sum of its factor dimensions)."""
    if face == _INT_CELL:
        return 1
    if face in (_INT_END0, _INT_END1):
        return 0
    if _is_leaf(face):
        return 0
    return _factor_dim(face) + sum(
        face_dimension(c) for c in _children(face) if not _is_leaf(c))


def serialize_face(face) -> str:
    """Stable string form: preorder with parentheses, leaves as 0, painted /
    front / unpainted vertices tagged p / f / u."""
    if face == _INT_CELL:
        return "[01]"
    if face == _INT_END0:
        return "[0]"
    if face == _INT_END1:
        return "[1]"
    if _is_leaf(face):
        return "0"
    body = "".join(serialize_face(c) for c in _children(face))
    k = _kind(face)
    return f"({body})" if k == "k" else f"{k}({body})"


def _get(face, path: Tuple[int, ...]):
    node = face
    for idx in path:
        node = _children(node)[idx]
    return node


def _replace(face, path: Tuple[int, ...], new_node):
    if not path:
        return new_node
    k = _kind(face)
    ch = list(_children(face))
    ch[path[0]] = _replace(ch[path[0]], path[1:], new_node)
    return _mk(k, ch)


def _preorder_internal(face, path=()):
    if _is_leaf(face):
        return
    yield path, face
    for idx, child in enumerate(_children(face)):
        yield from _preorder_internal(child, path + (idx,))


def _positive_factors(face) -> List[Tuple[Tuple[int, ...], int]]:
    return [(p, _factor_dim(n)) for p, n in _preorder_internal(face)
            if _factor_dim(n) >= 1]


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _plain_trees(l: int, kind: str) -> tuple:
    """All planar trees with l leaves and internal arity >= 2 ('k' or 'u')."""
    if l == 1:
        return (0,)
    out = []
    for m in range(2, l + 1):
        for comp in _compositions(l, m):
            for combo in _iproduct(*(_plain_trees(k, kind) for k in comp)):
                out.append(_mk(kind, combo))
    return tuple(out)


@lru_cache(maxsize=None)
def _painted_trees(l: int) -> tuple:
    out = []
    for m in range(1, l + 1):                      # front-rooted
        for comp in _compositions(l, m):
            for combo in _iproduct(*(_plain_trees(k, "u") for k in comp)):
                out.append(("f",) + combo)
    for m in range(2, l + 1):                      # painted-rooted
        for comp in _compositions(l, m):
            for combo in _iproduct(*(_painted_trees(k) for k in comp)):
                out.append(("p",) + combo)
    return tuple(out)


def _max_l(polytope: str) -> int:
    env = os.environ.get(_BUDGET_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return _DEFAULT_MAX[polytope]


def _check_polytope(polytope: str) -> str:
    p = polytope.upper()
    if p not in ("K", "J"):
        raise ValueError(f"unknown polytope family {polytope!r} (expected 'K' or 'J')")
    return p


def enumerate_faces(polytope: str, l: int, dim: Optional[int] = None) -> list:
    """All faces (top cell included), or only those of the given dimension,
    sorted by serialization.  Raises UnsupportedL above the enumeration
    budget (env var OPENSTRINGS_MAX_L overrides the default)."""
    p = _check_polytope(polytope)
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l > _max_l(p):
        raise UnsupportedL(
            f"{p}_{l} exceeds the enumeration budget (max {_max_l(p)}; "
            f"set {_BUDGET_ENV} to raise it)")
    if p == "K":
        faces = [0] if l <= 1 else list(_plain_trees(l, "k"))
    else:
        faces = ([_INT_END0, _INT_END1, _INT_CELL] if l <= 1
                 else list(_painted_trees(l)))
    if dim is not None:
        faces = [f for f in faces if face_dimension(f) == dim]
    faces.sort(key=serialize_face)
    return faces


def f_vector(polytope: str, l: int) -> List[int]:
    """Counts of proper faces by dimension 0 .. d-1."""
    p = _check_polytope(polytope)
    top = (l - 2 if p == "K" else l - 1) if l >= 2 else (0 if p == "K" else 1)
    counts = [0] * max(top, 0)
    for face in enumerate_faces(p, l):
        d = face_dimension(face)
        if d < top:
            counts[d] += 1
    return counts


# ---------------------------------------------------------------------------
# boundary moves
# ---------------------------------------------------------------------------

def _moves_at(face, vpath):
    """All codimension-one degenerations of the factor at ``vpath``.

    Yields (new_face, lemma_sign, lemma_factors, path_map, tag) where
    lemma_factors lists the replacing factor vertices (path, dim) in the
    product order of the corresponding parity rule, and path_map rewrites
    the paths of untouched vertices below vpath.
    """
    node = _get(face, vpath)
    kd = _kind(node)
    ch = _children(node)
    m = len(ch)

    def remap_split(i0: int, l2: int):
        # children [i0, i0+l2) move one level down to slot i0
        def pm(path):
            if len(path) <= len(vpath) or path[:len(vpath)] != vpath:
                return path
            c = path[len(vpath)]
            rest = path[len(vpath) + 1:]
            if c < i0:
                return path
            if c < i0 + l2:
                return vpath + (i0, c - i0) + rest
            return vpath + (c - l2 + 1,) + rest
        return pm

    if kd in ("k", "p", "u") and m >= 3:
        for l1 in range(2, m):
            l2 = m + 1 - l1
            for i in range(1, l1 + 1):
                i0 = i - 1
                inner = _mk(kd, ch[i0:i0 + l2])
                outer = _mk(kd, ch[:i0] + (inner,) + ch[i0 + l2:])
                sign = assoc_facet_sign(l1, l2, i)
                lemma = [(vpath, l1 - 2), (vpath + (i0,), l2 - 2)]
                yield (_replace(face, vpath, outer), sign, lemma,
                       remap_split(i0, l2), ("split", l1, l2, i))

    if kd == "f" and m >= 2:
        for l2 in range(2, m + 1):
            l1 = m + 1 - l2
            for i in range(1, l1 + 1):
                i0 = i - 1
                inner = _mk("u", ch[i0:i0 + l2])
                outer = _mk("f", ch[:i0] + (inner,) + ch[i0 + l2:])
                sign = multi_lower_sign(l1, l2, i)
                lemma = [(vpath, l1 - 1), (vpath + (i0,), l2 - 2)]
                yield (_replace(face, vpath, outer), sign, lemma,
                       remap_split(i0, l2), ("lower", l1, l2, i))
        for q in range(2, m + 1):
            for parts in _compositions(m, q):
                starts = []
                pos = 0
                for k in parts:
                    starts.append(pos)
                    pos += k
                fronts = tuple(
                    _mk("f", ch[starts[j]:starts[j] + parts[j]])
                    for j in range(q))
                newnode = _mk("p", fronts)
                sign = multi_upper_sign(parts)
                lemma = [(vpath, q - 2)] + [
                    (vpath + (j,), parts[j] - 1) for j in range(q)]

                def pm(path, starts=starts, parts=parts):
                    if len(path) <= len(vpath) or path[:len(vpath)] != vpath:
                        return path
                    c = path[len(vpath)]
                    rest = path[len(vpath) + 1:]
                    for j in range(len(parts) - 1, -1, -1):
                        if c >= starts[j]:
                            return vpath + (j, c - starts[j]) + rest
                    raise AssertionError("unmapped child")
                yield (_replace(face, vpath, newnode), sign, lemma,
                       pm, ("upper", parts))


def _koszul_sign(order_a: List[Tuple[tuple, int]],
                 order_b: List[Tuple[tuple, int]]) -> int:
    """Sign of the graded permutation taking factor list a to factor list b
    (same keys, possibly different order); dims attached to the keys."""
    pos_b = {key: k for k, (key, _) in enumerate(order_b)}
    exponent = 0
    n = len(order_a)
    for x in range(n):
        kx, dx = order_a[x]
        for y in range(x + 1, n):
            ky, dy = order_a[y]
            if pos_b[kx] > pos_b[ky]:
                exponent += dx * dy
    return -1 if exponent % 2 else 1


def signed_boundary(face) -> Dict[tuple, int]:
    """The signed cellular boundary of a face as a face -> coefficient map."""
    if face == _INT_CELL:
        return {_INT_END1: 1, _INT_END0: -1}
    if face in (_INT_END0, _INT_END1) or _is_leaf(face):
        return {}
    out: Dict[tuple, int] = {}
    factors = _positive_factors(face)
    for idx, (vpath, _vdim) in enumerate(factors):
        prefix = sum(d for _, d in factors[:idx]) % 2
        for new_face, lemma_sign, lemma, path_map, _tag in _moves_at(face, vpath):
            prod_order = [(p, d) for p, d in factors[:idx]]
            prod_order += [(p, d) for p, d in lemma if d >= 1]
            prod_order += [(path_map(p), d) for p, d in factors[idx + 1:]]
            canon_order = _positive_factors(new_face)
            sign = (-1 if prefix else 1) * lemma_sign
            sign *= _koszul_sign(prod_order, canon_order)
            out[new_face] = out.get(new_face, 0) + sign
    return {f: c for f, c in out.items() if c != 0}


def facets_with_signs(polytope: str, l: int) -> List[FacetFactorization]:
    """Codimension-one faces of the whole polytope with their product
    decompositions and orientation signs from the parity rules."""
    p = _check_polytope(polytope)
    if l < 2:
        if p == "J":
            return [FacetFactorization("multi_end", (0,), -1, serialize_face(_INT_END0)),
                    FacetFactorization("multi_end", (1,), 1, serialize_face(_INT_END1))]
        return []
    out = []
    if p == "K":
        top = _mk("k", (0,) * l)
        for new_face, sign, _lemma, _pm, tag in _moves_at(top, ()):
            _, l1, l2, i = tag
            out.append(FacetFactorization("assoc", (l1, l2, i), sign,
                                          serialize_face(new_face)))
    else:
        top = _mk("f", (0,) * l)
        for new_face, sign, _lemma, _pm, tag in _moves_at(top, ()):
            if tag[0] == "lower":
                _, l1, l2, i = tag
                if l1 == 1:
                    out.append(FacetFactorization("multi_end", (0,), sign,
                                                  serialize_face(new_face)))
                else:
                    out.append(FacetFactorization("multi_lower", (l1, l2, i), sign,
                                                  serialize_face(new_face)))
            else:
                parts = tag[1]
                if all(k == 1 for k in parts):
                    out.append(FacetFactorization("multi_end", (1,), sign,
                                                  serialize_face(new_face)))
                else:
                    out.append(FacetFactorization("multi_upper",
                                                  (len(parts), parts), sign,
                                                  serialize_face(new_face)))
    out.sort(key=lambda ff: (ff.kind, ff.params))
    return out


def boundary_map_consistency(polytope: str, l: int) -> dict:
    """Compute the signed boundary of every face and verify d(d(face)) = 0
    over the integers."""
    p = _check_polytope(polytope)
    faces = enumerate_faces(p, l)
    bad = []
    entries = 0
    for face in faces:
        square: Dict[tuple, int] = {}
        b = signed_boundary(face)
        entries += len(b)
        for g, cg in b.items():
            for h, ch in signed_boundary(g).items():
                square[h] = square.get(h, 0) + cg * ch
        residual = {h: c for h, c in square.items() if c != 0}
        if residual:
            bad.append((serialize_face(face),
                        {serialize_face(h): c for h, c in residual.items()}))
    return {
        "polytope": p,
        "l": l,
        "faces": len(faces),
        "boundary_entries": entries,
        "dd_zero": not bad,
        "failures": bad,
    }
