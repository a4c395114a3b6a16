"""Graded differential-polynomial ring over a jet-space fiber geometry.

Everything downstream leans on the conventions fixed here:

* Three families of jet variables: even fiber jets q^alpha_sigma, odd fiber
  jets b_{alpha,sigma} (anticommuting, squares vanish), and even covector-slot
  jets p^(j)_{alpha,sigma}.  Slot variables have zero partial derivative with
  respect to every q-jet; total derivatives shift all three families alike.
* Monomials are kept canonical: rational coefficient, base-variable powers,
  an even multiset, and a strictly sorted odd word.  The sign of the sorting
  permutation is absorbed into the coefficient; a repeated odd factor kills
  the monomial.
* The global odd order is (fiber, |sigma|, sigma lexicographically by
  dimension counts), padded with zeros, so it is stable under adding base
  dimensions.
* Left partial with respect to an odd factor at 1-based position r of a
  length-k word carries (-1)^(r-1); the right partial carries (-1)^(k-r).

Coefficients are exact rationals and base-variable dependence is polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

QKIND, PKIND, BKIND = 0, 1, 2
LEFT, RIGHT = "left", "right"

_KIND_TAG = {QKIND: "q", PKIND: "p", BKIND: "b"}


class EngineError(Exception):
    """Base error for the engine."""


class GeometryMismatch(EngineError):
    """Operands built over different geometries."""


class DomainError(EngineError):
    """Operation applied outside its stated domain."""


@dataclass(frozen=True)
class Geometry:
    """Shape of the jet space: n base dimensions, m fiber components, s covector slots."""

    n: int
    m: int
    s: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("geometry needs at least one base dimension")
        if self.m < 1:
            raise DomainError("geometry needs at least one fiber component")
        if self.s < 0:
            raise DomainError("covector slot count cannot be negative")


class MultiIndex(NamedTuple):
    """Sparse multi-index: ((dim, count), ...) with dims ascending, counts >= 1."""

    counts: tuple[tuple[int, int], ...] = ()

    @property
    def order(self) -> int:
        return sum(c for _, c in self.counts)

    def count(self, dim: int) -> int:
        for d, c in self.counts:
            if d == dim:
                return c
        return 0

    def plus(self, dim: int) -> "MultiIndex":
        out = dict(self.counts)
        out[dim] = out.get(dim, 0) + 1
        return MultiIndex(tuple(sorted(out.items())))

    def minus(self, dim: int) -> "MultiIndex":
        out = dict(self.counts)
        if out.get(dim, 0) < 1:
            raise DomainError(f"multi-index has no derivative in dimension {dim}")
        out[dim] -= 1
        if out[dim] == 0:
            del out[dim]
        return MultiIndex(tuple(sorted(out.items())))

    def add(self, other: "MultiIndex") -> "MultiIndex":
        out = dict(self.counts)
        for d, c in other.counts:
            out[d] = out.get(d, 0) + c
        return MultiIndex(tuple(sorted(out.items())))

    def dense(self, n: int) -> tuple[int, ...]:
        row = [0] * n
        for d, c in self.counts:
            row[d - 1] = c
        return tuple(row)

    def dims(self) -> Iterator[int]:
        """Each dimension repeated by its count, ascending."""
        for d, c in self.counts:
            for _ in range(c):
                yield d


def midx(*dims: int) -> MultiIndex:
    """Multi-index from repeated dimension numbers: midx(1,1,2) = d/dx1 d/dx1 d/dx2."""
    out: dict[int, int] = {}
    for d in dims:
        out[d] = out.get(d, 0) + 1
    return MultiIndex(tuple(sorted(out.items())))


class JetVariable(NamedTuple):
    kind: int
    fiber: int
    index: MultiIndex
    slot: int = 0  # covector slot, 0 for fiber variables

    def shifted(self, dim: int) -> "JetVariable":
        return self._replace(index=self.index.plus(dim))


def qvar(fiber: int = 1, *dims: int) -> JetVariable:
    return JetVariable(QKIND, fiber, midx(*dims))


def bvar(fiber: int = 1, *dims: int) -> JetVariable:
    return JetVariable(BKIND, fiber, midx(*dims))


def pvar(slot: int, fiber: int = 1, *dims: int) -> JetVariable:
    return JetVariable(PKIND, fiber, midx(*dims), slot)


# Sort keys.  The odd order must stay stable when base dimensions are added,
# hence dense zero-padded count rows.  Cached: the variable universe per run
# is small and NamedTuples hash fast.
_key_cache: dict[tuple[JetVariable, int], tuple] = {}


def _var_key(v: JetVariable, n: int) -> tuple:
    k = _key_cache.get((v, n))
    if k is None:
        k = (v.kind, v.slot, v.fiber, v.index.order, v.index.dense(n))
        _key_cache[(v, n)] = k
    return k


def _sort_word(word: list[JetVariable], n: int) -> tuple[int, tuple[JetVariable, ...]]:
    """Insertion-sort an odd word, returning (sign, sorted word); sign 0 on a repeat."""
    sign = 1
    for i in range(1, len(word)):
        j = i
        while j > 0 and _var_key(word[j], n) < _var_key(word[j - 1], n):
            word[j], word[j - 1] = word[j - 1], word[j]
            sign = -sign
            j -= 1
    for i in range(1, len(word)):
        if word[i] == word[i - 1]:
            return 0, ()
    return sign, tuple(word)


def _merge_odd(a: tuple, b: tuple, n: int) -> tuple[int, tuple]:
    """Merge two sorted odd words; sign counts the cross inversions, 0 on a repeat."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out: list[JetVariable] = []
    i = j = 0
    la, lb = len(a), len(b)
    sign = 1
    while i < la and j < lb:
        ka, kb = _var_key(a[i], n), _var_key(b[j], n)
        if ka == kb:
            return 0, ()
        if ka < kb:
            out.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining la - i factors of a
            if (la - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def _merge_powers(a: tuple, b: tuple) -> tuple:
    """Merge sorted (key, exponent) tuples, adding exponents."""
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for k, e in b:
        out[k] = out.get(k, 0) + e
    return tuple(sorted(out.items()))


def _merge_even(a: tuple, b: tuple, n: int) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items(), key=lambda ve: _var_key(ve[0], n)))


class Monomial(NamedTuple):
    base: tuple[tuple[int, int], ...]  # (dim, exponent), dims ascending
    even: tuple[tuple[JetVariable, int], ...]  # (variable, exponent), key ascending
    odd: tuple[JetVariable, ...]  # strictly ascending under the global odd order

    @property
    def b_degree(self) -> int:
        return len(self.odd)


_ONE_MONO = Monomial((), (), ())


def _mul_monomials(a: Monomial, b: Monomial, n: int) -> tuple[int, Monomial] | None:
    sign, odd = _merge_odd(a.odd, b.odd, n)
    if sign == 0:
        return None
    return sign, Monomial(
        _merge_powers(a.base, b.base), _merge_even(a.even, b.even, n), odd
    )


def _check_var(v: JetVariable, g: Geometry) -> None:
    if not 1 <= v.fiber <= g.m:
        raise DomainError(f"fiber index {v.fiber} outside geometry bounds (m={g.m})")
    if v.kind == PKIND:
        if not 1 <= v.slot <= g.s:
            raise DomainError(f"covector slot {v.slot} outside geometry bounds (s={g.s})")
    elif v.slot != 0:
        raise DomainError("fiber variables carry no covector slot")
    for d, c in v.index.counts:
        if not 1 <= d <= g.n:
            raise DomainError(f"base dimension {d} outside geometry bounds (n={g.n})")
        if c < 1:
            raise DomainError("multi-index counts must be positive")


@dataclass(frozen=True, eq=False)
class DiffPolynomial:
    """Graded differential polynomial: canonical monomials with Fraction coefficients."""

    geometry: Geometry
    terms: dict  # Monomial -> Fraction, no zero values

    # -- construction -------------------------------------------------------

    @staticmethod
    def zero(g: Geometry) -> "DiffPolynomial":
        return DiffPolynomial(g, {})

    @staticmethod
    def const(g: Geometry, c) -> "DiffPolynomial":
        c = Fraction(c)
        return DiffPolynomial(g, {} if c == 0 else {_ONE_MONO: c})

    @staticmethod
    def variable(g: Geometry, v: JetVariable) -> "DiffPolynomial":
        _check_var(v, g)
        if v.kind == BKIND:
            return DiffPolynomial(g, {Monomial((), (), (v,)): Fraction(1)})
        return DiffPolynomial(g, {Monomial((), ((v, 1),), ()): Fraction(1)})

    @staticmethod
    def base(g: Geometry, dim: int, exponent: int = 1) -> "DiffPolynomial":
        if not 1 <= dim <= g.n:
            raise DomainError(f"base dimension {dim} outside geometry bounds (n={g.n})")
        if exponent < 0:
            raise DomainError("negative base exponent")
        if exponent == 0:
            return DiffPolynomial.const(g, 1)
        return DiffPolynomial(g, {Monomial(((dim, exponent),), (), ()): Fraction(1)})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffPolynomial)
            and self.geometry == other.geometry
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- ring operations ----------------------------------------------------

    def _same_geometry(self, other: "DiffPolynomial") -> None:
        if self.geometry != other.geometry:
            raise GeometryMismatch(
                f"mixed geometries: {self.geometry} vs {other.geometry}"
            )

    def __add__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        self._same_geometry(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if acc:
                    out[m] = acc
                else:
                    del out[m]
        return DiffPolynomial(self.geometry, out)

    def __neg__(self) -> "DiffPolynomial":
        return DiffPolynomial(self.geometry, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        return self + (-other)

    def scaled(self, c) -> "DiffPolynomial":
        c = Fraction(c)
        if c == 0:
            return DiffPolynomial.zero(self.geometry)
        return DiffPolynomial(self.geometry, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        self._same_geometry(other)
        n = self.geometry.n
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = _mul_monomials(m1, m2, n)
                if r is None:
                    continue
                sign, mono = r
                c = c1 * c2 if sign > 0 else -(c1 * c2)
                acc = out.get(mono)
                if acc is None:
                    out[mono] = c
                else:
                    acc = acc + c
                    if acc:
                        out[mono] = acc
                    else:
                        del out[mono]
        return DiffPolynomial(self.geometry, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    # -- grading ------------------------------------------------------------

    def b_components(self) -> dict[int, "DiffPolynomial"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(m.b_degree, {})[m] = c
        return {
            k: DiffPolynomial(self.geometry, t) for k, t in sorted(out.items())
        }

    def homogeneous_degree(self) -> int | None:
        """The common b-degree, None for the zero polynomial; raises if mixed."""
        degs = {m.b_degree for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise DomainError(f"polynomial mixes b-degrees {sorted(degs)}")
        return degs.pop()

    # -- derivatives ---------------------------------------------------------

    def partial(self, v: JetVariable, side: str = LEFT) -> "DiffPolynomial":
        """Graded partial derivative with respect to a jet variable.

        Even variables: ordinary rule, left and right coincide.  Odd variable
        at 1-based position r of a k-letter word: left picks up (-1)^(r-1),
        right picks up (-1)^(k-r).
        """
        _check_var(v, self.geometry)
        out: dict[Monomial, Fraction] = {}
        odd = v.kind == BKIND
        for m, c in self.terms.items():
            if odd:
                try:
                    i = m.odd.index(v)
                except ValueError:
                    continue
                k = len(m.odd)
                exp = i if side == LEFT else k - 1 - i
                coeff = c if exp % 2 == 0 else -c
                mono = Monomial(m.base, m.even, m.odd[:i] + m.odd[i + 1 :])
            else:
                coeff = None
                for t, (u, e) in enumerate(m.even):
                    if u == v:
                        coeff = c * e
                        rest = m.even[:t] + (((u, e - 1),) if e > 1 else ()) + m.even[t + 1 :]
                        mono = Monomial(m.base, rest, m.odd)
                        break
                if coeff is None:
                    continue
            acc = out.get(mono)
            out[mono] = coeff if acc is None else acc + coeff
        return DiffPolynomial(self.geometry, {m: c for m, c in out.items() if c})

    def partial_left(self, v: JetVariable) -> "DiffPolynomial":
        return self.partial(v, LEFT)

    def partial_right(self, v: JetVariable) -> "DiffPolynomial":
        return self.partial(v, RIGHT)

    def total_derivative(self, dim: int) -> "DiffPolynomial":
        """Total derivative D_dim: Leibniz over base powers and all jet factors."""
        g = self.geometry
        if not 1 <= dim <= g.n:
            raise DomainError(f"base dimension {dim} outside geometry bounds (n={g.n})")
        n = g.n
        out: dict[Monomial, Fraction] = {}

        def put(mono: Monomial, c: Fraction) -> None:
            acc = out.get(mono)
            if acc is None:
                out[mono] = c
            else:
                acc = acc + c
                if acc:
                    out[mono] = acc
                else:
                    del out[mono]

        for m, c in self.terms.items():
            for t, (d, e) in enumerate(m.base):
                if d == dim:
                    rest = m.base[:t] + (((d, e - 1),) if e > 1 else ()) + m.base[t + 1 :]
                    put(Monomial(rest, m.even, m.odd), c * e)
                    break
            for t, (v, e) in enumerate(m.even):
                shifted = v.shifted(dim)
                rest = m.even[:t] + (((v, e - 1),) if e > 1 else ()) + m.even[t + 1 :]
                even = _merge_even(rest, ((shifted, 1),), n)
                put(Monomial(m.base, even, m.odd), c * e)
            for t, v in enumerate(m.odd):
                word = list(m.odd)
                word[t] = v.shifted(dim)
                sign, sorted_word = _sort_word(word, n)
                if sign == 0:
                    continue
                put(Monomial(m.base, m.even, sorted_word), c if sign > 0 else -c)
        return DiffPolynomial(g, out)

    def total_derivative_multi(self, sigma: MultiIndex) -> "DiffPolynomial":
        out = self
        for d in sigma.dims():
            out = out.total_derivative(d)
        return out

    # -- queries used by the variational layer --------------------------------

    def jet_variables(self) -> Iterator[JetVariable]:
        seen: set[JetVariable] = set()
        for m in self.terms:
            for v, _ in m.even:
                if v not in seen:
                    seen.add(v)
                    yield v
            for v in m.odd:
                if v not in seen:
                    seen.add(v)
                    yield v

    def family_indices(self, kind: int, fiber: int, slot: int = 0) -> list[MultiIndex]:
        out = {
            v.index
            for v in self.jet_variables()
            if v.kind == kind and v.fiber == fiber and v.slot == slot
        }
        return sorted(out, key=lambda ix: (ix.order, ix.dense(self.geometry.n)))

    def families(self) -> set[tuple[int, int, int]]:
        """(kind, fiber, slot) triples present in the polynomial."""
        return {(v.kind, v.fiber, v.slot) for v in self.jet_variables()}

    def slots_used(self) -> set[int]:
        return {v.slot for v in self.jet_variables() if v.kind == PKIND}

    def max_order(self) -> int:
        return max((v.index.order for v in self.jet_variables()), default=0)

    # -- substitutions --------------------------------------------------------

    def substitute_odd(self, assignments: Mapping[int, int]) -> "DiffPolynomial":
        """Replace the i-th odd factor (1-based, canonical order) by the slot variable
        with the same fiber and index.

        The replacement is even, so it commutes out of the odd word with no sign;
        monomials lacking a named position are left unchanged.
        """
        g = self.geometry
        for pos, slot in assignments.items():
            if pos < 1:
                raise DomainError(f"odd position {pos} is not positive")
            if not 1 <= slot <= g.s:
                raise DomainError(f"covector slot {slot} outside geometry bounds (s={g.s})")
        n = g.n
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            hit = [(pos, slot) for pos, slot in assignments.items() if pos <= len(m.odd)]
            if not hit:
                mono = m
            else:
                drop = {pos - 1 for pos, _ in hit}
                new_even: tuple = ()
                for pos, slot in hit:
                    v = m.odd[pos - 1]
                    new_even = _merge_even(
                        new_even, ((JetVariable(PKIND, v.fiber, v.index, slot), 1),), n
                    )
                word = tuple(v for i, v in enumerate(m.odd) if i not in drop)
                mono = Monomial(m.base, _merge_even(m.even, new_even, n), word)
            acc = out.get(mono)
            if acc is None:
                out[mono] = c
            else:
                acc = acc + c
                if acc:
                    out[mono] = acc
                else:
                    del out[mono]
        return DiffPolynomial(g, out)

    def substitute_slot(
        self, slot: int, sections: Sequence["DiffPolynomial"]
    ) -> "DiffPolynomial":
        """Substitute p^(slot)_{alpha,sigma} -> D_sigma(sections[alpha-1]) everywhere.

        Sections must be even (every term of even b-degree): replacing an even
        variable by an odd expression has no consistent sign.
        """
        g = self.geometry
        if not 1 <= slot <= g.s:
            raise DomainError(f"covector slot {slot} outside geometry bounds (s={g.s})")
        if len(sections) != g.m:
            raise DomainError(f"expected {g.m} sections, got {len(sections)}")
        for sec in sections:
            self._same_geometry(sec)
            if any(m.b_degree % 2 for m in sec.terms):
                raise DomainError("slot substitution needs even sections")
        cache: dict[tuple[int, MultiIndex], DiffPolynomial] = {}

        def transported(fiber: int, ix: MultiIndex) -> DiffPolynomial:
            key = (fiber, ix)
            got = cache.get(key)
            if got is None:
                got = sections[fiber - 1].total_derivative_multi(ix)
                cache[key] = got
            return got

        result = DiffPolynomial.zero(g)
        for m, c in self.terms.items():
            kept: list = []
            factors: list[tuple[int, MultiIndex, int]] = []
            for v, e in m.even:
                if v.kind == PKIND and v.slot == slot:
                    factors.append((v.fiber, v.index, e))
                else:
                    kept.append((v, e))
            piece = DiffPolynomial(g, {Monomial(m.base, tuple(kept), m.odd): c})
            for fiber, ix, e in factors:
                rep = transported(fiber, ix)
                for _ in range(e):
                    piece = piece * rep
            result = result + piece
        return result


def poly_sum(g: Geometry, parts: Iterable[DiffPolynomial]) -> DiffPolynomial:
    out = DiffPolynomial.zero(g)
    for p in parts:
        out = out + p
    return out


def monomial(
    g: Geometry,
    coeff=1,
    *,
    base: Sequence[tuple[int, int]] = (),
    even: Sequence[JetVariable] = (),
    odd: Sequence[JetVariable] = (),
) -> DiffPolynomial:
    """Convenience builder: coeff * x-powers * even jets * odd word (any order)."""
    c = Fraction(coeff)
    if c == 0:
        return DiffPolynomial.zero(g)
    for d, e in base:
        if not 1 <= d <= g.n:
            raise DomainError(f"base dimension {d} outside geometry bounds (n={g.n})")
        if e < 1:
            raise DomainError("base exponents must be positive")
    ev: tuple = ()
    for v in even:
        _check_var(v, g)
        if v.kind == BKIND:
            raise DomainError("odd variable passed as even factor")
        ev = _merge_even(ev, ((v, 1),), g.n)
    for v in odd:
        _check_var(v, g)
        if v.kind != BKIND:
            raise DomainError("even variable passed as odd factor")
    sign, word = _sort_word(list(odd), g.n)
    if sign == 0:
        return DiffPolynomial.zero(g)
    mono = Monomial(tuple(sorted(base)), ev, word)
    return DiffPolynomial(g, {mono: c if sign > 0 else -c})
