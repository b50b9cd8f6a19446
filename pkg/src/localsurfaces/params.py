"""Polynomials in commuting formal parameters, layered over BiLaurent.

A ParamPoly is a finitely supported map from parameter-exponent tuples
(non-negative, one slot per parameter name) to BiLaurent coefficients.  It is
used only for identity checks that must hold for all parameter values at
once: the semiuniversal family transition, Kodaira-Spencer images, the chart
normalization isomorphism, and the Hirzebruch-embedding relations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .errors import NonInvertibleSubstitution
from .laurent import BiLaurent, Q


class ParamPoly:
    """Exact polynomial in named parameters with BiLaurent coefficients."""

    __slots__ = ("params", "_terms")

    def __init__(
        self,
        params: Sequence[str],
        terms: Optional[Mapping[Tuple[int, ...], BiLaurent]] = None,
    ):
        params = tuple(params)
        clean: dict[Tuple[int, ...], BiLaurent] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != len(params):
                    raise ValueError("exponent tuple length != number of parameters")
                if any(e < 0 for e in exps):
                    raise ValueError("parameter exponents must be non-negative")
                if not coeff.is_zero:
                    acc = clean.get(exps)
                    acc = coeff if acc is None else acc + coeff
                    if acc.is_zero:
                        clean.pop(exps, None)
                    else:
                        clean[exps] = acc
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, params: Sequence[str]) -> "ParamPoly":
        return cls(params)

    @classmethod
    def from_poly(cls, poly: BiLaurent, params: Sequence[str]) -> "ParamPoly":
        zero_exp = (0,) * len(tuple(params))
        return cls(params, {zero_exp: poly})

    @classmethod
    def const(cls, value, params: Sequence[str]) -> "ParamPoly":
        return cls.from_poly(BiLaurent.const(value), params)

    @classmethod
    def var(cls, name: str, params: Sequence[str]) -> "ParamPoly":
        params = tuple(params)
        exps = [0] * len(params)
        exps[params.index(name)] = 1
        return cls(params, {tuple(exps): BiLaurent.const(1)})

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def terms(self) -> dict[Tuple[int, ...], BiLaurent]:
        return dict(self._terms)

    def coefficient(self, exps: Tuple[int, ...]) -> BiLaurent:
        return self._terms.get(tuple(exps), BiLaurent.zero())

    def constant_coefficient(self) -> BiLaurent:
        return self.coefficient((0,) * len(self.params))

    def as_unit_monomial(self):
        """Parameter-free single-term content, or None."""
        if len(self._terms) != 1:
            return None
        (exps, coeff), = self._terms.items()
        if any(exps):
            return None
        return coeff.as_unit_monomial()

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Optional["ParamPoly"]:
        if isinstance(other, ParamPoly):
            if other.params != self.params:
                raise ValueError("parameter names differ")
            return other
        if isinstance(other, BiLaurent):
            return ParamPoly.from_poly(other, self.params)
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(other, self.params)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for exps, coeff in rhs._terms.items():
            acc = out.get(exps)
            acc = coeff if acc is None else acc + coeff
            if acc.is_zero:
                out.pop(exps, None)
            else:
                out[exps] = acc
        return ParamPoly(self.params, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.params, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[Tuple[int, ...], BiLaurent] = {}
        for ea, ca in self._terms.items():
            for eb, cb in rhs._terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                acc = out.get(exps)
                acc = prod if acc is None else acc + prod
                if acc.is_zero:
                    out.pop(exps, None)
                else:
                    out[exps] = acc
        return ParamPoly(self.params, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            unit = self.as_unit_monomial()
            if unit is None or unit[2] != 0:
                raise NonInvertibleSubstitution(
                    f"negative power of non-unit ParamPoly {self}"
                )
            coeff, z_exp, _ = unit
            inv = ParamPoly.from_poly(
                BiLaurent.term(Q(1) / coeff, -z_exp, 0), self.params
            )
            return inv ** (-exponent)
        result = ParamPoly.const(1, self.params)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- substitution ------------------------------------------------------

    def substitute_params(self, values: Mapping[str, Q]) -> BiLaurent:
        """Evaluate every parameter at a rational value."""
        vals = [Q(values[name]) for name in self.params]
        total = BiLaurent.zero()
        for exps, coeff in self._terms.items():
            scalar = Q(1)
            for v, e in zip(vals, exps):
                scalar *= v ** e
            total = total + coeff * scalar
        return total

    def derivative(self, name: str) -> "ParamPoly":
        idx = self.params.index(name)
        out: dict[Tuple[int, ...], BiLaurent] = {}
        for exps, coeff in self._terms.items():
            if exps[idx] == 0:
                continue
            new = list(exps)
            new[idx] -= 1
            out[tuple(new)] = coeff * exps[idx]
        return ParamPoly(self.params, out)

    def substitute_vars(
        self, z: Optional["ParamPoly"] = None, u: Optional["ParamPoly"] = None,
        tag: Optional[str] = None,
    ) -> "ParamPoly":
        """Substitute ParamPoly images for the two BiLaurent variable slots."""
        z_img = z if z is not None else ParamPoly.from_poly(
            BiLaurent.term(1, 1, 0), self.params
        )
        u_img = u if u is not None else ParamPoly.from_poly(
            BiLaurent.term(1, 0, 1), self.params
        )
        z_pows: dict[int, ParamPoly] = {}
        u_pows: dict[int, ParamPoly] = {}

        def power(img: "ParamPoly", n: int, cache: dict) -> "ParamPoly":
            if n not in cache:
                cache[n] = img ** n
            return cache[n]

        total = ParamPoly.zero(self.params)
        for exps, coeff in self._terms.items():
            part = ParamPoly.zero(self.params)
            for (ze, ue), scalar in coeff.items():
                term = power(z_img, ze, z_pows) * power(u_img, ue, u_pows)
                part = part + term * scalar
            total = total + part * ParamPoly(
                self.params, {exps: BiLaurent.const(1)}
            )
        if tag is not None:
            total = ParamPoly(
                total.params,
                {e: c.with_tag(tag) for e, c in total._terms.items()},
            )
        return total

    # -- comparison / printing ----------------------------------------------

    def __eq__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self):
        return hash((self.params, frozenset(
            (e, frozenset(c.items())) for e, c in self._terms.items()
        )))

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for exps in sorted(self._terms):
            coeff = self._terms[exps]
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.params, exps)
                if e
            ]
            body = str(coeff)
            if factors:
                if coeff.as_rational() == 1:
                    body = "*".join(factors)
                else:
                    body = f"({body})*" + "*".join(factors)
            pieces.append(body)
        return " + ".join(pieces)

    def __repr__(self):
        return f"ParamPoly({self})"
