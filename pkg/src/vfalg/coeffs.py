"""Exact arithmetic in graded coefficient rings.

A ring is Z or Z/2 with finitely many named generators, optionally subject
to pure-power relations g^k = 0.  Elements are sparse maps from exponent
tuples to nonzero integers and are always kept canonical: zero coefficients
dropped, exponents below the truncation bounds, integers reduced mod 2 over
Z/2.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError, InputError

#: marker returned by degree queries on sums of mixed degree
INHOMOGENEOUS = "inhomogeneous"


@dataclass(frozen=True)
class GradedVariable:
    """Named ring generator with an even homological degree."""

    name: str
    degree: int = 0


class CoefficientRing:
    """(Z or Z/2)[g1, g2, ...] with optional relations g^k = 0."""

    def __init__(self, base="Z", variables=(), truncations=None, grading_enabled=True):
        if base not in ("Z", "Z/2"):
            raise InputError(f"unsupported base ring {base!r}, expected 'Z' or 'Z/2'")
        self.base = base
        self.char = 2 if base == "Z/2" else 0
        vs = []
        for v in variables:
            if isinstance(v, GradedVariable):
                vs.append(v)
            elif isinstance(v, str):
                vs.append(GradedVariable(v))
            else:
                name, degree = v
                vs.append(GradedVariable(name, degree))
        self.variables = tuple(vs)
        names = tuple(v.name for v in self.variables)
        if len(set(names)) != len(names):
            raise InputError("duplicate generator names")
        truncations = dict(truncations or {})
        for name, power in truncations.items():
            if name not in names:
                raise InputError(f"truncation given for unknown generator {name!r}")
            if not isinstance(power, int) or power < 1:
                raise InputError(f"truncation power for {name!r} must be a positive integer")
        self.truncations = truncations
        self.grading_enabled = bool(grading_enabled)
        self._names = names
        self._index = {n: i for i, n in enumerate(names)}
        self._degrees = tuple(v.degree for v in self.variables)
        self._bounds = tuple(truncations.get(n) for n in names)
        self._zero_exp = (0,) * len(names)
        self.zero = CoeffElement(self, {})
        self.one = CoeffElement(self, {self._zero_exp: 1})

    # rings are compared structurally so that independently built but
    # identical rings interoperate
    def __eq__(self, other):
        return (
            isinstance(other, CoefficientRing)
            and self.base == other.base
            and self.variables == other.variables
            and self.truncations == other.truncations
            and self.grading_enabled == other.grading_enabled
        )

    def __hash__(self):
        return hash((self.base, self.variables, tuple(sorted(self.truncations.items()))))

    def __repr__(self):
        gens = ", ".join(self._names)
        return f"CoefficientRing({self.base}[{gens}])"

    @property
    def names(self):
        return self._names

    def _reduce(self, c: int) -> int:
        return c % 2 if self.char == 2 else c

    def _keep(self, exps) -> bool:
        for e, bound in zip(exps, self._bounds):
            if bound is not None and e >= bound:
                return False
        return True

    def normalize(self, terms: dict) -> dict:
        out = {}
        for exps, c in terms.items():
            c = self._reduce(c)
            if c and self._keep(exps):
                out[exps] = c
        return out

    def element(self, value) -> CoeffElement:
        """Coerce an int, dict, string or CoeffElement into this ring."""
        if isinstance(value, CoeffElement):
            if value.ring != self:
                raise InputError("element belongs to a different ring")
            return value
        if isinstance(value, int):
            if value == 0:
                return self.zero
            return CoeffElement(self, self.normalize({self._zero_exp: value}))
        if isinstance(value, dict):
            fixed = {}
            for exps, c in value.items():
                if isinstance(exps, dict):
                    exps = self._exp_tuple(exps)
                if len(exps) != len(self._names):
                    raise InputError("exponent tuple has wrong length")
                fixed[tuple(exps)] = fixed.get(tuple(exps), 0) + c
            return CoeffElement(self, self.normalize(fixed))
        if isinstance(value, str):
            return self._parse(value)
        raise InputError(f"cannot coerce {value!r} into {self!r}")

    def monomial(self, coeff=1, **exps) -> CoeffElement:
        return self.element({self._exp_tuple(exps): coeff})

    def _exp_tuple(self, exps: dict) -> tuple:
        out = [0] * len(self._names)
        for name, e in exps.items():
            if name not in self._index:
                raise InputError(f"unknown generator {name!r}")
            if e < 0:
                raise InputError(f"negative exponent on generator {name!r}")
            out[self._index[name]] = e
        return tuple(out)

    def _parse(self, text: str) -> CoeffElement:
        # accepts e.g. "3", "-u", "2*u^2", "1 + u - u^2"
        s = text.replace("-", "+-").replace(" ", "")
        terms = {}
        for chunk in s.split("+"):
            if not chunk:
                continue
            sign = 1
            if chunk.startswith("-"):
                sign, chunk = -1, chunk[1:]
            coeff, exps = 1, {}
            for factor in chunk.split("*"):
                if not factor:
                    raise InputError(f"cannot parse ring element {text!r}")
                if factor.lstrip("-").isdigit():
                    coeff *= int(factor)
                    continue
                if "^" in factor:
                    name, _, power = factor.partition("^")
                    if not power.isdigit():
                        raise InputError(f"bad exponent in {text!r}")
                    e = int(power)
                else:
                    name, e = factor, 1
                if name not in self._index:
                    raise InputError(f"unknown generator {name!r} in {text!r}")
                exps[name] = exps.get(name, 0) + e
            key = self._exp_tuple(exps)
            terms[key] = terms.get(key, 0) + sign * coeff
        return CoeffElement(self, self.normalize(terms))


class CoeffElement:
    """Element of a CoefficientRing; treat as immutable."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: CoefficientRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, CoeffElement):
            if other.ring != self.ring:
                raise InputError("mixed coefficient rings")
            return other
        if isinstance(other, int):
            return self.ring.element(other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) + c
        return CoeffElement(self.ring, self.ring.normalize(out))

    __radd__ = __add__

    def __neg__(self):
        if self.ring.char == 2:
            return self
        return CoeffElement(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
        return CoeffElement(self.ring, self.ring.normalize(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ContractError("negative powers are not defined in the ring")
        acc = self.ring.one
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.element(other)
        return (
            isinstance(other, CoeffElement)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def degree(self):
        """Common homological degree of all monomials, or INHOMOGENEOUS."""
        if not self.ring.grading_enabled:
            raise ContractError("grading is disabled for this ring")
        if not self.terms:
            return 0
        degs = {
            sum(e * d for e, d in zip(exps, self.ring._degrees))
            for exps in self.terms
        }
        if len(degs) == 1:
            return degs.pop()
        return INHOMOGENEOUS

    def is_nilpotent(self) -> bool:
        """True when every monomial involves some truncated generator."""
        bounds = self.ring._bounds
        for exps in self.terms:
            if not any(b is not None and e > 0 for e, b in zip(exps, bounds)):
                return False
        return True

    def is_base_unit(self) -> bool:
        """True for +-1 (resp. 1 over Z/2): the invertible constants."""
        if len(self.terms) != 1:
            return False
        (exps, c), = self.terms.items()
        return exps == self.ring._zero_exp and (c in (1, -1) or self.ring.char == 2 and c == 1)

    def inverse_unit(self) -> CoeffElement:
        if not self.is_base_unit():
            raise ContractError("not a unit of the base ring")
        return self  # (+-1)^-1 == +-1 in Z, 1^-1 == 1 in Z/2

    def constant_part(self) -> int:
        return self.terms.get(self.ring._zero_exp, 0)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring._names
        keyed = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))
        pieces = []
        for exps, c in keyed:
            factors = [
                f"{n}^{e}" if e > 1 else n
                for n, e in zip(names, exps)
                if e
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"<{self}>"
