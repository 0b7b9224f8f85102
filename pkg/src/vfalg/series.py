"""Sparse truncated multivariate Laurent series with trust accounting.

Terms are exponent tuples over a declared variable list with CoeffElement
values.  Two kinds of variables coexist:

* field variables (z, w, ...): may be Laurent; truncated by a *window*
  recording which exponents the stored data can be trusted at;
* nilpotent variables (model roots): subject to an exact relation x^k = 0,
  so no trust bookkeeping is needed for them.

The window carries, per field variable, a trusted upper cut and a true
lower bound (None = unbounded below, as for the principal variable of a
meromorphic expansion), plus a total-degree cut and a true total-degree
floor.  Every operation propagates windows conservatively; comparisons only
inspect exponents that both operands trust.  A product needs at least one
factor whose Laurent exponents are globally bounded below; otherwise the
coefficientwise sums need not be finite and the product is refused.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .coeffs import INHOMOGENEOUS, CoeffElement, CoefficientRing
from .errors import (
    ContractError,
    DivergenceError,
    InputError,
    InversionError,
    NotARingError,
)

INF = 10**9


@dataclass(frozen=True)
class SeriesVariable:
    """Series variable: Laurent-capable field variable or nilpotent root."""

    name: str
    degree: int = -2
    laurent: bool = False
    nilpotent_order: int | None = None  # x^k == 0 exactly; such vars never Laurent

    def __post_init__(self):
        if self.nilpotent_order is not None:
            if self.laurent:
                raise InputError(f"nilpotent variable {self.name!r} cannot be Laurent")
            if self.nilpotent_order < 1:
                raise InputError("nilpotent order must be >= 1")

    @property
    def is_field(self) -> bool:
        return self.nilpotent_order is None


class TruncationPolicy:
    """Retention window for field variables.

    `order` caps both the total field degree and, by default, every single
    field exponent; `var_orders` overrides the per-variable cap.
    """

    def __init__(self, order: int, var_orders: dict | None = None):
        if order < 0:
            raise InputError("truncation order must be >= 0")
        self.order = order
        self.var_orders = dict(var_orders or {})

    def cut_for(self, name: str) -> int:
        return self.var_orders.get(name, self.order)

    def __repr__(self):
        return f"TruncationPolicy(order={self.order}, var_orders={self.var_orders})"


@dataclass(frozen=True)
class Window:
    """Trust window: name-keyed cuts/floors plus total-degree bounds."""

    cuts: dict = field(default_factory=dict)    # absent => INF
    floors: dict = field(default_factory=dict)  # absent => 0; None => unbounded below
    tcut: int = INF
    tfloor: int = 0

    def cut(self, name):
        return self.cuts.get(name, INF)

    def floor(self, name):
        return self.floors.get(name, 0)

    @property
    def unbounded(self) -> bool:
        return any(f is None for f in self.floors.values())

    @property
    def trusts_all(self) -> bool:
        return self.tcut >= INF and all(c >= INF for c in self.cuts.values())


EXACT = Window()


def _add_inf(cut, delta):
    return INF if cut >= INF else cut + delta


def _min_floor(a, b):
    if a is None or b is None:
        return None
    return min(a, b)


def _sum_floor(a, b):
    if a is None or b is None:
        return None
    return a + b


def window_add(a: Window, b: Window) -> Window:
    cuts = {}
    for n in set(a.cuts) | set(b.cuts):
        cuts[n] = min(a.cut(n), b.cut(n))
    floors = {}
    for n in set(a.floors) | set(b.floors):
        floors[n] = _min_floor(a.floor(n), b.floor(n))
    return Window(cuts, floors, min(a.tcut, b.tcut), min(a.tfloor, b.tfloor))


def window_mul(a: Window, b: Window) -> Window:
    if a.unbounded and b.unbounded:
        raise NotARingError(
            "product of two Laurent series that are both unbounded below is not defined"
        )
    cuts = {}
    for n in set(a.cuts) | set(b.cuts) | set(a.floors) | set(b.floors):
        cands = []
        if b.floor(n) is not None:
            cands.append(_add_inf(a.cut(n), b.floor(n)))
        if a.floor(n) is not None:
            cands.append(_add_inf(b.cut(n), a.floor(n)))
        cuts[n] = min(cands)
    floors = {}
    for n in set(a.floors) | set(b.floors):
        floors[n] = _sum_floor(a.floor(n), b.floor(n))
    cands = []
    if a.tcut < INF:
        cands.append(a.tcut + b.tfloor)
    if b.tcut < INF:
        cands.append(b.tcut + a.tfloor)
    tcut = min(cands) if cands else INF
    return Window({k: v for k, v in cuts.items() if v < INF}, floors, tcut, a.tfloor + b.tfloor)


def window_intersect(a: Window, b: Window) -> Window:
    cuts = {}
    for n in set(a.cuts) | set(b.cuts):
        cuts[n] = min(a.cut(n), b.cut(n))
    return Window(cuts, {}, min(a.tcut, b.tcut), min(a.tfloor, b.tfloor))


class MultiSeries:
    """Sparse Laurent series over a tuple of SeriesVariables."""

    __slots__ = ("ring", "vars", "terms", "window")

    def __init__(self, ring, vars, terms, window=EXACT, _normalized=False):
        self.ring = ring
        self.vars = tuple(vars)
        self.window = window
        self.terms = terms if _normalized else self._normalize(terms)

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls, ring, vars=(), window=EXACT):
        return cls(ring, vars, {}, window, _normalized=True)

    @classmethod
    def const(cls, ring, value, vars=(), window=EXACT):
        c = ring.element(value)
        vars = tuple(vars)
        if not c:
            return cls.zero(ring, vars, window)
        return cls(ring, vars, {(0,) * len(vars): c}, window)

    @classmethod
    def monomial(cls, ring, vars, name, exp=1, coeff=1, window=None):
        vars = tuple(vars)
        names = [v.name for v in vars]
        if name not in names:
            raise InputError(f"unknown series variable {name!r}")
        exps = [0] * len(vars)
        exps[names.index(name)] = exp
        terms = {tuple(exps): ring.element(coeff)}
        if window is None:
            window = _support_window(vars, terms)
        return cls(ring, vars, terms, window)

    @classmethod
    def from_terms(cls, ring, vars, terms, window=None):
        """Build from {exps: coeff}; window defaults to exact with true floors."""
        vars = tuple(vars)
        fixed = {}
        for exps, c in terms.items():
            if len(exps) != len(vars):
                raise InputError(
                    f"exponent tuple {exps} does not match {len(vars)} variables"
                )
            c = ring.element(c)
            if c:
                fixed[tuple(exps)] = fixed.get(tuple(exps), ring.zero) + c
        if window is None:
            window = _support_window(vars, fixed)
        return cls(ring, vars, fixed, window)

    def _normalize(self, terms):
        vars = self.vars
        win = self.window
        field_idx = [i for i, v in enumerate(vars) if v.is_field]
        cuts = [win.cut(vars[i].name) for i in field_idx]
        out = {}
        for exps, c in terms.items():
            if not c:
                continue
            dead = False
            for i, v in enumerate(vars):
                e = exps[i]
                if e < 0 and not v.laurent:
                    raise ContractError(
                        f"negative exponent on non-Laurent variable {v.name!r}"
                    )
                if v.nilpotent_order is not None and e >= v.nilpotent_order:
                    dead = True
                    break
            if dead:
                continue
            tdeg = 0
            for j, i in enumerate(field_idx):
                e = exps[i]
                if e > cuts[j]:
                    dead = True
                    break
                tdeg += e
            if dead or tdeg > win.tcut:
                continue
            out[exps] = c
        return out

    # -- bookkeeping ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def names(self):
        return tuple(v.name for v in self.vars)

    def _var_index(self, name):
        for i, v in enumerate(self.vars):
            if v.name == name:
                return i
        raise InputError(f"unknown series variable {name!r}")

    def field_tdeg(self, exps) -> int:
        return sum(e for e, v in zip(exps, self.vars) if v.is_field)

    def with_vars(self, vars) -> MultiSeries:
        """Reindex onto a superset variable tuple (by name)."""
        vars = tuple(vars)
        names = [v.name for v in vars]
        pos = []
        for v in self.vars:
            if v.name not in names:
                raise InputError(f"variable {v.name!r} missing from target tuple")
            if vars[names.index(v.name)] != v:
                raise ContractError(f"variable {v.name!r} redeclared with other attrs")
            pos.append(names.index(v.name))
        terms = {}
        for exps, c in self.terms.items():
            out = [0] * len(vars)
            for p, e in zip(pos, exps):
                out[p] = e
            terms[tuple(out)] = c
        return MultiSeries(self.ring, vars, terms, self.window, _normalized=True)

    def _aligned(self, other):
        if self.vars == other.vars:
            return self, other
        merged = list(self.vars)
        names = {v.name for v in merged}
        for v in other.vars:
            if v.name not in names:
                merged.append(v)
                names.add(v.name)
        merged = tuple(merged)
        return self.with_vars(merged), other.with_vars(merged)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiSeries):
            if other.ring != self.ring:
                raise InputError("mixed coefficient rings")
            return other
        if isinstance(other, (int, CoeffElement)):
            return None  # scalar
        return NotImplemented

    def __add__(self, other):
        kind = self._coerce(other)
        if kind is NotImplemented:
            return NotImplemented
        if kind is None:
            other = MultiSeries.const(self.ring, other, self.vars)
        a, b = self._aligned(other if kind else other)
        win = window_add(a.window, b.window)
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            cur = terms.get(exps)
            s = c if cur is None else cur + c
            if s:
                terms[exps] = s
            elif cur is not None:
                del terms[exps]
        return MultiSeries(a.ring, a.vars, terms, win)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries(
            self.ring,
            self.vars,
            {e: -c for e, c in self.terms.items()},
            self.window,
            _normalized=True,
        )

    def __sub__(self, other):
        kind = self._coerce(other)
        if kind is NotImplemented:
            return NotImplemented
        if kind is None:
            other = MultiSeries.const(self.ring, other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        kind = self._coerce(other)
        if kind is NotImplemented:
            return NotImplemented
        if kind is None:
            c = self.ring.element(other)
            if not c:
                return MultiSeries.zero(self.ring, self.vars, self.window)
            return MultiSeries(
                self.ring,
                self.vars,
                {e: v * c for e, v in self.terms.items()},
                self.window,
            )
        a, b = self._aligned(other)
        win = window_mul(a.window, b.window)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        terms = {}
        for eb, cb in b.terms.items():
            for ea, ca in a.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                cur = terms.get(key)
                p = ca * cb
                if cur is None:
                    if p:
                        terms[key] = p
                else:
                    s = cur + p
                    if s:
                        terms[key] = s
                    else:
                        del terms[key]
        return MultiSeries(a.ring, a.vars, terms, win)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ContractError("use invert_unit for negative powers")
        acc = MultiSeries.const(self.ring, 1, self.vars)
        base = self
        for _ in range(n):
            acc = acc * base
        return acc

    # -- structural operations ------------------------------------------

    def shift_var(self, name, k: int) -> MultiSeries:
        if k == 0:
            return self
        i = self._var_index(name)
        v = self.vars[i]
        terms = {}
        for exps, c in self.terms.items():
            out = list(exps)
            out[i] += k
            terms[tuple(out)] = c
        w = self.window
        cuts = dict(w.cuts)
        if name in cuts or w.cut(name) < INF:
            cuts[name] = w.cut(name) + k
        floors = dict(w.floors)
        floors[name] = None if w.floor(name) is None else w.floor(name) + k
        tcut = _add_inf(w.tcut, k) if v.is_field else w.tcut
        tfloor = w.tfloor + k if v.is_field else w.tfloor
        return MultiSeries(self.ring, self.vars, terms, Window(cuts, floors, tcut, tfloor))

    def rename_vars(self, mapping: dict) -> MultiSeries:
        """Rename (and possibly merge) variables; merging field vars is refused."""
        new_vars = []
        names = {}
        idx = []
        for v in self.vars:
            tgt = mapping.get(v.name, v)
            if isinstance(tgt, str):
                tgt = SeriesVariable(tgt, v.degree, v.laurent, v.nilpotent_order)
            if tgt.name in names:
                j = names[tgt.name]
                if new_vars[j] != tgt:
                    raise ContractError(f"merge into {tgt.name!r} with conflicting attrs")
                if tgt.is_field:
                    raise ContractError("merging field variables is not supported")
                idx.append(j)
            else:
                names[tgt.name] = len(new_vars)
                idx.append(len(new_vars))
                new_vars.append(tgt)
        terms = {}
        for exps, c in self.terms.items():
            out = [0] * len(new_vars)
            for p, e in zip(idx, exps):
                out[p] += e
            key = tuple(out)
            cur = terms.get(key)
            s = c if cur is None else cur + c
            if s:
                terms[key] = s
            elif cur is not None:
                del terms[key]
        w = self.window
        cuts = {}
        floors = {}
        for v in self.vars:
            tgt = mapping.get(v.name, v)
            tname = tgt if isinstance(tgt, str) else tgt.name
            if w.cut(v.name) < INF:
                cuts[tname] = min(cuts.get(tname, INF), w.cut(v.name))
            f = w.floor(v.name)
            if v.name in w.floors or f != 0:
                floors[tname] = _min_floor(floors.get(tname, f), f)
        return MultiSeries(self.ring, tuple(new_vars), terms, Window(cuts, floors, w.tcut, w.tfloor))

    def group_by(self, name):
        """Split off one variable: {exponent: series in the remaining vars}."""
        i = self._var_index(name)
        v = self.vars[i]
        rest = self.vars[:i] + self.vars[i + 1:]
        parts = {}
        for exps, c in self.terms.items():
            k = exps[i]
            key = exps[:i] + exps[i + 1:]
            parts.setdefault(k, {})[key] = c
        w = self.window
        cuts = {n: c for n, c in w.cuts.items() if n != name}
        floors = {n: f for n, f in w.floors.items() if n != name}
        # the true coefficient of name^k only has terms whose remaining field
        # exponents sit above the per-variable floors, which often beats the
        # naive tfloor - k bound; with no remaining field vars it is trusted
        # outright whenever k itself was inside the window
        rest_floor = 0
        for rv in rest:
            if rv.is_field:
                f = floors.get(rv.name, 0)
                if f is None:
                    rest_floor = None
                    break
                rest_floor += f
        out = {}
        for k, terms in parts.items():
            if v.is_field:
                tcut = _add_inf(w.tcut, -k)
                tfloor = w.tfloor - k
                if rest_floor is not None:
                    tfloor = max(tfloor, rest_floor)
                    if not any(rv.is_field for rv in rest):
                        tcut = INF
            else:
                tcut, tfloor = w.tcut, w.tfloor
            out[k] = MultiSeries(
                self.ring, rest, terms, Window(cuts, floors, tcut, tfloor), _normalized=True
            )
        return out

    def coefficient(self, **exps) -> CoeffElement:
        names = self.names()
        key = [0] * len(names)
        for n, e in exps.items():
            key[names.index(n)] = e
        return self.terms.get(tuple(key), self.ring.zero)

    def truncate(self, policy: TruncationPolicy) -> MultiSeries:
        w = self.window
        cuts = dict(w.cuts)
        for v in self.vars:
            if v.is_field:
                cuts[v.name] = min(w.cut(v.name), policy.cut_for(v.name))
        win = Window(cuts, w.floors, min(w.tcut, policy.order), w.tfloor)
        return MultiSeries(self.ring, self.vars, dict(self.terms), win)

    def substitute(self, name, repl: MultiSeries) -> MultiSeries:
        """Substitute a series for a variable (nonnegative exponents only).

        The replacement must have no constant term unless that constant is
        nilpotent, so that the resulting double sum is finite.
        """
        i = self._var_index(name)
        if any(e[i] < 0 for e in self.terms):
            raise ContractError("substitution into negative powers is not supported")
        repl = repl if repl.ring == self.ring else None
        if repl is None:
            raise InputError("mixed coefficient rings")
        const = repl.terms.get((0,) * len(repl.vars))
        if const and not const.is_nilpotent():
            raise DivergenceError(
                f"substituting a series with non-nilpotent constant term for {name!r}"
            )
        parts = self.group_by(name)
        rest_vars = self.vars[:i] + self.vars[i + 1:]
        out = MultiSeries.zero(self.ring, rest_vars)
        power = MultiSeries.const(self.ring, 1, repl.vars)
        kmax = max(parts) if parts else 0
        self_cut = self.window.cut(name)
        # field valuation of the replacement controls how far unknown
        # high-order coefficients of self could reach down
        nu = None
        for exps, _ in repl.terms.items():
            td = repl.field_tdeg(exps)
            nu = td if nu is None else min(nu, td)
        for k in range(kmax + 1):
            if k:
                power = power * repl
            part = parts.get(k)
            if part is not None and not part.is_zero:
                out = out + part * power
        if self_cut < INF:
            if not (nu and nu > 0):
                # replacement has field valuation 0: demand that its powers
                # vanish before the untrusted coefficients could contribute
                probe = power
                for k in range(kmax + 1, self_cut + 2):
                    probe = probe * repl
                    if probe.is_zero:
                        break
                else:
                    raise ContractError(
                        f"substitution for {name!r} reaches beyond the trusted order"
                    )
            else:
                w = out.window
                out = MultiSeries(
                    self.ring,
                    out.vars,
                    dict(out.terms),
                    Window(w.cuts, w.floors, min(w.tcut, (self_cut + 1) * nu - 1), w.tfloor),
                )
        return out

    def invert_unit(self, pivot: str) -> MultiSeries:
        """Invert c*pivot^k*(1 + n) where c is a base-ring unit.

        Every term of n must eventually die under powers: it carries a
        nilpotent variable, another windowed field variable, or a positive
        pivot power.  Terms of negative total field degree are refused.
        """
        i = self._var_index(pivot)
        if not self.vars[i].laurent:
            raise ContractError(f"pivot {pivot!r} must be a Laurent variable")
        pure = {
            exps[i]: c
            for exps, c in self.terms.items()
            if all(e == 0 for j, e in enumerate(exps) if j != i)
        }
        if not pure:
            raise InversionError(f"no pure {pivot!r}-power term to lead with")
        k = min(pure)
        c = pure[k]
        if not c.is_base_unit():
            raise InversionError(
                f"leading coefficient {c} at {pivot}^{k} is not a unit of the base ring"
            )
        cinv = c.inverse_unit()
        rest = self.shift_var(pivot, -k) * cinv
        n = rest - 1
        # every tail term needs a reason to die under powers: a nilpotent root
        # or nilpotent coefficient (bounded count), a strictly positive total
        # field degree under a finite total cut, or a monotone windowed
        # variable whose exponent only ever grows
        w = n.window
        nil_idx = [j for j, v in enumerate(n.vars) if not v.is_field]
        n0 = [
            exps
            for exps, cc in n.terms.items()
            if not any(exps[j] for j in nil_idx) and not cc.is_nilpotent()
        ]
        if n0:
            mono = [
                j
                for j, v in enumerate(n.vars)
                if v.is_field
                and w.cut(v.name) < INF
                and all(e[j] >= 0 for e in n0)
            ]
            tdeg_ok = w.tcut < INF and all(n.field_tdeg(e) >= 0 for e in n0)
            for e in n0:
                if tdeg_ok and n.field_tdeg(e) >= 1:
                    continue
                if any(e[j] >= 1 for j in mono):
                    continue
                raise InversionError(
                    f"tail term at exponents {e} never vanishes within the window"
                )
        one = MultiSeries.const(self.ring, 1, self.vars)
        acc = one
        p = one
        budget = sum((v.nilpotent_order or 1) - 1 for v in self.vars)
        budget += sum(b - 1 for b in self.ring.truncations.values())
        span = 0
        for v in self.vars:
            if v.is_field and w.cut(v.name) < INF:
                f = w.floor(v.name)
                span += w.cut(v.name) - (f if f is not None else -w.cut(v.name) - budget)
        drop = max(0, -w.tfloor)
        limit = budget * (1 + drop) + span + (w.tcut if w.tcut < INF else 0) + 8
        for _ in range(limit):
            p = p * (-n)
            if p.is_zero:
                break
            acc = acc + p
        else:
            raise InversionError("geometric tail did not terminate within the window")
        return (acc * cinv).shift_var(pivot, -k)

    # -- comparison ----------------------------------------------------

    def _in_window(self, exps, win: Window) -> bool:
        tdeg = 0
        for e, v in zip(exps, self.vars):
            if v.is_field:
                if e > win.cut(v.name):
                    return False
                tdeg += e
        return tdeg <= win.tcut

    def equal_within(self, other):
        """Compare at mutually trusted exponents; returns (ok, witness)."""
        kind = self._coerce(other)
        if kind is NotImplemented:
            raise InputError("cannot compare with this operand")
        if kind is None:
            other = MultiSeries.const(self.ring, other, self.vars)
        a, b = self._aligned(other)
        win = window_intersect(a.window, b.window)
        keys = set(a.terms) | set(b.terms)
        for exps in sorted(keys, key=lambda e: (a.field_tdeg(e), tuple(-x for x in e))):
            if not a._in_window(exps, win):
                continue
            ca = a.terms.get(exps, a.ring.zero)
            cb = b.terms.get(exps, b.ring.zero)
            if ca != cb:
                return False, (exps, ca, cb)
        return True, None

    def is_zero_within(self):
        return self.equal_within(0)

    def __eq__(self, other):
        if not isinstance(other, (MultiSeries, int, CoeffElement)):
            return NotImplemented
        ok, _ = self.equal_within(other)
        return ok

    __hash__ = None

    # -- degree and printing ---------------------------------------------

    def homogeneous_degree(self):
        """Common degree of all terms (coefficient degree + variable degrees)."""
        degs = set()
        for exps, c in self.terms.items():
            d = c.degree()
            if d == INHOMOGENEOUS:
                return INHOMOGENEOUS
            degs.add(d + sum(e * v.degree for e, v in zip(exps, self.vars)))
            if len(degs) > 1:
                return INHOMOGENEOUS
        if not degs:
            return 0
        return degs.pop()

    def __str__(self):
        if not self.terms:
            return "0"
        keyed = sorted(
            self.terms.items(),
            key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])),
        )
        # roots print before field variables, like extra coefficients
        order = [i for i, v in enumerate(self.vars) if not v.is_field]
        order += [i for i, v in enumerate(self.vars) if v.is_field]
        pieces = []
        for exps, c in keyed:
            factors = [
                f"{self.vars[i].name}^{exps[i]}" if exps[i] != 1 else self.vars[i].name
                for i in order
                if exps[i]
            ]
            ct = c.terms
            if len(ct) == 1:
                (cexps, ci), = ct.items()
                sign = "-" if ci < 0 else "+"
                mag = CoeffElement(c.ring, {cexps: abs(ci)})
                cstr = str(mag)
                if cstr == "1" and factors:
                    body = "*".join(factors)
                else:
                    body = "*".join([cstr] + factors)
            else:
                sign = "+"
                body = "*".join([f"({c})"] + factors)
            if not pieces:
                pieces.append(("-" if sign == "-" else "") + body)
            else:
                pieces.append(f" {sign} " + body)
        return "".join(pieces)

    def __repr__(self):
        return f"<series {self}>"


def _support_window(vars, terms) -> Window:
    floors = {}
    tfloor = 0
    first = True
    for exps in terms:
        td = 0
        for e, v in zip(exps, vars):
            if v.is_field:
                td += e
                if e < floors.get(v.name, 0):
                    floors[v.name] = e
        if first or td < tfloor:
            tfloor = td
            first = False
    return Window({}, floors, INF, min(tfloor, 0) if terms else 0)


@dataclass(frozen=True)
class MeromorphicFGLExpression:
    """Finite sum of Laurent-polynomial coefficients times powers of a law.

    `terms` is a tuple of (n, coefficient series); `expand(law, principal,
    secondary)` realizes sum_n a_n * i_{principal,secondary} F^n.
    """

    terms: tuple

    def expand(self, law, principal="z", secondary="w") -> MultiSeries:
        total = None
        for n, coeff in self.terms:
            piece = coeff * law.power_expand(n, principal, secondary)
            total = piece if total is None else total + piece
        if total is None:
            raise InputError("empty meromorphic expression")
        return total


def int_binom(n: int, k: int) -> int:
    """Binomial coefficient for arbitrary integer n and k >= 0."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return num // den
