"""Model spaces and their homology/cohomology at a fixed degree cutoff.

A SpaceModel is an ordered list of blocks: a point, a truncated projective
space with one root variable, or BU(n) presented through its rank-n
splitting cover with n symmetric roots.  Cohomology classes are sparse
series in the root variables (roots are nilpotent: every root dies one
power above the modeled range).  Homology classes are linear combinations
of cover basis keys, one tuple per block, with coefficients that may be
Laurent series in external field variables such as z and w.

Projective spaces of unbounded dimension are modeled at dimension equal to
the cutoff, which is exact for every pairing and cap the model can express.
BU(n) keys are kept as descending tuples; that canonical form identifies
exactly the classes with equal pairings against all symmetric cohomology
monomials in the modeled range.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coeffs import INHOMOGENEOUS, CoefficientRing
from .errors import ContractError, InputError, ModelMismatchError
from .series import INF, MultiSeries, SeriesVariable, Window

BIG = None  # marker: projective space of unbounded dimension


@dataclass(frozen=True)
class Block:
    """One factor of a model: 'point', 'cp' (size = m, None = unbounded),
    or 'bu' (size = number of cover lines)."""

    kind: str
    size: int | None
    prefix: str

    def __post_init__(self):
        if self.kind not in ("point", "cp", "bu"):
            raise InputError(f"unknown block kind {self.kind!r}")
        if self.kind == "bu" and (self.size is None or self.size < 0):
            raise InputError("bu block needs a nonnegative size")
        if self.kind == "cp" and self.size is not None and self.size < 0:
            raise InputError("cp block size must be nonnegative or None")


def point_block(prefix: str = "p") -> Block:
    return Block("point", 0, prefix)


def cp_block(size: int | None = BIG, prefix: str = "x") -> Block:
    return Block("cp", size, prefix)


def bu_block(n: int, prefix: str = "x") -> Block:
    return Block("bu", n, prefix)


class SpaceModel:
    """Blocks plus a homological degree bound (indices sum to <= degree/2)."""

    def __init__(self, ring: CoefficientRing, blocks, degree: int):
        if degree < 0 or degree % 2:
            raise InputError("degree bound must be a nonnegative even integer")
        self.ring = ring
        self.blocks = tuple(blocks)
        self.degree = degree
        self.cutoff = degree // 2
        roots = []
        self._block_roots = []
        for b in self.blocks:
            if b.kind == "point":
                self._block_roots.append(())
                continue
            if b.kind == "cp":
                bound = self.cutoff if b.size is None else min(b.size, self.cutoff)
                vs = (SeriesVariable(b.prefix, -2, nilpotent_order=bound + 1),)
            else:
                vs = tuple(
                    SeriesVariable(f"{b.prefix}{i + 1}", -2, nilpotent_order=self.cutoff + 1)
                    for i in range(b.size)
                )
            self._block_roots.append(vs)
            roots.extend(vs)
        names = [v.name for v in roots]
        if len(set(names)) != len(names):
            raise InputError(f"root names collide across blocks: {names}")
        self.roots = tuple(roots)

    def __eq__(self, other):
        return (
            isinstance(other, SpaceModel)
            and self.ring == other.ring
            and self.blocks == other.blocks
            and self.degree == other.degree
        )

    def __hash__(self):
        return hash((self.blocks, self.degree))

    def __repr__(self):
        inner = ", ".join(
            b.kind if b.kind == "point" else f"{b.kind}({b.size},{b.prefix})"
            for b in self.blocks
        )
        return f"SpaceModel[{inner}; degree<={self.degree}]"

    def block_roots(self, i: int):
        return self._block_roots[i]

    def block_index_bound(self, i: int) -> int:
        """Largest single t-index a key of block i may carry."""
        b = self.blocks[i]
        if b.kind == "cp" and b.size is not None:
            return min(b.size, self.cutoff)
        return self.cutoff

    def product(self, other: SpaceModel) -> SpaceModel:
        if self.ring != other.ring or self.degree != other.degree:
            raise ModelMismatchError("product factors disagree on ring or degree")
        return SpaceModel(self.ring, self.blocks + other.blocks, self.degree)

    def zero_key(self):
        out = []
        for b in self.blocks:
            if b.kind == "point":
                out.append(())
            elif b.kind == "cp":
                out.append((0,))
            else:
                out.append((0,) * b.size)
        return tuple(out)

    def _block_keys(self, i: int, budget: int):
        b = self.blocks[i]
        if b.kind == "point":
            return [()]
        if b.kind == "cp":
            return [(k,) for k in range(min(self.block_index_bound(i), budget) + 1)]
        return list(_partition_tuples(b.size, min(self.cutoff, budget)))

    def basis_keys(self):
        """All keys of total index <= cutoff, in a deterministic order."""

        def rec(i, budget):
            if i == len(self.blocks):
                yield ()
                return
            for bk in self._block_keys(i, budget):
                used = sum(bk)
                for rest in rec(i + 1, budget - used):
                    yield (bk,) + rest

        return sorted(rec(0, self.cutoff))

    def key_degree(self, key) -> int:
        return 2 * sum(sum(bk) for bk in key)

    def coh_one(self) -> MultiSeries:
        return MultiSeries.const(self.ring, 1, self.roots)

    def coh_root(self, name: str, exp: int = 1) -> MultiSeries:
        return MultiSeries.monomial(self.ring, self.roots, name, exp)

    def hclass(self, terms, fvars=()) -> HClass:
        return HClass(self, terms, fvars)

    def basis_class(self, key, coeff=1, fvars=()) -> HClass:
        return HClass(self, {key: coeff}, fvars)


def _partition_tuples(parts: int, total: int):
    """Weakly decreasing tuples of the given length with sum <= total."""
    if parts == 0:
        yield ()
        return
    for head in range(total, -1, -1):
        for tail in _partition_tuples(parts - 1, min(head * (parts - 1), total - head)):
            if not tail or head >= tail[0]:
                yield (head,) + tail


def _canonical_key(model: SpaceModel, key):
    key = tuple(tuple(bk) for bk in key)
    if len(key) != len(model.blocks):
        raise InputError(f"key {key} has wrong block count")
    out = []
    for bk, b in zip(key, model.blocks):
        if b.kind == "point":
            if bk != ():
                raise InputError("point block key must be empty")
            out.append(())
        elif b.kind == "cp":
            if len(bk) != 1 or bk[0] < 0:
                raise InputError(f"cp block key must be one index, got {bk}")
            out.append(bk)
        else:
            if len(bk) != b.size or any(e < 0 for e in bk):
                raise InputError(f"bu block key needs {b.size} indices, got {bk}")
            out.append(tuple(sorted(bk, reverse=True)))
    return tuple(out)


def _merge_fvars(a, b):
    out = list(a)
    seen = {v.name: v for v in a}
    for v in b:
        old = seen.get(v.name)
        if old is None:
            seen[v.name] = v
            out.append(v)
        elif old != v:
            raise ContractError(f"field variable {v.name!r} redefined inconsistently")
    return tuple(out)


def _field_window(win: Window, names) -> Window:
    cuts = {n: c for n, c in win.cuts.items() if n in names}
    floors = {n: f for n, f in win.floors.items() if n in names}
    return Window(cuts, floors, win.tcut, win.tfloor)


class HClass:
    """Homology element: {key: value}, values series in shared field vars."""

    __slots__ = ("model", "fvars", "terms")

    def __init__(self, model: SpaceModel, terms, fvars=()):
        self.model = model
        self.fvars = tuple(fvars)
        fixed = {}
        for key, val in terms.items():
            key = _canonical_key(model, key)
            if not isinstance(val, MultiSeries):
                val = MultiSeries.const(model.ring, val, self.fvars)
            elif val.names() != tuple(v.name for v in self.fvars):
                val = val.with_vars(self.fvars)
            if sum(sum(bk) for bk in key) > model.cutoff:
                continue
            # an empty value with a restricted window still records distrust,
            # so only a fully trusted zero may be dropped
            if val.is_zero and val.window.trusts_all:
                continue
            if key in fixed:
                fixed[key] = fixed[key] + val
                if fixed[key].is_zero and fixed[key].window.trusts_all:
                    del fixed[key]
            else:
                fixed[key] = val
        self.terms = fixed

    # -- linear structure ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.terms.values())

    def _check_model(self, other):
        if self.model != other.model:
            raise ModelMismatchError(f"{self.model} vs {other.model}")

    def _aligned(self, other: HClass):
        fvars = _merge_fvars(self.fvars, other.fvars)
        a = self if self.fvars == fvars else self.map_values(lambda v: v.with_vars(fvars), fvars)
        b = other if other.fvars == fvars else other.map_values(lambda v: v.with_vars(fvars), fvars)
        return a, b

    def __add__(self, other):
        if not isinstance(other, HClass):
            return NotImplemented
        self._check_model(other)
        a, b = self._aligned(other)
        out = dict(a.terms)
        for key, val in b.terms.items():
            out[key] = out[key] + val if key in out else val
        return HClass(self.model, out, a.fvars)

    def __neg__(self):
        return self.map_values(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> HClass:
        """Multiply every value by a scalar or a field-variable series."""
        if isinstance(c, MultiSeries):
            fvars = _merge_fvars(self.fvars, tuple(v for v in c.vars if v.is_field))
            cc = c.with_vars(fvars)
            return self.map_values(lambda v: v.with_vars(fvars) * cc, fvars)
        return self.map_values(lambda v: v * c)

    def map_values(self, f, fvars=None) -> HClass:
        return HClass(self.model, {k: f(v) for k, v in self.terms.items()},
                      self.fvars if fvars is None else fvars)

    def value(self, key) -> MultiSeries:
        key = _canonical_key(self.model, key)
        return self.terms.get(key, MultiSeries.zero(self.model.ring, self.fvars))

    def group_field(self, name):
        """{exponent: HClass} split along one field variable's powers."""
        i = [v.name for v in self.fvars].index(name)
        rest = self.fvars[:i] + self.fvars[i + 1:]
        out = {}
        for key, val in self.terms.items():
            for e, part in val.group_by(name).items():
                bucket = out.setdefault(e, {})
                bucket[key] = bucket[key] + part if key in bucket else part
        return {
            e: HClass(self.model, terms, rest) for e, terms in sorted(out.items())
        }

    # -- cap and pairing --------------------------------------------------

    def _coh_layout(self, coh: MultiSeries):
        """Positions of each model root and of each field var inside coh."""
        cnames = coh.names()
        root_pos = []
        for vs in self.model._block_roots:
            row = []
            for v in vs:
                row.append(cnames.index(v.name) if v.name in cnames else None)
            root_pos.append(row)
        field_vars = []
        field_pos = []
        for j, v in enumerate(coh.vars):
            if v.is_field:
                field_vars.append(v)
                field_pos.append(j)
            elif v.name not in {r.name for r in self.model.roots}:
                raise ModelMismatchError(f"cohomology variable {v.name!r} not in model")
        return root_pos, tuple(field_vars), field_pos

    def cap(self, coh: MultiSeries) -> HClass:
        """h with each key lowered by the cohomology monomials, bilinearly.

        On a cover block the cap is positional subtraction followed by
        re-sorting; that is the pushforward formula and is well-defined
        because the cohomology side is symmetric in each block's roots.
        """
        root_pos, cfvars, field_pos = self._coh_layout(coh)
        fvars = _merge_fvars(self.fvars, cfvars)
        fnames = [v.name for v in fvars]
        cwin = _field_window(coh.window, set(fnames))
        out = {}
        ring = self.model.ring
        # a monomial consuming more than any key holds at some root, or more
        # than the largest key in total, lowers every key below zero; skip it
        # before the quadratic loop
        rpos = [p for row in root_pos for p in row if p is not None]
        maxidx = dict.fromkeys(rpos, 0)
        total = 0
        for key in self.terms:
            total = max(total, sum(sum(bk) for bk in key))
            for bk, row in zip(key, root_pos):
                for idx, pos in zip(bk, row):
                    if pos is not None and idx > maxidx[pos]:
                        maxidx[pos] = idx
        for exps, c in coh.terms.items():
            if sum(exps[p] for p in rpos) > total:
                continue
            if any(exps[p] > maxidx[p] for p in rpos):
                continue
            fexp = [0] * len(fvars)
            for v, j in zip(cfvars, field_pos):
                fexp[fnames.index(v.name)] = exps[j]
            mono = MultiSeries(ring, fvars, {tuple(fexp): c}, cwin)
            for key, val in self.terms.items():
                newkey = []
                for bk, row in zip(key, root_pos):
                    lowered = []
                    dead = False
                    for idx, pos in zip(bk, row):
                        e = exps[pos] if pos is not None else 0
                        if idx - e < 0:
                            dead = True
                            break
                        lowered.append(idx - e)
                    if dead:
                        newkey = None
                        break
                    newkey.append(tuple(lowered))
                if newkey is None:
                    continue
                newkey = tuple(newkey)
                contrib = val.with_vars(fvars) * mono
                out[newkey] = out[newkey] + contrib if newkey in out else contrib
        return HClass(self.model, out, fvars)

    def pair(self, coh: MultiSeries) -> MultiSeries:
        """<h, coh> as a series in the field variables.

        Per block the pairing reads the cohomology coefficient at exactly
        the key's exponent tuple; on symmetric classes that is the Kronecker
        pairing of the cover basis.
        """
        root_pos, cfvars, field_pos = self._coh_layout(coh)
        fvars = _merge_fvars(self.fvars, cfvars)
        fnames = [v.name for v in fvars]
        cwin = _field_window(coh.window, set(fnames))
        ring = self.model.ring
        acc = MultiSeries.zero(ring, fvars)
        for exps, c in coh.terms.items():
            fexp = [0] * len(fvars)
            for v, j in zip(cfvars, field_pos):
                fexp[fnames.index(v.name)] = exps[j]
            for key, val in self.terms.items():
                hit = True
                for bk, row in zip(key, root_pos):
                    for idx, pos in zip(bk, row):
                        e = exps[pos] if pos is not None else 0
                        if e != idx:
                            hit = False
                            break
                    if not hit:
                        break
                if not hit:
                    continue
                mono = MultiSeries(ring, fvars, {tuple(fexp): c}, cwin)
                acc = acc + val.with_vars(fvars) * mono
        return acc

    def pairing(self, coh: MultiSeries):
        """Constant pairing value; requires no field variables anywhere."""
        out = self.pair(coh)
        if out.vars:
            raise ContractError("pairing with field variables present; use pair()")
        return out.coefficient()

    # -- tensor -----------------------------------------------------------

    def boxtimes(self, other: HClass) -> HClass:
        """External product on the concatenated model."""
        model = self.model.product(other.model)
        fvars = _merge_fvars(self.fvars, other.fvars)
        out = {}
        for k1, v1 in self.terms.items():
            lv = v1.with_vars(fvars)
            for k2, v2 in other.terms.items():
                val = lv * v2.with_vars(fvars)
                key = k1 + k2
                out[key] = out[key] + val if key in out else val
        return HClass(model, out, fvars)

    # -- comparison --------------------------------------------------------

    def equal_within(self, other: HClass):
        self._check_model(other)
        a, b = self._aligned(other)
        for key in sorted(set(a.terms) | set(b.terms)):
            va = a.terms.get(key, MultiSeries.zero(self.model.ring, a.fvars))
            vb = b.terms.get(key, MultiSeries.zero(self.model.ring, a.fvars))
            ok, witness = va.equal_within(vb)
            if not ok:
                return False, (key,) + witness
        return True, None

    def is_zero_within(self):
        zero = HClass(self.model, {}, self.fvars)
        return self.equal_within(zero)

    def __eq__(self, other):
        if not isinstance(other, HClass):
            return NotImplemented
        ok, _ = self.equal_within(other)
        return ok

    __hash__ = None

    def homogeneous_degree(self):
        degs = set()
        for key, val in self.terms.items():
            if not val.terms:
                # a kept zero only records distrust; it has no content to grade
                continue
            d = val.homogeneous_degree()
            if d == INHOMOGENEOUS:
                return INHOMOGENEOUS
            degs.add(self.model.key_degree(key) + d)
            if len(degs) > 1:
                return INHOMOGENEOUS
        return degs.pop() if degs else 0

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, val in sorted(self.terms.items()):
            names = []
            for bk, b in zip(key, self.model.blocks):
                if b.kind == "point":
                    names.append("pt")
                elif b.kind == "cp":
                    names.append(f"t{bk[0]}")
                else:
                    names.append("{" + ",".join(f"t{i}" for i in bk) + "}")
            parts.append(f"({val})*" + "&".join(names))
        return " + ".join(parts)

    def __repr__(self):
        return f"<hclass {self}>"


# -- pushforwards ---------------------------------------------------------


def _require_blocks(h: HClass, kinds):
    bs = h.model.blocks
    if len(bs) != len(kinds) or any(b.kind != k for b, k in zip(bs, kinds)):
        raise ModelMismatchError(
            f"expected blocks {kinds}, got {[b.kind for b in bs]}"
        )


def push_mu(h: HClass, law, prefix: str | None = None) -> HClass:
    """Multiply the two projective factors: t_i (x) t_j -> sum_n F^n_ij t_n."""
    _require_blocks(h, ("cp", "cp"))
    model = h.model
    target = SpaceModel(
        model.ring, (cp_block(BIG, prefix or model.blocks[0].prefix),), model.degree
    )
    table = law.positive_power_table(model.cutoff)
    out = {}
    for key, val in h.terms.items():
        (i,), (j,) = key
        for n, c in table.get((i, j), {}).items():
            if n > model.cutoff:
                continue
            add = val * c
            k = ((n,),)
            out[k] = out[k] + add if k in out else add
    return HClass(target, out, h.fvars)


def push_diag(h: HClass, n: int = 2, prefixes=None) -> HClass:
    """Diagonal on a projective factor: t_k -> sum over splittings of k."""
    _require_blocks(h, ("cp",))
    model = h.model
    base = model.blocks[0].prefix
    if prefixes is None:
        prefixes = tuple(f"{base}d{i + 1}" for i in range(n))
    target = SpaceModel(
        model.ring, tuple(cp_block(model.blocks[0].size, p) for p in prefixes), model.degree
    )
    out = {}
    for key, val in h.terms.items():
        k = key[0][0]
        for split in _compositions(k, n):
            kk = tuple((i,) for i in split)
            out[kk] = out[kk] + val if kk in out else val
    return HClass(target, out, h.fvars)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _phi_target(model: SpaceModel, prefix: str | None = None) -> SpaceModel:
    a, b = model.blocks
    if a.kind == "point":
        merged = b
    elif b.kind == "point":
        merged = a
    else:
        if a.kind != "bu" or b.kind != "bu":
            raise ModelMismatchError("direct-sum push needs bu or point blocks")
        merged = bu_block(a.size + b.size, a.prefix)
    if prefix is not None and merged.kind != "point":
        merged = Block(merged.kind, merged.size, prefix)
    return SpaceModel(model.ring, (merged,), model.degree)


def push_phi(h: HClass, prefix: str | None = None) -> HClass:
    """Direct-sum map on covers: concatenate the two key multisets."""
    if len(h.model.blocks) != 2:
        raise ModelMismatchError("push_phi expects a two-block model")
    target = _phi_target(h.model, prefix)
    out = {}
    for key, val in h.terms.items():
        merged = (tuple(sorted(key[0] + key[1], reverse=True)),)
        out[merged] = out[merged] + val if merged in out else val
    return HClass(target, out, h.fvars)


def push_swap(h: HClass) -> HClass:
    """Exchange the two blocks of a product model."""
    if len(h.model.blocks) != 2:
        raise ModelMismatchError("push_swap expects a two-block model")
    model = h.model
    target = SpaceModel(model.ring, (model.blocks[1], model.blocks[0]), model.degree)
    out = {(key[1], key[0]): val for key, val in h.terms.items()}
    return HClass(target, out, h.fvars)


def push_psi(h: HClass, law) -> HClass:
    """Scaling action of the projective factor on the block after it.

    On covers: split t_k across the block's lines (iterated diagonal), then
    multiply into each line (factorwise mu tables).  Blocks past the second
    ride along untouched, so the map also implements "scale the first factor"
    on product models.
    """
    if len(h.model.blocks) < 2 or h.model.blocks[0].kind != "cp":
        raise ModelMismatchError("push_psi expects (cp, block, ...)")
    model = h.model
    b = model.blocks[1]
    target = SpaceModel(model.ring, model.blocks[1:], model.degree)
    cutoff = model.cutoff
    table = law.positive_power_table(cutoff)
    ring = model.ring
    out = {}

    def emit(key, val):
        out[key] = out[key] + val if key in out else val

    for key, val in h.terms.items():
        k = key[0][0]
        mk = key[1]
        rest = key[2:]
        if b.kind == "point":
            if k == 0:
                emit(((),) + rest, val)
            continue
        if b.kind == "cp":
            for n, c in table.get((k, mk[0]), {}).items():
                if n <= cutoff:
                    emit(((n,),) + rest, val * c)
            continue
        for split in _compositions(k, b.size):
            choices = []
            for ki, mi in zip(split, mk):
                row = [(n, c) for n, c in table.get((ki, mi), {}).items() if n <= cutoff]
                choices.append(row)
            for combo in itertools.product(*choices):
                idx = tuple(sorted((n for n, _ in combo), reverse=True))
                if sum(idx) > cutoff:
                    continue
                c = ring.one
                for _, ci in combo:
                    c = c * ci
                emit((idx,) + rest, val * c)
    return HClass(target, out, h.fvars)


# -- pullbacks -------------------------------------------------------------


def pull_phi(c: MultiSeries, source: SpaceModel, target: SpaceModel) -> MultiSeries:
    """Restrict along the direct-sum map: relabel target roots by the
    concatenated source roots, in order."""
    tnames = [v.name for v in target.roots]
    snames = [v.name for v in source.roots]
    if len(tnames) != len(snames):
        raise ModelMismatchError("root counts differ under pull_phi")
    mapping = dict(zip(tnames, source.roots))
    return c.rename_vars({n: mapping[n] for n in tnames if n in c.names()})


def pull_swap(c: MultiSeries, model: SpaceModel) -> MultiSeries:
    """Exchange the two blocks' roots positionally (sizes must match)."""
    if len(model.blocks) != 2:
        raise ModelMismatchError("pull_swap expects a two-block model")
    r1 = model.block_roots(0)
    r2 = model.block_roots(1)
    if len(r1) != len(r2):
        raise ModelMismatchError("pull_swap needs equal root counts")
    mapping = {}
    for a, b in zip(r1, r2):
        mapping[a.name] = SeriesVariable(b.name, a.degree, a.laurent, a.nilpotent_order)
        mapping[b.name] = SeriesVariable(a.name, b.degree, b.laurent, b.nilpotent_order)
    return c.rename_vars({n: v for n, v in mapping.items() if n in c.names()})


def pull_mu(c: MultiSeries, source: SpaceModel, law) -> MultiSeries:
    """Restrict along multiplication: the single root goes to F(x, y)."""
    if len(source.blocks) != 2:
        raise ModelMismatchError("pull_mu source needs two cp blocks")
    (old,) = [v for v in c.vars if not v.is_field]
    x, y = source.roots
    xm = MultiSeries.monomial(source.ring, source.roots, x.name)
    ym = MultiSeries.monomial(source.ring, source.roots, y.name)
    repl = law.compose(xm, ym)
    return c.substitute(old.name, repl)


def pull_diag(c: MultiSeries, target: SpaceModel) -> MultiSeries:
    """Restrict along the diagonal: all roots collapse to the single root."""
    (root,) = target.roots
    mapping = {v.name: root for v in c.vars if not v.is_field}
    return c.rename_vars(mapping)


def pull_psi(c: MultiSeries, u: SeriesVariable, law) -> MultiSeries:
    """Restrict along the scaling action: every root x becomes F(u, x)."""
    out = c
    for v in list(c.vars):
        if v.is_field or v.name == u.name:
            continue
        pair_vars = (u, v)
        um = MultiSeries.monomial(c.ring, pair_vars, u.name)
        xm = MultiSeries.monomial(c.ring, pair_vars, v.name)
        out = out.substitute(v.name, law.compose(um, xm))
    return out


def symmetric_monomial(model: SpaceModel, partitions) -> MultiSeries:
    """Product over blocks of monomial symmetric polynomials m_lambda."""
    if len(partitions) != len(model.blocks):
        raise InputError("one partition per block required")
    acc = model.coh_one()
    for i, lam in enumerate(partitions):
        vs = model.block_roots(i)
        lam = tuple(sorted(lam, reverse=True))
        if len(lam) != len(vs):
            raise InputError(f"partition {lam} does not fit block {i}")
        terms = {}
        for perm in set(itertools.permutations(lam)):
            exps = [0] * len(model.roots)
            for v, e in zip(vs, perm):
                exps[model.roots.index(v)] = e
            terms[tuple(exps)] = 1
        acc = acc * MultiSeries.from_terms(model.ring, model.roots, terms)
    return acc
