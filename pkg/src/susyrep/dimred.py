"""Dimensional reduction of 4D supermultiplets to 1D Garden reps.

All arithmetic is exact (sympy rationals and ``I``). A multiplet is
described by a JSON transformation table: each boson maps, under ``D_a``,
to a sum of terms ``coeff * (gamma product)_a^b * d^deriv fermion_b``.
Gamma factors are ``"0".."3"``, ``"5"``, ``"_0".."_3"`` (index lowered
with the metric), or ``"mu"``/``"_mu"`` summed against a ``"deriv": "mu"``.
Reduction keeps only time derivatives.

A boson whose law carries one time derivative is an auxiliary field sitting
one row higher; its ``L`` row is read off the coefficient of ``d_0 psi``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import sympy as sp

from .garden import GardenRep, garden_residual

GAMMA_KEYS = ("0", "1", "2", "3", "5")

# Reference gamma^0 and gamma^5; rows 3-4 of gamma^5 are the ones forced by
# anticommutation with the other gamma matrices.
PINNED_GAMMA0 = sp.Matrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
PINNED_GAMMA5 = sp.I * sp.Matrix([[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
# Same as PINNED_GAMMA5 with rows 3-4 negated. Not a valid gamma^5.
FLIPPED_GAMMA5 = sp.I * sp.Matrix([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])


class ConventionError(ValueError):
    pass


class CliffordViolation(ConventionError):
    pass


ClifffordViolation = CliffordViolation


class PaperMismatch(ConventionError):
    pass


class ReductionError(ValueError):
    pass


class ReductionInconsistent(ReductionError):
    pass


class UnbalancedMultiplet(ReductionError):
    pass


@dataclass(frozen=True)
class GammaConventions:
    gamma: dict[str, sp.Matrix]
    signature: tuple[int, int, int, int] = (-1, 1, 1, 1)
    name: str = "custom"

    def eta(self, mu: int) -> int:
        return self.signature[mu]

    def factor(self, key: str) -> sp.Matrix:
        """Matrix for a single gamma factor key such as ``"5"`` or ``"_2"``."""
        if key.startswith("_"):
            mu = int(key[1:])
            return self.eta(mu) * self.gamma[str(mu)]
        return self.gamma[key]


def _parse_entry(q) -> sp.Expr:
    if isinstance(q, (int, float)) and not isinstance(q, bool):
        return sp.nsimplify(q)
    if not (isinstance(q, list) and len(q) == 4):
        raise ConventionError(f"entry must be [re_num, re_den, im_num, im_den], got {q!r}")
    re_num, re_den, im_num, im_den = (int(x) for x in q)
    return sp.Rational(re_num, re_den) + sp.I * sp.Rational(im_num, im_den)


def _entry_to_json(x: sp.Expr) -> list[int]:
    re, im = sp.Rational(sp.re(x)), sp.Rational(sp.im(x))
    return [int(re.p), int(re.q), int(im.p), int(im.q)]


def conventions_to_json(g: GammaConventions) -> dict:
    return {
        "name": g.name,
        "signature": list(g.signature),
        "entry_format": "[re_num, re_den, im_num, im_den]",
        "gamma": {
            k: [[_entry_to_json(g.gamma[k][i, j]) for j in range(4)] for i in range(4)]
            for k in GAMMA_KEYS
        },
    }


def _bundled(name: str) -> dict:
    return json.loads(resources.files("susyrep").joinpath("data", name).read_text())


def _read(source) -> dict:
    if isinstance(source, dict):
        return source
    return json.loads(Path(source).read_text())


def check_conventions(g: GammaConventions) -> None:
    """Raise ``CliffordViolation`` unless the gamma set is a Clifford algebra
    for its signature with a ``gamma^5`` squaring to 1 and anticommuting with
    every ``gamma^mu``."""
    sig = g.signature
    if sorted(sig) not in ([-1, 1, 1, 1], [-1, -1, -1, 1]):
        raise CliffordViolation(f"signature {sig} is not Lorentzian")
    eye = sp.eye(4)
    for mu in range(4):
        for nu in range(mu, 4):
            a, b = g.gamma[str(mu)], g.gamma[str(nu)]
            target = 2 * sig[mu] * eye if mu == nu else sp.zeros(4)
            if sp.simplify(a * b + b * a - target) != sp.zeros(4):
                raise CliffordViolation(f"{{gamma^{mu}, gamma^{nu}}} != 2 eta^{mu}{nu} 1")
    g5 = g.gamma["5"]
    if sp.simplify(g5 * g5 - eye) != sp.zeros(4):
        raise CliffordViolation("(gamma^5)^2 != 1")
    for mu in range(4):
        a = g.gamma[str(mu)]
        if sp.simplify(g5 * a + a * g5) != sp.zeros(4):
            raise CliffordViolation(f"gamma^5 does not anticommute with gamma^{mu}")


def load_conventions(source=None, check_pinned: bool = True) -> GammaConventions:
    """Load and validate a convention file (bundled default when ``None``).

    ``check_pinned`` additionally requires ``gamma^0`` and ``gamma^5`` to equal
    the pinned matrices; disable it to try other bases.
    """
    raw = _bundled("conventions_default.json") if source is None else _read(source)
    try:
        gamma = {}
        for k in GAMMA_KEYS:
            rows = raw["gamma"][k]
            m = sp.Matrix([[_parse_entry(x) for x in row] for row in rows])
            if m.shape != (4, 4):
                raise ConventionError(f"gamma^{k} must be 4x4, got {m.shape}")
            gamma[k] = m
        signature = tuple(int(s) for s in raw.get("signature", (-1, 1, 1, 1)))
    except KeyError as exc:
        raise ConventionError(f"convention file is missing {exc}") from None
    g = GammaConventions(gamma, signature, raw.get("name", "custom"))
    check_conventions(g)
    if check_pinned:
        if g.gamma["0"] != PINNED_GAMMA0:
            raise PaperMismatch("gamma^0 differs from the pinned matrix")
        if g.gamma["5"] != PINNED_GAMMA5:
            raise PaperMismatch("gamma^5 differs from the pinned matrix")
    return g


@dataclass
class MultipletSpec:
    name: str
    N: int
    bosons: list[str]
    fermion_field: str
    components: int
    laws: dict[str, list[dict]]
    fermion_laws: dict[str, list[list[dict]]] | None = None
    dropped: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def fermions(self) -> list[str]:
        if self.components == 1:
            return [self.fermion_field]
        return [f"{self.fermion_field}{b + 1}" for b in range(self.components)]

    @classmethod
    def from_json(cls, obj) -> "MultipletSpec":
        obj = _read(obj)
        ferm = obj["fermions"]
        return cls(
            name=obj.get("name", "custom"),
            N=int(obj["N"]),
            bosons=list(obj["bosons"]),
            fermion_field=ferm["name"],
            components=int(ferm["components"]),
            laws=obj["laws"],
            fermion_laws=obj.get("fermion_laws"),
            dropped=list(obj.get("dropped", [])),
            notes=list(obj.get("notes", [])),
        )


def load_multiplet(name_or_path) -> MultipletSpec:
    if name_or_path in ("chiral", "vector", "toy_n1"):
        return MultipletSpec.from_json(_bundled(f"{name_or_path}.json"))
    return MultipletSpec.from_json(name_or_path)


_UNITS = {"1": sp.Integer(1), "-1": sp.Integer(-1), "i": sp.I, "-i": -sp.I}


def _coeff(c) -> sp.Expr:
    if isinstance(c, str):
        if c not in _UNITS:
            raise ReductionInconsistent(f"coefficient {c!r} must be one of {sorted(_UNITS)} or a quadruple")
        return _UNITS[c]
    return _parse_entry(c)


@dataclass
class Reduction:
    rep: GardenRep
    provenance: list[dict]
    auxiliary: list[str]
    notes: list[str]

    def to_json(self) -> dict:
        out = self.rep.to_json()
        out["provenance"] = self.provenance
        out["auxiliary"] = self.auxiliary
        if self.notes:
            out["notes"] = self.notes
        return out


def _term_matrix(term: dict, spec: MultipletSpec, g: GammaConventions):
    """Reduced matrix of one term and its number of time derivatives, or
    None when only spatial derivatives survive (the term vanishes)."""
    keys = list(term.get("gamma", []))
    deriv = term.get("deriv")
    n = spec.components
    if keys and n != 4:
        raise ReductionInconsistent("gamma factors need a 4-component fermion")
    if deriv == "mu":
        mu = 0  # spatial derivatives are set to zero
        keys = [("_" + str(mu)) if k == "_mu" else (str(mu) if k == "mu" else k) for k in keys]
        order = 1
    elif deriv is None:
        order = 0
        if any(k in ("mu", "_mu") for k in keys):
            raise ReductionInconsistent("free index mu without a matching derivative")
    else:
        if int(deriv) != 0:
            return None
        order = 1
    m = sp.eye(n)
    for k in keys:
        m = m * g.factor(k)
    return _coeff(term.get("coeff", "1")) * m, order


def reduce_custom(
    spec: MultipletSpec, g: GammaConventions | None = None, keep_spatial: bool = False
) -> Reduction:
    """Reduce a multiplet table to a 1D rep plus a provenance table.

    ``R_I`` is taken as the exact inverse of ``L_I``; when the table carries
    fermion laws they are reduced as well and must agree with it.
    """
    if keep_spatial:
        raise ReductionInconsistent(
            "reduction is only defined with spatial derivatives set to zero"
        )
    if g is None:
        g = load_conventions()
    fermions = spec.fermions
    if len(spec.bosons) != len(fermions):
        raise UnbalancedMultiplet(f"{len(spec.bosons)} bosons but {len(fermions)} fermions")
    n_colors, d = spec.N, len(fermions)
    if spec.components == 4 and n_colors != 4:
        raise ReductionInconsistent("a 4-component spinor multiplet needs N = 4")
    missing = [b for b in spec.bosons if b not in spec.laws]
    if missing:
        raise ReductionInconsistent(f"no transformation law for bosons {missing}")

    L = np.zeros((n_colors, d, d), dtype=np.int64)
    provenance, auxiliary = [], []
    for row, boson in enumerate(spec.bosons):
        total, orders = sp.zeros(n_colors, d), set()
        for term in spec.laws[boson]:
            reduced = _term_matrix(term, spec, g)
            if reduced is None:
                continue
            m, order = reduced
            total += m
            orders.add(order)
        total = total.applyfunc(sp.nsimplify)
        if len(orders) != 1:
            raise ReductionInconsistent(f"D {boson} mixes derivative orders {sorted(orders)} after reduction")
        order = orders.pop()
        if order:
            auxiliary.append(boson)
        for a in range(n_colors):
            nz = [(b, total[a, b]) for b in range(d) if total[a, b] != 0]
            if len(nz) != 1 or nz[0][1] not in (1, -1):
                raise ReductionInconsistent(
                    f"D_{a + 1} {boson} reduces to {list(total.row(a))}, not +-1 times one fermion"
                )
            b, val = nz[0]
            L[a, row, b] = int(val)
            provenance.append(
                {
                    "color": a + 1,
                    "boson": boson,
                    "fermion": fermions[b],
                    "value": int(val),
                    "time_derivative": bool(order),
                    "law": json.dumps(spec.laws[boson], separators=(",", ":")),
                }
            )

    R = np.zeros_like(L)
    for a in range(n_colors):
        inv = sp.Matrix(L[a].tolist()).inv()
        if any(x != int(x) for x in inv):
            raise ReductionInconsistent(f"L_{a + 1} inverse is not integral")
        R[a] = np.array(inv.tolist(), dtype=np.int64)

    if spec.fermion_laws is not None:
        R_laws = _reduce_fermion_laws(spec, auxiliary, n_colors, d)
        if not np.array_equal(R_laws, R):
            raise ReductionInconsistent("fermion laws disagree with the inverse of L")

    notes = list(spec.notes)
    if spec.dropped:
        notes.append("dropped fields: " + ", ".join(spec.dropped))
    rep = GardenRep(L, R, tuple(spec.bosons), tuple(fermions), notes=tuple(notes))
    if garden_residual(rep) == 0:
        rep = GardenRep(L, R, tuple(spec.bosons), tuple(fermions), verified=True, notes=tuple(notes))
    return Reduction(rep, provenance, auxiliary, notes)


def _reduce_fermion_laws(spec: MultipletSpec, auxiliary: list[str], n_colors: int, d: int) -> np.ndarray:
    # Q_a psi_f = i sum_beta (R_a)_{f beta} d_0 phi_beta
    R = np.zeros((n_colors, d, d), dtype=np.int64)
    index = {b: k for k, b in enumerate(spec.bosons)}
    for f, fermion in enumerate(spec.fermions):
        per_color = spec.fermion_laws.get(fermion)
        if per_color is None or len(per_color) != n_colors:
            raise ReductionInconsistent(f"fermion law for {fermion} needs one entry per color")
        for a, terms in enumerate(per_color):
            for term in terms:
                deriv = term.get("deriv")
                if deriv not in (None, "0", 0):
                    continue
                order = (deriv is not None) + (term["boson"] in auxiliary)
                if order != 1:
                    raise ReductionInconsistent(f"D_{a + 1} {fermion} term is not at the boson row below")
                val = sp.nsimplify(_coeff(term.get("coeff", "1")) / sp.I)
                if val not in (1, -1):
                    raise ReductionInconsistent(f"D_{a + 1} {fermion} coefficient is not +-i")
                R[a, f, index[term["boson"]]] += int(val)
    return R


def _builtin(name: str, g: GammaConventions | None, keep_spatial: bool) -> GardenRep:
    red = reduce_custom(load_multiplet(name), g, keep_spatial)
    if not red.rep.verified:
        raise ReductionInconsistent(
            f"reduced {name} multiplet violates the Garden Algebra (residual {garden_residual(red.rep)})"
        )
    return red.rep


def reduce_chiral(g: GammaConventions | None = None, keep_spatial: bool = False) -> GardenRep:
    """Bosons (A, B, F, G), fermions (Psi1..Psi4)."""
    return _builtin("chiral", g, keep_spatial)


def reduce_vector(g: GammaConventions | None = None, keep_spatial: bool = False) -> GardenRep:
    """Bosons (A_1, A_2, A_3, d), fermions (lambda1..lambda4); A_0 dropped."""
    return _builtin("vector", g, keep_spatial)
