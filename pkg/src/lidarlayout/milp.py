"""Big-M mixed-integer linear encoding of the coverage objective.

Mount positions stay continuous decision variables; mount angles must be
fixed because they enter the side tests through sines and cosines.  Each
laser cone is replaced by its inscribed pyramid so that, with the apex as
the only unknown, every face test is affine in the position variables.

Gate cascade per shell-assigned cube:

* one binary per pyramid face, set when the cube is on the downward side of
  that face plane (threshold encoding with constants big_m and epsilon),
* ``d_la`` per laser, the OR of its face binaries: downward side of the
  pyramid.  The upward side is the complement, above all faces,
* ``d_seg`` per LiDAR and per realizable side vector, an AND over the
  lasers' ``d_la`` literals with the polarity the vector asks for,
* ``d_c`` per (subspace, cube), an AND of the matching ``d_seg`` across
  LiDARs,
* ``d_ss`` per (subspace, cylinder shell), the sum of its ``d_c``,
* a continuous bound ``t`` over all ``d_ss`` that the model minimizes.

Face, laser and per-LiDAR gates are shared across subspaces; only ``d_c``
fans out per pattern.  The threshold encoding leaves test values strictly
inside (0, epsilon) with no feasible indicator at all, so positions putting
a cube boundary that close to a face plane are cut off rather than rounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import pyramid_planes, rotation_x, rotation_y


class BigMValidationError(ValueError):
    """An affine test can exceed big_m somewhere in the position box."""


class DeadBandError(RuntimeError):
    """A fixed position puts an affine test inside the open (0, epsilon) band."""


@dataclass(frozen=True)
class MilpParams:
    big_m: float = 200.0
    epsilon: float = 0.01
    n_faces: int = 4

    def __post_init__(self):
        if not self.big_m > 0:
            raise ValueError(f"big_m must be positive, got {self.big_m}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.n_faces < 3:
            raise ValueError(f"n_faces must be at least 3, got {self.n_faces}")


@dataclass(frozen=True)
class Lit:
    """A binary variable or, with ``negated=True``, its complement 1 - v."""

    name: str
    negated: bool = False


def neg(name: str) -> Lit:
    return Lit(name, negated=True)


def _as_lit(x) -> Lit:
    return x if isinstance(x, Lit) else Lit(str(x))


def _complement(lit: Lit) -> Lit:
    return Lit(lit.name, not lit.negated)


@dataclass(frozen=True)
class Affine:
    """Linear expression sum(coeff * var) + constant."""

    coeffs: tuple[tuple[str, float], ...]
    constant: float = 0.0

    def value_range(self, var_bounds: dict) -> tuple[float, float]:
        """Interval of values over a box of variable bounds."""
        lo = hi = self.constant
        for name, c in self.coeffs:
            a, b = var_bounds[name]
            lo += min(c * a, c * b)
            hi += max(c * a, c * b)
        return lo, hi


@dataclass
class Variable:
    name: str
    kind: str  # "binary" or "continuous"
    lower: float
    upper: float


@dataclass
class Constraint:
    name: str
    coeffs: tuple[tuple[str, float], ...]
    sense: str  # "<=", ">=" or "="
    rhs: float


@dataclass
class MilpModel:
    """Variables, constraints and a minimized linear objective."""

    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: tuple[tuple[str, float], ...] = ()
    classes: dict[str, list[str]] = field(default_factory=dict)

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def add_variable(self, name: str, kind: str, lower: float, upper: float,
                     cls: str) -> str:
        self.variables.append(Variable(name, kind, float(lower), float(upper)))
        self.classes.setdefault(cls, []).append(name)
        return name

    def variable_bounds(self) -> dict[str, tuple[float, float]]:
        return {v.name: (v.lower, v.upper) for v in self.variables}


_CLASS_PREFIXES = (
    ("d_face_", "d_face"),
    ("d_la_", "d_la"),
    ("d_seg_", "d_seg"),
    ("d_ss_", "d_ss"),
    ("d_c_", "d_c"),
)


def classify_variable(name: str) -> str:
    for prefix, cls in _CLASS_PREFIXES:
        if name.startswith(prefix):
            return cls
    if name == "t":
        return "bound"
    if name[:1] in ("X", "Y", "Z") and name[1:].isdigit():
        return "position"
    return "other"


def infer_classes(names) -> dict[str, list[str]]:
    classes: dict[str, list[str]] = {}
    for n in names:
        classes.setdefault(classify_variable(n), []).append(n)
    return classes


def _to_constraint(name: str, expr: dict, const: float, sense: str, rhs: float) -> Constraint:
    coeffs = tuple((v, c + 0.0) for v, c in expr.items() if c != 0.0)
    return Constraint(name=name, coeffs=coeffs, sense=sense, rhs=float(rhs - const))


def _accumulate(expr: dict, const: float, lit: Lit, weight: float) -> float:
    """Add weight * lit to expr, folding complements into the constant."""
    if lit.negated:
        expr[lit.name] = expr.get(lit.name, 0.0) - weight
        return const + weight
    expr[lit.name] = expr.get(lit.name, 0.0) + weight
    return const


def _check_gate(inputs: list[Lit], output, params: MilpParams) -> tuple[list[Lit], Lit]:
    lits = [_as_lit(x) for x in inputs]
    if not lits:
        raise ValueError("gate needs at least one input")
    if len(lits) > params.big_m:
        raise BigMValidationError(
            f"big_m={params.big_m} too small for a gate with {len(lits)} inputs")
    out = _as_lit(output)
    if out.negated:
        raise ValueError("gate output must be a plain variable")
    return lits, out


def encode_and(inputs, output, params: MilpParams, name: str | None = None) -> list[Constraint]:
    """Two inequalities forcing output = AND(inputs) at binary points.

    Stated over the complements (1 - v) of output and inputs: the first
    inequality pins the output complement at 0 when every input complement
    is 0, the second lifts it to 1 as soon as any input complement is set.
    """
    lits, out = _check_gate(inputs, output, params)
    base = name or f"and_{out.name}"
    expr: dict = {}
    const = 0.0
    for lit in lits:
        const = _accumulate(expr, const, _complement(lit), -1.0)
    const = _accumulate(expr, const, Lit(out.name, True), 1.0)
    c1 = _to_constraint(f"{base}_lo", expr, const, "<=", params.epsilon)
    expr = {}
    const = 0.0
    for lit in lits:
        const = _accumulate(expr, const, _complement(lit), 1.0)
    const = _accumulate(expr, const, Lit(out.name, True), -params.big_m)
    c2 = _to_constraint(f"{base}_hi", expr, const, "<=", params.epsilon)
    return [c1, c2]


def encode_or(inputs, output, params: MilpParams, name: str | None = None) -> list[Constraint]:
    """Two inequalities forcing output = OR(inputs) at binary points."""
    lits, out = _check_gate(inputs, output, params)
    base = name or f"or_{out.name}"
    expr: dict = {}
    const = 0.0
    for lit in lits:
        const = _accumulate(expr, const, lit, -1.0)
    const = _accumulate(expr, const, Lit(out.name), 1.0)
    c1 = _to_constraint(f"{base}_lo", expr, const, "<=", params.epsilon)
    expr = {}
    const = 0.0
    for lit in lits:
        const = _accumulate(expr, const, lit, 1.0)
    const = _accumulate(expr, const, Lit(out.name), -params.big_m)
    c2 = _to_constraint(f"{base}_hi", expr, const, "<=", params.epsilon)
    return [c1, c2]


def encode_if_then_else(f: Affine, indicator: str, params: MilpParams,
                        var_bounds: dict, name: str | None = None) -> list[Constraint]:
    """Threshold encoding: indicator = 1 iff f(x) <= 0, = 0 iff f(x) >= epsilon.

    Emits ``f(x) <= big_m (1 - d)`` and ``f(x) >= epsilon - (big_m + epsilon) d``.
    Values of f strictly inside (0, epsilon) satisfy neither indicator value,
    so the encoding cuts such points off rather than rounding them; callers
    must size big_m to cover |f| over the whole variable box, which is
    validated here.
    """
    lo, hi = f.value_range(var_bounds)
    if max(abs(lo), abs(hi)) > params.big_m + 1e-9:
        raise BigMValidationError(
            f"affine test for {indicator} spans [{lo:.6g}, {hi:.6g}], "
            f"outside +-big_m={params.big_m}")
    base = name or f"ite_{indicator}"
    expr = {v: c + 0.0 for v, c in f.coeffs}
    const = f.constant
    expr[indicator] = expr.get(indicator, 0.0) + params.big_m
    c1 = _to_constraint(f"{base}_ub", expr, const, "<=", params.big_m)
    expr = {v: c + 0.0 for v, c in f.coeffs}
    expr[indicator] = expr.get(indicator, 0.0) + params.big_m + params.epsilon
    c2 = _to_constraint(f"{base}_lb", expr, const, ">=", params.epsilon)
    return [c1, c2]


def build_model(fleet, fixed_angles, lattice, shells, patterns,
                params: MilpParams = MilpParams(),
                position_bounds=None) -> MilpModel:
    """Assemble the minimax placement model with positions free, angles fixed.

    ``fixed_angles`` is one (pitch, roll) pair per LiDAR; ``patterns`` the
    full subspace enumeration.  Position variables X{l}, Y{l}, Z{l} are
    bounded by the scored box unless ``position_bounds`` overrides it.
    Every face test is validated against big_m over that box at build time.
    """
    n_l, n_r, n_f = fleet.n_lidars, fleet.n_lasers, params.n_faces
    if len(fixed_angles) != n_l:
        raise ValueError("one (pitch, roll) pair per LiDAR required")
    if len(patterns) != fleet.n_subspaces:
        raise ValueError("patterns must enumerate every subspace of the fleet")
    for p in patterns:
        if len(p.flags) != n_l or any(len(v) != n_r for v in p.flags):
            raise ValueError("pattern shape does not match the fleet")
    bounds = tuple(position_bounds) if position_bounds is not None else lattice.roi.ranges

    model = MilpModel()
    for l in range(n_l):
        for axis, (lo, hi) in zip(("X", "Y", "Z"), bounds):
            model.add_variable(f"{axis}{l}", "continuous", lo, hi, "position")
    var_bounds = model.variable_bounds()

    assigned = shells.assigned_indices
    cube_ids = [int(i) for i in assigned]
    centers = lattice.centers[assigned]
    shell_of = shells.shell_of_cube[assigned]

    # Car-frame unit face normals per (lidar, laser, face); fixed rotations
    # make the face margins affine in the apex position.
    rotations = [rotation_y(float(b)) @ rotation_x(float(g)) for b, g in fixed_angles]
    face_normals = [
        [pyramid_planes(theta, n_f)[0] @ rotations[l].T for theta in fleet.beam_angles[l]]
        for l in range(n_l)
    ]

    face_cons: list[Constraint] = []
    la_cons: list[Constraint] = []
    seg_cons: list[Constraint] = []
    for c, cube in enumerate(cube_ids):
        p = centers[c]
        for l in range(n_l):
            names_la = []
            for r in range(n_r):
                names_face = []
                for i in range(n_f):
                    a = face_normals[l][r][i]
                    coeffs = tuple(
                        (f"{axis}{l}", -(a[j] + 0.0))
                        for j, axis in enumerate(("X", "Y", "Z"))
                        if a[j] != 0.0
                    )
                    margin = Affine(coeffs=coeffs, constant=float(a @ p))
                    d_face = model.add_variable(
                        f"d_face_c{cube}_l{l}_r{r}_f{i}", "binary", 0, 1, "d_face")
                    face_cons += encode_if_then_else(margin, d_face, params, var_bounds)
                    names_face.append(d_face)
                d_la = model.add_variable(
                    f"d_la_c{cube}_l{l}_r{r}", "binary", 0, 1, "d_la")
                la_cons += encode_or(names_face, d_la, params)
                names_la.append(d_la)
            for j in range(n_r + 1):
                lits = [Lit(names_la[r]) if r < j else neg(names_la[r])
                        for r in range(n_r)]
                d_seg = model.add_variable(
                    f"d_seg_c{cube}_l{l}_j{j}", "binary", 0, 1, "d_seg")
                seg_cons += encode_and(lits, d_seg, params)

    cube_cons: list[Constraint] = []
    for s, pattern in enumerate(patterns):
        below = pattern.below_counts
        for c, cube in enumerate(cube_ids):
            d_c = model.add_variable(f"d_c_s{s}_c{cube}", "binary", 0, 1, "d_c")
            inputs = [f"d_seg_c{cube}_l{l}_j{below[l]}" for l in range(n_l)]
            cube_cons += encode_and(inputs, d_c, params)

    shell_members: dict[int, list[int]] = {}
    for c, cube in enumerate(cube_ids):
        shell_members.setdefault(int(shell_of[c]), []).append(cube)
    max_shell = max((len(v) for v in shell_members.values()), default=0)

    count_cons: list[Constraint] = []
    for s in range(len(patterns)):
        for k in sorted(shell_members):
            members = shell_members[k]
            d_ss = model.add_variable(
                f"d_ss_s{s}_k{k}", "continuous", 0, len(members), "d_ss")
            coeffs = tuple((f"d_c_s{s}_c{cube}", 1.0) for cube in members)
            count_cons.append(Constraint(
                name=f"def_{d_ss}", coeffs=coeffs + ((d_ss, -1.0),),
                sense="=", rhs=0.0))
            count_cons.append(Constraint(
                name=f"cap_{d_ss}", coeffs=((d_ss, 1.0), ("t", -1.0)),
                sense="<=", rhs=0.0))

    model.add_variable("t", "continuous", 0, max_shell, "bound")
    model.constraints = face_cons + la_cons + seg_cons + cube_cons + count_cons
    model.objective = (("t", 1.0),)
    return model


def _satisfied(con: Constraint, values: dict, tol: float) -> bool:
    lhs = sum(c * values[v] for v, c in con.coeffs)
    if con.sense == "<=":
        return lhs <= con.rhs + tol
    if con.sense == ">=":
        return lhs >= con.rhs - tol
    return abs(lhs - con.rhs) <= tol


def propagate_fixed_positions(model: MilpModel, positions: dict,
                              tol: float = 1e-9) -> dict[str, float]:
    """Variable values forced by the constraints once positions are fixed.

    Repeatedly assigns each binary the unique value satisfying all of its
    fully determined constraints; continuous count variables are solved from
    their defining equalities and the minimax bound is set to their maximum.
    Raises :class:`DeadBandError` when some affine test lands strictly
    inside (0, epsilon), where neither indicator value is feasible, and
    RuntimeError if any variable is left undetermined.
    """
    values: dict[str, float] = {}
    for name in model.classes.get("position", []):
        if name not in positions:
            raise ValueError(f"position variable {name} missing a fixed value")
        values[name] = float(positions[name])

    by_var: dict[str, list[int]] = {}
    for i, con in enumerate(model.constraints):
        for v, _ in con.coeffs:
            by_var.setdefault(v, []).append(i)

    pending = [v for v in model.variables if v.name not in values and v.name != "t"]
    while pending:
        progress = False
        still = []
        for var in pending:
            cons = [model.constraints[i] for i in by_var.get(var.name, [])]
            ready = [c for c in cons
                     if all(n == var.name or n in values for n, _ in c.coeffs)]
            if not ready:
                still.append(var)
                continue
            if var.kind == "binary":
                feasible = [b for b in (0.0, 1.0)
                            if all(_satisfied(c, values | {var.name: b}, tol)
                                   for c in ready)]
                if len(feasible) == 1:
                    values[var.name] = feasible[0]
                    progress = True
                elif not feasible:
                    raise DeadBandError(
                        f"no feasible value for {var.name}; an affine test "
                        f"lies inside the open (0, epsilon) band")
                elif len(ready) == len(cons):
                    raise RuntimeError(f"{var.name} is not forced by its constraints")
                else:
                    still.append(var)
            else:
                solved = False
                for con in ready:
                    if con.sense != "=":
                        continue
                    coef = dict(con.coeffs).get(var.name, 0.0)
                    if coef == 0.0:
                        continue
                    rest = sum(c * values[n] for n, c in con.coeffs if n != var.name)
                    values[var.name] = (con.rhs - rest) / coef
                    solved = progress = True
                    break
                if not solved:
                    still.append(var)
        if not progress:
            names = ", ".join(v.name for v in still[:5])
            raise RuntimeError(f"propagation stalled on: {names}")
        pending = still

    counts = [values[n] for n in model.classes.get("d_ss", [])]
    values["t"] = max(counts) if counts else 0.0
    return values


def export_model(model: MilpModel, path) -> None:
    """Write the model to a plain-text LP file; see :mod:`lidarlayout.lpformat`."""
    from .lpformat import write_lp

    write_lp(model, path)


def read_model(path) -> MilpModel:
    """Parse a file written by :func:`export_model` back into a model."""
    from .lpformat import read_lp

    return read_lp(path)
