"""Plain-text LP model files: writer and matching reader.

The writer emits Minimize, Subject To, Bounds and Binaries sections with a
stable ordering and shortest round-trip float formatting, so equal models
produce byte-identical files.  Bounds rows cover every variable in
declaration order, which lets the reader restore the exact variable list;
the Binaries section then marks kinds.  The reader accepts exactly this
dialect, plus arbitrary wrapping of constraint bodies over continuation
lines, and rebuilds the variable-class registry from the documented name
prefixes.
"""

from __future__ import annotations

from pathlib import Path

from .milp import Constraint, MilpModel, Variable, infer_classes

_SENSES = ("<=", ">=", "=")
_WRAP_COLUMN = 72


def _fmt(x: float) -> str:
    return repr(float(x))


def _term_tokens(coeffs) -> list[str]:
    tokens: list[str] = []
    for i, (name, coeff) in enumerate(coeffs):
        mag = abs(coeff)
        sign = "-" if coeff < 0 else "+"
        if i == 0 and sign == "+":
            pass
        else:
            tokens.append(sign)
        if mag != 1.0:
            tokens.append(_fmt(mag))
        tokens.append(name)
    return tokens


def _wrapped(head: str, tokens: list[str]) -> list[str]:
    lines = [head]
    for tok in tokens:
        if len(lines[-1]) + 1 + len(tok) > _WRAP_COLUMN and lines[-1] != head:
            lines.append("  " + tok)
        else:
            lines[-1] += " " + tok
    return lines


def write_lp(model: MilpModel, path) -> None:
    out: list[str] = []
    out.append("\\ minimax LiDAR placement model")
    out.append("Minimize")
    out.extend(_wrapped(" obj:", _term_tokens(model.objective)))
    out.append("Subject To")
    for con in model.constraints:
        tokens = _term_tokens(con.coeffs)
        tokens.append(con.sense)
        tokens.append(_fmt(con.rhs))
        out.extend(_wrapped(f" {con.name}:", tokens))
    out.append("Bounds")
    for var in model.variables:
        out.append(f" {_fmt(var.lower)} <= {var.name} <= {_fmt(var.upper)}")
    binaries = [v.name for v in model.variables if v.kind == "binary"]
    if binaries:
        out.append("Binaries")
        out.extend(_wrapped(" " + binaries[0], binaries[1:]))
    out.append("End")
    Path(path).write_text("\n".join(out) + "\n")


def _parse_terms(tokens: list[str], where: str) -> tuple[tuple[str, float], ...]:
    terms: list[tuple[str, float]] = []
    sign = 1.0
    mag: float | None = None
    for tok in tokens:
        if tok == "+":
            sign, mag = 1.0, None
        elif tok == "-":
            sign, mag = -1.0, None
        elif _is_number(tok):
            mag = float(tok)
        else:
            coeff = sign * (1.0 if mag is None else mag)
            terms.append((tok, coeff))
            sign, mag = 1.0, None
    if mag is not None:
        raise ValueError(f"dangling coefficient in {where}")
    return tuple(terms)


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def read_lp(path) -> MilpModel:
    text = Path(path).read_text()
    section = None
    objective_tokens: list[str] = []
    constraint_tokens: list[str] = []
    bounds_rows: list[tuple[float, str, float]] = []
    binary_names: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("minimize", "subject to", "bounds", "binaries", "end"):
            section = lowered
            continue
        if section == "minimize":
            objective_tokens.extend(line.split())
        elif section == "subject to":
            constraint_tokens.extend(line.split())
        elif section == "bounds":
            parts = line.split()
            if len(parts) != 5 or parts[1] != "<=" or parts[3] != "<=":
                raise ValueError(f"unparseable bounds row: {line!r}")
            bounds_rows.append((float(parts[0]), parts[2], float(parts[4])))
        elif section == "binaries":
            binary_names.extend(line.split())
        elif section is None:
            raise ValueError(f"content before any section header: {line!r}")

    if not objective_tokens or not objective_tokens[0].endswith(":"):
        raise ValueError("objective must start with a label")
    objective = _parse_terms(objective_tokens[1:], "objective")

    constraints: list[Constraint] = []
    name = None
    body: list[str] = []
    for tok in constraint_tokens + ["__end__:"]:
        if tok.endswith(":") and not _is_number(tok[:-1]):
            if name is not None:
                constraints.append(_finish_constraint(name, body))
            name, body = tok[:-1], []
        else:
            body.append(tok)
    if body:
        raise ValueError("trailing constraint tokens without a label")

    binary_set = set(binary_names)
    variables = [
        Variable(name=n, kind="binary" if n in binary_set else "continuous",
                 lower=lo, upper=hi)
        for lo, n, hi in bounds_rows
    ]
    return MilpModel(
        variables=variables,
        constraints=constraints,
        objective=objective,
        classes=infer_classes(v.name for v in variables),
    )


def _finish_constraint(name: str, body: list[str]) -> Constraint:
    for i, tok in enumerate(body):
        if tok in _SENSES:
            if i != len(body) - 2:
                raise ValueError(f"constraint {name}: malformed relation")
            return Constraint(
                name=name,
                coeffs=_parse_terms(body[:i], f"constraint {name}"),
                sense=tok,
                rhs=float(body[i + 1]),
            )
    raise ValueError(f"constraint {name} has no relation operator")
