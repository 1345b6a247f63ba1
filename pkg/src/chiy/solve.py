"""Integer solvability of the generated constraint systems.

Verdict discipline.  A report may claim one of three things, and each claim
carries its own burden of proof:

* ``no_integer_solution`` only together with a machine-checkable certificate
  (a linear inconsistency witness, a variable forced to a non-integer, a
  residual univariate polynomial with root-freeness evidence, or an
  exhausted finite candidate set);
* ``solutions`` only after every reported assignment has been re-substituted
  exactly into the original, pre-reduction system;
* ``inconclusive`` otherwise, recording exactly which box was searched.

Certificates are verified by :func:`verify_certificate` before a report is
ever emitted, and the same function can replay a stored report against a
freshly generated system.

The reduction keeps multiplier bookkeeping through Gaussian elimination, so
a substitution like ``c3 = c2 + 23`` is not just an output but an identity
``sum_i lambda_i * eq_i == c3 - (c2 + 23)`` over the (already substituted)
input equations, which is what makes the certificates replayable without
trusting the elimination code.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .fujita import (
    MONOMIAL_SCHEMA,
    Branch,
    Equation,
    EquationSystem,
    Mode,
    generate_system,
)
from .polynomials import MultivariatePolynomial

VERDICT_NO_SOLUTION = "no_integer_solution"
VERDICT_SOLUTIONS = "solutions"
VERDICT_INCONCLUSIVE = "inconclusive"


class SoundnessError(RuntimeError):
    """An internal cross-check failed; a report would have been unsound."""


class EnumerationBudget(Exception):
    """The requested box is larger than the configured scan budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(f"scan of {required} candidates exceeds budget {budget}")
        self.required = required
        self.budget = budget


class RootSearchOverflow(Exception):
    """Divisor enumeration refused: the constant term is too large to factor."""


def _fr(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _fr_str(value: Fraction) -> str:
    value = _fr(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _parse_fr(text) -> Fraction:
    return Fraction(str(text))


# ---------------------------------------------------------------------------
# linear reduction


@dataclass(frozen=True)
class Substitution:
    """``variable = expression``, derived in elimination pass ``pass_index``
    as the combination ``sum multiplier * input_equation`` recorded in
    ``combination`` (indices refer to the original system; the inputs of pass
    k are the originals with all earlier passes' substitutions applied)."""

    variable: str
    expression: MultivariatePolynomial
    combination: tuple[tuple[int, Fraction], ...]
    pass_index: int

    def to_json_dict(self) -> dict:
        return {
            "variable": self.variable,
            "expression": self.expression.to_json_terms(),
            "combination": [[i, _fr_str(m)] for i, m in self.combination],
            "pass": self.pass_index,
        }


@dataclass(frozen=True)
class ResidualEquation:
    index: int  # position in the original system
    provenance: str
    polynomial: MultivariatePolynomial


@dataclass(frozen=True)
class ReducedSystem:
    original: EquationSystem
    substitutions: tuple[Substitution, ...]
    residual: tuple[ResidualEquation, ...]
    free_variables: tuple[str, ...]
    inconsistency: Optional[dict]

    def residual_system(self) -> EquationSystem:
        equations = tuple(
            Equation(r.provenance, r.polynomial.restrict(self.free_variables))
            for r in self.residual
        )
        return EquationSystem(
            self.free_variables,
            equations,
            self.original.n,
            self.original.branch,
            self.original.mode,
        )

    def extend(self, free_assignment) -> dict[str, Fraction]:
        """Complete an assignment of the free variables to all variables."""
        values: dict[str, Fraction] = {
            name: _fr(v) for name, v in free_assignment.items()
        }
        for sub in reversed(self.substitutions):
            values[sub.variable] = sub.expression.evaluate(values)
        return values


def _linear_parts(poly: MultivariatePolynomial):
    """Constant and per-variable coefficients of an affine polynomial."""
    constant = Fraction(0)
    coeffs: dict[str, Fraction] = {}
    for exps, coeff in poly.terms.items():
        total = sum(exps)
        if total == 0:
            constant = coeff
        else:
            idx = next(i for i, e in enumerate(exps) if e)
            coeffs[poly.variables[idx]] = coeff
    return constant, coeffs


def linear_reduce(system: EquationSystem) -> ReducedSystem:
    """Iteratively eliminate the affine-linear part of the system.

    Each pass runs exact Gaussian elimination over the equations of total
    degree <= 1, preferring to solve for the latest variables so that the
    earliest ones stay free, substitutes the solved variables everywhere, and
    repeats, because substitution can linearize previously nonlinear
    equations.  Multipliers are tracked so every substitution and any
    inconsistency comes with its defining linear combination.
    """
    variables = system.variables
    work: list[tuple[int, MultivariatePolynomial]] = [
        (i, eq.polynomial) for i, eq in enumerate(system.equations)
    ]
    substitutions: list[Substitution] = []
    pivoted: set[str] = set()
    pass_index = 0

    while True:
        linear: list[tuple[int, MultivariatePolynomial]] = []
        rest: list[tuple[int, MultivariatePolynomial]] = []
        for idx, poly in work:
            if not poly:
                continue
            (linear if poly.total_degree() <= 1 else rest).append((idx, poly))
        if not linear:
            work = rest
            break
        pass_index += 1
        free_order = [v for v in variables if v not in pivoted]
        columns = list(reversed(free_order))
        col_pos = {name: i for i, name in enumerate(columns)}

        # rows: [coefficients | constant], plus multiplier bookkeeping
        rows = []
        mults = []
        for j, (idx, poly) in enumerate(linear):
            constant, coeffs = _linear_parts(poly)
            row = [coeffs.get(name, Fraction(0)) for name in columns]
            row.append(constant)
            rows.append(row)
            mult = [Fraction(0)] * len(linear)
            mult[j] = Fraction(1)
            mults.append(mult)

        pivots: list[tuple[int, str]] = []  # (row index, variable)
        used_rows: set[int] = set()
        for c, name in enumerate(columns):
            pivot_row = None
            for r in range(len(rows)):
                if r not in used_rows and rows[r][c]:
                    pivot_row = r
                    break
            if pivot_row is None:
                continue
            used_rows.add(pivot_row)
            pivots.append((pivot_row, name))
            lead = rows[pivot_row][c]
            rows[pivot_row] = [v / lead for v in rows[pivot_row]]
            mults[pivot_row] = [v / lead for v in mults[pivot_row]]
            for r in range(len(rows)):
                if r == pivot_row or not rows[r][c]:
                    continue
                factor = rows[r][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot_row])]
                mults[r] = [a - factor * b for a, b in zip(mults[r], mults[pivot_row])]

        # rows without a pivot must have vanished entirely, or they witness
        # an inconsistency
        for r in range(len(rows)):
            if r in used_rows:
                continue
            if any(rows[r][:-1]):  # pragma: no cover - pivoting covers all columns
                raise SoundnessError("unpivoted row with surviving coefficients")
            if rows[r][-1]:
                combination = tuple(
                    (linear[j][0], m) for j, m in enumerate(mults[r]) if m
                )
                certificate = {
                    "kind": "linear_inconsistency",
                    "substitutions": [s.to_json_dict() for s in substitutions],
                    "combination": [[i, _fr_str(m)] for i, m in combination],
                    "pass": pass_index,
                    "constant": _fr_str(rows[r][-1]),
                }
                free = tuple(v for v in variables if v not in pivoted)
                residual = tuple(
                    ResidualEquation(idx, system.equations[idx].provenance, poly)
                    for idx, poly in rest
                )
                return ReducedSystem(
                    system, tuple(substitutions), residual, free, certificate
                )

        mapping: dict[str, MultivariatePolynomial] = {}
        for pivot_row, name in pivots:
            row = rows[pivot_row]
            terms: dict[tuple[int, ...], Fraction] = {}
            zero = (0,) * len(variables)
            if row[-1]:
                terms[zero] = -row[-1]
            for c2, other in enumerate(columns):
                if other == name or not row[c2]:
                    continue
                exps = tuple(1 if v == other else 0 for v in variables)
                terms[exps] = -row[c2]
            expression = MultivariatePolynomial(variables, terms)
            combination = tuple(
                (linear[j][0], m) for j, m in enumerate(mults[pivot_row]) if m
            )
            substitutions.append(
                Substitution(name, expression, combination, pass_index)
            )
            mapping[name] = expression
            pivoted.add(name)

        work = [(idx, poly.substitute(mapping)) for idx, poly in rest]

    free = tuple(v for v in variables if v not in pivoted)
    residual = tuple(
        ResidualEquation(idx, system.equations[idx].provenance, poly)
        for idx, poly in work
    )
    return ReducedSystem(system, tuple(substitutions), residual, free, None)


# ---------------------------------------------------------------------------
# univariate integer roots


@dataclass(frozen=True)
class RootAnalysis:
    """Integer roots of an effectively univariate polynomial, plus the
    evidence that the enumeration was complete."""

    variable: Optional[str]
    roots: tuple[int, ...]
    primitive_coefficients: tuple[int, ...]  # lowest degree first, content 1
    scale: Fraction  # primitive == scale * input
    evidence: dict


_FACTOR_LIMIT = 10**12  # trial division stays under ~1e6 iterations


def _divisors(value: int) -> list[int]:
    value = abs(value)
    if value > _FACTOR_LIMIT:
        raise RootSearchOverflow(f"|constant| = {value} beyond divisor enumeration limit")
    factors: dict[int, int] = {}
    for p in (2, 3):
        while value % p == 0:
            factors[p] = factors.get(p, 0) + 1
            value //= p
    f = 5
    while f * f <= value:
        for p in (f, f + 2):
            while value % p == 0:
                factors[p] = factors.get(p, 0) + 1
                value //= p
        f += 6
    if value > 1:
        factors[value] = factors.get(value, 0) + 1
    divisors = [1]
    for p, k in factors.items():
        divisors = [d * p**e for d in divisors for e in range(k + 1)]
    return sorted(divisors)


def univariate_integer_roots(poly: MultivariatePolynomial) -> RootAnalysis:
    """All integer roots, with replay evidence.

    Rational coefficients are cleared to a primitive integer polynomial with
    positive leading coefficient; any integer root of that divides its
    constant term, so quadratics are settled by an exact discriminant and
    higher degrees by divisor enumeration.
    """
    if not poly:
        raise ValueError("the zero polynomial has every root")
    used = poly.used_variables()
    if len(used) > 1:
        raise ValueError(f"not univariate: uses {sorted(used)}")
    if not used:
        value = poly.constant_value()
        return RootAnalysis(
            None, (), (1,), 1 / value, {"type": "nonzero_constant", "value": _fr_str(value)}
        )
    variable = next(iter(used))
    raw = [c.constant_value() for c in poly.univariate_coefficients(variable)]
    while raw and raw[-1] == 0:
        raw.pop()
    lcm = 1
    for c in raw:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in raw]
    content = 0
    for c in ints:
        content = math.gcd(content, c)
    if ints[-1] < 0:
        content = -content
    ints = [c // content for c in ints]
    scale = Fraction(lcm, content)

    zero_mult = 0
    core = list(ints)
    while core and core[0] == 0:
        zero_mult += 1
        core.pop(0)
    roots: set[int] = set()
    if zero_mult:
        roots.add(0)

    evidence: dict = {"zero_root_multiplicity": zero_mult}
    degree = len(core) - 1
    if degree == 0:
        evidence["type"] = "unit_after_zero_roots" if zero_mult else "nonzero_constant"
    elif degree == 1:
        b, a = core
        evidence["type"] = "linear"
        evidence["divisible"] = b % a == 0
        if b % a == 0:
            roots.add(-b // a)
    elif degree == 2:
        c0, c1, c2 = core
        disc = c1 * c1 - 4 * c2 * c0
        evidence["type"] = "discriminant"
        evidence["discriminant"] = str(disc)
        if disc >= 0:
            s = math.isqrt(disc)
            evidence["is_square"] = s * s == disc
            if s * s == disc:
                for numerator in (-c1 + s, -c1 - s):
                    if numerator % (2 * c2) == 0:
                        roots.add(numerator // (2 * c2))
        else:
            evidence["is_square"] = False
    else:
        divisors = _divisors(core[0])
        evidence["type"] = "divisors"
        evidence["constant"] = str(core[0])
        evidence["divisors"] = [str(d) for d in divisors]
        for d in divisors:
            for candidate in (d, -d):
                acc = 0
                for coeff in reversed(core):
                    acc = acc * candidate + coeff
                if acc == 0:
                    roots.add(candidate)
    return RootAnalysis(variable, tuple(sorted(roots)), tuple(ints), scale, evidence)


# ---------------------------------------------------------------------------
# bounded enumeration


@dataclass(frozen=True)
class EnumerationOutcome:
    assignments: tuple[dict, ...]
    visited: int


def _integer_terms(poly: MultivariatePolynomial) -> list[tuple[int, tuple[int, ...]]]:
    lcm = 1
    for coeff in poly.terms.values():
        lcm = lcm * coeff.denominator // math.gcd(lcm, coeff.denominator)
    return [(int(c * lcm), exps) for exps, c in poly.sorted_terms()]


def _compile_terms(terms, arg_names: Sequence[str], variables: Sequence[str], modulus=None):
    """Compile integer terms into a lambda over ``arg_names`` (a subset of the
    polynomial's variables; the rest must not occur)."""
    position = {name: i for i, name in enumerate(variables)}
    pieces = []
    for coeff, exps in terms:
        if modulus is not None:
            coeff %= modulus
            if coeff == 0:
                continue
        factors = [f"({coeff})"]
        for name in arg_names:
            e = exps[position[name]]
            if 0 < e <= 4:
                factors.extend([name] * e)
            elif e > 4:
                factors.append(f"{name}**{e}")
        pieces.append("*".join(factors))
    body = " + ".join(pieces) if pieces else "0"
    src = f"lambda {', '.join(arg_names)}: {body}" if arg_names else f"lambda: {body}"
    return eval(src, {"__builtins__": {}})  # noqa: S307 - generated from exact terms


def _quadratic_integer_roots(c0: int, c1: int, c2: int) -> list[int]:
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    s = math.isqrt(disc)
    if s * s != disc:
        return []
    out = []
    for numerator in (-c1 + s, -c1 - s):
        if numerator % (2 * c2) == 0:
            out.append(numerator // (2 * c2))
    return sorted(set(out))


def bounded_enumerate(
    system: EquationSystem,
    bounds: dict[str, tuple[int, int]],
    moduli: Sequence[int] = (),
    workers: int = 1,
    max_scan: Optional[int] = None,
) -> EnumerationOutcome:
    """Exhaustive search of the integer box for assignments satisfying every
    equation.

    The box is the product of the per-variable bounds.  One variable may be
    solved exactly from an equation of degree <= 2 in it instead of being
    scanned (the result is filtered back to its bound, so the returned set is
    exactly the satisfying points of the box either way).  Candidates are
    pre-filtered by the residues modulo each modulus before the exact check;
    the moduli change the running time, never the result.
    """
    variables = system.variables
    for name in variables:
        if name not in bounds:
            raise ValueError(f"no bounds for {name}")
        lo, hi = bounds[name]
        if lo > hi:
            raise ValueError(f"empty bounds for {name}: {lo} > {hi}")
    polys = [eq.polynomial for eq in system.equations if eq.polynomial]
    for poly in polys:
        if poly.is_constant():
            return EnumerationOutcome((), 0)

    solved = _choose_solved_variable(polys, bounds, variables)
    drivers = [v for v in variables if v != solved]  # all of them if none solvable
    scan = 1
    for v in drivers:
        lo, hi = bounds[v]
        scan *= hi - lo + 1
    if max_scan is not None and scan > max_scan:
        raise EnumerationBudget(scan, max_scan)

    if workers > 1 and drivers:
        lo, hi = bounds[drivers[0]]
        width = hi - lo + 1
        chunk = -(-width // workers)
        jobs = []
        for start in range(lo, hi + 1, chunk):
            sub_bounds = dict(bounds)
            sub_bounds[drivers[0]] = (start, min(start + chunk - 1, hi))
            jobs.append((system.to_json_dict(), sub_bounds, tuple(moduli), solved))
        results = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for outcome in pool.map(_enumerate_job, jobs):
                results.append(outcome)
        assignments = [a for sub, _ in results for a in sub]
        visited = sum(v for _, v in results)
    else:
        assignments, visited = _enumerate_chunk(system, bounds, tuple(moduli), solved)

    assignments.sort(key=lambda a: tuple(a[v] for v in variables))
    return EnumerationOutcome(tuple(assignments), visited)


def _choose_solved_variable(polys, bounds, variables) -> Optional[str]:
    best = None
    best_size = -1
    for name in variables:
        degrees = [p.degree_in(name) for p in polys]
        positive = [d for d in degrees if d >= 1]
        if not positive or min(positive) > 2:
            continue
        lo, hi = bounds[name]
        size = hi - lo + 1
        if size >= best_size:  # ties go to the latest variable
            best, best_size = name, size
    return best


def _enumerate_job(args):
    system_json, bounds, moduli, solved = args
    system = EquationSystem.from_json_dict(system_json)
    return _enumerate_chunk(system, bounds, moduli, solved)


def _enumerate_chunk(system, bounds, moduli, solved):
    variables = system.variables
    polys = [eq.polynomial for eq in system.equations if eq.polynomial]
    drivers = [v for v in variables if v != solved]
    driver_ranges = [range(bounds[v][0], bounds[v][1] + 1) for v in drivers]
    position = {name: i for i, name in enumerate(variables)}

    integer_forms = [_integer_terms(p) for p in polys]
    full_checks = [
        _compile_terms(terms, variables, variables) for terms in integer_forms
    ]
    sieves = []
    for p in moduli:
        for terms in integer_forms:
            reduced = [(c % p, e) for c, e in terms if c % p]
            if not reduced:
                continue
            sieves.append((p, _compile_terms(terms, variables, variables, modulus=p)))

    if solved is None:
        # plain scan over the whole box
        ranges = [range(bounds[v][0], bounds[v][1] + 1) for v in variables]
        found = []
        visited = 0
        for values in itertools.product(*ranges):
            visited += 1
            if not _passes(values, sieves, full_checks, moduli):
                continue
            found.append({name: v for name, v in zip(variables, values)})
        return found, visited

    lo_s, hi_s = bounds[solved]
    # split equations by whether they constrain the solved variable
    driver_filters = []
    solver_eqs = []  # (degree in solved, coefficient lambdas lowest first)
    for poly in polys:
        d = poly.degree_in(solved)
        if d == 0:
            driver_filters.append(
                _compile_terms(_integer_terms(poly), drivers, variables)
            )
        else:
            # clear denominators once for the whole polynomial: scaling each
            # coefficient independently would corrupt the root structure
            terms = _integer_terms(poly)
            by_power: dict[int, list] = {}
            for coeff, exps in terms:
                e = exps[position[solved]]
                stripped = tuple(
                    0 if i == position[solved] else x for i, x in enumerate(exps)
                )
                by_power.setdefault(e, []).append((coeff, stripped))
            lambdas = [
                _compile_terms(by_power.get(e, []), drivers, variables)
                for e in range(d + 1)
            ]
            solver_eqs.append((d, lambdas))
    solver_eqs.sort(key=lambda item: item[0])

    found = []
    visited = 0
    solved_pos = position[solved]
    driver_pos = [position[v] for v in drivers]
    args = [0] * len(variables)
    for values in itertools.product(*driver_ranges):
        ok = True
        for f in driver_filters:
            if f(*values):
                ok = False
                break
        if not ok:
            continue
        candidates = None
        for d, lambdas in solver_eqs:
            cs = [f(*values) for f in lambdas]
            top = len(cs) - 1
            while top >= 0 and cs[top] == 0:
                top -= 1
            if top < 0:
                continue  # vacuous for this driver point
            if top == 0:
                candidates = []
                break
            if top == 1:
                b, a = cs[0], cs[1]
                candidates = [-b // a] if b % a == 0 else []
                break
            if top == 2:
                candidates = _quadratic_integer_roots(cs[0], cs[1], cs[2])
                break
            # degree >= 3: scan the solved variable against this equation
            candidates = []
            for v in range(lo_s, hi_s + 1):
                acc = 0
                for coeff in reversed(cs[: top + 1]):
                    acc = acc * v + coeff
                if acc == 0:
                    candidates.append(v)
            break
        if candidates is None:
            candidates = range(lo_s, hi_s + 1)  # every equation vacuous here
        for v in candidates:
            if not lo_s <= v <= hi_s:
                continue
            visited += 1
            for value, pos in zip(values, driver_pos):
                args[pos] = value
            args[solved_pos] = v
            if not _passes(tuple(args), sieves, full_checks, moduli):
                continue
            found.append({name: val for name, val in zip(variables, args)})
    return found, visited


def _passes(values, sieves, full_checks, moduli) -> bool:
    for p, f in sieves:
        reduced = tuple(v % p for v in values)
        if f(*reduced) % p:
            return False
    for f in full_checks:
        if f(*values):
            return False
    return True


# ---------------------------------------------------------------------------
# orchestration


@dataclass(frozen=True)
class SolverConfig:
    """Budget and strategy knobs; everything is deterministic."""

    bound_scale: int = 16
    bounds: Optional[dict[str, tuple[int, int]]] = None
    moduli: tuple[int, ...] = (2, 3, 5, 7, 11)
    workers: int = 1
    max_scan: int = 50_000_000


@dataclass(frozen=True)
class SearchReport:
    verdict: str
    variables: tuple[str, ...]
    solutions: tuple[dict, ...] = ()
    certificate: Optional[dict] = None
    bounds: Optional[dict] = None
    moduli: tuple[int, ...] = ()
    visited: int = 0
    elapsed_ms: Optional[float] = None
    n: Optional[int] = None
    branch: Optional[str] = None
    mode: Optional[str] = None
    substitutions: tuple[dict, ...] = ()
    notes: tuple[str, ...] = ()

    def to_json_dict(self, include_timing: bool = True) -> dict:
        data = {
            "n": self.n,
            "branch": self.branch,
            "mode": self.mode,
            "verdict": self.verdict,
            "variables": list(self.variables),
            "solutions": [
                {name: str(value) for name, value in solution.items()}
                for solution in self.solutions
            ],
            "certificate": self.certificate,
            "bounds": None
            if self.bounds is None
            else {name: [str(lo), str(hi)] for name, (lo, hi) in self.bounds.items()},
            "moduli": list(self.moduli),
            "visited": str(self.visited),
            "substitutions": list(self.substitutions),
            "notes": list(self.notes),
        }
        if include_timing:
            data["elapsed_ms"] = self.elapsed_ms
        return data

    def to_json(self, include_timing: bool = True) -> str:
        import json

        return json.dumps(
            self.to_json_dict(include_timing=include_timing),
            sort_keys=True,
            separators=(",", ":"),
        )


_INTEGER_STRING = {"type": "string", "pattern": "^-?[0-9]+$"}

_SUBSTITUTION_SCHEMA = {
    "type": "object",
    "required": ["variable", "expression", "combination", "pass"],
    "properties": {
        "variable": {"type": "string"},
        "expression": {"type": "array", "items": MONOMIAL_SCHEMA},
        "combination": {
            "type": "array",
            "items": {
                "type": "array",
                "items": [{"type": "integer", "minimum": 0}, {"type": "string"}],
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "pass": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

_CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["kind", "substitutions"],
    "properties": {"substitutions": {"type": "array", "items": _SUBSTITUTION_SCHEMA}},
    "oneOf": [
        {
            "properties": {"kind": {"const": "linear_inconsistency"}},
            "required": ["combination", "pass", "constant"],
        },
        {
            "properties": {"kind": {"const": "nonintegral_value"}},
            "required": ["variable", "value", "combination", "pass"],
        },
        {
            "properties": {"kind": {"const": "root_free"}},
            "required": [
                "variable",
                "source_index",
                "provenance",
                "scale",
                "integer_coefficients",
                "evidence",
            ],
        },
        {
            "properties": {"kind": {"const": "candidate_exhaustion"}},
            "required": ["variable", "equations", "candidates"],
        },
    ],
}

#: JSON shape of :meth:`SearchReport.to_json_dict`.
REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "integer solvability report",
    "type": "object",
    "required": [
        "n",
        "branch",
        "mode",
        "verdict",
        "variables",
        "solutions",
        "certificate",
        "bounds",
        "moduli",
        "visited",
        "substitutions",
        "notes",
    ],
    "properties": {
        "n": {"type": ["integer", "null"]},
        "branch": {"enum": [b.value for b in Branch] + [None]},
        "mode": {"enum": [m.value for m in Mode] + [None]},
        "verdict": {
            "enum": [VERDICT_SOLUTIONS, VERDICT_NO_SOLUTION, VERDICT_INCONCLUSIVE]
        },
        "variables": {"type": "array", "items": {"type": "string"}},
        "solutions": {
            "type": "array",
            "items": {"type": "object", "additionalProperties": _INTEGER_STRING},
        },
        "certificate": {"oneOf": [{"type": "null"}, _CERTIFICATE_SCHEMA]},
        "bounds": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "additionalProperties": {
                        "type": "array",
                        "items": _INTEGER_STRING,
                        "minItems": 2,
                        "maxItems": 2,
                    },
                },
            ]
        },
        "moduli": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "visited": {"type": "string", "pattern": "^[0-9]+$"},
        # readable elimination trace; replayable records live in the certificate
        "substitutions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["variable", "expression", "pass"],
                "properties": {
                    "variable": {"type": "string"},
                    "expression": {"type": "string"},
                    "pass": {"type": "integer", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "notes": {"type": "array", "items": {"type": "string"}},
        "elapsed_ms": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}


def _transform(poly: MultivariatePolynomial, substitutions, before_pass: Optional[int]):
    """Apply recorded substitutions (optionally only those from passes before
    ``before_pass``) in recording order."""
    for sub in substitutions:
        if before_pass is not None and sub.pass_index >= before_pass:
            continue
        poly = poly.substitute({sub.variable: sub.expression})
    return poly


def _substitutions_from_json(variables, records) -> list[Substitution]:
    subs = []
    for record in records:
        subs.append(
            Substitution(
                record["variable"],
                MultivariatePolynomial.from_json_terms(variables, record["expression"]),
                tuple((int(i), _parse_fr(m)) for i, m in record["combination"]),
                int(record["pass"]),
            )
        )
    return subs


def _check_root_evidence(coefficients: tuple[int, ...], evidence: dict) -> bool:
    """Re-establish that the primitive integer polynomial has no integer root."""
    core = list(coefficients)
    zero_mult = 0
    while core and core[0] == 0:
        zero_mult += 1
        core.pop(0)
    if zero_mult != evidence.get("zero_root_multiplicity", 0):
        return False
    if zero_mult:
        return False  # zero itself is a root; cannot be root-free
    degree = len(core) - 1
    kind = evidence.get("type")
    if degree == 0:
        return kind in ("nonzero_constant", "unit_after_zero_roots") and core[0] != 0
    if degree == 1:
        b, a = core
        return kind == "linear" and b % a != 0
    if degree == 2:
        c0, c1, c2 = core
        disc = c1 * c1 - 4 * c2 * c0
        if kind != "discriminant" or str(disc) != evidence.get("discriminant"):
            return False
        if disc < 0:
            return True
        s = math.isqrt(disc)
        if s * s != disc:
            return True
        return all(numerator % (2 * c2) for numerator in (-c1 + s, -c1 - s))
    if kind != "divisors":
        return False
    divisors = [int(d) for d in evidence.get("divisors", [])]
    if divisors != _divisors(core[0]):
        return False
    for d in divisors:
        for candidate in (d, -d):
            acc = 0
            for coeff in reversed(core):
                acc = acc * candidate + coeff
            if acc == 0:
                return False
    return True


def verify_certificate(system: EquationSystem, certificate: dict) -> bool:
    """Replay a no-solution certificate against the original system.

    Returns False rather than raising on malformed input, so stored reports
    can be re-checked without trusting their shape.
    """
    if not isinstance(certificate, dict):
        return False
    try:
        return _verify_certificate(system, certificate)
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError,
            RootSearchOverflow):
        return False


def _verify_certificate(system: EquationSystem, certificate: dict) -> bool:
    variables = system.variables
    subs = _substitutions_from_json(variables, certificate.get("substitutions", []))

    # every recorded substitution must be the linear combination it claims
    for sub in subs:
        acc = MultivariatePolynomial.zero(variables)
        for index, mult in sub.combination:
            if not 0 <= index < len(system.equations):
                return False
            transformed = _transform(
                system.equations[index].polynomial, subs, sub.pass_index
            )
            acc = acc + mult * transformed
        target = MultivariatePolynomial.variable(sub.variable, variables) - sub.expression
        if acc != target:
            return False

    kind = certificate.get("kind")
    if kind == "linear_inconsistency":
        acc = MultivariatePolynomial.zero(variables)
        for index, mult in certificate["combination"]:
            transformed = _transform(
                system.equations[int(index)].polynomial, subs, int(certificate["pass"])
            )
            acc = acc + _parse_fr(mult) * transformed
        constant = _parse_fr(certificate["constant"])
        return constant != 0 and acc == constant

    if kind == "nonintegral_value":
        acc = MultivariatePolynomial.zero(variables)
        for index, mult in certificate["combination"]:
            transformed = _transform(
                system.equations[int(index)].polynomial, subs, int(certificate["pass"])
            )
            acc = acc + _parse_fr(mult) * transformed
        value = _parse_fr(certificate["value"])
        target = (
            MultivariatePolynomial.variable(certificate["variable"], variables) - value
        )
        return value.denominator != 1 and acc == target

    if kind == "root_free":
        index = int(certificate["source_index"])
        if not 0 <= index < len(system.equations):
            return False
        phi = _transform(system.equations[index].polynomial, subs, None)
        scaled = phi * _parse_fr(certificate["scale"])
        coefficients = tuple(int(c) for c in certificate["integer_coefficients"])
        variable = certificate["variable"]
        if variable not in variables:
            return False
        rebuilt = MultivariatePolynomial.zero(variables)
        gen = MultivariatePolynomial.variable(variable, variables)
        power = MultivariatePolynomial.one(variables)
        for k, coeff in enumerate(coefficients):
            if k:
                power = power * gen
            rebuilt = rebuilt + coeff * power
        if scaled != rebuilt:
            return False
        return _check_root_evidence(coefficients, certificate["evidence"])

    if kind == "candidate_exhaustion":
        variable = certificate["variable"]
        candidate_sets = []
        for item in certificate["equations"]:
            index = int(item["source_index"])
            if not 0 <= index < len(system.equations):
                return False
            phi = _transform(system.equations[index].polynomial, subs, None)
            try:
                analysis = univariate_integer_roots(phi)
            except (ValueError, RootSearchOverflow):
                return False
            if tuple(int(r) for r in item["roots"]) != analysis.roots:
                return False
            candidate_sets.append(set(analysis.roots))
        candidates = sorted(set.intersection(*candidate_sets)) if candidate_sets else []
        if [int(c) for c in certificate["candidates"]] != candidates:
            return False
        # none of the surviving candidates may extend to an integer solution
        reduced = ReducedSystem(system, tuple(subs), (), (variable,), None)
        for value in candidates:
            full = reduced.extend({variable: value})
            if all(v.denominator == 1 for v in full.values()) and system.satisfied_by(full):
                return False
        return True

    return False


def _default_bounds(system: EquationSystem, names, scale: int) -> dict:
    if system.n is None:
        raise ValueError("explicit bounds are required for systems without n")
    bounds = {}
    for name in names:
        if not name.startswith("c"):
            raise ValueError(f"no default bound rule for variable {name!r}")
        i = int(name[1:])
        b = math.comb(system.n + 1, i) * scale
        bounds[name] = (-b, b)
    return bounds


def solve_system(system: EquationSystem, config: Optional[SolverConfig] = None) -> SearchReport:
    """Reduce, then decide: certificate, exact roots, or bounded search."""
    config = config or SolverConfig()
    start = time.perf_counter()
    reduced = linear_reduce(system)
    trace = tuple(
        {
            "variable": s.variable,
            "expression": str(s.expression),
            "pass": s.pass_index,
        }
        for s in reduced.substitutions
    )

    def finish(report: SearchReport) -> SearchReport:
        _audit(system, report)
        elapsed = (time.perf_counter() - start) * 1000.0
        return SearchReport(
            verdict=report.verdict,
            variables=system.variables,
            solutions=report.solutions,
            certificate=report.certificate,
            bounds=report.bounds,
            moduli=tuple(config.moduli),
            visited=report.visited,
            elapsed_ms=elapsed,
            n=system.n,
            branch=system.branch.value if system.branch else None,
            mode=system.mode.value if system.mode else None,
            substitutions=trace,
            notes=report.notes,
        )

    if reduced.inconsistency is not None:
        return finish(
            SearchReport(
                VERDICT_NO_SOLUTION,
                system.variables,
                certificate=reduced.inconsistency,
            )
        )

    for sub in reduced.substitutions:
        if sub.expression.is_constant():
            value = sub.expression.constant_value()
            if value.denominator != 1:
                certificate = {
                    "kind": "nonintegral_value",
                    "variable": sub.variable,
                    "value": _fr_str(value),
                    "substitutions": [
                        s.to_json_dict()
                        for s in reduced.substitutions
                        if s.pass_index < sub.pass_index
                    ],
                    "combination": [[i, _fr_str(m)] for i, m in sub.combination],
                    "pass": sub.pass_index,
                }
                return finish(
                    SearchReport(
                        VERDICT_NO_SOLUTION, system.variables, certificate=certificate
                    )
                )

    free = reduced.free_variables
    residual = reduced.residual

    if not residual:
        if free:
            return finish(
                SearchReport(
                    VERDICT_INCONCLUSIVE,
                    system.variables,
                    notes=(
                        "free variables are unconstrained after reduction; "
                        "no finite verdict",
                    ),
                )
            )
        point = reduced.extend({})
        solution = {name: int(v) for name, v in point.items()}
        return finish(
            SearchReport(
                VERDICT_SOLUTIONS, system.variables, solutions=(solution,), visited=1
            )
        )

    if len(free) == 1:
        try:
            return finish(_single_variable_verdict(system, reduced, free[0]))
        except RootSearchOverflow:
            pass  # fall through to bounded enumeration

    bounds = dict(config.bounds or {})
    missing = [name for name in free if name not in bounds]
    if missing:
        bounds.update(_default_bounds(system, missing, config.bound_scale))
    bounds = {name: bounds[name] for name in free}

    try:
        outcome = bounded_enumerate(
            reduced.residual_system(),
            bounds,
            moduli=config.moduli,
            workers=config.workers,
            max_scan=config.max_scan,
        )
    except EnumerationBudget as budget:
        return finish(
            SearchReport(
                VERDICT_INCONCLUSIVE,
                system.variables,
                bounds=bounds,
                notes=(str(budget),),
            )
        )

    solutions = []
    for assignment in outcome.assignments:
        full = reduced.extend(assignment)
        if any(v.denominator != 1 for v in full.values()):
            continue
        candidate = {name: int(v) for name, v in full.items()}
        if system.satisfied_by(candidate):
            solutions.append(candidate)
    solutions.sort(key=lambda a: tuple(a[v] for v in system.variables))

    if solutions:
        return finish(
            SearchReport(
                VERDICT_SOLUTIONS,
                system.variables,
                solutions=tuple(solutions),
                bounds=bounds,
                visited=outcome.visited,
            )
        )
    return finish(
        SearchReport(
            VERDICT_INCONCLUSIVE,
            system.variables,
            bounds=bounds,
            visited=outcome.visited,
            notes=("box exhausted without integer solutions",),
        )
    )


def _single_variable_verdict(system, reduced: ReducedSystem, variable: str) -> SearchReport:
    analyses = []
    for res in reduced.residual:
        analysis = univariate_integer_roots(res.polynomial)
        if not analysis.roots:
            certificate = {
                "kind": "root_free",
                "variable": variable,
                "source_index": res.index,
                "provenance": res.provenance,
                "scale": _fr_str(analysis.scale),
                "integer_coefficients": [str(c) for c in analysis.primitive_coefficients],
                "evidence": analysis.evidence,
                "substitutions": [s.to_json_dict() for s in reduced.substitutions],
            }
            return SearchReport(
                VERDICT_NO_SOLUTION, system.variables, certificate=certificate
            )
        analyses.append((res, analysis))

    candidates = sorted(set.intersection(*(set(a.roots) for _, a in analyses)))
    solutions = []
    for value in candidates:
        full = reduced.extend({variable: value})
        if any(v.denominator != 1 for v in full.values()):
            continue
        candidate = {name: int(v) for name, v in full.items()}
        if system.satisfied_by(candidate):
            solutions.append(candidate)
    if solutions:
        solutions.sort(key=lambda a: tuple(a[v] for v in system.variables))
        return SearchReport(
            VERDICT_SOLUTIONS,
            system.variables,
            solutions=tuple(solutions),
            visited=len(candidates),
        )
    certificate = {
        "kind": "candidate_exhaustion",
        "variable": variable,
        "equations": [
            {
                "source_index": res.index,
                "provenance": res.provenance,
                "roots": [str(r) for r in analysis.roots],
            }
            for res, analysis in analyses
        ],
        "candidates": [str(c) for c in candidates],
        "substitutions": [s.to_json_dict() for s in reduced.substitutions],
    }
    return SearchReport(
        VERDICT_NO_SOLUTION,
        system.variables,
        certificate=certificate,
        visited=len(candidates),
    )


def _audit(system: EquationSystem, report: SearchReport):
    """Last line of defense before a report leaves the solver."""
    if report.verdict == VERDICT_SOLUTIONS:
        if not report.solutions:
            raise SoundnessError("solutions verdict without solutions")
        for solution in report.solutions:
            if not system.satisfied_by(solution):
                raise SoundnessError(f"reported solution {solution} fails re-substitution")
    elif report.verdict == VERDICT_NO_SOLUTION:
        if not verify_certificate(system, report.certificate):
            raise SoundnessError("no-solution certificate failed replay")


def classify(
    n: int,
    branch: Branch,
    mode: Mode = Mode.AK,
    config: Optional[SolverConfig] = None,
) -> SearchReport:
    """Generate the (M, D) system for the given dimension and branch and
    decide its integer solvability within the configured budget."""
    system = generate_system(n, branch, mode)
    return solve_system(system, config)
