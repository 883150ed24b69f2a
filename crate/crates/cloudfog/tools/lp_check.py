#!/usr/bin/env python3
"""Solve an exported LP-format model with scipy's MILP solver (HiGHS).

Usage: lp_check.py model.lp [time_limit_seconds]

Prints one JSON line: {"status": ..., "objective": ...}
Understands exactly the LP subset the exporter writes: Minimize / Subject To
/ Bounds / Generals / Binaries / End, with 4-space-indented continuation
lines and an objective-constant comment.
"""

import json
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import LinearConstraint, milp


def tokenize_terms(text, var_index, variables):
    """Parse '± coef name ...' into (index, coef) pairs."""
    out = []
    sign = 1.0
    coef = None
    for tok in text.split():
        if tok == "+":
            continue
        if tok == "-":
            sign = -sign
            continue
        try:
            value = float(tok)
            coef = value
            continue
        except ValueError:
            pass
        idx = var_index.setdefault(tok, len(variables))
        if idx == len(variables):
            variables.append(tok)
        out.append((idx, sign * (coef if coef is not None else 1.0)))
        sign = 1.0
        coef = None
    return out


def parse(path):
    variables = []
    var_index = {}
    obj_terms = []
    constraints = []  # (terms, op, rhs)
    bounds = {}
    integers = set()
    constant = 0.0

    section = None
    pending = None  # (name, terms) for a constraint spanning lines

    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("\\"):
                marker = "constant term (added to objective):"
                if marker in line:
                    constant = float(line.split(marker, 1)[1])
                continue
            low = line.lower()
            if low in ("minimize", "maximize"):
                section = "obj"
                continue
            if low in ("subject to", "st", "s.t."):
                section = "con"
                continue
            if low == "bounds":
                section = "bounds"
                continue
            if low in ("generals", "general"):
                section = "gen"
                continue
            if low in ("binaries", "binary"):
                section = "bin"
                continue
            if low == "end":
                break

            if section == "obj":
                body = line.split(":", 1)[1] if ":" in line else line
                obj_terms += tokenize_terms(body, var_index, variables)
            elif section == "con":
                body = line
                if pending is None:
                    name, body = line.split(":", 1)
                    pending = (name.strip(), [])
                op = None
                for token, kind in (("<=", "le"), (">=", "ge"), ("=", "eq")):
                    pos = body.find(token)
                    if pos >= 0:
                        op = kind
                        lhs, rhs = body[:pos], body[pos + len(token):]
                        break
                if op is None:
                    pending[1].extend(tokenize_terms(body, var_index, variables))
                else:
                    pending[1].extend(tokenize_terms(lhs, var_index, variables))
                    constraints.append((pending[1], op, float(rhs)))
                    pending = None
            elif section == "bounds":
                lo, name, hi = [part.strip() for part in line.split("<=")]
                idx = var_index.setdefault(name, len(variables))
                if idx == len(variables):
                    variables.append(name)
                bounds[idx] = (float(lo), float(hi))
            elif section in ("gen", "bin"):
                idx = var_index.setdefault(line, len(variables))
                if idx == len(variables):
                    variables.append(line)
                integers.add(idx)
                if section == "bin":
                    bounds.setdefault(idx, (0.0, 1.0))

    n = len(variables)
    c = np.zeros(n)
    for idx, coef in obj_terms:
        c[idx] += coef
    lb = np.zeros(n)
    ub = np.full(n, np.inf)
    for idx, (lo, hi) in bounds.items():
        lb[idx] = lo
        ub[idx] = hi

    rows, cols, vals, clo, chi = [], [], [], [], []
    for i, (terms, op, rhs) in enumerate(constraints):
        for idx, coef in terms:
            rows.append(i)
            cols.append(idx)
            vals.append(coef)
        if op == "le":
            clo.append(-np.inf)
            chi.append(rhs)
        elif op == "ge":
            clo.append(rhs)
            chi.append(np.inf)
        else:
            clo.append(rhs)
            chi.append(rhs)
    a = sparse.csr_matrix((vals, (rows, cols)), shape=(len(constraints), n))
    integrality = np.zeros(n)
    for idx in integers:
        integrality[idx] = 1
    return c, a, np.array(clo), np.array(chi), (lb, ub), integrality, constant


def main():
    path = sys.argv[1]
    time_limit = float(sys.argv[2]) if len(sys.argv) > 2 else 60.0
    c, a, clo, chi, (lb, ub), integrality, constant = parse(path)
    res = milp(
        c,
        constraints=LinearConstraint(a, clo, chi),
        integrality=integrality,
        bounds=__import__("scipy.optimize", fromlist=["Bounds"]).Bounds(lb, ub),
        options={"time_limit": time_limit, "presolve": True},
    )
    status = {0: "optimal", 1: "iteration_or_time_limit", 2: "infeasible", 3: "unbounded"}.get(
        res.status, "other"
    )
    objective = res.fun + constant if res.fun is not None else None
    print(json.dumps({"status": status, "objective": objective}))


if __name__ == "__main__":
    main()
