"""Pure-Python fraction-free sparse echelon kernel.

Rows are ``(cols, vals)`` pairs of equal-length lists, ``cols`` strictly
increasing and ``vals`` nonzero Python ints.  The result is the reduced row
echelon form with every row scaled to a primitive integer vector whose
pivot (first entry) is positive, sorted by pivot column.  The compiled
kernel in ``_echelon_c`` must return identical output.
"""
from __future__ import annotations

from math import gcd


def _primitive(cols: list[int], vals: list[int]) -> tuple[list[int], list[int]]:
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return cols, vals


def _combine(a: int, acols, avals, b: int, bcols, bvals):
    """Return ``a*A + b*B`` for sparse rows A, B."""
    cols: list[int] = []
    vals: list[int] = []
    i = j = 0
    na, nb = len(acols), len(bcols)
    while i < na and j < nb:
        ca, cb = acols[i], bcols[j]
        if ca < cb:
            cols.append(ca)
            vals.append(a * avals[i])
            i += 1
        elif cb < ca:
            cols.append(cb)
            vals.append(b * bvals[j])
            j += 1
        else:
            v = a * avals[i] + b * bvals[j]
            if v:
                cols.append(ca)
                vals.append(v)
            i += 1
            j += 1
    while i < na:
        cols.append(acols[i])
        vals.append(a * avals[i])
        i += 1
    while j < nb:
        cols.append(bcols[j])
        vals.append(b * bvals[j])
        j += 1
    return cols, vals


def _eliminate(cols, vals, pos: int, pcols, pvals):
    """Cancel entry ``pos`` of the row using pivot row ``p`` (pivot at that column)."""
    pv = pvals[0]
    rv = vals[pos]
    g = gcd(pv, rv)
    return _combine(pv // g, cols, vals, -(rv // g), pcols, pvals)


def echelon(rows, ncols: int):
    table: dict[int, tuple[list[int], list[int]]] = {}
    for cols, vals in rows:
        cols, vals = list(cols), list(vals)
        while cols:
            p = table.get(cols[0])
            if p is None:
                table[cols[0]] = _primitive(cols, vals)
                break
            cols, vals = _eliminate(cols, vals, 0, *p)
            if cols:
                cols, vals = _primitive(cols, vals)
    pivots = sorted(table)
    for c in reversed(pivots):
        cols, vals = table[c]
        k = 1
        changed = False
        while k < len(cols):
            p = table.get(cols[k])
            if p is None:
                k += 1
                continue
            cols, vals = _eliminate(cols, vals, k, *p)
            changed = True
        if changed:
            table[c] = _primitive(cols, vals)
    return [table[c] for c in pivots]
