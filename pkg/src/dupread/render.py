"""Text rendering of count vectors as linear polynomials in z0..z_{q-1}.

Positive terms come first, then negative ones, each by ascending symbol, and
a unit coefficient is elided: ``(1,0,-1,1) -> "z0+z3-z2"``. The zero entry is
``"0"``.
"""

from __future__ import annotations


def _term(c: int, a: int) -> str:
    mag = abs(c)
    return f"z{a}" if mag == 1 else f"{mag}z{a}"


def format_entry(e) -> str:
    pos = [(c, a) for a, c in enumerate(e) if c > 0]
    neg = [(c, a) for a, c in enumerate(e) if c < 0]
    if not pos and not neg:
        return "0"
    out = "+".join(_term(c, a) for c, a in pos)
    for c, a in neg:
        out += "-" + _term(c, a)
    return out


def format_vector(v) -> str:
    return "(" + ", ".join(format_entry(e) for e in v) + ")"


def format_ints(v) -> str:
    return "(" + ", ".join(str(int(a)) for a in v) + ")"
