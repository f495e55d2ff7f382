"""Parser for the polynomial text grammar.

Grammar (whitespace-insensitive)::

    poly   := [sign] term { sign term }
    sign   := '+' | '-'
    term   := atom { '*' atom }
    atom   := coeff | var [ '^' INT ]
    coeff  := INT [ '/' INT ]
    var    := ('t' | 's') INT

Examples: ``s1^2 - 4*s0*s2``, ``t0*t1 + 1/2*t2^2``.  One variable letter
per polynomial; the parsed form is homogeneous or an error names the
offending monomial.  Rational coefficients (the ``/`` production) are a
strict extension used only when a family over Q has non-integer entries.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .errors import ParseError
from .fields import Field
from .forms import HomForm

_TOKEN = re.compile(r"\s*(?:(\d+)|([st])(\d+)|([+\-*/^])|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1), m.end()))
        elif m.group(2) is not None:
            tokens.append(("var", (m.group(2), int(m.group(3))), m.start(2), m.end()))
        elif m.group(4) is not None:
            tokens.append(("op", m.group(4), m.start(4), m.end()))
        else:
            raise ParseError(f"unexpected character {m.group(5)!r}", m.start(5))
        pos = m.end()
    return tokens


def parse_poly(text: str, field: Field, nvars: Optional[int] = None,
               degree: Optional[int] = None) -> HomForm:
    """Parse a polynomial string into a homogeneous form.

    nvars defaults to (largest variable index) + 1; degree defaults to the
    common degree of the monomials.  Inhomogeneous input is rejected with
    the offending monomial named.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial", 0)
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else None

    monos: List[Tuple[int, list, str]] = []  # (sign, factors, source text)
    letters = set()

    sign = 1
    tok = peek()
    if tok is not None and tok[0] == "op" and tok[1] in "+-":
        sign = -1 if tok[1] == "-" else 1
        idx += 1

    while True:
        # one term: atoms joined by '*'
        factors = []  # ("coeff", numerator, denominator) | ("var", index, power)
        start_tok = peek()
        if start_tok is None:
            raise ParseError("expected a term", tokens[-1][2] + 1)
        term_pos = start_tok[2]
        expect_atom = True
        while expect_atom:
            tok = peek()
            if tok is None:
                raise ParseError("unexpected end of input", tokens[-1][3])
            kind, val, pos = tok[0], tok[1], tok[2]
            if kind == "int":
                idx += 1
                den = 1
                nxt = peek()
                if nxt and nxt[0] == "op" and nxt[1] == "/":
                    idx += 1
                    dtok = peek()
                    if not dtok or dtok[0] != "int":
                        raise ParseError("expected integer denominator",
                                         pos if not dtok else dtok[2])
                    if dtok[1] == 0:
                        raise ParseError("zero denominator", dtok[2])
                    den = dtok[1]
                    idx += 1
                factors.append(("coeff", val, den))
            elif kind == "var":
                letter, vi = val
                letters.add(letter)
                if len(letters) > 1:
                    raise ParseError("mixed variable letters", pos)
                idx += 1
                power = 1
                nxt = peek()
                if nxt and nxt[0] == "op" and nxt[1] == "^":
                    idx += 1
                    ptok = peek()
                    if not ptok or ptok[0] != "int":
                        raise ParseError("expected integer exponent",
                                         pos if not ptok else ptok[2])
                    power = ptok[1]
                    idx += 1
                factors.append(("var", vi, power))
            else:
                raise ParseError(f"unexpected {val!r}", pos)
            nxt = peek()
            if nxt and nxt[0] == "op" and nxt[1] == "*":
                idx += 1
                expect_atom = True
            else:
                expect_atom = False
        end_pos = tokens[idx - 1][3] if idx > 0 else term_pos
        monos.append((sign, factors, text[term_pos:end_pos].strip()))

        tok = peek()
        if tok is None:
            break
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            idx += 1
        else:
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])

    # determine the variable count
    max_index = -1
    for _, factors, _ in monos:
        for f in factors:
            if f[0] == "var":
                max_index = max(max_index, f[1])
    if nvars is None:
        nvars = max_index + 1 if max_index >= 0 else 1
    elif max_index >= nvars:
        raise ParseError(f"variable index {max_index} out of range "
                         f"(expected < {nvars})", 0)

    # assemble monomials and check homogeneity
    assembled = []
    for sg, factors, src in monos:
        exp = [0] * nvars
        num, den = sg, 1
        for f in factors:
            if f[0] == "coeff":
                num *= f[1]
                den *= f[2]
            else:
                exp[f[1]] += f[2]
        assembled.append((tuple(exp), num, den, src))

    assembled = [a for a in assembled if a[1] != 0]
    if not assembled:
        return HomForm.zero(nvars, degree if degree is not None else 0, field)
    degrees = sorted(set(sum(e) for e, *_ in assembled))
    target = degree if degree is not None else degrees[-1]
    for exp, _, _, src in assembled:
        if sum(exp) != target:
            raise ParseError(f"inhomogeneous input: monomial {src!r} has degree "
                             f"{sum(exp)}, expected {target}", 0)

    form = HomForm.zero(nvars, target, field)
    for exp, num, den, _ in assembled:
        c = field.elem(num) if den == 1 else field.elem(num) / field.elem(den)
        form = form + HomForm(nvars, target, {exp: c}, field)
    return form
