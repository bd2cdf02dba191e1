"""Hypothesis strategies for well-typed terms."""

from hypothesis import strategies as st

from pru.terms import Comp, Pair, Proj, Rec, S, Z


@st.composite
def typed_term(draw, dom, cod, depth=3, max_width=3, allow_rec=True):
    kinds = []
    if cod == 1:
        kinds.append("leaf")
    else:
        kinds.append("pair")
    if depth > 0:
        kinds.append("comp")
        if cod > 1:
            kinds.append("pair")
        if allow_rec and dom >= 2 and dom - 1 + cod <= max_width:
            kinds.append("rec")
    kind = draw(st.sampled_from(kinds))
    sub = dict(max_width=max_width, allow_rec=allow_rec)
    d = max(depth - 1, 0)
    if kind == "leaf":
        if dom == 1:
            return draw(st.sampled_from([S, Z, Proj(1, 1)]))
        return Proj(dom, draw(st.integers(1, dom)))
    if kind == "pair":
        c = draw(st.integers(1, cod - 1))
        return Pair(draw(typed_term(dom, c, d, **sub)), draw(typed_term(dom, cod - c, d, **sub)))
    if kind == "rec":
        a = dom - 1
        return Rec(draw(typed_term(a, cod, d, **sub)), draw(typed_term(a + cod, cod, d, **sub)))
    m = draw(st.integers(1, max_width))
    return Comp(draw(typed_term(m, cod, d, **sub)), draw(typed_term(dom, m, d, **sub)))


def terms(depth=3, max_width=3, allow_rec=True):
    widths = st.integers(1, max_width)
    return st.tuples(widths, widths).flatmap(
        lambda a: typed_term(a[0], a[1], depth, max_width, allow_rec))
