"""Typed terms of primitive recursive descriptions.

A term is an immutable tree whose leaves are the initial functions ``z``,
``s`` and ``pi^n_i`` and whose internal nodes are composition, recursion and
bracket.  Every node carries its arity ``(dom, cod)``, checked when the node is
built, so an ill-typed term can never exist.

>>> t = Comp(S, Z)
>>> t.arity
Arity(dom=1, cod=1)
>>> Rec(Proj(1, 1), Comp(S, Proj(2, 2))).arity
Arity(dom=2, cod=1)
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Sequence


class Arity(NamedTuple):
    dom: int
    cod: int

    def __str__(self):
        return f"{self.dom}->{self.cod}"


class ArityError(TypeError):
    """Raised when a node's children have incompatible widths.

    ``path`` addresses the offending node relative to the term being checked
    (empty when the node under construction is itself at fault).
    """

    def __init__(self, message, path=()):
        self.path = tuple(path)
        where = f" at path {list(self.path)}" if self.path else ""
        super().__init__(message + where)


class SpecError(ValueError):
    """Invalid macro parameters (projection indices or block widths)."""


class PathError(IndexError):
    """A child-index path that does not address a node."""


class Term:
    """Base class of all description nodes.

    Subclasses are immutable; equality is structural and hashing is cached.
    """

    __slots__ = ("arity", "_hash", "_size", "_text")

    children: tuple = ()

    def _finish(self, arity, key):
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "_hash", hash(key))
        object.__setattr__(self, "_size", 1 + sum(c._size for c in self.children))
        object.__setattr__(self, "_text", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._fields() == other._fields()

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def _fields(self):
        return self.children

    def __repr__(self):
        return f"<{type(self).__name__} {self.text}>"

    def __str__(self):
        return self.text

    def __reduce__(self):
        return (type(self), self._fields())

    @property
    def size(self) -> int:
        return self._size

    @property
    def text(self) -> str:
        """Canonical s-expression (cached)."""
        if self._text is None:
            from pru.syntax import print_term

            object.__setattr__(self, "_text", print_term(self))
        return self._text

    @property
    def dom(self) -> int:
        return self.arity.dom

    @property
    def cod(self) -> int:
        return self.arity.cod

    def with_children(self, children: Sequence[Term]) -> Term:
        raise NotImplementedError


class _Leaf(Term):
    __slots__ = ()
    _instance = None
    name = ""

    def __new__(cls):
        if cls._instance is None:
            self = object.__new__(cls)
            self._finish(Arity(1, 1), cls.name)
            cls._instance = self
        return cls._instance

    def __reduce__(self):
        return (type(self), ())

    def _fields(self):
        return ()

    def with_children(self, children):
        if children:
            raise PathError(f"{self.name} has no children")
        return self


class Zero(_Leaf):
    """The null function ``z : N -> N``."""

    __slots__ = ()
    _instance = None
    name = "z"


class Succ(_Leaf):
    """The successor function ``s : N -> N``."""

    __slots__ = ()
    _instance = None
    name = "s"


Z = Zero()
S = Succ()


class Proj(Term):
    """Projection ``pi^n_i : N^n -> N`` (1-based index)."""

    __slots__ = ("n", "i")

    def __init__(self, n: int, i: int):
        if not (isinstance(n, int) and isinstance(i, int)):
            raise ArityError(f"projection indices must be integers, got ({n!r}, {i!r})")
        if n < 1 or not 1 <= i <= n:
            raise ArityError(f"projection pi^{n}_{i} needs 1 <= i <= n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "i", i)
        self._finish(Arity(n, 1), ("pi", n, i))

    def _fields(self):
        return (self.n, self.i)

    def with_children(self, children):
        if children:
            raise PathError("projection has no children")
        return self


class Comp(Term):
    """Composition ``g . f`` (apply ``f`` first).  Child 0 is ``g``, child 1 is ``f``."""

    __slots__ = ("g", "f", "children")

    def __init__(self, g: Term, f: Term):
        if f.cod != g.dom:
            raise ArityError(
                f"cannot compose {g.text} : {g.arity} after {f.text} : {f.arity}"
            )
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "children", (g, f))
        self._finish(Arity(f.dom, g.cod), ("comp", g._hash, f._hash))

    def with_children(self, children):
        return Comp(*children)


class Rec(Term):
    """Recursion ``f # g : N^(a+1) -> N^b`` for ``f : a->b`` and ``g : (a+b)->b``.

    The recursion counter is the last input coordinate.
    """

    __slots__ = ("f", "g", "children")

    def __init__(self, f: Term, g: Term):
        a, b = f.arity
        if g.arity != (a + b, b):
            raise ArityError(
                f"recursion step {g.text} : {g.arity} must have arity {a + b}->{b} "
                f"for base {f.text} : {f.arity}"
            )
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "children", (f, g))
        self._finish(Arity(a + 1, b), ("rec", f._hash, g._hash))

    def with_children(self, children):
        return Rec(*children)


class Pair(Term):
    """Bracket ``<f, g> : N^a -> N^(b+c)``."""

    __slots__ = ("f", "g", "children")

    def __init__(self, f: Term, g: Term):
        if f.dom != g.dom:
            raise ArityError(
                f"cannot bracket {f.text} : {f.arity} with {g.text} : {g.arity}"
            )
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "children", (f, g))
        self._finish(Arity(f.dom, f.cod + g.cod), ("pair", f._hash, g._hash))

    def with_children(self, children):
        return Pair(*children)


def sort_key(t: Term):
    """Deterministic order on terms: size first, then bare leaves, then text."""
    text = t.text
    return (t.size, text.startswith("("), text)


def arity_of(t: Term) -> Arity:
    """Re-derive the arity of ``t`` from the typing rules.

    Unlike the cached ``t.arity`` this walks the whole tree, so it doubles as a
    consistency check; a mismatch raises :class:`ArityError` with the path of
    the offending subterm.
    """

    def walk(u, path):
        if isinstance(u, _Leaf):
            derived = Arity(1, 1)
        elif isinstance(u, Proj):
            if not 1 <= u.i <= u.n:
                raise ArityError("projection index out of range", path)
            derived = Arity(u.n, 1)
        else:
            left = walk(u.children[0], path + (0,))
            right = walk(u.children[1], path + (1,))
            if isinstance(u, Comp):
                if right.cod != left.dom:
                    raise ArityError("composition widths mismatch", path)
                derived = Arity(right.dom, left.cod)
            elif isinstance(u, Rec):
                if right != (left.dom + left.cod, left.cod):
                    raise ArityError("recursion widths violate (a+b)", path)
                derived = Arity(left.dom + 1, left.cod)
            elif isinstance(u, Pair):
                if left.dom != right.dom:
                    raise ArityError("bracket domains differ", path)
                derived = Arity(left.dom, left.cod + right.cod)
            else:
                raise ArityError(f"not a term: {u!r}", path)
        if derived != u.arity:
            raise ArityError(f"cached arity {u.arity} != derived {derived}", path)
        return derived

    if not isinstance(t, Term):
        raise ArityError(f"not a term: {t!r}")
    return walk(t, ())


# -- macros -------------------------------------------------------------------


def mk_multi_proj(n: int, xs: Sequence[int]) -> Term:
    """Multiple projection ``pi^X = <pi^n_x1, <pi^n_x2, ... pi^n_xm>>``."""
    xs = list(xs)
    if n < 1:
        raise SpecError(f"source width must be positive, got {n}")
    if not xs:
        raise SpecError("projection list must be non-empty")
    bad = [x for x in xs if not (isinstance(x, int) and 1 <= x <= n)]
    if bad:
        raise SpecError(f"projection indices {bad} out of range 1..{n}")
    out = Proj(n, xs[-1])
    for x in reversed(xs[:-1]):
        out = Pair(Proj(n, x), out)
    return out


def _positive(*widths):
    for w in widths:
        if not isinstance(w, int) or w < 1:
            raise SpecError(f"widths must be positive integers, got {w!r}")


def mk_identity(n: int) -> Term:
    _positive(n)
    return mk_multi_proj(n, range(1, n + 1))


def mk_diagonal(n: int) -> Term:
    _positive(n)
    return mk_multi_proj(n, [*range(1, n + 1), *range(1, n + 1)])


def mk_twist(a: int, b: int) -> Term:
    """Swap a leading block of width ``a`` with a trailing block of width ``b``."""
    _positive(a, b)
    return mk_multi_proj(a + b, [*range(a + 1, a + b + 1), *range(1, a + 1)])


def mk_first(total: int, a: int) -> Term:
    """Projection onto the first ``a`` of ``total`` coordinates."""
    _positive(total, a)
    return mk_multi_proj(total, range(1, a + 1))


def mk_last(total: int, c: int) -> Term:
    """Projection onto the last ``c`` of ``total`` coordinates."""
    _positive(total, c)
    return mk_multi_proj(total, range(total - c + 1, total + 1))


def mk_product(f: Term, g: Term) -> Term:
    """``f x g = <f . pi_first, g . pi_last>`` on ``N^(a+c)``."""
    a, c = f.dom, g.dom
    return Pair(Comp(f, mk_first(a + c, a)), Comp(g, mk_last(a + c, c)))


def projection_indices(t: Term):
    """Index list of a bracket tree of projections from one source, else None.

    Any nesting counts: ``<<pi1, pi2>, pi3>`` and ``<pi1, <pi2, pi3>>`` both
    give ``(1, 2, 3)``.
    """
    if isinstance(t, Proj):
        return (t.i,)
    if isinstance(t, Pair):
        left = projection_indices(t.f)
        if left is None:
            return None
        right = projection_indices(t.g)
        if right is None:
            return None
        return left + right
    return None


def is_identity(t: Term) -> bool:
    n = t.dom
    return t.cod == n and projection_indices(t) == tuple(range(1, n + 1))


def twist_widths(t: Term):
    """All ``(a, b)`` for which ``t`` realizes the block swap of widths a, b."""
    idx = projection_indices(t)
    if idx is None:
        return []
    n = t.dom
    if len(idx) != n:
        return []
    out = []
    for a in range(1, n):
        b = n - a
        if idx == (*range(a + 1, n + 1), *range(1, a + 1)):
            out.append((a, b))
    return out


# -- structural utilities -------------------------------------------------------


def size(t: Term) -> int:
    return t.size


def depth(t: Term) -> int:
    if not t.children:
        return 1
    return 1 + max(depth(c) for c in t.children)


def subterm_at(t: Term, path: Sequence[int]) -> Term:
    node = t
    for k, step in enumerate(path):
        if step not in (0, 1) or step >= len(node.children):
            raise PathError(f"path {list(path)} leaves the tree at step {k}")
        node = node.children[step]
    return node


def replace_at(t: Term, path: Sequence[int], s: Term) -> Term:
    """Return ``t`` with the node at ``path`` replaced by ``s``.

    Every ancestor is rebuilt, so an ill-typed replacement raises
    :class:`ArityError` carrying the path of the first ancestor that rejects it.
    """
    path = tuple(path)
    subterm_at(t, path)

    def rebuild(node, depth_):
        if depth_ == len(path):
            return s
        step = path[depth_]
        kids = list(node.children)
        kids[step] = rebuild(kids[step], depth_ + 1)
        try:
            return node.with_children(kids)
        except ArityError as exc:
            raise ArityError(str(exc).split(" at path")[0], path[:depth_]) from None

    return rebuild(t, 0)


def positions(t: Term, prefix=()) -> Iterator[tuple[tuple[int, ...], Term]]:
    """All (path, subterm) pairs, pre-order."""
    yield prefix, t
    for k, c in enumerate(t.children):
        yield from positions(c, prefix + (k,))


def leaves(t: Term) -> Iterator[Term]:
    if not t.children:
        yield t
    for c in t.children:
        yield from leaves(c)


def map_leaves(t: Term, fn) -> Term:
    """Rebuild ``t`` with every leaf replaced by ``fn(leaf)``."""
    if not t.children:
        return fn(t)
    return t.with_children([map_leaves(c, fn) for c in t.children])
