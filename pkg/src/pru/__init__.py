"""Primitive recursive descriptions, their algorithmic universes, and the
Galois correspondence with functionality-preserving permutation groups."""

from pru.terms import (
    Arity,
    ArityError,
    Comp,
    Pair,
    Proj,
    Rec,
    S,
    Term,
    Z,
    mk_diagonal,
    mk_identity,
    mk_multi_proj,
    mk_product,
    mk_twist,
)
from pru.syntax import ParseError, parse, print_term
from pru.semantics import Budget, BudgetExceeded, Fingerprint, evaluate, fingerprint
from pru.universes import Caps, closure, equiv, normalize, normalize_best_effort, rules_of
from pru.galois import (
    Fragment,
    FragmentParams,
    Partition,
    PermGroupFamily,
    enumerate_fragment,
    full_stabilizer,
    galois_check,
    lattice_report,
    op_preserving_subgroup,
    orbit_partition,
    semantic_partition,
    universe_partition,
)

__version__ = "0.1.0"
