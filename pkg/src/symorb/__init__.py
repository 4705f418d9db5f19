"""symorb: distinct m-party entanglements under permutation symmetry
groups - exact counting, orbit and normalizer reductions, invariant-sector
construction, and numerical maximization of entanglement measures.
"""

__version__ = "0.1.0"

from .perm import (  # noqa: F401
    PermGroup,
    Permutation,
    Subset,
    act_subset,
    act_tuple,
    compose,
    generate,
    identity,
    is_member,
    parse_cycles,
    preset,
)
