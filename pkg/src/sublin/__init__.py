"""Short reductions and space-metered algorithms for parameterized NL problems."""

from .instances import (
    Cnf2Formula,
    Digraph,
    HppInstance,
    InstanceError,
    Literal,
    LpSystem,
    NfaSpec,
    ParseError,
    SizeParamKind,
    UockInstance,
    gen_random,
    normalize_cnf,
    parse_instance,
    serialize,
    size_param,
    validate,
)

__version__ = "0.1.0"
