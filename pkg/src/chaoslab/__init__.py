"""Li–Yorke chaos modulo an ideal for concretely represented transformation semigroups."""

from .algebra import (
    ALEPH0,
    ALEPH1,
    ALEPH2,
    P_COUNT,
    P_FIN,
    Cardinal,
    CardinalBound,
    FiniteCarrier,
    FiniteSemigroup,
    Full,
    cardinal_ops,
    enumerate_ideals,
    ideal_contains,
    is_invariant_ideal,
    semigroup_from_generators,
)
from .finite import (
    FiniteAction,
    PairRelation,
    asym_pairs,
    max_scrambled_set,
    natural_action,
    prox_pairs,
    scrambled_pairs,
)
from .fort import FortGroupSpec, OrbitClass, TranslationActionSpec, is_li_yorke_chaotic
from .iterated import IteratedSystem

__version__ = "0.1.0"
