"""orbitaut: minimal automata, Nerode quotients, transition and syntactic
monoids, and finiteness/regularity verdicts over three backends: finite
sets, finite group actions and orbit-finite nominal sets."""

from .automata import (
    Automaton,
    AutomatonMorphism,
    accepts,
    canonical_form,
    check_morphism,
    complement,
    distinguishing_word,
    equivalent,
    isomorphic,
    make_automaton,
    minimize,
    nerode_quotient,
    reachable,
    run,
)
from .contract import (
    BackendMorphism,
    Congruence,
    FinitenessReport,
    finiteness,
    image_factorization,
    product,
    quotient,
)
from .errors import (
    BackendMismatchError,
    CapExceededError,
    OrbitautError,
    PoolMarginError,
    PoolStabilityError,
    SpecParseError,
    ValidationError,
)
from .finset import SetObject
from .gset import (
    FinGroup,
    GroupHom,
    GSetObject,
    cyclic_group,
    fixed_points,
    forget,
    orbits,
    restrict_automaton,
)
from .monoid import (
    FinPresMonoid,
    LMonoid,
    image_l_monoid,
    monoid_divides,
    monoid_to_automaton,
    recognizes,
    syntactic_monoid,
    transition_monoid,
)
from .nominal import (
    AtomPool,
    NomElement,
    NomMorphism,
    NomObject,
    OrbitDescriptor,
    abstract,
    instantiate,
    is_dk_finite,
    make_nominal_automaton,
    minimize_nominal,
    pool_of_size,
    support,
)

__version__ = "0.1.0"
