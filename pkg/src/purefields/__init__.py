"""Integral bases, index forms and monogenity of pure fields Q(m^(1/n)), 3 <= n <= 9."""

from .field import ElementRep, FieldError, PureField, charpoly
from .orders import (
    IndexEvaluator,
    IndexReport,
    IntegralBasis,
    element_index,
    field_discriminant,
    is_algebraic_integer,
    maximal_order,
)
from .tables import (
    BasisPattern,
    PatternReport,
    ResidueError,
    instantiate,
    lookup_pattern,
    patterns,
    validate_pattern,
)
from .forms import (
    ExplicitForm,
    FactorSet,
    NoExplicitForm,
    check_identity,
    explicit_index_form,
    factor_values,
)
from .monogenity import (
    Classification,
    ResidueClass,
    SearchReport,
    classify,
    index_form_solvable_mod,
    search_small_index,
)
from .periodicity import (
    DivisibilityRecord,
    PeriodJob,
    charpoly_divisibility,
    check_shift_invariance,
    compute_n0,
    partition_jobs,
    verify_period,
)

__version__ = "0.1.0"
