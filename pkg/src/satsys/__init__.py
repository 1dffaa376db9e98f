"""Saturated transfer systems on finite modular lattices: reduced formal
contexts, concept counting, and exact density statistics."""

__version__ = "0.1.0"

from .arrows import (
    ArrowSet,
    SaturatedCover,
    from_saturated_cover,
    generate_cotransfer,
    generate_transfer,
    is_cotransfer_system,
    is_saturated,
    is_transfer_system,
    left_lift,
    principal_meet_irreducible,
    right_lift,
    saturate,
    to_saturated_cover,
)
from .builders import chain, diamond, load_lattice, subspace_lattice
from .context import (
    FormalContext,
    density,
    export_cxt,
    export_fimi,
    export_pbm,
    import_cxt,
    is_reduced,
    sat_context,
    tr_context,
)
from .fca import (
    Concept,
    ConceptTally,
    build_concept_lattice,
    count_concepts,
    enumerate_concepts,
    iter_concepts,
)
from .lattice import FiniteLattice, ModularityError, validate
from .oracle import (
    EnumerationReport,
    closure_count_oracle,
    enumerate_saturated_brute,
    enumerate_transfer_brute,
)
from .qstats import (
    a_direct,
    a_rec,
    check_bounds,
    count_join_irr,
    count_meet_irr,
    count_zeros,
    density_formula,
    qbinom,
)
