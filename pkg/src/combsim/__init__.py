"""Hankel H-graphs, multimode-squeezed Gaussian states and CV cluster checks."""

from .comb import (
    CombSpec,
    CouplingMatrix,
    Interaction,
    ModeLabel,
    Polarization,
    PumpOutOfWindow,
    PumpSpec,
    build_coupling_from_pumps,
    load_comb_config,
    spurious_couplings,
)
from .gaussian import (
    GaussianState,
    QuadratureCombination,
    SingularMeasurement,
    SqueezingSpectrum,
    check_state,
    evolve_vacuum,
    measure_position,
    rotate_mode,
    rotate_modes,
    squeezing_spectrum,
    vacuum,
    variance,
)
from .graphs import (
    bipartite_embed,
    connected_components,
    cube_block,
    find_renumbering,
    hgraph_from_cluster,
    is_unitary,
    multi_copy_generator,
    skew_identity,
    square_block,
    tensor,
)
from .hankel import (
    HankelVector,
    NotHankel,
    ShorthandSyntaxError,
    hankel_to_matrix,
    is_hankel,
    matrix_to_hankel,
    parse_hankel_shorthand,
    print_hankel_shorthand,
)
from .verify import (
    NullifierSet,
    VerificationReport,
    WrongComponentCount,
    cluster_nullifiers,
    find_rotation_sets,
    graph_measure_q,
    grid_graph,
    verify_cluster,
    verify_copies,
    verify_cube_reduction,
)

__version__ = "0.1.0"
