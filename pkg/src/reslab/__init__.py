"""Resonance laboratory for pairs of reflected analytic oscillators.

Computes action-angle period functions of one-degree-of-freedom potentials,
builds the rectilinear billiard table conjugate to two uncoupled oscillators
at a fixed energy split, searches the table's translation surface for
saddle connections, and certifies or refutes resonance by integer-relation
criteria, constructive pair recipes, and direct simulation.
"""

from .errors import ReslabError
from .potential import Potential, make_potential, reflect, is_sp
from .periods import quarter_period, hit_time, sum_a_abar, limit_at_zero
from .polygon import (
    RectilinearPolygon,
    make_polygon,
    rectangle,
    side_parameter_sets,
    energy_partition,
    build_p_e_theta,
)
from .billiard import (
    trace,
    find_saddle_connections,
    unfold,
    verify_identity,
    is_periodic,
    cylinder_of,
)
from .resonance import (
    is_resonant_pair,
    relation_search,
    scan_energy,
    energy_bound,
    classify_trichotomy,
)
from .quasiperiodic import (
    rho2,
    rho_xik,
    apply_A_poly,
    apply_A_numeric,
    check_agamma,
    fourier_coeffs,
    reconstruct,
    positivity_obstruction_pos,
    positivity_obstruction_neg,
)
from .constructor import (
    build_q,
    build_even_pair,
    build_noneven_pair,
    build_self_paired,
    tune_irrational_ratio,
)
from .simulate import integrate, eta_map, conjugacy_residual, hamiltonian

__version__ = "0.1.0"
