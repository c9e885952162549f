"""Exact modular representation theory of finite p-groups over F_p.

Layers, bottom up: ``fp_linalg`` (GF(p) elimination), ``pgroup`` (Cayley
tables), ``gmodule`` (modules, submodules, Hom), ``heller`` (covers, Omega^n,
resolutions), ``cohomology`` (H^i two ways, extension groups), ``decomp``
(indecomposability, J(K) bookkeeping, the C_p x C_p presentation),
``diagram`` and ``artin_schreier`` (finite-field towers and J(K) = K/wp(K)).
"""
from .fp_linalg import FpMatrix, PrimeField, kernel_basis, rank_mod, rref, row_reduce
from .pgroup import GroupError, PGroup, build_abelian, cyclic, klein_four, load_group, parse_group_spec
from .gmodule import (
    GModule, GModuleMap, Submodule, direct_sum, dual, endomorphisms, fixed_submodule,
    free_module, hom_space, invariant_profile, is_isomorphic, quotient_module, radical,
    regular_module, trivial_module,
)
from .heller import (
    has_free_summand, minimal_resolution, omega, omega2_via_partial, projective_cover,
)
from .cohomology import bar_cohomology_2, cohomology_dim, extension_group
from .decomp import fitting_split, indecomposable, verify_presentation, verify_theorem1
from .diagram import render_diagram
from .artin_schreier import build_tower, j_module, pairing, trace_check, verify_theorem1_concrete

__version__ = "0.1.0"
