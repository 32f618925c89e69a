"""Exact computations with singularity categories of finite-dimensional algebras.

Layers, bottom up: exact linear algebra (``exactla``), quiver algebras
(``algebra``), modules, bimodules and tensor calculus (``bimodule``), the
bimodule Ω_nc (``omega``), stabilization (``stabilization``) and the orbit-ring
model of the Leavitt ring (``leavitt``).
"""
from .algebra import (Algebra, AlgebraPresentation, Quiver, build_algebra, linear_quiver, one_loop,
                      radical_square_zero, semisimple, truncated_polynomial, two_cycle, two_loop)
from .bimodule import (Bimodule, DualBasis, LeftModule, ModuleMorphism, TensorCalculus, TensorElement,
                       calculus, casimir, compose_via_phi, delta, dual_basis, hom_space, is_left_projective,
                       left_dual, phi, tensor_bimodules, tensor_over_algebra)
from .errors import (HorizonExceeded, InputError, InvariantViolation, ParseError, PreconditionError,
                     SgcatError, UnsupportedInput)
from .exactla import FieldSpec, Matrix
from .fileformat import parse_presentation, read_presentation
from .leavitt import (GammaElement, GammaRing, GradedPresentation, check_relations_in_orbit_model,
                      gamma_component, gamma_multiply, gamma_ring, gamma_zero_tower,
                      leavitt_presentation_rad_square_zero)
from .modules import projective_module, regular_bimodule, regular_module, simple_module, zero_module
from .omega import fundamental_sequence, omega_nc, syzygy, syzygy_map
from .stabilization import (StabilizedHomReport, StabilizedObject, global_dim_probe, in_add,
                            iso_in_stabilization, sg_hom, stable_hom, strong_grading_index)

__version__ = "0.1.0"
