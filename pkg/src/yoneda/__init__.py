"""Yoneda extensions over finitely presented modules over Z and Z/m.

The package is layered: ``exactlin`` (integer linear algebra), ``abcat``
(modules and the abelian-category constructions), ``yext`` (1- and
n-extensions), ``resolution`` (the free-resolution cohomology oracle),
``coprodext`` (extensions against finite coproducts and products) and
``cli``.
"""

from .abcat import (DiagramSpec, FpModule, ModMorphism, biproduct, colimit,
                    cokernel, compose, cyclic_module, free_module, identity,
                    image, is_epi, is_mono, kernel, limit, make_morphism,
                    morphisms_equal, present_module, pullback, pushout,
                    sequence_is_exact, smith_form, zero_module, zero_morphism)
from .coprodext import (Ab4Report, ExtFamily, ab4_colim_check, phi_n,
                        phi_n_inverse, psi1_section, psi_n, psi_n_inverse, theta,
                        theta_dual)
from .errors import (EndpointMismatch, MalformedDiagram, NotExact, NotMono,
                     NotWellDefined, RingMismatch, YonedaError)
from .exactlin import (ZZ, Matrix, RingSpec, kernel_columns, smith_normal_form,
                       solve_modular)
from .randgen import RandomGen, random_instance
from .resolution import (ExtClass, class_is_zero, classes_equal, ext_group,
                         free_resolution, yoneda_class)
from .yext import (NExtension, SesMorphism, ShortExactSeq, act_left, act_right,
                   as_next, baer_sum, compose_ext, equivalent1, is_split, make_ses,
                   nact_left, nact_right, natural_decomposition, negate, nsum,
                   split_next, split_ses)

__version__ = "0.1.0"
