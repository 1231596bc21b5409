"""Mod-2 Casson-type and Rohlin-type invariants of homology 3-tori."""

from .cupforms import TrilinearForm, triple_eval
from .grouppres import Character, Presentation, free_presentation, torus_presentation
from .orbitact import cover_reducibility, decompose_class, lambda3_mod2, orbit_decompose
from .projrep import CocycleClass, ProjectiveRep, cocycle_classes, enum_q8, search_su2, twisted_h1_dim
from .rohlin import SurgeryDatum, rho_ladder, verify_casson_rohlin
from .su2core import Quat

__version__ = "0.1.0"
