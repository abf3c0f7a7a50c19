"""Spectral bounds on independence numbers and certified inertia lower bounds."""

from .bounds import (BETA, CertificateResult, bipartite_block_weighting, certify_inertia,
                     clique_cover_weighting, hzz_upper, inertia_upper_bound,
                     moment_positivity_lower, ratio_bound, weight_search, zelen_lower)
from .graphs import Graph, girth, independence_number, is_c4_free
from .spectral import HermitianWeighting, eigen, inertia, random_weighting

__version__ = "0.1.0"
