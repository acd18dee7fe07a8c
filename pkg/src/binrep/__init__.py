"""Locality metrics, constructions and evolutionary experiments for bitstring representations."""

__version__ = "0.1.0"

from .errors import BinrepError, DomainError, ParseError, ShapeError, SizeError
from .representation import (NGG32, UBL32, Representation, gray_decode, gray_encode,
                             is_gray, make_brg, make_harper_max, make_harper_min,
                             make_ngg32, make_random, make_sb, make_suboptimal_gray,
                             make_ubl32, named)
from .locality import (distance_distortion, expected_point_locality, general_locality,
                       general_locality_lower_bound, point_locality, point_locality_bounds,
                       rothlauf_dm)
from .fitness import DEJONG, OneMaxTarget, count_local_maxima, onemax_table
from .gea import ESConfig, GAConfig, SAConfig, run_es, run_ga, run_sa
from .markov import MarkovModel, absorption_probabilities, evolve_distribution

__all__ = [name for name in dir() if not name.startswith("_")]
