"""Guaranteed-delivery ad hoc routing with universal exploration sequences."""
from .graph import Dart, PortLabeledGraph, bfs_component, generate, validate
from .cubicize import CubicizedGraph, lift_target, reduce_to_cubic
from .exploration import Certificate, ExplorationSequence, next_dart, prev_dart, trace_walk
from .verify import is_universal
from .search import SequenceFamily, find_ues, provider_family
from .protocol import MessageHeader, SimNetwork, broadcast, handle_message, route
from .counting import count_nodes, count_original_nodes, retrieve, retrieve_neighbor
from .race import race, random_walk_route

__version__ = "0.1.0"
