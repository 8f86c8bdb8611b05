"""Convex layers (onion peeling) as a starting point for TSP local search."""

from .bench import BenchConfig, gen_circle, gen_random, run_experiment
from .construct import MergeOrder, layer_merge, nearest_neighbor, splice
from .exact import brute_force, held_karp
from .geometry import ConvexLayers, Point, convex_hull, convex_layers_naive, orientation
from .hull_graph import HullGraph, convex_layers_fast
from .improve import ImproveConfig, has_crossings, three_opt, two_opt
from .formats import parse_csv, parse_instance, parse_tsplib, write_svg
from .tsp_core import Instance, Metric, Tour, distance, tour_length, validate_tour

__all__ = [
    "BenchConfig", "ConvexLayers", "HullGraph", "ImproveConfig", "Instance", "MergeOrder", "Metric",
    "Point", "Tour", "brute_force", "convex_hull", "convex_layers_fast",
    "convex_layers_naive", "distance", "gen_circle", "gen_random", "has_crossings", "held_karp", "layer_merge",
    "nearest_neighbor", "orientation", "parse_csv", "parse_instance", "parse_tsplib", "run_experiment", "splice", "three_opt", "tour_length", "two_opt",
    "validate_tour", "write_svg",
]
