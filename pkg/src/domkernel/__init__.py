"""Kernels for (r-)Dominating Set on sparse graphs."""

from .approx import Tag, WinWinResult, annotated_win_win, build_annotation_gadget, win_win
from .closure import r_closure, short_paths_closure
from .core import AdaptiveConstants, reduce_core
from .graph import Graph, GraphBuilder, load_edge_list, to_edge_list
from .kernel import KernelOutput, kernelize, kernelize_all, lift_solution
from .oracles import RefusalError, exact_annotated_ds, exact_ds

__version__ = "0.1.0"

__all__ = [
    "AdaptiveConstants",
    "Graph",
    "GraphBuilder",
    "KernelOutput",
    "RefusalError",
    "Tag",
    "WinWinResult",
    "annotated_win_win",
    "build_annotation_gadget",
    "exact_annotated_ds",
    "exact_ds",
    "kernelize",
    "kernelize_all",
    "lift_solution",
    "load_edge_list",
    "r_closure",
    "reduce_core",
    "short_paths_closure",
    "to_edge_list",
    "win_win",
]
