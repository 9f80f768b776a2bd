"""
starspin chaos

Kicked-top dynamics of the star register and central-spin entanglement
entropy maps.
"""

from .kicked_top import (
    EntropyMap,
    KickedTopSpec,
    central_entropy,
    coherent_product_state,
    default_grid,
    entropy_series,
    kicked_top_step,
    phase_space_map,
    size_sweep,
)

__all__ = [
    "EntropyMap",
    "KickedTopSpec",
    "central_entropy",
    "coherent_product_state",
    "default_grid",
    "entropy_series",
    "kicked_top_step",
    "phase_space_map",
    "size_sweep",
]
