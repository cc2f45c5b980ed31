"""
The standard splittings used by the test suite and by `{"builtin": name}`
splitting files.
"""

from functools import lru_cache
from typing import Callable

from .errors import SplittingError
from .presentation import GroupPresentation, cyclic_table, finite_group, free_group
from .splitting import Side, Splitting, SplittingCore, SplittingKind, attach, conjugate_splitting, self_splitting
from .surface_oracle import Slope, arc_splitting, slope_splitting


def _identity_maps(names) -> dict[str, tuple[str, ...]]:
    return {n: (n,) for n in names}


def z_splitting() -> Splitting:
    """Z = 1*_1 with stable letter t."""
    core = SplittingCore(
        SplittingKind.HNN, {Side.A: free_group([], "1")}, (), {"alpha1": [], "alpha2": []}, stable_letter="t"
    )
    group = free_group(["t"], "Z")
    return attach(core, group, {"t": ("t",)}, {"t": ("t",)}, name="z")


def dihedral_splitting() -> Splitting:
    """Z2 * Z2, the infinite dihedral group."""
    core = SplittingCore(
        SplittingKind.AMALGAM,
        {Side.A: finite_group(["a"], cyclic_table(2, "a"), "Z2a"), Side.B: finite_group(["b"], cyclic_table(2, "b"), "Z2b")},
        (),
        {"A": [], "B": []},
    )
    return self_splitting(core, "z2*z2", "D")


def z4_amalgam_splitting() -> Splitting:
    """Z4 *_{Z2} Z4 identifying a² with b²."""
    core = SplittingCore(
        SplittingKind.AMALGAM,
        {Side.A: finite_group(["a"], cyclic_table(4, "a"), "Z4a"), Side.B: finite_group(["b"], cyclic_table(4, "b"), "Z4b")},
        ("h",),
        {"A": [("a", "a")], "B": [("b", "b")]},
    )
    return self_splitting(core, "z4*z2z4", "Z4Z4")


@lru_cache(maxsize=1)
def f3_group() -> GroupPresentation:
    return free_group(["x", "y", "z"], "F3")


def f3_left() -> Splitting:
    """F3 = ⟨x⟩ * ⟨y, z⟩."""
    core = SplittingCore(
        SplittingKind.AMALGAM, {Side.A: free_group(["x"], "X"), Side.B: free_group(["y", "z"], "YZ")}, (), {"A": [], "B": []}
    )
    maps = _identity_maps(["x", "y", "z"])
    return attach(core, f3_group(), maps, dict(maps), name="f3-left")


def f3_right() -> Splitting:
    """F3 = ⟨x, y⟩ * ⟨z⟩."""
    core = SplittingCore(
        SplittingKind.AMALGAM, {Side.A: free_group(["x", "y"], "XY"), Side.B: free_group(["z"], "Z")}, (), {"A": [], "B": []}
    )
    maps = _identity_maps(["x", "y", "z"])
    return attach(core, f3_group(), maps, dict(maps), name="f3-right")


def genus2_splitting() -> Splitting:
    """The closed genus-2 surface group cut along the separating curve [a,b]."""
    core = SplittingCore(
        SplittingKind.AMALGAM,
        {Side.A: free_group(["a", "b"], "F(a,b)"), Side.B: free_group(["c", "d"], "F(c,d)")},
        ("h",),
        {"A": [("a", "b", "a'", "b'")], "B": [("d", "c", "d'", "c'")]},
    )
    return self_splitting(core, "genus2", "S2")


def conjugated_slope() -> Splitting:
    return conjugate_splitting(slope_splitting(Slope(0, 1)), ("y",))


def conjugated_f3_left() -> Splitting:
    return conjugate_splitting(f3_left(), ("y",))


SUITE: dict[str, Callable[[], Splitting]] = {
    "z": z_splitting,
    "z2*z2": dihedral_splitting,
    "z4*z2z4": z4_amalgam_splitting,
    "slope-0/1": lambda: slope_splitting(Slope(0, 1)),
    "slope-1/0": lambda: slope_splitting(Slope(1, 0)),
    "f3-left": f3_left,
    "f3-right": f3_right,
    "genus2": genus2_splitting,
    "arc": arc_splitting,
    "slope-0/1^y": conjugated_slope,
    "f3-left^y": conjugated_f3_left,
}


def builtin_splitting(name: str) -> Splitting:
    """A suite splitting by name.

    Raises:
        SplittingError: If the name is unknown.
    """
    try:
        factory = SUITE[name]
    except KeyError:
        raise SplittingError(f"Unknown builtin splitting {name!r}; known: {', '.join(sorted(SUITE))}")
    return factory()
