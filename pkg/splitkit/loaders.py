"""
Build groups, subgroups, splittings and posets from their file models.
"""

import json
import logging
from pathlib import Path
from typing import Any, Union

from pydantic import ValidationError

from .dunwoody import PosetWithInvolution
from .errors import InputError, PresentationError, SplittingError, SplitkitError
from .presentation import (
    FiniteTable,
    GroupPresentation,
    SubgroupSpec,
    finite_group,
    free_group,
    parse_word,
    subgroup,
    trivial_subgroup,
    whole_group,
)
from .rewriting import rewriting_group
from .schemas import BuiltinRef, GroupFile, PosetFile, SlopeRef, SplittingFile
from .splitting import Side, Splitting, SplittingCore, SplittingKind, attach, self_splitting, splitting_group
from .suite import builtin_splitting
from .surface_oracle import Slope, slope_splitting

logger = logging.getLogger(__name__)

Source = Union[str, Path, dict, GroupFile, SplittingFile, SlopeRef, BuiltinRef, PosetFile]


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")


def _data(source: Source) -> Any:
    if isinstance(source, (str, Path)):
        return read_json(source)
    return source


def _validate(model, data: Any, what: str):
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InputError(f"Invalid {what} file: {exc}")


# =============================================================================
# Groups and subgroups
# =============================================================================

def build_group(source: Source) -> GroupPresentation:
    """A group presentation from a group file."""
    data = _data(source)
    model = data if isinstance(data, GroupFile) else _validate(GroupFile, data, "group")
    if model.strategy == "free":
        group = free_group(model.generators, model.name)
    elif model.strategy == "finite-table":
        table = model.table
        try:
            group = finite_group(
                model.generators,
                FiniteTable(
                    tuple(table.elements),
                    table.identity,
                    tuple(tuple(row) for row in table.product),
                    dict(table.generators),
                ),
                model.name,
            )
        except IndexError as exc:
            raise PresentationError(f"Malformed table for {model.name}: {exc}")
    elif model.strategy == "rewriting":
        rules = None
        if model.rules is not None:
            rules = [(parse_word(lhs), parse_word(rhs)) for lhs, rhs in model.rules]
        group = rewriting_group(model.generators, [parse_word(r) for r in model.relators], rules, model.name)
    else:
        group = splitting_group(_build_core(model.splitting), model.name)
        if model.generators and tuple(model.generators) != group.generator_names:
            raise PresentationError(
                f"Group {model.name} lists generators {model.generators} but its splitting gives "
                f"{list(group.generator_names)}"
            )
    for name, gens in model.subgroups.items():
        group.add_subgroup(name, subgroup(group, [group.parse(g) for g in gens], name))
    logger.debug(f"Loaded group {group.name} ({group.strategy.value})")
    return group


def build_subgroup(group: GroupPresentation, text: str) -> SubgroupSpec:
    """`trivial`, `whole`, a declared subgroup name, or comma-separated generator words."""
    text = text.strip()
    if text == "trivial":
        return trivial_subgroup(group)
    if text == "whole":
        return whole_group(group)
    if text in group.subgroups:
        return group.subgroups[text]
    words = [group.parse(part) for part in text.split(",")]
    return subgroup(group, words, f"<{text}>")


# =============================================================================
# Splittings
# =============================================================================

def _build_core(model: SplittingFile) -> SplittingCore:
    vertices = {Side(side): build_group(g) for side, g in model.vertices.items()}
    images = {key: [parse_word(w) for w in words] for key, words in model.images.items()}
    transversals = {key: [parse_word(w) for w in words] for key, words in model.transversals.items()}
    return SplittingCore(
        SplittingKind(model.kind),
        vertices,
        model.edge_generators,
        images,
        stable_letter=model.stable_letter,
        transversals=transversals or None,
    )


def build_splitting(source: Source) -> Splitting:
    """A validated splitting from a splitting file, a slope reference or a builtin name.

    Raises:
        InputError: If the file does not match any splitting schema.
        SplittingError: If the splitting is degenerate or inconsistent.
    """
    if isinstance(source, Splitting):
        return source
    data = _data(source)
    if isinstance(data, SlopeRef) or (isinstance(data, dict) and "slope" in data):
        model = data if isinstance(data, SlopeRef) else _validate(SlopeRef, data, "slope")
        return slope_splitting(Slope.parse(model.slope))
    if isinstance(data, BuiltinRef) or (isinstance(data, dict) and "builtin" in data):
        model = data if isinstance(data, BuiltinRef) else _validate(BuiltinRef, data, "builtin splitting")
        return builtin_splitting(model.builtin)
    model = data if isinstance(data, SplittingFile) else _validate(SplittingFile, data, "splitting")
    core = _build_core(model)
    if model.ambient is None:
        return self_splitting(core, model.name, f"G[{model.name}]")
    ambient = build_group(model.ambient)
    try:
        to_core = {g: parse_word(w) for g, w in model.pullback.items()}
        from_core = {g: ambient.parse(w) for g, w in model.pushforward.items()}
    except SplitkitError as exc:
        raise SplittingError(f"Splitting {model.name}: {exc}")
    return attach(core, ambient, to_core, from_core, model.name)


# =============================================================================
# Posets
# =============================================================================

def build_poset(source: Source) -> PosetWithInvolution:
    """A poset with involution; the order is closed reflexively and transitively."""
    data = _data(source)
    model = data if isinstance(data, PosetFile) else _validate(PosetFile, data, "poset")
    return PosetWithInvolution.from_relations(model.elements, dict(model.involution), [tuple(p) for p in model.order])
