"""
Initial-state grammar for the command line:

    "s,t:L=<re>[+<im>i],D=...,U=...,R=..."   omitted directions are zero
    "s,t:@uniform"                           a named coin state

The state must already be normalized; nothing is rescaled.
"""
from __future__ import annotations

import re
from typing import Dict

import numpy as np

from perqwalk.errors import ConfigError
from perqwalk.walk.coin import coin_state
from perqwalk.walk.lattice import Direction, LatticeSpec, Site
from perqwalk.walk.states import StateVector


NORMALIZATION_TOL = 1e-9

_SITE_RE = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*$")


def parse_amplitude(text: str) -> complex:
    """'0.5', '-0.5i', '0.5+0.5i', '1e-1-2e-1i' -> complex."""
    raw = text.strip()
    if not raw or "j" in raw.lower() or " " in raw:
        raise ConfigError(f"cannot parse amplitude '{text}'")
    try:
        value = complex(raw.replace("i", "j"))
    except ValueError as exc:
        raise ConfigError(f"cannot parse amplitude '{text}'") from exc
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise ConfigError(f"amplitude '{text}' is not finite")
    return value


def parse_coin_components(text: str) -> np.ndarray:
    if text.startswith("@"):
        return coin_state(text[1:])
    coin = np.zeros(4, dtype=np.complex128)
    seen: Dict[str, str] = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected '<direction>=<amplitude>', got '{item}'")
        if key not in Direction.__members__:
            raise ConfigError(
                f"Unknown direction '{key}'. Known directions: {', '.join(Direction.__members__)}"
            )
        if key in seen:
            raise ConfigError(f"direction {key} given twice")
        seen[key] = value
        coin[Direction[key]] = parse_amplitude(value)
    return coin


def parse_initial_state(text: str, spec: LatticeSpec) -> StateVector:
    """Parse a pure product state |s, t> (x) coin on `spec`."""
    position, sep, components = text.partition(":")
    match = _SITE_RE.match(position)
    if not sep or match is None:
        raise ConfigError(
            f"cannot parse initial state '{text}', expected 's,t:L=..,D=..,U=..,R=..' or 's,t:@name'"
        )
    site = Site(int(match.group(1)), int(match.group(2)))
    if not spec.contains(site):
        raise ConfigError(f"initial site {tuple(site)} lies outside lattice {spec}")
    coin = parse_coin_components(components.strip())
    norm_sq = float(np.vdot(coin, coin).real)
    if abs(norm_sq - 1.0) > NORMALIZATION_TOL:
        raise ConfigError(
            f"initial state is not normalized: sum |a_c|^2 = {norm_sq:.12g} "
            f"(tolerance {NORMALIZATION_TOL:g})"
        )
    return StateVector.product(spec, site, coin)
