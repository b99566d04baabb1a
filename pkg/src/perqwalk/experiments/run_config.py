from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from perqwalk.io.initial_state import parse_initial_state
from perqwalk.walk.coin import COIN_KINDS, CoinOperator, load_coin_file, make_coin
from perqwalk.walk.lattice import LatticeSpec
from perqwalk.walk.states import StateVector


Mode = Literal["exact", "mc", "unitary", "asymptotic"]
Method = Literal["eq5", "fastpath", "auto"]
Format = Literal["json", "csv"]

DEFAULT_INITIAL = "0,0:@uniform"


class RunConfig(BaseModel):
    """
    One command's worth of parameters. Immutable and strict: unknown keys
    and malformed values are rejected when the model is built.

    - lattice: "MxN:<s-boundary>,<t-boundary>"
    - coin / coin_file: a named coin, or a JSON coin file (coin = "custom")
    - steps: evolution steps; for asymptotic runs the phase index t
    - method: eq5 (full attractor sum), fastpath (certified projector form)
      or auto (fastpath whenever certified)
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    lattice: str
    coin: str = "hadamard2d"
    coin_file: Optional[str] = None
    p: float = Field(0.5, ge=0.0, le=1.0)
    steps: int = Field(0, ge=0)
    mode: Mode = "exact"
    method: Method = "auto"
    trials: int = Field(1000, ge=1)
    seed: int = Field(0, ge=0)
    initial: str = DEFAULT_INITIAL
    out: Optional[str] = None
    format: Format = "json"

    @field_validator("lattice")
    @classmethod
    def _lattice_parses(cls, value: str) -> str:
        return str(LatticeSpec.parse(value))

    @field_validator("coin")
    @classmethod
    def _known_coin(cls, value: str) -> str:
        if value not in COIN_KINDS:
            raise ValueError(f"Unknown coin '{value}'. Known coins: {', '.join(COIN_KINDS)}")
        return value

    @model_validator(mode="after")
    def _coin_source(self) -> "RunConfig":
        if self.coin == "custom" and self.coin_file is None:
            raise ValueError("coin 'custom' needs coin_file")
        if self.coin_file is not None and self.coin != "custom":
            raise ValueError(f"coin_file given together with named coin '{self.coin}'")
        # Initial state must parse and be normalized on this lattice.
        parse_initial_state(self.initial, self.spec)
        return self

    # ---- Derived objects ----------------------------------------------------

    @property
    def spec(self) -> LatticeSpec:
        return LatticeSpec.parse(self.lattice)

    def build_coin(self) -> CoinOperator:
        if self.coin_file is not None:
            return load_coin_file(self.coin_file)
        return make_coin(self.coin)

    def initial_state(self) -> StateVector:
        return parse_initial_state(self.initial, self.spec)


def lattice_from_parts(size: str, boundary_s: str, boundary_t: str) -> str:
    """--size MxN --boundary-s B --boundary-t B -> "MxN:B,B"."""
    return str(LatticeSpec.parse(f"{size}:{boundary_s},{boundary_t}"))
