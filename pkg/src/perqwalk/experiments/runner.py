"""
Runs one command: builds the lattice, coin and channel from a RunConfig,
picks the engine and returns a result record. Nothing here prints or writes
files; that is the CLI's job.
"""
from __future__ import annotations

import logging
from typing import Optional, Tuple, Union

from perqwalk import __version__
from perqwalk.asymptotics.attractors import (
    AsymptoticState,
    AttractorBasis,
    asymptotic_fastpath,
    asymptotic_state,
    attractor_basis_for,
    dimension_report,
    general_attractor_basis,
)
from perqwalk.config.settings import get_settings
from perqwalk.errors import AttractorCompletenessError, CertificationError, ConfigError
from perqwalk.experiments.run_config import RunConfig
from perqwalk.io.persistence import (
    AttractorReportRecord,
    DistributionRecord,
    LambdaCount,
    RunMetadata,
    distribution_record,
)
from perqwalk.utils.tracing import trace_block
from perqwalk.walk.channel import EdgeConfiguration, PercolationChannel, PercolationModel
from perqwalk.walk.evolution import (
    check_dense_guard,
    evolve_exact,
    evolve_mc,
    evolve_unitary,
    position_marginal,
)
from perqwalk.walk.states import StateVector


logger = logging.getLogger("perqwalk.runner")

EVOLVE_MODES = ("exact", "mc", "unitary")


class ExperimentRunner:
    """
    Executes the evolve / asymptotic / attractors commands for one config.

    Responsibilities:
    - build the channel once per run
    - route to the right engine and enforce the command's preconditions
    - fill in reproducibility metadata
    """

    def __init__(self, config: RunConfig) -> None:
        self._config = config
        self._spec = config.spec
        self._coin = config.build_coin()
        self._channel = PercolationChannel(self._spec, self._coin, PercolationModel(config.p))
        self._attractor_basis: Optional[AttractorBasis] = None

    @property
    def channel(self) -> PercolationChannel:
        return self._channel

    # ---- Commands -----------------------------------------------------------

    def run_evolve(self) -> DistributionRecord:
        cfg = self._config
        if cfg.mode not in EVOLVE_MODES:
            raise ConfigError(f"evolve needs mode in {', '.join(EVOLVE_MODES)}, got '{cfg.mode}'")
        psi0 = cfg.initial_state()
        with trace_block("run_evolve", extra={"mode": cfg.mode, "lattice": str(self._spec)}):
            if cfg.mode == "exact":
                check_dense_guard(self._spec)
                dist = position_marginal(evolve_exact(self._channel, psi0.to_density(), cfg.steps))
            elif cfg.mode == "unitary":
                config = EdgeConfiguration.full(self._spec)
                dist = evolve_unitary(self._spec, self._coin, config, psi0, cfg.steps).marginal()
            else:
                dist = evolve_mc(self._channel, psi0, cfg.steps, cfg.trials, cfg.seed)
        return distribution_record(dist, self._metadata("evolve"))

    def run_asymptotic(self) -> DistributionRecord:
        cfg = self._config
        if cfg.mode != "asymptotic":
            raise ConfigError(f"asymptotic needs mode 'asymptotic', got '{cfg.mode}'")
        check_dense_guard(self._spec)
        if cfg.p in (0.0, 1.0):
            logger.warning("p = %g: the percolated asymptotics assume 0 < p < 1", cfg.p)
        psi0 = cfg.initial_state()
        basis = self.attractor_basis()
        state, method = self._asymptotic(basis, psi0)
        return distribution_record(
            state.marginal(),
            self._metadata("asymptotic"),
            attractor_dimension=basis.dimension,
            attractor_status=basis.status,
            method_used=method,
        )

    def run_attractors(self) -> AttractorReportRecord:
        report = dimension_report(self._spec, self._coin, p=self._config.p)
        return AttractorReportRecord(
            metadata=self._metadata("attractors"),
            analytic_count=report.analytic_count,
            numeric_count=report.numeric_count,
            match=report.match,
            closed_form=report.closed_form,
            general_count=report.general_count,
            lambdas=[LambdaCount(lam.real, lam.imag, mult) for lam, mult in report.lambdas],
        )

    def attractor_basis(self) -> AttractorBasis:
        """The basis behind run_asymptotic, built once per runner."""
        if self._attractor_basis is None:
            self._attractor_basis = self._basis()
        return self._attractor_basis

    # ---- Internals ----------------------------------------------------------

    def _basis(self) -> AttractorBasis:
        """
        Minimal basis, or the general one when the general solver finds the
        minimal subspace incomplete (only possible within its guard).
        """
        try:
            return attractor_basis_for(self._channel)
        except AttractorCompletenessError as exc:
            if self._config.method == "fastpath":
                raise
            logger.warning("%s; using the general attractor basis", exc)
            return general_attractor_basis(self._channel)

    def _asymptotic(self, basis: AttractorBasis, psi0: StateVector) -> Tuple[AsymptoticState, str]:
        method = self._config.method
        t = self._config.steps
        if method == "fastpath" or (method == "auto" and basis.certified):
            if not basis.certified:
                raise CertificationError(
                    f"fastpath forced but the attractor space on {self._spec} is {basis.status}, not certified"
                )
            return asymptotic_fastpath(basis.decomposition(), self._channel, psi0, t), "fastpath"
        return asymptotic_state(basis, psi0, t), "eq5"

    def _metadata(self, command: str) -> RunMetadata:
        cfg = self._config
        mc = command == "evolve" and cfg.mode == "mc"
        return RunMetadata(
            command=command,
            lattice=cfg.lattice,
            coin=self._coin.kind,
            p=cfg.p,
            steps=cfg.steps,
            mode=cfg.mode,
            tool_version=__version__,
            seed=cfg.seed if mc else None,
            trials=cfg.trials if mc else None,
            method=cfg.method if command == "asymptotic" else None,
            initial=cfg.initial if command != "attractors" else None,
            coin_file=cfg.coin_file,
            mc_block=get_settings().mc_block if mc else None,
        )


def run_command(command: str, config: RunConfig) -> Union[DistributionRecord, AttractorReportRecord]:
    runner = ExperimentRunner(config)
    settings = get_settings()
    logger.debug("running %s on %s with %d threads", command, config.lattice, settings.threads)
    if command == "evolve":
        return runner.run_evolve()
    if command == "asymptotic":
        return runner.run_asymptotic()
    if command == "attractors":
        return runner.run_attractors()
    raise ConfigError(f"Unknown command '{command}'. Known commands: asymptotic, attractors, evolve")
