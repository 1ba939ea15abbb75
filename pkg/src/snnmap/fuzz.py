"""Randomized corresponding runs over the builder families.

Each trial draws its whole configuration from ``random.Random(trial_seed)``
and is expressed as a :class:`~snnmap.io.RunManifest`, so any trial can be
replayed from its manifest alone.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .check import RunReport, check_run, make_corresponding_run
from .failures import FailureGenerationError
from .io import RunManifest, build_from_spec, format_fraction

log = logging.getLogger(__name__)

SURVIVAL_GRID = tuple(Fraction(x) for x in ("1/4", "1/3", "1/2", "2/3", "3/4", "4/5", "7/8", "1"))
R_GRID = tuple(Fraction(x) for x in ("1/3", "1/2", "2/3", "3/4", "1"))
P_GRID = tuple(Fraction(x) for x in ("0", "1/16", "1/8", "1/4"))
FAMILIES = ("line", "ring", "hierarchy")


def trial_seeds(seed: int, n: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(n)]


def random_manifest(trial_seed: int, families=FAMILIES) -> RunManifest:
    rng = random.Random(trial_seed)
    family = rng.choice(families)
    if family == "line":
        lmax = rng.randint(1, 6)
        network = {"builder": "line", "lmax": lmax, "variant": rng.choice(["pulse_only", "self_loop_on_1"])}
        non_inputs = [str(v) for v in range(1, lmax + 1)]
    elif family == "ring":
        lmax = rng.randint(2, 6)
        network = {"builder": "ring", "lmax": lmax}
        non_inputs = [str(v) for v in range(1, lmax + 1)]
    else:
        lmax = rng.randint(1, 3)
        k = rng.randint(1, 3 if lmax < 3 else 2)
        network = {"builder": "hierarchy", "lmax": lmax, "k": k, "r": format_fraction(rng.choice(R_GRID))}
        non_inputs = ["v_lambda"]
    m = rng.randint(1, 6)
    s_V = rng.choice(SURVIVAL_GRID)
    s_E = rng.choice(SURVIVAL_GRID)
    p_neuron = Fraction(0) if s_V == 1 else rng.choice(P_GRID)
    p_edge = Fraction(0) if s_V * s_E == 1 else rng.choice(P_GRID)
    horizon = rng.randint(2, 8)
    density = rng.choice([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
    inputs = sorted(build_from_spec(network).input_neurons)
    fires = {}
    for t in range(horizon + 1):
        fired = [v for v in inputs if rng.randrange(density.denominator) < density.numerator]
        if fired:
            fires[str(t)] = fired
    return RunManifest(
        network=network,
        horizon=horizon,
        m=m,
        s_V=format_fraction(s_V),
        s_E=format_fraction(s_E),
        failures="random",
        p_neuron=format_fraction(p_neuron),
        p_edge=format_fraction(p_edge),
        seed=rng.getrandbits(64),
        max_attempts=200,
        schedule={"inputs": inputs, "fires": fires},
        actuator=rng.choice(non_inputs),
        notes={"trial_seed": trial_seed},
    )


@dataclass
class TrialResult:
    index: int
    manifest: RunManifest
    report: RunReport | None
    retries: int = 0

    @property
    def passed(self) -> bool:
        return self.report is not None and self.report.passed


def run_manifest(manifest: RunManifest) -> RunReport:
    a1 = manifest.abstract_network()
    run = make_corresponding_run(
        a1,
        manifest.params(),
        manifest.failure_source(),
        manifest.input_schedule(a1),
        detailed=manifest.detailed(),
    )
    return check_run(run, actuator_on=manifest.actuator)


def run_trial(index: int, trial_seed: int, families=FAMILIES) -> TrialResult:
    """Run one trial; when rejection sampling gives up, halve both probabilities and retry."""
    manifest = random_manifest(trial_seed, families)
    retries = 0
    while True:
        try:
            return TrialResult(index, manifest, run_manifest(manifest), retries)
        except FailureGenerationError:
            retries += 1
            manifest.p_neuron = format_fraction(Fraction(manifest.p_neuron) / 2 if retries < 4 else 0)
            manifest.p_edge = format_fraction(Fraction(manifest.p_edge) / 2 if retries < 4 else 0)
            manifest.notes["retries"] = retries


@dataclass
class FuzzSummary:
    seed: int
    trials: int = 0
    passed: int = 0
    failures: list[TrialResult] = field(default_factory=list)
    families: dict[str, int] = field(default_factory=dict)
    retried: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def run_fuzz(trials: int, seed: int, out_dir: str | Path | None = None, families=FAMILIES) -> FuzzSummary:
    """Run ``trials`` independent trials; failing trials are saved as manifests under ``out_dir``."""
    summary = FuzzSummary(seed)
    for i, ts in enumerate(trial_seeds(seed, trials)):
        result = run_trial(i, ts, families)
        summary.trials += 1
        family = result.manifest.network["builder"]
        summary.families[family] = summary.families.get(family, 0) + 1
        summary.retried += bool(result.retries)
        log.debug("trial %d seed %d %s", i, ts, "pass" if result.passed else "FAIL")
        if result.passed:
            summary.passed += 1
            continue
        summary.failures.append(result)
        log.warning("trial %d (seed %d) found a violation", i, ts)
        if out_dir is not None:
            path = Path(out_dir)
            path.mkdir(parents=True, exist_ok=True)
            result.manifest.save(path / f"counterexample-{i:05d}-{ts}.json")
    return summary
