"""File formats: networks, schedules, failure patterns, copies maps, traces, manifests.

Structured files are JSON.  Every rational is written as an integer or a
``"p/q"`` string; decimal notation is rejected on load so values survive a
round trip exactly.
"""

from __future__ import annotations

import csv
import io as _io
import json
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .builders import (
    HierarchyParams,
    LineParams,
    LineVariant,
    RingParams,
    build_hierarchy,
    build_line,
    build_ring,
)
from .core import (
    ExecutionTrace,
    FailurePattern,
    InputSchedule,
    NetworkError,
    NetworkSpec,
    validate_network,
)
from .derive import CopiesMap, DerivationParams
from .failures import GeneratorPolicy, PolicyKind

NETWORK_FORMAT = "snnmap.network/1"
SCHEDULE_FORMAT = "snnmap.schedule/1"
FAILURES_FORMAT = "snnmap.failures/1"
COPIES_FORMAT = "snnmap.copies/1"
MANIFEST_FORMAT = "snnmap.manifest/1"

_RATIONAL = re.compile(r"^\s*-?\d+\s*(/\s*\d+\s*)?$")


def parse_fraction(value: Any) -> Fraction:
    """Parse an integer or ``"p/q"`` string exactly."""
    if isinstance(value, bool):
        raise NetworkError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise NetworkError(f"zero denominator in {value!r}") from None
    raise NetworkError(f"expected an integer or 'p/q' fraction, got {value!r}")


def format_fraction(value: Fraction) -> str:
    return str(Fraction(value))


def _read_json(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _write_json(path: str | Path, doc: Mapping) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _expect_format(doc: Mapping, fmt: str) -> None:
    if doc.get("format", fmt) != fmt:
        raise NetworkError(f"expected a {fmt} document, got {doc.get('format')!r}")


# -- networks --


def network_to_dict(net: NetworkSpec) -> dict:
    return {
        "format": NETWORK_FORMAT,
        "name": net.name,
        "neurons": list(net.neurons),
        "inputs": [v for v in net.neurons if v in net.input_neurons],
        "edges": [[u, v, format_fraction(w)] for (u, v), w in net.edges.items()],
        "thresholds": {v: format_fraction(net.thresholds[v]) for v in net.neurons if v in net.thresholds},
        "initial_firing": {v: b for v, b in net.initial_firing.items() if b},
    }


def network_from_dict(doc: Mapping) -> NetworkSpec:
    _expect_format(doc, NETWORK_FORMAT)
    edges: dict[tuple[str, str], Fraction] = {}
    for entry in doc.get("edges", []):
        if len(entry) != 3:
            raise NetworkError(f"edge entry must be [src, dst, weight], got {entry!r}")
        u, v, w = entry
        if (u, v) in edges:
            raise NetworkError(f"parallel edge ({u!r}, {v!r})")
        edges[(u, v)] = parse_fraction(w)
    net = NetworkSpec(
        neurons=tuple(doc["neurons"]),
        input_neurons=frozenset(doc.get("inputs", [])),
        edges=edges,
        thresholds={v: parse_fraction(h) for v, h in doc.get("thresholds", {}).items()},
        initial_firing={v: int(b) for v, b in doc.get("initial_firing", {}).items()},
        name=doc.get("name", ""),
    )
    problems = validate_network(net)
    if problems:
        raise NetworkError("; ".join(problems))
    return net


def save_network(net: NetworkSpec, path: str | Path) -> None:
    _write_json(path, network_to_dict(net))


def load_network(path: str | Path) -> NetworkSpec:
    return network_from_dict(_read_json(path))


# -- schedules --


def schedule_to_dict(schedule: InputSchedule) -> dict:
    return {
        "format": SCHEDULE_FORMAT,
        "inputs": sorted(schedule.inputs),
        "horizon": schedule.horizon,
        "fires": {str(t): sorted(f) for t, f in enumerate(schedule.firing) if f},
    }


def schedule_from_dict(doc: Mapping, inputs=None) -> InputSchedule:
    _expect_format(doc, SCHEDULE_FORMAT)
    horizon = int(doc["horizon"])
    inputs = frozenset(doc["inputs"]) if "inputs" in doc else frozenset(inputs or ())
    slots = [frozenset() for _ in range(horizon + 1)]
    for t, fired in doc.get("fires", {}).items():
        t = int(t)
        if not 0 <= t <= horizon:
            raise NetworkError(f"schedule time {t} outside 0..{horizon}")
        slots[t] = frozenset(fired)
    return InputSchedule(inputs, horizon, tuple(slots))


def save_schedule(schedule: InputSchedule, path: str | Path) -> None:
    _write_json(path, schedule_to_dict(schedule))


def load_schedule(path: str | Path) -> InputSchedule:
    return schedule_from_dict(_read_json(path))


def schedule_from_source(source: str | Mapping, net: NetworkSpec, horizon: int) -> InputSchedule:
    """Resolve ``pulse0``, ``every:<k>``, ``silent``, a file path or an inline dict."""
    if isinstance(source, Mapping):
        doc = dict(source)
        doc.setdefault("horizon", horizon)
        return schedule_from_dict(doc, inputs=net.input_neurons)
    if source == "pulse0":
        return InputSchedule.pulse(net.input_neurons, horizon)
    if source == "silent":
        return InputSchedule.silent(net.input_neurons, horizon)
    if source.startswith("every:"):
        try:
            period = int(source.split(":", 1)[1])
        except ValueError:
            raise NetworkError(f"bad schedule {source!r}; expected every:<k>") from None
        return InputSchedule.every(net.input_neurons, horizon, period)
    return load_schedule(source)


# -- failure patterns and copies maps --


def failure_to_dict(failure: FailurePattern) -> dict:
    return {
        "format": FAILURES_FORMAT,
        "failed_neurons": sorted(failure.failed_neurons),
        "failed_edges": [list(e) for e in sorted(failure.failed_edges)],
    }


def failure_from_dict(doc: Mapping) -> FailurePattern:
    _expect_format(doc, FAILURES_FORMAT)
    return FailurePattern(
        frozenset(doc.get("failed_neurons", [])),
        frozenset(tuple(e) for e in doc.get("failed_edges", [])),
    )


def save_failure(failure: FailurePattern, path: str | Path) -> None:
    _write_json(path, failure_to_dict(failure))


def load_failure(path: str | Path) -> FailurePattern:
    return failure_from_dict(_read_json(path))


def copies_to_dict(cmap: CopiesMap) -> dict:
    return {"format": COPIES_FORMAT, "copies": {v: list(cs) for v, cs in cmap.forward.items()}}


def copies_from_dict(doc: Mapping) -> CopiesMap:
    _expect_format(doc, COPIES_FORMAT)
    return CopiesMap({v: tuple(cs) for v, cs in doc["copies"].items()})


def save_copies(cmap: CopiesMap, path: str | Path) -> None:
    _write_json(path, copies_to_dict(cmap))


def load_copies(path: str | Path) -> CopiesMap:
    return copies_from_dict(_read_json(path))


# -- traces --


def trace_to_csv(trace: ExecutionTrace) -> str:
    """Sparse CSV: ``time,neuron,fired`` rows for firings only, then ``# horizon=T``."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["time", "neuron", "fired"])
    for t, v in trace.events():
        writer.writerow([t, v, 1])
    buf.write(f"# horizon={trace.horizon}\n")
    return buf.getvalue()


def events_from_csv(text: str) -> tuple[int | None, list[tuple[int, str]]]:
    horizon = None
    rows = []
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            m = re.match(r"#\s*horizon=(\d+)", line)
            if m:
                horizon = int(m.group(1))
            continue
        lines.append(line)
    for row in csv.DictReader(lines):
        if row["fired"] == "1":
            rows.append((int(row["time"]), row["neuron"]))
    return horizon, rows


def raster(trace: ExecutionTrace, neurons=None) -> str:
    """One row per neuron, one column per time step; ``#`` fires, ``.`` does not."""
    neurons = list(neurons or trace.network.neurons)
    width = max(len(v) for v in neurons)
    lines = []
    for v in neurons:
        row = "".join("#" if c[v] else "." for c in trace.configs)
        lines.append(f"{v:>{width}} {row}")
    return "\n".join(lines)


# -- network sources and manifests --


def build_from_spec(spec: str | Mapping) -> NetworkSpec:
    """Build a network from ``"line:lmax=5"``-style text or a ``{"builder": ...}`` dict."""
    if isinstance(spec, str):
        family, _, rest = spec.partition(":")
        kwargs = dict(item.split("=", 1) for item in rest.split(",") if item)
    else:
        kwargs = dict(spec)
        family = kwargs.pop("builder")
    try:
        if family == "line":
            variant = kwargs.get("variant", LineVariant.PULSE_ONLY.value)
            return build_line(LineParams(int(kwargs["lmax"]), LineVariant(variant)))
        if family == "ring":
            return build_ring(RingParams(int(kwargs["lmax"])))
        if family == "hierarchy":
            loops = str(kwargs.get("self_loops", "false")).lower() in ("1", "true", "yes")
            return build_hierarchy(
                HierarchyParams(
                    int(kwargs["lmax"]), int(kwargs["k"]), parse_fraction(kwargs["r"]), loops
                )
            )
    except KeyError as exc:
        raise NetworkError(f"missing builder parameter {exc.args[0]!r} for {family}") from None
    except ValueError as exc:
        raise NetworkError(str(exc)) from None
    raise NetworkError(f"unknown network family {family!r}")


def load_network_source(source: str | Mapping) -> NetworkSpec:
    if isinstance(source, Mapping):
        if "file" in source:
            return load_network(source["file"])
        return build_from_spec(source)
    if Path(source).is_file():
        return load_network(source)
    return build_from_spec(source)


@dataclass
class RunManifest:
    """Everything needed to reproduce one corresponding run."""

    network: str | dict
    horizon: int
    m: int = 1
    s_V: str = "1"
    s_E: str = "1"
    failures: str = "none"
    p_neuron: str = "0"
    p_edge: str = "0"
    seed: int = 0
    max_attempts: int = 100
    schedule: str | dict = "pulse0"
    actuator: str | None = None
    detailed_network: str | None = None
    copies: str | None = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise NetworkError(f"horizon must be >= 0, got {self.horizon}")

    def to_dict(self) -> dict:
        doc = {"format": MANIFEST_FORMAT}
        doc.update({k: v for k, v in asdict(self).items() if v is not None and v != {}})
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping) -> "RunManifest":
        _expect_format(doc, MANIFEST_FORMAT)
        known = {f for f in cls.__dataclass_fields__}
        extra = set(doc) - known - {"format"}
        if extra:
            raise NetworkError(f"unknown manifest keys: {sorted(extra)}")
        return cls(**{k: v for k, v in doc.items() if k != "format"})

    def save(self, path: str | Path) -> None:
        _write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        return cls.from_dict(_read_json(path))

    def abstract_network(self) -> NetworkSpec:
        return load_network_source(self.network)

    def params(self) -> DerivationParams:
        return DerivationParams(int(self.m), parse_fraction(self.s_V), parse_fraction(self.s_E))

    def failure_source(self) -> GeneratorPolicy | FailurePattern:
        kinds = {
            "none": PolicyKind.NONE,
            "paper": PolicyKind.PAPER_ADVERSARIAL,
            "paper_adversarial": PolicyKind.PAPER_ADVERSARIAL,
            "random": PolicyKind.RANDOM_IID,
            "random_iid": PolicyKind.RANDOM_IID,
            "maximal": PolicyKind.MAXIMAL,
        }
        if self.failures in kinds:
            return GeneratorPolicy(
                kinds[self.failures],
                parse_fraction(self.p_neuron),
                parse_fraction(self.p_edge),
                int(self.seed),
                int(self.max_attempts),
            )
        return load_failure(self.failures)

    def input_schedule(self, net: NetworkSpec) -> InputSchedule:
        return schedule_from_source(self.schedule, net, self.horizon)

    def detailed(self) -> tuple[NetworkSpec, CopiesMap] | None:
        if self.detailed_network is None:
            return None
        if self.copies is None:
            raise NetworkError("a detailed network file needs a copies map file")
        return load_network(self.detailed_network), load_copies(self.copies)
