"""
Scenario file loading and validation.

Validation parses the YAML document, applies the pydantic schema and a few
cross-checks that need no physics (pulse files exist, the noise rate window
fits the time grid). Line numbers come from the YAML node tree.
"""

import logging
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import ValidationError

from src.config import tolerance
from src.errors import ConfigurationError
from src.models.output import ValidationIssue, ValidationReport
from src.models.scenario import (
    NOISE_SCENARIOS,
    PulseSource,
    ScenarioConfig,
    ScenarioKind,
)
from src.models.system import CouplingKind
from src.schemes.capacitive import tau_cc
from src.schemes.josephson import tau_jj

logger = logging.getLogger(__name__)


def _node_line(root: Optional[yaml.Node], loc: tuple) -> Optional[int]:
    """1-based line of the deepest YAML node along a pydantic error location."""
    if root is None:
        return None
    node = root
    for part in loc:
        if isinstance(node, yaml.MappingNode):
            match = next((value for key, value in node.value if key.value == str(part)), None)
            if match is None:
                break
            node = match
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int) and part < len(node.value):
            node = node.value[part]
        else:
            break
    return node.start_mark.line + 1


def _read_document(path: Path) -> tuple[Any, Optional[yaml.Node], list[ValidationIssue]]:
    """Parsed data, node tree and syntax issues of a YAML file."""
    try:
        text = path.read_text()
    except OSError as exc:
        return None, None, [ValidationIssue(field="", message=f"Cannot read file: {exc}")]
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        return None, None, [ValidationIssue(
            field="",
            message=f"YAML syntax error: {getattr(exc, 'problem', None) or exc}",
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        )]
    if not isinstance(data, dict):
        return None, root, [ValidationIssue(field="", message="Scenario file must be a mapping", line=1)]
    return data, root, []


def _schema_issues(exc: ValidationError, root: Optional[yaml.Node]) -> list[ValidationIssue]:
    issues = []
    for error in exc.errors():
        loc = tuple(error["loc"])
        field = ".".join(str(p) for p in loc)
        message = error["msg"]
        if error["type"] == "missing":
            message = f"required field '{loc[-1]}' is missing"
        issues.append(ValidationIssue(field=field, message=message, line=_node_line(root, loc)))
    return issues


def _gate_time(config: ScenarioConfig) -> float:
    """Configured or analytic gate time at the configured system, no propagation."""
    if config.grid.tau is not None:
        return config.grid.tau
    coupling = config.system.coupling
    if coupling.kind == CouplingKind.JOSEPHSON:
        return tau_jj(coupling.E_JJ_idle) if coupling.E_JJ_idle > 0 else float("inf")
    E_J1 = config.system.qubit1.E_J_idle
    return tau_cc(E_J1) if E_J1 > 0 else float("inf")


def _semantic_issues(config: ScenarioConfig, root: Optional[yaml.Node]) -> list[ValidationIssue]:
    """Checks the schema cannot express."""
    issues = []
    files = []
    if config.evaluate is not None and config.evaluate.source == PulseSource.PULSE_FILE:
        files.append((("evaluate", "pulse_file"), config.evaluate.pulse_file))
    if config.krotov.warm_start:
        files.append((("krotov", "warm_start"), config.krotov.warm_start))
    for loc, name in files:
        if not Path(name).exists():
            issues.append(ValidationIssue(
                field=".".join(loc), message=f"pulse file not found: {name}", line=_node_line(root, loc)
            ))

    if config.scenario == ScenarioKind.EVALUATE_ONLY and config.evaluate is None:
        issues.append(ValidationIssue(field="evaluate", message="EvaluateOnly requires an evaluate section"))

    if config.scenario in NOISE_SCENARIOS and config.noise is not None:
        tau = _gate_time(config)
        if not tau > 0 or tau == float("inf"):
            issues.append(ValidationIssue(field="system", message="gate time is undefined for zero Josephson energy"))
        else:
            dt = tau / config.grid.n_steps
            gamma_max = config.noise.gamma_max if config.noise.gamma_max is not None else 10.0 / tau
            gamma_min = config.noise.gamma_min if config.noise.gamma_min is not None else 0.1 / tau
            limit = tolerance("noise", "max_flip_probability")
            if gamma_max * dt >= limit:
                issues.append(ValidationIssue(
                    field="noise.gamma_max",
                    message=f"gamma_max*dt = {gamma_max * dt:.3g} must stay below {limit}",
                    line=_node_line(root, ("noise", "gamma_max")),
                ))
            if gamma_min >= gamma_max:
                issues.append(ValidationIssue(
                    field="noise",
                    message=f"gamma_min ({gamma_min:.4g}) must be smaller than gamma_max ({gamma_max:.4g})",
                    line=_node_line(root, ("noise",)),
                ))
    return issues


def validate_config(path: str | Path, seed: Optional[int] = None) -> ValidationReport:
    """
    Validate a scenario file without running any physics.

    Args:
        path: YAML scenario file
        seed: Optional seed override, applied before schema validation

    Returns:
        ValidationReport listing every problem with its field and line
    """
    path = Path(path)
    data, root, issues = _read_document(path)
    if issues:
        return ValidationReport(path=str(path), valid=False, issues=issues)
    if seed is not None:
        data["seed"] = seed

    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        return ValidationReport(path=str(path), valid=False, issues=_schema_issues(exc, root))

    issues = _semantic_issues(config, root)
    return ValidationReport(
        path=str(path), valid=not issues, scenario=config.scenario.value, issues=issues
    )


def load_scenario(path: str | Path, seed: Optional[int] = None) -> ScenarioConfig:
    """
    Load and validate a scenario file.

    Raises:
        ConfigurationError: naming every invalid field
    """
    report = validate_config(path, seed=seed)
    if not report.valid:
        raise ConfigurationError(report.summary())

    data = yaml.safe_load(Path(path).read_text())
    if seed is not None:
        data["seed"] = seed
    config = ScenarioConfig.model_validate(data)
    logger.info("Loaded %s scenario from %s (seed %d)", config.scenario.value, path, config.seed)
    return config
