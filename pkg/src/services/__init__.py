# Scenario services
from src.services.scenario_service import ScenarioService
from src.services.validation import load_scenario, validate_config

__all__ = [
    "ScenarioService",
    "load_scenario",
    "validate_config",
]
