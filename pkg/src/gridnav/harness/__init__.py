from .config import SimConfig, load_config, default_config_yaml
from .scenario import Scenario, ScenarioBlockage, load_scenarios, save_scenarios
from .metrics import Metrics, compute_metrics, deadline_for
from .runner import ScenarioResult, run_scenario
from .generate import generate_blockage_scenarios
from .bench import BenchReport, bench_affected_area, make_scan_corpus

__all__ = [
    "SimConfig", "load_config", "default_config_yaml",
    "Scenario", "ScenarioBlockage", "load_scenarios", "save_scenarios",
    "Metrics", "compute_metrics", "deadline_for",
    "ScenarioResult", "run_scenario",
    "generate_blockage_scenarios",
    "BenchReport", "bench_affected_area", "make_scan_corpus",
]
