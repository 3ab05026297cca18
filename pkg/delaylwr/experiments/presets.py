"""Named experiment presets loaded from YAML files."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import yaml

from delaylwr.config.logging import get_logger
from delaylwr.config.manager import RunConfig, config_from_mapping, config_to_mapping
from delaylwr.core.exceptions import ConfigurationError, SimulationException, UsageError
from delaylwr.experiments.initial import InitialCondition
from delaylwr.model.velocity import VelocityModel
from delaylwr.solver.models import FinalTime, SolverConfig

logger = get_logger(__name__)

PRESET_KEYS = {"name", "description", "extends", "checks", "config"}


@dataclass(frozen=True, slots=True)
class Preset:
    """An immutable, fully validated experiment description."""

    name: str
    run_config: RunConfig
    description: str = ""
    expected_checks: List[str] = field(default_factory=list)

    @property
    def solver_config(self) -> SolverConfig:
        return self.run_config.solver

    @property
    def velocity_model(self) -> VelocityModel:
        return self.run_config.velocity

    @property
    def initial_condition(self) -> InitialCondition:
        return self.run_config.initial

    def with_delay(self, delay_steps: int) -> "Preset":
        """Same preset with another delay; the result is re-validated."""
        return self._with_mapping(delay_steps=delay_steps)

    def with_final_time(self, t_final: float) -> "Preset":
        return self._with_mapping(stop=FinalTime(t_f=float(t_final)).to_mapping())

    def _with_mapping(self, **overrides: Any) -> "Preset":
        mapping = config_to_mapping(self.run_config)
        mapping.update(overrides)
        return replace(self, run_config=config_from_mapping(mapping))


def merge_mappings(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive merge; a section whose ``kind`` changes is replaced, not merged."""
    merged = dict(base)
    for key, value in override.items():
        current = merged.get(key)
        if isinstance(current, dict) and isinstance(value, dict) and current.get("kind") == value.get("kind", current.get("kind")):
            merged[key] = merge_mappings(current, value)
        else:
            merged[key] = value
    return merged


class PresetStore:
    """Load experiment presets from the package and user preset directories."""

    def __init__(self, extra_dirs: Optional[Iterable[Path]] = None, include_user_dir: bool = True):
        package_dir = Path(__file__).resolve().parent.parent / "presets"
        self.preset_dirs: List[Path] = [package_dir]
        if include_user_dir:
            user_dir = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config")) / "delaylwr" / "presets"
            self.preset_dirs.append(user_dir)
        if extra_dirs:
            self.preset_dirs.extend(Path(d) for d in extra_dirs)
        self._cache: Dict[str, Preset] = {}

    def _preset_files(self) -> Iterable[Path]:
        for preset_dir in self.preset_dirs:
            if preset_dir.exists():
                yield from sorted(preset_dir.glob("*.y*ml"))

    def raw_documents(self) -> Dict[str, Dict[str, Any]]:
        """Preset documents by name; packaged names cannot be redefined by other directories."""
        documents: Dict[str, Dict[str, Any]] = {}
        packaged: set = set()
        for path in self._preset_files():
            try:
                raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
            except (OSError, yaml.YAMLError) as exc:
                logger.warning("Skipping preset %s: %s", path, exc)
                continue
            if not isinstance(raw, dict):
                logger.warning("Skipping preset %s because it is not a mapping", path)
                continue
            name = str(raw.get("name") or path.stem)
            if name in packaged:
                logger.warning("Ignoring preset %s: '%s' is a packaged preset name", path, name)
                continue
            if path.parent == self.preset_dirs[0]:
                packaged.add(name)
            # among user directories the later one wins
            documents[name] = raw
        return documents

    def _resolve(self, name: str, documents: Dict[str, Dict[str, Any]], chain: tuple = ()) -> Dict[str, Any]:
        if name in chain:
            raise ConfigurationError(f"preset inheritance cycle: {' -> '.join((*chain, name))}",
                                     invalid_value=name, validation_rule="extends must not form a cycle")
        raw = documents.get(name)
        if raw is None:
            raise ConfigurationError(f"preset '{chain[-1]}' extends unknown preset '{name}'", invalid_value=name)
        unknown = sorted(set(raw) - PRESET_KEYS)
        if unknown:
            raise ConfigurationError(f"unknown preset key(s) in '{name}': {', '.join(unknown)}",
                                     invalid_value=unknown, validation_rule=f"allowed: {', '.join(sorted(PRESET_KEYS))}")
        config = raw.get("config") or {}
        if not isinstance(config, dict):
            raise ConfigurationError(f"preset '{name}' config must be a mapping", invalid_value=config)
        parent = raw.get("extends")
        if parent:
            config = merge_mappings(self._resolve(str(parent), documents, (*chain, name)), config)
        return config

    def build(self, name: str, documents: Optional[Dict[str, Dict[str, Any]]] = None) -> Preset:
        """Resolve inheritance for ``name`` and validate the resulting run config.

        Raises:
            ConfigurationError: Broken inheritance or an invalid configuration
        """
        documents = documents if documents is not None else self.raw_documents()
        raw = documents[name]
        config = dict(self._resolve(name, documents))
        config["name"] = name
        checks = raw.get("checks") or []
        return Preset(
            name=name,
            run_config=config_from_mapping(config),
            description=str(raw.get("description") or ""),
            expected_checks=[str(check) for check in checks],
        )

    def load_all(self) -> List[Preset]:
        """Every preset that resolves and validates; broken ones are logged and skipped."""
        documents = self.raw_documents()
        presets = []
        for name in sorted(documents):
            try:
                presets.append(self.find(name, documents))
            except SimulationException as exc:
                logger.warning("Skipping preset %s: %s", name, exc)
        return presets

    def find(self, name: str, documents: Optional[Dict[str, Dict[str, Any]]] = None) -> Optional[Preset]:
        """Find a preset by name; None when no such preset exists."""
        normalized = name.lower().strip()
        if normalized in self._cache:
            return self._cache[normalized]
        documents = documents if documents is not None else self.raw_documents()
        if normalized not in documents:
            return None
        preset = self.build(normalized, documents)
        self._cache[normalized] = preset
        return preset

    def list_names(self) -> List[str]:
        return sorted(self.raw_documents())

    def get(self, name: str) -> Preset:
        """Like find, but an unknown name raises UsageError listing the valid names."""
        preset = self.find(name)
        if preset is None:
            raise UsageError(f"unknown preset '{name}'", valid_choices=self.list_names())
        return preset


_default_store: Optional[PresetStore] = None


def default_store() -> PresetStore:
    global _default_store
    if _default_store is None:
        _default_store = PresetStore()
    return _default_store


def preset(name: str) -> Preset:
    """Fully specified preset by name.

    Raises:
        UsageError: Unknown name; the message lists the valid presets
    """
    return default_store().get(name)
