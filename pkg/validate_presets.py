#!/usr/bin/env python3
"""
Validation script for the experiment presets in delaylwr/presets/.
Every preset must resolve its `extends` chain and pass full run-config validation.
"""

import sys
from pathlib import Path
from typing import List, Optional

from delaylwr.core.exceptions import SimulationException
from delaylwr.experiments.presets import PresetStore


def validate_presets(preset_dirs: Optional[List[Path]] = None) -> bool:
    """Validate every preset the store can see.

    Args:
        preset_dirs: Extra directories to check next to the packaged presets

    Returns:
        True if every preset is valid, False otherwise
    """
    store = PresetStore(extra_dirs=preset_dirs, include_user_dir=False)
    names = store.list_names()
    if not names:
        print("Error: no presets found")
        return False

    print(f"Found {len(names)} presets")
    documents = store.raw_documents()
    issues = []
    for name in names:
        try:
            preset = store.build(name, documents)
        except SimulationException as e:
            issues.append(f"Preset '{name}': {e}")
            continue
        if not preset.description:
            print(f"Warning: preset '{name}' has no description")
        if not preset.expected_checks:
            print(f"Warning: preset '{name}' lists no expected checks")
        solver = preset.solver_config
        print(f"  - {name}: nx={solver.grid.nx}, delay={solver.t_delay_steps}, "
              f"velocity={preset.velocity_model.kind}, initial={preset.initial_condition.kind}")
        for check in preset.expected_checks:
            print(f"      check: {check}")

    if issues:
        print("\nValidation issues found:")
        for issue in issues:
            print(f"  - {issue}")
        return False
    return True


def main():
    """Main validation function."""
    extra = [Path(arg) for arg in sys.argv[1:]]
    print("Validating experiment presets")
    print("=" * 50)

    if validate_presets(extra):
        print("\nValidation passed! All presets are ready for use.")
        sys.exit(0)
    else:
        print("\nValidation failed! Please fix the issues above.")
        sys.exit(1)


if __name__ == "__main__":
    main()
