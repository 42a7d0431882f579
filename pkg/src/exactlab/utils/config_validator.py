"""
Configuration Validator - Checks a run configuration before any universe is built
"""

import logging
import re

logger = logging.getLogger(__name__)

STRUCTURE_PATTERN = re.compile(r"^(split|abelian|induced:.+|file:.+)$")
N_PATTERN = re.compile(r"^(inj|proj|zero|file:.+)$")
KINDS = ("thick", "complete")
SIDES = ("ambient", "stable")
EMITS = ("json", "dot", "md")


class ConfigValidator:
    """Run configuration validator"""

    @staticmethod
    def validate_run_config(config) -> tuple[bool, list]:
        """Validate a run configuration

        Returns:
            tuple: (validation passed, list of problems)
        """
        logger.info(f"Checking run configuration for '{config.command}'")

        problems = []
        if bool(config.preset) == bool(config.spec):
            problems.append("exactly one of preset and spec must be given")
        if config.mult_bound < 0:
            problems.append(f"mult_bound must be >= 0, got {config.mult_bound}")
        for name in ("enum_cap", "axiom_cap", "lattice_limit", "cover_limit", "ext_bound"):
            value = getattr(config, name)
            if value < 1:
                problems.append(f"{name} must be >= 1, got {value}")
        if not STRUCTURE_PATTERN.match(config.structure):
            problems.append(f"unknown structure '{config.structure}'")
        if not N_PATTERN.match(config.n_selector):
            problems.append(f"unknown N selector '{config.n_selector}'")
        if config.kind not in KINDS:
            problems.append(f"kind must be one of {', '.join(KINDS)}")
        if config.side not in SIDES:
            problems.append(f"side must be one of {', '.join(SIDES)}")
        unknown = [e for e in config.emit if e not in EMITS]
        if unknown:
            problems.append(f"unknown emit format(s): {', '.join(unknown)}")

        if problems:
            logger.error(f"Invalid run configuration: {'; '.join(problems)}")
            return False, problems

        logger.info("Configuration check passed")
        return True, []
