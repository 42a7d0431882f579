"""
Run settings for exactlab

Defaults ship in settings.toml next to this module. An ``exactlab.toml`` in
the working directory overrides them, and ``EXACTLAB_<NAME>`` environment
variables override both. Files are split into [default] and per-environment
tables; ``EXACTLAB_ENV`` picks the table layered over [default].
"""

from pathlib import Path

from dynaconf import Dynaconf, Validator

PACKAGE_DEFAULTS = Path(__file__).parent / "settings.toml"
LOCAL_OVERRIDES = "exactlab.toml"

VALIDATORS = [
    Validator("MULT_BOUND", must_exist=True, is_type_of=int, gte=0),
    Validator(
        "ENUM_CAP",
        "AXIOM_CAP",
        "LATTICE_LIMIT",
        "COVER_SEARCH_LIMIT",
        "EXT_BOUND",
        must_exist=True,
        is_type_of=int,
        gte=1,
    ),
    Validator("DEFAULT_PRESET", "OUTPUT_DIR", "LOG_LEVEL", must_exist=True, is_type_of=str),
]


def load_settings(*overrides: Path | str) -> Dynaconf:
    """Settings from the packaged defaults, then ``overrides`` in order"""
    files = [PACKAGE_DEFAULTS, *(overrides or [Path.cwd() / LOCAL_OVERRIDES])]
    return Dynaconf(
        envvar_prefix="EXACTLAB",
        settings_files=[str(f) for f in files],
        environments=True,
        env_switcher="EXACTLAB_ENV",
        validators=VALIDATORS,
    )


settings = load_settings()
