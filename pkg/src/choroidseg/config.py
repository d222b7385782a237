"""Flat key/value config files.

One ``key = value`` pair per line, ``#`` comments, blank lines ignored.
Keys mirror the pipeline config snapshot embedded in every result JSON,
so a run is reproducible from a checked-in file.
"""

from .errors import ParseError
from .pipeline import PipelineConfig, config_from_dict

_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def _coerce(raw: str):
    low = raw.lower()
    if low in _BOOL:
        return _BOOL[low]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def parse_config_text(text: str, source: str = "<config>") -> PipelineConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"{source}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        values[key.strip()] = _coerce(raw.strip())
    try:
        return config_from_dict(values)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{source}: {exc}") from exc


def load_config(path: str) -> PipelineConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read config file: {path}") from exc
    return parse_config_text(text, source=path)
