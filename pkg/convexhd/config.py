"""Configuration management for convexhd."""

import json
import os
from contextlib import suppress
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

DEFAULTS: Dict[str, Any] = {
    "dart_bound": 400,
    "search_depth": 3,
    "arc_faces": 2,
    "mirrored_rounding": False,
    "remove_bigon_points": True,
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def coerce(key: str, value: Any) -> Any:
    """Convert ``value`` to the type of the default for ``key``.

    Raises:
        KeyError: If ``key`` is not a known setting.
        ValueError: If the value cannot be converted.
    """
    default = DEFAULTS[key]
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in _TRUE:
            return True
        if text in _FALSE:
            return False
        raise ValueError(f"{key} expects true or false, got {value!r}")
    number = int(value)
    if number < 0:
        raise ValueError(f"{key} must not be negative")
    return number


class Config:
    """Manages convexhd configuration stored in ~/.convexhd/config.yaml.

    Every key can be overridden by an environment variable named
    ``CONVEXHD_<KEY>``; environment values take precedence over the file.

    Attributes:
        config_dir: Path to the configuration directory (~/.convexhd).
        config_file: Path to the configuration file (~/.convexhd/config.yaml).
        history_file: Path to the verdict history (~/.convexhd/history.jsonl).
    """

    _HISTORY_MAX = 100

    def __init__(self) -> None:
        self.config_dir = Path.home() / ".convexhd"
        self.config_file = self.config_dir / "config.yaml"
        self.history_file = self.config_dir / "history.jsonl"
        self._ensure_config_dir()

    def _ensure_config_dir(self) -> None:
        self.config_dir.mkdir(mode=0o700, exist_ok=True)
        with suppress(OSError):
            os.chmod(self.config_dir, 0o700)

    def _read_config(self) -> Dict[str, Any]:
        if not self.config_file.exists():
            return {}
        with open(self.config_file, encoding="utf-8") as f:
            return yaml.safe_load(f) or {}

    def _write_config(self, config: Dict[str, Any]) -> None:
        """Write config with restrictive file permissions when possible."""
        payload = yaml.safe_dump(config, default_flow_style=False)

        flags = os.O_WRONLY | os.O_CREAT | os.O_TRUNC
        try:
            fd = os.open(self.config_file, flags, 0o600)
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(payload)
        except OSError:
            with open(self.config_file, "w", encoding="utf-8") as f:
                f.write(payload)
            with suppress(OSError):
                os.chmod(self.config_file, 0o600)

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value.

        The environment variable wins over the file, and the file over the
        built-in default.

        Example:
            >>> config = Config()
            >>> depth = config.get("search_depth")
        """
        if key in DEFAULTS:
            if (env := os.environ.get(f"CONVEXHD_{key.upper()}")) is not None:
                return coerce(key, env)
            stored = self._read_config().get(key)
            return coerce(key, stored) if stored is not None else DEFAULTS[key]
        return self._read_config().get(key, default)

    def set(self, key: str, value: Any) -> None:
        """Validate and store a configuration value.

        Raises:
            KeyError: If ``key`` is not a known setting.
            ValueError: If ``value`` has the wrong type.
        """
        if key not in DEFAULTS:
            raise KeyError(key)
        config = self._read_config()
        config[key] = coerce(key, value)
        self._write_config(config)

    def all(self) -> Dict[str, Any]:
        """Effective values of every known setting."""
        return {key: self.get(key) for key in DEFAULTS}

    def save_to_history(self, command: str, target: str, verdict: str, detail: Optional[str] = None) -> None:
        """Append a verdict to history, keeping the last _HISTORY_MAX entries.

        Args:
            command: CLI command that produced the verdict.
            target: File or files the command ran on.
            verdict: Short outcome such as ``convex`` or ``inconclusive``.
            detail: Optional one-line explanation.
        """
        entry: Dict[str, Any] = {
            "timestamp": datetime.utcnow().isoformat() + "Z",
            "command": command,
            "target": target,
            "verdict": verdict,
            "detail": detail,
        }

        lines: List[str] = []
        if self.history_file.exists():
            with open(self.history_file, encoding="utf-8") as f:
                lines = [ln for ln in f.read().splitlines() if ln.strip()]

        lines.append(json.dumps(entry))

        if len(lines) > self._HISTORY_MAX:
            lines = lines[-self._HISTORY_MAX :]

        with open(self.history_file, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")

    def get_history(self, limit: int = 20) -> List[Dict[str, Any]]:
        """Return the most recent history entries, newest first."""
        if not self.history_file.exists():
            return []

        with open(self.history_file, encoding="utf-8") as f:
            lines = [ln for ln in f.read().splitlines() if ln.strip()]

        entries: List[Dict[str, Any]] = []
        for line in lines:
            try:
                entries.append(json.loads(line))
            except json.JSONDecodeError:
                continue

        return list(reversed(entries[-limit:]))

    def clear_history(self) -> None:
        """Delete all verdict history."""
        if self.history_file.exists():
            self.history_file.unlink()
