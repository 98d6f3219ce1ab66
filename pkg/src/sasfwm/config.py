"""Flat ``key = value`` material configuration.

Example::

    # diamond
    omega_tilde = 1332          # cm^-1
    gamma = 3 ps                # or "1.77 cm-1"
    lifetime_convention = angular
    a_r = 171,0
    a_e = 0.37,-0.07
    dispersion = sellmeier
    sellmeier = 0.3306,0.030625 # B, C (um^2); repeat per term
    sellmeier = 4.3356,0.011236
    window_um = 0.225,25
    box = 1e-3,1e-3,1e-3        # m

Unknown keys are rejected.  Missing keys fall back to the diamond defaults.
"""
from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

from .modes import DispersionModel, diamond_dispersion
from .phonon import PhononMode
from .susceptibility import (DIAMOND_A_E, DIAMOND_A_R, DIAMOND_LIFETIME_PS,
                             DIAMOND_OMEGA_TILDE, SusceptibilityParams)
from .units import LIFETIME_CONVENTIONS, lifetime_to_decay_wavenumber

KNOWN_KEYS = ("omega_tilde", "gamma", "lifetime_convention", "a_r", "a_e", "dispersion",
              "n0", "sellmeier", "window_um", "box")
DISPERSION_KEYS = ("dispersion", "n0", "sellmeier", "window_um")

_NUM = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_GAMMA = re.compile(rf"^\s*({_NUM})\s*(cm-1|cm\^-1|ps)?\s*$")


class ConfigError(ValueError):
    pass


def parse_gamma(text):
    """``"3 ps"`` -> (3.0, "ps"); ``"1.77 cm-1"`` or ``"1.77"`` -> (1.77, "cm-1")."""
    m = _GAMMA.match(str(text))
    if not m:
        raise ConfigError(f"cannot parse gamma {text!r}; expected '<value> cm-1' or '<value> ps'")
    unit = m.group(2) or "cm-1"
    return float(m.group(1)), ("ps" if unit == "ps" else "cm-1")


def parse_complex(text):
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"cannot parse complex amplitude {text!r}; expected 're,im'")


def parse_floats(text, count, name):
    try:
        vals = tuple(float(p) for p in str(text).split(","))
    except ValueError:
        raise ConfigError(f"{name}: expected {count} comma-separated numbers, got {text!r}") from None
    if len(vals) != count:
        raise ConfigError(f"{name}: expected {count} comma-separated numbers, got {text!r}")
    return vals


@dataclass(frozen=True)
class MaterialConfig:
    omega_tilde: float = DIAMOND_OMEGA_TILDE
    gamma: tuple = (DIAMOND_LIFETIME_PS, "ps")
    lifetime_convention: str = "angular"
    a_r: complex = DIAMOND_A_R
    a_e: complex = DIAMOND_A_E
    dispersion: DispersionModel = dataclasses.field(default_factory=diamond_dispersion)
    box: tuple | None = None

    @property
    def gamma_cm1(self):
        value, unit = self.gamma
        if unit == "ps":
            return lifetime_to_decay_wavenumber(value, self.lifetime_convention).value
        return float(value)

    def mode(self):
        return PhononMode(self.omega_tilde, self.gamma_cm1)

    def params(self):
        return SusceptibilityParams(self.a_r, self.a_e, self.mode())

    def replace(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)


def parse_config(text, allowed=KNOWN_KEYS, base=None):
    """Parse config text onto ``base`` (default: diamond values)."""
    values = {}
    sellmeier = []
    dispersion_kind = None
    n0 = None
    window = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in allowed:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key == "omega_tilde":
                values[key] = float(value)
            elif key == "gamma":
                values[key] = parse_gamma(value)
            elif key == "lifetime_convention":
                if value not in LIFETIME_CONVENTIONS:
                    raise ConfigError(f"lifetime_convention must be one of {LIFETIME_CONVENTIONS}")
                values[key] = value
            elif key in ("a_r", "a_e"):
                values[key] = parse_complex(value)
            elif key == "dispersion":
                if value not in ("constant", "sellmeier"):
                    raise ConfigError("dispersion must be 'constant' or 'sellmeier'")
                dispersion_kind = value
            elif key == "n0":
                n0 = float(value)
            elif key == "sellmeier":
                sellmeier.append(parse_floats(value, 2, "sellmeier"))
            elif key == "window_um":
                window = parse_floats(value, 2, "window_um")
            elif key == "box":
                values[key] = parse_floats(value, 3, "box")
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from None

    cfg = base or MaterialConfig()
    if dispersion_kind or sellmeier or n0 is not None or window:
        kind = dispersion_kind or ("sellmeier" if sellmeier else "constant")
        win = window or (0.0, float("inf"))
        if kind == "constant":
            values["dispersion"] = DispersionModel("constant", n0=1.0 if n0 is None else n0,
                                                   window_um=win)
        else:
            values["dispersion"] = DispersionModel("sellmeier", sellmeier=tuple(sellmeier),
                                                   window_um=win)
    cfg = dataclasses.replace(cfg, **values)
    cfg.params()  # validate
    return cfg


def load_config(path, base=None):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base=base)


def load_dispersion(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), allowed=DISPERSION_KEYS).dispersion
