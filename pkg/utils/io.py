import datetime
import json
import os
import platform
import re

import numpy as np
import pandas as pd
import scipy
import torch
import yaml

from geometry.curves import CurvatureProfile
from geometry.segments import PiecewiseSegment


class CsvFormatError(ValueError):
    """ Raised for malformed input files; line is 1-based """

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


### READERS ###

def _table(path, header):
    """ String cells of a CSV file indexed by their 1-based line number

    Blank lines are dropped and a first row equal to header is skipped.
    """
    try:
        frame = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=False,
                            keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise CsvFormatError(path, 1, "no data rows") from None
    except pd.errors.ParserError as error:
        line = re.search(r"line (\d+)", str(error))
        raise CsvFormatError(path, int(line.group(1)) if line else 1, str(error)) from None
    frame = frame.fillna("").apply(lambda column: column.str.strip())
    frame.index = frame.index + 1
    frame = frame[(frame != "").any(axis=1)]
    if len(frame) and frame.iloc[0, :len(header)].tolist() == header:
        frame = frame.iloc[1:]
    if len(frame) == 0:
        raise CsvFormatError(path, 1, "no data rows")
    return frame


def _columns(path, frame, names, widths):
    if frame.shape[1] not in widths:
        raise CsvFormatError(path, int(frame.index[0]),
                             f"expected columns {','.join(names)}, got {frame.shape[1]}")


def _floats(path, frame, names, optional=()):
    """ Float columns named by names; empty optional cells become NaN """
    cells = frame.iloc[:, :len(names)].copy()
    cells.columns = names
    values = cells.apply(pd.to_numeric, errors="coerce")
    for name in names:
        empty = cells[name] == ""
        if name not in optional and empty.any():
            raise CsvFormatError(path, int(empty.idxmax()), f"missing {name}")
        bad = (values[name].isna() & ~empty) | np.isinf(values[name])
        if bad.any():
            line = int(bad.idxmax())
            raise CsvFormatError(path, line, f"not a finite number: {cells[name][line]!r}")
    return values


def read_points_csv(path):
    """ Curve samples from a CSV with columns x,y,z (header optional)

    Returns:
        np.ndarray: (n, 3) coordinates
    """
    names = ["x", "y", "z"]
    frame = _table(path, names)
    _columns(path, frame, names, (3,))
    return _floats(path, frame, names).to_numpy(dtype=float)


def read_segments_csv(path):
    """ Nano-bar segments from a CSV with columns kind,length,radius (radius empty for straight bars)

    Returns:
        list: PiecewiseSegment in file order
    """
    names = ["kind", "length", "radius"]
    frame = _table(path, names)
    _columns(path, frame, names, (2, 3))
    if frame.shape[1] == 2:
        frame = frame.assign(radius="")
    values = _floats(path, frame.iloc[:, 1:], names[1:], optional=("radius",))
    segments = []
    for line, kind in frame.iloc[:, 0].items():
        radius = values.at[line, "radius"]
        try:
            segments.append(PiecewiseSegment(kind, float(values.at[line, "length"]),
                                             None if np.isnan(radius) else float(radius)))
        except ValueError as error:
            raise CsvFormatError(path, int(line), str(error)) from None
    return segments


def read_profile_csv(path):
    """ Curvature profile from a CSV with columns s,kappa (header optional)

    Returns:
        CurvatureProfile: Open profile; s must be strictly increasing and kappa non-negative
    """
    names = ["s", "kappa"]
    frame = _table(path, names)
    _columns(path, frame, names, (2,))
    values = _floats(path, frame, names)
    s, kappa = values["s"].to_numpy(), values["kappa"].to_numpy()
    lines = values.index.to_numpy()
    descending = np.nonzero(np.diff(s) <= 0)[0]
    if len(descending):
        i = descending[0] + 1
        raise CsvFormatError(path, int(lines[i]), f"s is not increasing: {s[i]!r} after {s[i - 1]!r}")
    negative = np.nonzero(kappa < 0)[0]
    if len(negative):
        raise CsvFormatError(path, int(lines[negative[0]]), f"negative curvature: {kappa[negative[0]]!r}")
    if len(s) < 2:
        raise CsvFormatError(path, int(lines[0]), "at least two samples required")
    return CurvatureProfile(s, kappa)


def read_config(path):
    """ YAML mapping of subcommand name to parameter block """
    with open(path) as file:
        config = yaml.safe_load(file) or {}
    if not isinstance(config, dict):
        raise ValueError(f"Invalid config: {path} does not hold a mapping")
    return config


### WRITERS ###

def _plain(value):
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None if np.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def write_json(path, data):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as file:
        json.dump(_plain(data), file, indent=2)
    return path


def write_csv(path, header, rows):
    """ Write float rows with round-trip precision """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    values = np.asarray(rows if isinstance(rows, np.ndarray) else list(rows), dtype=float)
    frame = pd.DataFrame(values.reshape(-1, len(header)), columns=header)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def write_potential(folder, potential):
    """ potential.csv (piecewise-linear nodes s,V) and potential.json (the profile itself) """
    linear = potential.to_linear()
    write_csv(os.path.join(folder, "potential.csv"), ["s", "V"],
              np.column_stack([linear.breakpoints, linear.values]))
    return write_json(os.path.join(folder, "potential.json"), potential.to_dict())


def write_manifest(folder, command, parameters, units):
    """ Everything needed to repeat a run: inputs, unit system and package versions """
    manifest = {
        "command": command,
        "parameters": parameters,
        "units": units,
        "created": datetime.datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
            "torch": torch.__version__,
        },
        "seeds": None,
    }
    return write_json(os.path.join(folder, "manifest.json"), manifest)
