#
# Copyright 2025 SUSE LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""utils.py is part of soliton-discord and provides output helpers"""
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile

import numpy as np


log = logging.getLogger('SolitonDiscord')


def format_value(value) -> str:
    """format a CSV cell, floats with 17 significant digits"""
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return 'nan'
        return '{:.17g}'.format(float(value))
    return str(value)


def json_value(value):
    """convert numpy scalars to plain JSON values"""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) or math.isinf(value) else value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value


def rows_to_csv(fields, rows) -> str:
    """render dict rows as CSV text with a header line"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=',', lineterminator='\n')
    writer.writerow(fields)
    for row in rows:
        writer.writerow([format_value(row.get(name)) for name in fields])

    text = buffer.getvalue()
    log.debug("Rendered %d CSV rows", text.count('\n') - 1)

    return text


def rows_to_json(fields, rows, **extra) -> str:
    """render dict rows as JSON using the CSV field names"""
    document = dict(
        {key: json_value(val) for key, val in extra.items()},
        fields=list(fields),
        rows=[
            {name: json_value(row.get(name)) for name in fields}
            for row in rows
        ]
    )
    return json.dumps(document, indent=2, sort_keys=True) + '\n'


def write_atomic(path: str, text: str) -> None:
    """
    Write text to path through a temporary file in the same directory
    that replaces path once fully written.
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix='.soliton-')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as fh:
            fh.write(text)
        os.replace(temp_path, path)
    except OSError as exc:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise type(exc)(f"Unable to write output to {path}: {exc}") from exc

    log.debug("Wrote %d characters to %s", len(text), path)


def emit(text: str, out: str = None) -> None:
    """write text to out, or to stdout when no path is given"""
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def time_grid(t_max: float, dt: float) -> tuple:
    """sample times 0, dt, ..., covering [0, t_max]"""
    if t_max <= 0 or dt <= 0:
        raise ValueError(
            f"Invalid values passed to time_grid() t_max:{t_max} dt:{dt}"
        )
    count = int(math.ceil(t_max / dt - 1e-9))
    grid = tuple(min(index * dt, t_max) for index in range(count + 1))

    log.debug("Time grid of %d points up to %g", len(grid), grid[-1])

    return grid
