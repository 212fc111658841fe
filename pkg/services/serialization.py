"""
JSON encoding for every command's output, and the kinematics input schema.

Rationals always travel as "p/q" strings; complex numbers as {"re", "im"}.
"""

import json
import logging
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from services.algebra_service import RationalMatrix, format_rational, to_rational
from services.errors import DomainError
from services.mandelstam_service import KinematicPoint, MandelstamTensor
from services.tropical_service import TropicalVector

logger = logging.getLogger(__name__)

TENSOR_KEY = re.compile(r'^s\[(\d+(?:,\d+)*)\]$')


def encode_complex(value):
    value = complex(value)
    return {'re': value.real, 'im': value.imag}


def decode_complex(data):
    try:
        return complex(float(data['re']), float(data['im']))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f'Malformed complex value {data!r}') from exc


def encode_value(value):
    """Fractions as strings, complex as a pair; ints and floats as JSON numbers."""
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, MandelstamTensor):
        return encode_tensor(value)
    if isinstance(value, RationalMatrix):
        return encode_matrix(value)
    if isinstance(value, dict):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    to_json = getattr(value, 'to_json', None)
    if callable(to_json):
        return encode_value(to_json())
    return str(value)


def encode_matrix(matrix):
    return [[format_rational(v) for v in matrix.row(i)] for i in range(matrix.rows)]


def decode_matrix(rows):
    if not isinstance(rows, list) or not rows or not all(isinstance(row, list) for row in rows):
        raise DomainError('Matrix must be a non-empty list of rows')
    return RationalMatrix.from_rows([[to_rational(str(v)) for v in row] for row in rows])


def encode_tensor(tensor):
    return {
        f's[{",".join(str(i) for i in I)}]': encode_value(v)
        for I, v in tensor.items()
    }


def _keyed_values(data, what, complex_ok=True):
    """{"s[i,j,...]": value} -> (k, n, {indices: value}); k and n are read off the keys."""
    if not isinstance(data, dict) or not data:
        raise DomainError(f'{what} must be a non-empty object')
    values = {}
    for key, raw in data.items():
        match = TENSOR_KEY.match(key.replace(' ', ''))
        if not match:
            raise DomainError(f'Malformed {what} key {key!r}')
        indices = tuple(int(i) for i in match.group(1).split(','))
        if list(indices) != sorted(set(indices)):
            raise DomainError(f'{what} key {key!r} must list increasing indices')
        if isinstance(raw, dict) and complex_ok:
            values[indices] = decode_complex(raw)
        else:
            values[indices] = to_rational(str(raw))
    sizes = {len(I) for I in values}
    if len(sizes) != 1:
        raise DomainError(f'{what} keys have mixed sizes')
    return sizes.pop(), max(max(I) for I in values), values


def decode_tensor(data):
    """Inverse of encode_tensor."""
    k, n, values = _keyed_values(data, 'Mandelstam tensor')
    return MandelstamTensor(k, n, values)


def _read_json(source, what):
    if not isinstance(source, (str, Path)):
        return source
    try:
        return json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f'Cannot read {what} file {source}: {exc}') from exc


def load_kinematics(source):
    """
    Parse a kinematics file: {"lambda": ..., "lambda_tilde": ...} gives a
    KinematicPoint; {"mandelstam": {...}} or a bare tensor map gives a
    MandelstamTensor.
    """
    data = _read_json(source, 'kinematics')
    if not isinstance(data, dict):
        raise DomainError('Kinematics must be a JSON object')
    if 'lambda' in data or 'lambda_tilde' in data:
        try:
            return KinematicPoint(decode_matrix(data['lambda']), decode_matrix(data['lambda_tilde']))
        except KeyError as exc:
            raise DomainError(f'Kinematics file is missing {exc}') from exc
    return decode_tensor(data.get('mandelstam', data))


def load_tropical_vector(source):
    """A map of rational strings {"s[1,2]": "3/2", ...}, bare or under "tropical"."""
    data = _read_json(source, 'tropical vector')
    if isinstance(data, dict) and 'tropical' in data:
        data = data['tropical']
    k, n, values = _keyed_values(data, 'Tropical vector', complex_ok=False)
    return TropicalVector(k, n, values)


def dumps(payload):
    return json.dumps(encode_value(payload), indent=2, ensure_ascii=False)


def render_text(payload, indent=0):
    """Plain-text rendering for --format text."""
    pad = '  ' * indent
    lines = []
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                lines.append(f'{pad}{key}:')
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f'{pad}{key}: {value}')
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append(f'{pad}-')
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f'{pad}- {value}')
    else:
        lines.append(f'{pad}{payload}')
    return '\n'.join(line for line in lines if line)
