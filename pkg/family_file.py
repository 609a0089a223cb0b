"""
Family file reading and writing

{
  "n": 2,
  "region": "hurwitz",
  "entries": [[{"kind": "polytopic", "generators": [[1, 1], [2, 1]]}, ...], ...],
  "config": {"boundary_count": 256}
}

Coefficient arrays are ascending (constant first). Interval cells use
{"kind": "interval", "lower": [...], "upper": [...]}. The optional "config"
block takes CHECKER_CONFIG keys.
"""

import json
import logging
import math
import re

import config
import family as fam
import region as reg
from errors import FamilyFileError, ParameterError

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ('n', 'region', 'entries', 'config', 'name')


def _line_of(text, pattern, occurrence=0):
    """1-based line of the given occurrence of a regex in text, or None"""
    for k, match in enumerate(re.finditer(pattern, text)):
        if k == occurrence:
            return text.count('\n', 0, match.start()) + 1
    return None


def _key_line(text, key):
    return _line_of(text, r'"%s"\s*:' % re.escape(key))


def _coefficients(value, what, line):
    if not isinstance(value, list) or not value:
        raise FamilyFileError(f"{what} must be a nonempty array of numbers", line=line)
    out = []
    for c in value:
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise FamilyFileError(f"{what} holds a non-numeric coefficient {c!r}", line=line)
        if not math.isfinite(c):
            raise FamilyFileError(f"{what} holds a non-finite coefficient {c!r}", line=line)
        out.append(float(c))
    return out


def _parse_cell(cell, i, j, line):
    where = f"entries[{i}][{j}]"
    if not isinstance(cell, dict):
        raise FamilyFileError(f"{where} must be an object", line=line)
    kind = cell.get('kind')

    try:
        if kind == fam.POLYTOPIC:
            gens = cell.get('generators')
            if not isinstance(gens, list) or not gens:
                raise FamilyFileError(f"{where}.generators must be a nonempty array", line=line)
            return fam.PolytopicEntry(tuple(
                tuple(_coefficients(g, f"{where}.generators[{k}]", line)) for k, g in enumerate(gens)
            ))
        if kind == fam.INTERVAL:
            lower = _coefficients(cell.get('lower'), f"{where}.lower", line)
            upper = _coefficients(cell.get('upper'), f"{where}.upper", line)
            return fam.IntervalEntry(tuple(lower), tuple(upper))
    except ParameterError as e:
        raise FamilyFileError(f"{where}: {e}", line=line) from e

    raise FamilyFileError(f"{where}.kind must be 'polytopic' or 'interval', got {kind!r}", line=line)


def parse_family(text):
    """
    Parse family file text

    Returns:
        tuple: (MatrixFamily, Region or None, config mapping)
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FamilyFileError(f"malformed JSON: {e.msg}", line=e.lineno) from e

    if not isinstance(doc, dict):
        raise FamilyFileError("top level must be an object", line=1)
    unknown = sorted(set(doc) - set(TOP_LEVEL_KEYS))
    if unknown:
        raise FamilyFileError(f"unknown keys: {', '.join(unknown)}", line=_key_line(text, unknown[0]))

    n = doc.get('n')
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FamilyFileError(f"'n' must be a positive integer, got {n!r}", line=_key_line(text, 'n') or 1)

    entries_line = _key_line(text, 'entries') or 1
    rows = doc.get('entries')
    if not isinstance(rows, list):
        raise FamilyFileError("'entries' must be an n x n array", line=entries_line)
    if len(rows) != n:
        raise FamilyFileError(f"'entries' has {len(rows)} rows, expected n={n}", line=entries_line)

    grid = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            size = len(row) if isinstance(row, list) else 'no'
            raise FamilyFileError(f"entries[{i}] has {size} cells, expected n={n}", line=entries_line)
        cells = []
        for j, cell in enumerate(row):
            line = _line_of(text, r'"kind"\s*:', i * n + j) or entries_line
            cells.append(_parse_cell(cell, i, j, line))
        grid.append(tuple(cells))
    family = fam.MatrixFamily(tuple(grid))

    region = None
    if 'region' in doc:
        if not isinstance(doc['region'], str):
            raise FamilyFileError("'region' must be a string", line=_key_line(text, 'region'))
        try:
            region = reg.parse_region(doc['region'])
        except ParameterError as e:
            raise FamilyFileError(str(e), line=_key_line(text, 'region')) from e

    settings = doc.get('config', {})
    if not isinstance(settings, dict):
        raise FamilyFileError("'config' must be an object", line=_key_line(text, 'config'))

    return family, region, settings


def load_family(path):
    """Read and parse a family file"""
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        raise FamilyFileError(f"cannot read {path}: {e.strerror}") from e
    family, region, settings = parse_family(text)
    logger.debug(f"Loaded {family.n}x{family.n} {family.kind} family from {path}")
    return family, region, settings


def _coeff_list(poly):
    return list(poly.coeffs) if poly.coeffs else [0.0]


def family_to_document(f, region=None, settings=None):
    doc = {'n': f.n, 'entries': []}
    for row in f.entries:
        cells = []
        for entry in row:
            if entry.kind == fam.POLYTOPIC:
                cells.append({'kind': fam.POLYTOPIC, 'generators': [_coeff_list(g) for g in entry.generators]})
            else:
                cells.append({'kind': fam.INTERVAL, 'lower': list(entry.lower), 'upper': list(entry.upper)})
        doc['entries'].append(cells)
    if region is not None:
        doc['region'] = reg.region_name(region)
    if settings:
        doc['config'] = dict(settings)
    return doc


def dump_family(f, region=None, settings=None):
    """Canonical family file text (sorted keys, fixed indent)"""
    doc = family_to_document(f, region, settings)
    return json.dumps(doc, indent=config.CLI_CONFIG['json_indent'], sort_keys=True) + '\n'
