import csv
import io
import logging

from .exceptions import GridError
from .rado_core import parse_vertex_token

logger = logging.getLogger(__name__)

NAME_TABLE_HEADER = ["n", "K", "value"]


def _parse_int(text, infile, line_num, what):
    try:
        return int(text.strip(), 0)
    except ValueError:
        raise GridError(
            "%s:%d Could not parse %s '%s' as an integer"
            % (infile.name, line_num, what, text)
        )


def read_matrix(filename):
    """Read a value matrix: a header row "atoms,<count>", then rows of atom bitmasks.

    Returns (atoms, rows) with rows a list of lists of int bitmasks.
    """
    with io.open(filename, "rt") as infile:
        reader = csv.reader(infile, skipinitialspace=True)
        try:
            header = next(reader)
        except StopIteration:
            raise GridError("%s:1 Empty matrix file" % infile.name)
        if len(header) != 2 or header[0].strip() != "atoms":
            raise GridError(
                "%s:%d Expected header 'atoms,<count>', encountered '%s'"
                % (infile.name, reader.line_num, ",".join(header))
            )
        atoms = _parse_int(header[1], infile, reader.line_num, "atom count")
        if atoms < 1:
            raise GridError(
                "%s:%d Atom count must be positive, got %d"
                % (infile.name, reader.line_num, atoms)
            )

        rows = []
        for row in reader:
            if not row:
                continue
            entries = [
                _parse_int(e, infile, reader.line_num, "entry") for e in row
            ]
            if rows and len(entries) != len(rows[0]):
                raise GridError(
                    "%s:%d Expected %d columns, encountered %d ('%s')"
                    % (infile.name, reader.line_num, len(rows[0]), len(entries), ",".join(row))
                )
            for e in entries:
                if not 0 <= e < (1 << atoms):
                    raise GridError(
                        "%s:%d Entry %d is not a subset of %d atoms"
                        % (infile.name, reader.line_num, e, atoms)
                    )
            rows.append(entries)

    if not rows:
        raise GridError("%s: Matrix has no rows" % filename)
    logger.debug(
        "Read %dx%d matrix over %d atoms from '%s'"
        % (len(rows), len(rows[0]), atoms, filename)
    )
    return atoms, rows


def read_name_table(filename):
    """Read a name-model table with header n,K,value.

    K is a ';'-separated list of vertex tokens. A row with n = '*' sets the
    value of every pair the table does not list, and is required.
    """
    table = {}
    default = None
    with io.open(filename, "rt") as infile:
        reader = csv.reader(infile, skipinitialspace=True)
        header = [field.strip() for field in next(reader, [])]
        if header != NAME_TABLE_HEADER:
            raise GridError(
                "%s:%d Expected header '%s', encountered '%s'"
                % (infile.name, reader.line_num, ",".join(NAME_TABLE_HEADER), ",".join(header))
            )
        for row in reader:
            if not row:
                continue
            if len(row) != 3:
                raise GridError(
                    "%s:%d Expected 3 columns, encountered %d ('%s')"
                    % (infile.name, reader.line_num, len(row), ",".join(row))
                )
            value = _parse_int(row[2], infile, reader.line_num, "value")
            if row[0].strip() == "*":
                default = value
                continue
            n = _parse_int(row[0], infile, reader.line_num, "level")
            try:
                K = frozenset(
                    parse_vertex_token(t.strip()) for t in row[1].split(";") if t.strip()
                )
            except ValueError as e:
                raise GridError("%s:%d %s" % (infile.name, reader.line_num, e))
            if (n, K) in table:
                raise GridError(
                    "%s:%d Duplicate entry for level %d" % (infile.name, reader.line_num, n)
                )
            table[(n, K)] = value

    if default is None:
        raise GridError("%s: Name table has no default row ('*')" % filename)
    return table, default
