"""Exception hierarchy.

Each error carries an ``exit_code`` used by the command-line front end.
"""


class PairscoreError(Exception):
    exit_code = 1
    kind = "error"


# -- pairwise tables ---------------------------------------------------------

class TableError(PairscoreError, ValueError):
    exit_code = 5
    kind = "table"


class DuplicateKey(TableError):
    def __init__(self, x, y, score, group):
        super().__init__(f"duplicate row for key ({x}, {y}, {score}, {group})")
        self.key = (x, y, score, group)


class SelfPair(TableError):
    def __init__(self, name):
        super().__init__(f"variable paired with itself: {name!r}")
        self.name = name


class RangeViolation(TableError):
    def __init__(self, score, value, lo, hi):
        super().__init__(f"{score} value {value!r} outside registered range [{lo}, {hi}]")


class ReservedGroup(TableError):
    pass


class AsymmetricInput(TableError):
    pass


class DuplicateLabels(TableError):
    pass


class UnknownVariable(TableError, KeyError):
    def __init__(self, name):
        TableError.__init__(self, f"variable not present in table: {name!r}")
        self.name = name

    def __str__(self):
        return self.args[0]


class EmptyTable(TableError):
    pass


class MalformedScoreFile(TableError):
    pass


# -- data ingestion ----------------------------------------------------------

class SchemaError(PairscoreError, ValueError):
    exit_code = 3
    kind = "schema"


class UnknownLevel(SchemaError):
    def __init__(self, value, column):
        super().__init__(f"value {value!r} is not a declared level of column {column!r}")
        self.value = value
        self.column = column


class ParseError(SchemaError):
    def __init__(self, row, column, token):
        super().__init__(f"row {row}, column {column!r}: cannot parse {token!r} as a finite number")
        self.row = row
        self.column = column


class SchemaColumnMissing(SchemaError):
    def __init__(self, column):
        super().__init__(f"schema column {column!r} not found in data")
        self.column = column


class NotAFactor(SchemaError):
    def __init__(self, column):
        super().__init__(f"grouping column {column!r} is not a factor")
        self.column = column


# -- measures ----------------------------------------------------------------

class UnknownMeasure(PairscoreError, KeyError):
    exit_code = 4
    kind = "measure"

    def __init__(self, name):
        super().__init__(f"unknown measure: {name!r}")
        self.name = name

    def __str__(self):
        return self.args[0]


class MeasureError(PairscoreError, ValueError):
    kind = "measure"


class LengthMismatch(MeasureError):
    pass


class TooFewObservations(MeasureError):
    pass


class EmptyInput(MeasureError):
    pass


class DegenerateCloud(MeasureError):
    pass
