"""Exception hierarchy shared by all pipeline stages."""


class RmoveError(Exception):
    """Base class for every error raised by this package."""


# --- identifiers / config ---------------------------------------------------

class EmptyComponent(RmoveError):
    pass


class ComponentContainsSeparator(RmoveError):
    pass


class ConfigError(RmoveError):
    """Bad key, bad value, or malformed line in a config file."""


# --- frontend ----------------------------------------------------------------

class SourceSyntaxError(RmoveError):
    def __init__(self, path, line, col, expected, found=None):
        self.path = path
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        where = f"{path}:{line}:{col}"
        msg = f"{where}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)


class DuplicateClass(RmoveError):
    pass


class DuplicateMethodSignature(RmoveError):
    pass


class MalformedRecord(RmoveError):
    def __init__(self, line_no, reason):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class DanglingReference(RmoveError):
    def __init__(self, kind, ref):
        self.kind = kind
        self.ref = ref
        super().__init__(f"{kind} record references unknown id {ref!r}")


class MixedModes(RmoveError):
    """A method carries both a parsed AST and pre-extracted path contexts."""


# --- path mining -------------------------------------------------------------

class NotAMethodAst(RmoveError):
    pass


# --- embeddings --------------------------------------------------------------

class EmptyWalkCorpus(RmoveError):
    pass


class DimNotDivisibleByScales(RmoveError):
    pass


class DimNotDivisibleByKstep(RmoveError):
    pass


class EmptyEdgeSet(RmoveError):
    pass


class EmptyCorpus(RmoveError):
    pass


class EmptyInput(RmoveError):
    pass


class MissingEmbedding(RmoveError):
    def __init__(self, family, method_id):
        self.family = family
        self.method_id = method_id
        super().__init__(f"no {family} embedding for {method_id!r}")


# --- training / inference ----------------------------------------------------

class MissingHybrid(RmoveError):
    def __init__(self, entity_id):
        self.entity_id = entity_id
        super().__init__(f"no hybrid embedding for {entity_id!r}")


class SingleClassInput(RmoveError):
    pass


class DimensionMismatch(RmoveError):
    pass


class TooFewSamplesForFolds(RmoveError):
    pass


class SpecInfeasible(RmoveError):
    pass


class ArtifactError(RmoveError):
    """Corrupt, mismatched, or missing persisted artifact."""
