from django.core.exceptions import ValidationError


class CorpusFormatError(ValidationError):
    """
    Raised when a corpus file does not follow the expected TSV layout
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, code='corpus_format')


class DuplicateKeyError(ValidationError):
    """
    Raised when two records of one corpus share a (talk, source) key
    """

    def __init__(self, key):
        self.key = key
        talk, source = key
        super().__init__(f"duplicate (talk, source) key: ({talk!r}, {source!r})", code='duplicate_key')
