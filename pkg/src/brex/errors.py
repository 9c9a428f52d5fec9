"""Input-error hierarchy; the CLI maps these to exit code 2."""


class InputError(ValueError):
    """Bad user-supplied input (file contents, seed spec, config)."""


class CorpusFormatError(InputError):
    pass


class EmbeddingFormatError(InputError):
    pass


class SeedFormatError(InputError):
    pass


class GoldFormatError(InputError):
    pass
