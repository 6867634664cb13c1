class IsoprimesError(Exception):
    """Error carrying a stable code, e.g. ``AUT_NOT_ROOT`` or ``REJECT_INFINITE``."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.message = message


# codes that the CLI maps to exit status 3 (field-data validation)
DATA_FILE_CODES = frozenset({
    "PARSE", "NON_MONIC", "AUT_NOT_ROOT", "BAD_GENERATOR_NORM", "BAD_SQRT",
    "NOT_SPLIT", "NON_GALOIS",
})
