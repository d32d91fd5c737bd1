"""Error hierarchy shared across the platform.

Every error carries a stable machine-readable ``code`` that the HTTP layer
and the CLI surface verbatim, so clients can dispatch on it.
"""


class PromptProgError(Exception):
    code = "INTERNAL"

    def __init__(self, detail: str = ""):
        self.detail = detail or self.code
        super().__init__(self.detail)
