"""promptprog: a self-hostable platform for dialogue-based prompt programming.

Students solve programming problems by prompting an LLM in multi-turn
conversations and selectively executing the generated code against hidden
test suites. Every interaction lands in an append-only event log, which the
analytics module turns into progression graphs and conversation metrics.
"""

__version__ = "0.1.0"
