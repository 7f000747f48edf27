from lagrangian_variety.errors import (
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    CapExceededError,
    IllegalChoiceError,
    NotSplitError,
    OracleMismatchError,
    ParseError,
    exit_code,
)


def test_parse_error_names_position():
    error = ParseError("bad simple root", "A1xQ2", 3)

    assert str(error) == "bad simple root at position 3 in 'A1xQ2'"
    assert isinstance(error, ValueError)


def test_messages():
    assert str(CapExceededError("rank", 9, 8)) == "rank 9 exceeds cap 8"
    assert str(IllegalChoiceError(2, "s1", ["e", "s2"])) == "illegal choice s1 at step 2; legal: e, s2"
    assert "not a square" in str(NotSplitError(-1))
    assert str(OracleMismatchError("eps", 0, 1)) == "eps: formula 0, oracle 1"
    assert str(OracleMismatchError("odd rank")) == "odd rank"


def test_exit_codes():
    assert exit_code(ParseError("x")) == EXIT_USAGE
    assert exit_code(OracleMismatchError("x")) == EXIT_VERIFY_FAILED
    assert exit_code(RuntimeError()) == EXIT_USAGE
