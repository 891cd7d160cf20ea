import pytest

from common.errors import (
    EXIT_FAILURE,
    EXIT_SCHEMA,
    EXIT_SOLVER,
    EXIT_VERIFICATION,
    CenteringError,
    ConfigSchemaError,
    DomainValidationError,
    InvalidParameterError,
    LabError,
    SolverError,
    VerificationError,
    handle_stage_errors,
)

# --- Exit code tests ---


def test_exit_codes_by_error_class():
    assert LabError("x").exit_code == EXIT_FAILURE
    assert ConfigSchemaError("x").exit_code == EXIT_SCHEMA
    assert DomainValidationError("x").exit_code == EXIT_SCHEMA
    assert SolverError("x").exit_code == EXIT_SOLVER
    assert VerificationError("x").exit_code == EXIT_VERIFICATION


def test_invalid_parameter_is_a_value_error():
    with pytest.raises(ValueError):
        raise InvalidParameterError("negative height")


def test_errors_carry_their_payload():
    err = SolverError("stalled", report={"residual": 1.0})
    assert err.report == {"residual": 1.0}
    err = CenteringError("no fixed point", best=[0.0, 0.0], residual=0.5, partial=[1])
    assert err.best == [0.0, 0.0] and err.residual == 0.5 and err.partial == [1]
    assert ConfigSchemaError("bad").field_paths == []


# --- handle_stage_errors tests ---


def test_handle_stage_errors_reraises_lab_errors():
    with pytest.raises(SolverError):
        with handle_stage_errors("Solve"):
            raise SolverError("diverged")


def test_handle_stage_errors_reraises_unexpected_errors():
    with pytest.raises(ZeroDivisionError):
        with handle_stage_errors("Solve"):
            _ = 1 / 0


def test_handle_stage_errors_passes_through_on_success():
    with handle_stage_errors("Solve"):
        value = 1
    assert value == 1
