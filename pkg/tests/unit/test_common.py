"""
Unit tests for common module.
"""

import logging

import numpy as np
import pytest
import structlog

from src.common.errors import (
    ConfigurationError,
    InternalComputationError,
    InvalidArgumentError,
    MimoSimError,
    OutputError,
)
from src.common.logging_setup import configure_logging
from src.common.numerics import assert_hermitian, hermitian_residual, real_part


@pytest.fixture
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)
    structlog.reset_defaults()


class TestErrors:
    """Test the exception hierarchy."""

    def test_all_derive_from_base(self):
        """Test every error is a MimoSimError."""
        for cls in (InvalidArgumentError, ConfigurationError, InternalComputationError, OutputError):
            assert issubclass(cls, MimoSimError)

    def test_builtin_bases(self):
        """Test errors can be caught by their builtin category."""
        assert issubclass(InvalidArgumentError, ValueError)
        assert issubclass(InternalComputationError, RuntimeError)
        assert issubclass(OutputError, OSError)

    def test_output_error_carries_path(self, tmp_path):
        """Test OutputError keeps the offending path."""
        error = OutputError("cannot write", path=tmp_path / "x.csv")
        assert error.path == tmp_path / "x.csv"
        assert "x.csv" in str(error)

    def test_output_error_without_path(self):
        """Test OutputError without a path."""
        assert OutputError("boom").path is None


class TestRealPart:
    """Test real_part guard."""

    def test_scalar_returns_float(self):
        """Test a scalar with negligible residue becomes a float."""
        value = real_part(2.0 + 1e-14j, scale=2.0, label="x")
        assert isinstance(value, float)
        assert value == 2.0

    def test_array(self):
        """Test arrays keep their shape."""
        values = real_part(np.array([1.0 + 0j, 3.0 + 0j]), scale=np.array([1.0, 3.0]), label="x")
        assert np.allclose(values, [1.0, 3.0])

    def test_large_residue_raises(self):
        """Test an imaginary part above tolerance is an internal error."""
        with pytest.raises(InternalComputationError, match="x"):
            real_part(1.0 + 1e-3j, scale=1.0, label="x")

    def test_zero_scale_exact_zero(self):
        """Test zero scale accepts exactly real values."""
        assert real_part(0.0 + 0.0j, scale=0.0, label="x") == 0.0


class TestHermitian:
    """Test Hermitian checks."""

    def test_residual_zero_matrix(self):
        """Test the zero matrix has zero residual."""
        assert hermitian_residual(np.zeros((3, 3))) == 0.0

    def test_hermitian_passes(self):
        """Test a Hermitian matrix passes."""
        a = np.array([[2.0, 1j], [-1j, 1.0]])
        assert_hermitian(a, "a")

    def test_stack_passes(self):
        """Test stacks of Hermitian matrices pass."""
        a = np.array([[2.0, 1j], [-1j, 1.0]])
        assert_hermitian(np.stack([a, 2 * a]), "stack")

    def test_non_hermitian_raises(self):
        """Test a non-Hermitian matrix raises."""
        with pytest.raises(InvalidArgumentError, match="not Hermitian"):
            assert_hermitian(np.array([[1.0, 1.0], [0.0, 1.0]]), "a")

    def test_non_square_raises(self):
        """Test a non-square input raises."""
        with pytest.raises(InvalidArgumentError, match="square"):
            assert_hermitian(np.zeros((2, 3)), "a")


class TestConfigureLogging:
    """Test logging configuration."""

    def test_file_handler(self, tmp_path, restore_logging):
        """Test records reach the optional log file."""
        log_file = tmp_path / "logs" / "run.log"
        configure_logging("DEBUG", log_file)
        structlog.get_logger("test").info("hello", drop=3)
        for handler in logging.getLogger().handlers:
            handler.flush()
        text = log_file.read_text(encoding="utf-8")
        assert "event='hello'" in text
        assert "drop=3" in text

    def test_level(self, restore_logging):
        """Test the root level follows the argument."""
        configure_logging("WARNING")
        assert logging.getLogger().level == logging.WARNING

    def test_unknown_level_defaults_to_info(self, restore_logging):
        """Test an unknown level name falls back to INFO."""
        configure_logging("chatty")
        assert logging.getLogger().level == logging.INFO
