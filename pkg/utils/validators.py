"""Input validation using Pydantic."""

from typing import Any, Dict, Type, TypeVar

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from utils.exceptions import ValidationError

ModelT = TypeVar("ModelT", bound=BaseModel)


def format_errors(exc: PydanticValidationError) -> list[str]:
    """Render pydantic errors as ``field: message`` strings."""
    errors = []
    for error in exc.errors():
        field = ".".join(str(x) for x in error["loc"]) or "value"
        errors.append(f"{field}: {error['msg']}")
    return errors


def validate_model(data: Dict[str, Any], schema: Type[ModelT]) -> ModelT:
    """
    Validate a mapping against a Pydantic schema.

    Args:
        data: Raw values (config file merged with command-line flags)
        schema: Pydantic model class

    Returns:
        Validated model instance

    Raises:
        ValidationError: If validation fails; ``details["errors"]`` names each offending field
    """
    try:
        return schema(**data)
    except PydanticValidationError as e:
        errors = format_errors(e)
        raise ValidationError(
            message=errors[0] if len(errors) == 1 else "; ".join(errors),
            error_code="VALIDATION_ERROR",
            details={"errors": errors, "fields": [err.split(":")[0] for err in errors]},
        ) from e
