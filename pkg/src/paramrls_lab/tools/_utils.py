import logging
from typing import Awaitable, Callable

import mcp.types as types
from pydantic import ValidationError

from paramrls_lab.errors import LabError

tool_logger = logging.getLogger("paramrls-lab.tools")


async def execute_tool_safely(
    tool_name: str,
    tool_impl_func: Callable[..., Awaitable[str]],
    **kwargs
) -> list[types.TextContent]:
    """Wraps tool execution with logging and error handling.

    Lab errors and pydantic validation failures come back as an "Input validation error"
    text result. A TypeError from the call is re-raised as ValueError, anything else as
    RuntimeError.
    """
    tool_logger.info(f"Executing tool '{tool_name}' with args: {kwargs}")
    try:
        result_text = await tool_impl_func(**kwargs)
        tool_logger.info(f"Tool '{tool_name}' executed successfully.")
        return [types.TextContent(type="text", text=str(result_text))]
    except (LabError, ValidationError) as e:
        tool_logger.warning(f"Tool '{tool_name}' rejected its input: {e}")
        return [types.TextContent(type="text", text=f"Input validation error: {e}")]
    except TypeError as e:
        tool_logger.error(f"Invalid arguments passed to tool '{tool_name}' implementation: {e}", exc_info=True)
        raise ValueError(f"Invalid arguments provided for tool '{tool_name}': {e}")
    except Exception as e:
        tool_logger.error(f"Error executing tool '{tool_name}': {e}", exc_info=True)
        raise RuntimeError(f"An error occurred while executing tool '{tool_name}'.")
