"""Arithmetic over n for cutoff-time expressions such as "4*n", "floor(0.03*n)" or "floor(n*ln(n)/2)"."""
import ast
import math
from fractions import Fraction
from typing import Union

from paramrls_lab.errors import ScenarioError

Number = Union[int, Fraction, float]

_FUNCTIONS = {
    "floor": math.floor,
    "ceil": math.ceil,
    "ln": lambda v: math.log(v),
    "log": lambda v: math.log(v),
    "log2": lambda v: math.log2(v),
    "sqrt": lambda v: math.sqrt(v),
}


def _eval(node: ast.AST, n: int) -> Number:
    if isinstance(node, ast.Expression):
        return _eval(node.body, n)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        # decimal literals stay exact so that floor(0.03*n) is not off by one
        return Fraction(repr(node.value)) if isinstance(node.value, float) else node.value
    if isinstance(node, ast.Name) and node.id == "n":
        return n
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        value = _eval(node.operand, n)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp):
        left, right = _eval(node.left, n), _eval(node.right, n)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right == 0:
                raise ScenarioError("Division by zero in expression")
            if isinstance(left, float) or isinstance(right, float):
                return left / right
            return Fraction(left) / Fraction(right)
        if isinstance(node.op, ast.Pow):
            return left**right
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS and len(node.args) == 1 and not node.keywords:
        arg = _eval(node.args[0], n)
        if node.func.id in ("floor", "ceil"):
            return _FUNCTIONS[node.func.id](arg)
        return _FUNCTIONS[node.func.id](float(arg))
    raise ScenarioError(f"Unsupported expression element: {ast.dump(node)[:60]}")


def evaluate_expression(expr: Union[int, str], n: int, field: str = "tuner.kappa") -> int:
    """Evaluate an integer literal or expression in n to a non-negative integer."""
    if isinstance(expr, bool):
        raise ScenarioError("Expected an integer or an expression in n", field)
    if isinstance(expr, int):
        value: Number = expr
    else:
        try:
            tree = ast.parse(str(expr).strip(), mode="eval")
        except SyntaxError as exc:
            raise ScenarioError(f"Cannot parse expression {expr!r}: {exc.msg}", field)
        try:
            value = _eval(tree, n)
        except ScenarioError as exc:
            raise ScenarioError(f"{exc} in {expr!r}", field)
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise ScenarioError(f"Cannot evaluate {expr!r} at n={n}: {exc}", field)
    if isinstance(value, float):
        if not value.is_integer():
            raise ScenarioError(f"{expr!r} evaluates to {value} at n={n}; wrap it in floor() or ceil()", field)
        value = int(value)
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ScenarioError(f"{expr!r} evaluates to {value} at n={n}; wrap it in floor() or ceil()", field)
        value = int(value)
    if value < 0:
        raise ScenarioError(f"{expr!r} evaluates to the negative value {value} at n={n}", field)
    return int(value)
