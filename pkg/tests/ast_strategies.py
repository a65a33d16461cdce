"""Hypothesis strategies for expression ASTs, shared by the parser suites."""
from hypothesis import strategies as st

from lcurve.expr import FUNCTIONS, BinOp, Call, Neg, Num, S

literals = st.floats(0, 1e6, allow_nan=False, allow_infinity=False).map(Num)
leaves = st.one_of(literals, st.just(S), st.sampled_from([0.5, 1.0, 2.0, 3.0]).map(Num))


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(st.sampled_from(FUNCTIONS), children).map(lambda t: Call(*t)),
    )


def depth(node):
    if isinstance(node, (Num, type(S))):
        return 1
    if isinstance(node, (Neg, Call)):
        return 1 + depth(node.arg)
    return 1 + max(depth(node.left), depth(node.right))


asts = st.recursive(leaves, _extend, max_leaves=24).filter(lambda a: depth(a) <= 6)


# Smooth expressions for the derivative check: bounded arguments keep the
# functions well away from overflow, and log/sqrt only see positive inputs.
smooth_leaves = st.one_of(st.just(S), st.floats(0.1, 3.0).map(lambda v: Num(round(v, 3))))


def _smooth(children):
    pos = children.map(lambda c: BinOp("+", Num(1.5), BinOp("^", c, Num(2.0))))
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(children, pos).map(lambda t: BinOp("/", *t)),
        st.tuples(st.sampled_from(["sin", "cos", "tan"]), children).map(
            lambda t: Call(t[0], Call("sin", t[1]))),
        st.tuples(st.sampled_from(["exp", "sinh", "cosh"]), children).map(
            lambda t: Call(t[0], Call("cos", t[1]))),
        st.tuples(st.sampled_from(["log", "sqrt"]), pos).map(lambda t: Call(*t)),
        st.tuples(pos, st.sampled_from([0.5, 1.5, 2.0, 3.0])).map(lambda t: BinOp("^", t[0], Num(t[1]))),
    )


smooth_asts = st.recursive(smooth_leaves, _smooth, max_leaves=10).filter(lambda a: depth(a) <= 6)


def central_difference(f, s, h):
    return (f(s + h) - f(s - h)) / (2 * h)
