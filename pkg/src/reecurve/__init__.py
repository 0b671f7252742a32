"""Exact Hasse-derivative calculus on Ree curves in characteristic three."""

from reecurve.orders import FrobeniusOrders, OrderSequence, order_sequence
from reecurve.params import ReeParams, SymbolicIndex, ree_params
from reecurve.weierstrass import (
    VanishingProfile,
    divisor_degree_audit,
    vanishing_orders,
)

__all__ = [
    "FrobeniusOrders",
    "OrderSequence",
    "ReeParams",
    "SymbolicIndex",
    "VanishingProfile",
    "divisor_degree_audit",
    "order_sequence",
    "ree_params",
    "vanishing_orders",
]

__version__ = "0.1.0"
