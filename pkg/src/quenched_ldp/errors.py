# src/quenched_ldp/errors.py
from __future__ import annotations


class LdpError(Exception):
    """Error base del paquete."""


class InputError(LdpError, ValueError):
    """Entrada inválida: leyes mal formadas, restricciones infactibles, config rota."""


class BudgetError(LdpError):
    """Se excede un presupuesto de tabla o de espacio de estados."""


class LumpingError(InputError):
    """La truncación de una ley de Markov rompe la propiedad de Markov."""
