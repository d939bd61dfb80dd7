"""ext-forge: Ext charts over finite subalgebras of the mod-2 Steenrod
algebra, 2-adic binomial arithmetic, and nonimmersion certificates."""

__version__ = "0.1.0"
