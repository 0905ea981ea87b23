"""Cut-based generalization of preferential-attachment network growth."""
