"""Domain modules: Pauli algebra, stabilizer codes, damping, recovery, fidelity and circuits."""
