"""Zero-knowledge proofs of knowledge leveraging problem structure, and the
Fiat-Shamir signature schemes built on them (SD with helper, IPKP, QCSD,
IRSL/IRSD), plus the size / soundness / attack-cost calculators behind the
registered parameter sets."""

__version__ = "1.0.0"
