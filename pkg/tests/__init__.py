"""spectral-construct test suite."""
