import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def l7_enumeration():
    """The full symmetry-reduced L=7 sweep (several minutes), shared by
    every acceptance criterion that needs it."""
    from entpoly.spectra import critical_spectra_enumerate

    return critical_spectra_enumerate(7)
