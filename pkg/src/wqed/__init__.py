"""Single-photon scattering off emitters in a 1D waveguide, and arrays thereof."""
__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateDenominatorError,
    GridPointError,
    NonphysicalAmplitudeError,
    NumericalError,
    PerfectReflectorError,
    QuadratureError,
    WqedError,
)
from .schemes import (
    DrivenLambda,
    DrivenV,
    LambdaTwoTransition,
    TwoLevel,
    VTwoTransition,
    scheme_from_dict,
    scheme_to_dict,
)
from .scattering import ScatteringAmplitudes, amplitudes, even_mode_t, spectrum, split_even_mode
from .raman import (
    RamanRow,
    RamanSMatrix,
    dress,
    driven_v_scatter,
    driven_v_smatrix,
    equivalent_lambda,
    lambda_scatter,
    lambda_smatrix,
)
from .transistor import GaussianPulse, SwitchResult, switch_map, switching_probability
from .lattice import (
    BandPoint,
    band_point,
    band_scan,
    bloch_coupling,
    bloch_vector,
    cell_transfer,
    classify,
    count_gaps,
    density_of_states,
)
from .disorder import (
    DisorderSpec,
    LocalizationEstimate,
    localization_spectrum,
    power_iteration_inv_xi,
    realization_inv_xi,
    xi_vs_drive,
)
